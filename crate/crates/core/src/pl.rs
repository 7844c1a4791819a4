//! Continuous piecewise-linear maps given by exact knots.
//!
//! A circle map is stored through its lift `F : [0,1] -> R`, extended to all
//! of `R` by `F(x + 1) = F(x) + degree`. An interval map is a function
//! `[0,1] -> [0,1]`. Knot abscissae always start at 0 and end at 1.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rat, frac, int, Rat};
use crate::space::{floor_i64, SpaceKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlLift {
    kind: SpaceKind,
    knots: Vec<(Rat, Rat)>,
}

impl PlLift {
    pub fn new(kind: SpaceKind, knots: Vec<(Rat, Rat)>) -> Result<PlLift> {
        if knots.len() < 2 {
            return Err(Error::InvalidMap("piecewise-linear map needs at least two knots".into()));
        }
        if !knots[0].0.is_zero() || knots[knots.len() - 1].0 != int(1) {
            return Err(Error::InvalidMap("knot abscissae must run from 0 to 1".into()));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidMap("knot abscissae must be strictly increasing".into()));
        }
        match kind {
            SpaceKind::Circle => {
                let deg = &knots[knots.len() - 1].1 - &knots[0].1;
                if !deg.is_integer() {
                    return Err(Error::InvalidMap(format!(
                        "lift increment {} over one turn is not an integer",
                        format_rat(&deg)
                    )));
                }
            }
            SpaceKind::Interval => {
                if let Some((_, y)) = knots.iter().find(|(_, y)| y.is_negative() || y > &int(1)) {
                    return Err(Error::InvalidMap(format!("value {} leaves [0,1]", format_rat(y))));
                }
            }
        }
        Ok(PlLift { kind, knots }.normalized())
    }

    pub fn identity(kind: SpaceKind) -> PlLift {
        PlLift { kind, knots: vec![(int(0), int(0)), (int(1), int(1))] }
    }

    pub fn affine(kind: SpaceKind, slope: &Rat, offset: &Rat) -> Result<PlLift> {
        PlLift::new(kind, vec![(int(0), offset.clone()), (int(1), slope + offset)])
    }

    /// Shift the lift into `F(0) ∈ [0,1)` and drop collinear interior knots.
    fn normalized(mut self) -> PlLift {
        if self.kind == SpaceKind::Circle {
            let shift = self.knots[0].1.floor();
            if !shift.is_zero() {
                for k in &mut self.knots {
                    k.1 -= &shift;
                }
            }
        }
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(self.knots.len());
        for k in self.knots {
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                let collinear = (&b.1 - &a.1) * (&k.0 - &b.0) == (&k.1 - &b.1) * (&b.0 - &a.0);
                if collinear {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(k);
        }
        PlLift { kind: self.kind, knots: out }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn knots(&self) -> &[(Rat, Rat)] {
        &self.knots
    }

    /// Lift increment over one turn (circle); 0 on the interval.
    pub fn degree(&self) -> i64 {
        match self.kind {
            SpaceKind::Circle => {
                let d = &self.knots[self.knots.len() - 1].1 - &self.knots[0].1;
                floor_i64(&d)
            }
            SpaceKind::Interval => 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.knots.len() == 2 && self.knots[0] == (int(0), int(0)) && self.knots[1] == (int(1), int(1))
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rat> + '_ {
        self.knots.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
    }

    pub fn max_abs_slope(&self) -> Rat {
        self.slopes().map(|s| s.abs()).max().expect("at least one piece")
    }

    pub fn min_abs_slope(&self) -> Rat {
        self.slopes().map(|s| s.abs()).min().expect("at least one piece")
    }

    pub fn is_increasing(&self) -> bool {
        self.slopes().all(|s| s.is_positive())
    }

    pub fn is_decreasing(&self) -> bool {
        self.slopes().all(|s| s.is_negative())
    }

    /// Homeomorphism of the space: strictly monotone, of degree ±1 on the
    /// circle, onto `[0,1]` on the interval.
    pub fn is_homeomorphism(&self) -> bool {
        let monotone = self.is_increasing() || self.is_decreasing();
        match self.kind {
            SpaceKind::Circle => monotone && self.degree().abs() == 1,
            SpaceKind::Interval => {
                let ends = (&self.knots[0].1, &self.knots[self.knots.len() - 1].1);
                monotone && ((ends.0.is_zero() && ends.1 == &int(1)) || (ends.0 == &int(1) && ends.1.is_zero()))
            }
        }
    }

    /// Whether the map is onto the space.
    pub fn is_surjective(&self) -> bool {
        match self.kind {
            SpaceKind::Circle => self.degree() != 0 || {
                let (lo, hi) = self.image_interval(&int(0), &int(1));
                hi - lo >= int(1)
            },
            SpaceKind::Interval => {
                let (lo, hi) = self.image_interval(&int(0), &int(1));
                lo.is_zero() && hi == int(1)
            }
        }
    }

    fn eval_base(&self, t: &Rat) -> Rat {
        let idx = match self.knots.binary_search_by(|k| k.0.cmp(t)) {
            Ok(i) => return self.knots[i].1.clone(),
            Err(i) => i,
        };
        let (a, b) = (&self.knots[idx - 1], &self.knots[idx]);
        &a.1 + (t - &a.0) * (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    /// Value of the lift at any real `x` (circle) or at `x ∈ [0,1]`.
    pub fn eval_lift(&self, x: &Rat) -> Rat {
        match self.kind {
            SpaceKind::Interval => self.eval_base(x),
            SpaceKind::Circle => {
                let k = x.floor();
                let t = x - &k;
                self.eval_base(&t) + k * int(self.degree())
            }
        }
    }

    /// Value as a point of the space.
    pub fn eval(&self, x: &Rat) -> Rat {
        match self.kind {
            SpaceKind::Interval => self.eval_base(x),
            SpaceKind::Circle => frac(&self.eval_lift(x)),
        }
    }

    /// Lifted knot abscissae strictly inside `(lo, hi)`, in increasing order.
    pub fn knots_between(&self, lo: &Rat, hi: &Rat) -> Vec<Rat> {
        let mut out = Vec::new();
        match self.kind {
            SpaceKind::Interval => {
                out.extend(self.knots.iter().map(|k| k.0.clone()).filter(|x| lo < x && x < hi));
            }
            SpaceKind::Circle => {
                let (k0, k1) = (floor_i64(lo), floor_i64(hi));
                for k in k0..=k1 {
                    for (x, _) in &self.knots[..self.knots.len() - 1] {
                        let v = x + int(k);
                        if lo < &v && &v < hi {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out
    }

    /// `[min F, max F]` over the lifted interval `[lo, hi]`.
    pub fn image_interval(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        let mut min = self.eval_lift(lo);
        let mut max = min.clone();
        for x in self.knots_between(lo, hi).iter().chain(std::iter::once(hi)) {
            let y = self.eval_lift(x);
            if y < min {
                min = y;
            } else if y > max {
                max = y;
            }
        }
        (min, max)
    }

    /// First `u ∈ [lo, hi]` with `F(u) = w`.
    pub fn solve(&self, w: &Rat, lo: &Rat, hi: &Rat) -> Option<Rat> {
        let mut points = vec![lo.clone()];
        points.extend(self.knots_between(lo, hi));
        points.push(hi.clone());
        let mut prev_x = &points[0];
        let mut prev_y = self.eval_lift(prev_x);
        if &prev_y == w {
            return Some(prev_x.clone());
        }
        for x in &points[1..] {
            let y = self.eval_lift(x);
            let between = (&prev_y <= w && w <= &y) || (&y <= w && w <= &prev_y);
            if between && y != prev_y {
                return Some(prev_x + (w - &prev_y) * (x - prev_x) / (&y - &prev_y));
            }
            prev_x = x;
            prev_y = y;
        }
        None
    }

    /// Inverse of a homeomorphism.
    pub fn inverse(&self) -> Result<PlLift> {
        if !self.is_homeomorphism() {
            return Err(Error::NotInvertible("piecewise-linear map is not a homeomorphism".into()));
        }
        match self.kind {
            SpaceKind::Interval => {
                let mut knots: Vec<(Rat, Rat)> = self.knots.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
                knots.sort();
                PlLift::new(self.kind, knots)
            }
            SpaceKind::Circle => {
                let mut ys: Vec<Rat> = self.knots.iter().map(|(_, y)| frac(y)).collect();
                ys.push(int(0));
                ys.push(int(1));
                ys.sort();
                ys.dedup();
                let (lo, hi) = (int(-1), int(1));
                let knots = ys
                    .into_iter()
                    .map(|y| {
                        let u = self.solve(&y, &lo, &hi).expect("monotone degree ±1 lift attains every value on [-1,1]");
                        (y, u)
                    })
                    .collect();
                PlLift::new(self.kind, knots)
            }
        }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &PlLift, inner: &PlLift) -> Result<PlLift> {
        if outer.kind != inner.kind {
            return Err(Error::SpaceMismatch("cannot compose maps on different spaces".into()));
        }
        let mut xs: Vec<Rat> = inner.knots.iter().map(|k| k.0.clone()).collect();
        for w in inner.knots.windows(2) {
            let (x0, u) = (&w[0].0, &w[0].1);
            let (x1, v) = (&w[1].0, &w[1].1);
            if u == v {
                continue;
            }
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            for t in outer.knots_between(lo, hi) {
                xs.push(x0 + (&t - u) * (x1 - x0) / (v - u));
            }
        }
        xs.sort();
        xs.dedup();
        let knots = xs
            .into_iter()
            .map(|x| {
                let y = outer.eval_lift(&inner.eval_lift(&x));
                (x, y)
            })
            .collect();
        PlLift::new(outer.kind, knots)
    }
}

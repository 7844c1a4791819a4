//! Finite unions of closed arcs with exact rational endpoints.
//!
//! Canonical form: arcs are pairwise disjoint and non-touching, sorted by
//! left endpoint, each stored in lifted coordinates `lo <= hi`. On the
//! circle `0 <= lo < 1` and `hi - lo < 1`; an arc through 0 is one wrapping
//! arc with `hi >= 1`. The whole circle is a separate flag. Equal sets have
//! equal representations, so `==` is set equality.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, frac, half, int, parse_rat, Rat};
use crate::space::{Point, SpaceKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub lo: Rat,
    pub hi: Rat,
}

impl Arc {
    pub fn len(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn wraps(&self) -> bool {
        self.hi >= int(1) && !self.lo.is_zero()
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) * half()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcSet {
    kind: SpaceKind,
    full: bool,
    arcs: Vec<Arc>,
}

type Piece = (Rat, Rat);

impl ArcSet {
    pub fn empty(kind: SpaceKind) -> ArcSet {
        ArcSet { kind, full: false, arcs: Vec::new() }
    }

    pub fn full(kind: SpaceKind) -> ArcSet {
        match kind {
            SpaceKind::Circle => ArcSet { kind, full: true, arcs: Vec::new() },
            SpaceKind::Interval => ArcSet { kind, full: false, arcs: vec![Arc { lo: int(0), hi: int(1) }] },
        }
    }

    /// A single closed arc given in lifted coordinates. On the interval the
    /// arc is clipped to `[0,1]`.
    pub fn arc(kind: SpaceKind, lo: Rat, hi: Rat) -> ArcSet {
        ArcSet::from_lifted(kind, std::iter::once((lo, hi)))
    }

    /// Canonical set from arbitrary lifted closed intervals. Intervals with
    /// `lo > hi` are ignored; circle intervals of length at least 1 give the
    /// whole circle.
    pub fn from_lifted(kind: SpaceKind, intervals: impl IntoIterator<Item = Piece>) -> ArcSet {
        let mut pieces = Vec::new();
        for (lo, hi) in intervals {
            if lo > hi {
                continue;
            }
            match kind {
                SpaceKind::Interval => {
                    let lo = if lo.is_negative() { int(0) } else { lo };
                    let hi = if hi > int(1) { int(1) } else { hi };
                    if lo <= hi {
                        pieces.push((lo, hi));
                    }
                }
                SpaceKind::Circle => {
                    if &hi - &lo >= int(1) {
                        return ArcSet::full(kind);
                    }
                    split_lifted(lo, hi, &mut pieces);
                }
            }
        }
        ArcSet::from_pieces(kind, pieces)
    }

    fn from_pieces(kind: SpaceKind, pieces: Vec<Piece>) -> ArcSet {
        let mut merged = sorted_pieces(kind, pieces);
        if kind == SpaceKind::Circle && !merged.is_empty() {
            let first_at_zero = merged[0].0.is_zero();
            let last_at_one = merged[merged.len() - 1].1 == int(1);
            if first_at_zero && last_at_one {
                if merged.len() == 1 {
                    return ArcSet::full(kind);
                }
                let (l, _) = merged.pop().expect("non-empty");
                if l != int(1) {
                    let (_, h) = merged.remove(0);
                    merged.push((l, h + int(1)));
                }
            }
        }
        ArcSet {
            kind,
            full: false,
            arcs: merged.into_iter().map(|(lo, hi)| Arc { lo, hi }).collect(),
        }
    }

    /// Pieces inside `[0,1]` (wrapping arcs split), the export/sweep form.
    fn pieces(&self) -> Vec<Piece> {
        if self.full {
            return vec![(int(0), int(1))];
        }
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        for a in &self.arcs {
            match self.kind {
                SpaceKind::Interval => out.push((a.lo.clone(), a.hi.clone())),
                SpaceKind::Circle => split_lifted(a.lo.clone(), a.hi.clone(), &mut out),
            }
        }
        out
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arcs in lifted form, with the whole circle reported as `[0,1]`.
    pub fn lifted_arcs(&self) -> Vec<Arc> {
        if self.full {
            vec![Arc { lo: int(0), hi: int(1) }]
        } else {
            self.arcs.clone()
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.full && self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        match self.kind {
            SpaceKind::Circle => self.full,
            SpaceKind::Interval => self.arcs.len() == 1 && self.arcs[0].lo.is_zero() && self.arcs[0].hi == int(1),
        }
    }

    pub fn measure(&self) -> Rat {
        if self.full {
            return int(1);
        }
        self.arcs.iter().fold(Rat::zero(), |acc, a| acc + a.len())
    }

    fn same_kind(&self, other: &ArcSet) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::SpaceMismatch(format!("{} vs {}", self.kind.name(), other.kind.name())));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &ArcSet) -> Result<ArcSet> {
        self.same_kind(other)?;
        if self.full {
            return Ok(other.clone());
        }
        if other.full {
            return Ok(self.clone());
        }
        let a = sorted_pieces(self.kind, self.pieces());
        let b = sorted_pieces(self.kind, other.pieces());
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = if a[i].0 > b[j].0 { &a[i].0 } else { &b[j].0 };
            let hi = if a[i].1 < b[j].1 { &a[i].1 } else { &b[j].1 };
            if lo <= hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(ArcSet::from_pieces(self.kind, out))
    }

    pub fn union(&self, other: &ArcSet) -> Result<ArcSet> {
        self.same_kind(other)?;
        if self.full || other.full {
            return Ok(ArcSet::full(self.kind));
        }
        let mut p = self.pieces();
        p.extend(other.pieces());
        Ok(ArcSet::from_pieces(self.kind, p))
    }

    pub fn is_subset(&self, other: &ArcSet) -> Result<bool> {
        Ok(&self.intersect(other)? == self)
    }

    /// Rotation of a circle set by `t`.
    pub fn translate(&self, t: &Rat) -> Result<ArcSet> {
        if self.kind != SpaceKind::Circle {
            return Err(Error::SpaceMismatch("translate is defined on the circle only".into()));
        }
        if self.full {
            return Ok(self.clone());
        }
        Ok(ArcSet::from_lifted(self.kind, self.arcs.iter().map(|a| (&a.lo + t, &a.hi + t))))
    }

    /// Image under `x ↦ slope·x + offset` (mod 1 on the circle, applied to the
    /// lifted arcs). On the interval an image leaving `[0,1]` is an error.
    pub fn affine_image(&self, slope: &Rat, offset: &Rat) -> Result<ArcSet> {
        if slope.is_zero() {
            return Err(Error::ZeroSlope);
        }
        let images: Vec<Piece> = self
            .lifted_arcs()
            .iter()
            .map(|a| {
                let (x, y) = (slope * &a.lo + offset, slope * &a.hi + offset);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        if self.kind == SpaceKind::Interval {
            if let Some((lo, hi)) = images.iter().find(|(lo, hi)| lo.is_negative() || hi > &int(1)) {
                return Err(Error::OutOfSpace(format!("affine image [{}, {}]", format_rat(lo), format_rat(hi))));
            }
        }
        Ok(ArcSet::from_lifted(self.kind, images))
    }

    /// Leftmost endpoint of the first arc.
    pub fn sample_point(&self) -> Option<Point> {
        if self.full {
            return Some(Point::circle(int(0)));
        }
        self.arcs.first().map(|a| match self.kind {
            SpaceKind::Circle => Point::circle(a.lo.clone()),
            SpaceKind::Interval => Point::interval(a.lo.clone()).expect("arc inside [0,1]"),
        })
    }

    /// Midpoint of the first arc; an interior point whenever that arc is not
    /// degenerate.
    pub fn interior_sample(&self) -> Option<Point> {
        if self.full {
            return Some(Point::circle(int(0)));
        }
        self.arcs.first().map(|a| match self.kind {
            SpaceKind::Circle => Point::circle(a.midpoint()),
            SpaceKind::Interval => Point::interval(a.midpoint()).expect("arc inside [0,1]"),
        })
    }

    pub fn contains_value(&self, x: &Rat) -> bool {
        if self.full {
            return true;
        }
        match self.kind {
            SpaceKind::Interval => self.arcs.iter().any(|a| &a.lo <= x && x <= &a.hi),
            SpaceKind::Circle => {
                let x = frac(x);
                self.arcs.iter().any(|a| {
                    let t = frac(&(&x - &a.lo));
                    t <= a.len()
                })
            }
        }
    }

    /// Whether the whole enclosure `p` lies in one arc of the set.
    pub fn contains_point(&self, p: &Point) -> bool {
        self.arc_containing(p.lo(), p.hi()).is_some() || self.full
    }

    /// The arc containing the lifted interval `[lo, hi]`, returned with a lift
    /// shift `k` such that `[lo + k, hi + k]` sits inside `[arc.lo, arc.hi]`.
    pub fn arc_containing(&self, lo: &Rat, hi: &Rat) -> Option<(&Arc, Rat)> {
        match self.kind {
            SpaceKind::Interval => self.arcs.iter().find(|a| &a.lo <= lo && hi <= &a.hi).map(|a| (a, int(0))),
            SpaceKind::Circle => self.arcs.iter().find_map(|a| {
                let d = lo - &a.lo;
                let k = -d.floor();
                let t = &d + &k;
                (&t + (hi - lo) <= a.len()).then_some((a, k))
            }),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arcs: Vec<ArcJson> = if self.full {
            vec![ArcJson { arc: [format_rat(&int(0)), format_rat(&int(1))], wraps: false }]
        } else {
            self.arcs
                .iter()
                .map(|a| {
                    let wraps = self.kind == SpaceKind::Circle && a.hi >= int(1);
                    let right = if wraps { frac(&a.hi) } else { a.hi.clone() };
                    ArcJson { arc: [format_rat(&a.lo), format_rat(&right)], wraps }
                })
                .collect()
        };
        serde_json::to_value(arcs).expect("arc serialization")
    }

    pub fn from_json(kind: SpaceKind, value: &serde_json::Value) -> Result<ArcSet> {
        let arcs: Vec<ArcJson> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("arc set: {e}")))?;
        let mut lifted = Vec::new();
        for a in arcs {
            let lo = parse_rat(&a.arc[0])?;
            let mut hi = parse_rat(&a.arc[1])?;
            if a.wraps {
                if kind != SpaceKind::Circle {
                    return Err(Error::Parse("wrapping arc outside the circle".into()));
                }
                hi += int(1);
            } else if kind == SpaceKind::Circle && lo.is_zero() && hi == int(1) {
                return Ok(ArcSet::full(kind));
            }
            if lo > hi {
                return Err(Error::Parse("arc with left > right".into()));
            }
            lifted.push((lo, hi));
        }
        Ok(ArcSet::from_lifted(kind, lifted))
    }
}

#[derive(Serialize, Deserialize)]
struct ArcJson {
    arc: [String; 2],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    wraps: bool,
}

/// Sorted, merged pieces; on the circle a piece touching 0 or 1 also
/// touches the other end.
fn sorted_pieces(kind: SpaceKind, mut pieces: Vec<Piece>) -> Vec<Piece> {
    if kind == SpaceKind::Circle {
        let mut extra = Vec::new();
        for (lo, hi) in &pieces {
            if hi == &int(1) {
                extra.push((int(0), int(0)));
            }
            if lo.is_zero() {
                extra.push((int(1), int(1)));
            }
        }
        pieces.extend(extra);
    }
    pieces.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        if let Some(last) = merged.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        merged.push((lo, hi));
    }
    merged
}

fn split_lifted(lo: Rat, hi: Rat, out: &mut Vec<Piece>) {
    let shift = lo.floor();
    let l = lo - &shift;
    let h = hi - shift;
    if h <= int(1) {
        out.push((l, h));
    } else {
        out.push((l, int(1)));
        out.push((int(0), h - int(1)));
    }
}

/// Closed ball `{y : d(y, center) <= eps}` around an exact point. On the
/// circle a radius of at least 1/2 gives the whole circle.
pub fn closed_ball(center: &Point, eps: &Rat) -> Result<ArcSet> {
    if eps.is_negative() {
        return Err(Error::NegativeRadius);
    }
    let c = center.exact_value()?;
    let kind = center.kind();
    if kind == SpaceKind::Circle && eps >= &half() {
        return Ok(ArcSet::full(kind));
    }
    Ok(ArcSet::arc(kind, c - eps, c + eps))
}

/// Default relative shrink applied to strict radii.
pub fn default_margin() -> Rat {
    crate::rational::rat(1, 1_000_000_000)
}

/// Ball around `center`. `closed` selects `d <= eps`; otherwise the strict
/// ball `d < eps` is represented by the closed ball of radius
/// `eps·(1 - margin)`, which it contains.
pub fn ball(center: &Point, eps: &Rat, closed: bool) -> Result<ArcSet> {
    ball_with_margin(center, eps, closed, &default_margin())
}

pub fn ball_with_margin(center: &Point, eps: &Rat, closed: bool, margin: &Rat) -> Result<ArcSet> {
    if closed {
        closed_ball(center, eps)
    } else {
        if eps.is_negative() {
            return Err(Error::NegativeRadius);
        }
        closed_ball(center, &strict_radius(eps, margin))
    }
}

pub fn strict_radius(eps: &Rat, margin: &Rat) -> Rat {
    eps * (int(1) - margin)
}

impl PartialOrd for Arc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lo.cmp(&other.lo).then_with(|| self.hi.cmp(&other.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn circ(lo: (i64, i64), hi: (i64, i64)) -> ArcSet {
        ArcSet::arc(SpaceKind::Circle, rat(lo.0, lo.1), rat(hi.0, hi.1))
    }

    #[test]
    fn overlapping_arcs_intersect() {
        let a = ArcSet::arc(SpaceKind::Interval, int(0), rat(3, 10));
        let b = ArcSet::arc(SpaceKind::Interval, rat(1, 5), rat(1, 2));
        assert_eq!(a.intersect(&b).unwrap(), ArcSet::arc(SpaceKind::Interval, rat(1, 5), rat(3, 10)));
    }

    #[test]
    fn disjoint_arcs_have_empty_intersection() {
        let a = circ((0, 1), (1, 10));
        let b = circ((1, 2), (3, 5));
        assert!(a.intersect(&b).unwrap().is_empty());
    }

    #[test]
    fn translation_wraps_mod_one() {
        let a = circ((4, 5), (9, 10));
        assert_eq!(a.translate(&rat(3, 10)).unwrap(), circ((1, 10), (1, 5)));
    }

    #[test]
    fn big_ball_is_whole_circle() {
        let b = closed_ball(&Point::circle(int(0)), &rat(3, 5)).unwrap();
        assert!(b.is_full());
    }

    #[test]
    fn ball_near_one_is_single_wrapping_arc() {
        let b = closed_ball(&Point::circle(rat(9, 10)), &rat(1, 5)).unwrap();
        assert_eq!(b.arcs().len(), 1);
        assert_eq!(b.arcs()[0], Arc { lo: rat(7, 10), hi: rat(11, 10) });
        assert!(b.arcs()[0].wraps());
    }

    #[test]
    fn interval_ball_is_clipped() {
        let b = closed_ball(&Point::interval(int(0)).unwrap(), &rat(1, 10)).unwrap();
        assert_eq!(b, ArcSet::arc(SpaceKind::Interval, int(0), rat(1, 10)));
    }

    #[test]
    fn negative_radius_is_rejected() {
        assert_eq!(closed_ball(&Point::circle(int(0)), &rat(-1, 10)), Err(Error::NegativeRadius));
    }

    #[test]
    fn zero_is_shared_by_both_ends() {
        let left = circ((1, 2), (1, 1));
        let right = circ((0, 1), (1, 10));
        let i = left.intersect(&right).unwrap();
        assert_eq!(i, circ((0, 1), (0, 1)));
        let u = left.union(&right).unwrap();
        assert_eq!(u, circ((1, 2), (11, 10)));
        assert_eq!(circ((1, 2), (1, 1)).union(&circ((0, 1), (1, 2))).unwrap(), ArcSet::full(SpaceKind::Circle));
    }

    #[test]
    fn affine_image_requires_nonzero_slope() {
        let a = circ((0, 1), (1, 10));
        assert_eq!(a.affine_image(&int(0), &int(0)), Err(Error::ZeroSlope));
        let doubled = a.affine_image(&int(2), &rat(1, 2)).unwrap();
        assert_eq!(doubled, circ((1, 2), (7, 10)));
        assert!(circ((0, 1), (3, 5)).affine_image(&int(2), &int(0)).unwrap().is_full());
    }

    #[test]
    fn sample_point_is_leftmost_endpoint() {
        let a = circ((1, 2), (3, 5)).union(&circ((1, 10), (1, 5))).unwrap();
        assert_eq!(a.sample_point().unwrap(), Point::circle(rat(1, 10)));
        assert!(ArcSet::empty(SpaceKind::Circle).sample_point().is_none());
    }

    #[test]
    fn json_round_trip_keeps_wrapping_flag() {
        let a = circ((9, 10), (11, 10)).union(&circ((1, 2), (3, 5))).unwrap();
        let v = a.to_json();
        assert_eq!(v.to_string(), r#"[{"arc":["1/2","3/5"]},{"arc":["9/10","1/10"],"wraps":true}]"#);
        assert_eq!(ArcSet::from_json(SpaceKind::Circle, &v).unwrap(), a);
        let f = ArcSet::full(SpaceKind::Circle);
        assert_eq!(ArcSet::from_json(SpaceKind::Circle, &f.to_json()).unwrap(), f);
    }

    #[test]
    fn containment_of_enclosures() {
        let a = circ((9, 10), (11, 10));
        let p = Point::enclosure(SpaceKind::Circle, rat(19, 20), rat(21, 20)).unwrap();
        assert!(a.contains_point(&p));
        let q = Point::enclosure(SpaceKind::Circle, rat(1, 20), rat(3, 20)).unwrap();
        assert!(!a.contains_point(&q));
    }
}

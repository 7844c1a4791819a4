//! Distances between systems of homeomorphisms, connecting homeomorphisms,
//! perturbed systems and the cover-trace probe.

pub mod probe;
pub mod trace;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::ifs::{IFSystem, MapSpec};
use crate::pl::PlLift;
use crate::rational::{format_rat, frac, half, int, rat, Rat};
use crate::space::{circle_norm, Point, SpaceKind};

pub use probe::{genericity_probe, reconstruct, ProbeConfig, ProbeReport, Reconstruction};
pub use trace::{trace_family, OpenCover, TraceConfig, TraceFamily};

/// Orientation-preserving or reversing piecewise-linear homeomorphism of the
/// circle or the interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homeomorphism {
    lift: PlLift,
}

impl Homeomorphism {
    pub fn new(lift: PlLift) -> Result<Homeomorphism> {
        if !lift.is_homeomorphism() {
            return Err(Error::NotInvertible("breakpoints are not strictly monotone".into()));
        }
        Ok(Homeomorphism { lift })
    }

    pub fn from_knots(kind: SpaceKind, knots: Vec<(Rat, Rat)>) -> Result<Homeomorphism> {
        Homeomorphism::new(PlLift::new(kind, knots)?)
    }

    pub fn identity(kind: SpaceKind) -> Homeomorphism {
        Homeomorphism { lift: PlLift::identity(kind) }
    }

    pub fn rotation(t: &Rat) -> Homeomorphism {
        Homeomorphism { lift: PlLift::affine(SpaceKind::Circle, &int(1), t).expect("rotation lift") }
    }

    /// `x ↦ 1 − x`.
    pub fn reflection(kind: SpaceKind) -> Homeomorphism {
        Homeomorphism { lift: PlLift::affine(kind, &int(-1), &int(1)).expect("reflection lift") }
    }

    pub fn kind(&self) -> SpaceKind {
        self.lift.kind()
    }

    pub fn lift(&self) -> &PlLift {
        &self.lift
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        self.lift.knots()
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        self.lift.eval(x)
    }

    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        self.as_map().apply(p)
    }

    pub fn inverse(&self) -> Homeomorphism {
        Homeomorphism { lift: self.lift.inverse().expect("homeomorphisms invert") }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homeomorphism) -> Result<Homeomorphism> {
        Homeomorphism::new(PlLift::compose(&self.lift, &inner.lift)?)
    }

    pub fn as_map(&self) -> MapSpec {
        MapSpec::piecewise_linear(self.lift.clone())
    }

    pub fn is_increasing(&self) -> bool {
        self.lift.is_increasing()
    }

    pub fn max_slope(&self) -> Rat {
        self.lift.max_abs_slope()
    }

    /// `d_0(h, id)`.
    pub fn displacement(&self) -> Rat {
        d0(&self.as_map(), &MapSpec::identity(self.kind())).expect("exact homeomorphisms")
    }
}

/// `sup_x d(F(x), G(x))` for exact lifts.
fn sup_distance(f: &PlLift, g: &PlLift) -> Rat {
    let kind = f.kind();
    let mut xs: Vec<Rat> = f.knots().iter().chain(g.knots()).map(|k| k.0.clone()).collect();
    xs.sort();
    xs.dedup();
    let diff = |x: &Rat| f.eval_lift(x) - g.eval_lift(x);
    let mut best = Rat::zero();
    for w in xs.windows(2) {
        let (a, b) = (diff(&w[0]), diff(&w[1]));
        let piece = match kind {
            SpaceKind::Interval => {
                let (a, b) = (a.abs(), b.abs());
                if a > b {
                    a
                } else {
                    b
                }
            }
            SpaceKind::Circle => {
                let (lo, hi) = if a <= b { (&a, &b) } else { (&b, &a) };
                if (lo - half()).ceil() <= hi - half() {
                    half()
                } else {
                    let (x, y) = (circle_norm(lo), circle_norm(hi));
                    if x > y {
                        x
                    } else {
                        y
                    }
                }
            }
        };
        if piece > best {
            best = piece;
        }
    }
    best
}

/// `d_0(f, g) = max(sup d(f, g), sup d(f⁻¹, g⁻¹))`.
pub fn d0(f: &MapSpec, g: &MapSpec) -> Result<Rat> {
    if f.space() != g.space() {
        return Err(Error::SpaceMismatch("maps on different spaces".into()));
    }
    if !f.is_invertible() || !g.is_invertible() {
        return Err(Error::NotInvertible("d0 is defined on homeomorphisms".into()));
    }
    if let (Some(a), Some(b)) = (f.as_rotation(), g.as_rotation()) {
        if let Some(diff) = a.exact_difference(&b) {
            return Ok(circle_norm(&diff));
        }
    }
    let (Some(fl), Some(gl)) = (f.as_pl(), g.as_pl()) else {
        return Err(Error::NotExact("d0 needs exact maps or rotations with a common unknown angle".into()));
    };
    let fwd = sup_distance(fl, gl);
    let inv = sup_distance(&fl.inverse()?, &gl.inverse()?);
    Ok(if fwd > inv { fwd } else { inv })
}

/// `ρ(F, G) = max_λ d_0(f_λ, g_λ)`.
pub fn rho(f: &IFSystem, g: &IFSystem) -> Result<Rat> {
    if f.kind() != g.kind() {
        return Err(Error::SpaceMismatch("systems on different spaces".into()));
    }
    if f.len() != g.len() {
        return Err(Error::InvalidSystem("systems have different alphabets".into()));
    }
    let mut best = Rat::zero();
    for (a, b) in f.maps().iter().zip(g.maps()) {
        let d = d0(a, b)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Increasing degree-one circle lift through the lifted points `(x_i, y_i)`
/// (one period, strictly increasing in both coordinates).
fn circle_lift_through(points: &[(Rat, Rat)]) -> Result<PlLift> {
    let mut all: Vec<(Rat, Rat)> = Vec::with_capacity(points.len() * 3);
    for k in -1..=1 {
        let k = int(k);
        all.extend(points.iter().map(|(x, y)| (x + &k, y + &k)));
    }
    let eval = |t: &Rat| -> Rat {
        let i = all.iter().position(|(x, _)| x >= t).expect("points span a full period");
        let (x1, y1) = &all[i];
        if x1 == t {
            return y1.clone();
        }
        let (x0, y0) = &all[i - 1];
        y0 + (t - x0) * (y1 - y0) / (x1 - x0)
    };
    let y0 = eval(&int(0));
    let mut knots = vec![(int(0), y0.clone())];
    knots.extend(all.iter().filter(|(x, _)| x.is_positive() && x < &int(1)).cloned());
    knots.push((int(1), y0 + int(1)));
    PlLift::new(SpaceKind::Circle, knots)
}

/// Orientation-preserving PL homeomorphism `h` with `h(a_i) = b_i` and
/// `d_0(h, id) <= eps`. Between consecutive pairs `h` is the identity on
/// the middle third of the free gap whenever such a gap exists.
pub fn connecting_homeomorphism(kind: SpaceKind, pairs: &[(Point, Point)], eps: &Rat) -> Result<Homeomorphism> {
    let mut lifted: Vec<(Rat, Rat)> = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        if a.kind() != kind || b.kind() != kind {
            return Err(Error::SpaceMismatch("pair outside the space".into()));
        }
        let (a, b) = (a.exact_value()?.clone(), b.exact_value()?.clone());
        let d = match kind {
            SpaceKind::Interval => &b - &a,
            SpaceKind::Circle => {
                let d = frac(&(&b - &a));
                if d > half() {
                    d - int(1)
                } else {
                    d
                }
            }
        };
        if &d.abs() > eps {
            return Err(Error::Modulus { displacement: format_rat(&d.abs()), bound: format_rat(eps) });
        }
        let b_lift = &a + d;
        lifted.push((a, b_lift));
    }
    lifted.sort();
    for w in lifted.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return Err(Error::CyclicOrder(format!("source {} has two targets", format_rat(&w[0].0))));
        }
    }
    lifted.dedup();
    if kind == SpaceKind::Interval {
        for end in [int(0), int(1)] {
            if let Some((_, b)) = lifted.iter().find(|(a, _)| a == &end) {
                if b != &end {
                    return Err(Error::CyclicOrder("interval endpoints are fixed".into()));
                }
            }
        }
        if !lifted.iter().any(|(a, _)| a.is_zero()) {
            lifted.insert(0, (int(0), int(0)));
        }
        if !lifted.iter().any(|(a, _)| a == &int(1)) {
            lifted.push((int(1), int(1)));
        }
    }
    if lifted.is_empty() {
        return Ok(Homeomorphism::identity(kind));
    }
    let n = lifted.len();
    let next = |i: usize| -> (Rat, Rat) {
        if i + 1 < n {
            lifted[i + 1].clone()
        } else {
            (&lifted[0].0 + int(1), &lifted[0].1 + int(1))
        }
    };
    let segments = match kind {
        SpaceKind::Circle => n,
        SpaceKind::Interval => n - 1,
    };
    let mut knots: Vec<(Rat, Rat)> = Vec::with_capacity(3 * n);
    for i in 0..segments {
        let (a0, b0) = &lifted[i];
        let (a1, b1) = next(i);
        if b1 <= *b0 {
            return Err(Error::CyclicOrder(format!(
                "targets of {} and {} are out of order",
                format_rat(&frac(a0)),
                format_rat(&frac(&a1))
            )));
        }
        knots.push((a0.clone(), b0.clone()));
        let left = if a0 > b0 { a0 } else { b0 };
        let right = if a1 < b1 { &a1 } else { &b1 };
        if left < right {
            let third = (right - left) / int(3);
            let u1 = left + &third;
            let u2 = &u1 + &third;
            knots.push((u1.clone(), u1));
            knots.push((u2.clone(), u2));
        }
    }
    let lift = match kind {
        SpaceKind::Circle => circle_lift_through(&knots)?,
        SpaceKind::Interval => {
            knots.push(lifted[n - 1].clone());
            PlLift::new(kind, knots)?
        }
    };
    Homeomorphism::new(lift)
}

/// `G = {h ∘ f_λ}` together with an upper bound on `ρ(F, G)`:
/// `d(h f x, f x) <= d_0(h, id)` and
/// `d(f⁻¹ h⁻¹ y, f⁻¹ y) <= Lip(f⁻¹)·d_0(h, id)`.
pub fn perturb_system(f: &IFSystem, h: &Homeomorphism) -> Result<(IFSystem, Rat)> {
    if h.kind() != f.kind() {
        return Err(Error::SpaceMismatch("homeomorphism and system on different spaces".into()));
    }
    if !f.all_invertible() {
        return Err(Error::NotInvertible("perturbation needs a system of homeomorphisms".into()));
    }
    let hm = h.as_map();
    let maps = f.maps().iter().map(|m| MapSpec::compose(&hm, m)).collect::<Result<Vec<_>>>()?;
    let bound = h.displacement() * inverse_lipschitz(f);
    Ok((f.with_maps(maps)?, bound))
}

/// `max(1, max_λ Lip(f_λ⁻¹))`.
pub fn inverse_lipschitz(f: &IFSystem) -> Rat {
    f.maps()
        .iter()
        .map(|m| if m.lipschitz_lower().is_zero() { int(1) } else { int(1) / m.lipschitz_lower() })
        .fold(int(1), |acc, l| if l > acc { l } else { acc })
}

/// `τ` with `d(a, b) < τ ⇒ d(f⁻¹ a, f⁻¹ b) < γ/2` for every symbol.
pub fn tau_for(f: &IFSystem, gamma: &Rat) -> Rat {
    gamma / (int(2) * inverse_lipschitz(f))
}

/// Random PL homeomorphism with at most `moves` displaced points, each moved
/// by less than `max_disp` on the grid of pitch `1/grid`. Candidates that
/// break cyclic order are resampled.
pub fn random_homeomorphism<R: Rng>(kind: SpaceKind, rng: &mut R, max_disp: &Rat, moves: usize, grid: i64) -> Homeomorphism {
    if max_disp.is_zero() || moves == 0 {
        return Homeomorphism::identity(kind);
    }
    let steps = (max_disp * int(grid)).ceil().to_integer();
    let steps: i64 = num_traits::ToPrimitive::to_i64(&steps).unwrap_or(i64::MAX).max(1);
    for _ in 0..1000 {
        let m = rng.gen_range(1..=moves);
        let mut pairs = Vec::with_capacity(m);
        for _ in 0..m {
            let a = rat(rng.gen_range(1..grid), grid);
            let d = rat(rng.gen_range(-(steps - 1)..=(steps - 1)), grid);
            let b = &a + d;
            let on = |x: Rat| Point::on(kind, x);
            match (on(a), on(b)) {
                (Ok(a), Ok(b)) => pairs.push((a, b)),
                _ => continue,
            }
        }
        if let Ok(h) = connecting_homeomorphism(kind, &pairs, max_disp) {
            return h;
        }
    }
    Homeomorphism::identity(kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::Param;
    use crate::space::SpaceDescriptor;

    fn rotations(angles: Vec<Param>) -> IFSystem {
        IFSystem::numbered(SpaceDescriptor::circle(), angles.into_iter().map(MapSpec::rotation).collect()).unwrap()
    }

    #[test]
    fn rho_of_identical_systems_is_zero() {
        let f = rotations(vec![Param::Exact(rat(1, 4)), Param::Exact(rat(3, 4))]);
        assert_eq!(rho(&f, &f).unwrap(), int(0));
    }

    #[test]
    fn rotations_at_constant_offset() {
        let b = Param::enclosed(rat(61, 100), rat(62, 100)).unwrap();
        let f = MapSpec::rotation(b.clone());
        let g = MapSpec::rotation(b.plus(&rat(1, 10)));
        assert_eq!(d0(&f, &g).unwrap(), rat(1, 10));
    }

    #[test]
    fn rho_is_max_over_symbols() {
        let f = rotations(vec![Param::Exact(rat(1, 4)), Param::Exact(rat(3, 4))]);
        let g = rotations(vec![Param::Exact(rat(26, 100)), Param::Exact(rat(3, 4))]);
        assert_eq!(rho(&f, &g).unwrap(), rat(1, 100));
    }

    #[test]
    fn single_pair_bump() {
        let pairs = [(Point::circle(rat(1, 5)), Point::circle(rat(1, 4)))];
        let h = connecting_homeomorphism(SpaceKind::Circle, &pairs, &rat(1, 20)).unwrap();
        assert_eq!(h.apply(&rat(1, 5)), rat(1, 4));
        assert_eq!(h.displacement(), rat(1, 20));
        let inv = h.inverse();
        for (x, _) in h.breakpoints() {
            assert_eq!(inv.apply(&h.apply(x)), frac(x));
        }
    }

    #[test]
    fn fixed_pairs_give_identity() {
        let pairs = [(Point::circle(rat(1, 5)), Point::circle(rat(1, 5))), (Point::circle(rat(3, 5)), Point::circle(rat(3, 5)))];
        let h = connecting_homeomorphism(SpaceKind::Circle, &pairs, &rat(1, 20)).unwrap();
        assert_eq!(h, Homeomorphism::identity(SpaceKind::Circle));
    }

    #[test]
    fn order_reversal_is_rejected() {
        let pairs = [(Point::circle(rat(1, 10)), Point::circle(rat(1, 5))), (Point::circle(rat(15, 100)), Point::circle(rat(12, 100)))];
        assert!(matches!(connecting_homeomorphism(SpaceKind::Circle, &pairs, &rat(1, 5)), Err(Error::CyclicOrder(_))));
    }

    #[test]
    fn displacement_above_eps_is_rejected() {
        let pairs = [(Point::circle(rat(1, 10)), Point::circle(rat(1, 5)))];
        assert!(matches!(connecting_homeomorphism(SpaceKind::Circle, &pairs, &rat(1, 20)), Err(Error::Modulus { .. })));
    }

    #[test]
    fn wrapping_pairs_on_the_circle() {
        let pairs = [(Point::circle(rat(99, 100)), Point::circle(rat(1, 100))), (Point::circle(rat(1, 2)), Point::circle(rat(49, 100)))];
        let h = connecting_homeomorphism(SpaceKind::Circle, &pairs, &rat(1, 20)).unwrap();
        assert_eq!(h.apply(&rat(99, 100)), rat(1, 100));
        assert_eq!(h.apply(&rat(1, 2)), rat(49, 100));
        assert_eq!(h.displacement(), rat(1, 50));
    }

    #[test]
    fn interval_connection_fixes_endpoints() {
        let pairs = [(Point::interval(rat(1, 2)).unwrap(), Point::interval(rat(11, 20)).unwrap())];
        let h = connecting_homeomorphism(SpaceKind::Interval, &pairs, &rat(1, 10)).unwrap();
        assert_eq!(h.apply(&int(0)), int(0));
        assert_eq!(h.apply(&int(1)), int(1));
        assert_eq!(h.apply(&rat(1, 2)), rat(11, 20));
    }

    #[test]
    fn perturbing_by_a_rotation_adds_angles() {
        let f = rotations(vec![Param::Exact(rat(1, 7))]);
        let (g, bound) = perturb_system(&f, &Homeomorphism::rotation(&rat(1, 10))).unwrap();
        assert_eq!(g.maps()[0].as_rotation(), Some(Param::Exact(rat(17, 70))));
        assert_eq!(bound, rat(1, 10));
        let (same, zero) = perturb_system(&f, &Homeomorphism::identity(SpaceKind::Circle)).unwrap();
        assert_eq!(same.maps()[0].as_rotation(), Some(Param::Exact(rat(1, 7))));
        assert_eq!(zero, int(0));
        assert_eq!(rho(&f, &same).unwrap(), int(0));
    }

    #[test]
    fn random_homeomorphisms_respect_the_bound() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let h = random_homeomorphism(SpaceKind::Circle, &mut rng, &rat(1, 100), 3, 10_000);
            assert!(h.displacement() < rat(1, 100));
        }
    }
}

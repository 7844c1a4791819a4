//! Distinct-point perturbation of pseudo-orbits and truncation covers of
//! eventually periodic or rotation sequences.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ifs::{validate_pseudo_orbit, IFSystem, Param, PseudoOrbit};
use crate::rational::{format_rat, frac, int, min_rat, Rat};
use crate::space::{dist, Point, SpaceKind};

/// Moves each point of `pseudo` by less than `min(eps, δ/2)` so that all
/// points become pairwise distinct, keeping a `2δ`-pseudo-orbit.
///
/// With `b = min(eps, δ/2) / max(1, L)` for `L` the largest Lipschitz bound,
/// point `i` moves by `j·b/(N+2)` for the first admissible
/// `j ∈ 0, 1, −1, 2, −2, ...` not colliding with an earlier output point;
/// `|j| <= N+1` always suffices. Then `L|t_i| + |t_{i+1}| < δ`, which keeps
/// every step below `2δ`.
pub fn distinct_perturbation(system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat) -> Result<PseudoOrbit> {
    if !pseudo.delta.is_positive() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let lip = system.maps().iter().map(|m| m.lipschitz_upper().clone()).max().expect("non-empty alphabet");
    let lip = if lip < int(1) { int(1) } else { lip };
    let half_delta = &pseudo.delta / int(2);
    let budget = min_rat(eps, &half_delta) / lip;
    let n = pseudo.points.len();
    let unit = &budget / Rat::from_integer((n + 1).into());
    let kind = system.kind();

    let mut out: Vec<Point> = Vec::with_capacity(n);
    for x in &pseudo.points {
        let x = x.exact_value()?.clone();
        let chosen = (0..=(2 * n as i64))
            .map(|k| if k % 2 == 0 { -(k / 2) } else { (k + 1) / 2 })
            .filter_map(|j| {
                let v = &x + &unit * int(j);
                match kind {
                    SpaceKind::Circle => Some(Point::circle(v)),
                    SpaceKind::Interval => Point::interval(v).ok(),
                }
            })
            .find(|p| !out.contains(p))
            .expect("enough candidate offsets");
        out.push(chosen);
    }
    let delta2 = &pseudo.delta * int(2);
    match validate_pseudo_orbit(system, &out, &delta2)? {
        Some(witness) => Ok(PseudoOrbit { points: out, delta: delta2, witness, index_offset: pseudo.index_offset }),
        None => Err(Error::NotPseudoOrbit(format!("perturbed sequence is not a {}-pseudo-orbit", format_rat(&delta2)))),
    }
}

/// A finitely represented infinite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverSequence {
    /// `head · cycle^∞`.
    EventuallyPeriodic { head: Vec<Point>, cycle: Vec<Point> },
    /// `x_0, x_0 + θ, x_0 + 2θ, ...` on the circle. An exact `θ` gives a
    /// periodic sequence; an enclosed `θ` is treated as irrational.
    RotationOrbit { x0: Point, angle: Param, max_steps: usize },
}

/// Least `k` such that every point of the sequence lies within distance
/// `< eps` of one of its first `k + 1` points.
pub fn truncation_cover(seq: &CoverSequence, eps: &Rat) -> Result<usize> {
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    match seq {
        CoverSequence::EventuallyPeriodic { head, cycle } => {
            if cycle.is_empty() {
                return Err(Error::Precondition("cycle must be non-empty".into()));
            }
            let all: Vec<&Point> = head.iter().chain(cycle).collect();
            periodic_cover(&all, eps)
        }
        CoverSequence::RotationOrbit { x0, angle, max_steps } => {
            if x0.kind() != SpaceKind::Circle {
                return Err(Error::SpaceMismatch("rotation orbits live on the circle".into()));
            }
            let x = x0.exact_value()?.clone();
            match angle {
                Param::Exact(theta) => {
                    let period = frac(theta).denom().clone();
                    let period: usize = num_traits::ToPrimitive::to_usize(&period)
                        .filter(|&p| p <= *max_steps)
                        .ok_or_else(|| Error::Precondition("rotation period exceeds the step cap".into()))?;
                    let pts: Vec<Point> = (0..period).map(|j| Point::circle(&x + theta * int(j as i64))).collect();
                    periodic_cover(&pts.iter().collect::<Vec<_>>(), eps)
                }
                Param::Enclosed { .. } => dense_rotation_cover(&x, angle, eps, *max_steps),
            }
        }
    }
}

fn periodic_cover(all: &[&Point], eps: &Rat) -> Result<usize> {
    let mut distinct: Vec<&Point> = Vec::new();
    for p in all {
        if !distinct.contains(p) {
            distinct.push(p);
        }
    }
    // nearest[i] = distance from distinct[i] to the prefix seen so far
    let mut nearest: Vec<Option<Rat>> = vec![None; distinct.len()];
    for (k, p) in all.iter().enumerate() {
        for (i, q) in distinct.iter().enumerate() {
            let d = dist(p, q)?;
            if nearest[i].as_ref().is_none_or(|m| &d < m) {
                nearest[i] = Some(d);
            }
        }
        if nearest.iter().all(|m| m.as_ref().is_some_and(|m| m < eps)) {
            return Ok(k);
        }
    }
    unreachable!("every point is at distance 0 from itself once visited")
}

/// For a dense orbit, the prefix covers the sequence exactly when every gap
/// between circularly consecutive prefix points is below `2·eps`.
fn dense_rotation_cover(x0: &Rat, angle: &Param, eps: &Rat, max_steps: usize) -> Result<usize> {
    let (lo, hi) = angle.bounds();
    let two_eps = eps * int(2);
    let mut pts: Vec<(Rat, Rat)> = Vec::new();
    for k in 0..=max_steps {
        let j = int(k as i64);
        let a = x0 + &lo * &j;
        let shift = a.floor();
        pts.push((&a - &shift, x0 + &hi * &j - shift));
        if two_eps > int(1) {
            return Ok(k);
        }
        pts.sort();
        let mut all_below = true;
        let mut any_above = false;
        for i in 0..pts.len() {
            let (l0, h0) = &pts[i];
            let (l1, h1) = if i + 1 < pts.len() { (pts[i + 1].0.clone(), pts[i + 1].1.clone()) } else { (&pts[0].0 + int(1), &pts[0].1 + int(1)) };
            if pts.len() > 1 && &l1 <= h0 {
                return Err(Error::Imprecise(format!("orbit points {k} steps apart are not separated by the angle enclosure")));
            }
            let (gap_lo, gap_hi) = (&l1 - h0, &h1 - l0);
            if gap_hi >= two_eps {
                all_below = false;
            }
            if gap_lo >= two_eps {
                any_above = true;
            }
        }
        if all_below {
            return Ok(k);
        }
        if !any_above {
            return Err(Error::Imprecise("gap too close to 2·eps for the angle enclosure".into()));
        }
    }
    Err(Error::Precondition(format!("no cover within {max_steps} steps")))
}

/// Smallest pairwise distance among exact points, or `None` for fewer than
/// two points.
pub fn min_separation(points: &[Point]) -> Result<Option<Rat>> {
    let mut best: Option<Rat> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = dist(&points[i], &points[j])?;
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
    }
    Ok(best)
}

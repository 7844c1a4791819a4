//! Seeded random pseudo-orbits on rational grids.

use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ifs::{IFSystem, PseudoOrbit};
use crate::rational::{int, rat, Rat};
use crate::space::{Point, SpaceKind};

/// `x_{n+1} = f_{λ_n}(x_n) + u_n` with uniformly drawn symbols and kicks
/// `u_n ∈ (1/grid)·Z`, `|u_n| < delta`. On the interval the kicked point is
/// clamped to `[0, 1]`, which never increases its distance to the image.
pub fn random_pseudo_orbit<R: Rng>(system: &IFSystem, rng: &mut R, x0: Point, steps: usize, delta: &Rat, grid: i64) -> Result<PseudoOrbit> {
    if !system.is_exact() {
        return Err(Error::NotExact("random pseudo-orbits are drawn for exact systems".into()));
    }
    let reach = ((delta * int(grid)).ceil() - int(1)).to_integer().to_i64().unwrap_or(i64::MAX);
    let mut points = Vec::with_capacity(steps + 1);
    points.push(x0);
    for _ in 0..steps {
        let s = rng.gen_range(0..system.len());
        let image = system.map(s)?.apply(points.last().expect("non-empty"))?;
        let kick = if reach > 0 { rat(rng.gen_range(-reach..=reach), grid) } else { int(0) };
        let v = image.exact_value()? + kick;
        let next = match system.kind() {
            SpaceKind::Circle => Point::circle(v),
            SpaceKind::Interval => Point::interval(v.clamp(int(0), int(1)))?,
        };
        points.push(next);
    }
    PseudoOrbit::new(system, points, delta.clone())
}

/// A grid point drawn uniformly from the space.
pub fn random_point<R: Rng>(kind: SpaceKind, rng: &mut R, grid: i64) -> Point {
    let top = if kind == SpaceKind::Circle { grid - 1 } else { grid };
    Point::on(kind, rat(rng.gen_range(0..=top), grid)).expect("grid points lie in the space")
}

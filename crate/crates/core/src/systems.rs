//! Ready-made systems used by the CLI, the demo and the tests.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::Result;
use crate::ifs::{make_pseudo_orbit_from_generator, IFSystem, MapSpec, Param, PseudoOrbit};
use crate::rational::{int, rat, Rat};
use crate::shadowing::{check_weak_shadowing, rotation_dp_shadowing, SearchConfig, VerificationOutcome};
use crate::space::{Point, SpaceDescriptor, SpaceKind};

/// `{x/3, (x+2)/3}` on `[0,1]`.
pub fn cantor() -> IFSystem {
    let maps = vec![
        MapSpec::affine(SpaceKind::Interval, rat(1, 3), Param::Exact(int(0))).expect("valid map"),
        MapSpec::affine(SpaceKind::Interval, rat(1, 3), Param::Exact(rat(2, 3))).expect("valid map"),
    ];
    IFSystem::numbered(SpaceDescriptor::interval(), maps).expect("valid system")
}

/// `{2x mod 1}`.
pub fn doubling() -> IFSystem {
    let maps = vec![MapSpec::affine(SpaceKind::Circle, int(2), Param::Exact(int(0))).expect("valid map")];
    IFSystem::numbered(SpaceDescriptor::circle(), maps).expect("valid system")
}

/// `{2x mod 1, 2x + 1/2 mod 1}`.
pub fn doubling_pair() -> IFSystem {
    let maps = vec![
        MapSpec::affine(SpaceKind::Circle, int(2), Param::Exact(int(0))).expect("valid map"),
        MapSpec::affine(SpaceKind::Circle, int(2), Param::Exact(rat(1, 2))).expect("valid map"),
    ];
    IFSystem::numbered(SpaceDescriptor::circle(), maps).expect("valid system")
}

/// Two rotations `x + β` and `x + β + 1/2`.
pub fn half_offset_rotations(beta: Param) -> IFSystem {
    let second = beta.plus(&rat(1, 2));
    IFSystem::numbered(SpaceDescriptor::circle(), vec![MapSpec::rotation(beta), MapSpec::rotation(second)]).expect("valid system")
}

/// Consecutive Fibonacci numbers `(F_n, F_{n+1})`, starting from `(1, 1)`.
fn fibonacci_pairs() -> impl Iterator<Item = (BigInt, BigInt)> {
    std::iter::successors(Some((BigInt::from(1), BigInt::from(1))), |(a, b)| Some((b.clone(), a + b)))
}

/// Enclosure of `(√5 − 1)/2` between consecutive Fibonacci ratios
/// `F_n/F_{n+1}`, of width `1/(F_{n+1} F_{n+2})`, at most `max_width`.
pub fn golden_enclosure(max_width: &Rat) -> Param {
    let ratios = fibonacci_pairs().map(|(a, b)| Rat::new(a, b));
    let mut prev: Option<Rat> = None;
    for r in ratios {
        if let Some(p) = prev {
            if (&r - &p).abs() <= *max_width {
                let (lo, hi) = if p < r { (p, r) } else { (r, p) };
                return Param::enclosed(lo, hi).expect("lo < hi");
            }
        }
        prev = Some(r);
    }
    unreachable!("Fibonacci ratios converge")
}

/// Fibonacci ratios `F_n/F_{n+1}` (`1/2, 2/3, 3/5, ...`) approaching the
/// golden conjugate.
pub fn golden_convergents() -> impl Iterator<Item = Rat> {
    fibonacci_pairs().skip(1).map(|(a, b)| Rat::new(a, b))
}

/// First convergent provably within `< delta` of every value of `beta`.
pub fn first_convergent_within(beta: &Param, delta: &Rat) -> Rat {
    let (lo, hi) = beta.bounds();
    golden_convergents()
        .find(|c| {
            let a = (c - &lo).abs();
            let b = (c - &hi).abs();
            (if a > b { a } else { b }) < *delta
        })
        .expect("convergents approach the enclosure")
}

/// The default enclosure width for the golden rotation angle.
pub fn default_golden_width() -> Rat {
    rat(1, 1_000_000_000_000)
}

/// Counterexample system with `β_1` the golden conjugate at the default
/// precision.
pub fn golden_rotations() -> Result<IFSystem> {
    Ok(half_offset_rotations(golden_enclosure(&default_golden_width())))
}

/// Inputs of the golden rotation counterexample.
#[derive(Clone, Debug)]
pub struct CounterexampleParams {
    pub eps: Rat,
    pub delta: Rat,
    /// Angle of the generating rotation; defaults to the first golden
    /// convergent within `delta` of `β_1`.
    pub alpha: Option<Rat>,
    /// Length of the pseudo-orbit searched for shadowing.
    pub horizon: usize,
    /// Length of the orbit asked for by weak shadowing.
    pub weak_horizon: usize,
    /// Width of the enclosure of `β_1`.
    pub width: Rat,
    pub budget: u64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        CounterexampleParams {
            eps: rat(1, 5),
            delta: rat(1, 1000),
            alpha: None,
            horizon: 2000,
            weak_horizon: 100,
            width: default_golden_width(),
            budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CounterexampleRun {
    pub system: IFSystem,
    pub beta: Param,
    pub alpha: Rat,
    pub pseudo: PseudoOrbit,
    pub shadowing: VerificationOutcome,
    pub weak_shadowing: VerificationOutcome,
}

/// The orbit of `x ↦ x + α` from 0 as a pseudo-orbit of the half-offset
/// golden rotations, checked for shadowing (rotation-dp) and weak shadowing.
pub fn counterexample(p: &CounterexampleParams) -> Result<CounterexampleRun> {
    let beta = golden_enclosure(&p.width);
    let system = half_offset_rotations(beta.clone());
    let alpha = p.alpha.clone().unwrap_or_else(|| first_convergent_within(&beta, &p.delta));
    let generator = MapSpec::rotation(Param::Exact(alpha.clone()));
    let pseudo = make_pseudo_orbit_from_generator(&system, &generator, &Point::circle(int(0)), p.horizon, &p.delta)?;
    let cfg = SearchConfig { budget: p.budget, horizon: None, prune: true };
    let shadowing = rotation_dp_shadowing(&system, &pseudo, &p.eps, &cfg)?;
    let weak_cfg = SearchConfig { budget: p.budget, horizon: Some(p.weak_horizon), prune: true };
    let weak_shadowing = check_weak_shadowing(&system, &pseudo, &p.eps, &weak_cfg)?;
    Ok(CounterexampleRun { system, beta, alpha, pseudo, shadowing, weak_shadowing })
}

//! Perturbation trials comparing trace families, and the orbit-building
//! step that turns a pseudo-orbit into a genuine orbit of a nearby system.

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{validate_pseudo_orbit, IFSystem, PseudoOrbit, Symbol};
use crate::rational::{format_rat, int, Rat};
use crate::shadowing::{check_weak_shadowing, distinct_perturbation, revalidate_weak, Certificate, SearchConfig};
use crate::space::{dist, Point};

use super::trace::{trace_family, OpenCover, TraceConfig, TraceFamily};
use super::{connecting_homeomorphism, perturb_system, random_homeomorphism, rho, tau_for, Homeomorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub trials: usize,
    pub seed: u64,
    pub trace: TraceConfig,
    /// Largest number of displaced points per random homeomorphism.
    pub moves: usize,
    /// Denominator of the grid the displaced points are drawn from.
    pub grid: i64,
}

impl ProbeConfig {
    pub fn new(trials: usize, horizon: usize, seed: u64) -> ProbeConfig {
        ProbeConfig { trials, seed, trace: TraceConfig::new(horizon), moves: 4, grid: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub seed: u64,
    pub rho: String,
    /// Maximal sets of `J_F` missing from `J_G`.
    pub missing: Vec<Vec<usize>>,
    /// Maximal sets of `J_G` missing from `J_F`.
    pub extra: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub gamma: String,
    pub trials: usize,
    pub equal: usize,
    #[serde(rename = "F_subset_G")]
    pub f_subset_g: usize,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub reference: Option<TraceFamily>,
    #[serde(skip)]
    pub truncated: bool,
}

/// Draws `trials` systems `G = {h ∘ f_λ}` with `ρ(F, G) < γ` and compares
/// their trace families with that of `F`. Equality means no difference was
/// found at the configured horizon and budget.
pub fn genericity_probe(f: &IFSystem, cover: &OpenCover, gamma: &Rat, cfg: &ProbeConfig) -> Result<ProbeReport> {
    if !f.all_invertible() {
        return Err(Error::NotInvertible("the probe perturbs systems of homeomorphisms".into()));
    }
    if gamma < &int(0) {
        return Err(Error::Precondition("gamma must be non-negative".into()));
    }
    let jf = trace_family(f, cover, &cfg.trace)?;
    let tau = tau_for(f, gamma);

    let trial = |t: usize| -> Result<(bool, bool, Option<Violation>, bool)> {
        let seed = cfg.seed.wrapping_add(t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_homeomorphism(f.kind(), &mut rng, &tau, cfg.moves, cfg.grid);
        let (g, bound) = perturb_system(f, &h)?;
        let distance = match rho(f, &g) {
            Ok(r) => r,
            Err(Error::NotExact(_)) => bound,
            Err(e) => return Err(e),
        };
        if gamma.is_positive() && &distance >= gamma {
            return Err(Error::Precondition(format!("sampled system at distance {} is not within gamma", format_rat(&distance))));
        }
        let jg = trace_family(&g, cover, &cfg.trace)?;
        let subset = jf.is_subset(&jg);
        let equal = subset && jg.is_subset(&jf);
        let violation = (!equal).then(|| Violation {
            trial: t,
            seed,
            rho: format_rat(&distance),
            missing: sets_outside(&jf, &jg),
            extra: sets_outside(&jg, &jf),
        });
        Ok((equal, subset, violation, jg.truncated))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        (0..cfg.trials).into_par_iter().map(trial).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = (0..cfg.trials).map(trial).collect();

    let mut report = ProbeReport {
        gamma: format_rat(gamma),
        trials: cfg.trials,
        equal: 0,
        f_subset_g: 0,
        violations: Vec::new(),
        truncated: jf.truncated,
        reference: None,
    };
    for r in results {
        let (equal, subset, violation, truncated) = r?;
        report.equal += equal as usize;
        report.f_subset_g += subset as usize;
        report.violations.extend(violation);
        report.truncated |= truncated;
    }
    report.reference = Some(jf);
    Ok(report)
}

fn sets_outside(a: &TraceFamily, b: &TraceFamily) -> Vec<Vec<usize>> {
    let only: Vec<u64> = a.maximal().filter(|&m| !b.contains(m)).collect();
    TraceFamily::from_masks(a.k, only, a.horizon).maximal_sets()
}

/// A pseudo-orbit of `F` realised as a genuine orbit `z` of `G = {h ∘ f_λ}`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// Pairwise distinct `2δ`-pseudo-orbit near the input.
    pub y: PseudoOrbit,
    pub h: Homeomorphism,
    pub g: IFSystem,
    pub tau: Rat,
    pub rho: Rat,
    /// The orbit `z` of `G` (equal to `y` as a point sequence) and its word.
    pub z: Vec<Point>,
    pub word: Vec<Symbol>,
    /// `z` passes validation against `G` with `δ = 0`.
    pub orbit_ok: bool,
    /// `max_n d(z_n, x_n)`.
    pub z_distance: Rat,
    /// An orbit of `F` within `3ε` of the input's point set, when found.
    pub f_orbit: Option<Certificate>,
}

impl Reconstruction {
    /// `z` stays within `eps` of `x` index by index.
    pub fn z_within(&self, eps: &Rat) -> bool {
        &self.z_distance <= eps
    }

    /// The end-to-end containment: an orbit of `F` inside `B_{3ε}(x)`.
    pub fn contained(&self) -> bool {
        self.f_orbit.is_some()
    }
}

/// Builds the perturbed system from a `δ`-pseudo-orbit `x` with `δ < τ/2`,
/// `τ = tau_for(F, γ)`:
/// separate the points (`y`), connect `f_{λ_i}(y_i)` to `y_{i+1}` by a
/// homeomorphism `h` with `d_0(h, id) < τ`, and read `y` as an orbit of `G`.
/// Finally searches for an orbit of `F` in `B_{3ε}(x)`.
pub fn reconstruct(f: &IFSystem, x: &PseudoOrbit, eps: &Rat, gamma: &Rat) -> Result<Reconstruction> {
    if !f.is_exact() {
        return Err(Error::NotExact("reconstruction evaluates maps exactly".into()));
    }
    if !f.all_invertible() {
        return Err(Error::NotInvertible("reconstruction perturbs systems of homeomorphisms".into()));
    }
    let tau = tau_for(f, gamma);
    if x.delta.clone() * int(2) >= tau {
        return Err(Error::Precondition(format!(
            "delta {} is not below tau/2 = {}",
            format_rat(&x.delta),
            format_rat(&(&tau / int(2)))
        )));
    }
    let y = distinct_perturbation(f, x, eps)?;
    let mut pairs = Vec::with_capacity(y.steps());
    for (w, &s) in y.points.windows(2).zip(&y.witness) {
        pairs.push((f.map(s)?.apply(&w[0])?, w[1].clone()));
    }
    let h = connecting_homeomorphism(f.kind(), &pairs, &tau)?;
    let (g, _) = perturb_system(f, &h)?;
    let distance = rho(f, &g)?;

    let z = y.points.clone();
    let word = y.witness.clone();
    let orbit_ok = validate_pseudo_orbit(&g, &z, &int(0))?.is_some();
    let mut z_distance = int(0);
    for (a, b) in z.iter().zip(&x.points) {
        let d = dist(a, b)?;
        if d > z_distance {
            z_distance = d;
        }
    }
    let three_eps = eps * int(3);
    let search = check_weak_shadowing(f, x, &three_eps, &SearchConfig::default())?;
    let f_orbit = search.certificate.filter(|c| revalidate_weak(f, &x.points, &three_eps, c));
    Ok(Reconstruction { y, h, g, tau, rho: distance, z, word, orbit_ok, z_distance, f_orbit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{MapSpec, Param};
    use crate::rational::rat;
    use crate::space::{SpaceDescriptor, SpaceKind};

    fn identity_system() -> IFSystem {
        IFSystem::numbered(SpaceDescriptor::circle(), vec![MapSpec::identity(SpaceKind::Circle)]).unwrap()
    }

    fn quarters() -> OpenCover {
        OpenCover::uniform(SpaceKind::Circle, 4, &rat(1, 100), rat(3, 10)).unwrap()
    }

    fn small_trace() -> TraceConfig {
        TraceConfig { horizon: 4, budget: 200_000, net_eps: Some(rat(1, 100)) }
    }

    #[test]
    fn zero_gamma_leaves_the_system_alone() {
        let cfg = ProbeConfig { trace: small_trace(), ..ProbeConfig::new(3, 4, 1) };
        let rep = genericity_probe(&identity_system(), &quarters(), &int(0), &cfg).unwrap();
        assert_eq!((rep.equal, rep.f_subset_g, rep.violations.len()), (3, 3, 0));
    }

    #[test]
    fn identity_survives_small_perturbations() {
        let cfg = ProbeConfig { trace: small_trace(), ..ProbeConfig::new(5, 4, 11) };
        let rep = genericity_probe(&identity_system(), &quarters(), &rat(1, 1000), &cfg).unwrap();
        assert_eq!(rep.equal, 5, "{:?}", rep.violations);
    }

    #[test]
    fn report_json_shape() {
        let cfg = ProbeConfig { trace: small_trace(), ..ProbeConfig::new(1, 4, 0) };
        let rep = genericity_probe(&identity_system(), &quarters(), &int(0), &cfg).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(json, r#"{"gamma":"0/1","trials":1,"equal":1,"F_subset_G":1,"violations":[]}"#);
    }

    #[test]
    fn reconstruction_makes_the_pseudo_orbit_an_orbit() {
        let a = rat(13, 21);
        let f = IFSystem::numbered(
            SpaceDescriptor::circle(),
            vec![MapSpec::rotation(Param::Exact(a.clone())), MapSpec::rotation(Param::Exact(&a + rat(1, 2)))],
        )
        .unwrap();
        let delta = rat(1, 10_000);
        let mut pts = vec![Point::circle(int(0))];
        for n in 0..20i64 {
            let shift = if n % 3 == 0 { &a + rat(1, 2) } else { a.clone() };
            let kick = rat((n % 5) - 2, 30_000);
            pts.push(Point::circle(pts[n as usize].value().unwrap() + shift + kick));
        }
        let x = PseudoOrbit::new(&f, pts, delta).unwrap();
        let eps = rat(1, 20);
        let r = reconstruct(&f, &x, &eps, &rat(1, 1000)).unwrap();
        assert!(r.orbit_ok);
        assert!(r.rho < rat(1, 1000));
        assert!(r.z_within(&eps));
        assert!(r.contained());
        assert_eq!(r.word, x.witness);
    }

    #[test]
    fn reconstruction_needs_small_delta() {
        let f = IFSystem::numbered(SpaceDescriptor::circle(), vec![MapSpec::rotation(Param::Exact(rat(1, 3)))]).unwrap();
        let pts = vec![Point::circle(int(0)), Point::circle(rat(34, 100))];
        let x = PseudoOrbit::new(&f, pts, rat(1, 100)).unwrap();
        assert!(matches!(reconstruct(&f, &x, &rat(1, 10), &rat(1, 1000)), Err(Error::Precondition(_))));
    }
}

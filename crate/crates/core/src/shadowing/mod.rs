//! Finite-horizon shadowing and weak-shadowing verifiers.
//!
//! Both verifiers propagate feasible sets forward along symbol choices. Each
//! search state carries an outer set (everything that might be feasible) and
//! an inner set (points feasible for every admissible parameter value). An
//! empty outer set kills a branch soundly; a non-empty inner set at the
//! horizon yields a certificate. For exact systems the two coincide.

pub mod dp;
pub mod perturb;
pub mod search;

use num_traits::Zero;
use serde::Serialize;

use crate::arcset::ArcSet;
use crate::error::{Error, Result};
use crate::ifs::{IFSystem, MapSpec, PseudoOrbit, Symbol};
use crate::rational::Rat;
use crate::space::{dist_bounds, Point, SpaceKind};

pub use dp::rotation_dp_shadowing;
pub use perturb::{distinct_perturbation, truncation_cover, CoverSequence};
pub use search::{check_shadowing, check_weak_shadowing};

/// rotation-dp for systems of commuting rotations, branching search otherwise.
pub fn check_shadowing_auto(system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat, cfg: &SearchConfig) -> Result<VerificationOutcome> {
    if dp::rotation_residues(system).is_ok() {
        rotation_dp_shadowing(system, pseudo, eps, cfg)
    } else {
        check_shadowing(system, pseudo, eps, cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofMethod {
    ExactArcset,
    RotationDp,
    /// Reserved for map kinds without exact images; every map kind
    /// implemented here has exact piecewise-linear images.
    GridLipschitz,
}

impl ProofMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ProofMethod::ExactArcset => "exact-arcset",
            ProofMethod::RotationDp => "rotation-dp",
            ProofMethod::GridLipschitz => "grid-lipschitz",
        }
    }
}

/// An orbit segment with its word. Points may be enclosures; a genuine orbit
/// then runs through them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub word: Vec<Symbol>,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub verdict: Verdict,
    pub method: ProofMethod,
    /// Horizon of the question for certified/inconclusive verdicts; for a
    /// refutation, the first horizon at which no orbit survives.
    pub horizon: usize,
    pub epsilon: Rat,
    pub certificate: Option<Certificate>,
    pub resolution: Option<Rat>,
    pub nodes: u64,
}

impl VerificationOutcome {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of expanded search states.
    pub budget: u64,
    /// Length of the orbit asked for. Defaults to the number of pseudo-orbit
    /// steps; weak shadowing may ask for longer orbits.
    pub horizon: Option<usize>,
    /// Dominated-state pruning in the branching search.
    pub prune: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 1_000_000, horizon: None, prune: true }
    }
}

impl SearchConfig {
    pub fn with_horizon(horizon: usize) -> Self {
        SearchConfig { horizon: Some(horizon), ..SearchConfig::default() }
    }
}

/// Points within `eps` of every point of the enclosure `p` (inner) or of some
/// point of it (outer).
pub(crate) fn ball_pair(p: &Point, eps: &Rat) -> (ArcSet, ArcSet) {
    let kind = p.kind();
    let outer = ArcSet::arc(kind, p.lo() - eps, p.hi() + eps);
    let inner = ArcSet::arc(kind, p.hi() - eps, p.lo() + eps);
    (outer, inner)
}

/// Constraint sets `(outer, inner)` for each index of the searched orbit.
pub(crate) enum Constraints {
    PerIndex(Vec<(ArcSet, ArcSet)>),
    Uniform(ArcSet, ArcSet),
}

impl Constraints {
    pub(crate) fn shadowing(points: &[Point], eps: &Rat) -> Constraints {
        Constraints::PerIndex(points.iter().map(|p| ball_pair(p, eps)).collect())
    }

    pub(crate) fn weak(kind: SpaceKind, points: &[Point], eps: &Rat) -> Constraints {
        let balls: Vec<_> = points.iter().map(|p| ball_pair(p, eps)).collect();
        let union = |pick: fn(&(ArcSet, ArcSet)) -> &ArcSet| {
            balls.iter().fold(ArcSet::empty(kind), |acc, b| acc.union(pick(b)).expect("same space"))
        };
        Constraints::Uniform(union(|b| &b.0), union(|b| &b.1))
    }

    pub(crate) fn outer(&self, n: usize) -> &ArcSet {
        match self {
            Constraints::PerIndex(v) => &v[n].0,
            Constraints::Uniform(o, _) => o,
        }
    }

    pub(crate) fn inner(&self, n: usize) -> &ArcSet {
        match self {
            Constraints::PerIndex(v) => &v[n].1,
            Constraints::Uniform(_, i) => i,
        }
    }
}

/// Whether `next` is covered by the image of `y`: equality for exact data,
/// containment in the inner image otherwise.
pub fn orbit_step_ok(map: &MapSpec, y: &Point, next: &Point) -> bool {
    if y.is_exact() && map.is_exact() {
        return map.apply(y).map(|z| &z == next).unwrap_or(false);
    }
    match map.apply_inner(y) {
        Some((a, b)) => ArcSet::arc(map.space(), a, b).contains_point(next),
        None => false,
    }
}

fn certificate_is_orbit(system: &IFSystem, cert: &Certificate) -> bool {
    if cert.points.is_empty() || cert.word.len() + 1 != cert.points.len() {
        return false;
    }
    cert.points.windows(2).zip(&cert.word).all(|(w, &s)| match system.map(s) {
        Ok(m) => orbit_step_ok(m, &w[0], &w[1]),
        Err(_) => false,
    })
}

fn within(a: &Point, b: &Point, eps: &Rat) -> bool {
    dist_bounds(a, b).map(|(_, max)| &max <= eps).unwrap_or(false)
}

/// Independent re-check of a shadowing certificate: the points form an orbit
/// and stay within `eps` of the pseudo-orbit index by index.
pub fn revalidate_shadowing(system: &IFSystem, pseudo: &[Point], eps: &Rat, cert: &Certificate) -> bool {
    certificate_is_orbit(system, cert)
        && cert.points.len() <= pseudo.len()
        && cert.points.iter().zip(pseudo).all(|(y, x)| within(y, x, eps))
}

/// Independent re-check of a weak-shadowing certificate: the points form an
/// orbit and each lies within `eps` of some pseudo-orbit point.
pub fn revalidate_weak(system: &IFSystem, pseudo: &[Point], eps: &Rat, cert: &Certificate) -> bool {
    certificate_is_orbit(system, cert) && cert.points.iter().all(|y| pseudo.iter().any(|x| within(y, x, eps)))
}

pub(crate) fn check_inputs(system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat) -> Result<()> {
    if eps <= &Rat::zero() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    if pseudo.points.iter().any(|p| p.kind() != system.kind()) {
        return Err(Error::SpaceMismatch("pseudo-orbit and system live on different spaces".into()));
    }
    if !crate::ifs::check_witness(system, &pseudo.points, &pseudo.witness, &pseudo.delta)? {
        return Err(Error::NotPseudoOrbit("witness does not satisfy the delta condition".into()));
    }
    Ok(())
}

/// Follows inner sets backwards from a sample of `last` to build a
/// certificate. `sources[n]` is the inner set at index `n` along the chosen
/// path and `word[n]` the symbol applied to it.
pub(crate) fn pull_back_certificate(system: &IFSystem, sources: &[&ArcSet], word: &[Symbol], last: &ArcSet) -> Option<Certificate> {
    for arc in last.lifted_arcs() {
        let Ok(z) = Point::on(system.kind(), arc.midpoint()) else { continue };
        let mut points = vec![z];
        let mut ok = true;
        for (src, &s) in sources.iter().zip(word).rev() {
            let map = system.map(s).ok()?;
            match map.pullback(points.last().expect("non-empty"), src) {
                Some(x) => points.push(x),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            points.reverse();
            return Some(Certificate { word: word.to_vec(), points });
        }
    }
    None
}

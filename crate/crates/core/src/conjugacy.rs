//! Conjugate systems `g_λ = h ∘ f_λ ∘ h⁻¹` and the transport of shadowing
//! verdicts through `h`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::homogeneity::Homeomorphism;
use crate::ifs::{IFSystem, MapSpec, PseudoOrbit};
use crate::rational::{format_rat, Rat};
use crate::shadowing::{
    check_shadowing, check_weak_shadowing, revalidate_shadowing, revalidate_weak, Certificate, SearchConfig, Verdict,
    VerificationOutcome,
};

/// A conjugating homeomorphism with its slope bounds, which give exact
/// Lipschitz moduli of continuity for `h` and `h⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyMap {
    h: Homeomorphism,
    h_inv: Homeomorphism,
    lip: Rat,
    lip_inv: Rat,
}

impl ConjugacyMap {
    pub fn new(h: Homeomorphism) -> ConjugacyMap {
        let h_inv = h.inverse();
        let lip = h.max_slope();
        let lip_inv = h_inv.max_slope();
        ConjugacyMap { h, h_inv, lip, lip_inv }
    }

    pub fn h(&self) -> &Homeomorphism {
        &self.h
    }

    pub fn inverse(&self) -> ConjugacyMap {
        ConjugacyMap { h: self.h_inv.clone(), h_inv: self.h.clone(), lip: self.lip_inv.clone(), lip_inv: self.lip.clone() }
    }

    /// Largest slope of `h`.
    pub fn lipschitz(&self) -> &Rat {
        &self.lip
    }

    /// Largest slope of `h⁻¹`.
    pub fn inverse_lipschitz(&self) -> &Rat {
        &self.lip_inv
    }

    /// `t/L`: `d(a, b) < t/L ⇒ d(h a, h b) < t`.
    pub fn modulus_fwd(&self, t: &Rat) -> Rat {
        t / &self.lip
    }

    /// `t/L′`: `d(a, b) < t/L′ ⇒ d(h⁻¹ a, h⁻¹ b) < t`.
    pub fn modulus_inv(&self, t: &Rat) -> Rat {
        t / &self.lip_inv
    }

    pub fn is_isometry(&self) -> bool {
        self.lip == Rat::from_integer(1.into()) && self.lip_inv == Rat::from_integer(1.into())
    }
}

/// `G = {h ∘ f_λ ∘ h⁻¹}`.
pub fn conjugate(f: &IFSystem, c: &ConjugacyMap) -> Result<IFSystem> {
    if c.h.kind() != f.kind() {
        return Err(Error::SpaceMismatch("conjugacy and system on different spaces".into()));
    }
    let (h, h_inv) = (c.h.as_map(), c.h_inv.as_map());
    let maps = f
        .maps()
        .iter()
        .map(|m| MapSpec::compose(&h, &MapSpec::compose(m, &h_inv)?))
        .collect::<Result<Vec<_>>>()?;
    f.with_maps(maps)
}

/// `(ε₁, δ)` for a target `eps` and a given `δ₁`: orbits of `F` within `ε₁`
/// map to orbits of `G` within `eps`, and `δ`-pseudo-orbits of `G` pull back
/// to `δ₁`-pseudo-orbits of `F`.
pub fn transport_moduli(c: &ConjugacyMap, eps: &Rat, delta1: &Rat) -> Result<(Rat, Rat)> {
    if eps <= &Rat::zero() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    Ok((c.modulus_fwd(eps), c.modulus_inv(delta1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Shadowing,
    WeakShadowing,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Shadowing => "shadowing",
            Property::WeakShadowing => "weak-shadowing",
        }
    }
}

/// Verdict for `G` obtained by verification on `F`.
#[derive(Clone, Debug)]
pub struct Transported {
    pub outcome: VerificationOutcome,
    /// Tolerance used on `F` for certification, `eps/L`.
    pub eps_certify: Rat,
    /// Tolerance used on `F` for refutation, `L′·eps`.
    pub eps_refute: Rat,
    /// `δ` of the pulled-back pseudo-orbit, `L′·δ`.
    pub delta_f: Rat,
}

fn run(property: Property, system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat, cfg: &SearchConfig) -> Result<VerificationOutcome> {
    match property {
        Property::Shadowing => check_shadowing(system, pseudo, eps, cfg),
        Property::WeakShadowing => check_weak_shadowing(system, pseudo, eps, cfg),
    }
}

fn revalidate(property: Property, system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat, cert: &Certificate) -> bool {
    match property {
        Property::Shadowing => revalidate_shadowing(system, &pseudo.points, eps, cert),
        Property::WeakShadowing => revalidate_weak(system, &pseudo.points, eps, cert),
    }
}

/// Decides `property` for the pseudo-orbit `x` of `G = conjugate(F, c)` by
/// working on `F`: `x′ = h⁻¹(x)` is an `L′δ`-pseudo-orbit of `F`; a
/// certificate at `eps/L` is pushed forward through `h` and re-validated
/// against `G`; a refutation at `L′·eps` transfers to `G` at `eps`.
pub fn transport_verdict(
    f: &IFSystem,
    g: &IFSystem,
    c: &ConjugacyMap,
    x: &PseudoOrbit,
    eps: &Rat,
    property: Property,
    cfg: &SearchConfig,
) -> Result<Transported> {
    let expected = conjugate(f, c)?;
    if expected.maps() != g.maps() {
        let bad = expected.maps().iter().zip(g.maps()).position(|(a, b)| a != b).unwrap_or(0);
        return Err(Error::Conjugacy(format!("map {} of G is not h ∘ f ∘ h⁻¹", g.symbol_id(bad))));
    }
    let h_inv = c.h_inv.as_map();
    let pulled = x.points.iter().map(|p| h_inv.apply(p)).collect::<Result<Vec<_>>>()?;
    let delta_f = &x.delta * &c.lip_inv;
    let x_f = PseudoOrbit::new(f, pulled, delta_f.clone())?;
    let eps_certify = c.modulus_fwd(eps);
    let eps_refute = eps * &c.lip_inv;

    let mut outcome = run(property, f, &x_f, &eps_certify, cfg)?;
    outcome.epsilon = eps.clone();
    if let Some(cert) = outcome.certificate.take() {
        let h = c.h.as_map();
        let points = cert.points.iter().map(|p| h.apply(p)).collect::<Result<Vec<_>>>()?;
        let pushed = Certificate { word: cert.word, points };
        if revalidate(property, g, x, eps, &pushed) {
            outcome.certificate = Some(pushed);
        } else {
            outcome.verdict = Verdict::Inconclusive;
        }
        return Ok(Transported { outcome, eps_certify, eps_refute, delta_f });
    }
    if outcome.verdict == Verdict::Refuted && eps_refute == eps_certify {
        return Ok(Transported { outcome, eps_certify, eps_refute, delta_f });
    }
    let mut refute = run(property, f, &x_f, &eps_refute, cfg)?;
    refute.epsilon = eps.clone();
    if refute.verdict != Verdict::Refuted {
        refute.verdict = Verdict::Inconclusive;
        refute.certificate = None;
    }
    Ok(Transported { outcome: refute, eps_certify, eps_refute, delta_f })
}

/// Human-readable summary of the moduli used by a transport.
pub fn describe_moduli(t: &Transported) -> String {
    format!(
        "eps_certify={} eps_refute={} delta_f={}",
        format_rat(&t.eps_certify),
        format_rat(&t.eps_refute),
        format_rat(&t.delta_f)
    )
}

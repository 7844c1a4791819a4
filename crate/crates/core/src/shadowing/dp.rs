//! Dynamic program for systems of commuting circle rotations.
//!
//! With angles `θ_λ = θ_0 + r_λ` and rational `r_λ`, the position after `n`
//! steps is `y_0 + nθ_0 + Σ r_{λ_i}`, so only the residue of `q·Σ r_{λ_i}`
//! modulo the common denominator `q` matters. The state space is therefore
//! `horizon × q` instead of `|Λ|^horizon`.

use num_traits::ToPrimitive;

use crate::arcset::ArcSet;
use crate::error::{Error, Result};
use crate::ifs::{IFSystem, Param, PseudoOrbit, Symbol};
use crate::rational::{common_denominator, frac, Rat};

use super::{check_inputs, revalidate_shadowing, Certificate, Constraints, ProofMethod, SearchConfig, Verdict, VerificationOutcome};

/// Residue increment of each symbol and the modulus `q`.
pub fn rotation_residues(system: &IFSystem) -> Result<(Vec<usize>, usize)> {
    let angles: Vec<Param> = system
        .maps()
        .iter()
        .map(|m| m.as_rotation().ok_or_else(|| Error::Precondition("every map must be a circle rotation".into())))
        .collect::<Result<_>>()?;
    let diffs: Vec<Rat> = angles
        .iter()
        .map(|a| {
            a.exact_difference(&angles[0])
                .map(|d| frac(&d))
                .ok_or_else(|| Error::Precondition("rotation angle differences must be exact rationals".into()))
        })
        .collect::<Result<_>>()?;
    let q = common_denominator(&diffs);
    let q = q.to_usize().filter(|&q| q <= 1 << 20).ok_or_else(|| Error::Precondition("residue modulus too large".into()))?;
    let steps = diffs
        .iter()
        .map(|d| (d * Rat::from_integer(q.into())).to_integer().to_usize().expect("residue below q") % q)
        .collect();
    Ok((steps, q))
}

struct State {
    outer: ArcSet,
    inner: ArcSet,
    /// `(previous residue, symbol)` pairs that reach this state.
    preds: Vec<(usize, Symbol)>,
}

pub fn rotation_dp_shadowing(system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat, cfg: &SearchConfig) -> Result<VerificationOutcome> {
    check_inputs(system, pseudo, eps)?;
    let (steps, q) = rotation_residues(system)?;
    let horizon = cfg.horizon.unwrap_or(pseudo.steps());
    if horizon > pseudo.steps() {
        return Err(Error::Precondition(format!("horizon {horizon} exceeds the {} pseudo-orbit steps", pseudo.steps())));
    }
    let constraints = Constraints::shadowing(&pseudo.points[..=horizon], eps);
    let outcome = |verdict, horizon, certificate, nodes| VerificationOutcome {
        verdict,
        method: ProofMethod::RotationDp,
        horizon,
        epsilon: eps.clone(),
        certificate,
        resolution: None,
        nodes,
    };

    let kind = system.kind();
    let mut layers: Vec<Vec<Option<State>>> = Vec::with_capacity(horizon + 1);
    let root = State { outer: constraints.outer(0).clone(), inner: constraints.inner(0).clone(), preds: Vec::new() };
    if root.outer.is_empty() {
        return Ok(outcome(Verdict::Refuted, 0, None, 0));
    }
    let mut first: Vec<Option<State>> = (0..q).map(|_| None).collect();
    first[0] = Some(root);
    layers.push(first);
    let mut nodes: u64 = 0;

    for n in 0..horizon {
        let mut next: Vec<Option<State>> = (0..q).map(|_| None).collect();
        for (c, state) in layers[n].iter().enumerate() {
            let Some(state) = state else { continue };
            if nodes >= cfg.budget {
                return Ok(outcome(Verdict::Inconclusive, horizon, None, nodes));
            }
            nodes += 1;
            for (s, map) in system.maps().iter().enumerate() {
                let outer = map.image(&state.outer).intersect(constraints.outer(n + 1))?;
                if outer.is_empty() {
                    continue;
                }
                let inner = map.inner_image(&state.inner).intersect(constraints.inner(n + 1))?;
                let c2 = (c + steps[s]) % q;
                let slot = next[c2].get_or_insert_with(|| State { outer: ArcSet::empty(kind), inner: ArcSet::empty(kind), preds: Vec::new() });
                slot.outer = slot.outer.union(&outer)?;
                slot.inner = slot.inner.union(&inner)?;
                slot.preds.push((c, s));
            }
        }
        if next.iter().all(Option::is_none) {
            return Ok(outcome(Verdict::Refuted, n + 1, None, nodes));
        }
        layers.push(next);
    }
    nodes += layers[horizon].iter().flatten().count() as u64;

    for c in 0..q {
        let Some(state) = &layers[horizon][c] else { continue };
        if let Some(cert) = backtrack(system, &layers, horizon, c, &state.inner) {
            if revalidate_shadowing(system, &pseudo.points, eps, &cert) {
                return Ok(outcome(Verdict::Certified, horizon, Some(cert), nodes));
            }
        }
    }
    Ok(outcome(Verdict::Inconclusive, horizon, None, nodes))
}

fn backtrack(system: &IFSystem, layers: &[Vec<Option<State>>], horizon: usize, c: usize, last: &ArcSet) -> Option<Certificate> {
    'samples: for arc in last.lifted_arcs() {
        let Ok(z) = crate::space::Point::on(system.kind(), arc.midpoint()) else { continue };
        let mut points = vec![z];
        let mut word = Vec::with_capacity(horizon);
        let mut residue = c;
        for n in (1..=horizon).rev() {
            let state = layers[n][residue].as_ref().expect("reached state exists");
            let mut preds = state.preds.clone();
            preds.sort_by_key(|&(pc, s)| (s, pc));
            let z = points.last().expect("non-empty").clone();
            let found = preds.iter().find_map(|&(pc, s)| {
                let src = &layers[n - 1][pc].as_ref()?.inner;
                system.maps()[s].pullback(&z, src).map(|x| (x, pc, s))
            });
            match found {
                Some((x, pc, s)) => {
                    points.push(x);
                    word.push(s);
                    residue = pc;
                }
                None => continue 'samples,
            }
        }
        debug_assert_eq!(residue, 0);
        points.reverse();
        word.reverse();
        return Some(Certificate { word, points });
    }
    None
}

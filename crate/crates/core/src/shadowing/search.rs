//! Depth-first branching search over symbol words.

use crate::arcset::ArcSet;
use crate::error::{Error, Result};
use crate::ifs::{IFSystem, PseudoOrbit, Symbol};
use crate::rational::Rat;

use super::{
    check_inputs, pull_back_certificate, revalidate_shadowing, revalidate_weak, Certificate, Constraints, ProofMethod, SearchConfig,
    Verdict, VerificationOutcome,
};

/// Is there an orbit `y_0..y_N` with `d(x_n, y_n) <= eps` for every `n`?
pub fn check_shadowing(system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat, cfg: &SearchConfig) -> Result<VerificationOutcome> {
    check_inputs(system, pseudo, eps)?;
    let horizon = cfg.horizon.unwrap_or(pseudo.steps());
    if horizon > pseudo.steps() {
        return Err(Error::Precondition(format!("horizon {horizon} exceeds the {} pseudo-orbit steps", pseudo.steps())));
    }
    let constraints = Constraints::shadowing(&pseudo.points[..=horizon], eps);
    let check = |c: &Certificate| revalidate_shadowing(system, &pseudo.points, eps, c);
    Ok(branching_search(system, &constraints, horizon, eps, cfg, &check))
}

/// Is there an orbit of length `N` inside the `eps`-neighbourhood of the
/// pseudo-orbit's point set?
pub fn check_weak_shadowing(system: &IFSystem, pseudo: &PseudoOrbit, eps: &Rat, cfg: &SearchConfig) -> Result<VerificationOutcome> {
    check_inputs(system, pseudo, eps)?;
    let horizon = cfg.horizon.unwrap_or(pseudo.steps());
    let constraints = Constraints::weak(system.kind(), &pseudo.points, eps);
    let check = |c: &Certificate| revalidate_weak(system, &pseudo.points, eps, c);
    Ok(branching_search(system, &constraints, horizon, eps, cfg, &check))
}

struct Frame {
    outer: ArcSet,
    inner: ArcSet,
    next_symbol: Symbol,
}

fn branching_search(
    system: &IFSystem,
    constraints: &Constraints,
    horizon: usize,
    eps: &Rat,
    cfg: &SearchConfig,
    check: &dyn Fn(&Certificate) -> bool,
) -> VerificationOutcome {
    let outcome = |verdict, horizon, certificate, nodes| VerificationOutcome {
        verdict,
        method: ProofMethod::ExactArcset,
        horizon,
        epsilon: eps.clone(),
        certificate,
        resolution: None,
        nodes,
    };
    let root_outer = constraints.outer(0).clone();
    if root_outer.is_empty() {
        return outcome(Verdict::Refuted, 0, None, 0);
    }
    let mut stack = vec![Frame { outer: root_outer, inner: constraints.inner(0).clone(), next_symbol: 0 }];
    let mut word: Vec<Symbol> = Vec::new();
    let mut seen: Vec<Vec<(ArcSet, ArcSet)>> = vec![Vec::new(); horizon + 1];
    let mut nodes: u64 = 1;
    let mut deepest = 0;
    let mut undecided = false;

    while !stack.is_empty() {
        let depth = stack.len() - 1;
        let top = stack.last_mut().expect("non-empty");
        if depth == horizon || top.next_symbol == system.len() {
            if depth == horizon {
                if !top.inner.is_empty() {
                    let sources: Vec<&ArcSet> = stack[..horizon].iter().map(|f| &f.inner).collect();
                    let last = &stack[horizon].inner;
                    if let Some(cert) = pull_back_certificate(system, &sources, &word, last) {
                        if check(&cert) {
                            return outcome(Verdict::Certified, horizon, Some(cert), nodes);
                        }
                    }
                }
                undecided = true;
            }
            stack.pop();
            word.pop();
            continue;
        }
        let s = top.next_symbol;
        top.next_symbol += 1;
        let map = system.map(s).expect("symbol in range");
        let outer = map.image(&top.outer).intersect(constraints.outer(depth + 1)).expect("same space");
        if outer.is_empty() {
            continue;
        }
        let inner = if top.inner.is_empty() {
            top.inner.clone()
        } else {
            map.inner_image(&top.inner).intersect(constraints.inner(depth + 1)).expect("same space")
        };
        if cfg.prune && seen[depth + 1].iter().any(|(o, i)| is_subset(&outer, o) && is_subset(&inner, i)) {
            continue;
        }
        if nodes >= cfg.budget {
            return outcome(Verdict::Inconclusive, horizon, None, nodes);
        }
        nodes += 1;
        deepest = deepest.max(depth + 1);
        if cfg.prune {
            seen[depth + 1].push((outer.clone(), inner.clone()));
        }
        stack.push(Frame { outer, inner, next_symbol: 0 });
        word.push(s);
    }
    if undecided {
        outcome(Verdict::Inconclusive, horizon, None, nodes)
    } else {
        outcome(Verdict::Refuted, deepest + 1, None, nodes)
    }
}

fn is_subset(a: &ArcSet, b: &ArcSet) -> bool {
    a.is_subset(b).expect("same space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{orbit, MapSpec, Param, SymbolWord};
    use crate::rational::{int, rat};
    use crate::space::{Point, SpaceDescriptor, SpaceKind};

    fn rotation_system(angles: &[Rat]) -> IFSystem {
        IFSystem::numbered(SpaceDescriptor::circle(), angles.iter().map(|a| MapSpec::rotation(Param::Exact(a.clone()))).collect()).unwrap()
    }

    #[test]
    fn exact_orbit_certifies_itself() {
        let sys = rotation_system(&[rat(1, 7), rat(2, 7)]);
        let o = orbit(&sys, &SymbolWord::periodic(vec![], vec![1, 0]).unwrap(), &Point::circle(rat(1, 3)), 10).unwrap();
        let pseudo = PseudoOrbit::new(&sys, o.points.clone(), rat(1, 100)).unwrap();
        let out = check_shadowing(&sys, &pseudo, &rat(1, 10), &SearchConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Certified);
        let cert = out.certificate.unwrap();
        assert!(revalidate_shadowing(&sys, &pseudo.points, &rat(1, 10), &cert));
    }

    #[test]
    fn half_rotation_weak_refutation() {
        let sys = rotation_system(&[rat(1, 2)]);
        let pts = vec![Point::circle(int(0)), Point::circle(rat(69, 100))];
        let pseudo = PseudoOrbit::new(&sys, pts, rat(1, 5)).unwrap();
        let cfg = SearchConfig::with_horizon(2);
        let out = check_weak_shadowing(&sys, &pseudo, &rat(1, 20), &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Refuted);
    }

    #[test]
    fn covering_balls_certify_weak_shadowing() {
        let sys = rotation_system(&[rat(1, 3)]);
        let pts = vec![Point::circle(int(0)), Point::circle(rat(1, 3)), Point::circle(rat(2, 3))];
        let pseudo = PseudoOrbit::new(&sys, pts, rat(1, 100)).unwrap();
        let cfg = SearchConfig::with_horizon(25);
        let out = check_weak_shadowing(&sys, &pseudo, &rat(1, 5), &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Certified);
        assert_eq!(out.certificate.unwrap().points.len(), 26);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let sys = rotation_system(&[rat(1, 7), rat(2, 7)]);
        let o = orbit(&sys, &SymbolWord::constant(1), &Point::circle(int(0)), 6).unwrap();
        let pseudo = PseudoOrbit::new(&sys, o.points, rat(1, 100)).unwrap();
        let cfg = SearchConfig { budget: 3, ..SearchConfig::default() };
        let out = check_shadowing(&sys, &pseudo, &rat(1, 10), &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn interval_contraction_certifies() {
        let maps = vec![
            MapSpec::affine(SpaceKind::Interval, rat(1, 3), Param::Exact(int(0))).unwrap(),
            MapSpec::affine(SpaceKind::Interval, rat(1, 3), Param::Exact(rat(2, 3))).unwrap(),
        ];
        let sys = IFSystem::numbered(SpaceDescriptor::interval(), maps).unwrap();
        let pts: Vec<Point> = [rat(1, 2), rat(17, 100), rat(71, 100), rat(23, 100)].into_iter().map(|x| Point::interval(x).unwrap()).collect();
        let pseudo = PseudoOrbit::new(&sys, pts, rat(1, 30)).unwrap();
        let out = check_shadowing(&sys, &pseudo, &rat(1, 20), &SearchConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Certified);
        assert_eq!(out.certificate.unwrap().word, vec![0, 1, 0]);
    }
}

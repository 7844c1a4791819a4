//! Browser bindings: the golden rotation counterexample, seeded pseudo-orbit
//! sampling and shadowing checks on JSON descriptors. Every function returns
//! the same JSON the command-line tool writes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

use shadowlab::descriptor::{parse_pseudo_orbit, parse_system, PseudoOrbitJson};
use shadowlab::rational::parse_rat;
use shadowlab::report::{json, CounterexampleReport, VerdictReport};
use shadowlab::sample::random_pseudo_orbit;
use shadowlab::shadowing::{check_shadowing_auto, check_weak_shadowing, SearchConfig};
use shadowlab::space::Point;
use shadowlab::systems::{self, CounterexampleParams};
use shadowlab::Rat;

const BUDGET: u64 = 200_000;

fn rational(name: &str, s: &str) -> Result<Rat, String> {
    parse_rat(s.trim()).map_err(|e| format!("{name}: {e}"))
}

/// Runs the counterexample. An empty `alpha` picks the first golden
/// convergent within `delta`.
pub fn counterexample_report(alpha: &str, delta: &str, eps: &str, horizon: usize) -> Result<String, String> {
    let params = CounterexampleParams {
        eps: rational("eps", eps)?,
        delta: rational("delta", delta)?,
        alpha: if alpha.trim().is_empty() { None } else { Some(rational("alpha", alpha)?) },
        horizon,
        budget: BUDGET * 10,
        ..CounterexampleParams::default()
    };
    let run = systems::counterexample(&params).map_err(|e| e.to_string())?;
    Ok(json(&CounterexampleReport::new(&run)))
}

/// A seeded random `delta`-pseudo-orbit of the system, as a descriptor.
pub fn simulate_report(system: &str, x0: &str, steps: usize, delta: &str, seed: u64) -> Result<String, String> {
    let system = parse_system(system).map_err(|e| e.to_string())?;
    let x0 = Point::on(system.kind(), rational("x0", x0)?).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pseudo = random_pseudo_orbit(&system, &mut rng, x0, steps, &rational("delta", delta)?, 100_000).map_err(|e| e.to_string())?;
    Ok(json(&PseudoOrbitJson::describe(&pseudo)))
}

/// Shadowing (or weak shadowing) verdict for a pseudo-orbit descriptor.
pub fn check_report(system: &str, pseudo: &str, eps: &str, weak: bool) -> Result<String, String> {
    let system = parse_system(system).map_err(|e| e.to_string())?;
    let pseudo = parse_pseudo_orbit(pseudo, &system).map_err(|e| e.to_string())?;
    let eps = rational("eps", eps)?;
    let cfg = SearchConfig { budget: BUDGET, ..SearchConfig::default() };
    let outcome = if weak { check_weak_shadowing(&system, &pseudo, &eps, &cfg) } else { check_shadowing_auto(&system, &pseudo, &eps, &cfg) }
        .map_err(|e| e.to_string())?;
    Ok(json(&VerdictReport::new(&system, &outcome)))
}

#[wasm_bindgen]
pub fn counterexample(alpha: &str, delta: &str, eps: &str, horizon: usize) -> Result<String, JsError> {
    counterexample_report(alpha, delta, eps, horizon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(system: &str, x0: &str, steps: usize, delta: &str, seed: u32) -> Result<String, JsError> {
    simulate_report(system, x0, steps, delta, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check(system: &str, pseudo: &str, eps: &str, weak: bool) -> Result<String, JsError> {
    check_report(system, pseudo, eps, weak).map_err(|e| JsError::new(&e))
}

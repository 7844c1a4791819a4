//! The `shadowlab` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjugacy::{conjugate, describe_moduli, transport_verdict, ConjugacyMap, Property};
use crate::descriptor::{parse_conjugacy, parse_pseudo_orbit, parse_system, PseudoOrbitJson, SystemJson};
use crate::error::Error;
use crate::homogeneity::{genericity_probe, OpenCover, ProbeConfig, TraceConfig};
use crate::ifs::{orbit, ratios, validate_pseudo_orbit, IFSystem, PseudoOrbit, SymbolWord};
use crate::rational::{format_rat, int, parse_rat, Rat};
use crate::report::{json, ratio_csv, CounterexampleReport, RatioRow, VerdictReport};
use crate::sample::random_pseudo_orbit;
use crate::shadowing::{
    check_shadowing, check_shadowing_auto, check_weak_shadowing, rotation_dp_shadowing, SearchConfig, Verdict, VerificationOutcome,
};
use crate::space::Point;
use crate::systems::{self, CounterexampleParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "shadowlab", version, about = "Shadowing and weak shadowing for iterated function systems on the circle and the interval")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    /// rotation-dp for systems of commuting rotations, branching search otherwise.
    Auto,
    Branching,
    RotationDp,
}

#[derive(Debug, Args, Clone)]
pub struct Check {
    /// System descriptor.
    #[arg(long)]
    pub system: PathBuf,
    /// Pseudo-orbit descriptor.
    #[arg(long)]
    pub pseudo: PathBuf,
    /// Shadowing tolerance.
    #[arg(long)]
    pub eps: String,
    /// Override the descriptor's delta.
    #[arg(long)]
    pub delta: Option<String>,
    /// Orbit length asked for; defaults to the pseudo-orbit length.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Maximum number of search states.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an orbit, or a seeded random pseudo-orbit when --delta is given.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Symbol ids repeated cyclically; defaults to the first symbol.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        word: Vec<String>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Denominator of the kick grid.
        #[arg(long, default_value_t = 100_000)]
        grid: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the pseudo-orbit condition and report the least witness word.
    Validate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        pseudo: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is there an orbit within eps of the pseudo-orbit, index by index?
    CheckShadowing(Check),
    /// Is there an orbit inside the eps-neighbourhood of the pseudo-orbit's
    /// point set?
    CheckWeakShadowing(Check),
    /// Two golden-angle rotations half a turn apart: shadowing fails for a
    /// rotation pseudo-orbit while weak shadowing holds.
    Counterexample {
        #[arg(long, default_value = "1/5")]
        eps: String,
        #[arg(long, default_value = "1/1000")]
        delta: String,
        /// Pseudo-orbit rotation angle; defaults to the first Fibonacci
        /// ratio within delta of the golden angle.
        #[arg(long)]
        alpha: Option<String>,
        /// Pseudo-orbit length for the shadowing check.
        #[arg(long, default_value_t = 2000)]
        horizon: usize,
        /// Orbit length asked for by weak shadowing.
        #[arg(long, default_value_t = 100)]
        weak_horizon: usize,
        /// Width of the golden-angle enclosure.
        #[arg(long, default_value = "1/1000000000000")]
        width: String,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contraction and expansion ratios of one or more systems.
    Ratios {
        #[arg(long, num_args = 1.., required = true)]
        system: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare trace families of random nearby systems with the system's own.
    ProbeGenericity {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value = "1/1000")]
        gamma: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        #[arg(long)]
        seed: u64,
        /// Number of cover arcs.
        #[arg(long, default_value_t = 4)]
        arcs: usize,
        /// Extra half-width of each arc beyond 1/(2·arcs).
        #[arg(long, default_value = "1/100")]
        overlap: String,
        /// Diameter bound of the cover.
        #[arg(long, default_value = "3/10")]
        eps: String,
        /// Pitch of the net of initial points.
        #[arg(long)]
        net: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a property for h ∘ F ∘ h⁻¹ by working on F.
    Transport {
        /// System F.
        #[arg(long)]
        system: PathBuf,
        /// Conjugacy descriptor of h.
        #[arg(long)]
        conjugacy: PathBuf,
        /// Pseudo-orbit of the conjugated system.
        #[arg(long)]
        pseudo: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        weak: bool,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Precondition(_) | Error::SpaceMismatch(_) | Error::UnknownSymbol(_) | Error::WordExhausted(_) => EXIT_USAGE,
            Error::Imprecise(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_DATA,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: EXIT_DATA, message: format!("cannot read {}: {e}", path.display()) })
}

fn write(out: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure { code: EXIT_IO, message: format!("cannot write {}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rational(name: &str, s: &str) -> std::result::Result<Rat, Failure> {
    parse_rat(s).map_err(|e| Failure { code: EXIT_USAGE, message: format!("--{name}: {e}") })
}

fn load_system(path: &Path) -> std::result::Result<IFSystem, Failure> {
    Ok(parse_system(&read(path)?)?)
}

fn load_pseudo(path: &Path, system: &IFSystem, delta: Option<&str>) -> std::result::Result<PseudoOrbit, Failure> {
    let text = read(path)?;
    let mut p = parse_pseudo_orbit(&text, system)?;
    if let Some(d) = delta {
        p = PseudoOrbit::new(system, p.points, rational("delta", d)?)?;
    }
    Ok(p)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::Refuted => EXIT_REFUTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn emit_verdict(system: &IFSystem, outcome: &VerificationOutcome, output: &Output) -> Outcome {
    let rep = VerdictReport::new(system, outcome);
    let text = match output.format {
        FormatArg::Json => json(&rep),
        FormatArg::Csv => rep.csv(),
    };
    write(output.out.as_deref(), &text)?;
    Ok(verdict_code(outcome.verdict))
}

fn check(c: &Check, weak: bool) -> Outcome {
    let system = load_system(&c.system)?;
    let pseudo = load_pseudo(&c.pseudo, &system, c.delta.as_deref())?;
    let eps = rational("eps", &c.eps)?;
    let cfg = SearchConfig { budget: c.budget, horizon: c.horizon, prune: true };
    let outcome = if weak {
        check_weak_shadowing(&system, &pseudo, &eps, &cfg)?
    } else {
        match c.method {
            MethodArg::Branching => check_shadowing(&system, &pseudo, &eps, &cfg)?,
            MethodArg::RotationDp => rotation_dp_shadowing(&system, &pseudo, &eps, &cfg)?,
            MethodArg::Auto => check_shadowing_auto(&system, &pseudo, &eps, &cfg)?,
        }
    };
    emit_verdict(&system, &outcome, &c.output)
}

#[allow(clippy::too_many_arguments)]
fn simulate(system: &Path, x0: &str, steps: usize, word: &[String], delta: Option<&str>, seed: Option<u64>, grid: i64, out: Option<&Path>) -> Outcome {
    let system = load_system(system)?;
    let x0 = Point::on(system.kind(), rational("x0", x0)?)?;
    let pseudo = match delta {
        Some(d) => {
            let seed = seed.ok_or_else(|| Failure { code: EXIT_USAGE, message: "--seed is required with --delta".into() })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_pseudo_orbit(&system, &mut rng, x0, steps, &rational("delta", d)?, grid)?
        }
        None => {
            let cycle = if word.is_empty() {
                vec![0]
            } else {
                word.iter().map(|s| system.symbol(s)).collect::<crate::Result<Vec<_>>>()?
            };
            let seg = orbit(&system, &SymbolWord::periodic(Vec::new(), cycle)?, &x0, steps)?;
            PseudoOrbit::new(&system, seg.points, int(0))?
        }
    };
    write(out, &json(&PseudoOrbitJson::describe(&pseudo)))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    delta: String,
    witness: Option<Vec<String>>,
}

fn validate(system: &Path, pseudo: &Path, delta: Option<&str>, out: Option<&Path>) -> Outcome {
    let system = load_system(system)?;
    let text = read(pseudo)?;
    let parsed: PseudoOrbitJson = serde_json::from_str(&text).map_err(|e| Failure { code: EXIT_DATA, message: format!("pseudo-orbit: {e}") })?;
    let points = parsed.points(system.kind())?;
    let delta = match delta {
        Some(d) => rational("delta", d)?,
        None => parse_rat(&parsed.delta).map_err(|e| Failure { code: EXIT_DATA, message: format!("delta: {e}") })?,
    };
    let witness = validate_pseudo_orbit(&system, &points, &delta)?;
    let rep = ValidateReport {
        valid: witness.is_some(),
        delta: format_rat(&delta),
        witness: witness.map(|w| w.iter().map(|&s| system.symbol_id(s).to_string()).collect()),
    };
    write(out, &json(&rep))?;
    Ok(if rep.valid { EXIT_OK } else { EXIT_REFUTED })
}

#[allow(clippy::too_many_arguments)]
fn counterexample(eps: &str, delta: &str, alpha: Option<&str>, horizon: usize, weak_horizon: usize, width: &str, budget: u64, out: Option<&Path>) -> Outcome {
    let params = CounterexampleParams {
        eps: rational("eps", eps)?,
        delta: rational("delta", delta)?,
        alpha: alpha.map(|a| rational("alpha", a)).transpose()?,
        horizon,
        weak_horizon,
        width: rational("width", width)?,
        budget,
    };
    let run = systems::counterexample(&params)?;
    write(out, &json(&CounterexampleReport::new(&run)))?;
    Ok(match (run.shadowing.verdict, run.weak_shadowing.verdict) {
        (Verdict::Refuted, Verdict::Certified) => EXIT_OK,
        (Verdict::Certified, _) => EXIT_REFUTED,
        _ => EXIT_INCONCLUSIVE,
    })
}

fn ratio_table(paths: &[PathBuf], output: &Output) -> Outcome {
    let mut rows = Vec::with_capacity(paths.len());
    for p in paths {
        let system = load_system(p)?;
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        rows.push(RatioRow::new(&name, &ratios(&system)));
    }
    let text = match output.format {
        FormatArg::Json => json(&rows),
        FormatArg::Csv => ratio_csv(&rows),
    };
    write(output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn probe(
    system: &Path,
    gamma: &str,
    trials: usize,
    horizon: usize,
    seed: u64,
    arcs: usize,
    overlap: &str,
    eps: &str,
    net: Option<&str>,
    budget: u64,
    out: Option<&Path>,
) -> Outcome {
    let system = load_system(system)?;
    let cover = OpenCover::uniform(system.kind(), arcs, &rational("overlap", overlap)?, rational("eps", eps)?)?;
    let net_eps = net.map(|n| rational("net", n)).transpose()?;
    let cfg = ProbeConfig { trace: TraceConfig { horizon, budget, net_eps }, ..ProbeConfig::new(trials, horizon, seed) };
    let rep = genericity_probe(&system, &cover, &rational("gamma", gamma)?, &cfg)?;
    write(out, &json(&rep))?;
    Ok(if rep.violations.is_empty() { EXIT_OK } else { EXIT_REFUTED })
}

#[derive(Serialize)]
struct TransportReport {
    property: &'static str,
    conjugated: SystemJson,
    moduli: String,
    verdict: VerdictReport,
}

#[allow(clippy::too_many_arguments)]
fn transport(system: &Path, conjugacy: &Path, pseudo: &Path, eps: &str, weak: bool, horizon: Option<usize>, budget: u64, out: Option<&Path>) -> Outcome {
    let f = load_system(system)?;
    let h = parse_conjugacy(&read(conjugacy)?)?;
    let c = ConjugacyMap::new(h);
    let g = conjugate(&f, &c)?;
    let x = load_pseudo(pseudo, &g, None)?;
    let eps = rational("eps", eps)?;
    let property = if weak { Property::WeakShadowing } else { Property::Shadowing };
    let cfg = SearchConfig { budget, horizon, prune: true };
    let t = transport_verdict(&f, &g, &c, &x, &eps, property, &cfg)?;
    let conjugated = SystemJson::describe(&g).unwrap_or(SystemJson { space: g.kind(), resolution: None, maps: Vec::new() });
    let rep = TransportReport { property: property.as_str(), conjugated, moduli: describe_moduli(&t), verdict: VerdictReport::new(&g, &t.outcome) };
    write(out, &json(&rep))?;
    Ok(verdict_code(t.outcome.verdict))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate { system, x0, steps, word, delta, seed, grid, out } => {
            simulate(system, x0, *steps, word, delta.as_deref(), *seed, *grid, out.as_deref())
        }
        Command::Validate { system, pseudo, delta, out } => validate(system, pseudo, delta.as_deref(), out.as_deref()),
        Command::CheckShadowing(c) => check(c, false),
        Command::CheckWeakShadowing(c) => check(c, true),
        Command::Counterexample { eps, delta, alpha, horizon, weak_horizon, width, budget, out } => {
            counterexample(eps, delta, alpha.as_deref(), *horizon, *weak_horizon, width, *budget, out.as_deref())
        }
        Command::Ratios { system, output } => ratio_table(system, output),
        Command::ProbeGenericity { system, gamma, trials, horizon, seed, arcs, overlap, eps, net, budget, out } => probe(
            system,
            gamma,
            *trials,
            *horizon,
            *seed,
            *arcs,
            overlap,
            eps,
            net.as_deref(),
            *budget,
            out.as_deref(),
        ),
        Command::Transport { system, conjugacy, pseudo, eps, weak, horizon, budget, out } => {
            transport(system, conjugacy, pseudo, eps, *weak, *horizon, *budget, out.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("shadowlab: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::report::Format;

    #[test]
    fn unknown_flag_is_a_usage_error() {
        assert_eq!(run(["shadowlab", "ratios", "--bogus"]), EXIT_USAGE);
    }

    #[test]
    fn help_exits_cleanly() {
        assert_eq!(run(["shadowlab", "--help"]), EXIT_OK);
    }

    #[test]
    fn default_alpha_is_21_34() {
        let beta = systems::golden_enclosure(&rat(1, 1_000_000_000_000));
        assert_eq!(systems::first_convergent_within(&beta, &rat(1, 1000)), rat(21, 34));
    }

    #[test]
    fn format_names() {
        assert_eq!(Format::parse("csv").unwrap(), Format::Csv);
        assert!(Format::parse("xml").is_err());
    }
}

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stable_couples::axioms::check_axiom;
use stable_couples::constructions::ConstructionSpec;
use stable_couples::report::{
    axiom_verdict_json, solve_error_json, solver_report_json, stability_verdict_json, validation_json,
};
use stable_couples::{
    enumerate_stable, is_stable, parse_instance, parse_matching, serialize_instance, solve, validate_instance,
    Algorithm, Axiom, EngineError, MarketInstance, Mode, Semantics, SolveError, StabilityError, StabilityStatus,
    StabilityVerdict, DEFAULT_MAX_CANDIDATES,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INPUT: u8 = 2;
const GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "stable-couples", version, about = "Hospital/doctor matching with couples")]
struct Cli {
    /// Render reports as indented text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Accept markets whose size assumptions fail (capacity total differs from the doctor count).
    #[arg(long, global = true)]
    permissive: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a market file and evaluate preference axioms.
    Validate {
        file: PathBuf,
        /// Comma-separated axiom names (default: all).
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<String>,
    },
    /// Run a matching algorithm.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        algorithm: AlgorithmArg,
        /// Include the engine's event log.
        #[arg(long)]
        trace: bool,
        /// Append the stability verdict of the output.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Forced)]
        semantics: SemanticsArg,
    },
    /// Check a matching for blocking coalitions.
    Check {
        file: PathBuf,
        matching: PathBuf,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Forced)]
        semantics: SemanticsArg,
    },
    /// Enumerate feasible or stable matchings exhaustively.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        stable_only: bool,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Forced)]
        semantics: SemanticsArg,
        /// Report at most this many matchings.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        count_only: bool,
        /// Refuse markets with more candidate assignments than this.
        #[arg(long, env = "STABLE_COUPLES_MAX_CANDIDATES", default_value_t = DEFAULT_MAX_CANDIDATES)]
        max_candidates: u64,
    },
    /// Write a market without stable matchings.
    Generate {
        #[arg(long)]
        family: String,
        /// Family parameters as a JSON object, or @path to a JSON file.
        #[arg(long)]
        params: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Dpda,
    Sda,
    Alg1,
    Alg2,
    Alg3,
    Alg4,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Dpda => Algorithm::Dpda,
            AlgorithmArg::Sda => Algorithm::Sda,
            AlgorithmArg::Alg1 => Algorithm::Alg1,
            AlgorithmArg::Alg2 => Algorithm::Alg2,
            AlgorithmArg::Alg3 => Algorithm::Alg3,
            AlgorithmArg::Alg4 => Algorithm::Alg4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Forced,
    RankLex,
    Explicit,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Forced => Semantics::ForcedOnly,
            SemanticsArg::RankLex => Semantics::RankVectorLex,
            SemanticsArg::Explicit => Semantics::Explicit,
        }
    }
}

/// A finished command: exit code and the report for stdout.
struct Outcome {
    code: u8,
    report: Value,
}

impl Outcome {
    fn new(code: u8, report: Value) -> Self {
        Outcome { code, report }
    }

    fn input(message: impl Into<String>) -> Self {
        let message = message.into();
        eprintln!("error: {message}");
        Outcome::new(INPUT, json!({ "error": message }))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    let mode = if cli.permissive { Mode::Permissive } else { Mode::Strict };
    let outcome = match cli.command {
        Command::Validate { file, axioms } => validate(&file, &axioms, mode),
        Command::Solve { file, algorithm, trace, verify, semantics } => {
            with_market(&file, mode, |inst| cmd_solve(inst, algorithm.into(), trace, verify, semantics.into()))
        }
        Command::Check { file, matching, semantics } => {
            with_market(&file, mode, |inst| cmd_check(inst, &matching, semantics.into()))
        }
        Command::Enumerate { file, stable_only, semantics, limit, count_only, max_candidates } => {
            with_market(&file, mode, |inst| {
                cmd_enumerate(inst, stable_only, semantics.into(), limit, count_only, max_candidates)
            })
        }
        Command::Generate { family, params, output } => generate(&family, params.as_deref(), output.as_deref()),
    };
    if cli.pretty {
        print!("{}", render::pretty(&outcome.report));
    } else {
        println!("{}", outcome.report);
    }
    ExitCode::from(outcome.code)
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<MarketInstance, Outcome> {
    parse_instance(&read(path)?).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

/// Parses and validates `path`, then runs `f`; fatal validation issues are input errors.
fn with_market(path: &Path, mode: Mode, f: impl FnOnce(&MarketInstance) -> Outcome) -> Outcome {
    let inst = match load(path) {
        Ok(inst) => inst,
        Err(o) => return o,
    };
    let report = validate_instance(&inst, mode);
    if !report.is_valid() {
        eprintln!("error: {}: market fails validation", path.display());
        return Outcome::new(INPUT, json!({ "error": "invalid market", "validation": validation_json(&report) }));
    }
    for w in report.warnings() {
        eprintln!("warning: {}", w.message);
    }
    f(&inst)
}

fn validate(path: &Path, names: &[String], mode: Mode) -> Outcome {
    let inst = match load(path) {
        Ok(inst) => inst,
        Err(o) => return o,
    };
    let axioms: Vec<Axiom> = if names.is_empty() {
        Axiom::ALL.to_vec()
    } else {
        let mut out = Vec::new();
        for n in names {
            match Axiom::from_name(n.trim()) {
                Some(a) => out.push(a),
                None => return Outcome::input(format!("unknown axiom {n:?}")),
            }
        }
        out
    };
    let validation = validate_instance(&inst, mode);
    let mut negative = !validation.is_valid();
    let verdicts: Vec<Value> = axioms
        .iter()
        .map(|&a| match check_axiom(&inst, a) {
            Ok(v) => {
                negative |= !v.holds;
                axiom_verdict_json(&inst, &v)
            }
            Err(e) => {
                negative = true;
                json!({ "axiom": a.name(), "holds": null, "undefined": e.to_string() })
            }
        })
        .collect();
    let report = json!({ "validation": validation_json(&validation), "axioms": verdicts });
    Outcome::new(if negative { NEGATIVE } else { OK }, report)
}

/// Definite instability is a domain negative; an extension-dependent verdict is not.
fn verdict_code(v: &StabilityVerdict) -> u8 {
    match v.status {
        StabilityStatus::UnstableForAllResponsiveExtensions | StabilityStatus::UnstableUnderCanonical => NEGATIVE,
        _ => OK,
    }
}

fn stability_failure(e: StabilityError) -> Outcome {
    match e {
        StabilityError::TooLarge { .. } => {
            eprintln!("error: {e}");
            Outcome::new(GUARD, json!({ "error": e.to_string() }))
        }
        other => Outcome::input(other.to_string()),
    }
}

fn cmd_solve(inst: &MarketInstance, alg: Algorithm, trace: bool, verify: bool, semantics: Semantics) -> Outcome {
    match solve(inst, alg) {
        Ok(r) => {
            let mut report = solver_report_json(inst, &r, trace);
            let mut code = OK;
            if verify {
                let verdict = match semantics {
                    Semantics::ForcedOnly => r.stability.forced.clone(),
                    Semantics::RankVectorLex => r.stability.rank_lex.clone(),
                    Semantics::Explicit => match is_stable(inst, &r.matching, semantics) {
                        Ok(v) => v,
                        Err(e) => return stability_failure(e),
                    },
                };
                code = verdict_code(&verdict);
                report["verdict"] = stability_verdict_json(inst, &verdict);
            } else if let Value::Object(m) = &mut report {
                m.remove("stability");
            }
            Outcome::new(code, report)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                SolveError::Refused { .. } => NEGATIVE,
                SolveError::Engine { source: EngineError::RebaseGuard { .. }, .. } => GUARD,
                SolveError::Engine { .. } => NEGATIVE,
                SolveError::Stability(StabilityError::TooLarge { .. }) => GUARD,
                SolveError::Stability(_) => INPUT,
            };
            Outcome::new(code, solve_error_json(inst, &e))
        }
    }
}

fn cmd_check(inst: &MarketInstance, matching: &Path, semantics: Semantics) -> Outcome {
    let text = match read(matching) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let mu = match parse_matching(inst, &text) {
        Ok(mu) => mu,
        Err(e) => return Outcome::input(format!("{}: {e}", matching.display())),
    };
    match is_stable(inst, &mu, semantics) {
        Ok(v) => Outcome::new(verdict_code(&v), stability_verdict_json(inst, &v)),
        Err(e) => stability_failure(e),
    }
}

fn cmd_enumerate(
    inst: &MarketInstance,
    stable_only: bool,
    semantics: Semantics,
    limit: Option<usize>,
    count_only: bool,
    max_candidates: u64,
) -> Outcome {
    let found = if stable_only {
        enumerate_stable(inst, semantics, max_candidates)
    } else {
        stable_couples::stability::enumerate_matchings(inst, max_candidates)
    };
    let found = match found {
        Ok(f) => f,
        Err(e) => return stability_failure(e),
    };
    let mut report = json!({ "count": found.len(), "stable_only": stable_only });
    if stable_only {
        report["semantics"] = json!(semantics);
    }
    if !count_only {
        let shown = found.iter().take(limit.unwrap_or(usize::MAX));
        report["matchings"] = shown.map(|mu| stable_couples::market::matching_to_json(inst, mu)).collect();
    }
    let code = if stable_only && found.is_empty() { NEGATIVE } else { OK };
    Outcome::new(code, report)
}

fn generate(family: &str, params: Option<&str>, output: Option<&Path>) -> Outcome {
    let params = match params {
        None => None,
        Some(p) => {
            let text = match p.strip_prefix('@') {
                Some(path) => match read(Path::new(path)) {
                    Ok(t) => t,
                    Err(o) => return o,
                },
                None => p.to_string(),
            };
            match serde_json::from_str::<Value>(&text) {
                Ok(v) => Some(v),
                Err(e) => return Outcome::input(format!("--params: {e}")),
            }
        }
    };
    let spec = match ConstructionSpec::from_family(family, params) {
        Ok(s) => s,
        Err(e) => return Outcome::input(e),
    };
    let inst = match spec.build() {
        Ok(i) => i,
        Err(e) => return Outcome::input(e.to_string()),
    };
    let text = serialize_instance(&inst);
    let valid = validate_instance(&inst, Mode::Strict).is_valid();
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return Outcome::input(format!("{}: {e}", path.display()));
            }
            Outcome::new(
                OK,
                json!({
                    "family": family,
                    "output": path.display().to_string(),
                    "hospitals": inst.n_hospitals(),
                    "doctors": inst.n_doctors(),
                    "couples": inst.couples().len(),
                    "valid": valid,
                }),
            )
        }
        None => Outcome::new(OK, serde_json::from_str(&text).expect("serialized instances are JSON")),
    }
}

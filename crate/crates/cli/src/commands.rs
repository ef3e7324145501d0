//! Subcommands and the process-level contract: one JSON document on stdout,
//! exit code 0 on success, 1 on a negative answer to a predicate command, 2 on
//! usage, input or precondition errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use ratdyn_core::dynsys::{
    degree_sequence, diagonal_power, iterate, validate_dominant, DegreeProfile, Dominance, DynamicalSystem,
};
use ratdyn_core::exactalg::RationalFunction;
use ratdyn_core::invsearch::{adim_lower_bound, corollary_b_check, BilinearStatus, SearchBudget};
use ratdyn_core::translation::{classify_system_with_window, DEFAULT_WINDOW};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, ErrorCode};
use crate::parser::parse_expression;
use crate::report::{error_json, CommandEcho, ReportDocument, SystemInfo, SCHEMA};
use crate::sysfile::{load_system_file, parse_system_source, SystemFile};
use crate::verify::{verify_invariant, Mode, Verdict, DEFAULT_SEED, DEFAULT_TRIALS};

/// Environment variable that replaces the default seed.
pub const SEED_ENV: &str = "RATDYN_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "ratdyn",
    version,
    about = "Exact workbench for rational dynamical systems over Q"
)]
pub struct Cli {
    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized steps; overrides RATDYN_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Leave out the timing field, making output byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate the system and test dominance. Exits 1 when not dominant.
    Check { system: PathBuf },
    /// Normalized coordinates of the m-th iterate.
    Iterate {
        #[arg(long)]
        m: u64,
        system: PathBuf,
    },
    /// Degrees of the first n iterates with a growth label.
    Degrees {
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        n: usize,
        system: PathBuf,
    },
    /// Bounded-degree search for invariant rational functions.
    Invariants {
        /// max_num_degree,max_den_degree,denominator_catalog_depth,nullspace_rank1_limit
        #[arg(long, default_value = "3,3,2,3")]
        budget: String,
        system: PathBuf,
    },
    /// Compare invariants of the cartesian square with pullbacks from the factors.
    Square {
        #[arg(long, default_value = "3,3,2,3")]
        budget: String,
        system: PathBuf,
    },
    /// Recognize closed-form group actions and summarize degree growth.
    Classify {
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        system: PathBuf,
    },
    /// Check f ∘ φ = f. Exits 1 unless the answer is positive.
    Verify {
        #[arg(long)]
        function: String,
        /// Sample instead of normalizing symbolically (refutation only).
        #[arg(long)]
        randomized: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Verify on the k-th cartesian power, with variables renamed by copy.
        #[arg(long, default_value_t = 1)]
        power: usize,
        system: PathBuf,
    },
    /// Run the expectations recorded in system files. Exits 1 on any failure.
    Selftest {
        /// Directory of system files; the bundled corpus when omitted.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// Process output: what goes to stdout and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn parse_budget(s: &str) -> CliResult<SearchBudget> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Option<Vec<u32>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums.as_deref() {
        Some(&[a, b, c, d]) => Ok(SearchBudget::new(a, b, c, d)),
        _ => Err(CliError::new(
            ErrorCode::Usage,
            format!("budget must be four non-negative integers separated by commas, got '{s}'"),
        )),
    }
}

/// `--seed`, then `RATDYN_SEED`, then the built-in default.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::new(
                ErrorCode::Usage,
                format!("{SEED_ENV} must be an unsigned integer, got '{v}'"),
            )
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn strings(fs: &[RationalFunction]) -> Vec<String> {
    fs.iter().map(|f| f.to_string()).collect()
}

struct Computed {
    result: Value,
    code: i32,
    system: Option<SystemInfo>,
    budget: Option<SearchBudget>,
    seed: Option<u64>,
}

fn load(path: &Path) -> CliResult<(SystemFile, DynamicalSystem)> {
    let file = load_system_file(path)?;
    let sys = file.to_system()?;
    Ok((file, sys))
}

#[derive(Serialize)]
struct InvariantsResult {
    invariants: Vec<String>,
    independence_rank: usize,
    verified: bool,
    reduction_generators: Vec<String>,
    bilinear: BilinearStatus,
}

#[derive(Serialize)]
struct SquareResult {
    base_rank: usize,
    square_rank: usize,
    pullback_rank: usize,
    new_invariant_found: bool,
    witness: Option<String>,
    square_variables: Vec<String>,
    square_invariants: Vec<String>,
    base_invariants: Vec<String>,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree_profile: Option<DegreeProfile>,
}

fn compute(cmd: &Command, seed_flag: Option<u64>) -> CliResult<Computed> {
    let plain = |result: Value, code: i32, system: Option<SystemInfo>| Computed {
        result,
        code,
        system,
        budget: None,
        seed: None,
    };
    match cmd {
        Command::Check { system } => {
            let (file, sys) = load(system)?;
            let dominance = validate_dominant(&sys, 3)?;
            let code = if dominance == Dominance::Dominant { 0 } else { 1 };
            let result = json!({
                "dominance": dominance,
                "dimension": sys.dim(),
                "degree": sys.degree(),
            });
            Ok(plain(result, code, Some(SystemInfo::new(&file, &sys))))
        }
        Command::Iterate { m, system } => {
            let (file, sys) = load(system)?;
            require_dominant(&sys)?;
            let it = iterate(&sys, *m)?;
            let result = json!({
                "m": m,
                "coordinates": strings(it.coords()),
                "degree": it.degree(),
            });
            Ok(plain(result, 0, Some(SystemInfo::new(&file, &sys))))
        }
        Command::Degrees { n, system } => {
            let (file, sys) = load(system)?;
            require_dominant(&sys)?;
            let profile = degree_sequence(&sys, *n)?;
            Ok(plain(to_value(&profile), 0, Some(SystemInfo::new(&file, &sys))))
        }
        Command::Invariants { budget, system } => {
            let budget = parse_budget(budget)?;
            let (file, sys) = load(system)?;
            let r = adim_lower_bound(&sys, &budget)?;
            let result = InvariantsResult {
                invariants: strings(&r.invariants),
                independence_rank: r.independence_rank,
                verified: r.verified,
                reduction_generators: strings(&r.reduction_generators),
                bilinear: r.bilinear,
            };
            Ok(Computed {
                result: to_value(&result),
                code: 0,
                system: Some(SystemInfo::new(&file, &sys)),
                budget: Some(budget),
                seed: None,
            })
        }
        Command::Square { budget, system } => {
            let budget = parse_budget(budget)?;
            let (file, sys) = load(system)?;
            let r = corollary_b_check(&sys, &budget)?;
            let square = diagonal_power(&sys, 2)?;
            let result = SquareResult {
                base_rank: r.base_rank,
                square_rank: r.square_rank,
                pullback_rank: r.pullback_rank,
                new_invariant_found: r.new_invariant_found,
                witness: r.witness.as_ref().map(|w| w.to_string()),
                square_variables: square.vars().names().to_vec(),
                square_invariants: strings(&r.square_invariants),
                base_invariants: strings(&r.base.invariants),
                verified: r.base.verified,
                degree_profile: r.degree_profile,
            };
            Ok(Computed {
                result: to_value(&result),
                code: 0,
                system: Some(SystemInfo::new(&file, &sys)),
                budget: Some(budget),
                seed: None,
            })
        }
        Command::Classify { window, system } => {
            let (file, sys) = load(system)?;
            let ev = classify_system_with_window(&sys, *window)?;
            Ok(plain(to_value(&ev), 0, Some(SystemInfo::new(&file, &sys))))
        }
        Command::Verify {
            function,
            randomized,
            trials,
            power,
            system,
        } => {
            let (file, sys) = load(system)?;
            if *power == 0 {
                return Err(CliError::new(ErrorCode::Usage, "--power must be at least 1"));
            }
            let target = if *power == 1 {
                sys.clone()
            } else {
                diagonal_power(&sys, *power)?
            };
            let f = parse_expression(function, target.vars())?;
            let mode = if *randomized { Mode::Randomized } else { Mode::Exact };
            let seed = resolve_seed(seed_flag)?;
            let out = verify_invariant(&target, &f, mode, *trials, seed)?;
            let code = match out.verdict {
                Verdict::Invariant | Verdict::NotRefuted => 0,
                Verdict::NotInvariant | Verdict::UndefinedAtSamples => 1,
            };
            let mut result = json!({
                "function": f.to_string(),
                "power": power,
                "variables": target.vars().names(),
                "refutation_only": *randomized,
            });
            merge(&mut result, to_value(&out));
            if *randomized {
                result["trials"] = json!(trials);
            }
            Ok(Computed {
                result,
                code,
                system: Some(SystemInfo::new(&file, &sys)),
                budget: None,
                seed: randomized.then_some(seed),
            })
        }
        Command::Selftest { dir } => {
            let files = match dir {
                Some(d) => read_dir_sources(d)?,
                None => crate::corpus::bundled()
                    .iter()
                    .map(|(n, s)| (n.to_string(), s.to_string()))
                    .collect(),
            };
            let mut checks = Vec::new();
            for (name, src) in &files {
                checks.extend(crate::selftest::run_file(name, src));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            let result = json!({
                "files": files.len(),
                "checks": checks,
                "failed": failed,
            });
            Ok(plain(result, if failed == 0 { 0 } else { 1 }, None))
        }
    }
}

fn read_dir_sources(dir: &Path) -> CliResult<Vec<(String, String)>> {
    let io = |e: std::io::Error| CliError::new(ErrorCode::Io, format!("{}: {e}", dir.display()));
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("system" | "json")))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).map_err(io)?;
            Ok((
                p.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string(),
                src,
            ))
        })
        .collect()
}

fn require_dominant(sys: &DynamicalSystem) -> CliResult<()> {
    match validate_dominant(sys, 3)? {
        Dominance::Dominant => Ok(()),
        _ => Err(CliError::new(ErrorCode::Precondition, "the system is not dominant")),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn echo(cmd: &Command) -> CommandEcho {
    let mut args = BTreeMap::new();
    let path = |p: &PathBuf| json!(p.display().to_string());
    let name = match cmd {
        Command::Check { system } => {
            args.insert("system".into(), path(system));
            "check"
        }
        Command::Iterate { m, system } => {
            args.insert("m".into(), json!(m));
            args.insert("system".into(), path(system));
            "iterate"
        }
        Command::Degrees { n, system } => {
            args.insert("n".into(), json!(n));
            args.insert("system".into(), path(system));
            "degrees"
        }
        Command::Invariants { budget, system } => {
            args.insert("budget".into(), json!(budget));
            args.insert("system".into(), path(system));
            "invariants"
        }
        Command::Square { budget, system } => {
            args.insert("budget".into(), json!(budget));
            args.insert("system".into(), path(system));
            "square"
        }
        Command::Classify { window, system } => {
            args.insert("window".into(), json!(window));
            args.insert("system".into(), path(system));
            "classify"
        }
        Command::Verify {
            function,
            randomized,
            trials,
            power,
            system,
        } => {
            args.insert("function".into(), json!(function));
            args.insert("randomized".into(), json!(randomized));
            args.insert("trials".into(), json!(trials));
            args.insert("power".into(), json!(power));
            args.insert("system".into(), path(system));
            "verify"
        }
        Command::Selftest { dir } => {
            if let Some(d) = dir {
                args.insert("dir".into(), path(d));
            }
            "selftest"
        }
    };
    CommandEcho {
        name: name.to_string(),
        args,
    }
}

fn error_outcome(e: &CliError) -> Outcome {
    Outcome {
        stdout: format!("{}\n", error_json(e)),
        code: 2,
    }
}

/// Runs one command line (including the program name) to completion.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    code: 0,
                };
            }
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail
                .lines()
                .next()
                .unwrap_or(&msg)
                .trim_start_matches("error: ")
                .to_string();
            return error_outcome(&CliError::new(ErrorCode::Usage, first));
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let run = || {
        let start = Instant::now();
        let computed = compute(&cli.command, cli.seed);
        (computed, start.elapsed())
    };
    let (computed, elapsed) = match cli.jobs {
        Some(0) => return error_outcome(&CliError::new(ErrorCode::Usage, "--jobs must be at least 1")),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(run),
            Err(e) => return error_outcome(&CliError::new(ErrorCode::Usage, e.to_string())),
        },
        None => run(),
    };
    let c = match computed {
        Ok(c) => c,
        Err(e) => return error_outcome(&e),
    };
    let doc = ReportDocument {
        schema: SCHEMA,
        command: echo(&cli.command),
        system: c.system,
        budget: c.budget,
        seed: c.seed,
        result: c.result,
        timing_ms: (!cli.no_timing).then_some(elapsed.as_millis() as u64),
    };
    let stdout = if cli.pretty {
        doc.to_table()
    } else {
        format!("{}\n", doc.to_json(false))
    };
    Outcome { stdout, code: c.code }
}

/// Parses a system from source text, for callers that do not go through files.
pub fn system_from_source(src: &str, name: &str) -> CliResult<(SystemFile, DynamicalSystem)> {
    let file = parse_system_source(src, name)?;
    let sys = file.to_system()?;
    Ok((file, sys))
}

//! Command-line front end.
//!
//! Exit codes: 0 for YES or success, 1 for NO or a failed check, 2 for errors.
//! Vertex ids are printed 1-based.

pub mod dimacs;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{verify_paper_factors, DEFAULT_TOL};
use crate::graph::{validate_solution, Graph, Instance, Solution};
use crate::oracle::{
    brute_force_decision, brute_force_minimum, generate, GeneratorSpec, OracleError, Plant,
    BRUTE_FORCE_MAX_N,
};
use crate::search::{solve_decision, solve_minimum_bounded, SearchStats};

pub use dimacs::{parse_dimacs, serialize_dimacs, ParseError};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable that replaces any seed given on the command line.
pub const SEED_ENV: &str = "BDDV_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Decide,
    Minimize,
    VerifyFactors,
    OracleCheck,
}

#[derive(Debug, Parser)]
#[command(name = "bddv", about = "Exact solver for d-bounded-degree vertex deletion")]
pub struct Args {
    /// DIMACS edge-list file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Random instance as `n,p,seed`.
    #[arg(long, value_name = "N,P,SEED")]
    pub gen: Option<String>,
    /// Structure to plant in the generated instance, e.g. `proper-triple:1`.
    #[arg(long, requires = "gen")]
    pub plant: Option<String>,
    /// Degree bound.
    #[arg(long)]
    pub d: Option<usize>,
    /// Deletion budget (decide mode).
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest budget tried (minimize mode).
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, value_enum, default_value = "decide")]
    pub mode: Mode,
    /// Write a JSON statistics document here.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Bisection tolerance for branching factors.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for the oracle-check suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Generated(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Option<Source>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub k_max: Option<usize>,
    pub mode: Mode,
    pub stats: Option<PathBuf>,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    /// Validates flag combinations. `env_seed` (normally `BDDV_SEED`)
    /// replaces the generator seed and the suite seed.
    pub fn from_args(args: Args, env_seed: Option<u64>) -> Result<Self, CliError> {
        let source = match (args.input, args.gen) {
            (Some(_), Some(_)) => return Err(usage("--input and --gen are mutually exclusive")),
            (Some(p), None) => Some(Source::File(p)),
            (None, Some(spec)) => {
                let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
                let [n, p, seed] = parts[..] else {
                    return Err(usage(format!("--gen expects n,p,seed, got {spec:?}")));
                };
                let n = n.parse().map_err(|_| usage(format!("bad vertex count {n:?}")))?;
                let p = p.parse().map_err(|_| usage(format!("bad probability {p:?}")))?;
                let seed = seed.parse().map_err(|_| usage(format!("bad seed {seed:?}")))?;
                let plant = match args.plant.as_deref() {
                    None => None,
                    Some(tag) => {
                        let d = args.d.ok_or_else(|| usage("--plant needs --d"))?;
                        Some(Plant::parse(tag, d).ok_or_else(|| usage(format!("unknown plant {tag:?}")))?)
                    }
                };
                Some(Source::Generated(GeneratorSpec {
                    n,
                    p,
                    seed: env_seed.unwrap_or(seed),
                    plant,
                }))
            }
            (None, None) => None,
        };
        match args.mode {
            Mode::Decide | Mode::Minimize => {
                if source.is_none() {
                    return Err(usage("an instance is required: pass --input or --gen"));
                }
                if args.d.is_none() {
                    return Err(usage("--d is required"));
                }
                if args.mode == Mode::Decide && args.k.is_none() {
                    return Err(usage("decide mode requires --k"));
                }
            }
            Mode::VerifyFactors | Mode::OracleCheck => {}
        }
        if !(args.tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        Ok(RunConfig {
            source,
            d: args.d,
            k: args.k,
            k_max: args.k_max,
            mode: args.mode,
            stats: args.stats,
            tol: args.tol,
            seed: env_seed.unwrap_or(args.seed),
        })
    }
}

fn load(source: &Source) -> Result<Graph, CliError> {
    match source {
        Source::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
            parse_dimacs(&text).map_err(|e| CliError::Parse {
                path: path.clone(),
                source: e,
            })
        }
        Source::Generated(spec) => Ok(generate(spec)?),
    }
}

fn one_based(s: &Solution) -> String {
    s.vertices()
        .iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn stats_json(stats: &SearchStats) -> Value {
    let per_step: BTreeMap<String, u64> = stats
        .per_step
        .iter()
        .enumerate()
        .map(|(i, &c)| ((i + 1).to_string(), c))
        .collect();
    let by_origin: BTreeMap<String, f64> = stats
        .max_factor_by_origin()
        .into_iter()
        .map(|(o, f)| (o.label(), f))
        .collect();
    json!({
        "nodes": stats.nodes,
        "per_step": per_step,
        "fallback_count": stats.fallback_count,
        "assumption_violations": stats.assumption_violations,
        "max_depth": stats.max_depth,
        "max_branching_factor": stats.max_factor(),
        "max_branching_factor_by_rule": by_origin,
        "recurrences": stats.recurrences(),
    })
}

fn write_stats(config: &RunConfig, doc: Value) -> Result<(), CliError> {
    if let Some(path) = &config.stats {
        let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?;
    }
    Ok(())
}

/// Runs one invocation, writing the human-readable result to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    match config.mode {
        Mode::Decide => decide(config, out),
        Mode::Minimize => minimize(config, out),
        Mode::VerifyFactors => verify_factors(config, out),
        Mode::OracleCheck => oracle_check(config, out),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn decide(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load(config.source.as_ref().expect("validated"))?;
    let (d, k) = (config.d.expect("validated"), config.k.expect("validated"));
    let outcome = solve_decision(&Instance::new(g.clone(), d, k));
    let mut doc = stats_json(&outcome.stats);
    doc["mode"] = json!("decide");
    doc["d"] = json!(d);
    doc["k"] = json!(k);
    let code = match &outcome.solution {
        Some(s) => {
            debug_assert!(validate_solution(&g, d, s.vertices()));
            writeln!(out, "YES").map_err(io)?;
            writeln!(out, "{}", one_based(s)).map_err(io)?;
            doc["result"] = json!("YES");
            doc["solution"] = json!(s.vertices().iter().map(|v| v + 1).collect::<Vec<_>>());
            EXIT_YES
        }
        None => {
            writeln!(out, "NO").map_err(io)?;
            doc["result"] = json!("NO");
            EXIT_NO
        }
    };
    write_stats(config, doc)?;
    Ok(code)
}

fn minimize(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load(config.source.as_ref().expect("validated"))?;
    let d = config.d.expect("validated");
    let k_max = config.k_max.unwrap_or(g.active_count());
    let outcome = solve_minimum_bounded(&g, d, k_max);
    let mut doc = stats_json(&outcome.stats);
    doc["mode"] = json!("minimize");
    doc["d"] = json!(d);
    doc["k_max"] = json!(k_max);
    let code = match &outcome.solution {
        Some(s) => {
            writeln!(out, "MIN {}", s.len()).map_err(io)?;
            writeln!(out, "{}", one_based(s)).map_err(io)?;
            doc["result"] = json!("YES");
            doc["minimum"] = json!(s.len());
            doc["solution"] = json!(s.vertices().iter().map(|v| v + 1).collect::<Vec<_>>());
            EXIT_YES
        }
        None => {
            writeln!(out, "NO").map_err(io)?;
            doc["result"] = json!("NO");
            EXIT_NO
        }
    };
    write_stats(config, doc)?;
    Ok(code)
}

fn verify_factors(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = verify_paper_factors(2..=8, config.tol).map_err(|e| usage(e.to_string()))?;
    for c in &report.checks {
        let x = c.x.map_or(String::new(), |x| format!(" x={x}"));
        let closed = c.closed_form.map_or(String::new(), |v| format!(" closed={v:.6}"));
        let reference = c
            .reference_form
            .map_or(String::new(), |v| format!(" reference={v:.6}"));
        writeln!(
            out,
            "{} {:<13} d={}{x} [{}] factor={:.6}{closed}{reference} bound={:.6}",
            if c.ok() { "ok  " } else { "FAIL" },
            c.rule,
            c.d,
            c.recurrence,
            c.factor,
            c.bound
        )
        .map_err(io)?;
    }
    if let Some(m) = report.d2_max_factor {
        writeln!(out, "d=2 maximum factor: {m:.4}").map_err(io)?;
    }
    let ok = report.all_ok();
    writeln!(out, "{}", if ok { "all checks passed" } else { "some checks failed" }).map_err(io)?;
    write_stats(config, serde_json::to_value(&report).expect("report serializes"))?;
    Ok(if ok { EXIT_YES } else { EXIT_NO })
}

/// Instances in the self-contained randomized suite.
const SUITE_SIZE: usize = 200;

fn oracle_check(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let ds: Vec<usize> = match config.d {
        Some(d) => vec![d],
        None => (0..=3).collect(),
    };
    let mut stats = SearchStats::default();
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    match &config.source {
        Some(source) => {
            let g = load(source)?;
            if g.active_count() > BRUTE_FORCE_MAX_N {
                return Err(OracleError::TooLarge(g.active_count()).into());
            }
            for &d in &ds {
                for k in 0..=g.active_count() {
                    let mine = solve_decision(&Instance::new(g.clone(), d, k));
                    stats.merge(&mine.stats);
                    let truth = brute_force_decision(&g, d, k)?;
                    let valid = mine
                        .solution
                        .as_ref()
                        .is_none_or(|s| s.len() <= k && validate_solution(&g, d, s.vertices()));
                    checked += 1;
                    if mine.solution.is_some() != truth.is_some() || !valid {
                        mismatches += 1;
                        writeln!(out, "mismatch: d={d} k={k}").map_err(io)?;
                    }
                }
            }
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for i in 0..SUITE_SIZE {
                let n = rng.gen_range(4..=12);
                let p = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
                let d = ds[rng.gen_range(0..ds.len())];
                let g = generate(&GeneratorSpec::random(n, p, rng.gen()))?;
                let mine = solve_minimum_bounded(&g, d, n);
                stats.merge(&mine.stats);
                let truth = brute_force_minimum(&g, d)?;
                let s = mine.solution.expect("deleting every vertex works");
                checked += 1;
                if s.len() != truth.len() || !validate_solution(&g, d, s.vertices()) {
                    mismatches += 1;
                    writeln!(out, "mismatch: instance {i} n={n} p={p} d={d}").map_err(io)?;
                }
            }
        }
    }
    writeln!(out, "checked {checked} cases, {mismatches} mismatches").map_err(io)?;
    writeln!(out, "fallback_count {}", stats.fallback_count).map_err(io)?;
    let mut doc = stats_json(&stats);
    doc["mode"] = json!("oracle-check");
    doc["checked"] = json!(checked);
    doc["mismatches"] = json!(mismatches);
    write_stats(config, doc)?;
    Ok(if mismatches == 0 { EXIT_YES } else { EXIT_NO })
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
        }
    };
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(s) => match s.trim().parse() {
            Ok(v) => Some(v),
            Err(_) => {
                let _ = writeln!(err, "error: {SEED_ENV} is not an unsigned integer: {s:?}");
                return EXIT_ERROR;
            }
        },
        Err(_) => None,
    };
    let result = RunConfig::from_args(args, env_seed).and_then(|c| run(&c, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

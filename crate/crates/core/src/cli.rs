//! Command-line front end.
//!
//! Exit codes: 0 when the property holds or the artifact was produced, 1 when a
//! checked property fails (the witness is printed), 2 for usage, parse and
//! schema errors. With `--json` everything printed to stdout is one JSON
//! document.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::builder::RangedU64ValueParser;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::compound::{compound, indicator_decomposition, MAX_CLOSURE_TRIALS};
use crate::error::Error;
use crate::grid::{
    check_fully_k, check_fully_k_exhaustive, check_n_monotone, df_to_measure, measure_to_df,
    subgrid_approx, MultiIndex,
};
use crate::json::{self as j, AnyPoly, AnyTable};
use crate::mode::Mode;
use crate::multilinear::{compose_univariate, MLPoly, UnivariateMap};
use crate::partition::{partition_upper_with, verify_partition, PartitionOptions};
use crate::scalar::rat;
use crate::selftest::{self, SelftestOptions};
use crate::subset::{gen_fully_k, is_fully_k, SubsetMask};

#[derive(Debug, Parser)]
#[command(
    name = "kmono",
    version,
    about = "Certify higher-order monotonicity of set and grid functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Emit a single JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the produced artifact to this file.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a pseudo-Boolean table for fully k-monotonicity.
    CheckPb {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "inc")]
        mode: Mode,
        /// Tolerance; only meaningful for float tables.
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a grid function: fully k-monotone (`--k`) or n-monotone (`--n`).
    CheckGrid {
        input: PathBuf,
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        k: Option<usize>,
        /// Comma-separated multi-index, e.g. `2,1`.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, default_value = "inc")]
        mode: Mode,
        /// Enumerate every step instead of adjacent steps only.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Multilinear extension of a table, optionally after a univariate map.
    Extend {
        input: PathBuf,
        /// identity, sqrt, log1p or power:THETA.
        #[arg(long, value_name = "MAP")]
        map: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed partial derivative of a polynomial (or of a table's extension).
    Derive {
        input: PathBuf,
        /// Comma-separated 1-based variables; empty for the identity.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        beta: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Set-interval partition of a vector family, verified by enumeration.
    Partition {
        input: PathBuf,
        /// Use the explicit layout when exactly one vector is left over.
        #[arg(long)]
        explicit: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compound a table with grid functions; with `--k` also check the result.
    Compound {
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "inc")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Indicator decomposition certificate for point-mass d.f.s.
    Certify {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Measure of a d.f., or d.f. of a measure given with `axes`.
    Measure {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Probability approximation from a sub-grid restriction.
    Approx {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a fully k-monotone table.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "inc")]
        mode: Mode,
        #[arg(long, env = "KMONO_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in seeded self-test.
    Selftest {
        #[arg(long, env = "KMONO_SEED", default_value_t = 0)]
        seed: u64,
        /// Closure trials per mode and order.
        #[arg(long, default_value_t = selftest::DEFAULT_TRIALS,
              value_parser = RangedU64ValueParser::<usize>::new().range(1..=MAX_CLOSURE_TRIALS as u64))]
        trials: usize,
        /// Corrupt one table entry; the self-test must then fail.
        #[arg(long, hide = true)]
        mutate: bool,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::CheckPb { common, .. }
            | Command::CheckGrid { common, .. }
            | Command::Extend { common, .. }
            | Command::Derive { common, .. }
            | Command::Partition { common, .. }
            | Command::Compound { common, .. }
            | Command::Certify { common, .. }
            | Command::Measure { common, .. }
            | Command::Approx { common, .. }
            | Command::Gen { common, .. }
            | Command::Selftest { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::CheckPb { .. } => "check-pb",
            Command::CheckGrid { .. } => "check-grid",
            Command::Extend { .. } => "extend",
            Command::Derive { .. } => "derive",
            Command::Partition { .. } => "partition",
            Command::Compound { .. } => "compound",
            Command::Certify { .. } => "certify",
            Command::Measure { .. } => "measure",
            Command::Approx { .. } => "approx",
            Command::Gen { .. } => "gen",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub passed: bool,
    pub witnesses: Vec<Value>,
    pub seed: Option<u64>,
    /// The produced artifact, if any.
    pub result: Option<Value>,
    /// Human-readable lines for non-JSON output.
    pub lines: Vec<String>,
}

impl Report {
    fn pass(result: Option<Value>, lines: Vec<String>) -> Self {
        Report {
            passed: true,
            witnesses: Vec::new(),
            seed: None,
            result,
            lines,
        }
    }

    fn verdict(passed: bool, witness: Option<Value>, lines: Vec<String>) -> Self {
        Report {
            passed,
            witnesses: witness.into_iter().collect(),
            seed: None,
            result: None,
            lines,
        }
    }
}

/// Captured process outcome, so tests can drive the CLI in-process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let wants_json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            if code == 2 && wants_json {
                let msg = e.kind().to_string();
                return Outcome {
                    code,
                    stdout: json!({ "verdict": "error", "error": msg, "detail": e.to_string() })
                        .to_string()
                        + "\n",
                    stderr: String::new(),
                };
            }
            return Outcome {
                code,
                stdout: if code == 0 {
                    e.to_string()
                } else {
                    String::new()
                },
                stderr: if code == 0 {
                    String::new()
                } else {
                    e.to_string()
                },
            };
        }
    };
    execute(&cli.command)
}

/// Runs an already-parsed command.
pub fn execute(command: &Command) -> Outcome {
    let common = command.common();
    let start = Instant::now();
    let outcome = dispatch(command).and_then(|report| {
        if let (Some(path), Some(result)) = (&common.output, &report.result) {
            let text = serde_json::to_string_pretty(result).expect("values serialize");
            fs::write(path, text + "\n").map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
        }
        Ok(report)
    });
    let timing_ms = start.elapsed().as_millis();
    match outcome {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            let stdout = if common.json {
                let mut doc = json!({
                    "command": command.name(),
                    "verdict": if report.passed { "pass" } else { "fail" },
                    "witnesses": report.witnesses,
                    "timing_ms": timing_ms,
                });
                if let Some(seed) = report.seed {
                    doc["seed"] = json!(seed);
                }
                if let Some(result) = &report.result {
                    doc["result"] = result.clone();
                }
                serde_json::to_string_pretty(&doc).expect("values serialize") + "\n"
            } else {
                let mut out = String::new();
                for line in &report.lines {
                    out.push_str(line);
                    out.push('\n');
                }
                for w in &report.witnesses {
                    out.push_str(&format!("witness: {w}\n"));
                }
                let summary_only = matches!(command, Command::Selftest { .. });
                if common.output.is_none() && !summary_only {
                    if let Some(result) = &report.result {
                        out.push_str(
                            &serde_json::to_string_pretty(result).expect("values serialize"),
                        );
                        out.push('\n');
                    }
                }
                out
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let message = e.to_string();
            if common.json {
                let mut doc =
                    json!({ "command": command.name(), "verdict": "error", "error": message });
                if let CliError::Lib(Error::Json(j)) = &e {
                    doc["line"] = json!(j.line());
                    doc["column"] = json!(j.column());
                }
                if let CliError::Lib(Error::Schema { field, .. }) = &e {
                    doc["field"] = json!(field);
                }
                Outcome {
                    code: 2,
                    stdout: serde_json::to_string_pretty(&doc).expect("values serialize") + "\n",
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: {message}\n"),
                }
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Lib(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(j::parse(&text)?)
}

fn mode_line(what: &str, holds: bool, k: usize, mode: Mode) -> String {
    format!(
        "{what} is {}fully {k}-{mode}",
        if holds { "" } else { "not " }
    )
}

fn dispatch(command: &Command) -> CliResult<Report> {
    match command {
        Command::CheckPb {
            input,
            k,
            mode,
            eps,
            ..
        } => {
            let table = j::table_from_value(&read(input)?, "")?;
            let (holds, witness) = match table {
                AnyTable::Exact(f) => {
                    let eps = match eps {
                        Some(e) if *e != 0.0 => {
                            return Err(CliError::Usage("exact tables admit no tolerance".into()))
                        }
                        _ => rat(0),
                    };
                    let v = is_fully_k(&f, *k, *mode, &eps)?;
                    (v.holds(), v.witness().map(j::subset_witness_to_json))
                }
                AnyTable::Float(f, tol) => {
                    let v = is_fully_k(&f, *k, *mode, &eps.unwrap_or(tol))?;
                    (v.holds(), v.witness().map(j::subset_witness_to_json))
                }
            };
            Ok(Report::verdict(
                holds,
                witness,
                vec![mode_line("table", holds, *k, *mode)],
            ))
        }
        Command::CheckGrid {
            input,
            k,
            n,
            mode,
            exhaustive,
            ..
        } => {
            let f = j::grid_function_from_value(&read(input)?, "")?;
            let zero = rat(0);
            let (verdict, line) = match (k, n) {
                (Some(k), _) => {
                    let v = if *exhaustive {
                        check_fully_k_exhaustive(&f, *k, *mode, &zero)?
                    } else {
                        check_fully_k(&f, *k, *mode, &zero)?
                    };
                    let line = mode_line("grid function", v.holds(), *k, *mode);
                    (v, line)
                }
                (None, Some(n)) => {
                    let v = check_n_monotone(&f, &MultiIndex::new(n.clone())?, *mode, &zero)?;
                    let line = format!(
                        "grid function is {}{n:?}-{mode}",
                        if v.holds() { "" } else { "not " }
                    );
                    (v, line)
                }
                (None, None) => return Err(CliError::Usage("pass --k or --n".into())),
            };
            let witness = verdict.witness().map(j::grid_witness_to_json);
            Ok(Report::verdict(verdict.holds(), witness, vec![line]))
        }
        Command::Extend { input, map, .. } => {
            let value = read(input)?;
            let map = map.as_deref().map(parse_map).transpose()?;
            let result = match (j::table_from_value(&value, "")?, map) {
                (AnyTable::Exact(f), None) => j::poly_to_json(&MLPoly::extend(&f)),
                (AnyTable::Exact(f), Some(m)) if m.is_exact() => {
                    j::poly_to_json(&compose_univariate(&f, |v| m.apply_exact(v))?)
                }
                (AnyTable::Exact(f), Some(m)) => j::float_poly_to_json(
                    &compose_univariate(&f, |v| m.apply_float(v))?,
                    crate::multilinear::DEFAULT_FLOAT_TOLERANCE,
                ),
                (AnyTable::Float(f, tol), None) => j::float_poly_to_json(&MLPoly::extend(&f), tol),
                (AnyTable::Float(..), Some(_)) => {
                    return Err(CliError::Usage("--map requires an exact table".into()))
                }
            };
            Ok(Report::pass(Some(result), Vec::new()))
        }
        Command::Derive { input, beta, .. } => {
            let value = read(input)?;
            let is_poly = value.get("coeffs").is_some();
            let poly = if is_poly {
                j::poly_from_value(&value, "")?
            } else {
                match j::table_from_value(&value, "")? {
                    AnyTable::Exact(f) => AnyPoly::Exact(MLPoly::extend(&f)),
                    AnyTable::Float(f, tol) => AnyPoly::Float(MLPoly::extend(&f), tol),
                }
            };
            let d = match &poly {
                AnyPoly::Exact(p) => p.d(),
                AnyPoly::Float(p, _) => p.d(),
            };
            let beta = SubsetMask::from_elements(beta, d)?;
            let (mut result, vars) = match poly {
                AnyPoly::Exact(p) => {
                    let der = p.partial(beta);
                    (j::poly_to_json(&der.poly), der.vars)
                }
                AnyPoly::Float(p, tol) => {
                    let der = p.partial(beta);
                    (j::float_poly_to_json(&der.poly, tol), der.vars)
                }
            };
            result["vars"] = json!(vars);
            Ok(Report::pass(Some(result), Vec::new()))
        }
        Command::Partition {
            input, explicit, ..
        } => {
            let family = j::family_from_value(&read(input)?, "")?;
            let k = family.k();
            let options = PartitionOptions {
                explicit_k_plus_one: *explicit,
            };
            let partition = partition_upper_with(&family, k, options)?;
            let diag = verify_partition(&partition, &family, k)?;
            let issues: Vec<Value> = diag.issues.iter().map(|i| json!(i.to_string())).collect();
            let lines = vec![format!(
                "{} intervals covering {} of {} subsets{}",
                partition.intervals().len(),
                diag.total_size,
                1u64 << family.d(),
                if diag.is_valid() {
                    ""
                } else {
                    "; verification failed"
                }
            )];
            Ok(Report {
                passed: diag.is_valid(),
                witnesses: issues,
                seed: None,
                result: Some(j::partition_to_json(&partition)),
                lines,
            })
        }
        Command::Compound { input, k, mode, .. } => {
            let compound_input = j::compound_input_from_value(&read(input)?, "")?;
            let h = compound(&compound_input);
            let mut report = Report::pass(Some(j::grid_function_to_json(&h)), Vec::new());
            if let Some(k) = k {
                let v = check_fully_k(&h, *k, *mode, &rat(0))?;
                report.passed = v.holds();
                report
                    .lines
                    .push(mode_line("compound", v.holds(), *k, *mode));
                report
                    .witnesses
                    .extend(v.witness().map(j::grid_witness_to_json));
            }
            Ok(report)
        }
        Command::Certify { input, k, .. } => {
            let value = read(input)?;
            let m = j::object(&value, "")?;
            let f = j::exact_table_from_value(j::field(m, "f", "")?, "f")?;
            let grid = j::grid_from_value(j::field(m, "axes", "")?, "axes")?;
            let points = j::point_list(j::field(m, "points", "")?, "points")?;
            match indicator_decomposition(&f, *k, &points, &grid) {
                Ok(cert) => {
                    let lines = vec![format!(
                        "{} terms, weight sum {}",
                        cert.terms().len(),
                        cert.weight_sum()
                    )];
                    Ok(Report::pass(Some(j::certificate_to_json(&cert)), lines))
                }
                Err(Error::CertificateRefused(w)) => Ok(Report::verdict(
                    false,
                    Some(j::subset_witness_to_json(&w)),
                    vec![format!(
                        "certificate refused: table is not fully {k}-increasing"
                    )],
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Measure { input, .. } => {
            let value = read(input)?;
            if value.get("masses").is_some() {
                let mu = j::measure_from_value(&value, "")?;
                let m = j::object(&value, "")?;
                let grid = j::grid_from_value(j::field(m, "axes", "")?, "axes")?;
                let f = measure_to_df(&mu, &grid)?;
                Ok(Report::pass(Some(j::grid_function_to_json(&f)), Vec::new()))
            } else {
                let f = j::grid_function_from_value(&value, "")?;
                match df_to_measure(&f, &rat(0)) {
                    Ok(mu) => Ok(Report::pass(
                        Some(j::measure_to_json(&mu.canonical())),
                        Vec::new(),
                    )),
                    Err(Error::NotDistributionFunction(w)) => Ok(Report::verdict(
                        false,
                        Some(j::grid_witness_to_json(&w)),
                        vec!["not a distribution function".into()],
                    )),
                    Err(e) => Err(e.into()),
                }
            }
        }
        Command::Approx { input, .. } => {
            let value = read(input)?;
            let m = j::object(&value, "")?;
            let f = j::grid_function_from_value(j::field(m, "f", "")?, "f")?;
            let subgrid = j::point_list(j::field(m, "subgrid", "")?, "subgrid")?;
            let g = subgrid_approx(&f, &subgrid)?;
            Ok(Report::pass(Some(j::grid_function_to_json(&g)), Vec::new()))
        }
        Command::Gen {
            d, k, mode, seed, ..
        } => {
            let f = gen_fully_k(*d, *k, *mode, *seed)?;
            let mut report = Report::pass(Some(j::table_to_json(&f)), Vec::new());
            report.seed = Some(*seed);
            Ok(report)
        }
        Command::Selftest {
            seed,
            trials,
            mutate,
            ..
        } => {
            let r = selftest::run(SelftestOptions {
                seed: *seed,
                mutate: *mutate,
                trials: *trials,
            });
            let lines = r
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "[{}] {:>2} {}: {} ({} ms)",
                        if c.passed { "pass" } else { "FAIL" },
                        c.id,
                        c.name,
                        c.detail,
                        c.elapsed.as_millis()
                    )
                })
                .collect();
            let witnesses = r
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| json!({ "check": c.id, "detail": c.detail, "witness": c.witness }))
                .collect();
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| json!({ "id": c.id, "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            Ok(Report {
                passed: r.passed(),
                witnesses,
                seed: Some(*seed),
                result: Some(json!({ "checks": checks })),
                lines,
            })
        }
    }
}

fn parse_map(text: &str) -> CliResult<UnivariateMap> {
    match text {
        "identity" => Ok(UnivariateMap::Identity),
        "sqrt" => Ok(UnivariateMap::Sqrt),
        "log1p" => Ok(UnivariateMap::Log1p),
        other => match other.strip_prefix("power:") {
            Some(theta) => theta
                .parse::<f64>()
                .map(UnivariateMap::Power)
                .map_err(|_| CliError::Usage(format!("invalid exponent {theta:?}"))),
            None => Err(CliError::Usage(format!(
                "unknown map {other:?}; expected identity, sqrt, log1p or power:THETA"
            ))),
        },
    }
}

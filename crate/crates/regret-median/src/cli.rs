//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or output error, 2 invalid input,
//! 3 oracle violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use regret_median_core::evacuation::{cost_left, cost_right};
use regret_median_core::regret::max_regret_curve;
use regret_median_core::{median, solve_with, universe, PathNetwork, PointOnPath, Scenario, SolveOptions, Strategy};
use serde::Serialize;

use crate::check::oracle_check;
use crate::generate::{self, DEFAULT_SEED};
use crate::instance::{absolute, locate_absolute, read_instance};
use crate::report::{to_json, CostDoc, CurveDoc, CurveRow, MedianDoc, Num, PointDoc, SolutionDoc, UniverseDoc};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "regret-median", version, about = "Minimax regret sink location on dynamic path networks")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; `curve` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Progress and timings on standard error.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Table,
    Streaming,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Table => Strategy::Table,
            StrategyArg::Streaming => Strategy::Streaming,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an instance.
    Validate { file: PathBuf },
    /// Total evacuation time of one scenario at one sink position.
    Cost {
        file: PathBuf,
        /// Comma-separated supplies, one per vertex.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        scenario: Vec<f64>,
        /// Sink position in input coordinates.
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
    /// Cost-minimizing vertex of one scenario.
    Median {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        scenario: Vec<f64>,
    },
    /// Dump the critical scenario universe.
    Scenarios { file: PathBuf },
    /// Minimax regret sink with per-vertex and per-edge reports.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "streaming")]
        strategy: StrategyArg,
    },
    /// Maximum regret at evenly spaced points plus every vertex.
    Curve {
        file: PathBuf,
        #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Compare the solver with the reference engines.
    OracleCheck {
        file: PathBuf,
        /// Intermediate weights sampled per vertex.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
        grid: u64,
    },
    /// Time `solve` on seeded random instances.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [50usize, 100, 200])]
        n: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Instances per size.
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "streaming")]
        strategy: StrategyArg,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Self { code: EXIT_INVALID, message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Self { code: EXIT_USAGE, message: message.to_string() }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<PathNetwork, Failure> {
    read_instance(path).map_err(Failure::invalid)
}

fn scenario(net: &PathNetwork, weights: &[f64]) -> Result<Scenario, Failure> {
    net.scenario(weights.to_vec()).map_err(Failure::invalid)
}

fn log(cli: &Cli, message: impl FnOnce() -> String) {
    if cli.verbose {
        eprintln!("{}", message());
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::usage(e.to_string()))
        }
    }
}

fn json_only<T: Serialize>(cli: &Cli, doc: &T) -> Result<String, Failure> {
    match cli.format {
        Some(Format::Csv) => Err(Failure::usage("csv output is not available for this command")),
        _ => Ok(to_json(doc)),
    }
}

#[derive(Serialize)]
struct ValidDoc {
    valid: bool,
    vertices: usize,
    length: Num,
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    universe_sizes: Vec<usize>,
    seconds: Vec<f64>,
    median_seconds: f64,
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate { file } => {
            let net = load(file)?;
            let doc = ValidDoc { valid: true, vertices: net.len(), length: Num(net.length()) };
            emit(cli, &json_only(cli, &doc)?)?;
        }
        Command::Cost { file, scenario: w, at } => {
            let net = load(file)?;
            let s = scenario(&net, w)?;
            let x = locate_absolute(&net, *at).map_err(Failure::invalid)?;
            let (left, right) = (cost_left(&net, &s, &x), cost_right(&net, &s, &x));
            let doc = CostDoc { x: PointDoc::new(&net, &x), cost: Num(left + right), left: Num(left), right: Num(right) };
            let text = match cli.format {
                Some(Format::Csv) => format!("x,cost\n{},{}\n", Num(absolute(&net, &x)), Num(left + right)),
                _ => to_json(&doc),
            };
            emit(cli, &text)?;
        }
        Command::Median { file, scenario: w } => {
            let net = load(file)?;
            let s = scenario(&net, w)?;
            emit(cli, &json_only(cli, &MedianDoc::new(&net, &median(&net, &s)))?)?;
        }
        Command::Scenarios { file } => {
            let net = load(file)?;
            let u = universe(&net);
            let doc = UniverseDoc::new(&net, &u);
            let text = match cli.format {
                Some(Format::Csv) => doc.to_csv(),
                _ => to_json(&doc),
            };
            emit(cli, &text)?;
        }
        Command::Solve { file, strategy } => {
            let net = load(file)?;
            let start = Instant::now();
            let u = universe(&net);
            log(cli, || format!("universe: {} members ({} before deduplication)", u.len(), u.raw_count));
            let sol = solve_with(&net, &u, SolveOptions { strategy: (*strategy).into() });
            log(cli, || format!("solved in {:.3} s", start.elapsed().as_secs_f64()));
            let doc = SolutionDoc::new(&net, &u, &sol);
            let text = match cli.format {
                Some(Format::Csv) => doc.to_csv(),
                _ => to_json(&doc),
            };
            emit(cli, &text)?;
        }
        Command::Curve { file, samples } => {
            let net = load(file)?;
            let points = curve_points(&net, *samples as usize);
            let u = universe(&net);
            let values = max_regret_curve(&net, &u, &points);
            let doc = CurveDoc {
                samples: points
                    .iter()
                    .zip(values)
                    .map(|(x, r)| CurveRow { x: Num(absolute(&net, x)), r_max: Num(r) })
                    .collect(),
            };
            let text = match cli.format {
                Some(Format::Json) => to_json(&doc),
                _ => doc.to_csv(),
            };
            emit(cli, &text)?;
        }
        Command::OracleCheck { file, grid } => {
            let net = load(file)?;
            let report = oracle_check(&net, *grid as usize);
            for c in &report.checks {
                log(cli, || format!("{:<40} {}", c.name, if c.passed { "ok" } else { "VIOLATION" }));
            }
            emit(cli, &json_only(cli, &report)?)?;
            if !report.passed {
                eprintln!("error: oracle violation");
                return Ok(EXIT_ORACLE);
            }
        }
        Command::Bench { n, seed, repeats, strategy } => {
            if n.iter().any(|&n| n == 0) || *repeats == 0 {
                return Err(Failure::usage("sizes and repeats must be positive"));
            }
            let mut rows = Vec::new();
            for &size in n {
                let mut rng = generate::rng(seed.wrapping_add(size as u64));
                let mut seconds = Vec::new();
                let mut sizes = Vec::new();
                for _ in 0..*repeats {
                    let net = generate::dense_instance(&mut rng, size);
                    let start = Instant::now();
                    let u = universe(&net);
                    let sol = solve_with(&net, &u, SolveOptions { strategy: (*strategy).into() });
                    seconds.push(start.elapsed().as_secs_f64());
                    sizes.push(sol.universe_size);
                }
                let mut sorted = seconds.clone();
                sorted.sort_by(f64::total_cmp);
                let row = BenchRow { n: size, universe_sizes: sizes, seconds, median_seconds: sorted[sorted.len() / 2] };
                log(cli, || format!("n = {size}: median {:.3} s", row.median_seconds));
                rows.push(row);
            }
            let text = match cli.format {
                Some(Format::Csv) => {
                    let mut out = String::from("n,median_seconds,median_universe_size\n");
                    for r in &rows {
                        let mut u = r.universe_sizes.clone();
                        u.sort_unstable();
                        out.push_str(&format!("{},{},{}\n", r.n, Num(r.median_seconds), u[u.len() / 2]));
                    }
                    out
                }
                _ => to_json(&rows),
            };
            emit(cli, &text)?;
        }
    }
    Ok(0)
}

/// `samples` evenly spaced points over the path, merged with every vertex.
pub fn curve_points(net: &PathNetwork, samples: usize) -> Vec<PointOnPath> {
    let length = net.length();
    let steps = samples.saturating_sub(1).max(1) as f64;
    let mut xs: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples && samples > 1 { length } else { length * (k as f64 / steps) })
        .chain(net.positions().iter().copied())
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter().map(|x| net.locate(x).expect("inside the path")).collect()
}

//! Command-line interface.
//!
//! Exit codes: `0` success, `1` verification failure, `2` malformed input or
//! usage, `3` budget or size limit exceeded.

pub mod bench;
pub mod io;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::allrects2d::{compute_corners, corner_lower_bound, explain_all_rects, greedy_eliminate};
use crate::error::Error;
use crate::model::{
    all_rectangles, is_allowed_tree, verify, Explanation, Matrix, Rectangle, TreeInstance,
    WeightedRectangle,
};
use crate::oracle::{oracle_min_explanation, oracle_zwp, OracleConfig, DEFAULT_BUDGET, DEFAULT_ZWP_LIMIT};
use crate::seeds::rng_from_seed;
use crate::treextree::best_of_seeds;
use crate::zwp::{compute_deltas, explain_line, partition_to_intervals, zwp_lower_bound, Stage, Strategy, WeightedInterval, ZwpConfig};
use bench::{bench_csv, BenchConfig, TreeShape};
use io::{format_rational, read_input, read_matrix, Bounds, ExplanationFile, Input};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => CliError::Verification(e.to_string()),
            Error::LimitExceeded { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    /// Products of row-tree and column-tree nodes.
    Tree,
    /// Arbitrary rectangles of a matrix.
    Rects,
    /// Arbitrary intervals of a vector.
    Line,
}

impl Problem {
    fn name(self) -> &'static str {
        match self {
            Problem::Tree => "tree",
            Problem::Rects => "rects",
            Problem::Line => "line",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exact,
    Full,
    Simplified,
    Greedy4,
    Residual,
}

impl StrategyArg {
    fn name(self) -> &'static str {
        match self {
            StrategyArg::Exact => "exact",
            StrategyArg::Full => "full",
            StrategyArg::Simplified => "simplified",
            StrategyArg::Greedy4 => "greedy4",
            StrategyArg::Residual => "residual",
        }
    }

    fn zwp(self) -> Option<Strategy> {
        match self {
            StrategyArg::Exact => Some(Strategy::Exact),
            StrategyArg::Full => Some(Strategy::Full),
            StrategyArg::Simplified => Some(Strategy::Simplified),
            StrategyArg::Residual => Some(Strategy::Residual),
            StrategyArg::Greedy4 => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageArg {
    Triples,
    Quads,
}

#[derive(Debug, Parser)]
#[command(name = "rectsum", version, about = "Sparse exact explanations of matrices by weighted rectangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an explanation and write it as JSON.
    Explain(ExplainArgs),
    /// Check that an explanation reproduces a matrix.
    Verify(VerifyArgs),
    /// Exact minimum explanation by exhaustive search (small inputs only).
    Oracle(OracleArgs),
    /// Compare algorithms with the oracle on random instances; writes CSV.
    Bench(BenchArgs),
    /// Print the corner grid of a matrix with its lower bounds.
    Corners(DumpArgs),
    /// Print the delta profile of a vector.
    Deltas(DumpArgs),
}

#[derive(Debug, Args)]
struct ExplainArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    /// Matrix CSV or instance JSON.
    #[arg(long)]
    input: PathBuf,
    /// For `rects`, `exact` solves every grid line exactly; for `tree` it
    /// runs the oracle.
    #[arg(long, value_enum, default_value = "full")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs of the tree algorithm; the cheapest is kept.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Force the packing stage of the `full` strategy.
    #[arg(long, value_enum)]
    stage: Option<StageArg>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// CSV input has a header row and a label column.
    #[arg(long)]
    labels: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    explanation: PathBuf,
    /// Instance JSON whose trees every term must be allowed under.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    labels: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    input: PathBuf,
    /// Largest explanation size tried; for `line`, the largest number of
    /// nonzero deltas accepted.
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Where to write the witness explanation.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    labels: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Entry range `LO..HI`, inclusive.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    values: (i64, i64),
    #[arg(long)]
    instances: usize,
    /// Runs per randomized algorithm and instance.
    #[arg(long)]
    seeds: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "star")]
    trees: TreeShape,
    /// Build each matrix as a sum of this many random allowed rectangles.
    #[arg(long)]
    planted: Option<usize>,
    /// Oracle budget per instance.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Add a wall-time column (makes the output run-dependent).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DumpArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    labels: bool,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Runs the tool and returns its exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Explain(a) => cmd_explain(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Corners(a) => cmd_corners(a),
        Command::Deltas(a) => cmd_deltas(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn line_terms(intervals: Vec<WeightedInterval>) -> Vec<WeightedRectangle> {
    intervals
        .into_iter()
        .map(|iv| WeightedRectangle::new(Rectangle { i1: 1, i2: 1, j1: iv.j1, j2: iv.j2 }, iv.weight))
        .collect()
}

fn tree_instance(input: &Input) -> CliResult<TreeInstance> {
    let (rows, cols) = input.trees();
    Ok(TreeInstance::new(input.matrix.clone(), rows, cols)?)
}

fn bounds_for(a: &Matrix) -> Bounds {
    let grid = compute_corners(a);
    let mut total = 0;
    let mut exact = true;
    for i in 0..=a.rows() {
        let b = zwp_lower_bound(&grid.line_profile(i), DEFAULT_ZWP_LIMIT);
        exact &= b.exact;
        total += b.value;
    }
    Bounds {
        corner: Some(corner_lower_bound(a)),
        line: exact.then_some(total.div_ceil(2)),
        oracle: None,
    }
}

fn check_terms(a: &Matrix, terms: &[WeightedRectangle]) -> CliResult {
    for t in terms {
        t.rect.check_fits(a.rows(), a.cols())?;
    }
    let report = verify(a, terms)?;
    if let Some(m) = report.first_mismatch {
        return Err(CliError::Verification(format!(
            "mismatch at cell ({},{}): expected {}, got {}",
            m.row,
            m.col,
            format_rational(&m.expected),
            format_rational(&m.actual)
        )));
    }
    Ok(())
}

fn cmd_explain(args: ExplainArgs) -> CliResult<i32> {
    if args.trials == 0 {
        return Err(CliError::Input("--trials must be positive".into()));
    }
    let input = read_input(&args.input, args.labels)?;
    let config = ZwpConfig {
        stage: args.stage.map(|s| match s {
            StageArg::Triples => Stage::Triples,
            StageArg::Quads => Stage::Quads,
        }),
        ..ZwpConfig::default()
    };
    let unsupported = || {
        CliError::Input(format!(
            "strategy {} is not available for problem {}",
            args.strategy.name(),
            args.problem.name()
        ))
    };
    let mut instance = None;
    let (matrix, terms): (Matrix, Vec<WeightedRectangle>) = match args.problem {
        Problem::Line => {
            let v = input.vector()?;
            let row = Matrix::row_vector(&v)?;
            let terms = match args.strategy.zwp() {
                Some(strategy) => {
                    let (intervals, _) = explain_line(&v, strategy, &config, &mut rng_from_seed(args.seed))?;
                    line_terms(intervals)
                }
                None => greedy_eliminate(&row)?.into_terms(),
            };
            (row, terms)
        }
        Problem::Rects => {
            let a = input.matrix.clone();
            let terms = match args.strategy.zwp() {
                Some(strategy) => explain_all_rects(&a, strategy, &config, args.seed)?
                    .explanation
                    .into_terms(),
                None => greedy_eliminate(&a)?.into_terms(),
            };
            (a, terms)
        }
        Problem::Tree => {
            let inst = tree_instance(&input)?;
            let explanation = match args.strategy {
                StrategyArg::Full => best_of_seeds(&inst, args.trials, args.seed)?,
                StrategyArg::Exact => {
                    let res = oracle_min_explanation(&inst.matrix, &inst.allowed_family(), OracleConfig::default())?;
                    match (res.is_optimal(), res.witness) {
                        (true, Some(w)) => w,
                        _ => return Err(CliError::Limit("oracle budget exceeded".into())),
                    }
                }
                _ => return Err(unsupported()),
            };
            let a = inst.matrix.clone();
            instance = Some(inst);
            (a, explanation.into_terms())
        }
    };
    check_terms(&matrix, &terms)?;
    if let Some(inst) = &instance {
        for t in &terms {
            if !is_allowed_tree(&t.rect, inst)? {
                return Err(CliError::Verification(format!("{} is not allowed", t.rect)));
            }
        }
    }
    let mut file = ExplanationFile::new(args.problem.name(), args.strategy.name(), &terms);
    file.seed = Some(args.seed);
    file.rows = Some(matrix.rows());
    file.cols = Some(matrix.cols());
    file.bounds = bounds_for(&matrix);
    emit(args.output.as_deref(), &file.to_json())?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<i32> {
    let a = read_matrix(&args.matrix, args.labels)?;
    let file = ExplanationFile::read(&args.explanation)?;
    let terms = file.weighted_terms()?;
    if let Err(e) = check_terms(&a, &terms) {
        if let CliError::Input(msg) = e {
            // A term outside the matrix cannot reproduce it.
            return Err(CliError::Verification(msg));
        }
        return Err(e);
    }
    if let Some(path) = &args.instance {
        let input = read_input(path, args.labels)?;
        if input.matrix != a {
            return Err(CliError::Input("instance matrix differs from --matrix".into()));
        }
        let inst = tree_instance(&input)?;
        for t in &terms {
            if !is_allowed_tree(&t.rect, &inst)? {
                return Err(CliError::Verification(format!(
                    "{} is not allowed by the instance trees",
                    t.rect
                )));
            }
        }
    }
    println!("ok {} terms", terms.len());
    Ok(0)
}

fn cmd_oracle(args: OracleArgs) -> CliResult<i32> {
    let input = read_input(&args.input, args.labels)?;
    let (matrix, status, cost, lower, examined, terms) = if args.problem == Problem::Line {
        let v = input.vector()?;
        let profile = compute_deltas(&v)?;
        let res = oracle_zwp(&profile, args.max_size.unwrap_or(DEFAULT_ZWP_LIMIT))?;
        let terms = match &res.witness {
            Some(p) => line_terms(partition_to_intervals(p, &profile)?),
            None => Vec::new(),
        };
        (Matrix::row_vector(&v)?, res.status, res.cost, res.lower_bound, res.examined, terms)
    } else {
        let config = OracleConfig {
            k_max: args.max_size.unwrap_or(usize::MAX),
            budget: args.budget,
        };
        let family = if args.problem == Problem::Tree {
            tree_instance(&input)?.allowed_family()
        } else {
            all_rectangles(input.matrix.rows(), input.matrix.cols())
        };
        let res = oracle_min_explanation(&input.matrix, &family, config)?;
        let terms = res.witness.clone().map(Explanation::into_terms).unwrap_or_default();
        (input.matrix.clone(), res.status, res.cost, res.lower_bound, res.examined, terms)
    };
    let optimal = status == crate::oracle::OracleStatus::Optimal;
    println!("problem {}", args.problem.name());
    println!("status {}", if optimal { "optimal" } else { "budget-exceeded" });
    println!("cost {}", cost.map_or_else(|| "NA".to_string(), |c| c.to_string()));
    println!("lower_bound {lower}");
    println!("examined {examined}");
    if let Some(path) = &args.output {
        if cost.is_some() {
            check_terms(&matrix, &terms)?;
            let mut file = ExplanationFile::new(args.problem.name(), "oracle", &terms);
            file.rows = Some(matrix.rows());
            file.cols = Some(matrix.cols());
            file.bounds = Bounds {
                oracle: optimal.then_some(terms.len()),
                ..bounds_for(&matrix)
            };
            emit(Some(path), &file.to_json())?;
        }
    }
    Ok(if optimal { 0 } else { 3 })
}

fn cmd_bench(args: BenchArgs) -> CliResult<i32> {
    let (lo, hi) = args.values;
    let mut config = BenchConfig::new(args.problem, args.m, args.n, lo, hi);
    config.instances = args.instances;
    config.seeds = args.seeds;
    config.master_seed = args.seed;
    config.budget = args.budget;
    config.trees = args.trees;
    config.planted = args.planted;
    config.timing = args.timing;
    let csv = bench_csv(&config)?;
    emit(args.output.as_deref(), &csv)?;
    Ok(0)
}

fn cmd_corners(args: DumpArgs) -> CliResult<i32> {
    let a = read_matrix(&args.input, args.labels)?;
    let grid = compute_corners(&a);
    let mut out = String::new();
    for i in 0..=a.rows() {
        let line: Vec<String> = (0..=a.cols()).map(|j| format_rational(grid.get(i, j))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    for (i, j, v) in grid.corners() {
        out.push_str(&format!("corner {i} {j} {}\n", format_rational(&v)));
    }
    let bounds = bounds_for(&a);
    out.push_str(&format!("corners {}\n", grid.corner_count()));
    out.push_str(&format!("interior_corners {}\n", grid.interior_corner_count()));
    out.push_str(&format!("corner_bound {}\n", bounds.corner.unwrap_or(0)));
    out.push_str(&format!(
        "line_bound {}\n",
        bounds.line.map_or_else(|| "NA".to_string(), |b| b.to_string())
    ));
    emit(None, &out)?;
    Ok(0)
}

fn cmd_deltas(args: DumpArgs) -> CliResult<i32> {
    let v = read_input(&args.input, args.labels)?.vector()?;
    let profile = compute_deltas(&v)?;
    let values: Vec<String> = profile.deltas().iter().map(format_rational).collect();
    let bound = zwp_lower_bound(&profile, DEFAULT_ZWP_LIMIT);
    println!("{}", values.join(","));
    println!("nonzero {}", profile.nonzero_count());
    println!(
        "{} {}",
        if bound.exact { "optimum" } else { "lower_bound" },
        bound.value
    );
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-3..3").unwrap(), (-3, 3));
        assert_eq!(parse_range("1..=4").unwrap(), (1, 4));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Internal("x".into())).exit_code(), 1);
        assert_eq!(CliError::from(Error::InvalidInput("x".into())).exit_code(), 2);
        let limit = Error::LimitExceeded {
            what: "items",
            count: 3,
            limit: 2,
        };
        assert_eq!(CliError::from(limit).exit_code(), 3);
    }

    #[test]
    fn help_exits_zero_and_bad_usage_two() {
        assert_eq!(run(["rectsum", "--help"].map(OsString::from)), 0);
        assert_eq!(run(["rectsum", "explain"].map(OsString::from)), 2);
        assert_eq!(run(["rectsum", "frobnicate"].map(OsString::from)), 2);
    }
}

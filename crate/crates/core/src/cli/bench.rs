//! Random instance generators and the benchmark harness.
//!
//! Instance `k` of a run with master seed `s` is generated from
//! `sub_seed(s, 2k)`; its algorithm runs use `sub_seed(sub_seed(s, 2k + 1), t)`
//! for trial `t`. Rows come out in `(instance, algorithm)` order whatever the
//! thread scheduling, so the CSV is a pure function of the flags.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::Problem;
use crate::allrects2d::{corner_lower_bound, explain_all_rects, greedy_eliminate, line_lower_bound};
use crate::error::{Error, Result};
use crate::model::{all_rectangles, int, Hierarchy, Matrix, Rational, Rectangle, TreeInstance, TreeSpec, WeightedRectangle};
use crate::oracle::{oracle_min_explanation, oracle_zwp, OracleConfig, DEFAULT_BUDGET, DEFAULT_ZWP_LIMIT};
use crate::seeds::{rng_from_seed, sub_seed};
use crate::treextree::explain_tree_x_tree;
use crate::zwp::{compute_deltas, solve_zwp, Strategy, ZwpConfig};

/// Shape of generated hierarchies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TreeShape {
    Star,
    Binary,
    /// Star or binary, drawn per tree.
    Mixed,
    /// Random ordered tree with random fan-out and occasional chains.
    Random,
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, lo: i64, hi: i64) -> Matrix {
    Matrix::new(m, n, random_vector(rng, m * n, lo, hi)).expect("dimensions match")
}

/// Sum of `terms` rectangles drawn uniformly from `family`, each with a
/// nonzero weight from `lo..=hi`.
pub fn planted_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    family: &[Rectangle],
    terms: usize,
    lo: i64,
    hi: i64,
) -> Matrix {
    assert!(lo < 0 || hi > 0, "weight range must contain a nonzero value");
    let planted: Vec<WeightedRectangle> = (0..terms)
        .map(|_| {
            let rect = family[rng.gen_range(0..family.len())];
            let w = loop {
                let w = rng.gen_range(lo..=hi);
                if w != 0 {
                    break w;
                }
            };
            WeightedRectangle::new(rect, int(w))
        })
        .collect();
    Matrix::from_terms(m, n, &planted).expect("family fits the matrix")
}

pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, k: usize, shape: TreeShape) -> Hierarchy {
    fn build<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> TreeSpec {
        let node = if lo == hi {
            TreeSpec::Leaf(lo)
        } else {
            let parts = rng.gen_range(2..=hi - lo + 1);
            let mut cuts: Vec<usize> = rand::seq::index::sample(rng, hi - lo, parts - 1)
                .into_iter()
                .map(|c| lo + c + 1)
                .collect();
            cuts.sort_unstable();
            let mut start = lo;
            let mut children = Vec::with_capacity(parts);
            for cut in cuts.into_iter().chain(std::iter::once(hi + 1)) {
                children.push(build(rng, start, cut - 1));
                start = cut;
            }
            TreeSpec::Node(children)
        };
        if rng.gen_bool(0.15) {
            TreeSpec::Node(vec![node])
        } else {
            node
        }
    }
    match shape {
        TreeShape::Star => Hierarchy::star(k),
        TreeShape::Binary => Hierarchy::binary(k),
        TreeShape::Mixed => {
            if rng.gen_bool(0.5) {
                Hierarchy::star(k)
            } else {
                Hierarchy::binary(k)
            }
        }
        TreeShape::Random => {
            Hierarchy::from_spec(&build(rng, 1, k)).expect("generated tree is well formed")
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub problem: Problem,
    pub m: usize,
    pub n: usize,
    pub lo: i64,
    pub hi: i64,
    pub instances: usize,
    pub seeds: usize,
    pub master_seed: u64,
    pub budget: u64,
    pub trees: TreeShape,
    /// Plant this many rectangles instead of drawing cells independently.
    pub planted: Option<usize>,
    pub timing: bool,
    pub zwp: ZwpConfig,
}

impl BenchConfig {
    pub fn new(problem: Problem, m: usize, n: usize, lo: i64, hi: i64) -> Self {
        Self {
            problem,
            m,
            n,
            lo,
            hi,
            instances: 10,
            seeds: 10,
            master_seed: 0,
            budget: DEFAULT_BUDGET,
            trees: TreeShape::Star,
            planted: None,
            timing: false,
            zwp: ZwpConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.m == 0 || self.n == 0 {
            return bad(format!("dimensions must be positive, got {}x{}", self.m, self.n));
        }
        if self.lo > self.hi {
            return bad(format!("empty value range {}..{}", self.lo, self.hi));
        }
        if self.seeds == 0 {
            return bad("seeds must be positive".into());
        }
        if self.problem == Problem::Line && self.m != 1 {
            return bad(format!("line instances have one row, got m = {}", self.m));
        }
        if self.planted.is_some() && self.lo == 0 && self.hi == 0 {
            return bad("planted weights need a nonzero value range".into());
        }
        Ok(())
    }
}

/// One benchmark instance.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub matrix: Matrix,
    pub row_tree: Hierarchy,
    pub col_tree: Hierarchy,
}

impl BenchInstance {
    fn family(&self, problem: Problem) -> Vec<Rectangle> {
        match problem {
            Problem::Tree => self.tree_instance().allowed_family(),
            Problem::Rects | Problem::Line => all_rectangles(self.matrix.rows(), self.matrix.cols()),
        }
    }

    fn tree_instance(&self) -> TreeInstance {
        TreeInstance::new(self.matrix.clone(), self.row_tree.clone(), self.col_tree.clone())
            .expect("generated trees match the matrix")
    }
}

pub fn generate_instance(config: &BenchConfig, index: usize) -> BenchInstance {
    let mut rng = rng_from_seed(sub_seed(config.master_seed, 2 * index as u64));
    let (m, n) = (config.m, config.n);
    let (row_tree, col_tree) = if config.problem == Problem::Tree {
        (random_tree(&mut rng, m, config.trees), random_tree(&mut rng, n, config.trees))
    } else {
        (Hierarchy::star(m), Hierarchy::star(n))
    };
    let mut inst = BenchInstance {
        matrix: Matrix::zeros(m, n),
        row_tree,
        col_tree,
    };
    inst.matrix = match config.planted {
        Some(k) => {
            let family = inst.family(config.problem);
            planted_matrix(&mut rng, m, n, &family, k, config.lo, config.hi)
        }
        None => random_matrix(&mut rng, m, n, config.lo, config.hi),
    };
    inst
}

/// Algorithms compared for each problem, in output order.
pub fn algorithms(problem: Problem) -> &'static [&'static str] {
    match problem {
        Problem::Tree => &["sampling"],
        Problem::Rects | Problem::Line => &["full", "simplified", "greedy4"],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: usize,
    pub algorithm: &'static str,
    pub cost_mean: f64,
    pub cost_min: usize,
    pub oracle: Option<usize>,
    pub corner_bound: usize,
    pub line_bound: Option<usize>,
    pub wall_ms: f64,
}

impl BenchRow {
    /// `cost_mean / oracle`; an empty optimum paired with an empty answer is 1.
    pub fn ratio(&self) -> Option<f64> {
        match self.oracle? {
            0 if self.cost_mean == 0.0 => Some(1.0),
            0 => None,
            opt => Some(self.cost_mean / opt as f64),
        }
    }
}

fn run_algorithm(
    config: &BenchConfig,
    inst: &BenchInstance,
    algorithm: &str,
    seed: u64,
) -> Result<usize> {
    let a = &inst.matrix;
    let strategy = match algorithm {
        "sampling" => {
            let e = explain_tree_x_tree(&inst.tree_instance(), &mut rng_from_seed(seed))?;
            return Ok(e.cost());
        }
        "greedy4" => return Ok(greedy_eliminate(a)?.cost()),
        "full" => Strategy::Full,
        "simplified" => Strategy::Simplified,
        other => return Err(Error::InvalidInput(format!("unknown algorithm {other}"))),
    };
    if config.problem == Problem::Line {
        let profile = compute_deltas(a.row(0))?;
        Ok(solve_zwp(&profile, strategy, &config.zwp, &mut rng_from_seed(seed))?.cost())
    } else {
        Ok(explain_all_rects(a, strategy, &config.zwp, seed)?.explanation.cost())
    }
}

fn oracle_cost(config: &BenchConfig, inst: &BenchInstance) -> Result<Option<usize>> {
    if config.problem == Problem::Line {
        return Ok(match oracle_zwp(&compute_deltas(inst.matrix.row(0))?, DEFAULT_ZWP_LIMIT) {
            Ok(res) => res.optimum(),
            Err(Error::LimitExceeded { .. }) => None,
            Err(e) => return Err(e),
        });
    }
    let oracle_config = OracleConfig {
        budget: config.budget,
        ..OracleConfig::default()
    };
    let family = inst.family(config.problem);
    Ok(oracle_min_explanation(&inst.matrix, &family, oracle_config)?.optimum())
}

fn bench_instance(config: &BenchConfig, index: usize) -> Result<Vec<BenchRow>> {
    let inst = generate_instance(config, index);
    let oracle = oracle_cost(config, &inst)?;
    let corner_bound = corner_lower_bound(&inst.matrix);
    let line_bound = match line_lower_bound(&inst.matrix, DEFAULT_ZWP_LIMIT) {
        Ok(b) => Some(b),
        Err(Error::LimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let base = sub_seed(config.master_seed, 2 * index as u64 + 1);
    let mut rows = Vec::new();
    for &algorithm in algorithms(config.problem) {
        let start = Instant::now();
        let trials = if algorithm == "greedy4" { 1 } else { config.seeds };
        let costs = (0..trials)
            .map(|t| run_algorithm(config, &inst, algorithm, sub_seed(base, t as u64)))
            .collect::<Result<Vec<usize>>>()?;
        rows.push(BenchRow {
            instance: index,
            algorithm,
            cost_mean: costs.iter().sum::<usize>() as f64 / costs.len() as f64,
            cost_min: costs.iter().copied().min().unwrap_or(0),
            oracle,
            corner_bound,
            line_bound,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(rows)
}

/// Per-instance rows in deterministic order.
pub fn bench_rows(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let per_instance = (0..config.instances)
        .into_par_iter()
        .map(|k| bench_instance(config, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.4}")
}

fn fmt_opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

/// The benchmark CSV: one row per `(instance, algorithm)`, then one summary
/// row per algorithm with the mean and maximum ratio over instances that have
/// an oracle value.
pub fn bench_csv(config: &BenchConfig) -> Result<String> {
    let rows = bench_rows(config)?;
    let mut header = vec![
        "instance",
        "algorithm",
        "cost_mean",
        "cost_min",
        "oracle",
        "corner_bound",
        "line_bound",
        "ratio",
        "max_ratio",
    ];
    if config.timing {
        header.push("wall_ms");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for r in &rows {
        let mut record = vec![
            r.instance.to_string(),
            r.algorithm.to_string(),
            fmt_f64(r.cost_mean),
            r.cost_min.to_string(),
            fmt_opt(r.oracle),
            r.corner_bound.to_string(),
            fmt_opt(r.line_bound),
            fmt_opt(r.ratio().map(fmt_f64)),
            String::new(),
        ];
        if config.timing {
            record.push(fmt_f64(r.wall_ms));
        }
        w.write_record(&record).map_err(io)?;
    }
    if config.instances > 0 {
        for &algorithm in algorithms(config.problem) {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.algorithm == algorithm).collect();
            let ratios: Vec<f64> = mine.iter().filter_map(|r| r.ratio()).collect();
            let mean_cost = mine.iter().map(|r| r.cost_mean).sum::<f64>() / mine.len() as f64;
            let (mean, max) = if ratios.is_empty() {
                (None, None)
            } else {
                (
                    Some(ratios.iter().sum::<f64>() / ratios.len() as f64),
                    ratios.iter().copied().reduce(f64::max),
                )
            };
            let mut record = vec![
                "summary".to_string(),
                algorithm.to_string(),
                fmt_f64(mean_cost),
                String::new(),
                ratios.len().to_string(),
                String::new(),
                String::new(),
                fmt_opt(mean.map(fmt_f64)),
                fmt_opt(max.map(fmt_f64)),
            ];
            if config.timing {
                record.push(fmt_f64(mine.iter().map(|r| r.wall_ms).sum()));
            }
            w.write_record(&record).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

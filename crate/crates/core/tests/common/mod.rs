//! Shared helpers for the integration tests: independent reference
//! computations, generators and property checks.
#![allow(dead_code)]

use num::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use rectsum::allrects2d::{compute_corners, corner_lower_bound, explain_all_rects, greedy_eliminate, line_lower_bound};
use rectsum::cli::bench::{random_tree, TreeShape};
use rectsum::model::{all_rectangles, canonicalize, int, verify, Hierarchy, Matrix, Rational, Rectangle, WeightedRectangle};
use rectsum::oracle::{oracle_min_explanation, OracleConfig};
use rectsum::seeds::rng_from_seed;
use rectsum::tree1d::opt1_cost;
use rectsum::zwp::{compute_deltas, partition_to_intervals, point_sums, solve_zwp, DeltaProfile, Strategy as Zwp, ZwpConfig};

pub fn matrix(rows: &[Vec<i64>]) -> Matrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_ints(&refs).unwrap()
}

pub fn rect(i1: usize, i2: usize, j1: usize, j2: usize) -> Rectangle {
    Rectangle::new(i1, i2, j1, j2).unwrap()
}

pub fn term(i1: usize, i2: usize, j1: usize, j2: usize, w: i64) -> WeightedRectangle {
    WeightedRectangle::new(rect(i1, i2, j1, j2), int(w))
}

/// Cell-by-cell sum of weighted rectangles, without difference arrays.
pub fn naive_cover(rows: usize, cols: usize, terms: &[WeightedRectangle]) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::zero(); cols]; rows];
    for t in terms {
        for i in t.rect.i1..=t.rect.i2 {
            for j in t.rect.j1..=t.rect.j2 {
                out[i - 1][j - 1] += &t.weight;
            }
        }
    }
    out
}

pub fn covers_exactly(a: &Matrix, terms: &[WeightedRectangle]) -> bool {
    let cover = naive_cover(a.rows(), a.cols(), terms);
    (0..a.rows()).all(|i| (0..a.cols()).all(|j| &cover[i][j] == a.get(i, j)))
}

/// Number of nonzero cross differences, from the padded matrix directly.
pub fn naive_corner_count(a: &Matrix) -> (usize, usize) {
    let (m, n) = (a.rows() as isize, a.cols() as isize);
    let at = |i: isize, j: isize| -> Rational {
        if i >= 1 && i <= m && j >= 1 && j <= n {
            a.get(i as usize - 1, j as usize - 1).clone()
        } else {
            Rational::zero()
        }
    };
    let (mut all, mut interior) = (0, 0);
    for i in 0..=m {
        for j in 0..=n {
            let d = at(i, j) - at(i, j + 1) + at(i + 1, j + 1) - at(i + 1, j);
            if !d.is_zero() {
                all += 1;
                if i < m && j < n {
                    interior += 1;
                }
            }
        }
    }
    (all, interior)
}

/// Minimum zero-weight partition cost by enumerating every set partition of
/// the nonzero items (restricted growth strings).
pub fn exhaustive_zwp_cost(deltas: &[Rational]) -> usize {
    let items: Vec<&Rational> = deltas.iter().filter(|d| !d.is_zero()).collect();
    let r = items.len();
    if r == 0 {
        return 0;
    }
    let mut best_blocks = 0;
    let mut sums: Vec<Rational> = Vec::with_capacity(r);
    fn go(
        k: usize,
        items: &[&Rational],
        sums: &mut Vec<Rational>,
        best: &mut usize,
    ) {
        if k == items.len() {
            if sums.iter().all(Zero::is_zero) {
                *best = (*best).max(sums.len());
            }
            return;
        }
        for b in 0..=sums.len() {
            if b == sums.len() {
                sums.push(items[k].clone());
                go(k + 1, items, sums, best);
                sums.pop();
            } else {
                sums[b] += items[k];
                go(k + 1, items, sums, best);
                sums[b] -= items[k];
            }
        }
    }
    go(0, &items, &mut sums, &mut best_blocks);
    r - best_blocks
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn tree_from_seed(seed: u64, k: usize) -> Hierarchy {
    random_tree(&mut rng_from_seed(seed), k, TreeShape::Random)
}

pub fn small_values(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..=max_len)
}

pub fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-3i64..=3, n), m))
        .prop_map(|rows| matrix(&rows))
}

/// A small matrix built as a sum of up to four random rectangles, with the
/// planted terms (zero weights allowed, duplicates possible).
pub fn planted(max_dim: usize) -> impl Strategy<Value = (Matrix, Vec<WeightedRectangle>)> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(m, n)| {
            let family = all_rectangles(m, n);
            let count = family.len();
            (
                Just((m, n, family)),
                prop::collection::vec((0..count, -3i64..=3), 0..=4),
            )
        })
        .prop_map(|((m, n, family), picks)| {
            let terms: Vec<WeightedRectangle> = picks
                .into_iter()
                .map(|(idx, w)| WeightedRectangle::new(family[idx], int(w)))
                .collect();
            (Matrix::from_terms(m, n, &terms).unwrap(), terms)
        })
}

// Property checks, shared by the proptest suites and the acceptance run.

pub fn check_delta_sum(v: &[i64]) -> Result<(), TestCaseError> {
    let profile = compute_deltas(&ints(v)).unwrap();
    let total: Rational = profile.deltas().iter().sum();
    prop_assert!(total.is_zero());
    prop_assert_eq!(profile.len(), v.len() + 1);
    // Prefix sums of the deltas give the vector back.
    let mut acc = Rational::zero();
    for (k, d) in profile.deltas()[..v.len()].iter().enumerate() {
        acc += d;
        prop_assert_eq!(&acc, &int(v[k]));
    }
    Ok(())
}

pub fn check_grid_sums(a: &Matrix) -> Result<(), TestCaseError> {
    let g = compute_corners(a);
    let (m, n) = (a.rows(), a.cols());
    for i in 0..=m {
        let s: Rational = (0..=n).map(|j| g.get(i, j).clone()).sum();
        prop_assert!(s.is_zero(), "grid row {} sums to {}", i, s);
    }
    for j in 0..=n {
        let s: Rational = (0..=m).map(|i| g.get(i, j).clone()).sum();
        prop_assert!(s.is_zero(), "grid column {} sums to {}", j, s);
    }
    let (all, interior) = naive_corner_count(a);
    prop_assert_eq!(g.corner_count(), all);
    prop_assert_eq!(g.interior_corner_count(), interior);
    Ok(())
}

pub fn check_opt1_triangle(seed: u64, u: &[i64], v: &[i64]) -> Result<(), TestCaseError> {
    let k = u.len().min(v.len());
    let (u, v) = (ints(&u[..k]), ints(&v[..k]));
    let tree = tree_from_seed(seed, k);
    let sum: Vec<Rational> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
    let neg: Vec<Rational> = v.iter().map(|x| -x.clone()).collect();
    let (cu, cv, cs) = (
        opt1_cost(&tree, &u).unwrap(),
        opt1_cost(&tree, &v).unwrap(),
        opt1_cost(&tree, &sum).unwrap(),
    );
    prop_assert!(cs <= cu + cv, "opt1(u+v) = {} > {} + {}", cs, cu, cv);
    prop_assert_eq!(opt1_cost(&tree, &neg).unwrap(), cv);
    Ok(())
}

pub fn check_reconstruction(v: &[i64], seed: u64) -> Result<(), TestCaseError> {
    let v = ints(v);
    let profile = compute_deltas(&v).unwrap();
    for strategy in [Zwp::Full, Zwp::Simplified, Zwp::Residual, Zwp::Exact] {
        let out = solve_zwp(&profile, strategy, &ZwpConfig::default(), &mut rng_from_seed(seed)).unwrap();
        let intervals = partition_to_intervals(&out.partition, &profile).unwrap();
        prop_assert_eq!(intervals.len(), out.partition.cost());
        prop_assert!(intervals.iter().all(|iv| !iv.weight.is_zero()));
        prop_assert_eq!(point_sums(&intervals, v.len()), v.clone());
        // The endpoints of the intervals reproduce the delta profile.
        let mut d = vec![Rational::zero(); v.len() + 1];
        for iv in &intervals {
            d[iv.j1 - 1] += &iv.weight;
            d[iv.j2] -= &iv.weight;
        }
        prop_assert_eq!(d.as_slice(), profile.deltas());
    }
    Ok(())
}

pub fn check_canonicalize(a: &Matrix, terms: &[WeightedRectangle]) -> Result<(), TestCaseError> {
    prop_assert!(verify(a, terms).unwrap().ok);
    let canon = canonicalize(terms.to_vec());
    prop_assert!(verify(a, canon.terms()).unwrap().ok);
    prop_assert!(covers_exactly(a, canon.terms()));
    prop_assert!(canon.cost() <= terms.len());
    prop_assert!(canon.terms().iter().all(|t| !t.weight.is_zero()));
    prop_assert!(canon.terms().windows(2).all(|w| w[0].rect < w[1].rect));
    Ok(())
}

/// `max(corner, line) <= OPT <= algorithm` whenever the oracle finishes
/// within `budget`. Returns whether the oracle finished.
pub fn check_bounds_sandwich(a: &Matrix, seed: u64, budget: u64) -> Result<bool, TestCaseError> {
    let config = OracleConfig {
        budget,
        ..OracleConfig::default()
    };
    let res = oracle_min_explanation(a, &all_rectangles(a.rows(), a.cols()), config).unwrap();
    let Some(opt) = res.optimum() else {
        return Ok(false);
    };
    prop_assert!(covers_exactly(a, res.witness.as_ref().unwrap().terms()));
    let corner = corner_lower_bound(a);
    let line = line_lower_bound(a, 20).unwrap();
    prop_assert!(corner.max(line) <= opt, "bounds {}/{} exceed OPT {}", corner, line, opt);
    let greedy = greedy_eliminate(a).unwrap().cost();
    prop_assert!(opt <= greedy);
    for strategy in [Zwp::Full, Zwp::Simplified] {
        let out = explain_all_rects(a, strategy, &ZwpConfig::default(), seed).unwrap();
        prop_assert!(opt <= out.explanation.cost());
    }
    Ok(true)
}

pub fn profile_of(deltas: &[i64]) -> DeltaProfile {
    DeltaProfile::new(ints(deltas)).unwrap()
}


//! Exact exponential-time solvers for small instances.
//!
//! These are reference implementations used to certify the approximation
//! algorithms: a fraction-free linear solve for fixed rectangle sets, a
//! corner-driven subset search for minimum explanations, and a subset DP for
//! zero-weight partitions.

use std::ops::Add;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{
    canonicalize, verify, Explanation, Hierarchy, Matrix, Rational, Rectangle, WeightedRectangle,
};
use crate::zwp::{DeltaProfile, ZeroPartition};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_ZWP_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    /// `cost` is a certified minimum over the searched family.
    Optimal,
    /// The search stopped early; `cost` (if any) is only an upper bound and
    /// `lower_bound` is the largest size ruled out plus one.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<T> {
    pub status: OracleStatus,
    pub witness: Option<T>,
    pub cost: Option<usize>,
    pub lower_bound: usize,
    /// Search nodes plus linear solves.
    pub examined: u64,
}

impl<T> OracleResult<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == OracleStatus::Optimal
    }

    /// The certified optimum, if the search completed.
    pub fn optimum(&self) -> Option<usize> {
        if self.is_optimal() {
            self.cost
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest explanation size tried.
    pub k_max: usize,
    /// Maximum number of search nodes and linear solves.
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            k_max: usize::MAX,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Solves the exact system "weighted rectangles sum to `a` in every cell" for
/// the given rectangles, one unknown per rectangle. Returns `None` when the
/// system is inconsistent. Underdetermined systems get zero for free unknowns.
pub fn exact_weights_for(rects: &[Rectangle], a: &Matrix) -> Result<Option<Vec<Rational>>> {
    let (m, n) = (a.rows(), a.cols());
    for r in rects {
        r.check_fits(m, n)?;
    }
    let k = rects.len();
    // Scale the right-hand side to integers with a common denominator.
    let denom = a
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut system: Vec<Vec<BigInt>> = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let mut row: Vec<BigInt> = rects
                .iter()
                .map(|r| {
                    if r.contains(i + 1, j + 1) {
                        denom.clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect();
            let v = a.get(i, j);
            row.push(v.numer() * (&denom / v.denom()));
            system.push(row);
        }
    }
    let small: Option<Vec<Vec<i128>>> = system
        .iter()
        .map(|row| row.iter().map(ToPrimitive::to_i128).collect())
        .collect();
    let solved = match small.and_then(|rows| solve_fraction_free_i128(rows, k)) {
        Some(result) => result,
        None => solve_fraction_free(system, k),
    };
    let Some(solution) = solved else {
        return Ok(None);
    };
    let terms: Vec<WeightedRectangle> = rects
        .iter()
        .zip(&solution)
        .map(|(r, w)| WeightedRectangle::new(*r, w.clone()))
        .collect();
    if !verify(a, &terms)?.ok {
        return Err(Error::Internal(
            "linear solve returned weights that do not reproduce the matrix".into(),
        ));
    }
    Ok(Some(solution))
}

/// Bareiss elimination on the augmented integer system `[A | b]` with `k`
/// unknowns, followed by rational back-substitution.
fn solve_fraction_free(mut rows: Vec<Vec<BigInt>>, k: usize) -> Option<Vec<Rational>> {
    let total = rows.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..k {
        if r == total {
            break;
        }
        let Some(p) = (r..total).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..=k {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push((r, c));
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for &(row, c) in pivots.iter().rev() {
        let mut rhs = Rational::from_integer(rows[row][k].clone());
        for j in c + 1..k {
            if !rows[row][j].is_zero() {
                rhs -= Rational::from_integer(rows[row][j].clone()) * &x[j];
            }
        }
        x[c] = rhs / Rational::from_integer(rows[row][c].clone());
    }
    Some(x)
}

/// Same elimination in `i128`; `None` on overflow, `Some(None)` when the
/// system is inconsistent.
fn solve_fraction_free_i128(mut rows: Vec<Vec<i128>>, k: usize) -> Option<Option<Vec<Rational>>> {
    let total = rows.len();
    let mut prev: i128 = 1;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..k {
        if r == total {
            break;
        }
        let Some(p) = (r..total).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c];
            for j in c + 1..=k {
                let num = pivot_row[c]
                    .checked_mul(row[j])?
                    .checked_sub(factor.checked_mul(pivot_row[j])?)?;
                debug_assert_eq!(num % prev, 0);
                row[j] = num / prev;
            }
            row[c] = 0;
        }
        prev = pivot_row[c];
        pivots.push((r, c));
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] != 0) {
        return Some(None);
    }
    let mut x = vec![Rational::zero(); k];
    for &(row, c) in pivots.iter().rev() {
        let mut rhs = Rational::from_integer(BigInt::from(rows[row][k]));
        for j in c + 1..k {
            if rows[row][j] != 0 {
                rhs -= Rational::from_integer(BigInt::from(rows[row][j])) * &x[j];
            }
        }
        x[c] = rhs / Rational::from_integer(BigInt::from(rows[row][c]));
    }
    Some(Some(x))
}

fn corner_values(a: &Matrix) -> Vec<bool> {
    let (m, n) = (a.rows(), a.cols());
    let zero = Rational::zero();
    let get = |i: usize, j: usize| -> &Rational {
        if (1..=m).contains(&i) && (1..=n).contains(&j) {
            a.get(i - 1, j - 1)
        } else {
            &zero
        }
    };
    let mut out = Vec::with_capacity((m + 1) * (n + 1));
    for i in 0..=m {
        for j in 0..=n {
            let d = get(i, j) - get(i, j + 1) + get(i + 1, j + 1) - get(i + 1, j);
            out.push(!d.is_zero());
        }
    }
    out
}

struct Search<'a> {
    a: &'a Matrix,
    family: &'a [Rectangle],
    corners: Vec<[usize; 4]>,
    by_point: Vec<Vec<usize>>,
    target: Vec<bool>,
    count: Vec<u32>,
    chosen: Vec<usize>,
    banned: Vec<bool>,
    in_use: Vec<bool>,
    examined: u64,
    budget: u64,
    /// Row-major cells of `a` scaled to integers, when they fit in `i128`.
    int_cells: Option<Vec<i128>>,
}

enum Outcome {
    Found(Vec<WeightedRectangle>),
    Exhausted,
    OutOfBudget,
}

impl Search<'_> {
    fn demanded(&self, p: usize) -> bool {
        if self.target[p] {
            self.count[p] == 0
        } else {
            self.count[p] == 1
        }
    }

    fn toggle(&mut self, r: usize, add: bool) {
        for &p in &self.corners[r] {
            if add {
                self.count[p] += 1;
            } else {
                self.count[p] -= 1;
            }
        }
        self.in_use[r] = add;
        if add {
            self.chosen.push(r);
        } else {
            self.chosen.pop();
        }
    }

    /// Cheap integer consistency test; `true` when inconclusive.
    fn maybe_consistent(&self, rects: &[Rectangle]) -> bool {
        let Some(cells) = &self.int_cells else {
            return true;
        };
        let n = self.a.cols();
        let rows: Vec<Vec<i128>> = cells
            .iter()
            .enumerate()
            .map(|(c, &v)| {
                let (i, j) = (c / n + 1, c % n + 1);
                rects
                    .iter()
                    .map(|r| i128::from(r.contains(i, j)))
                    .chain(std::iter::once(v))
                    .collect()
            })
            .collect();
        !matches!(solve_fraction_free_i128(rows, rects.len()), Some(None))
    }

    fn tick(&mut self) -> bool {
        self.examined += 1;
        self.examined <= self.budget
    }

    /// Every grid point where the chosen rectangles place a corner must be an
    /// array corner of `a` or host at least two chosen corners; every array
    /// corner must host at least one.
    fn dfs(&mut self, slots: usize) -> Result<Outcome> {
        if !self.tick() {
            return Ok(Outcome::OutOfBudget);
        }
        let demanded: Vec<usize> = (0..self.target.len())
            .filter(|&p| self.demanded(p))
            .collect();
        if demanded.len() > 4 * slots {
            return Ok(Outcome::Exhausted);
        }
        let branch: Vec<usize> = match demanded.first() {
            Some(&p) => self.by_point[p].clone(),
            None => {
                if !self.tick() {
                    return Ok(Outcome::OutOfBudget);
                }
                let rects: Vec<Rectangle> = self.chosen.iter().map(|&r| self.family[r]).collect();
                if !self.maybe_consistent(&rects) {
                    if slots == 0 {
                        return Ok(Outcome::Exhausted);
                    }
                    (0..self.family.len()).collect()
                } else if let Some(w) = exact_weights_for(&rects, self.a)? {
                    let terms = rects
                        .into_iter()
                        .zip(w)
                        .map(|(r, w)| WeightedRectangle::new(r, w))
                        .collect();
                    return Ok(Outcome::Found(terms));
                } else {
                    if slots == 0 {
                        return Ok(Outcome::Exhausted);
                    }
                    (0..self.family.len()).collect()
                }
            }
        };
        if slots == 0 {
            return Ok(Outcome::Exhausted);
        }
        let mut newly_banned = Vec::new();
        let mut outcome = Outcome::Exhausted;
        for r in branch {
            if self.in_use[r] || self.banned[r] {
                continue;
            }
            self.toggle(r, true);
            let sub = self.dfs(slots - 1)?;
            self.toggle(r, false);
            match sub {
                Outcome::Exhausted => {
                    self.banned[r] = true;
                    newly_banned.push(r);
                }
                other => {
                    outcome = other;
                    break;
                }
            }
        }
        for r in newly_banned {
            self.banned[r] = false;
        }
        Ok(outcome)
    }
}

/// Minimum-size explanation of `a` using rectangles from `allowed`.
///
/// Sizes are tried in increasing order starting from the corner lower bound.
/// For each size, candidate subsets are generated by repeatedly branching on
/// the first grid point whose corner requirement is unmet (an array corner
/// nobody covers yet, or a non-corner point covered exactly once). Subsets in
/// which every requirement is met are tested with [`exact_weights_for`]. The
/// first size admitting a solution is optimal: a solution with a zero weight
/// would give a smaller feasible subset.
pub fn oracle_min_explanation(
    a: &Matrix,
    allowed: &[Rectangle],
    config: OracleConfig,
) -> Result<OracleResult<Explanation>> {
    let (m, n) = (a.rows(), a.cols());
    let mut family: Vec<Rectangle> = allowed.to_vec();
    family.sort_unstable();
    family.dedup();
    for r in &family {
        r.check_fits(m, n)?;
    }
    let point = |(i, j): (usize, usize)| i * (n + 1) + j;
    let corners: Vec<[usize; 4]> = family
        .iter()
        .map(|r| r.corner_points().map(point))
        .collect();
    let points = (m + 1) * (n + 1);
    let mut by_point = vec![Vec::new(); points];
    for (idx, cs) in corners.iter().enumerate() {
        for &p in cs {
            by_point[p].push(idx);
        }
    }
    let target = corner_values(a);
    let corner_count = target.iter().filter(|&&t| t).count();
    let start = corner_count.div_ceil(4);

    let mut search = Search {
        a,
        family: &family,
        corners,
        by_point,
        target,
        count: vec![0; points],
        chosen: Vec::new(),
        banned: vec![false; family.len()],
        in_use: vec![false; family.len()],
        examined: 0,
        budget: config.budget,
        int_cells: scaled_cells(a),
    };
    let k_limit = config.k_max.min(family.len());
    let mut k = start;
    while k <= k_limit {
        match search.dfs(k)? {
            Outcome::Found(terms) => {
                let expl = canonicalize(terms);
                return Ok(OracleResult {
                    status: OracleStatus::Optimal,
                    cost: Some(expl.cost()),
                    witness: Some(expl),
                    lower_bound: k,
                    examined: search.examined,
                });
            }
            Outcome::OutOfBudget => break,
            Outcome::Exhausted => k += 1,
        }
    }
    let fallback = cell_explanation(a, &family);
    Ok(OracleResult {
        status: OracleStatus::BudgetExceeded,
        cost: fallback.as_ref().map(Explanation::cost),
        witness: fallback,
        lower_bound: k,
        examined: search.examined,
    })
}

fn scaled_cells(a: &Matrix) -> Option<Vec<i128>> {
    let denom = a
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    a.entries()
        .iter()
        .map(|v| (v.numer() * (&denom / v.denom())).to_i128())
        .collect()
}

/// One single-cell rectangle per nonzero entry, if all of them are allowed.
fn cell_explanation(a: &Matrix, family: &[Rectangle]) -> Option<Explanation> {
    let mut terms = Vec::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let cell = Rectangle::cell(i + 1, j + 1);
            family.binary_search(&cell).ok()?;
            terms.push(WeightedRectangle::new(cell, v.clone()));
        }
    }
    Some(canonicalize(terms))
}

/// Minimum node weighting of `v` under `tree`, found by subset search over
/// the tree's leaf intervals. Independent of the dynamic program in
/// [`crate::tree1d`].
pub fn brute_force_min(
    tree: &Hierarchy,
    v: &[Rational],
    config: OracleConfig,
) -> Result<OracleResult<Explanation>> {
    if v.len() != tree.leaf_count() {
        return Err(Error::LengthMismatch {
            expected: tree.leaf_count(),
            found: v.len(),
        });
    }
    let column = Matrix::column_vector(v)?;
    let family: Vec<Rectangle> = tree
        .intervals()
        .into_iter()
        .map(|(lo, hi)| Rectangle {
            i1: lo,
            i2: hi,
            j1: 1,
            j2: 1,
        })
        .collect();
    oracle_min_explanation(&column, &family, config)
}

/// Maximum number of disjoint zero-sum groups covering all of `values`
/// (which must sum to zero), with a witness grouping of indices.
///
/// Subset DP: `best[S] = max over x in S of best[S - x] + [sum(S) == 0]`.
/// Ordering the items so that each group is a consecutive run, `best[full]`
/// counts the zero prefix sums, which is the number of groups.
fn max_zero_groups<T>(values: &[T]) -> (usize, Vec<Vec<usize>>)
where
    T: Clone + Zero + PartialEq + for<'a> Add<&'a T, Output = T>,
{
    let r = values.len();
    if r == 0 {
        return (0, Vec::new());
    }
    let full = (1usize << r) - 1;
    let mut sums: Vec<T> = Vec::with_capacity(full + 1);
    sums.push(T::zero());
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let s = sums[mask & (mask - 1)].clone() + &values[low];
        sums.push(s);
    }
    let mut best = vec![0u8; full + 1];
    for mask in 1..=full {
        let mut top = 0u8;
        let mut bits = mask;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            top = top.max(best[mask ^ b]);
            bits ^= b;
        }
        best[mask] = top + u8::from(sums[mask].is_zero());
    }
    let mut order = Vec::with_capacity(r);
    let mut mask = full;
    while mask != 0 {
        let bonus = u8::from(sums[mask].is_zero());
        let mut bits = mask;
        loop {
            let b = bits & bits.wrapping_neg();
            if best[mask ^ b] + bonus == best[mask] {
                order.push(b.trailing_zeros() as usize);
                mask ^= b;
                break;
            }
            bits ^= b;
        }
    }
    order.reverse();
    let mut groups = Vec::new();
    let mut current = Vec::new();
    let mut prefix = 0usize;
    for idx in order {
        prefix |= 1 << idx;
        current.push(idx);
        if sums[prefix].is_zero() {
            current.sort_unstable();
            groups.push(std::mem::take(&mut current));
        }
    }
    debug_assert!(current.is_empty());
    (usize::from(best[full]), groups)
}

/// Optimal zero-weight partition by subset DP over the nonzero deltas.
///
/// Zero deltas are free singletons. Fails when more than `limit` deltas are
/// nonzero; the work grows as `r * 2^r`.
pub fn oracle_zwp(profile: &DeltaProfile, limit: usize) -> Result<OracleResult<ZeroPartition>> {
    let deltas = profile.deltas();
    let nonzero: Vec<usize> = (0..deltas.len())
        .filter(|&k| !deltas[k].is_zero())
        .collect();
    let r = nonzero.len();
    if r > limit {
        return Err(Error::LimitExceeded {
            what: "nonzero deltas for exact zero-weight partition",
            count: r,
            limit,
        });
    }
    let denom = nonzero
        .iter()
        .fold(BigInt::one(), |acc, &k| acc.lcm(deltas[k].denom()));
    let scaled: Vec<BigInt> = nonzero
        .iter()
        .map(|&k| deltas[k].numer() * (&denom / deltas[k].denom()))
        .collect();
    let small_enough = scaled
        .iter()
        .map(|v| v.abs())
        .try_fold(0i64, |acc, v| v.to_i64().and_then(|x| acc.checked_add(x)))
        .is_some();
    let (_, groups) = if small_enough {
        let vals: Vec<i64> = scaled.iter().map(|v| v.to_i64().unwrap()).collect();
        max_zero_groups(&vals)
    } else {
        max_zero_groups(&scaled)
    };
    let mut sets: Vec<Vec<usize>> = (0..deltas.len())
        .filter(|&k| deltas[k].is_zero())
        .map(|k| vec![k])
        .collect();
    sets.extend(
        groups
            .into_iter()
            .map(|g| g.into_iter().map(|i| nonzero[i]).collect()),
    );
    let partition = ZeroPartition::new(sets);
    partition.validate(profile)?;
    let cost = partition.cost();
    Ok(OracleResult {
        status: OracleStatus::Optimal,
        witness: Some(partition),
        cost: Some(cost),
        lower_bound: cost,
        examined: 1u64 << r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{all_rectangles, int, ints};
    use crate::zwp::compute_deltas;

    fn first_example() -> (Matrix, Vec<Rectangle>) {
        let a = Matrix::from_ints(&[&[2, 2, 2, 2], &[5, 3, 1, 2], &[6, 4, 1, 3], &[5, 5, 2, 2]])
            .unwrap();
        let rects = vec![
            Rectangle::new(1, 4, 1, 4).unwrap(),
            Rectangle::new(2, 4, 1, 2).unwrap(),
            Rectangle::new(3, 3, 1, 4).unwrap(),
            Rectangle::new(2, 3, 2, 3).unwrap(),
            Rectangle::new(2, 2, 3, 3).unwrap(),
        ];
        (a, rects)
    }

    #[test]
    fn weights_for_first_example() {
        let (a, rects) = first_example();
        let w = exact_weights_for(&rects, &a).unwrap().unwrap();
        assert_eq!(w, ints(&[2, 3, 1, -2, 1]));
    }

    #[test]
    fn weights_whole_matrix() {
        let whole = [Rectangle::new(1, 2, 1, 2).unwrap()];
        let c = Matrix::from_ints(&[&[7, 7], &[7, 7]]).unwrap();
        assert_eq!(exact_weights_for(&whole, &c).unwrap(), Some(ints(&[7])));
        let id = Matrix::from_ints(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(exact_weights_for(&whole, &id).unwrap(), None);
    }

    #[test]
    fn weights_with_fractions() {
        let a = Matrix::from_rows(vec![vec![crate::model::ratio(1, 2), crate::model::ratio(5, 6)]])
            .unwrap();
        let rects = [Rectangle::new(1, 1, 1, 2).unwrap(), Rectangle::cell(1, 2)];
        let w = exact_weights_for(&rects, &a).unwrap().unwrap();
        assert_eq!(w, vec![crate::model::ratio(1, 2), crate::model::ratio(1, 3)]);
    }

    #[test]
    fn min_explanation_small_cases() {
        let zero = Matrix::zeros(3, 3);
        let res = oracle_min_explanation(&zero, &all_rectangles(3, 3), OracleConfig::default())
            .unwrap();
        assert_eq!(res.optimum(), Some(0));

        let ones = Matrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let res = oracle_min_explanation(&ones, &all_rectangles(2, 2), OracleConfig::default())
            .unwrap();
        assert_eq!(res.optimum(), Some(1));
    }

    #[test]
    fn min_explanation_first_example() {
        let (a, _) = first_example();
        let res =
            oracle_min_explanation(&a, &all_rectangles(4, 4), OracleConfig::default()).unwrap();
        assert!(res.is_optimal());
        assert!(res.cost.unwrap() <= 5);
        assert!(verify(&a, res.witness.unwrap().terms()).unwrap().ok);
    }

    #[test]
    fn budget_is_reported() {
        let (a, _) = first_example();
        let res = oracle_min_explanation(
            &a,
            &all_rectangles(4, 4),
            OracleConfig {
                k_max: usize::MAX,
                budget: 10,
            },
        )
        .unwrap();
        assert_eq!(res.status, OracleStatus::BudgetExceeded);
        // Every cell is in the family, so the per-cell bound is available.
        assert_eq!(res.cost, Some(16));
    }

    #[test]
    fn brute_force_examples() {
        let retail = Hierarchy::from_spec(&serde_json::from_str("[[1,2],3,4]").unwrap()).unwrap();
        let cfg = OracleConfig::default();
        let res = brute_force_min(&retail, &ints(&[6000, 8000, 8000, 8000]), cfg).unwrap();
        assert_eq!(res.optimum(), Some(2));
        let res = brute_force_min(&Hierarchy::star(4), &ints(&[5, 3, 4, 5]), cfg).unwrap();
        assert_eq!(res.optimum(), Some(3));
        let res = brute_force_min(&Hierarchy::star(4), &ints(&[0, 0, 0, 0]), cfg).unwrap();
        assert_eq!(res.optimum(), Some(0));
    }

    #[test]
    fn zwp_examples() {
        let d = compute_deltas(&ints(&[15, 8, 10, 17, 18, 15])).unwrap();
        let res = oracle_zwp(&d, DEFAULT_ZWP_LIMIT).unwrap();
        assert_eq!(res.cost, Some(4));
        assert_eq!(res.witness.unwrap().sets().len(), 3);

        let z = compute_deltas(&ints(&[0, 0, 0])).unwrap();
        assert_eq!(oracle_zwp(&z, DEFAULT_ZWP_LIMIT).unwrap().cost, Some(0));

        let pair = DeltaProfile::new(ints(&[3, -3])).unwrap();
        assert_eq!(oracle_zwp(&pair, DEFAULT_ZWP_LIMIT).unwrap().cost, Some(1));
    }

    #[test]
    fn zwp_limit() {
        let d = compute_deltas(&ints(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert!(matches!(
            oracle_zwp(&d, 3),
            Err(Error::LimitExceeded { count: 7, .. })
        ));
    }

    #[test]
    fn zwp_big_values_use_bigint_path() {
        let big = int(i64::MAX);
        let d = DeltaProfile::new(vec![big.clone(), big.clone(), -big.clone(), -big]).unwrap();
        assert_eq!(oracle_zwp(&d, DEFAULT_ZWP_LIMIT).unwrap().cost, Some(2));
    }
}

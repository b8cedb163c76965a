//! Two-dimensional all-rectangles problem.
//!
//! With the matrix padded by zeros, the cross difference at grid point
//! `(i, j)` (row line `0..=m`, column line `0..=n`) is
//!
//! ```text
//! d(i, j) = a(i, j) - a(i, j+1) + a(i+1, j+1) - a(i+1, j)
//! ```
//!
//! A weighted rectangle only changes `d` at its four corners, so a matrix
//! with `c` nonzero cross differences ("corners") needs at least `c / 4`
//! rectangles.
//!
//! [`explain_all_rects`] treats each horizontal grid line `i < m` as a 1-D
//! zero-weight partition problem and turns every resulting interval into a
//! rectangle hanging from that line down to the last row.
//! [`greedy_eliminate`] removes one interior corner per rectangle.

use num::Zero;

use crate::error::{Error, Result};
use crate::model::{canonicalize, verify, Explanation, Matrix, Rational, Rectangle, WeightedRectangle};
use crate::oracle::oracle_zwp;
use crate::seeds::{rng_from_seed, sub_seed};
use crate::zwp::{partition_to_intervals, solve_zwp, DeltaProfile, Strategy, ZwpConfig};

/// Cross differences on the `(m + 1) x (n + 1)` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerGrid {
    rows: usize,
    cols: usize,
    values: Vec<Rational>,
}

impl CornerGrid {
    /// Number of matrix rows `m`; grid lines run over `0..=m`.
    pub fn matrix_rows(&self) -> usize {
        self.rows
    }

    pub fn matrix_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.values[i * (self.cols + 1) + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.values[i * (self.cols + 1) + j]
    }

    /// Grid points with a nonzero value, row-major.
    pub fn corners(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..=self.rows {
            for j in 0..=self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn corner_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    /// Corners with `i < m` and `j < n`.
    pub fn interior_corner_count(&self) -> usize {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .count()
    }

    /// Values along horizontal grid line `i`, as a 1-D delta profile.
    pub fn line_profile(&self, i: usize) -> DeltaProfile {
        let row = &self.values[i * (self.cols + 1)..(i + 1) * (self.cols + 1)];
        DeltaProfile::new(row.to_vec()).expect("grid lines sum to zero")
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

pub fn compute_corners(a: &Matrix) -> CornerGrid {
    let (m, n) = (a.rows(), a.cols());
    let zero = Rational::zero();
    let get = |i: usize, j: usize| -> &Rational {
        if (1..=m).contains(&i) && (1..=n).contains(&j) {
            a.get(i - 1, j - 1)
        } else {
            &zero
        }
    };
    let mut values = Vec::with_capacity((m + 1) * (n + 1));
    for i in 0..=m {
        for j in 0..=n {
            values.push(get(i, j) - get(i, j + 1) + get(i + 1, j + 1) - get(i + 1, j));
        }
    }
    CornerGrid {
        rows: m,
        cols: n,
        values,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllRectsOutcome {
    pub explanation: Explanation,
    /// Partition cost chosen on each grid line `0..m`.
    pub line_costs: Vec<usize>,
    /// Some line hit a candidate or improvement cap.
    pub capped: bool,
}

/// Bottom-anchored algorithm: grid line `i` contributes `Rect(i+1, m, j1, j2)`
/// for every interval `[j1, j2]` of its 1-D solution. Line `i` draws its
/// randomness from `sub_seed(seed, i)`.
pub fn explain_all_rects(
    a: &Matrix,
    strategy: Strategy,
    config: &ZwpConfig,
    seed: u64,
) -> Result<AllRectsOutcome> {
    let m = a.rows();
    let grid = compute_corners(a);
    let mut terms = Vec::new();
    let mut line_costs = Vec::with_capacity(m);
    let mut capped = false;
    for i in 0..m {
        let profile = grid.line_profile(i);
        let mut rng = rng_from_seed(sub_seed(seed, i as u64));
        let outcome = solve_zwp(&profile, strategy, config, &mut rng)?;
        capped |= outcome.candidate_cap_hit || outcome.improvement_cap_hit;
        let intervals = partition_to_intervals(&outcome.partition, &profile)?;
        line_costs.push(intervals.len());
        terms.extend(intervals.into_iter().map(|iv| {
            WeightedRectangle::new(
                Rectangle {
                    i1: i + 1,
                    i2: m,
                    j1: iv.j1,
                    j2: iv.j2,
                },
                iv.weight,
            )
        }));
    }
    let mut residual = a.clone();
    residual.add_terms(&terms, true)?;
    if !residual.is_zero() {
        return Err(Error::Internal(
            "bottom-anchored rectangles leave a nonzero residual".into(),
        ));
    }
    let explanation = canonicalize(terms);
    debug_assert_eq!(explanation.cost(), line_costs.iter().sum::<usize>());
    Ok(AllRectsOutcome {
        explanation,
        line_costs,
        capped,
    })
}

/// Repeatedly takes the first interior corner `(i, j)` in row-major order and
/// cancels it with `Rect(i+1, m, j+1, n)`, which only touches border grid
/// points otherwise. Once no interior corner remains, the zero row and column
/// sums of the grid force the border to vanish too.
pub fn greedy_eliminate(a: &Matrix) -> Result<Explanation> {
    let (m, n) = (a.rows(), a.cols());
    let mut grid = compute_corners(a);
    let mut terms = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let w = grid.get(i, j).clone();
            if w.is_zero() {
                continue;
            }
            *grid.get_mut(i, j) -= &w;
            *grid.get_mut(i, n) += &w;
            *grid.get_mut(m, j) += &w;
            *grid.get_mut(m, n) -= &w;
            terms.push(WeightedRectangle::new(
                Rectangle {
                    i1: i + 1,
                    i2: m,
                    j1: j + 1,
                    j2: n,
                },
                w,
            ));
        }
    }
    if !grid.is_zero() {
        return Err(Error::Internal(
            "border corners remain after interior elimination".into(),
        ));
    }
    let explanation = canonicalize(terms);
    if !verify(a, explanation.terms())?.ok {
        return Err(Error::Internal(
            "greedy elimination does not reproduce the matrix".into(),
        ));
    }
    Ok(explanation)
}

/// `ceil(corners / 4)`.
pub fn corner_lower_bound(a: &Matrix) -> usize {
    compute_corners(a).corner_count().div_ceil(4)
}

/// `ceil(sum_i OPT_i / 2)` over all grid lines `0..=m`, where `OPT_i` is the
/// exact partition cost of line `i`. Every rectangle has its top and bottom
/// edges on two grid lines. Fails when a line has more than `limit` corners.
pub fn line_lower_bound(a: &Matrix, limit: usize) -> Result<usize> {
    let grid = compute_corners(a);
    let mut total = 0;
    for i in 0..=a.rows() {
        let res = oracle_zwp(&grid.line_profile(i), limit)?;
        total += res.cost.expect("exact result carries a cost");
    }
    Ok(total.div_ceil(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int, ints};
    use crate::zwp::compute_deltas;

    fn ones() -> Matrix {
        Matrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap()
    }

    fn first_example() -> Matrix {
        Matrix::from_ints(&[&[2, 2, 2, 2], &[5, 3, 1, 2], &[6, 4, 1, 3], &[5, 5, 2, 2]]).unwrap()
    }

    #[test]
    fn corners_of_ones() {
        let g = compute_corners(&ones());
        assert_eq!(
            g.corners(),
            vec![(0, 0, int(1)), (0, 2, int(-1)), (2, 0, int(-1)), (2, 2, int(1))]
        );
        assert_eq!(g.interior_corner_count(), 1);
        assert!(compute_corners(&Matrix::zeros(3, 2)).is_zero());
    }

    #[test]
    fn single_row_matches_deltas() {
        let v = ints(&[15, 8, 10, 17, 18, 15]);
        let g = compute_corners(&Matrix::row_vector(&v).unwrap());
        let d = compute_deltas(&v).unwrap();
        assert_eq!(g.line_profile(0), d);
        let negated: Vec<Rational> = d.deltas().iter().map(|x| -x.clone()).collect();
        assert_eq!(g.line_profile(1).deltas(), negated);
    }

    #[test]
    fn grid_lines_sum_to_zero() {
        let g = compute_corners(&first_example());
        for i in 0..=4 {
            let s: Rational = (0..=4).map(|j| g.get(i, j).clone()).sum();
            assert!(s.is_zero());
            let c: Rational = (0..=4).map(|j| g.get(j, i).clone()).sum();
            assert!(c.is_zero());
        }
    }

    #[test]
    fn all_rects_on_ones() {
        let out = explain_all_rects(&ones(), Strategy::Exact, &ZwpConfig::default(), 0).unwrap();
        assert_eq!(
            out.explanation.terms(),
            &[WeightedRectangle::new(Rectangle::new(1, 2, 1, 2).unwrap(), int(1))]
        );
        assert_eq!(out.line_costs, vec![1, 0]);
    }

    #[test]
    fn all_rects_on_first_example() {
        let a = first_example();
        for strategy in [
            Strategy::Exact,
            Strategy::Full,
            Strategy::Simplified,
            Strategy::Residual,
        ] {
            for seed in 0..5 {
                let out = explain_all_rects(&a, strategy, &ZwpConfig::default(), seed).unwrap();
                assert!(verify(&a, out.explanation.terms()).unwrap().ok);
                assert!(out.explanation.terms().iter().all(|t| t.rect.i2 == 4));
            }
        }
    }

    #[test]
    fn zero_matrix_everything_empty() {
        let z = Matrix::zeros(3, 3);
        let out = explain_all_rects(&z, Strategy::Full, &ZwpConfig::default(), 9).unwrap();
        assert!(out.explanation.is_empty());
        assert!(greedy_eliminate(&z).unwrap().is_empty());
        assert_eq!(corner_lower_bound(&z), 0);
        assert_eq!(line_lower_bound(&z, 20).unwrap(), 0);
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_eliminate(&ones()).unwrap();
        assert_eq!(
            g.terms(),
            &[WeightedRectangle::new(Rectangle::new(1, 2, 1, 2).unwrap(), int(1))]
        );
        let a = first_example();
        let g = greedy_eliminate(&a).unwrap();
        assert!(g.cost() <= compute_corners(&a).interior_corner_count());
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(corner_lower_bound(&ones()), 1);
        assert_eq!(line_lower_bound(&ones(), 20).unwrap(), 1);
        let cell = Matrix::from_ints(&[&[7]]).unwrap();
        assert_eq!(corner_lower_bound(&cell), 1);
        let v = Matrix::row_vector(&ints(&[15, 8, 10, 17, 18, 15])).unwrap();
        assert_eq!(line_lower_bound(&v, 20).unwrap(), 4);
        assert!(matches!(
            line_lower_bound(&v, 3),
            Err(Error::LimitExceeded { .. })
        ));
    }
}

//! Matrices, rectangles, hierarchies and explanations.
//!
//! Matrix storage is 0-based (`get(row, col)`), while [`Rectangle`] bounds are
//! 1-based and inclusive, matching the file formats. All arithmetic is exact.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be at least 1x1");
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| ints(r)).collect())
    }

    /// A `1 x n` matrix holding `values` as its only row.
    pub fn row_vector(values: &[Rational]) -> Result<Self> {
        Self::new(1, values.len(), values.to_vec())
    }

    /// An `m x 1` matrix holding `values` as its only column.
    pub fn column_vector(values: &[Rational]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|v| !v.is_zero()).count()
    }

    /// The matrix obtained by summing `terms`, each rectangle contributing its
    /// weight to every cell it contains.
    pub fn from_terms(rows: usize, cols: usize, terms: &[WeightedRectangle]) -> Result<Self> {
        let mut acc = Self::zeros(rows, cols);
        acc.add_terms(terms, false)?;
        Ok(acc)
    }

    /// Adds (or subtracts) each weighted rectangle to the covered cells.
    pub fn add_terms(&mut self, terms: &[WeightedRectangle], subtract: bool) -> Result<()> {
        for t in terms {
            t.rect.check_fits(self.rows, self.cols)?;
        }
        // 2-D difference array, then prefix sums.
        let (m, n) = (self.rows, self.cols);
        let mut diff = vec![Rational::zero(); (m + 1) * (n + 1)];
        let at = |i: usize, j: usize| i * (n + 1) + j;
        for t in terms {
            let r = &t.rect;
            let w = if subtract {
                -t.weight.clone()
            } else {
                t.weight.clone()
            };
            diff[at(r.i1 - 1, r.j1 - 1)] += &w;
            diff[at(r.i1 - 1, r.j2)] -= &w;
            diff[at(r.i2, r.j1 - 1)] -= &w;
            diff[at(r.i2, r.j2)] += &w;
        }
        for i in 0..=m {
            for j in 1..=n {
                let left = diff[at(i, j - 1)].clone();
                diff[at(i, j)] += left;
            }
        }
        for i in 1..=m {
            for j in 0..=n {
                let up = diff[at(i - 1, j)].clone();
                diff[at(i, j)] += up;
            }
        }
        for i in 0..m {
            for j in 0..n {
                self.entries[i * n + j] += &diff[at(i, j)];
            }
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Axis-aligned index rectangle, 1-based and inclusive on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rectangle {
    pub i1: usize,
    pub i2: usize,
    pub j1: usize,
    pub j2: usize,
}

impl Rectangle {
    pub fn new(i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Self> {
        if i1 == 0 || j1 == 0 || i1 > i2 || j1 > j2 {
            return Err(Error::InvalidInput(format!(
                "malformed rectangle rows {i1}..={i2}, cols {j1}..={j2}"
            )));
        }
        Ok(Self { i1, i2, j1, j2 })
    }

    pub fn cell(i: usize, j: usize) -> Self {
        Self {
            i1: i,
            i2: i,
            j1: j,
            j2: j,
        }
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        1 <= self.i1
            && self.i1 <= self.i2
            && self.i2 <= rows
            && 1 <= self.j1
            && self.j1 <= self.j2
            && self.j2 <= cols
    }

    pub fn check_fits(&self, rows: usize, cols: usize) -> Result<()> {
        if self.fits(rows, cols) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                rect: *self,
                rows,
                cols,
            })
        }
    }

    /// Whether the 1-based cell `(i, j)` lies inside.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.i1 <= i && i <= self.i2 && self.j1 <= j && j <= self.j2
    }

    pub fn transpose(&self) -> Self {
        Self {
            i1: self.j1,
            i2: self.j2,
            j1: self.i1,
            j2: self.i2,
        }
    }

    /// The four grid points `(row line, column line)` at which this
    /// rectangle has a corner. Grid lines run from 0 to m (resp. n).
    pub fn corner_points(&self) -> [(usize, usize); 4] {
        [
            (self.i1 - 1, self.j1 - 1),
            (self.i1 - 1, self.j2),
            (self.i2, self.j1 - 1),
            (self.i2, self.j2),
        ]
    }

    fn key(&self) -> (usize, usize, usize, usize) {
        (self.i1, self.j1, self.i2, self.j2)
    }
}

impl Ord for Rectangle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Rectangle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rect({},{},{},{})", self.i1, self.i2, self.j1, self.j2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedRectangle {
    pub rect: Rectangle,
    pub weight: Rational,
}

impl WeightedRectangle {
    pub fn new(rect: Rectangle, weight: Rational) -> Self {
        Self { rect, weight }
    }
}

/// A canonical set of weighted rectangles: distinct rectangles, nonzero
/// weights, sorted by `(i1, j1, i2, j2)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Explanation {
    terms: Vec<WeightedRectangle>,
}

impl Explanation {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[WeightedRectangle] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<WeightedRectangle> {
        self.terms
    }

    pub fn cost(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn transpose(&self) -> Self {
        canonicalize(
            self.terms
                .iter()
                .map(|t| WeightedRectangle::new(t.rect.transpose(), t.weight.clone())),
        )
    }
}

impl FromIterator<WeightedRectangle> for Explanation {
    fn from_iter<I: IntoIterator<Item = WeightedRectangle>>(iter: I) -> Self {
        canonicalize(iter)
    }
}

/// Merges duplicate rectangles by summing their weights and drops the terms
/// whose weight ends up zero.
pub fn canonicalize<I>(terms: I) -> Explanation
where
    I: IntoIterator<Item = WeightedRectangle>,
{
    let mut merged: BTreeMap<Rectangle, Rational> = BTreeMap::new();
    for t in terms {
        *merged.entry(t.rect).or_insert_with(Rational::zero) += t.weight;
    }
    Explanation {
        terms: merged
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(rect, weight)| WeightedRectangle { rect, weight })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based row.
    pub row: usize,
    /// 1-based column.
    pub col: usize,
    pub expected: Rational,
    pub actual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Checks that the weights of the rectangles covering each cell sum exactly
/// to the matrix entry. The first failing cell in row-major order is reported.
pub fn verify(matrix: &Matrix, terms: &[WeightedRectangle]) -> Result<VerificationReport> {
    let sums = Matrix::from_terms(matrix.rows(), matrix.cols(), terms)?;
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            if sums.get(i, j) != matrix.get(i, j) {
                return Ok(VerificationReport {
                    ok: false,
                    first_mismatch: Some(Mismatch {
                        row: i + 1,
                        col: j + 1,
                        expected: matrix.get(i, j).clone(),
                        actual: sums.get(i, j).clone(),
                    }),
                });
            }
        }
    }
    Ok(VerificationReport {
        ok: true,
        first_mismatch: None,
    })
}

pub type NodeId = usize;

/// Nested description of an ordered tree: a number is a leaf index, a list
/// is an internal node with the listed children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeSpec {
    Leaf(usize),
    Node(Vec<TreeSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TreeNode {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    lo: usize,
    hi: usize,
}

/// Rooted ordered tree whose leaves are the indices `1..=k` left to right.
///
/// Node ids are assigned in preorder, so the root is `0` and every parent id
/// is smaller than its children's ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    nodes: Vec<TreeNode>,
    leaf_nodes: Vec<NodeId>,
}

impl Hierarchy {
    pub fn from_spec(spec: &TreeSpec) -> Result<Self> {
        let mut tree = Hierarchy {
            nodes: Vec::new(),
            leaf_nodes: Vec::new(),
        };
        tree.push(spec, None)?;
        if tree.leaf_nodes.is_empty() {
            return Err(Error::InvalidInput("tree has no leaves".into()));
        }
        Ok(tree)
    }

    fn push(&mut self, spec: &TreeSpec, parent: Option<NodeId>) -> Result<NodeId> {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            parent,
            children: Vec::new(),
            lo: 0,
            hi: 0,
        });
        match spec {
            TreeSpec::Leaf(index) => {
                let expected = self.leaf_nodes.len() + 1;
                if *index != expected {
                    return Err(Error::InvalidInput(format!(
                        "tree leaves must be 1..k in left-to-right order; expected leaf {expected}, found {index}"
                    )));
                }
                self.leaf_nodes.push(id);
                self.nodes[id].lo = *index;
                self.nodes[id].hi = *index;
            }
            TreeSpec::Node(children) => {
                if children.is_empty() {
                    return Err(Error::InvalidInput(
                        "internal tree node without children".into(),
                    ));
                }
                let mut ids = Vec::with_capacity(children.len());
                for child in children {
                    ids.push(self.push(child, Some(id))?);
                }
                self.nodes[id].lo = self.nodes[ids[0]].lo;
                self.nodes[id].hi = self.nodes[*ids.last().unwrap()].hi;
                self.nodes[id].children = ids;
            }
        }
        Ok(id)
    }

    pub fn to_spec(&self) -> TreeSpec {
        self.spec_of(self.root())
    }

    fn spec_of(&self, node: NodeId) -> TreeSpec {
        let n = &self.nodes[node];
        if n.children.is_empty() {
            TreeSpec::Leaf(n.lo)
        } else {
            TreeSpec::Node(n.children.iter().map(|&c| self.spec_of(c)).collect())
        }
    }

    /// Root with `k` leaf children (a single leaf when `k == 1`).
    pub fn star(k: usize) -> Self {
        assert!(k >= 1);
        let spec = if k == 1 {
            TreeSpec::Leaf(1)
        } else {
            TreeSpec::Node((1..=k).map(TreeSpec::Leaf).collect())
        };
        Self::from_spec(&spec).expect("star is well formed")
    }

    /// Balanced binary tree over `k` leaves (left half gets the extra leaf).
    pub fn binary(k: usize) -> Self {
        fn build(lo: usize, hi: usize) -> TreeSpec {
            if lo == hi {
                TreeSpec::Leaf(lo)
            } else {
                let mid = lo + (hi - lo) / 2;
                TreeSpec::Node(vec![build(lo, mid), build(mid + 1, hi)])
            }
        }
        assert!(k >= 1);
        Self::from_spec(&build(1, k)).expect("binary tree is well formed")
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_nodes.len()
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.nodes[node].children
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.nodes[node].parent
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.nodes[node].children.is_empty()
    }

    /// Node of the leaf carrying the 1-based index `index`.
    pub fn leaf_node(&self, index: usize) -> NodeId {
        self.leaf_nodes[index - 1]
    }

    /// Contiguous 1-based interval of leaf indices under `node`.
    pub fn leaf_interval(&self, node: NodeId) -> Result<(usize, usize)> {
        self.nodes
            .get(node)
            .map(|n| (n.lo, n.hi))
            .ok_or(Error::UnknownNode(node))
    }

    pub(crate) fn interval(&self, node: NodeId) -> (usize, usize) {
        (self.nodes[node].lo, self.nodes[node].hi)
    }

    /// Distinct leaf intervals of all nodes, sorted.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.nodes.iter().map(|n| (n.lo, n.hi)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_interval(&self, lo: usize, hi: usize) -> bool {
        self.nodes.iter().any(|n| n.lo == lo && n.hi == hi)
    }

    /// Collapses single-child chains; the leaf-interval family is unchanged.
    pub fn normalized(&self) -> Self {
        fn collapse(spec: TreeSpec) -> TreeSpec {
            match spec {
                TreeSpec::Leaf(i) => TreeSpec::Leaf(i),
                TreeSpec::Node(mut children) if children.len() == 1 => {
                    collapse(children.pop().unwrap())
                }
                TreeSpec::Node(children) => {
                    TreeSpec::Node(children.into_iter().map(collapse).collect())
                }
            }
        }
        Self::from_spec(&collapse(self.to_spec())).expect("normalization keeps validity")
    }

    pub fn is_normalized(&self) -> bool {
        self.nodes.iter().all(|n| n.children.len() != 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeInstance {
    pub matrix: Matrix,
    pub row_tree: Hierarchy,
    pub col_tree: Hierarchy,
}

impl TreeInstance {
    pub fn new(matrix: Matrix, row_tree: Hierarchy, col_tree: Hierarchy) -> Result<Self> {
        if row_tree.leaf_count() != matrix.rows() {
            return Err(Error::LengthMismatch {
                expected: matrix.rows(),
                found: row_tree.leaf_count(),
            });
        }
        if col_tree.leaf_count() != matrix.cols() {
            return Err(Error::LengthMismatch {
                expected: matrix.cols(),
                found: col_tree.leaf_count(),
            });
        }
        Ok(Self {
            matrix,
            row_tree,
            col_tree,
        })
    }

    /// Matrix transposed and the two trees swapped.
    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
            row_tree: self.col_tree.clone(),
            col_tree: self.row_tree.clone(),
        }
    }

    /// Every allowed rectangle, sorted and without duplicates.
    pub fn allowed_family(&self) -> Vec<Rectangle> {
        let rows = self.row_tree.intervals();
        let cols = self.col_tree.intervals();
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &(i1, i2) in &rows {
            for &(j1, j2) in &cols {
                out.push(Rectangle { i1, i2, j1, j2 });
            }
        }
        out.sort_unstable();
        out
    }
}

/// Whether `rect` is the product of a row-tree node set and a column-tree node set.
pub fn is_allowed_tree(rect: &Rectangle, inst: &TreeInstance) -> Result<bool> {
    rect.check_fits(inst.matrix.rows(), inst.matrix.cols())?;
    Ok(inst.row_tree.has_interval(rect.i1, rect.i2) && inst.col_tree.has_interval(rect.j1, rect.j2))
}

/// Every rectangle of an `rows x cols` matrix, sorted.
pub fn all_rectangles(rows: usize, cols: usize) -> Vec<Rectangle> {
    let mut out = Vec::with_capacity(rows * (rows + 1) * cols * (cols + 1) / 4);
    for i1 in 1..=rows {
        for i2 in i1..=rows {
            for j1 in 1..=cols {
                for j2 in j1..=cols {
                    out.push(Rectangle { i1, i2, j1, j2 });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

//! Exact minimum-size representation of a vector by weighted tree nodes.
//!
//! Each node `u` of a hierarchy over `1..=k` gets a weight `w(u)`; leaf `l`
//! receives the sum of the weights on its root-to-leaf path. We look for the
//! fewest nonzero weights reproducing a target vector.
//!
//! The solver is a bottom-up dynamic program over cost profiles. For a node
//! `v`, `f_v(t)` is the minimum number of nonzero weights inside the subtree
//! of `v` when the strict ancestors of `v` already sum to `t`:
//!
//! - leaf: `f_l(t) = 0` if `t == v_l`, else `1`;
//! - internal: with `g_v(t) = sum over children c of f_c(t)`,
//!   `f_v(t) = min(g_v(t), 1 + min_t' g_v(t'))`.
//!
//! Each `f_v` equals a default value except at finitely many offsets, all of
//! which are leaf values of the subtree, so profiles stay small. The optimum
//! is `f_root(0)`.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::model::{Hierarchy, NodeId, Rational};

/// Nonzero node weights; leaves are reproduced by root-to-leaf path sums.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeWeighting {
    pub weights: BTreeMap<NodeId, Rational>,
}

impl NodeWeighting {
    pub fn cost(&self) -> usize {
        self.weights.len()
    }

    /// Leaf values produced by these weights, in leaf order.
    pub fn leaf_sums(&self, tree: &Hierarchy) -> Vec<Rational> {
        (1..=tree.leaf_count())
            .map(|leaf| {
                let mut node = Some(tree.leaf_node(leaf));
                let mut sum = Rational::zero();
                while let Some(u) = node {
                    if let Some(w) = self.weights.get(&u) {
                        sum += w;
                    }
                    node = tree.parent(u);
                }
                sum
            })
            .collect()
    }

    /// `(lo, hi, weight)` triples, one per weighted node, sorted by interval.
    pub fn intervals(&self, tree: &Hierarchy) -> Vec<(usize, usize, Rational)> {
        let mut out: Vec<_> = self
            .weights
            .iter()
            .map(|(&u, w)| {
                let (lo, hi) = tree.interval(u);
                (lo, hi, w.clone())
            })
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }
}

/// `g(t) = base - deficit(t)`, with `deficit` zero off its support.
#[derive(Debug, Clone, Default)]
struct CostProfile {
    base: usize,
    deficit: BTreeMap<Rational, usize>,
}

impl CostProfile {
    fn at(&self, t: &Rational) -> usize {
        self.base - self.deficit.get(t).copied().unwrap_or(0)
    }

    /// Minimum value and the smallest offset attaining it, if any offset
    /// does better than the base.
    fn minimum(&self) -> (usize, Option<&Rational>) {
        let mut best: Option<(&Rational, usize)> = None;
        for (t, &d) in &self.deficit {
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((t, d));
            }
        }
        match best {
            Some((t, d)) if d > 0 => (self.base - d, Some(t)),
            _ => (self.base, None),
        }
    }

    /// `f(t) = min(g(t), 1 + min g)`, returned as a profile.
    fn reset_closure(&self) -> CostProfile {
        let (min, _) = self.minimum();
        let base = self.base.min(min + 1);
        let deficit = self
            .deficit
            .iter()
            .filter_map(|(t, &d)| {
                let value = self.base - d;
                (value < base).then(|| (t.clone(), base - value))
            })
            .collect();
        CostProfile { base, deficit }
    }
}

fn leaf_profile(value: &Rational) -> CostProfile {
    CostProfile {
        base: 1,
        deficit: BTreeMap::from([(value.clone(), 1)]),
    }
}

/// Per-node `g` profiles (and the leaf profile at leaves), indexed by node id.
fn build_profiles(tree: &Hierarchy, v: &[Rational]) -> Vec<CostProfile> {
    let n = tree.node_count();
    let mut f: Vec<Option<CostProfile>> = vec![None; n];
    let mut g: Vec<CostProfile> = vec![CostProfile::default(); n];
    // Ids are preorder, so reverse order visits children before parents.
    for u in (0..n).rev() {
        if tree.is_leaf(u) {
            let (leaf, _) = tree.interval(u);
            let p = leaf_profile(&v[leaf - 1]);
            g[u] = p.clone();
            f[u] = Some(p);
            continue;
        }
        let mut acc = CostProfile::default();
        for &c in tree.children(u) {
            let child = f[c].take().expect("child profile computed");
            acc.base += child.base;
            for (t, d) in child.deficit {
                *acc.deficit.entry(t).or_insert(0) += d;
            }
        }
        f[u] = Some(acc.reset_closure());
        g[u] = acc;
    }
    g
}

fn check_len(tree: &Hierarchy, v: &[Rational]) -> Result<()> {
    if v.len() != tree.leaf_count() {
        return Err(Error::LengthMismatch {
            expected: tree.leaf_count(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Minimum-cost node weighting reproducing `v` at the leaves.
///
/// Ties prefer a zero weight at the higher node; when a node is paid for, the
/// new offset is the smallest value minimizing its children's total cost.
pub fn solve_opt1(tree: &Hierarchy, v: &[Rational]) -> Result<NodeWeighting> {
    check_len(tree, v)?;
    let g = build_profiles(tree, v);
    let mut weights = BTreeMap::new();
    let mut stack: Vec<(NodeId, Rational)> = vec![(tree.root(), Rational::zero())];
    while let Some((u, offset)) = stack.pop() {
        if tree.is_leaf(u) {
            let (leaf, _) = tree.interval(u);
            let w = &v[leaf - 1] - &offset;
            if !w.is_zero() {
                weights.insert(u, w);
            }
            continue;
        }
        let profile = &g[u];
        let (min, argmin) = profile.minimum();
        let next = match argmin {
            Some(t) if min + 1 < profile.at(&offset) => {
                weights.insert(u, t - &offset);
                t.clone()
            }
            _ => offset,
        };
        for &c in tree.children(u) {
            stack.push((c, next.clone()));
        }
    }
    let out = NodeWeighting { weights };
    debug_assert_eq!(out.leaf_sums(tree), v);
    Ok(out)
}

pub fn opt1_cost(tree: &Hierarchy, v: &[Rational]) -> Result<usize> {
    check_len(tree, v)?;
    let zero = Rational::zero();
    let root = tree.root();
    if tree.is_leaf(root) {
        return Ok(usize::from(!v[0].is_zero()));
    }
    let g = build_profiles(tree, v);
    Ok(g[root].reset_closure().at(&zero))
}

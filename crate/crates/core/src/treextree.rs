//! Randomized approximation for the tree x tree problem.
//!
//! Every internal node `u` of the column tree picks a uniformly random child
//! `c(u)`; following picks from `u` down ends at a leaf `l(u)`. The root
//! column vector `C_{l(root)}` is explained exactly under the row tree over
//! all columns, and every other node `u` explains the difference
//! `C_{l(u)} - C_{l(parent(u))}` over the columns below `u`. Summing along
//! any root-to-leaf path telescopes to that leaf's column, so the output is
//! always exact; its expected size is at most twice the optimum.

use num::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{
    canonicalize, is_allowed_tree, verify, Explanation, Hierarchy, NodeId, Rational, Rectangle,
    TreeInstance, WeightedRectangle,
};
use crate::seeds::{rng_from_seed, sub_seed};
use crate::tree1d::solve_opt1;

/// Random child choices and the leaves they lead to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSample {
    /// `choice[u]` is `c(u)` for internal nodes, `None` for leaves.
    pub choice: Vec<Option<NodeId>>,
    /// `reached[u]` is the leaf node `l(u)`.
    pub reached: Vec<NodeId>,
}

/// Draws one child per internal node, uniformly and in preorder.
pub fn sample_paths<R: Rng + ?Sized>(tree: &Hierarchy, rng: &mut R) -> PathSample {
    let n = tree.node_count();
    let choice: Vec<Option<NodeId>> = (0..n)
        .map(|u| {
            let children = tree.children(u);
            (!children.is_empty()).then(|| children[rng.gen_range(0..children.len())])
        })
        .collect();
    let mut reached = vec![0; n];
    for u in (0..n).rev() {
        reached[u] = match choice[u] {
            Some(c) => reached[c],
            None => u,
        };
    }
    PathSample { choice, reached }
}

/// One run of the randomized algorithm. Both trees are normalized first;
/// the allowed-rectangle family is unchanged by this.
pub fn explain_tree_x_tree<R: Rng + ?Sized>(inst: &TreeInstance, rng: &mut R) -> Result<Explanation> {
    let rows = inst.row_tree.normalized();
    let cols = inst.col_tree.normalized();
    let a = &inst.matrix;
    let sample = sample_paths(&cols, rng);
    let column_of = |node: NodeId| {
        let (leaf, _) = cols.interval(node);
        a.column(leaf - 1)
    };
    let mut terms = Vec::new();
    for u in 0..cols.node_count() {
        let target = column_of(sample.reached[u]);
        let vector: Vec<Rational> = match cols.parent(u) {
            None => target,
            Some(p) => {
                if sample.reached[p] == sample.reached[u] {
                    continue;
                }
                let base = column_of(sample.reached[p]);
                target.iter().zip(&base).map(|(x, y)| x - y).collect()
            }
        };
        if vector.iter().all(Zero::is_zero) {
            continue;
        }
        let (j1, j2) = cols.interval(u);
        for (i1, i2, w) in solve_opt1(&rows, &vector)?.intervals(&rows) {
            terms.push(WeightedRectangle::new(Rectangle { i1, i2, j1, j2 }, w));
        }
    }
    let explanation = canonicalize(terms);
    check_output(inst, &explanation)?;
    Ok(explanation)
}

fn check_output(inst: &TreeInstance, explanation: &Explanation) -> Result<()> {
    if !verify(&inst.matrix, explanation.terms())?.ok {
        return Err(Error::Internal(
            "tree x tree output does not reproduce the matrix".into(),
        ));
    }
    for t in explanation.terms() {
        if !is_allowed_tree(&t.rect, inst)? {
            return Err(Error::Internal(format!("{} is not allowed", t.rect)));
        }
    }
    Ok(())
}

/// Cheapest of `trials` runs; trial `k` uses `sub_seed(master_seed, k)`.
/// Ties keep the earliest trial.
pub fn best_of_seeds(inst: &TreeInstance, trials: usize, master_seed: u64) -> Result<Explanation> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    let mut best: Option<Explanation> = None;
    for k in 0..trials {
        let mut rng = rng_from_seed(sub_seed(master_seed, k as u64));
        let e = explain_tree_x_tree(inst, &mut rng)?;
        if best.as_ref().is_none_or(|b| e.cost() < b.cost()) {
            best = Some(e);
        }
    }
    Ok(best.expect("at least one trial"))
}

/// Runs the algorithm on the instance and on its transpose with the same
/// seed, and keeps the cheaper result (the original orientation on ties).
pub fn explain_transposed_best(inst: &TreeInstance, seed: u64) -> Result<Explanation> {
    let direct = explain_tree_x_tree(inst, &mut rng_from_seed(seed))?;
    let flipped = explain_tree_x_tree(&inst.transpose(), &mut rng_from_seed(seed))?.transpose();
    check_output(inst, &flipped)?;
    Ok(if flipped.cost() < direct.cost() {
        flipped
    } else {
        direct
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Matrix, TreeSpec};
    use crate::tree1d::solve_opt1;

    fn tree(json: &str) -> Hierarchy {
        let spec: TreeSpec = serde_json::from_str(json).unwrap();
        Hierarchy::from_spec(&spec).unwrap()
    }

    fn second_example() -> TreeInstance {
        let a = Matrix::from_ints(&[&[5, 3, 4, 5], &[3, 0, 2, 4], &[2, 2, 1, 3], &[3, 3, 2, 3]])
            .unwrap();
        TreeInstance::new(a, Hierarchy::star(4), Hierarchy::star(4)).unwrap()
    }

    #[test]
    fn star_sampling() {
        let t = Hierarchy::star(4);
        for seed in 0..20 {
            let s = sample_paths(&t, &mut rng_from_seed(seed));
            assert_eq!(Some(s.reached[0]), s.choice[0]);
            assert!(t.is_leaf(s.reached[0]));
        }
    }

    #[test]
    fn path_tree_reaches_unique_leaf() {
        let t = tree("[[[1]]]").normalized();
        assert_eq!(t.node_count(), 1);
        let s = sample_paths(&t, &mut rng_from_seed(1));
        assert_eq!(s.reached, vec![0]);
        // Without normalization the single leaf is still reached.
        let raw = tree("[[[1]]]");
        let s = sample_paths(&raw, &mut rng_from_seed(1));
        assert!(s.reached.iter().all(|&l| l == raw.leaf_node(1)));
    }

    #[test]
    fn sampling_is_reproducible() {
        let t = Hierarchy::binary(4);
        let a = sample_paths(&t, &mut rng_from_seed(77));
        let b = sample_paths(&t, &mut rng_from_seed(77));
        assert_eq!(a, b);
        for u in 0..t.node_count() {
            let (lo, hi) = t.interval(u);
            let (leaf, _) = t.interval(a.reached[u]);
            assert!(lo <= leaf && leaf <= hi);
            if let Some(c) = a.choice[u] {
                assert_eq!(a.reached[u], a.reached[c]);
            }
        }
    }

    #[test]
    fn zero_matrix_gives_empty() {
        let inst =
            TreeInstance::new(Matrix::zeros(3, 4), Hierarchy::binary(3), Hierarchy::star(4)).unwrap();
        for seed in 0..5 {
            assert!(explain_tree_x_tree(&inst, &mut rng_from_seed(seed)).unwrap().is_empty());
        }
        assert!(best_of_seeds(&inst, 10, 3).unwrap().is_empty());
    }

    #[test]
    fn single_column_reduces_to_1d() {
        let v = crate::model::ints(&[6000, 8000, 8000, 8000]);
        let rows = tree("[[1,2],3,4]");
        let inst =
            TreeInstance::new(Matrix::column_vector(&v).unwrap(), rows.clone(), Hierarchy::star(1))
                .unwrap();
        let expected = solve_opt1(&rows, &v).unwrap().cost();
        for seed in 0..5 {
            let e = explain_tree_x_tree(&inst, &mut rng_from_seed(seed)).unwrap();
            assert_eq!(e.cost(), expected);
        }
        assert_eq!(explain_transposed_best(&inst, 0).unwrap().cost(), expected);
    }

    #[test]
    fn second_example_every_seed_valid() {
        let inst = second_example();
        for seed in 0..50 {
            let e = explain_tree_x_tree(&inst, &mut rng_from_seed(seed)).unwrap();
            assert!(verify(&inst.matrix, e.terms()).unwrap().ok);
        }
        let best = best_of_seeds(&inst, 50, 2024).unwrap();
        assert!(best.cost() <= 8);
    }

    #[test]
    fn best_of_one_is_a_single_run() {
        let inst = second_example();
        let single = explain_tree_x_tree(&inst, &mut rng_from_seed(sub_seed(11, 0))).unwrap();
        assert_eq!(best_of_seeds(&inst, 1, 11).unwrap(), single);
        assert!(best_of_seeds(&inst, 0, 11).is_err());
    }

    #[test]
    fn transposed_best_is_no_worse() {
        let inst = second_example();
        for seed in 0..10 {
            let both = explain_transposed_best(&inst, seed).unwrap();
            let direct = explain_tree_x_tree(&inst, &mut rng_from_seed(seed)).unwrap();
            assert!(both.cost() <= direct.cost());
        }
    }
}

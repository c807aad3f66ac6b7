//! Semi-supervised predictive clustering trees.

mod impurity;
mod split;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, TargetBlock, Task};
use crate::rng::Rng;

pub use impurity::{gini, impurity, variance, ClusteringSpace};
pub use split::{best_test, Split};

/// How candidate tests are generated at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    Exhaustive,
    SingleRandom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PctParams {
    /// Weight `w` of the target part of the impurity.
    pub supervision: f64,
    pub min_leaf_size: usize,
    /// Features considered per node; `None` means all.
    pub feature_subset: Option<usize>,
    pub split_mode: SplitMode,
    pub prototype_threshold: f64,
    pub seed: u64,
}

impl Default for PctParams {
    fn default() -> Self {
        Self {
            supervision: 1.0,
            min_leaf_size: 2,
            feature_subset: None,
            split_mode: SplitMode::Exhaustive,
            prototype_threshold: 0.5,
            seed: 0,
        }
    }
}

impl PctParams {
    pub fn validate(&self, n_features: usize) -> crate::Result<()> {
        use crate::Error::InvalidParam;
        if !(0.0..=1.0).contains(&self.supervision) {
            return Err(InvalidParam(format!("supervision w must lie in [0, 1], got {}", self.supervision)));
        }
        if self.min_leaf_size == 0 {
            return Err(InvalidParam("min_leaf_size must be at least 1".into()));
        }
        if let Some(k) = self.feature_subset {
            if k == 0 || k > n_features {
                return Err(InvalidParam(format!("feature subset size {k} outside [1, {n_features}]")));
            }
        }
        if !(0.0..=1.0).contains(&self.prototype_threshold) {
            return Err(InvalidParam("prototype threshold must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Test {
    /// Values `<= threshold` go left.
    Numeric { feature: usize, threshold: f64 },
    /// Values in `categories` go left.
    Nominal { feature: usize, categories: Vec<usize> },
}

impl Test {
    pub fn feature(&self) -> usize {
        match self {
            Test::Numeric { feature, .. } | Test::Nominal { feature, .. } => *feature,
        }
    }

    pub fn goes_left(&self, value: f64) -> bool {
        match self {
            Test::Numeric { threshold, .. } => value <= *threshold,
            Test::Nominal { categories, .. } => categories.contains(&(value as usize)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        test: Test,
        h_star: f64,
        n_reached: usize,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        prototype: Vec<f64>,
        n_reached: usize,
    },
}

impl TreeNode {
    pub fn n_reached(&self) -> usize {
        match self {
            TreeNode::Internal { n_reached, .. } | TreeNode::Leaf { n_reached, .. } => *n_reached,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    /// Visits internal nodes in preorder as `(test, h_star, n_reached)`.
    pub fn for_each_internal(&self, f: &mut impl FnMut(&Test, f64, usize)) {
        if let TreeNode::Internal {
            test,
            h_star,
            n_reached,
            left,
            right,
        } = self
        {
            f(test, *h_star, *n_reached);
            left.for_each_internal(f);
            right.for_each_internal(f);
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serialization cannot fail")
    }
}

/// Routes an example through the tree; `value(i)` yields feature `i`.
pub fn predict_with(tree: &TreeNode, value: impl Fn(usize) -> f64) -> &[f64] {
    let mut node = tree;
    loop {
        match node {
            TreeNode::Leaf { prototype, .. } => return prototype,
            TreeNode::Internal { test, left, right, .. } => {
                node = if test.goes_left(value(test.feature())) { left } else { right };
            }
        }
    }
}

pub fn predict<'t>(tree: &'t TreeNode, x: &[f64]) -> &'t [f64] {
    predict_with(tree, |i| x[i])
}

/// Prototype of the labeled examples among `examples`, or `None` if none
/// is labeled. Classification yields `[class index]`; other tasks the
/// per-target mean.
pub fn prototype(examples: &[usize], targets: &TargetBlock) -> Option<Vec<f64>> {
    if targets.task() == Task::Classification {
        let mut counts = vec![0usize; targets.classes().len()];
        let mut any = false;
        for &e in examples {
            if let Some(c) = targets.class_of(e) {
                counts[c] += 1;
                any = true;
            }
        }
        if !any {
            return None;
        }
        let mut best = 0;
        for (c, &k) in counts.iter().enumerate() {
            if k > counts[best] {
                best = c;
            }
        }
        return Some(vec![best as f64]);
    }
    let t = targets.n_targets();
    let mut sum = vec![0.0; t];
    let mut n = 0usize;
    for &e in examples {
        if let Some(row) = targets.row(e) {
            for (s, v) in sum.iter_mut().zip(row) {
                *s += v;
            }
            n += 1;
        }
    }
    if n == 0 {
        return None;
    }
    Some(sum.into_iter().map(|s| s / n as f64).collect())
}

/// Label indices whose score reaches `threshold`.
pub fn label_set(prototype: &[f64], threshold: f64) -> Vec<usize> {
    (0..prototype.len()).filter(|&i| prototype[i] >= threshold).collect()
}

/// Grows a tree on the multiset `examples` of `d`.
pub fn grow_tree(examples: &[usize], d: &Dataset, params: &PctParams, rng: &mut Rng) -> TreeNode {
    let space = ClusteringSpace::new(d, params);
    grow_tree_in(&space, examples, d, params, rng)
}

/// As [`grow_tree`] with a prebuilt clustering space.
pub fn grow_tree_in(
    space: &ClusteringSpace,
    examples: &[usize],
    d: &Dataset,
    params: &PctParams,
    rng: &mut Rng,
) -> TreeNode {
    let all: Vec<usize> = (0..d.n_examples()).collect();
    let fallback = prototype(&all, d.targets()).unwrap_or_else(|| vec![f64::NAN; d.targets().n_targets()]);
    grow(space, examples.to_vec(), d, params, rng, &fallback)
}

fn grow(
    space: &ClusteringSpace,
    examples: Vec<usize>,
    d: &Dataset,
    params: &PctParams,
    rng: &mut Rng,
    fallback: &[f64],
) -> TreeNode {
    let n = examples.len();
    if let Some(split) = best_test(&examples, space, d, params, rng) {
        let left = grow(space, split.left, d, params, rng, fallback);
        let right = grow(space, split.right, d, params, rng, fallback);
        return TreeNode::Internal {
            test: split.test,
            h_star: split.h,
            n_reached: n,
            left: Box::new(left),
            right: Box::new(right),
        };
    }
    TreeNode::Leaf {
        prototype: prototype(&examples, d.targets()).unwrap_or_else(|| fallback.to_vec()),
        n_reached: n,
    }
}

//! Ensemble feature importance: Symbolic, Genie3 and the out-of-bag
//! permutation (Random Forest) score.

use rayon::prelude::*;

use crate::data::{Dataset, Task};
use crate::ensemble::{grow_ensemble, Ensemble, EnsembleParams};
use crate::error::{Error, Result};
use crate::eval::metrics::{auprc_micro, misclassification, rrmse};
use crate::pct::{predict_with, PctParams, TreeNode};
use crate::ranking::FeatureRanking;
use crate::rng::{mix, permutation, substream};

/// Stream tag separating permutation draws from tree growth.
const RF_STREAM: u64 = 0x5246_5045_524d;

/// Per-tree symbolic contributions: `sum n_reached / m` over nodes testing
/// each feature.
pub fn symbolic_tree(tree: &TreeNode, n_features: usize, m: usize) -> Vec<f64> {
    let mut s = vec![0.0; n_features];
    tree.for_each_internal(&mut |test, _, n| s[test.feature()] += n as f64 / m as f64);
    s
}

/// Per-tree Genie3 contributions: `sum h*` over nodes testing each feature.
pub fn genie3_tree(tree: &TreeNode, n_features: usize) -> Vec<f64> {
    let mut s = vec![0.0; n_features];
    tree.for_each_internal(&mut |test, h, _| s[test.feature()] += h);
    s
}

fn average(per_tree: Vec<Vec<f64>>, n_features: usize) -> Vec<f64> {
    let n = per_tree.len() as f64;
    let mut out = vec![0.0; n_features];
    for t in &per_tree {
        for (o, v) in out.iter_mut().zip(t) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|o| *o /= n);
    out
}

pub fn symbolic_scores(e: &Ensemble, n_features: usize) -> Vec<f64> {
    let per_tree = e.trees.iter().map(|t| symbolic_tree(t, n_features, e.n_train)).collect();
    average(per_tree, n_features)
}

pub fn genie3_scores(e: &Ensemble, n_features: usize) -> Vec<f64> {
    let per_tree = e.trees.iter().map(|t| genie3_tree(t, n_features)).collect();
    average(per_tree, n_features)
}

/// Loss of `tree` on the labeled examples of `examples`, with feature
/// values supplied by `value(e, i)`.
fn loss_with(
    tree: &TreeNode,
    d: &Dataset,
    examples: &[usize],
    value: impl Fn(usize, usize) -> f64,
) -> Result<f64> {
    let targets = d.targets();
    let labeled: Vec<usize> = examples.iter().copied().filter(|&e| targets.is_labeled(e)).collect();
    if labeled.is_empty() {
        return Err(Error::RfUnavailable("no labeled out-of-bag example".into()));
    }
    let preds: Vec<&[f64]> = labeled.iter().map(|&e| predict_with(tree, |i| value(e, i))).collect();
    match targets.task() {
        Task::Classification => {
            let p: Vec<usize> = preds.iter().map(|p| p[0] as usize).collect();
            let t: Vec<usize> = labeled.iter().map(|&e| targets.class_of(e).unwrap()).collect();
            Ok(misclassification(&p, &t))
        }
        Task::Str | Task::Mtr => {
            let p: Vec<Vec<f64>> = preds.iter().map(|p| p.to_vec()).collect();
            let t: Vec<Vec<f64>> = labeled.iter().map(|&e| targets.row(e).unwrap().to_vec()).collect();
            rrmse(&p, &t)
        }
        Task::Mlc | Task::Hmlc => {
            let p: Vec<Vec<f64>> = preds.iter().map(|p| p.to_vec()).collect();
            let t: Vec<Vec<f64>> = labeled.iter().map(|&e| targets.row(e).unwrap().to_vec()).collect();
            Ok(1.0 - auprc_micro(&p, &t)?)
        }
    }
}

/// Task loss of `tree` on the labeled part of `oob`.
pub fn oob_error(tree: &TreeNode, oob: &[usize], d: &Dataset) -> Result<f64> {
    loss_with(tree, d, oob, |e, i| d.value(e, i))
}

/// Relative loss increase per feature for one tree, or `None` when the
/// tree has no usable out-of-bag estimate.
fn rf_tree(tree: &TreeNode, oob: &[usize], d: &Dataset, seed: u64, index: usize) -> Option<Vec<f64>> {
    let n_features = d.n_features();
    let base = oob_error(tree, oob, d).ok()?;
    let mut rng = substream(seed, index as u64);
    let mut used = vec![false; n_features];
    tree.for_each_internal(&mut |t, _, _| used[t.feature()] = true);
    let mut terms = vec![0.0; n_features];
    let mut slot = vec![usize::MAX; d.n_examples()];
    for (k, &e) in oob.iter().enumerate() {
        slot[e] = k;
    }
    for (i, term) in terms.iter_mut().enumerate() {
        let perm = permutation(oob.len(), &mut rng);
        if base == 0.0 || !used[i] {
            continue;
        }
        let col = d.feature(i).values();
        let permuted = loss_with(tree, d, oob, |e, f| {
            if f == i {
                col[oob[perm[slot[e]]]]
            } else {
                d.value(e, f)
            }
        })
        .ok()?;
        *term = (permuted - base) / base;
    }
    Some(terms)
}

/// Out-of-bag permutation importance averaged over trees with a usable
/// estimate.
pub fn rf_scores(e: &Ensemble, d: &Dataset, seed: u64) -> Result<Vec<f64>> {
    if !e.params.uses_bootstrap() {
        return Err(Error::RfUnavailable("ensemble was grown without bootstrap".into()));
    }
    let stream = mix(seed ^ RF_STREAM);
    let per_tree: Vec<Vec<f64>> = e
        .trees
        .par_iter()
        .zip(&e.oob)
        .enumerate()
        .filter_map(|(t, (tree, oob))| rf_tree(tree, oob, d, stream, t))
        .collect();
    if per_tree.is_empty() {
        return Err(Error::RfUnavailable("no tree has a labeled out-of-bag example".into()));
    }
    Ok(average(per_tree, d.n_features()))
}

/// The three rankings from one ensemble; `rf` is `None` when the
/// permutation score is unavailable.
#[derive(Clone, Debug)]
pub struct EnsembleRankings {
    pub symbolic: FeatureRanking,
    pub genie3: FeatureRanking,
    pub rf: Option<FeatureRanking>,
    pub rf_error: Option<String>,
}

fn tagged(r: FeatureRanking, e: &Ensemble, d: &Dataset) -> FeatureRanking {
    r.with_meta("ensemble", &e.params)
        .with_meta("supervision", e.tree_params.supervision)
        .with_meta("n_labeled", d.n_labeled())
}

pub fn symbolic_ranking(e: &Ensemble, d: &Dataset) -> FeatureRanking {
    let scores = symbolic_scores(e, d.n_features());
    tagged(FeatureRanking::new("symbolic", d.feature_names(), scores), e, d)
}

pub fn genie3_ranking(e: &Ensemble, d: &Dataset) -> FeatureRanking {
    let scores = genie3_scores(e, d.n_features());
    tagged(FeatureRanking::new("genie3", d.feature_names(), scores), e, d)
}

pub fn rf_ranking(e: &Ensemble, d: &Dataset) -> Result<FeatureRanking> {
    let scores = rf_scores(e, d, e.params.seed)?;
    Ok(tagged(FeatureRanking::new("rf", d.feature_names(), scores), e, d))
}

pub fn rankings_from(e: &Ensemble, d: &Dataset) -> EnsembleRankings {
    let (rf, rf_error) = match rf_ranking(e, d) {
        Ok(r) => (Some(r), None),
        Err(err) => (None, Some(err.to_string())),
    };
    EnsembleRankings {
        symbolic: symbolic_ranking(e, d),
        genie3: genie3_ranking(e, d),
        rf,
        rf_error,
    }
}

/// Grows one ensemble and derives all three rankings from it.
pub fn rank_all(d: &Dataset, ep: &EnsembleParams, pp: &PctParams) -> Result<EnsembleRankings> {
    if d.n_labeled() == 0 && pp.supervision > 0.0 {
        return Err(Error::NoLabeled);
    }
    let e = grow_ensemble(d, ep, pp)?;
    Ok(rankings_from(&e, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pct::Test;

    fn leaf(n: usize) -> Box<TreeNode> {
        Box::new(TreeNode::Leaf {
            prototype: vec![0.0],
            n_reached: n,
        })
    }

    fn stump(feature: usize, n: usize, h: f64) -> TreeNode {
        TreeNode::Internal {
            test: Test::Numeric { feature, threshold: 0.5 },
            h_star: h,
            n_reached: n,
            left: leaf(n / 2),
            right: leaf(n - n / 2),
        }
    }

    #[test]
    fn root_only_symbolic_is_one() {
        assert_eq!(symbolic_tree(&stump(0, 10, 2.0), 3, 10), vec![1.0, 0.0, 0.0]);
        assert_eq!(genie3_tree(&stump(1, 10, 2.0), 3), vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn two_tree_average() {
        let per_tree = vec![symbolic_tree(&stump(0, 10, 1.0), 2, 10), symbolic_tree(&stump(1, 10, 1.0), 2, 10)];
        assert_eq!(average(per_tree, 2), vec![0.5, 0.5]);
    }
}

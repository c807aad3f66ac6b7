use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{permutation, seeded};

/// Cross-validation folds with nested label allocations.
///
/// Every fold is stored in a fixed random order; a contributing fold keeps
/// the labels of its first `c` examples, so growing `c` only adds labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub folds: Vec<Vec<usize>>,
    pub l_grid: Vec<usize>,
}

impl FoldPlan {
    pub fn n_folds(&self) -> usize {
        self.folds.len()
    }

    pub fn test(&self, i: usize) -> &[usize] {
        &self.folds[i]
    }

    /// Training examples of fold `i`: the other folds concatenated in order.
    pub fn train(&self, i: usize) -> Vec<usize> {
        (0..self.n_folds())
            .filter(|&j| j != i)
            .flat_map(|j| self.folds[j].iter().copied())
            .collect()
    }

    /// Labeled-example count of each contributing fold `j != i` for `l`.
    ///
    /// The `t`-th contributing fold (in fold order) keeps
    /// `floor(l / (x - 1)) + [t < l mod (x - 1)]` labels.
    pub fn allocation(&self, i: usize, l: usize) -> Vec<(usize, usize)> {
        let parts = self.n_folds() - 1;
        let (q, r) = (l / parts, l % parts);
        (0..self.n_folds())
            .filter(|&j| j != i)
            .enumerate()
            .map(|(t, j)| (j, q + usize::from(t < r)))
            .collect()
    }

    /// Example indices labeled in training set `i` at `l`.
    pub fn labeled(&self, i: usize, l: usize) -> Vec<usize> {
        self.allocation(i, l)
            .into_iter()
            .flat_map(|(j, c)| self.folds[j][..c].iter().copied())
            .collect()
    }

    /// Training set `i` at `l`, with examples in [`FoldPlan::train`] order and
    /// labels kept only for [`FoldPlan::labeled`].
    pub fn training_set(&self, d: &Dataset, i: usize, l: usize) -> Dataset {
        let train = self.train(i);
        let mut keep = vec![false; d.n_examples()];
        for e in self.labeled(i, l) {
            keep[e] = true;
        }
        let positions: Vec<usize> = (0..train.len()).filter(|&p| keep[train[p]]).collect();
        d.select(&train).with_labeled(&positions)
    }

    pub fn test_set(&self, d: &Dataset, i: usize) -> Dataset {
        d.select(self.test(i))
    }
}

/// Seeded partition of `d` into `x` folds of near-equal size.
pub fn make_folds(d: &Dataset, x: usize, l_grid: &[usize], seed: u64) -> Result<FoldPlan> {
    let m = d.n_examples();
    if x < 2 || x > m {
        return Err(Error::InvalidParam(format!("fold count must lie in [2, {m}], got {x}")));
    }
    if !d.is_fully_labeled() {
        return Err(Error::InvalidParam("cross-validation needs a fully labeled dataset".into()));
    }
    let perm = permutation(m, &mut seeded(seed));
    let folds: Vec<Vec<usize>> = (0..x).map(|j| perm[j * m / x..(j + 1) * m / x].to_vec()).collect();
    let plan = FoldPlan {
        folds,
        l_grid: l_grid.to_vec(),
    };
    for &l in l_grid {
        for i in 0..x {
            for (j, c) in plan.allocation(i, l) {
                if c > plan.folds[j].len() {
                    return Err(Error::InvalidParam(format!(
                        "L = {l} needs {c} labeled examples from fold {j}, which holds {}",
                        plan.folds[j].len()
                    )));
                }
            }
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FeatureColumn, TargetBlock, Task};

    fn dataset(m: usize) -> Dataset {
        let rows: Vec<_> = (0..m).map(|i| Some(vec![i as f64])).collect();
        let t = TargetBlock::new(Task::Str, vec!["y".into()], vec![], None, &rows).unwrap();
        Dataset::new(vec![FeatureColumn::numeric("x", (0..m).map(|i| i as f64).collect())], t).unwrap()
    }

    #[test]
    fn fifty_over_nine_folds() {
        let plan = make_folds(&dataset(100), 10, &[50], 1).unwrap();
        let alloc = plan.allocation(0, 50);
        assert_eq!(alloc.len(), 9);
        assert_eq!(alloc.iter().filter(|a| a.1 == 6).count(), 5);
        assert_eq!(alloc.iter().filter(|a| a.1 == 5).count(), 4);
        assert_eq!(plan.labeled(0, 50).len(), 50);
        let set = plan.training_set(&dataset(100), 0, 50);
        assert_eq!(set.n_labeled(), 50);
        assert_eq!(set.n_examples(), 90);
    }

    #[test]
    fn two_folds_keep_everything() {
        let plan = make_folds(&dataset(20), 2, &[10], 3).unwrap();
        assert_eq!(plan.labeled(0, 10).len(), plan.test(1).len());
    }

    #[test]
    fn partition_and_errors() {
        let plan = make_folds(&dataset(23), 4, &[], 5).unwrap();
        let mut all: Vec<usize> = plan.folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        assert!(make_folds(&dataset(20), 10, &[100], 0).is_err());
        assert!(make_folds(&dataset(20), 1, &[], 0).is_err());
    }
}

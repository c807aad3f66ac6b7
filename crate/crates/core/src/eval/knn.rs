use rayon::prelude::*;

use crate::data::{Dataset, Task};
use crate::error::{Error, Result};
use crate::relief::DescriptiveMetric;

/// kNN weights from importances: negatives clipped to 0, all-zero replaced
/// by uniform weights.
pub fn knn_weights(importances: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = importances.iter().map(|&s| if s > 0.0 { s } else { 0.0 }).collect();
    if w.iter().all(|&v| v == 0.0) {
        vec![1.0; w.len()]
    } else {
        w
    }
}

/// Predicts every example of `test` from the `k` nearest labeled examples of
/// `train` under `sum_i w_i d_i^2`. Classification votes (ties to the
/// earliest class) and returns `[class index]`; other tasks average the
/// target rows.
pub fn knn_predict(train: &Dataset, test: &Dataset, k: usize, importances: &[f64]) -> Result<Vec<Vec<f64>>> {
    let labeled = train.targets().labeled_indices();
    if k == 0 || labeled.len() < k {
        return Err(Error::InvalidParam(format!(
            "kNN with k = {k} needs at least {k} labeled training examples, got {}",
            labeled.len()
        )));
    }
    let weights = knn_weights(importances);
    let metric = DescriptiveMetric::new(train);
    let train_rows: Vec<Vec<f64>> = labeled.iter().map(|&e| train.row(e)).collect();
    let targets = train.targets();
    let n_classes = targets.classes().len();
    let task = train.task();
    Ok((0..test.n_examples())
        .into_par_iter()
        .map(|e| {
            let x = test.row(e);
            let mut dist: Vec<(f64, usize)> = train_rows
                .iter()
                .zip(&labeled)
                .map(|(row, &l)| {
                    let s: f64 = (0..x.len())
                        .map(|i| {
                            let di = metric.diff(i, x[i], row[i]);
                            weights[i] * di * di
                        })
                        .sum();
                    (s, l)
                })
                .collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let nearest = &dist[..k];
            if task == Task::Classification {
                let mut votes = vec![0usize; n_classes];
                for &(_, l) in nearest {
                    votes[targets.class_of(l).expect("neighbour is labeled")] += 1;
                }
                let mut best = 0;
                for c in 1..n_classes {
                    if votes[c] > votes[best] {
                        best = c;
                    }
                }
                vec![best as f64]
            } else {
                let mut mean = vec![0.0; targets.n_targets()];
                for &(_, l) in nearest {
                    for (m, v) in mean.iter_mut().zip(targets.row(l).expect("neighbour is labeled")) {
                        *m += v;
                    }
                }
                mean.iter_mut().for_each(|m| *m /= k as f64);
                mean
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FeatureColumn, TargetBlock};

    fn regression(a: Vec<f64>, b: Vec<f64>, y: Vec<f64>) -> Dataset {
        let rows: Vec<_> = y.into_iter().map(|v| Some(vec![v])).collect();
        let t = TargetBlock::new(Task::Str, vec!["y".into()], vec![], None, &rows).unwrap();
        Dataset::new(vec![FeatureColumn::numeric("a", a), FeatureColumn::numeric("b", b)], t).unwrap()
    }

    #[test]
    fn exact_match_with_k1() {
        let train = regression(vec![0.0, 1.0, 2.0], vec![0.0, 5.0, 1.0], vec![10.0, 20.0, 30.0]);
        let test = regression(vec![1.0], vec![5.0], vec![0.0]);
        assert_eq!(knn_predict(&train, &test, 1, &[1.0, 1.0]).unwrap(), vec![vec![20.0]]);
    }

    #[test]
    fn nonpositive_weights_fall_back_to_uniform() {
        assert_eq!(knn_weights(&[-1.0, 0.0]), vec![1.0, 1.0]);
        assert_eq!(knn_weights(&[-1.0, 2.0]), vec![0.0, 2.0]);
    }

    #[test]
    fn zero_weight_feature_is_ignored() {
        let train = regression(vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 2.0, 3.0]);
        let test = regression(vec![0.0], vec![1.0], vec![0.0]);
        // Examples 0 and 1 tie at distance 0; the lower index wins.
        assert_eq!(knn_predict(&train, &test, 1, &[1.0, 0.0]).unwrap(), vec![vec![1.0]]);
    }

    #[test]
    fn too_few_labeled() {
        let train = regression(vec![0.0], vec![0.0], vec![1.0]);
        assert!(knn_predict(&train, &train, 2, &[1.0, 1.0]).is_err());
    }
}

//! Evaluation protocol: label-masked folds, importance-weighted kNN, task
//! metrics, performance curves and the clustering-hypothesis estimate.

pub mod cluster;
pub mod curve;
pub mod folds;
pub mod knn;
pub mod metrics;
pub mod xval;

pub use cluster::{ari, ch_score, cluster_agreement, kmeans, Clustering};
pub use curve::{curve_and_area, PerformanceCurve};
pub use folds::{make_folds, FoldPlan};
pub use knn::{knn_predict, knn_weights};
pub use metrics::{auprc_micro, f1_macro, misclassification, rrmse};
pub use xval::{relief_grid, select_config, supervision_grid, xval, CellResult, CurveSummary, XvalConfig, XvalResult};

use crate::data::{Dataset, Task};
use crate::error::Result;

/// Whether larger values of the task's evaluation measure are better.
pub fn higher_is_better(task: Task) -> bool {
    !task.is_regression()
}

/// Name of the task's evaluation measure.
pub fn measure_name(task: Task) -> &'static str {
    match task {
        Task::Classification => "f1_macro",
        Task::Str | Task::Mtr => "rrmse",
        Task::Mlc | Task::Hmlc => "auprc_micro",
    }
}

/// Macro-F1, RRMSE or micro-AUPRC of `pred` against the target rows of the
/// fully labeled `truth`.
pub fn performance(pred: &[Vec<f64>], truth: &Dataset) -> Result<f64> {
    let t = truth.targets();
    let rows: Vec<Vec<f64>> = (0..truth.n_examples())
        .map(|e| t.row(e).expect("test examples are labeled").to_vec())
        .collect();
    match truth.task() {
        Task::Classification => {
            let p: Vec<usize> = pred.iter().map(|p| p[0] as usize).collect();
            let y: Vec<usize> = rows.iter().map(|r| r[0] as usize).collect();
            Ok(f1_macro(&p, &y))
        }
        Task::Str | Task::Mtr => rrmse(pred, &rows),
        Task::Mlc | Task::Hmlc => auprc_micro(pred, &rows),
    }
}

/// kNN performance on `test` when features are weighted by `importances`.
pub fn evaluate_ranking(train: &Dataset, test: &Dataset, k: usize, importances: &[f64]) -> Result<f64> {
    let pred = knn_predict(train, test, k, importances)?;
    performance(&pred, test)
}

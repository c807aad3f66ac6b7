//! Shared inputs for the benchmarks.

use sslrank::data::mask_labels;
use sslrank::synthetic::cluster_regression;
use sslrank::Dataset;

/// Clustered regression data with `m` examples and `d` features, of which
/// `labeled` keep their targets.
pub fn partially_labeled(m: usize, d: usize, labeled: usize, seed: u64) -> Dataset {
    mask_labels(&cluster_regression(m, d, seed), labeled, seed).expect("labeled count fits the data")
}

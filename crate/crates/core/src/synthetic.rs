//! Seeded synthetic datasets for tests, benchmarks and demonstrations.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::data::{Dataset, FeatureColumn, TargetBlock, Task};
use crate::rng::{permutation, seeded};

fn normal(mean: f64, sd: f64) -> Normal<f64> {
    Normal::new(mean, sd).expect("finite normal parameters")
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Regression data with two Gaussian clusters in the first two of `d`
/// features. The target is the cluster offset plus a linear trend in the
/// informative features and Gaussian noise; the rest are standard normal
/// noise features.
pub fn cluster_regression(m: usize, d: usize, seed: u64) -> Dataset {
    assert!(d >= 2);
    let mut rng = seeded(seed);
    let unit = normal(0.0, 1.0);
    let mut cols = vec![Vec::with_capacity(m); d];
    let mut y = Vec::with_capacity(m);
    for _ in 0..m {
        let c = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let x1 = 2.0 * c + unit.sample(&mut rng);
        let x2 = 2.0 * c + unit.sample(&mut rng);
        cols[0].push(x1);
        cols[1].push(x2);
        for col in cols.iter_mut().skip(2) {
            col.push(unit.sample(&mut rng));
        }
        y.push(3.0 * c + 0.5 * (x1 + x2) + 0.5 * unit.sample(&mut rng));
    }
    regression(cols, y)
}

fn regression(cols: Vec<Vec<f64>>, y: Vec<f64>) -> Dataset {
    let n = cols.len();
    let features = cols
        .into_iter()
        .zip(names("x", n))
        .map(|(c, n)| FeatureColumn::numeric(n, c))
        .collect();
    let rows: Vec<_> = y.into_iter().map(|v| Some(vec![v])).collect();
    let t = TargetBlock::new(Task::Str, vec!["y".into()], vec![], None, &rows).expect("valid targets");
    Dataset::new(features, t).expect("consistent columns")
}

/// Binary classification where `y = [x1 > 0.5]` and `x2` is uniform noise.
pub fn threshold_classification(m: usize, seed: u64) -> Dataset {
    let mut rng = seeded(seed);
    let x1: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let x2: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let rows: Vec<_> = x1.iter().map(|&v| Some(vec![f64::from(u8::from(v > 0.5))])).collect();
    let t = TargetBlock::new(
        Task::Classification,
        vec!["y".into()],
        vec!["neg".into(), "pos".into()],
        None,
        &rows,
    )
    .expect("valid targets");
    Dataset::new(
        vec![FeatureColumn::numeric("x1", x1), FeatureColumn::numeric("x2", x2)],
        t,
    )
    .expect("consistent columns")
}

/// Three well-separated spherical Gaussian classes in `d >= 2` dimensions,
/// centred on a circle of radius 10 in the first two, optionally with the
/// class labels shuffled.
pub fn gaussian_classes(per_class: usize, d: usize, shuffle_labels: bool, seed: u64) -> Dataset {
    let mut rng = seeded(seed);
    let unit = normal(0.0, 1.0);
    let mut cols = vec![Vec::new(); d];
    let mut classes = Vec::new();
    for c in 0..3 {
        for _ in 0..per_class {
            let angle = 2.0 * std::f64::consts::PI * c as f64 / 3.0;
            for (i, col) in cols.iter_mut().enumerate() {
                let centre = match i {
                    0 => 10.0 * angle.cos(),
                    1 => 10.0 * angle.sin(),
                    _ => 0.0,
                };
                col.push(centre + unit.sample(&mut rng));
            }
            classes.push(c);
        }
    }
    if shuffle_labels {
        let perm = permutation(classes.len(), &mut rng);
        classes = perm.iter().map(|&p| classes[p]).collect();
    }
    let rows: Vec<_> = classes.iter().map(|&c| Some(vec![c as f64])).collect();
    let t = TargetBlock::new(
        Task::Classification,
        vec!["class".into()],
        names("c", 3),
        None,
        &rows,
    )
    .expect("valid targets");
    let features = cols
        .into_iter()
        .zip(names("x", d))
        .map(|(c, n)| FeatureColumn::numeric(n, c))
        .collect();
    Dataset::new(features, t).expect("consistent columns")
}

/// Regression data whose target is a noisy linear function of the first
/// `informative` features; the remaining features are uniform noise.
pub fn linear_regression(m: usize, d: usize, informative: usize, seed: u64) -> Dataset {
    let mut rng = seeded(seed);
    let unit = normal(0.0, 1.0);
    let cols: Vec<Vec<f64>> = (0..d).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect();
    let y = (0..m)
        .map(|e| {
            let signal: f64 = (0..informative.min(d)).map(|i| (i + 1) as f64 * cols[i][e]).sum();
            signal + 0.1 * unit.sample(&mut rng)
        })
        .collect();
    regression(cols, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_determinism() {
        let a = cluster_regression(50, 10, 3);
        assert_eq!((a.n_examples(), a.n_features()), (50, 10));
        assert_eq!(a, cluster_regression(50, 10, 3));
        let c = threshold_classification(40, 1);
        assert_eq!(c.targets().classes().len(), 2);
        let g = gaussian_classes(10, 2, false, 0);
        assert_eq!(g.n_examples(), 30);
        assert_eq!(linear_regression(20, 5, 2, 0).n_features(), 5);
    }
}

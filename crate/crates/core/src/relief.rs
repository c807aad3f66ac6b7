//! Semi-supervised Relief.
//!
//! Pairs of a random example and each of its `k` nearest neighbours (in the
//! descriptive space) estimate how often a feature differs given that the
//! "cluster" differs. The cluster distance is the target distance when both
//! examples are labeled and the descriptive distance otherwise; each pair is
//! weighted by the influence of its two examples.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureKind, Hierarchy, TargetBlock, Task};
use crate::error::{Error, Result};
use crate::ranking::FeatureRanking;
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliefParams {
    /// Iterations; `None` means one per example.
    pub m: Option<usize>,
    pub k: usize,
    pub w0: f64,
    pub w1: f64,
    pub seed: u64,
}

impl Default for ReliefParams {
    fn default() -> Self {
        Self {
            m: None,
            k: 15,
            w0: 0.0,
            w1: 1.0,
            seed: 0,
        }
    }
}

impl ReliefParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.m == Some(0) {
            return Err(Error::InvalidParam("Relief needs m >= 1 and k >= 1".into()));
        }
        if !(0.0 <= self.w0 && self.w0 <= self.w1 && self.w1 <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "influence interval [{}, {}] must satisfy 0 <= w0 <= w1 <= 1",
                self.w0, self.w1
            )));
        }
        Ok(())
    }
}

/// Range-normalized per-feature differences.
#[derive(Clone, Debug)]
pub struct DescriptiveMetric {
    /// `Some(1 / range)` for numeric features (0 when the range is 0),
    /// `None` for nominal ones.
    inv_range: Vec<Option<f64>>,
}

impl DescriptiveMetric {
    pub fn new(d: &Dataset) -> Self {
        let inv_range = d
            .features()
            .iter()
            .map(|f| match f.kind {
                FeatureKind::Nominal(_) => None,
                FeatureKind::Numeric => {
                    let (lo, hi) = f.min_max().unwrap_or((0.0, 0.0));
                    Some(if hi > lo { 1.0 / (hi - lo) } else { 0.0 })
                }
            })
            .collect();
        Self { inv_range }
    }

    pub fn diff(&self, i: usize, a: f64, b: f64) -> f64 {
        match self.inv_range[i] {
            Some(inv) => (a - b).abs() * inv,
            None => (a != b) as u8 as f64,
        }
    }

    pub fn distance(&self, x1: &[f64], x2: &[f64]) -> f64 {
        let sum: f64 = (0..self.inv_range.len()).map(|i| self.diff(i, x1[i], x2[i])).sum();
        sum / self.inv_range.len() as f64
    }
}

/// Distance between two label vectors of the same task.
#[derive(Clone, Debug)]
pub struct TargetMetric {
    task: Task,
    /// Per-target multiplier: `1 / range` (regression) or `gamma * alpha_i`
    /// (label sets).
    scale: Vec<f64>,
}

impl TargetMetric {
    pub fn new(targets: &TargetBlock) -> Self {
        let task = targets.task();
        let t = targets.n_targets();
        let scale = match task {
            Task::Classification => vec![1.0],
            Task::Str | Task::Mtr => (0..t)
                .map(|j| {
                    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                    for e in targets.labeled_indices() {
                        lo = lo.min(targets.value(e, j));
                        hi = hi.max(targets.value(e, j));
                    }
                    if hi > lo {
                        1.0 / (hi - lo) / t as f64
                    } else {
                        0.0
                    }
                })
                .collect(),
            Task::Mlc | Task::Hmlc => label_weights(targets.target_weights()),
        };
        Self { task, scale }
    }

    pub fn distance(&self, y1: &[f64], y2: &[f64]) -> f64 {
        match self.task {
            Task::Classification => (y1[0] != y2[0]) as u8 as f64,
            Task::Str | Task::Mtr => y1
                .iter()
                .zip(y2)
                .zip(&self.scale)
                .map(|((a, b), s)| (a - b).abs() * s)
                .sum(),
            Task::Mlc | Task::Hmlc => y1
                .iter()
                .zip(y2)
                .zip(&self.scale)
                .filter(|((a, b), _)| (**a > 0.5) != (**b > 0.5))
                .map(|(_, s)| s)
                .sum(),
        }
    }
}

/// `gamma * alpha_i` with `gamma = 1 / sum alpha`.
fn label_weights(alpha: Vec<f64>) -> Vec<f64> {
    let total: f64 = alpha.iter().sum();
    alpha.into_iter().map(|a| a / total).collect()
}

pub fn descriptive_distance(x1: &[f64], x2: &[f64], d: &Dataset) -> f64 {
    DescriptiveMetric::new(d).distance(x1, x2)
}

/// Target distance of two labeled rows. Regression targets are normalized by
/// the given per-target ranges.
pub fn target_distance(
    y1: &[f64],
    y2: &[f64],
    task: Task,
    hierarchy: Option<&Hierarchy>,
    ranges: &[f64],
) -> Result<f64> {
    if y1.iter().chain(y2).any(|v| v.is_nan()) {
        return Err(Error::InvalidParam("target distance needs two labeled examples".into()));
    }
    let scale = match task {
        Task::Classification => vec![1.0],
        Task::Str | Task::Mtr => ranges
            .iter()
            .map(|&r| if r > 0.0 { 1.0 / r / ranges.len() as f64 } else { 0.0 })
            .collect(),
        Task::Mlc => label_weights(vec![1.0; y1.len()]),
        Task::Hmlc => label_weights(
            hierarchy
                .map(|h| h.weights().to_vec())
                .unwrap_or_else(|| vec![1.0; y1.len()]),
        ),
    };
    Ok(TargetMetric { task, scale }.distance(y1, y2))
}

/// Row-major copy of the features for fast pairwise distances.
struct Rows {
    data: Vec<f64>,
    width: usize,
}

impl Rows {
    fn new(d: &Dataset) -> Self {
        let width = d.n_features();
        let mut data = Vec::with_capacity(d.n_examples() * width);
        for e in 0..d.n_examples() {
            data.extend(d.row(e));
        }
        Self { data, width }
    }

    fn row(&self, e: usize) -> &[f64] {
        &self.data[e * self.width..(e + 1) * self.width]
    }
}

/// Influence of every example: 1 when labeled, otherwise linear in the
/// distance to the nearest labeled example, mapping the smallest such
/// distance to `w1` and the largest to `w0`.
pub fn instance_influence(d: &Dataset, w0: f64, w1: f64) -> Result<Vec<f64>> {
    let labeled = d.targets().labeled_indices();
    if labeled.is_empty() {
        return Err(Error::NoLabeled);
    }
    let metric = DescriptiveMetric::new(d);
    let rows = Rows::new(d);
    let nearest: Vec<Option<f64>> = (0..d.n_examples())
        .into_par_iter()
        .map(|e| {
            if d.targets().is_labeled(e) {
                return None;
            }
            let x = rows.row(e);
            Some(
                labeled
                    .iter()
                    .map(|&l| metric.distance(x, rows.row(l)))
                    .fold(f64::INFINITY, f64::min),
            )
        })
        .collect();
    let observed = nearest.iter().flatten();
    let lo = observed.clone().copied().fold(f64::INFINITY, f64::min);
    let hi = observed.copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(nearest
        .into_iter()
        .map(|n| match n {
            None => 1.0,
            Some(_) if hi <= lo => (w0 + w1) / 2.0,
            Some(dist) => w0 + (w1 - w0) * (hi - dist) / (hi - lo),
        })
        .collect())
}

/// The `k` examples nearest to `r` (excluding `r`), ties by index.
pub fn nearest_neighbours(d: &Dataset, r: usize, k: usize) -> Vec<(usize, f64)> {
    let metric = DescriptiveMetric::new(d);
    let rows = Rows::new(d);
    neighbours_of(&metric, &rows, r, k)
}

fn neighbours_of(metric: &DescriptiveMetric, rows: &Rows, r: usize, k: usize) -> Vec<(usize, f64)> {
    let m = rows.data.len() / rows.width.max(1);
    let x = rows.row(r);
    let mut all: Vec<(usize, f64)> = (0..m)
        .filter(|&e| e != r)
        .map(|e| (e, metric.distance(x, rows.row(e))))
        .collect();
    all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

/// Example indices drawn by the Relief loop, in order.
pub fn relief_picks(n_examples: usize, m: usize, seed: u64) -> Vec<usize> {
    let mut rng = seeded(seed);
    (0..m).map(|_| rng.random_range(0..n_examples)).collect()
}

pub fn ssl_relief(d: &Dataset, p: &ReliefParams) -> Result<FeatureRanking> {
    p.validate()?;
    let n = d.n_examples();
    if n < p.k + 1 {
        return Err(Error::InvalidParam(format!(
            "Relief with k = {} needs at least {} examples, got {n}",
            p.k,
            p.k + 1
        )));
    }
    let m = p.m.unwrap_or(n);
    let picks = relief_picks(n, m, p.seed);
    let influence = instance_influence(d, p.w0, p.w1)?;
    let metric = DescriptiveMetric::new(d);
    let target_metric = TargetMetric::new(d.targets());
    let rows = Rows::new(d);
    let targets = d.targets();

    let mut distinct = picks.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let neighbours: BTreeMap<usize, Vec<(usize, f64)>> = distinct
        .par_iter()
        .map(|&r| (r, neighbours_of(&metric, &rows, r, p.k)))
        .collect();

    let nf = d.n_features();
    let mut p_da = vec![0.0; nf];
    let mut p_dadc = vec![0.0; nf];
    let mut p_dc = 0.0;
    let mut s = 0.0;
    for r in &picks {
        let xr = rows.row(*r);
        for &(nb, dx) in &neighbours[r] {
            let w = influence[*r] * influence[nb];
            s += w;
            let dc = match (targets.row(*r), targets.row(nb)) {
                (Some(yr), Some(yn)) => target_metric.distance(yr, yn),
                _ => dx,
            };
            p_dc += w * dc;
            let xn = rows.row(nb);
            for i in 0..nf {
                let di = metric.diff(i, xr[i], xn[i]);
                p_da[i] += w * di;
                p_dadc[i] += w * di * dc;
            }
        }
    }

    let mut ranking = FeatureRanking::new("relief", d.feature_names(), vec![0.0; nf])
        .with_meta("relief", p)
        .with_meta("n_labeled", d.n_labeled());
    if p_dc <= 0.0 || s - p_dc <= 0.0 {
        ranking
            .warnings
            .push("degenerate cluster differences; all Relief importances set to 0".into());
        return Ok(ranking);
    }
    for i in 0..nf {
        ranking.scores[i] = p_dadc[i] / p_dc - (p_da[i] - p_dadc[i]) / (s - p_dc);
    }
    Ok(ranking)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FeatureColumn;

    fn regression(features: Vec<FeatureColumn>, y: Vec<Option<f64>>) -> Dataset {
        let rows: Vec<_> = y.into_iter().map(|v| v.map(|v| vec![v])).collect();
        let t = TargetBlock::new(Task::Str, vec!["y".into()], vec![], None, &rows).unwrap();
        Dataset::new(features, t).unwrap()
    }

    #[test]
    fn descriptive_distance_cases() {
        let d = regression(
            vec![
                FeatureColumn::nominal("c", vec!["a".into(), "b".into()], &[0, 1, 0]).unwrap(),
                FeatureColumn::numeric("x", vec![1.0, 5.0, 3.0]),
            ],
            vec![Some(0.0), Some(1.0), Some(2.0)],
        );
        assert_eq!(descriptive_distance(&[0.0, 3.0], &[0.0, 3.0], &d), 0.0);
        assert_eq!(descriptive_distance(&[0.0, 3.0], &[0.0, 1.0], &d), 0.25);
        let nominal = regression(
            vec![FeatureColumn::nominal("c", vec!["a".into(), "b".into()], &[0, 1]).unwrap()],
            vec![Some(0.0), Some(1.0)],
        );
        assert_eq!(descriptive_distance(&[0.0], &[1.0], &nominal), 1.0);
    }

    #[test]
    fn target_distance_cases() {
        let mlc = target_distance(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], Task::Mlc, None, &[]).unwrap();
        assert_eq!(mlc, 0.5);
        let h = Hierarchy::new(vec!["root".into(), "child".into()], &[("root".into(), "child".into())], 0.75)
            .unwrap();
        let hd = target_distance(&[1.0, 0.0], &[1.0, 1.0], Task::Hmlc, Some(&h), &[]).unwrap();
        assert!((hd - 0.75 / 1.75).abs() < 1e-15);
        assert_eq!(target_distance(&[2.0], &[2.0], Task::Str, None, &[4.0]).unwrap(), 0.0);
        assert_eq!(target_distance(&[1.0], &[3.0], Task::Str, None, &[4.0]).unwrap(), 0.5);
        assert!(target_distance(&[f64::NAN], &[3.0], Task::Str, None, &[4.0]).is_err());
    }

    #[test]
    fn influence_extremes() {
        let d = regression(
            vec![FeatureColumn::numeric("x", vec![0.0, 1.0, 2.0, 10.0])],
            vec![Some(0.0), None, None, None],
        );
        let w = instance_influence(&d, 0.2, 0.8).unwrap();
        assert_eq!(w[0], 1.0);
        assert!((w[1] - 0.8).abs() < 1e-15);
        assert!((w[3] - 0.2).abs() < 1e-15);
        assert!(w[2] > 0.2 && w[2] < 0.8);
        assert!(instance_influence(&d, 1.0, 1.0).unwrap().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn constant_feature_scores_zero() {
        let x: Vec<f64> = (0..30).map(|i| (i * 7 % 11) as f64).collect();
        let y: Vec<Option<f64>> = x.iter().map(|v| Some(v * 2.0)).collect();
        let d = regression(
            vec![FeatureColumn::numeric("x", x), FeatureColumn::numeric("c", vec![3.0; 30])],
            y,
        );
        let r = ssl_relief(&d, &ReliefParams { k: 5, ..ReliefParams::default() }).unwrap();
        assert_eq!(r.scores[1], 0.0);
        assert!(r.scores[0] > 0.0);
    }

    #[test]
    fn too_few_examples() {
        let d = regression(vec![FeatureColumn::numeric("x", vec![0.0, 1.0])], vec![Some(0.0), Some(1.0)]);
        assert!(ssl_relief(&d, &ReliefParams { k: 2, ..ReliefParams::default() }).is_err());
    }
}

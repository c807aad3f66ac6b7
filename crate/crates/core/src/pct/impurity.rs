//! Mixed target/descriptive impurity.
//!
//! Every clustering variable (each target, each feature) contributes its
//! Gini index (nominal) or variance (numeric) over the examples at hand,
//! divided by the same quantity on the whole training set. Targets carry
//! weight `w * alpha_j / T`, features `(1 - w) / D`. Missing values (the
//! targets of unlabeled examples) are skipped per variable.

use crate::data::{Dataset, Task};

use super::PctParams;

/// Gini index `1 - sum_v p(v)^2` of category codes; NaN entries are ignored.
pub fn gini(codes: &[f64]) -> f64 {
    let mut counts: Vec<usize> = Vec::new();
    let mut n = 0usize;
    for &c in codes {
        if c.is_nan() {
            continue;
        }
        let c = c as usize;
        if c >= counts.len() {
            counts.resize(c + 1, 0);
        }
        counts[c] += 1;
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&k| (k as f64 / n).powi(2)).sum::<f64>()
}

/// Population variance; NaN entries are ignored, empty input gives 0.
pub fn variance(values: &[f64]) -> f64 {
    let obs = values.iter().filter(|v| !v.is_nan());
    let (sum, n) = obs.clone().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    obs.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum VarKind {
    Numeric,
    Nominal { n_cat: usize },
}

#[derive(Clone, Debug)]
pub(crate) struct ClusterVar {
    pub kind: VarKind,
    pub coef: f64,
    /// Offset into the stats buffer.
    pub slot: usize,
}

/// The clustering variables of one training set with their precomputed
/// normalizers. Numeric columns are stored shifted by their training mean.
#[derive(Clone, Debug)]
pub struct ClusteringSpace {
    pub(crate) vars: Vec<ClusterVar>,
    columns: Vec<Vec<f64>>,
    stats_len: usize,
}

impl ClusteringSpace {
    pub fn new(d: &Dataset, params: &PctParams) -> Self {
        let w = params.supervision;
        let targets = d.targets();
        let t = targets.n_targets() as f64;
        let n_feat = d.n_features() as f64;
        let alphas = targets.target_weights();
        let mut vars = Vec::new();
        let mut columns = Vec::new();
        let mut slot = 0;
        let mut push = |kind: VarKind, col: Vec<f64>, weight: f64| {
            if weight == 0.0 {
                return;
            }
            let norm = match kind {
                VarKind::Numeric => variance(&col),
                VarKind::Nominal { .. } => gini(&col),
            };
            if norm == 0.0 {
                return;
            }
            let col = match kind {
                VarKind::Numeric => {
                    let obs: Vec<f64> = col.iter().copied().filter(|v| !v.is_nan()).collect();
                    let shift = obs.iter().sum::<f64>() / obs.len() as f64;
                    col.into_iter().map(|v| v - shift).collect()
                }
                VarKind::Nominal { .. } => col,
            };
            let width = match kind {
                VarKind::Numeric => 3,
                VarKind::Nominal { n_cat } => 1 + n_cat,
            };
            vars.push(ClusterVar {
                kind,
                coef: weight / norm,
                slot,
            });
            slot += width;
            columns.push(col);
        };

        if w > 0.0 {
            for j in 0..targets.n_targets() {
                let col: Vec<f64> = (0..d.n_examples()).map(|e| targets.value(e, j)).collect();
                let kind = if targets.task() == Task::Classification {
                    VarKind::Nominal {
                        n_cat: targets.classes().len(),
                    }
                } else {
                    VarKind::Numeric
                };
                push(kind, col, w * alphas[j] / t);
            }
        }
        if w < 1.0 {
            for f in d.features() {
                let kind = if f.is_numeric() {
                    VarKind::Numeric
                } else {
                    VarKind::Nominal {
                        n_cat: f.n_categories(),
                    }
                };
                push(kind, f.values().to_vec(), (1.0 - w) / n_feat);
            }
        }
        Self {
            vars,
            columns,
            stats_len: slot,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub(crate) fn empty_stats(&self) -> Stats {
        Stats {
            n: 0,
            acc: vec![0.0; self.stats_len],
        }
    }

    pub(crate) fn add(&self, s: &mut Stats, e: usize) {
        s.n += 1;
        for (v, col) in self.vars.iter().zip(&self.columns) {
            let x = col[e];
            if x.is_nan() {
                continue;
            }
            let a = &mut s.acc[v.slot..];
            match v.kind {
                VarKind::Numeric => {
                    a[0] += 1.0;
                    a[1] += x;
                    a[2] += x * x;
                }
                VarKind::Nominal { .. } => {
                    a[0] += 1.0;
                    a[1 + x as usize] += 1.0;
                }
            }
        }
    }

    pub(crate) fn stats_of(&self, examples: &[usize]) -> Stats {
        let mut s = self.empty_stats();
        for &e in examples {
            self.add(&mut s, e);
        }
        s
    }

    /// Impurity from accumulated sufficient statistics.
    pub(crate) fn impurity_stats(&self, s: &Stats) -> f64 {
        let mut total = 0.0;
        for v in &self.vars {
            let a = &s.acc[v.slot..];
            let cnt = a[0];
            if cnt <= 0.0 {
                continue;
            }
            let raw = match v.kind {
                VarKind::Numeric => {
                    let mean = a[1] / cnt;
                    (a[2] / cnt - mean * mean).max(0.0)
                }
                VarKind::Nominal { n_cat } => {
                    let sq: f64 = a[1..1 + n_cat].iter().map(|k| k * k).sum();
                    (1.0 - sq / (cnt * cnt)).max(0.0)
                }
            };
            total += v.coef * raw;
        }
        total
    }

    /// Impurity of an example multiset computed directly (two-pass).
    pub fn impurity(&self, examples: &[usize]) -> f64 {
        let mut total = 0.0;
        let mut buf = Vec::with_capacity(examples.len());
        for (v, col) in self.vars.iter().zip(&self.columns) {
            buf.clear();
            buf.extend(examples.iter().map(|&e| col[e]));
            let raw = match v.kind {
                VarKind::Numeric => variance(&buf),
                VarKind::Nominal { .. } => gini(&buf),
            };
            total += v.coef * raw;
        }
        total
    }
}

/// Per-variable sufficient statistics: `[count, sum, sum_sq]` for numeric
/// variables and `[count, per-category counts...]` for nominal ones.
#[derive(Clone, Debug)]
pub(crate) struct Stats {
    pub n: usize,
    acc: Vec<f64>,
}

impl Stats {
    /// `self = total - part`.
    pub fn set_difference(&mut self, total: &Stats, part: &Stats) {
        self.n = total.n - part.n;
        for ((o, t), p) in self.acc.iter_mut().zip(&total.acc).zip(&part.acc) {
            *o = t - p;
        }
    }
}

/// Mixed impurity of `examples` within training set `d`.
pub fn impurity(examples: &[usize], d: &Dataset, params: &PctParams) -> f64 {
    ClusteringSpace::new(d, params).impurity(examples)
}

//! Semi-supervised Laplacian score for single-target regression.
//!
//! Features are one-hot encoded and range-normalized. A symmetric kNN graph
//! with heat-kernel weights `exp(-d^2 / (2 sigma^2))` is built, with `sigma`
//! the median pairwise distance, and edges joining two labeled examples are
//! multiplied by an emphasis factor. Each encoded column `f` then scores
//! `f~' L f~ / f~' D f~` with `L = D - S` and `f~` the degree-weighted
//! centering of `f` (lower is better). A nominal feature scores the sum over
//! its indicator columns. Scores are flipped into importances with
//! `S + s - score`, where `S` and `s` are the largest and smallest raw scores,
//! and constant features get `-inf`.
//!
//! The graph constants (k = 10, median bandwidth, emphasis 2) are defaults of
//! this implementation and can be changed through [`LaplaceParams`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{one_hot_encode, Dataset, Task};
use crate::error::{Error, Result};
use crate::ranking::FeatureRanking;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceParams {
    pub k: usize,
    /// Kernel bandwidth; `None` uses the median pairwise distance.
    pub bandwidth: Option<f64>,
    pub labeled_emphasis: f64,
}

impl Default for LaplaceParams {
    fn default() -> Self {
        Self {
            k: 10,
            bandwidth: None,
            labeled_emphasis: 2.0,
        }
    }
}

/// Raw per-feature Laplacian scores; `None` marks a constant feature.
pub fn raw_scores(d: &Dataset, p: &LaplaceParams) -> Result<Vec<Option<f64>>> {
    if d.task() != Task::Str {
        return Err(Error::UnsupportedTask(format!(
            "the Laplacian score supports single-target regression only, not {}",
            d.task()
        )));
    }
    if p.k == 0 {
        return Err(Error::InvalidParam("graph neighbour count must be at least 1".into()));
    }
    let m = d.n_examples();
    if m < p.k + 1 {
        return Err(Error::InvalidParam(format!(
            "the Laplacian score with k = {} needs at least {} examples, got {m}",
            p.k,
            p.k + 1
        )));
    }

    let enc = one_hot_encode(d);
    let w = enc.n_cols;
    let mut x = enc.data.clone();
    let mut constant = vec![false; w];
    for c in 0..w {
        let col = enc.column(c);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            constant[c] = true;
        }
        for r in 0..m {
            x[r * w + c] = if hi > lo { (col[r] - lo) / (hi - lo) } else { 0.0 };
        }
    }
    let row = |r: usize| &x[r * w..(r + 1) * w];
    let dist: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| row(i).iter().zip(row(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .collect()
        })
        .collect();

    let sigma = match p.bandwidth {
        Some(b) => b,
        None => {
            let mut pairs: Vec<f64> = (0..m).flat_map(|i| dist[i][i + 1..].to_vec()).collect();
            pairs.sort_by(f64::total_cmp);
            let n = pairs.len();
            if n % 2 == 1 {
                pairs[n / 2]
            } else {
                (pairs[n / 2 - 1] + pairs[n / 2]) / 2.0
            }
        }
    };
    let sigma = if sigma > 0.0 { sigma } else { 1.0 };

    let mut adjacent = vec![vec![false; m]; m];
    for i in 0..m {
        let mut order: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| dist[i][a].total_cmp(&dist[i][b]).then(a.cmp(&b)));
        for &j in &order[..p.k] {
            adjacent[i][j] = true;
            adjacent[j][i] = true;
        }
    }
    let targets = d.targets();
    let mut s = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            if adjacent[i][j] {
                let mut v = (-dist[i][j].powi(2) / (2.0 * sigma * sigma)).exp();
                if targets.is_labeled(i) && targets.is_labeled(j) {
                    v *= p.labeled_emphasis;
                }
                s[i][j] = v;
            }
        }
    }
    let degree: Vec<f64> = s.iter().map(|r| r.iter().sum()).collect();
    let total_degree: f64 = degree.iter().sum();

    let column_score = |c: usize| -> Option<f64> {
        if constant[c] {
            return None;
        }
        let f: Vec<f64> = (0..m).map(|r| x[r * w + c]).collect();
        let shift = f.iter().zip(&degree).map(|(a, b)| a * b).sum::<f64>() / total_degree;
        let ft: Vec<f64> = f.iter().map(|v| v - shift).collect();
        let mut num = 0.0;
        for i in 0..m {
            for j in 0..m {
                if s[i][j] != 0.0 {
                    num += s[i][j] * (ft[i] - ft[j]).powi(2);
                }
            }
        }
        num /= 2.0;
        let den: f64 = ft.iter().zip(&degree).map(|(v, dg)| dg * v * v).sum();
        if den > 0.0 {
            Some(num / den)
        } else {
            None
        }
    };
    let per_column: Vec<Option<f64>> = (0..w).into_par_iter().map(column_score).collect();
    Ok(enc
        .blocks
        .iter()
        .map(|b| {
            let scored: Vec<f64> = per_column[b.clone()].iter().flatten().copied().collect();
            if scored.is_empty() {
                None
            } else {
                Some(scored.iter().sum())
            }
        })
        .collect())
}

pub fn laplace_score(d: &Dataset, p: &LaplaceParams) -> Result<FeatureRanking> {
    let raw = raw_scores(d, p)?;
    let scored = raw.iter().flatten();
    let hi = scored.clone().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = scored.copied().fold(f64::INFINITY, f64::min);
    let scores = raw
        .iter()
        .map(|r| match r {
            Some(v) if *v == hi => lo,
            Some(v) if *v == lo => hi,
            Some(v) => (hi + lo - v).clamp(lo, hi),
            None => f64::NEG_INFINITY,
        })
        .collect();
    let mut ranking = FeatureRanking::new("laplace", d.feature_names(), scores)
        .with_meta("laplace", p)
        .with_meta("n_labeled", d.n_labeled());
    let n_constant = raw.iter().filter(|r| r.is_none()).count();
    if n_constant > 0 {
        ranking
            .warnings
            .push(format!("{n_constant} constant feature(s) ranked last"));
    }
    Ok(ranking)
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{curve_and_area, evaluate_ranking, higher_is_better, make_folds, PerformanceCurve};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::method::{rank, RankMethod, RankerConfig};
use crate::rng::{permutation, seeded, substream_seed};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XvalConfig {
    pub folds: usize,
    pub l_grid: Vec<usize>,
    pub eval_k: Vec<usize>,
    pub seed: u64,
    pub ranker: RankerConfig,
    /// Candidate configurations for the semi-supervised ranking; empty means
    /// `ranker` is used as is.
    pub tuning: Vec<RankerConfig>,
    pub inner_folds: usize,
    /// Trees per ensemble while tuning; `None` keeps the ranker's count.
    pub tuning_trees: Option<usize>,
}

impl XvalConfig {
    pub fn new(ranker: RankerConfig, seed: u64) -> Self {
        Self {
            folds: 10,
            l_grid: vec![50, 100, 200, 350, 500],
            eval_k: vec![20, 40],
            seed,
            ranker,
            tuning: Vec::new(),
            inner_folds: 4,
            tuning_trees: None,
        }
    }
}

/// One `(fold, L)` cell: kNN performance per evaluation `k` for the
/// semi-supervised and supervised rankings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub fold: usize,
    pub l: usize,
    pub test_size: usize,
    pub chosen: String,
    pub ssl_scores: Vec<f64>,
    pub sl_scores: Vec<f64>,
    pub ssl: Vec<f64>,
    pub sl: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub variant: String,
    pub k: usize,
    pub curve: PerformanceCurve,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XvalResult {
    pub method: RankMethod,
    pub measure: String,
    pub higher_is_better: bool,
    pub cells: Vec<CellResult>,
    pub curves: Vec<CurveSummary>,
    /// `(k, delta)` with positive delta meaning the semi-supervised ranking
    /// performed better.
    pub deltas: Vec<(usize, f64)>,
}

/// `base` with the supervision weight set to each of `ws`.
pub fn supervision_grid(base: &RankerConfig, ws: &[f64]) -> Vec<RankerConfig> {
    ws.iter()
        .map(|&w| {
            let mut c = base.clone();
            c.pct.supervision = w;
            c
        })
        .collect()
}

/// Influence intervals `w0 <= w1` over quarter steps and `k` in {15, 20, 30}.
pub fn relief_grid(base: &RankerConfig) -> Vec<RankerConfig> {
    let steps = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut out = Vec::new();
    for &k in &[15, 20, 30] {
        for (a, &w0) in steps.iter().enumerate() {
            for &w1 in &steps[a..] {
                let mut c = base.clone();
                c.relief.w0 = w0;
                c.relief.w1 = w1;
                c.relief.k = k;
                out.push(c);
            }
        }
    }
    out
}

/// Picks the candidate with the best internal cross-validated kNN
/// performance on `train` (first best on ties), returning it with every
/// candidate's mean score.
pub fn select_config(
    train: &Dataset,
    candidates: &[RankerConfig],
    inner_folds: usize,
    k: usize,
    seed: u64,
) -> Result<(RankerConfig, Vec<f64>)> {
    let n = train.n_examples();
    let x = inner_folds.clamp(2, n.max(2));
    let perm = permutation(n, &mut seeded(seed));
    let folds: Vec<Vec<usize>> = (0..x).map(|j| perm[j * n / x..(j + 1) * n / x].to_vec()).collect();
    let better = higher_is_better(train.task());
    let mut means = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    for (c, cfg) in candidates.iter().enumerate() {
        let (mut acc, mut weight) = (0.0, 0.0);
        for (f, fold) in folds.iter().enumerate() {
            let held: Vec<usize> = fold.iter().copied().filter(|&e| train.targets().is_labeled(e)).collect();
            if held.is_empty() {
                continue;
            }
            let rest: Vec<usize> = (0..x).filter(|&j| j != f).flat_map(|j| folds[j].iter().copied()).collect();
            let inner = train.select(&rest);
            if inner.n_labeled() == 0 {
                continue;
            }
            let Ok(ranking) = rank(&inner, cfg) else { continue };
            let kk = k.min(inner.n_labeled());
            if let Ok(p) = evaluate_ranking(&inner, &train.select(&held), kk, &ranking.scores) {
                acc += p * held.len() as f64;
                weight += held.len() as f64;
            }
        }
        let mean = if weight > 0.0 { acc / weight } else { f64::NAN };
        means.push(mean);
        if mean.is_nan() {
            continue;
        }
        let improves = match best {
            None => true,
            Some((_, b)) => if better { mean > b } else { mean < b },
        };
        if improves {
            best = Some((c, mean));
        }
    }
    let (c, _) = best.ok_or_else(|| Error::Degenerate("no tuning candidate could be evaluated".into()))?;
    Ok((candidates[c].clone(), means))
}

fn run_cell(d: &Dataset, cfg: &XvalConfig, plan: &super::FoldPlan, fold: usize, li: usize) -> Result<CellResult> {
    let l = cfg.l_grid[li];
    let job_seed = substream_seed(cfg.seed, (fold * cfg.l_grid.len() + li) as u64);
    let train = plan.training_set(d, fold, l);
    let test = plan.test_set(d, fold);
    let base = cfg.ranker.reseeded(job_seed);

    let ssl_cfg = if cfg.tuning.is_empty() {
        base.clone()
    } else {
        let candidates: Vec<RankerConfig> = cfg
            .tuning
            .iter()
            .map(|c| {
                let mut c = c.reseeded(job_seed);
                if let Some(t) = cfg.tuning_trees {
                    c.ensemble.n_trees = t;
                }
                c
            })
            .collect();
        let k = cfg.eval_k.iter().copied().min().unwrap_or(20);
        let mut chosen = select_config(&train, &candidates, cfg.inner_folds, k, job_seed)?.0;
        chosen.ensemble.n_trees = base.ensemble.n_trees;
        chosen
    };
    let ssl_rank = rank(&train, &ssl_cfg)?;
    let sl_rank = rank(&train.labeled_only(), &base.supervised())?;
    let mut ssl = Vec::new();
    let mut sl = Vec::new();
    for &k in &cfg.eval_k {
        ssl.push(evaluate_ranking(&train, &test, k, &ssl_rank.scores)?);
        sl.push(evaluate_ranking(&train, &test, k, &sl_rank.scores)?);
    }
    Ok(CellResult {
        fold,
        l,
        test_size: test.n_examples(),
        chosen: ssl_cfg.label(),
        ssl_scores: ssl_rank.scores,
        sl_scores: sl_rank.scores,
        ssl,
        sl,
    })
}

/// Label-masked cross-validation comparing the semi-supervised ranking with
/// its supervised counterpart built from the labeled examples only.
pub fn xval(d: &Dataset, cfg: &XvalConfig) -> Result<XvalResult> {
    if cfg.eval_k.is_empty() {
        return Err(Error::InvalidParam("at least one evaluation k is required".into()));
    }
    let plan = make_folds(d, cfg.folds, &cfg.l_grid, cfg.seed)?;
    let jobs: Vec<(usize, usize)> = (0..cfg.folds)
        .flat_map(|f| (0..cfg.l_grid.len()).map(move |li| (f, li)))
        .collect();
    let cells: Vec<CellResult> = jobs
        .par_iter()
        .map(|&(f, li)| run_cell(d, cfg, &plan, f, li))
        .collect::<Result<_>>()?;

    let m = d.n_examples() as f64;
    let mut curves = Vec::new();
    let mut deltas = Vec::new();
    for (ki, &k) in cfg.eval_k.iter().enumerate() {
        let mut areas = [0.0; 2];
        for (vi, variant) in ["ssl", "sl"].into_iter().enumerate() {
            let points: Vec<(usize, f64)> = cfg
                .l_grid
                .iter()
                .map(|&l| {
                    let perf: f64 = cells
                        .iter()
                        .filter(|c| c.l == l)
                        .map(|c| c.test_size as f64 * if vi == 0 { c.ssl[ki] } else { c.sl[ki] })
                        .sum();
                    (l, perf / m)
                })
                .collect();
            let curve = curve_and_area(&points)?;
            areas[vi] = curve.area;
            curves.push(CurveSummary {
                variant: variant.to_string(),
                k,
                curve,
            });
        }
        let delta = if higher_is_better(d.task()) {
            areas[0] - areas[1]
        } else {
            areas[1] - areas[0]
        };
        deltas.push((k, delta));
    }
    Ok(XvalResult {
        method: cfg.ranker.method,
        measure: super::measure_name(d.task()).to_string(),
        higher_is_better: higher_is_better(d.task()),
        cells,
        curves,
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relief_grid_size() {
        let g = relief_grid(&RankerConfig::new(RankMethod::Relief, 0));
        assert_eq!(g.len(), 45);
        assert!(g.iter().all(|c| c.relief.w0 <= c.relief.w1));
    }

    #[test]
    fn supervision_grid_values() {
        let g = supervision_grid(&RankerConfig::new(RankMethod::Symbolic, 0), &[0.1, 0.5]);
        assert_eq!(g[1].pct.supervision, 0.5);
    }
}

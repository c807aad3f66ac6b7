use rand::seq::index::sample;
use rand::Rng as _;

use super::impurity::{ClusteringSpace, Stats};
use super::{PctParams, SplitMode, Test};
use crate::data::{Dataset, FeatureKind};
use crate::rng::Rng;

/// Impurities and gains below these are treated as floating-point noise.
const IMPURITY_EPS: f64 = 1e-12;
const GAIN_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Split {
    pub test: Test,
    /// `|E| impu(E) - |E_L| impu(E_L) - |E_R| impu(E_R)`.
    pub h: f64,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

struct Best {
    test: Test,
    h: f64,
}

/// Highest-gain binary test on `examples`, or `None` if the node should be
/// a leaf.
pub fn best_test(
    examples: &[usize],
    space: &ClusteringSpace,
    d: &Dataset,
    params: &PctParams,
    rng: &mut Rng,
) -> Option<Split> {
    let n = examples.len();
    let min_leaf = params.min_leaf_size.max(1);
    if n < 2 * min_leaf {
        return None;
    }
    let total = space.stats_of(examples);
    let base = n as f64 * space.impurity_stats(&total);
    if base / (n as f64) <= IMPURITY_EPS {
        return None;
    }

    let n_features = d.n_features();
    let candidates: Vec<usize> = match params.feature_subset {
        Some(k) if k < n_features => {
            let mut c = sample(rng, n_features, k).into_vec();
            c.sort_unstable();
            c
        }
        _ => (0..n_features).collect(),
    };

    let mut ctx = Ctx {
        space,
        total: &total,
        scratch: space.empty_stats(),
        base,
        n,
        min_leaf,
        best: None,
        best_h: GAIN_EPS * n as f64,
    };
    for f in candidates {
        let column = d.feature(f);
        match (&column.kind, params.split_mode) {
            (FeatureKind::Numeric, SplitMode::Exhaustive) => ctx.numeric_sweep(f, column.values(), examples),
            (FeatureKind::Numeric, SplitMode::SingleRandom) => {
                ctx.numeric_random(f, column.values(), examples, rng)
            }
            (FeatureKind::Nominal(cats), mode) => {
                ctx.nominal(f, column.values(), cats.len(), examples, mode, rng)
            }
        }
    }

    let best = ctx.best?;
    let (left, right) = examples
        .iter()
        .partition(|&&e| best.test.goes_left(d.value(e, best.test.feature())));
    Some(Split {
        test: best.test,
        h: best.h,
        left,
        right,
    })
}

struct Ctx<'a> {
    space: &'a ClusteringSpace,
    total: &'a Stats,
    scratch: Stats,
    base: f64,
    n: usize,
    min_leaf: usize,
    best: Option<Best>,
    best_h: f64,
}

impl Ctx<'_> {
    /// Gain of a split whose left side has statistics `left`.
    fn gain(&mut self, left: &Stats) -> f64 {
        self.scratch.set_difference(self.total, left);
        let nl = left.n as f64;
        let nr = self.scratch.n as f64;
        self.base - nl * self.space.impurity_stats(left) - nr * self.space.impurity_stats(&self.scratch)
    }

    fn sizes_ok(&self, nl: usize) -> bool {
        nl >= self.min_leaf && self.n - nl >= self.min_leaf
    }

    fn offer(&mut self, h: f64, test: impl FnOnce() -> Test) {
        if h > self.best_h {
            self.best_h = h;
            self.best = Some(Best { test: test(), h });
        }
    }

    fn numeric_sweep(&mut self, f: usize, values: &[f64], examples: &[usize]) {
        let mut order: Vec<(f64, usize)> = examples.iter().map(|&e| (values[e], e)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        if order[0].0 == order[self.n - 1].0 {
            return;
        }
        let mut left = self.space.empty_stats();
        for p in 0..self.n - 1 {
            self.space.add(&mut left, order[p].1);
            let (lo, hi) = (order[p].0, order[p + 1].0);
            if lo == hi || !self.sizes_ok(p + 1) {
                continue;
            }
            let h = self.gain(&left);
            self.offer(h, || Test::Numeric {
                feature: f,
                threshold: midpoint(lo, hi),
            });
        }
    }

    fn numeric_random(&mut self, f: usize, values: &[f64], examples: &[usize], rng: &mut Rng) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &e in examples {
            lo = lo.min(values[e]);
            hi = hi.max(values[e]);
        }
        if lo >= hi {
            return;
        }
        let threshold = rng.random_range(lo..hi);
        let mut left = self.space.empty_stats();
        for &e in examples {
            if values[e] <= threshold {
                self.space.add(&mut left, e);
            }
        }
        if !self.sizes_ok(left.n) {
            return;
        }
        let h = self.gain(&left);
        self.offer(h, || Test::Numeric { feature: f, threshold });
    }

    fn nominal(
        &mut self,
        f: usize,
        values: &[f64],
        n_cat: usize,
        examples: &[usize],
        mode: SplitMode,
        rng: &mut Rng,
    ) {
        let mut per_cat = vec![self.space.empty_stats(); n_cat];
        for &e in examples {
            self.space.add(&mut per_cat[values[e] as usize], e);
        }
        let present: Vec<usize> = (0..n_cat)
            .filter(|&c| per_cat[c].n > 0 && per_cat[c].n < self.n)
            .collect();
        let chosen: Vec<usize> = match mode {
            SplitMode::Exhaustive => present,
            SplitMode::SingleRandom => {
                if present.is_empty() {
                    return;
                }
                vec![present[rng.random_range(0..present.len())]]
            }
        };
        for c in chosen {
            if !self.sizes_ok(per_cat[c].n) {
                continue;
            }
            let h = self.gain(&per_cat[c]);
            self.offer(h, || Test::Nominal {
                feature: f,
                categories: vec![c],
            });
        }
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}

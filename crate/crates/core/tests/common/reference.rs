use rand::Rng as _;
use sslrank::data::Task;
use sslrank::rng::{seeded, Rng};
use sslrank::Dataset;

pub fn pop_var(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64
}

pub fn pop_gini(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mut counts = std::collections::BTreeMap::new();
    for &c in v {
        *counts.entry(c as i64).or_insert(0.0) += 1.0;
    }
    1.0 - counts.values().map(|c: &f64| (c / n) * (c / n)).sum::<f64>()
}

pub fn random_subset(m: usize, rng: &mut Rng) -> Vec<usize> {
    let size = rng.random_range(1..=m);
    let mut all: Vec<usize> = (0..m).collect();
    for i in 0..size {
        let j = rng.random_range(i..m);
        all.swap(i, j);
    }
    all.truncate(size);
    all
}

/// Supervised RReliefF with unit pair weights, written from scratch.
pub fn reference_relief(d: &Dataset, k: usize, seed: u64) -> Vec<f64> {
    let m = d.n_examples();
    let nf = d.n_features();
    // Reciprocal ranges, so that distances agree with the library bit for bit.
    let inv_ranges: Vec<Option<f64>> = (0..nf)
        .map(|i| {
            let f = d.feature(i);
            f.is_numeric().then(|| {
                let lo = f.values().iter().copied().fold(f64::INFINITY, f64::min);
                let hi = f.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if hi > lo {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            })
        })
        .collect();
    let diff = |i: usize, a: usize, b: usize| -> f64 {
        let (va, vb) = (d.value(a, i), d.value(b, i));
        match inv_ranges[i] {
            Some(inv) => (va - vb).abs() * inv,
            None => f64::from(u8::from(va != vb)),
        }
    };
    let ys: Vec<f64> = (0..m).map(|e| d.targets().value(e, 0)).collect();
    let y_range = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ys.iter().copied().fold(f64::INFINITY, f64::min);
    let ydiff = |a: usize, b: usize| -> f64 {
        if d.task() == Task::Classification {
            f64::from(u8::from(ys[a] != ys[b]))
        } else {
            (ys[a] - ys[b]).abs() / y_range
        }
    };

    let mut rng = seeded(seed);
    let (mut n_dc, mut total) = (0.0, 0.0);
    let mut n_da = vec![0.0; nf];
    let mut n_dcda = vec![0.0; nf];
    for _ in 0..m {
        let r = rng.random_range(0..m);
        let mut others: Vec<(f64, usize)> = (0..m)
            .filter(|&e| e != r)
            .map(|e| ((0..nf).map(|i| diff(i, r, e)).sum::<f64>() / nf as f64, e))
            .collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, n) in &others[..k] {
            let dy = ydiff(r, n);
            total += 1.0;
            n_dc += dy;
            for i in 0..nf {
                let di = diff(i, r, n);
                n_da[i] += di;
                n_dcda[i] += di * dy;
            }
        }
    }
    (0..nf)
        .map(|i| n_dcda[i] / n_dc - (n_da[i] - n_dcda[i]) / (total - n_dc))
        .collect()
}

/// Micro AUPRC by enumerating every distinct score as a threshold.
pub fn brute_auprc(scores: &[Vec<f64>], truth: &[Vec<f64>]) -> f64 {
    let pairs: Vec<(f64, bool)> = scores
        .iter()
        .flatten()
        .zip(truth.iter().flatten())
        .map(|(&s, &y)| (s, y == 1.0))
        .collect();
    let positives = pairs.iter().filter(|p| p.1).count() as f64;
    let mut thresholds: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut area = 0.0;
    let mut prev = 0.0;
    for t in thresholds {
        let above: Vec<&(f64, bool)> = pairs.iter().filter(|p| p.0 >= t).collect();
        let tp = above.iter().filter(|p| p.1).count() as f64;
        let recall = tp / positives;
        area += (recall - prev) * (tp / above.len() as f64);
        prev = recall;
    }
    area
}

/// ARI through explicit pair counting.
pub fn brute_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut in_a, mut in_b) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            both += f64::from(u8::from(sa && sb));
            in_a += f64::from(u8::from(sa));
            in_b += f64::from(u8::from(sb));
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let expected = in_a * in_b / pairs;
    let max = (in_a + in_b) / 2.0;
    if max == expected {
        1.0
    } else {
        (both - expected) / (max - expected)
    }
}

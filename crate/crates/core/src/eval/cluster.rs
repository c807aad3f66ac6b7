use rand::Rng as _;

use crate::data::{one_hot_encode, Dataset, Task};
use crate::error::{Error, Result};
use crate::pct::variance;
use crate::rng::{substream, Rng};

const MAX_ITER: usize = 300;
/// Independent k-means runs behind one CH estimate.
pub const CH_RUNS: usize = 5;
/// Cluster count for tasks without classes.
pub const CH_CLUSTERS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares.
    pub wcss: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn distinct_points(points: &[Vec<f64>]) -> usize {
    let mut keys: Vec<Vec<u64>> = points
        .iter()
        .map(|p| p.iter().map(|v| (v + 0.0).to_bits()).collect())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points[rng.random_range(0..n)].clone()];
    let mut nearest: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = nearest.iter().sum();
        let mut target = rng.random::<f64>() * total;
        let mut pick = n - 1;
        for (i, &w) in nearest.iter().enumerate() {
            if w > 0.0 && target < w {
                pick = i;
                break;
            }
            target -= w;
        }
        if nearest[pick] == 0.0 {
            pick = (0..n).rev().find(|&i| nearest[i] > 0.0).expect("k does not exceed distinct points");
        }
        let c = points[pick].clone();
        for (d, p) in nearest.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centre) in centroids.iter().enumerate() {
        let d = sq_dist(p, centre);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd(points: &[Vec<f64>], k: usize, rng: &mut Rng) -> Clustering {
    let dim = points[0].len();
    let mut centroids = plus_plus_init(points, k, rng);
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest_centroid(p, &centroids).0).collect();
    for _ in 0..MAX_ITER {
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignment) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest_centroid(p, &centroids).0).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }
    let wcss = points
        .iter()
        .zip(&assignment)
        .map(|(p, &a)| sq_dist(p, &centroids[a]))
        .sum();
    Clustering {
        assignment,
        centroids,
        wcss,
    }
}

/// Lloyd's algorithm from k-means++ seeds; the best of `restarts` runs by
/// within-cluster sum of squares.
pub fn kmeans(points: &[Vec<f64>], k: usize, restarts: usize, seed: u64) -> Result<Clustering> {
    if k == 0 || points.is_empty() {
        return Err(Error::InvalidParam("k-means needs k >= 1 and at least one point".into()));
    }
    let distinct = distinct_points(points);
    if k > distinct {
        return Err(Error::InvalidParam(format!(
            "k-means with k = {k} but only {distinct} distinct points"
        )));
    }
    let mut best: Option<Clustering> = None;
    for r in 0..restarts.max(1) {
        let run = lloyd(points, k, &mut substream(seed, r as u64));
        if best.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn choose2(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index from the contingency table.
pub fn ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0usize; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let index: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_a: f64 = table.iter().map(|r| choose2(r.iter().sum())).sum();
    let sum_b: f64 = (0..kb).map(|j| choose2(table.iter().map(|r| r[j]).sum())).sum();
    let total = choose2(n);
    if total == 0.0 {
        return 1.0;
    }
    let expected = sum_a * sum_b / total;
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Agreement of one clustering with the targets: ARI for classification,
/// otherwise one minus the (weighted) relative within-cluster variance.
pub fn cluster_agreement(d: &Dataset, assignment: &[usize]) -> Result<f64> {
    let targets = d.targets();
    let m = d.n_examples();
    if targets.task() == Task::Classification {
        let classes: Vec<usize> = (0..m).map(|e| targets.class_of(e).expect("fully labeled")).collect();
        return Ok(ari(assignment, &classes));
    }
    let k = assignment.iter().max().map_or(0, |x| x + 1);
    let alpha = targets.target_weights();
    let (mut v, mut weight) = (0.0, 0.0);
    for j in 0..targets.n_targets() {
        let column: Vec<f64> = (0..m).map(|e| targets.value(e, j)).collect();
        let total = variance(&column);
        if total == 0.0 {
            continue;
        }
        let mut within = 0.0;
        for c in 0..k {
            let members: Vec<f64> = (0..m).filter(|&e| assignment[e] == c).map(|e| column[e]).collect();
            within += members.len() as f64 / m as f64 * variance(&members);
        }
        v += alpha[j] * within / total;
        weight += alpha[j];
    }
    if weight == 0.0 {
        return Err(Error::Degenerate("every target is constant".into()));
    }
    Ok(1.0 - v / weight)
}

/// Clustering-hypothesis estimate: the highest agreement between target
/// structure and [`CH_RUNS`] independent k-means clusterings of the
/// one-hot encoded features.
pub fn ch_score(d: &Dataset, seed: u64) -> Result<f64> {
    if !d.is_fully_labeled() {
        return Err(Error::InvalidParam("CH estimation needs a fully labeled dataset".into()));
    }
    if d.n_examples() < 2 {
        return Err(Error::Degenerate("CH estimation needs at least two examples".into()));
    }
    let enc = one_hot_encode(d);
    let points: Vec<Vec<f64>> = (0..enc.n_rows).map(|r| enc.row(r).to_vec()).collect();
    let k = match d.task() {
        Task::Classification => d.targets().classes().len(),
        _ => CH_CLUSTERS,
    };
    let k = k.min(distinct_points(&points)).max(1);
    let mut best = f64::NEG_INFINITY;
    for run in 0..CH_RUNS {
        let c = kmeans(&points, k, 1, substream(seed, run as u64).random())?;
        best = best.max(cluster_agreement(d, &c.assignment)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cluster_centroid_is_mean() {
        let pts = vec![vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, 5.0]];
        let c = kmeans(&pts, 1, 3, 0).unwrap();
        assert_eq!(c.centroids[0], vec![2.0, 3.0]);
        assert_eq!(c.assignment, vec![0, 0, 0]);
    }

    #[test]
    fn singletons_have_zero_wcss() {
        let pts = vec![vec![0.0], vec![1.0], vec![5.0], vec![9.0]];
        assert_eq!(kmeans(&pts, 4, 2, 7).unwrap().wcss, 0.0);
        assert!(kmeans(&[vec![1.0], vec![1.0]], 2, 1, 0).is_err());
    }

    #[test]
    fn two_blobs_recovered() {
        let mut pts = Vec::new();
        for i in 0..10 {
            pts.push(vec![i as f64 * 0.01, 0.0]);
            pts.push(vec![100.0 + i as f64 * 0.01, 0.0]);
        }
        let truth: Vec<usize> = (0..20).map(|i| i % 2).collect();
        for seed in 0..5 {
            let c = kmeans(&pts, 2, 1, seed).unwrap();
            assert_eq!(ari(&c.assignment, &truth), 1.0);
        }
    }

    #[test]
    fn ari_cases() {
        assert_eq!(ari(&[0, 0, 1, 1], &[0, 0, 1, 1]), 1.0);
        assert_eq!(ari(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
        assert_eq!(ari(&[0, 1, 2, 3], &[0, 0, 0, 0]), 0.0);
    }
}

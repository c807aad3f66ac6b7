use crate::error::{Error, Result};

/// Fraction of positions where `pred` and `truth` disagree.
pub fn misclassification(pred: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let wrong = pred.iter().zip(truth).filter(|(p, t)| p != t).count();
    wrong as f64 / truth.len() as f64
}

/// Macro-averaged F1 over classes that occur in `truth` or `pred`.
pub fn f1_macro(pred: &[usize], truth: &[usize]) -> f64 {
    let n_classes = pred.iter().chain(truth).map(|&c| c + 1).max().unwrap_or(0);
    let mut tp = vec![0usize; n_classes];
    let mut n_pred = vec![0usize; n_classes];
    let mut n_true = vec![0usize; n_classes];
    for (&p, &t) in pred.iter().zip(truth) {
        n_pred[p] += 1;
        n_true[t] += 1;
        if p == t {
            tp[p] += 1;
        }
    }
    let mut sum = 0.0;
    let mut seen = 0usize;
    for c in 0..n_classes {
        if n_pred[c] == 0 && n_true[c] == 0 {
            continue;
        }
        seen += 1;
        let p = if n_pred[c] > 0 { tp[c] as f64 / n_pred[c] as f64 } else { 0.0 };
        let r = if n_true[c] > 0 { tp[c] as f64 / n_true[c] as f64 } else { 0.0 };
        if p + r > 0.0 {
            sum += 2.0 * p * r / (p + r);
        }
    }
    if seen == 0 {
        0.0
    } else {
        sum / seen as f64
    }
}

/// Root relative mean squared error averaged over targets, with each
/// target's variance taken over `truth`. A zero-variance target scores 0 if
/// predicted exactly and is an error otherwise.
pub fn rrmse(pred: &[Vec<f64>], truth: &[Vec<f64>]) -> Result<f64> {
    let n = truth.len();
    if n == 0 {
        return Err(Error::Degenerate("RRMSE of an empty test set".into()));
    }
    let t = truth[0].len();
    let mut total = 0.0;
    for j in 0..t {
        let mean = truth.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = truth.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n as f64;
        let mse = pred
            .iter()
            .zip(truth)
            .map(|(p, y)| (p[j] - y[j]).powi(2))
            .sum::<f64>()
            / n as f64;
        if var == 0.0 {
            if mse == 0.0 {
                continue;
            }
            return Err(Error::Degenerate(format!(
                "target {j} is constant on the test set but predicted inexactly"
            )));
        }
        total += (mse / var).sqrt();
    }
    Ok(total / t as f64)
}

/// Area under the micro-averaged precision-recall curve: all
/// `(example, label)` pairs pooled, thresholds at distinct scores in
/// descending order, area `sum (r_t - r_{t-1}) p_t`.
pub fn auprc_micro(scores: &[Vec<f64>], truth: &[Vec<f64>]) -> Result<f64> {
    let mut pairs: Vec<(f64, bool)> = scores
        .iter()
        .zip(truth)
        .flat_map(|(s, y)| s.iter().zip(y).map(|(&s, &y)| (s, y > 0.5)))
        .collect();
    let positives = pairs.iter().filter(|p| p.1).count();
    if positives == 0 {
        return Err(Error::Degenerate("no relevant label in the truth".into()));
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut area = 0.0;
    let mut tp = 0usize;
    let mut seen = 0usize;
    let mut prev_recall = 0.0;
    let mut i = 0;
    while i < pairs.len() {
        let s = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == s {
            seen += 1;
            tp += pairs[i].1 as usize;
            i += 1;
        }
        let recall = tp as f64 / positives as f64;
        let precision = tp as f64 / seen as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Ok(area)
}

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A partially ordered label set with per-label weights.
///
/// Roots weigh 1; every other label weighs `alpha` times the mean weight of
/// its parents. A flat hierarchy (every label a root) is the multi-label case.
#[derive(Clone, Debug, PartialEq)]
pub struct Hierarchy {
    labels: Vec<String>,
    parents: Vec<Vec<usize>>,
    alpha: f64,
    weights: Vec<f64>,
}

impl Hierarchy {
    /// Builds a hierarchy from `(parent, child)` edges.
    pub fn new(labels: Vec<String>, edges: &[(String, String)], alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParam(format!(
                "hierarchy alpha must lie in (0, 1), got {alpha}"
            )));
        }
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        if index.len() != labels.len() {
            return Err(Error::Schema("duplicate label in hierarchy".into()));
        }
        let mut parents = vec![Vec::new(); labels.len()];
        for (p, c) in edges {
            let pi = *index
                .get(p.as_str())
                .ok_or_else(|| Error::Schema(format!("hierarchy edge names unknown label `{p}`")))?;
            let ci = *index
                .get(c.as_str())
                .ok_or_else(|| Error::Schema(format!("hierarchy edge names unknown label `{c}`")))?;
            if !parents[ci].contains(&pi) {
                parents[ci].push(pi);
            }
        }
        for ps in &mut parents {
            ps.sort_unstable();
        }
        let weights = hierarchy_weights(&parents, alpha)?;
        Ok(Self {
            labels,
            parents,
            alpha,
            weights,
        })
    }

    /// All labels are roots.
    pub fn flat(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            parents: vec![Vec::new(); n],
            alpha: 0.75,
            weights: vec![1.0; n],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parents(&self, label: usize) -> &[usize] {
        &self.parents[label]
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(parent, child)` label-name pairs.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (c, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                out.push((self.labels[p].clone(), self.labels[c].clone()));
            }
        }
        out
    }

    /// First violated `(label, parent)` pair in a 0/1 label vector, if any.
    pub fn violation(&self, labels: &[f64]) -> Option<(usize, usize)> {
        for (c, ps) in self.parents.iter().enumerate() {
            if labels[c] > 0.5 {
                if let Some(&p) = ps.iter().find(|&&p| labels[p] < 0.5) {
                    return Some((c, p));
                }
            }
        }
        None
    }
}

/// Topological order of a parent-list DAG (Kahn, smallest index first).
pub fn topological_order(parents: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Cycle);
    }
    Ok(order)
}

/// Per-label weights: 1 for roots, `alpha * mean(parent weights)` otherwise.
pub fn hierarchy_weights(parents: &[Vec<usize>], alpha: f64) -> Result<Vec<f64>> {
    let order = topological_order(parents)?;
    weights_in_order(parents, alpha, &order)
}

/// Same recurrence evaluated along a caller-supplied order, which must be
/// topological.
pub fn weights_in_order(parents: &[Vec<usize>], alpha: f64, order: &[usize]) -> Result<Vec<f64>> {
    let n = parents.len();
    let mut weights = vec![f64::NAN; n];
    let mut done = vec![false; n];
    for &v in order {
        let ps = &parents[v];
        if ps.iter().any(|&p| !done[p]) {
            return Err(Error::InvalidParam("order is not topological".into()));
        }
        weights[v] = if ps.is_empty() {
            1.0
        } else {
            alpha * ps.iter().map(|&p| weights[p]).sum::<f64>() / ps.len() as f64
        };
        done[v] = true;
    }
    if done.iter().any(|d| !d) {
        return Err(Error::InvalidParam("order does not cover every label".into()));
    }
    Ok(weights)
}

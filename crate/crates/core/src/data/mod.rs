//! Dataset model: typed feature columns, a task-tagged target block with a
//! per-example labeled mask, label hierarchies, and label masking.

mod encode;
mod hierarchy;
mod io;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub use encode::{one_hot_encode, Encoded};
pub use hierarchy::{hierarchy_weights, topological_order, weights_in_order, Hierarchy};
pub use io::{load_dataset, schema_of, write_dataset, ColumnSpec, Schema, MISSING};

/// The five supported predictive-modeling tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classification,
    Mlc,
    Hmlc,
    Str,
    Mtr,
}

impl Task {
    /// MLC and HMLC targets are 0/1 label vectors.
    pub fn is_label_set(self) -> bool {
        matches!(self, Task::Mlc | Task::Hmlc)
    }

    pub fn is_regression(self) -> bool {
        matches!(self, Task::Str | Task::Mtr)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Task::Classification => "classification",
            Task::Mlc => "mlc",
            Task::Hmlc => "hmlc",
            Task::Str => "str",
            Task::Mtr => "mtr",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classification" => Ok(Task::Classification),
            "mlc" => Ok(Task::Mlc),
            "hmlc" => Ok(Task::Hmlc),
            "str" | "regression" => Ok(Task::Str),
            "mtr" => Ok(Task::Mtr),
            other => Err(Error::Schema(format!("unknown task `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FeatureKind {
    Numeric,
    /// Declared category set; values are stored as category indices.
    Nominal(Vec<String>),
}

/// One descriptive variable. Missing values are imputed on construction
/// (numeric: mean of observed, nominal: mode of observed), so `values` never
/// holds a missing marker.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureColumn {
    pub name: String,
    pub kind: FeatureKind,
    values: Vec<f64>,
}

impl FeatureColumn {
    pub fn numeric(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Numeric,
            values,
        }
    }

    /// Nominal column from category indices.
    pub fn nominal(name: impl Into<String>, categories: Vec<String>, codes: &[usize]) -> Result<Self> {
        let name = name.into();
        if let Some(&bad) = codes.iter().find(|&&c| c >= categories.len()) {
            return Err(Error::Schema(format!(
                "category index {bad} out of range for `{name}`"
            )));
        }
        Ok(Self {
            name,
            kind: FeatureKind::Nominal(categories),
            values: codes.iter().map(|&c| c as f64).collect(),
        })
    }

    /// Builds a column from partially observed values and imputes the gaps.
    pub fn with_missing(name: impl Into<String>, kind: FeatureKind, observed: &[Option<f64>]) -> Self {
        let fill = match &kind {
            FeatureKind::Numeric => {
                let (sum, n) = observed
                    .iter()
                    .flatten()
                    .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
                if n == 0 {
                    0.0
                } else {
                    sum / n as f64
                }
            }
            FeatureKind::Nominal(cats) => {
                let mut counts = vec![0usize; cats.len()];
                for v in observed.iter().flatten() {
                    counts[*v as usize] += 1;
                }
                // first category wins ties
                let mut best = 0;
                for (i, &c) in counts.iter().enumerate() {
                    if c > counts[best] {
                        best = i;
                    }
                }
                best as f64
            }
        };
        Self {
            name: name.into(),
            kind,
            values: observed.iter().map(|v| v.unwrap_or(fill)).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, FeatureKind::Numeric)
    }

    /// Zero for numeric columns.
    pub fn n_categories(&self) -> usize {
        match &self.kind {
            FeatureKind::Numeric => 0,
            FeatureKind::Nominal(c) => c.len(),
        }
    }

    /// Observed `(min, max)`; `None` for an empty column.
    pub fn min_max(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    fn select(&self, idx: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            kind: self.kind.clone(),
            values: idx.iter().map(|&e| self.values[e]).collect(),
        }
    }
}

/// Target variables of every example plus the labeled mask.
///
/// Classification stores one column of class indices, regression tasks store
/// `T` numeric columns, MLC/HMLC store `|labels|` 0/1 columns. Unlabeled
/// examples have every target missing.
#[derive(Clone, Debug)]
pub struct TargetBlock {
    task: Task,
    names: Vec<String>,
    classes: Vec<String>,
    hierarchy: Option<Hierarchy>,
    values: Vec<f64>,
    labeled: Vec<bool>,
}

impl TargetBlock {
    /// `rows[e]` is `None` for an unlabeled example.
    pub fn new(
        task: Task,
        names: Vec<String>,
        classes: Vec<String>,
        hierarchy: Option<Hierarchy>,
        rows: &[Option<Vec<f64>>],
    ) -> Result<Self> {
        let t = names.len();
        if t == 0 {
            return Err(Error::Schema("no target columns".into()));
        }
        match task {
            Task::Classification | Task::Str if t != 1 => {
                return Err(Error::Schema(format!("task {task} needs exactly one target")));
            }
            Task::Classification if classes.is_empty() => {
                return Err(Error::Schema("classification target has no categories".into()));
            }
            Task::Hmlc => match &hierarchy {
                Some(h) if h.labels() == names.as_slice() => {}
                Some(_) => return Err(Error::Schema("hierarchy labels must match target columns".into())),
                None => return Err(Error::Schema("hmlc task requires a hierarchy".into())),
            },
            _ => {}
        }
        let hierarchy = match task {
            Task::Hmlc => hierarchy,
            Task::Mlc => Some(Hierarchy::flat(names.clone())),
            _ => None,
        };
        let mut values = Vec::with_capacity(rows.len() * t);
        let mut labeled = Vec::with_capacity(rows.len());
        for (e, row) in rows.iter().enumerate() {
            match row {
                None => {
                    values.extend(std::iter::repeat_n(f64::NAN, t));
                    labeled.push(false);
                }
                Some(r) => {
                    if r.len() != t {
                        return Err(Error::Schema(format!("row {e}: expected {t} target values")));
                    }
                    if r.iter().any(|v| v.is_nan()) {
                        return Err(Error::PartialTarget { row: e });
                    }
                    match task {
                        Task::Classification => {
                            let c = r[0];
                            if c < 0.0 || c.fract() != 0.0 || c as usize >= classes.len() {
                                return Err(Error::Schema(format!("row {e}: class index {c} out of range")));
                            }
                        }
                        Task::Mlc | Task::Hmlc => {
                            if r.iter().any(|&v| v != 0.0 && v != 1.0) {
                                return Err(Error::Schema(format!("row {e}: label values must be 0/1")));
                            }
                            if let Some(h) = &hierarchy {
                                if let Some((c, p)) = h.violation(r) {
                                    return Err(Error::HierarchyViolation {
                                        row: e,
                                        label: names[c].clone(),
                                        parent: names[p].clone(),
                                    });
                                }
                            }
                        }
                        Task::Str | Task::Mtr => {}
                    }
                    values.extend_from_slice(r);
                    labeled.push(true);
                }
            }
        }
        Ok(Self {
            task,
            names,
            classes,
            hierarchy,
            values,
            labeled,
        })
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn n_targets(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Class names (classification only; empty otherwise).
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn hierarchy(&self) -> Option<&Hierarchy> {
        self.hierarchy.as_ref()
    }

    /// Per-target weights: hierarchy weights for MLC/HMLC, ones otherwise.
    pub fn target_weights(&self) -> Vec<f64> {
        match &self.hierarchy {
            Some(h) => h.weights().to_vec(),
            None => vec![1.0; self.n_targets()],
        }
    }

    pub fn len(&self) -> usize {
        self.labeled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labeled.is_empty()
    }

    pub fn is_labeled(&self, e: usize) -> bool {
        self.labeled[e]
    }

    pub fn labeled_mask(&self) -> &[bool] {
        &self.labeled
    }

    pub fn n_labeled(&self) -> usize {
        self.labeled.iter().filter(|&&l| l).count()
    }

    pub fn labeled_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.labeled[e]).collect()
    }

    /// Target vector of example `e`, `None` when unlabeled.
    pub fn row(&self, e: usize) -> Option<&[f64]> {
        if self.labeled[e] {
            let t = self.n_targets();
            Some(&self.values[e * t..(e + 1) * t])
        } else {
            None
        }
    }

    /// Value of target `j` for example `e`; NaN when unlabeled.
    pub fn value(&self, e: usize, j: usize) -> f64 {
        self.values[e * self.n_targets() + j]
    }

    /// Class index of a labeled classification example.
    pub fn class_of(&self, e: usize) -> Option<usize> {
        self.row(e).map(|r| r[0] as usize)
    }

    fn select(&self, idx: &[usize]) -> Self {
        let t = self.n_targets();
        let mut values = Vec::with_capacity(idx.len() * t);
        for &e in idx {
            values.extend_from_slice(&self.values[e * t..(e + 1) * t]);
        }
        Self {
            task: self.task,
            names: self.names.clone(),
            classes: self.classes.clone(),
            hierarchy: self.hierarchy.clone(),
            values,
            labeled: idx.iter().map(|&e| self.labeled[e]).collect(),
        }
    }

    /// Copy in which only examples with `keep[e]` (and already labeled)
    /// retain their targets.
    fn restrict_labels(&self, keep: &[bool]) -> Self {
        let t = self.n_targets();
        let mut out = self.clone();
        for (e, &k) in keep.iter().enumerate() {
            if !k && out.labeled[e] {
                out.labeled[e] = false;
                out.values[e * t..(e + 1) * t].fill(f64::NAN);
            }
        }
        out
    }
}

impl PartialEq for TargetBlock {
    fn eq(&self, other: &Self) -> bool {
        self.task == other.task
            && self.names == other.names
            && self.classes == other.classes
            && self.hierarchy == other.hierarchy
            && self.labeled == other.labeled
            && (0..self.len()).all(|e| self.row(e) == other.row(e))
    }
}

/// Examples with typed features and a target block.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<FeatureColumn>,
    targets: TargetBlock,
}

impl Dataset {
    pub fn new(features: Vec<FeatureColumn>, targets: TargetBlock) -> Result<Self> {
        let m = targets.len();
        if m == 0 {
            return Err(Error::EmptyDataset);
        }
        if features.is_empty() {
            return Err(Error::Schema("dataset has no features".into()));
        }
        for f in &features {
            if f.values.len() != m {
                return Err(Error::Schema(format!(
                    "column `{}` has {} entries, expected {m}",
                    f.name,
                    f.values.len()
                )));
            }
            if let FeatureKind::Nominal(cats) = &f.kind {
                if f.values.iter().any(|&v| v < 0.0 || v as usize >= cats.len()) {
                    return Err(Error::Schema(format!("column `{}` holds an undeclared category", f.name)));
                }
            }
        }
        Ok(Self { features, targets })
    }

    pub fn n_examples(&self) -> usize {
        self.targets.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn task(&self) -> Task {
        self.targets.task()
    }

    pub fn features(&self) -> &[FeatureColumn] {
        &self.features
    }

    pub fn feature(&self, i: usize) -> &FeatureColumn {
        &self.features[i]
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn targets(&self) -> &TargetBlock {
        &self.targets
    }

    pub fn value(&self, e: usize, i: usize) -> f64 {
        self.features[i].values[e]
    }

    /// Feature vector of example `e`.
    pub fn row(&self, e: usize) -> Vec<f64> {
        self.features.iter().map(|f| f.values[e]).collect()
    }

    pub fn n_labeled(&self) -> usize {
        self.targets.n_labeled()
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.targets.labeled.iter().all(|&l| l)
    }

    /// Examples at `idx` (duplicates allowed), in that order.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            features: self.features.iter().map(|f| f.select(idx)).collect(),
            targets: self.targets.select(idx),
        }
    }

    /// The labeled examples only.
    pub fn labeled_only(&self) -> Self {
        self.select(&self.targets.labeled_indices())
    }

    /// Copy keeping targets only for examples in `labeled`.
    pub fn with_labeled(&self, labeled: &[usize]) -> Self {
        let mut keep = vec![false; self.n_examples()];
        for &e in labeled {
            keep[e] = true;
        }
        Self {
            features: self.features.clone(),
            targets: self.targets.restrict_labels(&keep),
        }
    }

    /// Same examples with feature columns reordered so that new column `j`
    /// is old column `order[j]`.
    pub fn permute_features(&self, order: &[usize]) -> Self {
        Self {
            features: order.iter().map(|&i| self.features[i].clone()).collect(),
            targets: self.targets.clone(),
        }
    }

    /// Replaces the target block (same example count).
    pub fn with_targets(&self, targets: TargetBlock) -> Result<Self> {
        Dataset::new(self.features.clone(), targets)
    }
}

/// Keeps exactly `n_labeled` labels, chosen as the prefix of a seeded
/// permutation of all examples. For a fixed seed the labeled set grows
/// monotonically with `n_labeled`.
pub fn mask_labels(d: &Dataset, n_labeled: usize, seed: u64) -> Result<Dataset> {
    let m = d.n_examples();
    if n_labeled > m {
        return Err(Error::InvalidParam(format!(
            "cannot keep {n_labeled} labels out of {m} examples"
        )));
    }
    if !d.is_fully_labeled() {
        return Err(Error::InvalidParam("label masking needs a fully labeled dataset".into()));
    }
    let perm = rng::permutation(m, &mut rng::seeded(seed));
    Ok(d.with_labeled(&perm[..n_labeled]))
}

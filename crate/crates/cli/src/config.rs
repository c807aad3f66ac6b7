use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use sslrank::ensemble::EnsembleMethod;
use sslrank::eval::{relief_grid, supervision_grid, XvalConfig};
use sslrank::{RankMethod, RankerConfig};

use crate::error::CliError;

/// Every run setting. Each field can come from the JSON config file or a
/// flag; flags win.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Training data CSV
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// JSON schema describing the data columns
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Held-out test data CSV (evaluate)
    #[arg(long)]
    pub test_data: Option<PathBuf>,
    /// Schema of the test data; defaults to --schema
    #[arg(long)]
    pub test_schema: Option<PathBuf>,
    /// Ranking CSV to evaluate
    #[arg(long)]
    pub ranking: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// symbolic, genie3, rf, relief or laplace
    #[arg(long)]
    pub method: Option<String>,
    /// Ensemble method: bagging, rf or et
    #[arg(long)]
    pub ensemble: Option<String>,
    /// Trees per ensemble
    #[arg(long)]
    pub trees: Option<usize>,
    /// Supervision weight of the tree heuristic
    #[arg(long)]
    pub w: Option<f64>,
    /// Relief influence of the farthest unlabeled example
    #[arg(long)]
    pub w0: Option<f64>,
    /// Relief influence of the nearest unlabeled example
    #[arg(long)]
    pub w1: Option<f64>,
    /// Relief neighbour count
    #[arg(long)]
    pub relief_k: Option<usize>,
    /// Relief iterations (default: one per example)
    #[arg(long)]
    pub relief_m: Option<usize>,
    /// Neighbour count of the Laplacian graph
    #[arg(long)]
    pub laplace_k: Option<usize>,
    /// Minimal number of examples per leaf
    #[arg(long)]
    pub min_leaf: Option<usize>,
    /// Keep only this many labels (rank)
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub labeled: Option<usize>,
    /// Labeled-example counts for cross-validation, e.g. 50,100,200
    #[arg(long = "L-grid", value_delimiter = ',')]
    #[serde(rename = "L_grid")]
    pub l_grid: Option<Vec<usize>>,
    /// Cross-validation folds
    #[arg(long)]
    pub folds: Option<usize>,
    /// kNN neighbour counts used for evaluation, e.g. 20,40
    #[arg(long, value_delimiter = ',')]
    pub eval_k: Option<Vec<usize>>,
    /// Master seed (required)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Select w (or the Relief parameters) by internal cross-validation
    #[arg(long)]
    pub tune: Option<bool>,
    /// Candidate supervision weights for --tune
    #[arg(long, value_delimiter = ',')]
    pub w_grid: Option<Vec<f64>>,
    /// Trees per ensemble while tuning
    #[arg(long)]
    pub tune_trees: Option<usize>,
    /// Internal cross-validation folds for --tune
    #[arg(long)]
    pub inner_folds: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+ $(,)?) => {
        RunConfig { $($field: $top.$field.or($base.$field)),+ }
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overridden_by(self, flags: RunConfig) -> Self {
        overlay!(
            self, flags, data, schema, test_data, test_schema, ranking, out, method, ensemble, trees, w, w0, w1,
            relief_k, relief_m, laplace_k, min_leaf, labeled, l_grid, folds, eval_k, seed, tune, w_grid,
            tune_trees, inner_folds,
        )
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::usage("a seed is required (--seed or \"seed\" in the config)"))
    }

    pub fn data_paths(&self) -> Result<(&Path, &Path), CliError> {
        match (&self.data, &self.schema) {
            (Some(d), Some(s)) => Ok((d, s)),
            _ => Err(CliError::usage("--data and --schema are required")),
        }
    }

    pub fn out(&self) -> Result<&Path, CliError> {
        self.out.as_deref().ok_or_else(|| CliError::usage("--out is required"))
    }

    pub fn method(&self) -> Result<RankMethod, CliError> {
        let name = self.method.as_deref().ok_or_else(|| CliError::usage("--method is required"))?;
        Ok(name.parse()?)
    }

    pub fn eval_k(&self) -> Vec<usize> {
        self.eval_k.clone().unwrap_or_else(|| vec![20, 40])
    }

    pub fn ranker(&self) -> Result<RankerConfig, CliError> {
        let mut cfg = RankerConfig::new(self.method()?, self.seed()?);
        if let Some(e) = &self.ensemble {
            cfg.ensemble.method = e.parse::<EnsembleMethod>()?;
        }
        if let Some(t) = self.trees {
            cfg.ensemble.n_trees = t;
        }
        if let Some(w) = self.w {
            cfg.pct.supervision = w;
        }
        if let Some(m) = self.min_leaf {
            cfg.pct.min_leaf_size = m;
        }
        if let Some(w0) = self.w0 {
            cfg.relief.w0 = w0;
        }
        if let Some(w1) = self.w1 {
            cfg.relief.w1 = w1;
        }
        if let Some(k) = self.relief_k {
            cfg.relief.k = k;
        }
        cfg.relief.m = self.relief_m.or(cfg.relief.m);
        if let Some(k) = self.laplace_k {
            cfg.laplace.k = k;
        }
        Ok(cfg)
    }

    pub fn xval_config(&self) -> Result<XvalConfig, CliError> {
        let ranker = self.ranker()?;
        let mut cfg = XvalConfig::new(ranker.clone(), self.seed()?);
        if let Some(x) = self.folds {
            cfg.folds = x;
        }
        if let Some(g) = &self.l_grid {
            cfg.l_grid = g.clone();
        }
        cfg.eval_k = self.eval_k();
        if let Some(f) = self.inner_folds {
            cfg.inner_folds = f;
        }
        cfg.tuning_trees = self.tune_trees;
        if self.tune.unwrap_or(false) {
            cfg.tuning = match ranker.method {
                RankMethod::Relief => relief_grid(&ranker),
                RankMethod::Laplace => Vec::new(),
                _ => {
                    let default: Vec<f64> = (0..=10).map(|i| f64::from(i) / 10.0).collect();
                    supervision_grid(&ranker, self.w_grid.as_deref().unwrap_or(&default))
                }
            };
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig = serde_json::from_str(r#"{"seed": 3, "method": "relief", "L_grid": [50, 100], "w": 0.2}"#).unwrap();
        let flags = RunConfig {
            w: Some(0.7),
            ..RunConfig::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.seed, Some(3));
        assert_eq!(merged.w, Some(0.7));
        assert_eq!(merged.l_grid, Some(vec![50, 100]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sede": 3}"#).is_err());
    }

    #[test]
    fn tuning_grid_defaults_to_eleven_weights() {
        let cfg = RunConfig {
            method: Some("symbolic".into()),
            seed: Some(1),
            tune: Some(true),
            ..RunConfig::default()
        };
        assert_eq!(cfg.xval_config().unwrap().tuning.len(), 11);
    }
}

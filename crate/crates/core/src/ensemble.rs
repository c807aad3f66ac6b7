//! Bagging, Random Forests and extremely randomized trees over PCTs.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::pct::{grow_tree_in, ClusteringSpace, PctParams, SplitMode, TreeNode};
use crate::rng::{substream, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleMethod {
    Bagging,
    RandomForest,
    ExtraTrees,
}

impl std::str::FromStr for EnsembleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bagging" | "bag" => Ok(Self::Bagging),
            "rf" | "random_forest" | "randomforest" => Ok(Self::RandomForest),
            "et" | "ets" | "extra_trees" | "extratrees" => Ok(Self::ExtraTrees),
            other => Err(Error::InvalidParam(format!("unknown ensemble method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub method: EnsembleMethod,
    pub n_trees: usize,
    /// Only honoured for extra trees; bagging and forests always bootstrap.
    pub bootstrap: bool,
    pub seed: u64,
}

impl EnsembleParams {
    pub fn new(method: EnsembleMethod, n_trees: usize, seed: u64) -> Self {
        Self {
            method,
            n_trees,
            bootstrap: true,
            seed,
        }
    }

    pub fn uses_bootstrap(&self) -> bool {
        self.bootstrap || self.method != EnsembleMethod::ExtraTrees
    }

    /// Features considered per node for `d` features.
    pub fn feature_subset_size(&self, d: usize) -> usize {
        match self.method {
            EnsembleMethod::RandomForest => ((d as f64).sqrt().ceil() as usize).clamp(1, d.max(1)),
            _ => d,
        }
    }

    /// Tree parameters with the split mode and feature subset this method uses.
    pub fn tree_params(&self, base: &PctParams, d: usize) -> PctParams {
        PctParams {
            split_mode: if self.method == EnsembleMethod::ExtraTrees {
                SplitMode::SingleRandom
            } else {
                SplitMode::Exhaustive
            },
            feature_subset: Some(self.feature_subset_size(d)),
            ..base.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub trees: Vec<TreeNode>,
    pub oob: Vec<Vec<usize>>,
    pub params: EnsembleParams,
    pub tree_params: PctParams,
    pub n_train: usize,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// `m` uniform draws with replacement and the indices never drawn.
pub fn bootstrap_sample(m: usize, rng: &mut Rng) -> (Vec<usize>, Vec<usize>) {
    let mut drawn = vec![false; m];
    let sample: Vec<usize> = (0..m)
        .map(|_| {
            let e = rng.random_range(0..m);
            drawn[e] = true;
            e
        })
        .collect();
    let oob = (0..m).filter(|&e| !drawn[e]).collect();
    (sample, oob)
}

/// Grows one tree of the ensemble from its own substream.
pub fn grow_member(
    index: usize,
    d: &Dataset,
    ep: &EnsembleParams,
    tree_params: &PctParams,
    space: &ClusteringSpace,
) -> (TreeNode, Vec<usize>) {
    let mut rng = substream(ep.seed, index as u64);
    let m = d.n_examples();
    let (sample, oob) = if ep.uses_bootstrap() {
        bootstrap_sample(m, &mut rng)
    } else {
        ((0..m).collect(), Vec::new())
    };
    let tree = grow_tree_in(space, &sample, d, tree_params, &mut rng);
    (tree, oob)
}

pub fn grow_ensemble(d: &Dataset, ep: &EnsembleParams, pp: &PctParams) -> Result<Ensemble> {
    if ep.n_trees == 0 {
        return Err(Error::InvalidParam("n_trees must be at least 1".into()));
    }
    let tree_params = ep.tree_params(pp, d.n_features());
    tree_params.validate(d.n_features())?;
    let space = ClusteringSpace::new(d, &tree_params);
    let (trees, oob) = (0..ep.n_trees)
        .into_par_iter()
        .map(|i| grow_member(i, d, ep, &tree_params, &space))
        .unzip();
    Ok(Ensemble {
        trees,
        oob,
        params: ep.clone(),
        tree_params,
        n_train: d.n_examples(),
    })
}

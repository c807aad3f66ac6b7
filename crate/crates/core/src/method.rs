//! Uniform entry point over every ranking method.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::ensemble::{grow_ensemble, EnsembleMethod, EnsembleParams};
use crate::error::{Error, Result};
use crate::laplace::{laplace_score, LaplaceParams};
use crate::pct::PctParams;
use crate::rank_ensemble::{genie3_ranking, rf_ranking, symbolic_ranking};
use crate::ranking::FeatureRanking;
use crate::relief::{ssl_relief, ReliefParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Symbolic,
    Genie3,
    Rf,
    Relief,
    Laplace,
}

impl RankMethod {
    pub fn name(self) -> &'static str {
        match self {
            RankMethod::Symbolic => "symbolic",
            RankMethod::Genie3 => "genie3",
            RankMethod::Rf => "rf",
            RankMethod::Relief => "relief",
            RankMethod::Laplace => "laplace",
        }
    }

    pub fn is_ensemble(self) -> bool {
        matches!(self, RankMethod::Symbolic | RankMethod::Genie3 | RankMethod::Rf)
    }
}

impl std::fmt::Display for RankMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RankMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "symbolic" => Ok(Self::Symbolic),
            "genie3" => Ok(Self::Genie3),
            "rf" | "random_forest" => Ok(Self::Rf),
            "relief" => Ok(Self::Relief),
            "laplace" => Ok(Self::Laplace),
            other => Err(Error::InvalidParam(format!("unknown ranking method `{other}`"))),
        }
    }
}

/// A ranking method with all of its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankerConfig {
    pub method: RankMethod,
    pub ensemble: EnsembleParams,
    pub pct: PctParams,
    pub relief: ReliefParams,
    pub laplace: LaplaceParams,
}

impl RankerConfig {
    pub fn new(method: RankMethod, seed: u64) -> Self {
        Self {
            method,
            ensemble: EnsembleParams::new(EnsembleMethod::RandomForest, 100, seed),
            pct: PctParams {
                seed,
                ..PctParams::default()
            },
            relief: ReliefParams {
                seed,
                ..ReliefParams::default()
            },
            laplace: LaplaceParams::default(),
        }
    }

    /// Same method and parameters with every seed replaced.
    pub fn reseeded(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.ensemble.seed = seed;
        c.pct.seed = seed;
        c.relief.seed = seed;
        c
    }

    /// The fully supervised counterpart of this configuration.
    pub fn supervised(&self) -> Self {
        let mut c = self.clone();
        c.pct.supervision = 1.0;
        c.relief.w0 = 1.0;
        c.relief.w1 = 1.0;
        c
    }

    /// Short description of the tunable parameters.
    pub fn label(&self) -> String {
        match self.method {
            RankMethod::Relief => format!("w0={} w1={} k={}", self.relief.w0, self.relief.w1, self.relief.k),
            RankMethod::Laplace => format!("k={}", self.laplace.k),
            _ => format!("w={}", self.pct.supervision),
        }
    }
}

pub fn rank(d: &Dataset, cfg: &RankerConfig) -> Result<FeatureRanking> {
    if d.n_labeled() == 0 && cfg.method != RankMethod::Laplace {
        return Err(Error::NoLabeled);
    }
    match cfg.method {
        RankMethod::Relief => ssl_relief(d, &cfg.relief),
        RankMethod::Laplace => laplace_score(d, &cfg.laplace),
        RankMethod::Symbolic => Ok(symbolic_ranking(&grow_ensemble(d, &cfg.ensemble, &cfg.pct)?, d)),
        RankMethod::Genie3 => Ok(genie3_ranking(&grow_ensemble(d, &cfg.ensemble, &cfg.pct)?, d)),
        RankMethod::Rf => rf_ranking(&grow_ensemble(d, &cfg.ensemble, &cfg.pct)?, d),
    }
}

pub mod data;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod laplace;
pub mod method;
pub mod pct;
pub mod rank_ensemble;
pub mod ranking;
pub mod relief;
pub mod rng;
pub mod synthetic;

pub use data::{Dataset, FeatureColumn, FeatureKind, Hierarchy, TargetBlock, Task};
pub use error::{Error, Result};
pub use method::{rank, RankMethod, RankerConfig};
pub use ranking::FeatureRanking;

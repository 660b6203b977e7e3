//! Numerical machinery for aggregating heavy-tailed, tail-dependent risks:
//! stable-law sampling and scale laws, empirical VaR/CVaR with bootstrap
//! confidence intervals, majorization orderings of portfolio weights,
//! truncated-risk support bounds, EFGM / power-type copulas, tail-index
//! fitting, and limited-liability expected-utility sweeps.

pub mod dist;
pub mod error;
pub mod rng;
pub mod portfolio;
pub mod risk;
pub mod stats;

pub use dist::{DistributionSpec, LevyOrientation};
pub use error::{Error, Result};
pub use portfolio::{
    aggregate, majorization_chain, majorizes, schur_scan, AggregationReport, BoundVariant,
    DrawMatrix, ScanVerdict, TruncationMode, TruncationSpec, WeightVector,
};
pub use risk::{MeasureKind, RiskMeasureReport};
pub use stats::EstimateCi;

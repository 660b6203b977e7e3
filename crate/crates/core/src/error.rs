//! Error taxonomy shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A distribution / copula / liability parameter is outside its domain.
    /// `field` names the offending parameter.
    #[error("parameter out of domain: {field} = {value} must satisfy {constraint}")]
    ParameterDomain {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Requested an evaluation (density, cdf, quantile) the family does not
    /// support in closed form.
    #[error("unsupported evaluation for {family}: {what}")]
    UnsupportedEvaluation { family: String, what: &'static str },

    /// E|X|^r diverges for the requested family and exponent.
    #[error("infinite moment: E|X|^{r} diverges for {family} (finite only for r < {max_r})")]
    InfiniteMoment { family: String, r: f64, max_r: f64 },

    /// A probability argument fell outside (0, 1).
    #[error("probability out of domain: {name} = {value} must lie in (0, 1)")]
    ProbabilityDomain { name: &'static str, value: f64 },

    /// Empty input where at least one element is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A datum violates the support of the family being fitted.
    #[error("data outside family support: {family} requires {constraint}, found {value} at index {index}")]
    DataDomain {
        family: String,
        constraint: &'static str,
        value: f64,
        index: usize,
    },

    /// Optimizer failed to converge; carries the iterate trace for diagnosis.
    #[error("optimizer did not converge after {iterations} iterations (last iterates: {trace:?})")]
    NonConvergence { iterations: usize, trace: Vec<f64> },

    /// Hill estimation hit ties at the threshold order statistic.
    #[error("threshold degeneracy: order statistic {threshold} is tied at the Hill cut")]
    ThresholdDegeneracy { threshold: f64 },

    /// Model-selection reports were computed over different samples.
    #[error("incomparable reports: sample sizes differ ({left} vs {right})")]
    IncomparableReports { left: usize, right: usize },

    /// Too few samples beyond the VaR order statistic.
    #[error("insufficient tail: need at least 2 samples beyond the VaR position, have {have}")]
    InsufficientTail { have: usize },

    /// Monte Carlo resolution too coarse for the requested estimate.
    #[error("resolution too coarse: {0}")]
    Resolution(String),

    /// Matrix / weight dimension mismatch.
    #[error("shape mismatch: {what} ({left} vs {right})")]
    Shape {
        what: &'static str,
        left: usize,
        right: usize,
    },

    /// Weight vectors with different totals cannot be compared by majorization.
    #[error("incomparable weight vectors: sums differ ({left_sum} vs {right_sum})")]
    IncomparableWeights { left_sum: f64, right_sum: f64 },

    /// A Schur scan needs at least two weight vectors.
    #[error("degenerate scan: chain has {len} weight vectors, need at least 2")]
    DegenerateScan { len: usize },

    /// Theorem 3.1's condition G > 0 (or F_n > 0) failed at the plug-in estimate.
    #[error("support bound undefined: plug-in estimate {estimate} of {quantity} is not positive")]
    BoundUndefined {
        quantity: &'static str,
        estimate: f64,
    },

    /// Remaining-capital utility needs a finite cap.
    #[error("unbounded base: remaining-capital utility requires a finite cap")]
    UnboundedBase,

    /// Rejection sampling acceptance rate collapsed.
    #[error("rejection envelope too loose: acceptance rate below {min_rate} after {proposals} proposals")]
    Envelope { min_rate: f64, proposals: u64 },

    /// Copula sampling requires marginals with an invertible cdf.
    #[error("unsupported marginal for copula sampling: {family} has no quantile")]
    UnsupportedMarginal { family: String },

    /// Power-type coefficient set failed the copula validity check.
    #[error("invalid copula coefficients: {0}")]
    InvalidCopula(String),
}

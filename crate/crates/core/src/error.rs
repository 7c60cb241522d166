use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole at s = {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("gamma function pole at nonpositive integer {0}")]
    GammaPole(f64),

    #[error("argument outside the accuracy domain: {0}")]
    AccuracyDomain(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value produced: {0}")]
    NonFinite(String),

    #[error("contour passes through a singularity near s = {re}{im:+}i")]
    ContourSingularity { re: f64, im: f64 },

    #[error("table length {requested} exceeds capacity {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("table lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("64-bit overflow while building {0}")]
    Overflow(String),

    #[error("quadrature budget of {max_evals} evaluations exhausted")]
    BudgetExceeded { max_evals: usize },

    #[error("unknown series {0:?}")]
    UnknownSeries(String),

    #[error("cutoff too small: tail bound {tail:e} exceeds tolerance {tol:e}")]
    CutoffTooSmall { tail: f64, tol: f64 },

    #[error("X = {x} outside table range [2, {n}]")]
    GridOutOfRange { x: f64, n: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("table cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Errors caused by caller input rather than by running out of budget.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::Capacity { .. }
                | Error::CutoffTooSmall { .. }
                | Error::Overflow(_)
                | Error::Cache(_)
        )
    }

    /// Short stable tag used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::GammaPole(_) => "gamma-pole",
            Error::AccuracyDomain(_) => "accuracy-domain",
            Error::Domain(_) => "domain",
            Error::NonFinite(_) => "non-finite",
            Error::ContourSingularity { .. } => "contour-singularity",
            Error::Capacity { .. } => "capacity",
            Error::LengthMismatch(..) => "length-mismatch",
            Error::Overflow(_) => "overflow",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::UnknownSeries(_) => "unknown-series",
            Error::CutoffTooSmall { .. } => "cutoff-too-small",
            Error::GridOutOfRange { .. } => "grid-out-of-range",
            Error::InvalidConfig(_) => "invalid-config",
            Error::Cache(_) => "cache",
        }
    }
}

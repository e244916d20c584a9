//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A model validity predicate fails; names the violated inequality.
    #[error("invalid model: {violated} violated ({detail})")]
    Validity { violated: &'static str, detail: String },

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature for {op} did not converge: residual {residual:.3e} > tolerance {tol:.3e}")]
    QuadratureFailure { op: &'static str, residual: f64, tol: f64 },

    /// The requested integral diverges for these parameters.
    #[error("divergent integral in {op}: requires {condition}")]
    Divergence { op: &'static str, condition: String },

    /// Volterra iteration left the representable range before the horizon.
    #[error("volterra solution overflowed at t = {t:.6} (|f| > {cap:.1e})")]
    VolterraInstability { t: f64, cap: f64 },

    /// A series was still growing when the term cap was reached.
    #[error("series truncation failure in {op}: terms still growing at cap index {cap}")]
    SeriesTruncation { op: &'static str, cap: usize },

    /// Initial data fails the assumptions (bounded, non-negative, positive mass).
    #[error("invalid initial data: {0}")]
    InvalidInitialData(String),

    /// Sigma specification violates its declared slope cone.
    #[error("sigma table violates declared slopes: {0}")]
    InvalidSigma(String),

    /// Circulant synthesis found a non-positive spectral coefficient.
    #[error("covariance embedding not positive definite: most negative eigenvalue {min_eig:.3e}, regularization needed {needed:.3e}")]
    EmbeddingNotPsd { min_eig: f64, needed: f64 },

    /// Replica stream id space exhausted for this base seed.
    #[error("seed stream exhausted: replica {requested} exceeds the per-seed stream budget {budget}")]
    SeedStreamExhausted { requested: u64, budget: u64 },

    /// Field magnitude crossed the blow-up guard during a replica.
    #[error("blow-up guard tripped in replica {replica} at step {step}: |u| = {magnitude:.3e} > {cap:.1e}")]
    BlowUp { replica: u64, step: usize, magnitude: f64, cap: f64 },

    /// Too few temporal lags for an increment regression.
    #[error("insufficient lags for increment fit: got {got}, need at least {need}")]
    InsufficientLags { got: usize, need: usize },

    /// Too few noise levels survive the double-log admissibility cut.
    #[error("excitation fit under-resolved: only {survived} of {total} noise levels pass the double-log cut (threshold log E > {cut:.3})")]
    UnderResolved { survived: usize, total: usize, cut: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("ensemble error: {0}")]
    Ensemble(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("container format error: {0}")]
    Container(String),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }
}

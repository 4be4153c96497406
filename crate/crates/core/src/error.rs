//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two streams with different specific heats were combined.
    #[error("incompatible fluids: specific heats {0} and {1} J/(kg*K) differ")]
    IncompatibleFluid(f64, f64),

    /// A dimensionless or physical argument is outside its valid range.
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    /// The explicit thermal-mass stability guard dt*mdot/M <= 1 failed.
    #[error("thermal-mass stability guard violated: dt*mdot/M = {0}")]
    StabilityViolation(f64),

    /// A node index exceeded the cluster size.
    #[error("node index {index} out of range for {n_nodes} nodes")]
    IndexOutOfRange { index: usize, n_nodes: usize },

    /// An iterative solve did not reach its tolerance.
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    /// A component that needs coolant flow was driven with none.
    #[error("zero coolant flow through {0}")]
    ZeroFlow(&'static str),

    /// Configuration failed validation; `field` is the dotted config path.
    #[error("invalid config at `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// Malformed config or scenario text.
    #[error("parse error: {0}")]
    Parse(String),

    /// Unsupported config schema version.
    #[error("unsupported schema_version {found}, this build supports {supported}")]
    Version { found: u32, supported: u32 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A time-series file does not carry the expected column set.
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    /// Statistics requested on fewer samples than the estimator needs.
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("path enumeration exceeded the cap of {cap} paths")]
    PathCapExceeded { cap: usize },

    #[error("invalid exponent p = {p}: {reason}")]
    InvalidExponent { p: f64, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function has {got} values but the graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("negative density value {value} at vertex {vertex}")]
    NegativeDensity { vertex: usize, value: f64 },

    #[error("invalid time partition: {0}")]
    InvalidPartition(String),

    #[error("time {t} is outside the covered region [{lo}, {hi})")]
    OutsideDomain { t: f64, lo: f64, hi: f64 },

    #[error("invalid subcylinder: {0}")]
    InvalidSubcylinder(String),

    #[error("mollification window [{lo}, {hi}] leaves the covered region [{domain_lo}, {domain_hi})")]
    WindowOutsideDomain {
        lo: f64,
        hi: f64,
        domain_lo: f64,
        domain_hi: f64,
    },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("solver did not converge after {iterations} iterations (violation {violation:.3e}, gap {gap:.3e})")]
    NotConverged {
        iterations: usize,
        violation: f64,
        gap: f64,
        best: Vec<f64>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::copulas::ConditionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point ({x}, {y}) lies outside the unit square")]
    Domain { x: f64, y: f64 },

    #[error("boundary pair rejected: {0}")]
    InvalidHPair(Box<ConditionReport>),

    #[error("branch {branch} is not invertible on [{lo}, {hi}]")]
    NonInvertible { branch: &'static str, lo: f64, hi: f64 },

    #[error("map is not measure preserving: preimage of [{a}, {b}] has length {length}")]
    NotMeasurePreserving { a: f64, b: f64, length: f64 },

    #[error("non-finite integrand at y = {y}")]
    NonFinite { y: f64 },

    #[error("ambiguous root: sign changes in {brackets:?}")]
    AmbiguousRoot { brackets: Vec<(f64, f64)> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_unit(x: f64, y: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::Domain { x, y })
    }
}

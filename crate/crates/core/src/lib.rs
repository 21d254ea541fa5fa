//! Extremal copulas and optimal couplings for costs on the unit square.

// `!(a <= b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod copulas;
pub mod costs;
pub mod coupling;
pub mod discrete_ot;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod spline;
pub mod variational;

pub use error::{Error, Result};

/// A float with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

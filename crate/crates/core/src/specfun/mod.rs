//! Special functions used by the stationary-density evaluators.
//!
//! Everything here is a pure function of its arguments. Real arguments only;
//! Bessel K is restricted to orders with `2ν` integral, which is all the
//! McDonald-series representation of the heavy-particle density needs.

mod bessel;
mod gamma;
mod hyper;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_k, bessel_k_scaled, BesselKLadder};
pub use gamma::{beta_signed, gamma, ln_beta_signed, ln_gamma, sin_pi};
pub use hyper::{hyp1f2, hyp1f2_series, SeriesOptions, DEFAULT_MAX_TERMS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: pole at argument {argument}")]
    Pole { function: &'static str, argument: f64 },
    #[error("{function}: argument {argument} outside the domain ({reason})")]
    Domain { function: &'static str, argument: f64, reason: &'static str },
    #[error("{function}: result at argument {argument} is not representable as f64")]
    Overflow { function: &'static str, argument: f64 },
    #[error("{function}: series did not converge within {terms} terms (last partial sum {partial_sum})")]
    NotConverged { function: &'static str, terms: usize, partial_sum: f64 },
}

/// Value of a truncated series together with its convergence status.
///
/// When `converged` is false, `value` is only the last partial sum and must
/// not be used as the function value; [`SpecFunResult::into_value`] turns that
/// case into an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub converged: bool,
    pub terms_used: usize,
}

impl SpecFunResult {
    pub fn into_value(self, function: &'static str) -> Result<f64, SpecFunError> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(SpecFunError::NotConverged { function, terms: self.terms_used, partial_sum: self.value })
        }
    }
}

/// True when `x` is one of 0, −1, −2, …
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

use super::{is_nonpositive_integer, SpecFunError, SpecFunResult};
use crate::summation::CompensatedSum;

pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Truncation rule shared by the series evaluators: stop once the magnitude
/// of the current term has stayed below `rel_tol·|partial sum|` for
/// `consecutive` terms in a row, or give up after `max_terms`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub consecutive: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-16, max_terms: DEFAULT_MAX_TERMS, consecutive: 3 }
    }
}

/// ₁F₂(ξ; η, ζ; z) = Σ_k (ξ)_k / ((η)_k (ζ)_k) · z^k / k!, summed by the
/// term-ratio recurrence.
///
/// A series whose numerator parameter is a non-positive integer terminates
/// and is always reported as converged. A denominator parameter that reaches
/// zero before termination is a pole. Running out of terms is reported
/// through `converged = false`, not as an error.
pub fn hyp1f2_series(
    xi: f64,
    eta: f64,
    zeta: f64,
    z: f64,
    options: SeriesOptions,
) -> Result<SpecFunResult, SpecFunError> {
    if [xi, eta, zeta, z].iter().any(|v| !v.is_finite()) {
        return Err(SpecFunError::Domain {
            function: "hyp1f2",
            argument: z,
            reason: "parameters and argument must be finite",
        });
    }
    let mut sum = CompensatedSum::new();
    sum.add(1.0);
    if z == 0.0 {
        return Ok(SpecFunResult { value: 1.0, converged: true, terms_used: 1 });
    }
    let mut term = 1.0;
    let mut small_run = 0;
    // term 0 is already in the sum
    for k in 0..options.max_terms.saturating_sub(1) {
        let kf = k as f64;
        let numer = xi + kf;
        if numer == 0.0 {
            // (ξ)_{k+1} = 0: every later term vanishes
            return Ok(SpecFunResult { value: sum.value(), converged: true, terms_used: k + 1 });
        }
        let (d1, d2) = (eta + kf, zeta + kf);
        if d1 == 0.0 || d2 == 0.0 {
            return Err(SpecFunError::Pole { function: "hyp1f2", argument: if d1 == 0.0 { eta } else { zeta } });
        }
        term *= numer / (d1 * d2) * z / (kf + 1.0);
        sum.add(term);
        if !term.is_finite() {
            return Err(SpecFunError::Overflow { function: "hyp1f2", argument: z });
        }
        if term.abs() < options.rel_tol * sum.value().abs() {
            small_run += 1;
            if small_run >= options.consecutive {
                return Ok(SpecFunResult { value: sum.value(), converged: true, terms_used: k + 2 });
            }
        } else {
            small_run = 0;
        }
    }
    Ok(SpecFunResult { value: sum.value(), converged: false, terms_used: options.max_terms.max(1) })
}

/// ₁F₂ with the default truncation rule; non-convergence is an error.
pub fn hyp1f2(xi: f64, eta: f64, zeta: f64, z: f64) -> Result<f64, SpecFunError> {
    // reject pole parameters that can never be reached harmlessly
    for p in [eta, zeta] {
        if is_nonpositive_integer(p) && !(is_nonpositive_integer(xi) && xi >= p) {
            return Err(SpecFunError::Pole { function: "hyp1f2", argument: p });
        }
    }
    hyp1f2_series(xi, eta, zeta, z, SeriesOptions::default())?.into_value("hyp1f2")
}

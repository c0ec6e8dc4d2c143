//! Stationary landing densities.
//!
//! A particle flies until its random lifetime τ runs out; the long-run
//! landing density is the lifetime mixture of the absolutely continuous part
//! of the flight's position law,
//!
//! ```text
//! p(r) = λ/(2πc) ∫_{r/c}^∞ e^{−λτ} exp((λ/c)√(c²τ² − r²)) / √(c²τ² − r²) · q(τ) dτ.
//! ```
//!
//! [`stationary_density`] evaluates this integral for any lifetime and is the
//! reference evaluator. [`heavy_series_density`] is the McDonald-function
//! series for exponential lifetimes. [`light_series_density`] evaluates the
//! hypergeometric series for gamma lifetimes as printed in the literature;
//! it is known to disagree with the integral and is kept for diagnostics
//! only, always next to the quadrature value (see [`compare_light_series`]).
//!
//! The singular (no-switch) component is excluded throughout, so the total
//! mass of `p` is 1 − E[e^{−λT}] rather than 1.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flight::FlightParams;
use crate::lifetime::LifetimeSpec;
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::specfun::{gamma, hyp1f2, ln_beta_signed, ln_gamma, BesselKLadder, SpecFunResult, DEFAULT_MAX_TERMS};
use crate::summation::CompensatedSum;

pub use crate::quadrature::QuadratureSettings;

/// Default relative truncation tolerance of the series evaluators.
pub const SERIES_REL_TOL: f64 = 1e-15;

const SERIES_CONSECUTIVE: usize = 3;

/// Symmetric flight plus lifetime law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryModel {
    flight: FlightParams,
    lifetime: LifetimeSpec,
}

impl StationaryModel {
    pub fn new(flight: FlightParams, lifetime: LifetimeSpec) -> Result<Self> {
        if !flight.law().is_uniform() {
            return Err(Error::InvalidParameter(
                "stationary densities are defined for the uniform direction law only".into(),
            ));
        }
        Ok(Self { flight, lifetime })
    }

    /// Exponential lifetime with rate μ.
    pub fn heavy(lambda: f64, mu: f64, c: f64) -> Result<Self> {
        Self::new(FlightParams::uniform(c, lambda)?, LifetimeSpec::exponential(mu)?)
    }

    /// Gamma lifetime with rate μ and shape α > 2.
    pub fn light(lambda: f64, mu: f64, alpha: f64, c: f64) -> Result<Self> {
        Self::new(FlightParams::uniform(c, lambda)?, LifetimeSpec::gamma(mu, alpha)?)
    }

    pub fn flight(&self) -> &FlightParams {
        &self.flight
    }

    pub fn lifetime(&self) -> &LifetimeSpec {
        &self.lifetime
    }

    pub fn lambda(&self) -> f64 {
        self.flight.rate()
    }

    pub fn speed(&self) -> f64 {
        self.flight.speed()
    }

    /// Probability of landing without any direction change, E[e^{−λT}].
    pub fn singular_mass(&self) -> f64 {
        self.lifetime.laplace(self.lambda())
    }

    /// Mass carried by the stationary density, 1 − E[e^{−λT}].
    pub fn expected_mass(&self) -> f64 {
        1.0 - self.singular_mass()
    }
}

impl fmt::Display for StationaryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda={} c={} lifetime={}", self.lambda(), self.speed(), self.lifetime)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("distance must be finite and >= 0, got {r}")))
    }
}

/// Stationary density at distance `r` by adaptive quadrature.
///
/// With u = √(c²τ² − r²) the integrand becomes
/// e^{−λr²/(c(cτ+u))}·q(τ)/(c√(u² + r²)) on u ∈ (0, ∞), τ = √(u² + r²)/c,
/// which is bounded and smooth. The exponential factor never exceeds one,
/// so the part beyond U is at most P(T > τ(U))/U; the range is cut where
/// that bound (times λ/2πc) drops below `tail_cutoff_tol`.
pub fn stationary_density(model: &StationaryModel, r: f64, settings: &QuadratureSettings) -> Result<f64> {
    check_radius(r)?;
    settings.validate()?;
    if r == 0.0 {
        if let LifetimeSpec::Exponential { .. } = model.lifetime {
            return Err(Error::Domain("the heavy-particle density diverges logarithmically at r = 0".into()));
        }
    }
    let lambda = model.lambda();
    let c = model.speed();
    let q = model.lifetime;
    let prefactor = lambda / (TAU * c);

    let tau_of = |u: f64| u.hypot(r) / c;
    let tail = |u: f64| prefactor * q.survival_bound(tau_of(u)) / u;
    let mut upper = r.max(c * q.mean());
    let mut doublings = 0;
    while tail(upper) > settings.tail_cutoff_tol {
        upper *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Domain(format!("no finite tail cutoff found at r = {r}")));
        }
    }

    let mut breakpoints = vec![0.0];
    let mut b = if r > 0.0 { r } else { upper / 64.0 };
    while b < upper && breakpoints.len() + 1 < settings.max_subdivisions / 2 {
        breakpoints.push(b);
        b *= 4.0;
    }
    breakpoints.push(upper);

    let integrand = |u: f64| {
        let rho = u.hypot(r);
        let tau = rho / c;
        // −λτ + λu/c written without cancellation
        let exponent = -lambda * r * r / (c * (rho + u));
        exponent.exp() * q.density(tau) / (c * rho)
    };
    let integral = integrate(integrand, &breakpoints, settings)?;
    Ok(prefactor * integral.value)
}

/// McDonald-function series for the exponential lifetime:
///
/// p(r) = λμ/(2π^{3/2}c²) Σ_k λ^k/k! · Γ((k+1)/2) · (2r/(c(λ+μ)))^{k/2} · K_{k/2}((λ+μ)r/c).
///
/// Terms are formed in log-space and accumulated with compensated summation.
pub fn heavy_series(lambda: f64, mu: f64, c: f64, r: f64, rel_tol: f64) -> Result<SpecFunResult> {
    for (name, v) in [("lambda", lambda), ("mu", mu), ("c", c), ("rel_tol", rel_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    check_radius(r)?;
    if r == 0.0 {
        return Err(Error::Domain("the heavy-particle density diverges logarithmically at r = 0".into()));
    }
    let total_rate = lambda + mu;
    let z = total_rate * r / c;
    let ln_ratio = (2.0 * r / (c * total_rate)).ln();
    let ln_lambda = lambda.ln();
    let mut ladder = BesselKLadder::new(z)?;
    let mut sum = CompensatedSum::new();
    let mut ln_factorial = 0.0;
    let mut small_run = 0;
    let mut converged = false;
    let mut terms_used = 0;
    for k in 0..DEFAULT_MAX_TERMS {
        let kf = k as f64;
        if k > 0 {
            ln_factorial += kf.ln();
        }
        let ln_k = ladder.next().expect("ladder is infinite");
        let (ln_g, _) = ln_gamma(0.5 * (kf + 1.0))?;
        let ln_term = kf * ln_lambda - ln_factorial + ln_g + 0.5 * kf * ln_ratio + ln_k;
        let term = ln_term.exp();
        sum.add(term);
        terms_used = k + 1;
        if term < rel_tol * sum.value() {
            small_run += 1;
            if small_run >= SERIES_CONSECUTIVE {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let prefactor = lambda * mu / (2.0 * PI.powf(1.5) * c * c);
    Ok(SpecFunResult { value: prefactor * sum.value(), converged, terms_used })
}

/// Heavy-particle density from the McDonald series; errors if the series
/// does not converge.
pub fn heavy_series_density(lambda: f64, mu: f64, c: f64, r: f64, rel_tol: f64) -> Result<f64> {
    Ok(heavy_series(lambda, mu, c, r, rel_tol)?.into_value("heavy_series_density")?)
}

/// Hypergeometric series for the gamma lifetime, evaluated term by term as
/// printed:
///
/// ```text
/// p(r) = λμ^α/(4πc²Γ(α)) Σ_k λ^k/k! [ a^{α+k−1} B((k+1)/2, −(α+k−1)/2) ₁F₂(α/2; ½, (α+k+1)/2; z)
///        − (λ+μ) a^{α+k} B((k+1)/2, −(α+k)/2) ₁F₂((1+α)/2; 3/2, (α+k)/2+1; z)
///        + 2^{2−α−k} (λ+μ)^{1−α−k} Γ(α+k−1) ₁F₂(−(k−1)/2; −(α+k−3)/2, −(2α+k+1)/4; z) ]
/// ```
///
/// with a = r/c and z = (λ+μ)²r²/(4c²). Beta and ₁F₂ poles (every integer α
/// hits one) are reported as [`Error::SeriesTerm`] with the offending k.
///
/// Experimental: this expression does not reproduce the integral it is meant
/// to represent. Use [`compare_light_series`] to see by how much.
pub fn light_series_density(lambda: f64, mu: f64, alpha: f64, c: f64, r: f64, rel_tol: f64) -> Result<SpecFunResult> {
    for (name, v) in [("lambda", lambda), ("mu", mu), ("alpha", alpha), ("c", c), ("rel_tol", rel_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    check_radius(r)?;
    if r == 0.0 {
        return Err(Error::Domain("the light-particle series requires r > 0".into()));
    }
    let total_rate = lambda + mu;
    let a = r / c;
    let ln_a = a.ln();
    let ln_rate = total_rate.ln();
    let z = total_rate * total_rate * r * r / (4.0 * c * c);

    let mut sum = CompensatedSum::new();
    let mut ln_factorial = 0.0;
    let mut small_run = 0;
    let mut converged = false;
    let mut terms_used = 0;
    for k in 0..DEFAULT_MAX_TERMS {
        let kf = k as f64;
        if k > 0 {
            ln_factorial += kf.ln();
        }
        let at = |source| Error::SeriesTerm { k, source };
        let ln_common = kf * lambda.ln() - ln_factorial;

        let (ln_b1, s_b1) = ln_beta_signed(0.5 * (kf + 1.0), -0.5 * (alpha + kf - 1.0)).map_err(at)?;
        let f1 = hyp1f2(0.5 * alpha, 0.5, 0.5 * (alpha + kf + 1.0), z).map_err(at)?;
        let first = s_b1 * (ln_common + (alpha + kf - 1.0) * ln_a + ln_b1).exp() * f1;

        let (ln_b2, s_b2) = ln_beta_signed(0.5 * (kf + 1.0), -0.5 * (alpha + kf)).map_err(at)?;
        let f2 = hyp1f2(0.5 * (1.0 + alpha), 1.5, 0.5 * (alpha + kf) + 1.0, z).map_err(at)?;
        let second = s_b2 * (ln_common + ln_rate + (alpha + kf) * ln_a + ln_b2).exp() * f2;

        let (ln_g3, s_g3) = ln_gamma(alpha + kf - 1.0).map_err(at)?;
        let f3 =
            hyp1f2(-0.5 * (kf - 1.0), -0.5 * (alpha + kf - 3.0), -0.25 * (2.0 * alpha + kf + 1.0), z).map_err(at)?;
        let third =
            s_g3 * (ln_common + (2.0 - alpha - kf) * 2f64.ln() + (1.0 - alpha - kf) * ln_rate + ln_g3).exp() * f3;

        let term = first - second + third;
        if !term.is_finite() {
            return Err(at(crate::specfun::SpecFunError::Overflow { function: "light_series_density", argument: r }));
        }
        sum.add(term);
        terms_used = k + 1;
        if term.abs() < rel_tol * sum.value().abs() {
            small_run += 1;
            if small_run >= SERIES_CONSECUTIVE {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let prefactor = lambda * mu.powf(alpha) / (4.0 * PI * c * c * gamma(alpha)?);
    Ok(SpecFunResult { value: prefactor * sum.value(), converged, terms_used })
}

/// The printed light-particle series next to the quadrature value.
#[derive(Debug, Clone, PartialEq)]
pub struct LightSeriesComparison {
    pub r: f64,
    pub quadrature: f64,
    pub series: std::result::Result<SpecFunResult, Error>,
}

impl LightSeriesComparison {
    /// |series − quadrature| / quadrature, when the series produced a value.
    pub fn relative_discrepancy(&self) -> Option<f64> {
        self.series.as_ref().ok().map(|s| ((s.value - self.quadrature) / self.quadrature).abs())
    }
}

pub fn compare_light_series(
    model: &StationaryModel,
    r: f64,
    settings: &QuadratureSettings,
    rel_tol: f64,
) -> Result<LightSeriesComparison> {
    let LifetimeSpec::Gamma { mu, alpha } = model.lifetime else {
        return Err(Error::InvalidParameter("light-particle series needs a gamma lifetime".into()));
    };
    let quadrature = stationary_density(model, r, settings)?;
    let series = light_series_density(model.lambda(), mu, alpha, model.speed(), r, rel_tol);
    Ok(LightSeriesComparison { r, quadrature, series })
}

/// 2π∫_lo^hi p(r)·r dr; `hi` may be infinite.
pub fn radial_mass(model: &StationaryModel, lo: f64, hi: f64, settings: &QuadratureSettings) -> Result<f64> {
    check_radius(lo)?;
    if !(hi > lo) {
        return Err(Error::InvalidParameter(format!("radial mass needs lo < hi, got [{lo}, {hi}]")));
    }
    let mut failure = None;
    let integrand = |r: f64| match stationary_density(model, r, settings) {
        Ok(p) => TAU * r * p,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let result = if hi.is_infinite() {
        let scale = model.speed() * model.lifetime.mean();
        integrate_to_infinity(integrand, lo, scale, settings)
    } else {
        integrate(integrand, &[lo, hi], settings)
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(result?.value)
}

/// Total mass of the stationary density, 2π∫₀^∞ p(r)·r dr. Equals
/// 1 − E[e^{−λT}] because the no-switch paths are excluded.
pub fn total_mass(model: &StationaryModel, settings: &QuadratureSettings) -> Result<f64> {
    radial_mass(model, 0.0, f64::INFINITY, settings)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskConcentration {
    pub radius: f64,
    /// Share k_r of the emitted mass settled within `radius`.
    pub share: f64,
    pub emitted_mass: f64,
    /// k_r·M.
    pub concentration: f64,
}

pub fn concentration_in_disk(
    model: &StationaryModel,
    radius: f64,
    emitted_mass: f64,
    settings: &QuadratureSettings,
) -> Result<DiskConcentration> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be finite and > 0, got {radius}")));
    }
    if !(emitted_mass >= 0.0 && emitted_mass.is_finite()) {
        return Err(Error::InvalidParameter(format!("emitted mass must be finite and >= 0, got {emitted_mass}")));
    }
    let share = radial_mass(model, 0.0, radius, settings)?;
    Ok(DiskConcentration { radius, share, emitted_mass, concentration: share * emitted_mass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    HeavySeries,
    LightSeries,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quadrature",
            Method::HeavySeries => "heavy-series",
            Method::LightSeries => "light-series",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "quadrature" => Ok(Method::Quadrature),
            "heavy-series" => Ok(Method::HeavySeries),
            "light-series" => Ok(Method::LightSeries),
            "monte-carlo" => Ok(Method::MonteCarlo),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRow {
    pub r: f64,
    pub density: f64,
}

/// Densities on an increasing grid of distances.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensityTable {
    pub model: StationaryModel,
    pub method: Method,
    pub rows: Vec<RadialRow>,
}

/// Grid r_min, r_min + step, … up to r_max inclusive (with a small tolerance
/// so that e.g. 0.2..=4.0 step 0.2 yields 20 points).
pub fn radial_grid(r_min: f64, r_max: f64, r_step: f64) -> Result<Vec<f64>> {
    if !(r_min >= 0.0 && r_min.is_finite() && r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "range bounds must be finite with r_min >= 0, got [{r_min}, {r_max}]"
        )));
    }
    if !(r_max > r_min) {
        return Err(Error::InvalidParameter(format!("empty range: r_min = {r_min} must be below r_max = {r_max}")));
    }
    if !(r_step > 0.0 && r_step.is_finite()) {
        return Err(Error::InvalidParameter(format!("r_step must be > 0, got {r_step}")));
    }
    let count = ((r_max - r_min) / r_step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let r = r_min + i as f64 * r_step;
            (r * 1e12).round() / 1e12
        })
        .collect())
}

pub fn density_table(
    model: &StationaryModel,
    r_min: f64,
    r_max: f64,
    r_step: f64,
    method: Method,
    settings: &QuadratureSettings,
) -> Result<RadialDensityTable> {
    let grid = radial_grid(r_min, r_max, r_step)?;
    density_table_at(model, &grid, method, settings)
}

/// Densities at the given increasing distances.
pub fn density_table_at(
    model: &StationaryModel,
    grid: &[f64],
    method: Method,
    settings: &QuadratureSettings,
) -> Result<RadialDensityTable> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
    }
    let evaluate: Box<dyn Fn(f64) -> Result<f64> + Sync> = match (method, model.lifetime) {
        (Method::Quadrature, _) => Box::new(|r| stationary_density(model, r, settings)),
        (Method::HeavySeries, LifetimeSpec::Exponential { mu }) => {
            let (lambda, c) = (model.lambda(), model.speed());
            Box::new(move |r| heavy_series_density(lambda, mu, c, r, SERIES_REL_TOL))
        }
        (Method::LightSeries, LifetimeSpec::Gamma { mu, alpha }) => {
            let (lambda, c) = (model.lambda(), model.speed());
            Box::new(move |r| {
                Ok(light_series_density(lambda, mu, alpha, c, r, SERIES_REL_TOL)?.into_value("light_series_density")?)
            })
        }
        (Method::MonteCarlo, _) => {
            return Err(Error::InvalidParameter(
                "Monte Carlo tables come from mc_oracle::RadialHistogram::density_table".into(),
            ))
        }
        (m, l) => return Err(Error::InvalidParameter(format!("method {m} does not apply to lifetime {l}"))),
    };
    let rows =
        grid.par_iter().map(|&r| evaluate(r).map(|density| RadialRow { r, density })).collect::<Result<Vec<_>>>()?;
    Ok(RadialDensityTable { model: *model, method, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heavy_paper() -> StationaryModel {
        StationaryModel::heavy(1.0, 2.0, 3.0).unwrap()
    }

    fn light_paper() -> StationaryModel {
        StationaryModel::light(1.0, 2.0, 5.0, 2.0).unwrap()
    }

    fn s() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn printed_values() {
        let heavy = heavy_paper();
        assert!((stationary_density(&heavy, 1.0, &s()).unwrap() - 0.020854).abs() < 1e-5);
        assert!((heavy_series_density(1.0, 2.0, 3.0, 0.2, SERIES_REL_TOL).unwrap() - 0.074088).abs() < 1e-5);
        assert!((heavy_series_density(1.0, 2.0, 3.0, 4.0, SERIES_REL_TOL).unwrap() - 0.000772).abs() < 1e-5);
        let light = light_paper();
        assert!((stationary_density(&light, 3.0, &s()).unwrap() - 0.010897).abs() < 1e-5);
    }

    #[test]
    fn light_origin_closed_form() {
        // at r = 0 the integral reduces to λμ/(2πc²(α−1))
        let got = stationary_density(&light_paper(), 0.0, &s()).unwrap();
        let expected = 1.0 / (16.0 * PI);
        assert!(((got - expected) / expected).abs() < 1e-9);
        let other = StationaryModel::light(0.7, 1.3, 3.4, 1.5).unwrap();
        let got = stationary_density(&other, 0.0, &s()).unwrap();
        let expected = 0.7 * 1.3 / (TAU * 1.5 * 1.5 * 2.4);
        assert!(((got - expected) / expected).abs() < 1e-9);
    }

    #[test]
    fn heavy_origin_is_domain_error() {
        assert!(matches!(stationary_density(&heavy_paper(), 0.0, &s()), Err(Error::Domain(_))));
        assert!(matches!(heavy_series_density(1.0, 2.0, 3.0, 0.0, 1e-12), Err(Error::Domain(_))));
        assert!(stationary_density(&heavy_paper(), -1.0, &s()).is_err());
    }

    #[test]
    fn series_matches_quadrature() {
        for r in [0.05, 0.5, 2.0, 5.0, 12.0] {
            let q = stationary_density(&heavy_paper(), r, &s()).unwrap();
            let series = heavy_series_density(1.0, 2.0, 3.0, r, SERIES_REL_TOL).unwrap();
            assert!(((q - series) / q).abs() < 1e-8, "r = {r}: {q} vs {series}");
        }
    }

    #[test]
    fn light_series_pole_for_integer_shape() {
        let err = light_series_density(1.0, 2.0, 5.0, 2.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::SeriesTerm { k: 0, .. }), "{err:?}");
        // half-integer shape survives k = 0, 1 and hits the third ₁F₂ pole at k = 2
        let err = light_series_density(1.0, 2.0, 4.5, 2.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::SeriesTerm { k: 2, .. }), "{err:?}");
        assert!(light_series_density(1.0, 2.0, 4.3, 2.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn light_series_comparison_reports_discrepancy() {
        let model = StationaryModel::light(1.0, 2.0, 4.3, 2.0).unwrap();
        let cmp = compare_light_series(&model, 1.0, &s(), 1e-12).unwrap();
        assert!(cmp.quadrature > 0.0);
        let series = cmp.series.as_ref().unwrap();
        assert!(series.converged);
        assert!(cmp.relative_discrepancy().unwrap().is_finite());
        let heavy = heavy_paper();
        assert!(compare_light_series(&heavy, 1.0, &s(), 1e-12).is_err());
    }

    #[test]
    fn disk_concentration_basics() {
        let heavy = heavy_paper();
        let zero = concentration_in_disk(&heavy, 2.0, 0.0, &s()).unwrap();
        assert_eq!(zero.concentration, 0.0);
        let c3 = concentration_in_disk(&heavy, 3.0, 10.0, &s()).unwrap();
        assert!(c3.share > 0.0 && c3.share < 1.0 / 3.0);
        assert!((c3.concentration - 10.0 * c3.share).abs() < 1e-15);
        assert!(concentration_in_disk(&heavy, 0.0, 1.0, &s()).is_err());
        assert!(concentration_in_disk(&heavy, 1.0, -1.0, &s()).is_err());
    }

    #[test]
    fn grid_construction() {
        let g = radial_grid(0.2, 4.0, 0.2).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.2);
        assert_eq!(g[2], 0.6);
        assert_eq!(g[19], 4.0);
        assert_eq!(radial_grid(0.0, 3.8, 0.2).unwrap().len(), 20);
        assert!(radial_grid(1.0, 1.0, 0.2).is_err());
        assert!(radial_grid(0.0, 1.0, 0.0).is_err());
        assert!(radial_grid(-0.1, 1.0, 0.1).is_err());
    }

    #[test]
    fn table_method_checks() {
        let light = light_paper();
        assert!(density_table(&light, 0.2, 1.0, 0.2, Method::HeavySeries, &s()).is_err());
        assert!(density_table(&light, 0.2, 1.0, 0.2, Method::MonteCarlo, &s()).is_err());
        assert!(density_table(&heavy_paper(), 0.2, 1.0, 0.2, Method::LightSeries, &s()).is_err());
        let t = density_table(&heavy_paper(), 0.2, 1.0, 0.2, Method::HeavySeries, &s()).unwrap();
        assert_eq!(t.rows.len(), 5);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("heavy_series".parse::<Method>().unwrap(), Method::HeavySeries);
        assert_eq!("Quadrature".parse::<Method>().unwrap(), Method::Quadrature);
        assert!("simpson".parse::<Method>().is_err());
    }
}

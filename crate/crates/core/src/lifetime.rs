//! Particle lifetime distributions.
//!
//! The heavy-particle model uses an exponential lifetime, the light-particle
//! model a gamma lifetime with shape α > 2.

use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LifetimeSpec {
    /// Density μe^{−μt}, t ≥ 0.
    Exponential { mu: f64 },
    /// Density μ^α t^{α−1} e^{−μt}/Γ(α), t > 0.
    Gamma { mu: f64, alpha: f64 },
}

fn check_rate(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lifetime rate mu must be finite and > 0, got {mu}")))
    }
}

impl LifetimeSpec {
    pub fn exponential(mu: f64) -> Result<Self> {
        check_rate(mu)?;
        Ok(LifetimeSpec::Exponential { mu })
    }

    /// Gamma lifetime for light particles; the shape must exceed 2.
    pub fn gamma(mu: f64, alpha: f64) -> Result<Self> {
        check_rate(mu)?;
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma lifetime requires alpha > 2, got {alpha} (see gamma_semi_heavy for 1 < alpha <= 2)"
            )));
        }
        Ok(LifetimeSpec::Gamma { mu, alpha })
    }

    /// Gamma lifetime with the relaxed constraint α > 1 (semi-heavy particles).
    pub fn gamma_semi_heavy(mu: f64, alpha: f64) -> Result<Self> {
        check_rate(mu)?;
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("semi-heavy gamma lifetime requires alpha > 1, got {alpha}")));
        }
        Ok(LifetimeSpec::Gamma { mu, alpha })
    }

    pub fn rate(&self) -> f64 {
        match *self {
            LifetimeSpec::Exponential { mu } | LifetimeSpec::Gamma { mu, .. } => mu,
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        match *self {
            LifetimeSpec::Exponential { mu } => exponential_density(mu, t),
            LifetimeSpec::Gamma { mu, alpha } => gamma_density(mu, alpha, t),
        }
    }

    /// E[e^{−sT}].
    pub fn laplace(&self, s: f64) -> f64 {
        match *self {
            LifetimeSpec::Exponential { mu } => mu / (mu + s),
            LifetimeSpec::Gamma { mu, alpha } => (mu / (mu + s)).powf(alpha),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            LifetimeSpec::Exponential { mu } => 1.0 / mu,
            LifetimeSpec::Gamma { mu, alpha } => alpha / mu,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            LifetimeSpec::Exponential { mu } => 1.0 / (mu * mu),
            LifetimeSpec::Gamma { mu, alpha } => alpha / (mu * mu),
        }
    }

    /// Location of the density maximum.
    pub fn mode(&self) -> f64 {
        match *self {
            LifetimeSpec::Exponential { .. } => 0.0,
            LifetimeSpec::Gamma { mu, alpha } => (alpha - 1.0) / mu,
        }
    }

    /// Upper bound on the survival function P(T > t).
    ///
    /// Exact for the exponential law. For the gamma law with x = μt > α − 1,
    /// ∫_x^∞ s^{α−1}e^{−s} ds ≤ x^{α−1}e^{−x}/(1 − (α−1)/x); below that point the
    /// trivial bound 1 is returned.
    pub fn survival_bound(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        match *self {
            LifetimeSpec::Exponential { mu } => (-mu * t).exp(),
            LifetimeSpec::Gamma { mu, alpha } => {
                let x = mu * t;
                let shape_m1 = alpha - 1.0;
                if x <= shape_m1 + 1.0 {
                    return 1.0;
                }
                let ln_g = ln_gamma(alpha).map(|(l, _)| l).unwrap_or(0.0);
                let bound = (shape_m1 * x.ln() - x - ln_g).exp() / (1.0 - shape_m1 / x);
                bound.min(1.0)
            }
        }
    }

    /// Draws one lifetime. Exponential by inversion, gamma by the
    /// Marsaglia–Tsang method; the result is strictly positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            LifetimeSpec::Exponential { mu } => {
                let u: f64 = rng.sample(Open01);
                -u.ln() / mu
            }
            LifetimeSpec::Gamma { mu, alpha } => {
                let dist = rand_distr::Gamma::new(alpha, 1.0 / mu).expect("parameters validated at construction");
                loop {
                    let t = dist.sample(rng);
                    if t > 0.0 {
                        return t;
                    }
                }
            }
        }
    }
}

pub(crate) fn exponential_density(mu: f64, t: f64) -> f64 {
    if t >= 0.0 {
        mu * (-mu * t).exp()
    } else {
        0.0
    }
}

pub(crate) fn gamma_density(mu: f64, alpha: f64, t: f64) -> f64 {
    if t > 0.0 {
        let ln_g = ln_gamma(alpha).map(|(l, _)| l).unwrap_or(f64::NAN);
        (alpha * mu.ln() + (alpha - 1.0) * t.ln() - mu * t - ln_g).exp()
    } else {
        0.0
    }
}

impl fmt::Display for LifetimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LifetimeSpec::Exponential { mu } => write!(f, "exp(mu={mu})"),
            LifetimeSpec::Gamma { mu, alpha } => write!(f, "gamma(mu={mu}, alpha={alpha})"),
        }
    }
}

/// Parses `exp(mu=2)` or `gamma(mu=2, alpha=5)`.
impl FromStr for LifetimeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidParameter(format!(
                "cannot parse lifetime '{s}'; expected exp(mu=..) or gamma(mu=.., alpha=..)"
            ))
        };
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let kind = s[..open].trim().to_ascii_lowercase();
        let mut mu = None;
        let mut alpha = None;
        for item in s[open + 1..s.len() - 1].split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "mu" => mu = Some(value),
                "alpha" => alpha = Some(value),
                _ => return Err(bad()),
            }
        }
        match (kind.as_str(), mu, alpha) {
            ("exp" | "exponential", Some(mu), None) => LifetimeSpec::exponential(mu),
            ("gamma", Some(mu), Some(alpha)) => LifetimeSpec::gamma(mu, alpha),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_to_infinity, QuadratureSettings};
    use crate::rng::substream;

    fn tight() -> QuadratureSettings {
        QuadratureSettings { rel_tol: 1e-12, abs_tol: 1e-15, ..QuadratureSettings::default() }
    }

    #[test]
    fn density_examples() {
        let e = LifetimeSpec::exponential(2.0).unwrap();
        assert_eq!(e.density(0.0), 2.0);
        assert_eq!(e.density(-1.0), 0.0);
        let g = LifetimeSpec::gamma(2.0, 5.0).unwrap();
        assert_eq!(g.mode(), 2.0);
        // 2⁵·2⁴·e^{−4}/4!
        let at_mode = 512.0 * (-4.0f64).exp() / 24.0;
        assert!((g.density(2.0) - at_mode).abs() < 1e-14);
        assert!((g.density(2.0) - 0.390_733_629_626_329_2).abs() < 1e-14);
        assert!(g.density(1.9) < g.density(2.0) && g.density(2.1) < g.density(2.0));
        assert_eq!(g.density(-1.0), 0.0);
        assert_eq!(g.density(0.0), 0.0);
    }

    #[test]
    fn laplace_examples() {
        let e = LifetimeSpec::exponential(2.0).unwrap();
        let g = LifetimeSpec::gamma(2.0, 5.0).unwrap();
        assert!((e.laplace(1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((g.laplace(1.0) - 0.131_687_242_798_353_9).abs() < 1e-15);
        assert_eq!(e.laplace(0.0), 1.0);
        assert_eq!(g.laplace(0.0), 1.0);
    }

    #[test]
    fn normalised_and_laplace_by_quadrature() {
        let specs = [
            LifetimeSpec::exponential(2.0).unwrap(),
            LifetimeSpec::exponential(0.3).unwrap(),
            LifetimeSpec::gamma(2.0, 5.0).unwrap(),
            LifetimeSpec::gamma(1.0, 2.5).unwrap(),
            LifetimeSpec::gamma(4.0, 11.2).unwrap(),
        ];
        for spec in specs {
            let mass = integrate_to_infinity(|t| spec.density(t), 0.0, spec.mean(), &tight()).unwrap();
            assert!((mass.value - 1.0).abs() < 1e-10, "{spec}: {}", mass.value);
            for s in [0.0, 0.5, 1.0, 3.0] {
                let lt =
                    integrate_to_infinity(|t| (-s * t).exp() * spec.density(t), 0.0, spec.mean(), &tight()).unwrap();
                assert!((lt.value - spec.laplace(s)).abs() < 1e-9, "{spec} s={s}");
            }
        }
    }

    #[test]
    fn unit_shape_gamma_is_exponential() {
        for t in [1e-3, 0.1, 0.5, 1.0, 4.0, 20.0] {
            let a = gamma_density(1.7, 1.0, t);
            let b = exponential_density(1.7, t);
            assert!((a - b).abs() <= 1e-14 * b, "t = {t}");
        }
    }

    #[test]
    fn survival_bound_dominates() {
        let g = LifetimeSpec::gamma(2.0, 5.0).unwrap();
        for t in [0.5, 2.0, 3.0, 5.0, 10.0, 20.0] {
            let exact = integrate_to_infinity(|x| g.density(x), t, 1.0, &tight()).unwrap().value;
            assert!(g.survival_bound(t) >= exact * (1.0 - 1e-9), "t = {t}");
        }
        let e = LifetimeSpec::exponential(2.0).unwrap();
        assert!((e.survival_bound(1.5) - (-3.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn construction_rules() {
        assert!(LifetimeSpec::exponential(0.0).is_err());
        assert!(LifetimeSpec::exponential(-1.0).is_err());
        assert!(LifetimeSpec::gamma(2.0, 2.0).is_err());
        assert!(LifetimeSpec::gamma(2.0, 1.5).is_err());
        assert!(LifetimeSpec::gamma_semi_heavy(2.0, 1.5).is_ok());
        assert!(LifetimeSpec::gamma_semi_heavy(2.0, 1.0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let e: LifetimeSpec = "exp(mu=2)".parse().unwrap();
        assert_eq!(e, LifetimeSpec::Exponential { mu: 2.0 });
        let g: LifetimeSpec = " gamma(mu=2, alpha=5) ".parse().unwrap();
        assert_eq!(g, LifetimeSpec::Gamma { mu: 2.0, alpha: 5.0 });
        assert_eq!(g.to_string().parse::<LifetimeSpec>().unwrap(), g);
        assert!("gamma(mu=2)".parse::<LifetimeSpec>().is_err());
        assert!("exp(mu=2".parse::<LifetimeSpec>().is_err());
        assert!("weibull(mu=2)".parse::<LifetimeSpec>().is_err());
        assert!("gamma(mu=2, alpha=1.5)".parse::<LifetimeSpec>().is_err());
    }

    fn moments(spec: LifetimeSpec, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = substream(seed, 0);
        let xs: Vec<f64> = (0..n).map(|_| spec.sample(&mut rng)).collect();
        assert!(xs.iter().all(|&t| t > 0.0));
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        (mean, var)
    }

    #[test]
    fn sampler_moments() {
        let n = 1_000_000;
        let e = LifetimeSpec::exponential(2.0).unwrap();
        let (mean, _) = moments(e, n, 11);
        assert!((mean - 0.5).abs() < 4.0 * 0.5 / 1000.0, "mean {mean}");

        let g = LifetimeSpec::gamma(2.0, 5.0).unwrap();
        let (mean, var) = moments(g, n, 12);
        let se_mean = (1.25f64 / n as f64).sqrt();
        assert!((mean - 2.5).abs() < 4.0 * se_mean, "mean {mean}");
        // Var(s²) ≈ (μ₄ − σ⁴)/n with μ₄ = 3σ⁴(1 + 2/α) for the gamma law
        let sigma4 = 1.25f64 * 1.25;
        let se_var = ((3.0 * sigma4 * (1.0 + 2.0 / 5.0) - sigma4) / n as f64).sqrt();
        assert!((var - 1.25).abs() < 4.0 * se_var, "var {var}");
    }
}

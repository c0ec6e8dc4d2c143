use std::f64::consts::PI;

use flightfall::specfun::{
    bessel_i0, bessel_k, beta_signed, gamma, hyp1f2_series, ln_gamma, BesselKLadder, SeriesOptions, SpecFunError,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// K_ν(z) = ∫₀^∞ exp(−z cosh t) cosh(νt) dt by the trapezoidal rule, which
/// converges geometrically for this doubly-exponentially decaying integrand.
fn k_integral(nu: f64, z: f64) -> f64 {
    let h = 0.005;
    let f = |t: f64| 0.5 * ((-z * t.cosh() + nu * t).exp() + (-z * t.cosh() - nu * t).exp());
    let mut sum = 0.5 * f(0.0);
    let mut t = h;
    loop {
        let v = f(t);
        sum += v;
        if v < 1e-18 * sum && z * t.cosh() > nu * t + 40.0 {
            break;
        }
        t += h;
    }
    h * sum
}

fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).map(|j| a + j as f64).product()
}

/// ₁F₂ summed from freshly computed Pochhammer symbols; also returns Σ|term|.
fn hyp1f2_direct(xi: f64, eta: f64, zeta: f64, z: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    let mut factorial = 1.0;
    for k in 0..80 {
        if k > 0 {
            factorial *= k as f64;
        }
        let term = pochhammer(xi, k) / (pochhammer(eta, k) * pochhammer(zeta, k)) * z.powi(k as i32) / factorial;
        sum += term;
        magnitude += term.abs();
    }
    (sum, magnitude)
}

#[test]
fn k_matches_integral_representation() {
    for &z in &[0.05, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0] {
        for twice in 0..=24 {
            let nu = twice as f64 / 2.0;
            let got = bessel_k(nu, z).unwrap();
            let want = k_integral(nu, z);
            assert!(rel(got, want) < 1e-10, "K_{nu}({z}) = {got}, integral {want}");
        }
    }
}

#[test]
fn ladder_walks_every_half_order() {
    let z = 1.7;
    for (j, ln_k) in BesselKLadder::new(z).unwrap().take(60).enumerate() {
        let nu = j as f64 / 2.0;
        assert!((ln_k - bessel_k(nu, z).unwrap().ln()).abs() < 1e-12, "order {nu}");
    }
}

#[test]
fn bessel_domain_errors() {
    assert!(matches!(bessel_k(0.5, 0.0), Err(SpecFunError::Domain { .. })));
    assert!(matches!(bessel_k(0.3, 1.0), Err(SpecFunError::Domain { .. })));
    assert!(matches!(bessel_k(-1.0, 1.0), Err(SpecFunError::Domain { .. })));
    assert!(matches!(gamma(-3.0), Err(SpecFunError::Pole { .. })));
    assert!(matches!(beta_signed(0.5, -1.5), Err(SpecFunError::Pole { .. })));
}

#[test]
fn beta_with_negative_argument() {
    // Γ(−2.3)Γ(1.7)/Γ(−0.6) to 18 digits
    let want = 0.355_672_656_474_064;
    let got = beta_signed(-2.3, 1.7).unwrap();
    assert!(rel(got, want) < 1e-12, "{got} vs {want}");
}

proptest! {
    #[test]
    fn k_three_term_recurrence(twice in 2usize..60, z in 0.01f64..400.0) {
        let nu = twice as f64 / 2.0;
        let lhs = bessel_k(nu + 1.0, z).unwrap();
        let rhs = bessel_k(nu - 1.0, z).unwrap() + 2.0 * nu / z * bessel_k(nu, z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12, "nu = {}, z = {}: {} vs {}", nu, z, lhs, rhs);
    }

    #[test]
    fn k_half_orders_closed_form(z in 1e-3f64..600.0) {
        let k_half = (PI / (2.0 * z)).sqrt() * (-z).exp();
        prop_assume!(k_half > 1e-300);
        prop_assert!(rel(bessel_k(0.5, z).unwrap(), k_half) < 1e-13);
        prop_assert!(rel(bessel_k(1.5, z).unwrap(), k_half * (1.0 + 1.0 / z)) < 1e-13);
        let k52 = k_half * (1.0 + 3.0 / z + 3.0 / (z * z));
        prop_assert!(rel(bessel_k(2.5, z).unwrap(), k52) < 1e-12);
    }

    #[test]
    fn k_decreasing_in_argument(twice in 0usize..40, z in 0.01f64..100.0, dz in 1e-3f64..5.0) {
        let nu = twice as f64 / 2.0;
        prop_assert!(bessel_k(nu, z).unwrap() > bessel_k(nu, z + dz).unwrap());
    }

    #[test]
    fn i0_positive_and_increasing(z in 0.0f64..50.0, dz in 1e-3f64..5.0) {
        let a = bessel_i0(z).unwrap();
        prop_assert!(a >= 1.0);
        prop_assert!(bessel_i0(z + dz).unwrap() > a);
    }

    #[test]
    fn gamma_recurrence(x in -40.0f64..160.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12, "x = {}: {} vs {}", x, lhs, rhs);
    }

    #[test]
    fn gamma_reflection(x in -30.0f64..30.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        let rhs = PI / (PI * x).sin();
        prop_assert!(rel(lhs, rhs) < 1e-11, "x = {}: {} vs {}", x, lhs, rhs);
    }

    #[test]
    fn gamma_duplication(x in 0.05f64..80.0) {
        let lhs = gamma(x).unwrap() * gamma(x + 0.5).unwrap();
        let rhs = 2f64.powf(1.0 - 2.0 * x) * PI.sqrt() * gamma(2.0 * x).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn ln_gamma_consistent(x in -30.0f64..170.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let (ln_abs, sign) = ln_gamma(x).unwrap();
        let g = gamma(x).unwrap();
        prop_assert_eq!(sign, g.signum());
        prop_assert!((ln_abs - g.abs().ln()).abs() < 1e-11 * (1.0 + ln_abs.abs()));
    }

    #[test]
    fn beta_symmetric_and_matches_gamma(x in -10.0f64..10.0, y in -10.0f64..10.0) {
        for a in [x, y, x + y] {
            prop_assume!((a - a.round()).abs() > 1e-3);
        }
        let b = beta_signed(x, y).unwrap();
        prop_assert!(rel(beta_signed(y, x).unwrap(), b) < 1e-15);
        let direct = gamma(x).unwrap() * gamma(y).unwrap() / gamma(x + y).unwrap();
        prop_assert!(rel(b, direct) < 1e-11);
    }

    #[test]
    fn hyp1f2_matches_direct_summation(
        xi in 0.1f64..5.0,
        eta in 0.5f64..5.0,
        zeta in 0.5f64..5.0,
        z in -2.0f64..0.0,
    ) {
        let got = hyp1f2_series(xi, eta, zeta, z, SeriesOptions::default()).unwrap();
        prop_assert!(got.converged);
        let (want, scale) = hyp1f2_direct(xi, eta, zeta, z);
        prop_assert!((got.value - want).abs() <= 1e-10 * scale, "{} vs {}", got.value, want);
    }

    #[test]
    fn series_respects_term_cap(max_terms in 1usize..40, z in 1.0f64..200.0) {
        let options = SeriesOptions { max_terms, ..SeriesOptions::default() };
        let r = hyp1f2_series(1.5, 0.5, 0.75, z, options).unwrap();
        prop_assert!(r.terms_used <= max_terms);
        if !r.converged {
            prop_assert!(r.into_value("hyp1f2").is_err());
        }
    }
}

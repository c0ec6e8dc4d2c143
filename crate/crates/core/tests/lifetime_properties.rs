use flightfall::lifetime::LifetimeSpec;
use flightfall::quadrature::integrate_to_infinity;
use flightfall::rng::substream;
use flightfall::QuadratureSettings;
use proptest::prelude::*;

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn any_lifetime() -> impl Strategy<Value = LifetimeSpec> {
    prop_oneof![
        (0.1f64..10.0).prop_map(|mu| LifetimeSpec::exponential(mu).unwrap()),
        (0.1f64..10.0, 2.05f64..12.0).prop_map(|(mu, alpha)| LifetimeSpec::gamma(mu, alpha).unwrap()),
    ]
}

fn moment<F: Fn(f64) -> f64>(law: &LifetimeSpec, f: F) -> f64 {
    integrate_to_infinity(|t| f(t) * law.density(t), 0.0, law.mean(), &settings()).unwrap().value
}

#[test]
fn constructors_reject_bad_parameters() {
    assert!(LifetimeSpec::exponential(0.0).is_err());
    assert!(LifetimeSpec::exponential(f64::NAN).is_err());
    assert!(LifetimeSpec::gamma(1.0, 2.0).is_err());
    assert!(LifetimeSpec::gamma(-1.0, 3.0).is_err());
    assert!(LifetimeSpec::gamma_semi_heavy(1.0, 1.5).is_ok());
    assert!(LifetimeSpec::gamma_semi_heavy(1.0, 1.0).is_err());
}

#[test]
fn gamma_sampler_moments() {
    let law = LifetimeSpec::gamma(2.0, 5.0).unwrap();
    let mut rng = substream(17, 0);
    let n = 1_000_000;
    let draws: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
    assert!(draws.iter().all(|&t| t > 0.0));
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (law.variance() / n as f64).sqrt();
    assert!((mean - 2.5).abs() < 4.0 * se, "mean {mean}");
    assert!((var - 1.25).abs() < 0.01, "variance {var}");
}

proptest! {
    #[test]
    fn density_is_normalized(law in any_lifetime()) {
        let total = moment(&law, |_| 1.0);
        prop_assert!((total - 1.0).abs() < 1e-10, "{:?}: {}", law, total);
        let mean = moment(&law, |t| t);
        prop_assert!((mean - law.mean()).abs() < 1e-9 * law.mean());
    }

    #[test]
    fn laplace_matches_quadrature(law in any_lifetime(), s in 0.0f64..10.0) {
        let numeric = moment(&law, |t| (-s * t).exp());
        prop_assert!((numeric - law.laplace(s)).abs() < 1e-10, "{:?}, s = {}", law, s);
    }

    #[test]
    fn survival_bound_dominates(law in any_lifetime(), x in 0.0f64..40.0) {
        let t = x / law.rate();
        let tail = integrate_to_infinity(|u| law.density(u), t, law.mean(), &settings()).unwrap().value;
        let bound = law.survival_bound(t);
        prop_assert!(bound <= 1.0);
        prop_assert!(tail <= bound * (1.0 + 1e-9) + 1e-300, "{:?}, t = {}: {} > {}", law, t, tail, bound);
    }

    #[test]
    fn mode_is_the_maximum(law in any_lifetime(), offset in -5.0f64..5.0) {
        let m = law.mode();
        let t = (m + offset / law.rate()).max(0.0);
        prop_assert!(law.density(t) <= law.density(m) * (1.0 + 1e-12));
    }

    #[test]
    fn samples_are_reproducible(law in any_lifetime(), seed in any::<u64>()) {
        let a: Vec<f64> = { let mut r = substream(seed, 3); (0..16).map(|_| law.sample(&mut r)).collect() };
        let b: Vec<f64> = { let mut r = substream(seed, 3); (0..16).map(|_| law.sample(&mut r)).collect() };
        prop_assert!(a.iter().all(|&t| t > 0.0 && t.is_finite()));
        prop_assert_eq!(a, b);
    }
}

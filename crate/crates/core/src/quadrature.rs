//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Error estimation follows QUADPACK's `qk21`/`qag`: the Gauss–Kronrod
//! difference is rescaled by the integrand's mean absolute deviation and the
//! interval with the largest estimated error is bisected until the global
//! tolerance is met.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::summation::CompensatedSum;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_718_856,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances for the adaptive integrator and for tail truncation of
/// semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 200, tail_cutoff_tol: 1e-16 }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        let positive = [self.rel_tol, self.abs_tol, self.tail_cutoff_tol].iter().all(|t| *t > 0.0 && t.is_finite());
        if !positive || self.max_subdivisions < 10 {
            return Err(QuadratureError::InvalidSettings(*self));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not reach tolerance after {subdivisions} subdivisions (estimate {value:e} ± {abs_error:e})"
    )]
    NotConverged { subdivisions: usize, value: f64, abs_error: f64 },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("invalid integration range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error("invalid quadrature settings {0:?}: tolerances must be positive and max_subdivisions >= 10")]
    InvalidSettings(QuadratureSettings),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    let mut eval = |x: f64| -> Result<f64, QuadratureError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite(x))
        }
    };

    let f_center = eval(center)?;
    let mut res_kronrod = WGK[10] * f_center;
    let mut res_gauss = 0.0;
    let mut res_abs = res_kronrod.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half.abs();
    let value = res_kronrod * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

/// ∫ f over the interval spanned by `breakpoints` (sorted, at least two),
/// with the breakpoints seeding the initial partition.
pub fn integrate<F>(mut f: F, breakpoints: &[f64], settings: &QuadratureSettings) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    settings.validate()?;
    let (first, last) = match (breakpoints.first(), breakpoints.last()) {
        (Some(&a), Some(&b)) if breakpoints.len() >= 2 => (a, b),
        _ => return Err(QuadratureError::InvalidRange(f64::NAN, f64::NAN)),
    };
    if !first.is_finite() || !last.is_finite() || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(QuadratureError::InvalidRange(first, last));
    }

    let mut heap = BinaryHeap::with_capacity(settings.max_subdivisions + 1);
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        heap.push(gauss_kronrod21(&mut f, w[0], w[1])?);
        evaluations += 21;
    }

    loop {
        let (value, error) = totals(&heap);
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral { value, abs_error: error, subdivisions: heap.len(), evaluations });
        }
        if heap.len() >= settings.max_subdivisions {
            return Err(QuadratureError::NotConverged { subdivisions: heap.len(), value, abs_error: error });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // interval exhausted at machine resolution
            return Err(QuadratureError::NotConverged { subdivisions: heap.len() + 1, value, abs_error: error });
        }
        heap.push(gauss_kronrod21(&mut f, worst.a, mid)?);
        heap.push(gauss_kronrod21(&mut f, mid, worst.b)?);
        evaluations += 42;
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    let mut value = CompensatedSum::new();
    let mut error = 0.0;
    for s in heap.iter() {
        value.add(s.value);
        error += s.error;
    }
    (value.value(), error)
}

/// ∫_a^∞ f(x) dx through the map x = a + scale·t/(1 − t), t ∈ (0, 1).
///
/// `scale` should be of the order of the integrand's decay length. The
/// Kronrod nodes never touch t = 1, so `f` is never called at infinity.
pub fn integrate_to_infinity<F>(
    mut f: F,
    a: f64,
    scale: f64,
    settings: &QuadratureSettings,
) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    if !a.is_finite() || !(scale > 0.0) {
        return Err(QuadratureError::InvalidRange(a, f64::INFINITY));
    }
    let mapped = move |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + scale * t / one_minus;
        if x.is_infinite() {
            return 0.0;
        }
        let y = f(x);
        if y == 0.0 {
            0.0
        } else {
            y * scale / (one_minus * one_minus)
        }
    };
    integrate(mapped, &[0.0, 0.5, 1.0], settings)
}

use std::f64::consts::PI;

use super::SpecFunError;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
const SERIES_CUTOFF: f64 = 2.0;
const RESCALE: f64 = 1e250;
const MAX_ITER: usize = 10_000;

/// e^z·K₀(z) and e^z·K₁(z) for z > 0.
fn k0_k1_scaled(z: f64) -> (f64, f64) {
    if z <= SERIES_CUTOFF {
        let (k0, k1) = k0_k1_series(z);
        let ez = z.exp();
        (k0 * ez, k1 * ez)
    } else {
        k0_k1_steed(z)
    }
}

/// Power series around the origin, valid for small z:
///   K₀ = −(ln(z/2) + γ) I₀(z) + Σ_{k≥1} H_k y^k/(k!)²
///   K₁ = 1/z + (z/2) Σ_{k≥0} y^k/(k!(k+1)!) [ln(z/2) − (ψ(k+1) + ψ(k+2))/2]
/// with y = z²/4 and H_k the harmonic numbers.
fn k0_k1_series(z: f64) -> (f64, f64) {
    let y = 0.25 * z * z;
    let ln_half = (0.5 * z).ln();

    let mut i0 = 1.0;
    let mut k0_tail = 0.0;
    let mut term0 = 1.0; // y^k/(k!)^2
    let mut term1 = 1.0; // y^k/(k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    let mut k1_sum = ln_half - 0.5 * (-2.0 * EULER_GAMMA + 1.0);
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term0 *= y / (kf * kf);
        term1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += term0;
        k0_tail += harmonic * term0;
        // ψ(k+1) + ψ(k+2) = −2γ + 2H_k + 1/(k+1)
        let psi_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (kf + 1.0);
        let k1_term = term1 * (ln_half - 0.5 * psi_sum);
        k1_sum += k1_term;
        if term0 * harmonic < f64::EPSILON * 1e-2 * k0_tail.abs() && k1_term.abs() < f64::EPSILON * 1e-2 * k1_sum.abs()
        {
            break;
        }
    }
    let k0 = -(ln_half + EULER_GAMMA) * i0 + k0_tail;
    let k1 = 1.0 / z + 0.5 * z * k1_sum;
    (k0, k1)
}

/// Steed's continued fraction (Temme's CF2) at order 0, returning scaled
/// e^z·K₀(z) and e^z·K₁(z). Converges quickly for z ≥ 2.
fn k0_k1_steed(z: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON * 0.5 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * z)).sqrt() / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    (k0, k1)
}

/// Upward three-term recurrence K_{ν+1} = K_{ν−1} + (2ν/z) K_ν, carrying a
/// logarithmic scale so that neither end of the ladder overflows.
#[derive(Debug, Clone)]
struct Recurrence {
    z: f64,
    order: f64,
    current: f64,
    next: f64,
    log_scale: f64,
}

impl Recurrence {
    fn ln_current(&self) -> f64 {
        self.current.ln() + self.log_scale
    }

    fn advance(&mut self) {
        let upcoming = self.current + 2.0 * (self.order + 1.0) / self.z * self.next;
        self.current = self.next;
        self.next = upcoming;
        self.order += 1.0;
        if self.next > RESCALE {
            self.current /= RESCALE;
            self.next /= RESCALE;
            self.log_scale += RESCALE.ln();
        }
    }
}

/// Iterator over ln K_{j/2}(z) for j = 0, 1, 2, …
///
/// Integer and half-integer orders are run as two interleaved upward
/// recurrences, seeded by K₀, K₁ and the closed forms
/// K_{1/2}(z) = √(π/2z)·e^{−z}, K_{3/2}(z) = K_{1/2}(z)(1 + 1/z).
#[derive(Debug, Clone)]
pub struct BesselKLadder {
    integer: Recurrence,
    half: Recurrence,
    next_index: usize,
}

impl BesselKLadder {
    pub fn new(z: f64) -> Result<Self, SpecFunError> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(SpecFunError::Domain { function: "bessel_k", argument: z, reason: "requires finite z > 0" });
        }
        let (k0, k1) = k0_k1_scaled(z);
        let k_half = (PI / (2.0 * z)).sqrt();
        Ok(Self {
            integer: Recurrence { z, order: 0.0, current: k0, next: k1, log_scale: -z },
            half: Recurrence { z, order: 0.5, current: k_half, next: k_half * (1.0 + 1.0 / z), log_scale: -z },
            next_index: 0,
        })
    }
}

impl Iterator for BesselKLadder {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let rec = if self.next_index.is_multiple_of(2) { &mut self.integer } else { &mut self.half };
        let value = rec.ln_current();
        rec.advance();
        self.next_index += 1;
        Some(value)
    }
}

fn ln_bessel_k(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    let twice = 2.0 * nu;
    if !(nu >= 0.0) || twice != twice.round() || twice > 1e6 {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            argument: nu,
            reason: "order must be a non-negative multiple of 1/2",
        });
    }
    let index = twice as usize;
    let mut ladder = BesselKLadder::new(z)?;
    // only walk the sub-ladder of matching parity
    let rec = if index.is_multiple_of(2) { &mut ladder.integer } else { &mut ladder.half };
    for _ in 0..index / 2 {
        rec.advance();
    }
    Ok(rec.ln_current())
}

/// Modified Bessel function of the second kind K_ν(z) (McDonald function) for
/// ν ∈ {0, ½, 1, 3/2, …} and z > 0.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    let value = ln_bessel_k(nu, z)?.exp();
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(SpecFunError::Overflow { function: "bessel_k", argument: z })
    }
}

/// e^z·K_ν(z).
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    let value = (ln_bessel_k(nu, z)? + z).exp();
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(SpecFunError::Overflow { function: "bessel_k_scaled", argument: z })
    }
}

const I0_ASYMPTOTIC_FROM: f64 = 25.0;

/// e^{−z}·I₀(z) for z ≥ 0.
pub fn bessel_i0_scaled(z: f64) -> Result<f64, SpecFunError> {
    if !(z >= 0.0) {
        return Err(SpecFunError::Domain { function: "bessel_i0", argument: z, reason: "requires z >= 0" });
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    if z <= I0_ASYMPTOTIC_FROM {
        let y = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..MAX_ITER {
            let mf = m as f64;
            term *= y / (mf * mf);
            sum += term;
            if term < 0.25 * f64::EPSILON * sum {
                break;
            }
        }
        return Ok(sum * (-z).exp());
    }
    // Hankel expansion: I₀(z) ~ e^z/√(2πz) Σ_k ((2k−1)!!)²/(k!(8z)^k)
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= odd * odd / (8.0 * z * kf);
        sum += term;
        if term < 0.25 * f64::EPSILON * sum {
            break;
        }
    }
    Ok(sum / (2.0 * PI * z).sqrt())
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(z: f64) -> Result<f64, SpecFunError> {
    let scaled = bessel_i0_scaled(z)?;
    let half = (0.5 * z).exp();
    // e^z split in two factors so the product only overflows when I₀ does
    let value = scaled * half * half;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SpecFunError::Overflow { function: "bessel_i0", argument: z })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_values() {
        // 40-digit references
        let cases = [
            (0.5, 1.0, 0.461_068_504_447_894_56),
            (2.5, 2.0, 0.389_797_758_896_199_7),
            (0.0, 1.0, 0.421_024_438_240_708_33),
            (1.0, 1.0, 0.601_907_230_197_234_57),
            (0.0, 1e-6, 13.931_442_073_626_419),
            (1.0, 1e-6, 999_999.999_992_784_3),
            (0.0, 2.0, 0.113_893_872_749_533_44),
            (1.0, 2.0, 0.139_865_881_816_522_43),
            (0.0, 2.5, 0.062_347_553_200_366_186),
            (1.0, 10.0, 1.864_877_345_382_558_5e-5),
            (0.0, 700.0, 4.669_776_431_685_376_9e-306),
            (7.0, 0.5, 5_837_182.010_352_215),
            (10.5, 50.0, 1.012_180_998_585_940_8e-22),
            (3.0, 1e-3, 7_999_999_000.000_124_5),
            (0.0, 0.1, 2.427_069_024_702_016_6),
        ];
        for (nu, z, expected) in cases {
            let got = bessel_k(nu, z).unwrap();
            assert!(rel(got, expected) < 1e-12, "K_{nu}({z}) = {got}, want {expected}");
        }
    }

    #[test]
    fn half_order_closed_form() {
        assert!(rel(bessel_k(0.5, 1.0).unwrap(), (PI / 2.0).sqrt() * (-1.0f64).exp()) < 1e-14);
    }

    #[test]
    fn scaled_matches_unscaled() {
        for nu in [0.0, 0.5, 1.0, 4.5] {
            for z in [0.3, 1.9, 2.1, 30.0] {
                let a = bessel_k_scaled(nu, z).unwrap();
                let b = bessel_k(nu, z).unwrap() * z.exp();
                assert!(rel(a, b) < 1e-13);
            }
        }
        // unscaled underflows, scaled is fine
        assert!(bessel_k(0.0, 800.0).is_err());
        let s = bessel_k_scaled(0.0, 800.0).unwrap();
        assert!(rel(s, (PI / 1600.0).sqrt() * (1.0 - 1.0 / 6400.0)) < 1e-6);
    }

    #[test]
    fn series_and_continued_fraction_meet() {
        let below = k0_k1_series(SERIES_CUTOFF);
        let ez = SERIES_CUTOFF.exp();
        let above = k0_k1_steed(SERIES_CUTOFF);
        assert!(rel(below.0 * ez, above.0) < 1e-14);
        assert!(rel(below.1 * ez, above.1) < 1e-14);
    }

    #[test]
    fn ladder_orders() {
        let z = 1.3;
        let ladder: Vec<f64> = BesselKLadder::new(z).unwrap().take(12).collect();
        for (j, ln_k) in ladder.iter().enumerate() {
            let direct = bessel_k(j as f64 / 2.0, z).unwrap();
            assert!(rel(ln_k.exp(), direct) < 1e-14, "order {}", j as f64 / 2.0);
        }
    }

    #[test]
    fn ladder_survives_huge_orders() {
        let last = BesselKLadder::new(0.01).unwrap().nth(600).unwrap();
        assert!(last.is_finite() && last > 700.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_k(0.0, 0.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_k(0.0, -1.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_k(0.3, 1.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_k(-0.5, 1.0), Err(SpecFunError::Domain { .. })));
        assert!(matches!(bessel_k(300.0, 1e-3), Err(SpecFunError::Overflow { .. })));
    }

    #[test]
    fn i0_values() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        assert!(rel(bessel_i0(1.0).unwrap(), 1.266_065_877_752_008_3) < 1e-14);
        assert!(rel(bessel_i0_scaled(10.0).unwrap(), 0.127_833_337_163_428_6) < 1e-13);
        assert!(rel(bessel_i0(29.0).unwrap(), 292_520_631_785.690_87) < 1e-13);
        assert!(rel(bessel_i0_scaled(31.0).unwrap(), 0.071_946_496_696_983_83) < 1e-13);
        assert!(rel(bessel_i0_scaled(50.0).unwrap(), 0.056_561_626_647_454_19) < 1e-13);
        assert!(matches!(bessel_i0(1000.0), Err(SpecFunError::Overflow { .. })));
        assert!(bessel_i0_scaled(1000.0).unwrap() > 0.0);
        assert!(bessel_i0(-1.0).is_err());
    }
}

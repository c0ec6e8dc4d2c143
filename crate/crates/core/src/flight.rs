//! The planar Markov random flight.
//!
//! A particle starts at the origin, moves at constant speed `c` and picks a
//! fresh direction at time zero and at every epoch of a Poisson process of
//! rate `λ`. At time t its position lies in the disk of radius ct; the paths
//! with no direction change end on the boundary circle (the singular part of
//! the distribution), all others strictly inside (the absolutely continuous
//! part).

use std::f64::consts::{PI, TAU};

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::specfun::bessel_i0_scaled;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DirectionLaw {
    Uniform,
    /// Circular density exp(κ cos θ)/(2π I₀(κ)); κ = 0 is the uniform law.
    VonMises {
        kappa: f64,
    },
}

impl DirectionLaw {
    pub fn is_uniform(&self) -> bool {
        match *self {
            DirectionLaw::Uniform => true,
            DirectionLaw::VonMises { kappa } => kappa == 0.0,
        }
    }

    /// Density of the heading angle θ ∈ [−π, π).
    pub fn density(&self, theta: f64) -> f64 {
        match *self {
            DirectionLaw::Uniform => 1.0 / TAU,
            DirectionLaw::VonMises { kappa } => {
                let scaled = bessel_i0_scaled(kappa.abs()).expect("finite concentration");
                (kappa * theta.cos() - kappa.abs()).exp() / (TAU * scaled)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightParams {
    speed: f64,
    rate: f64,
    law: DirectionLaw,
}

impl FlightParams {
    pub fn new(speed: f64, rate: f64, law: DirectionLaw) -> Result<Self> {
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(Error::InvalidParameter(format!("speed c must be > 0, got {speed}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("switching rate lambda must be > 0, got {rate}")));
        }
        if let DirectionLaw::VonMises { kappa } = law {
            if !kappa.is_finite() {
                return Err(Error::InvalidParameter(format!("von Mises concentration must be finite, got {kappa}")));
            }
        }
        Ok(Self { speed, rate, law })
    }

    pub fn uniform(speed: f64, rate: f64) -> Result<Self> {
        Self::new(speed, rate, DirectionLaw::Uniform)
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn law(&self) -> DirectionLaw {
        self.law
    }
}

/// One simulated trajectory on [0, end_time].
#[derive(Debug, Clone, PartialEq)]
pub struct FlightPath {
    pub switch_times: Vec<f64>,
    /// Headings in radians in [−π, π); one more than the number of switches.
    pub directions: Vec<f64>,
    pub end_time: f64,
    pub landing: [f64; 2],
}

impl FlightPath {
    pub fn switches(&self) -> usize {
        self.switch_times.len()
    }

    /// Re-integrates the piecewise-linear motion from the recorded headings.
    pub fn reconstruct_landing(&self, speed: f64) -> [f64; 2] {
        let mut start = 0.0;
        let mut pos = [0.0, 0.0];
        for (i, theta) in self.directions.iter().enumerate() {
            let stop = self.switch_times.get(i).copied().unwrap_or(self.end_time);
            let len = speed * (stop - start);
            pos[0] += len * theta.cos();
            pos[1] += len * theta.sin();
            start = stop;
        }
        pos
    }
}

/// Density of the absolutely continuous part of the position law at time t
/// (uniform directions only):
///
/// λ/(2πc) · exp(−λt + (λ/c)√(c²t² − ‖x‖²)) / √(c²t² − ‖x‖²)  for ‖x‖ < ct,
/// and 0 for ‖x‖ > ct. The boundary ‖x‖ = ct carries the singular mass and is
/// rejected.
pub fn transition_density_ac(params: &FlightParams, x: [f64; 2], t: f64) -> Result<f64> {
    if !params.law.is_uniform() {
        return Err(Error::InvalidParameter(
            "closed-form transition density requires the uniform direction law".into(),
        ));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("transition density requires t > 0, got {t}")));
    }
    let r = x[0].hypot(x[1]);
    let reach = params.speed * t;
    if r > reach {
        return Ok(0.0);
    }
    if r == reach {
        return Err(Error::Domain(format!("|x| = ct = {reach} lies on the singular circle; use singular_weight")));
    }
    Ok(radial_ac_density(params.rate, params.speed, r, t))
}

pub(crate) fn radial_ac_density(lambda: f64, c: f64, r: f64, t: f64) -> f64 {
    let ct = c * t;
    // (ct − r)(ct + r) keeps precision next to the boundary
    let root = ((ct - r) * (ct + r)).sqrt();
    lambda / (TAU * c) * (-lambda * t + lambda / c * root).exp() / root
}

/// Probability e^{−λt} of no direction change in (0, t), spread uniformly
/// over the circle of radius ct.
pub fn singular_weight(params: &FlightParams, t: f64) -> f64 {
    (-params.rate * t).exp()
}

fn wrap_angle(theta: f64) -> f64 {
    if theta >= PI {
        theta - TAU
    } else if theta < -PI {
        theta + TAU
    } else {
        theta
    }
}

/// Draws a heading in [−π, π).
///
/// Von Mises headings use the Best–Fisher rejection sampler for |κ|; a
/// negative κ is the mirror image θ → π − θ of the positive one. κ = 0 takes
/// the uniform branch so it consumes the stream exactly like the uniform law.
pub fn sample_direction<R: Rng + ?Sized>(law: &DirectionLaw, rng: &mut R) -> f64 {
    match *law {
        DirectionLaw::Uniform => sample_uniform(rng),
        DirectionLaw::VonMises { kappa: 0.0 } => sample_uniform(rng),
        DirectionLaw::VonMises { kappa } => {
            let theta = sample_von_mises(kappa.abs(), rng);
            if kappa > 0.0 {
                theta
            } else {
                wrap_angle(PI - theta)
            }
        }
    }
}

fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    wrap_angle(-PI + TAU * u)
}

/// Best & Fisher (1979), mean direction 0, κ > 0.
fn sample_von_mises<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> f64 {
    let s = 0.5 / kappa;
    let r = s + (1.0 + s * s).sqrt();
    loop {
        let u1: f64 = rng.random();
        let z = (PI * u1).cos();
        let w = (1.0 + r * z) / (r + z);
        let y = kappa * (r - w);
        let u2: f64 = rng.sample(Open01);
        if y * (2.0 - y) - u2 >= 0.0 || (y / u2).ln() + 1.0 - y >= 0.0 {
            let u3: f64 = rng.random();
            let theta = w.clamp(-1.0, 1.0).acos();
            return wrap_angle(if u3 < 0.5 { -theta } else { theta });
        }
    }
}

/// Landing point and number of direction changes for one path on
/// [0, end_time], without recording the path.
pub fn simulate_landing<R: Rng + ?Sized>(params: &FlightParams, end_time: f64, rng: &mut R) -> ([f64; 2], usize) {
    let mut landing = [0.0, 0.0];
    let mut switches = 0;
    walk(params, end_time, rng, |_, theta, len| {
        landing[0] += len * theta.cos();
        landing[1] += len * theta.sin();
        switches += 1;
    });
    (landing, switches - 1)
}

/// Exact simulation of one trajectory on [0, end_time]: switch epochs by
/// accumulating exponential inter-arrival times, a fresh heading at time zero
/// and after each switch, straight segments in between.
pub fn simulate_path<R: Rng + ?Sized>(params: &FlightParams, end_time: f64, rng: &mut R) -> FlightPath {
    let mut switch_times = Vec::new();
    let mut directions = Vec::new();
    let mut landing = [0.0, 0.0];
    walk(params, end_time, rng, |segment_end, theta, len| {
        directions.push(theta);
        if segment_end < end_time {
            switch_times.push(segment_end);
        }
        landing[0] += len * theta.cos();
        landing[1] += len * theta.sin();
    });
    FlightPath { switch_times, directions, end_time, landing }
}

/// Calls `segment(end, heading, length)` for every straight piece.
fn walk<R, F>(params: &FlightParams, end_time: f64, rng: &mut R, mut segment: F)
where
    R: Rng + ?Sized,
    F: FnMut(f64, f64, f64),
{
    let mut now = 0.0;
    loop {
        let theta = sample_direction(&params.law, rng);
        let u: f64 = rng.sample(Open01);
        let next = now + -u.ln() / params.rate;
        if next >= end_time {
            segment(end_time, theta, params.speed * (end_time - now));
            return;
        }
        segment(next, theta, params.speed * (next - now));
        now = next;
    }
}

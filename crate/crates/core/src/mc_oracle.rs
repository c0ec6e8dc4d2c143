//! Monte Carlo oracle.
//!
//! Particles are simulated to their random landing time and binned, radially
//! for the symmetric flight and on a planar grid for von Mises headings. The
//! radial histograms are compared bin by bin with the analytic radial mass
//! 2π∫ p(r)·r dr through standardized deviations.
//!
//! Paths are generated in fixed batches of [`BATCH_SIZE`]; batch `b` draws
//! from sub-stream `b` of the seed, so the samples do not depend on the
//! number of worker threads.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flight::{simulate_landing, FlightParams};
use crate::lifetime::LifetimeSpec;
use crate::quadrature::QuadratureSettings;
use crate::rng::{substream, StreamRng};
use crate::stationary::{radial_mass, stationary_density, Method, RadialDensityTable, RadialRow, StationaryModel};

pub const BATCH_SIZE: usize = 4096;

/// Bins whose expected count is below this are reported but not judged.
pub const COUNT_FLOOR: f64 = 100.0;

/// Largest admissible standardized deviation.
pub const Z_THRESHOLD: f64 = 4.0;

/// Environment variable capping the number of simulation workers.
pub const THREADS_ENV: &str = "FLIGHTFALL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandingSample {
    pub landing: [f64; 2],
    pub lifetime: f64,
    pub switches: usize,
}

impl LandingSample {
    pub fn distance(&self) -> f64 {
        self.landing[0].hypot(self.landing[1])
    }
}

/// Simulated landings together with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct LandingSet {
    pub flight: FlightParams,
    pub lifetime: LifetimeSpec,
    pub seed: u64,
    pub samples: Vec<LandingSample>,
}

/// Binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
}

impl Proportion {
    pub fn estimate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Standardized deviation from `p` under the null standard error √(p(1−p)/n).
    pub fn z_against(&self, p: f64) -> f64 {
        (self.estimate() - p) / (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

impl LandingSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn zero_switch_fraction(&self) -> Proportion {
        Proportion { successes: self.samples.iter().filter(|s| s.switches == 0).count(), trials: self.samples.len() }
    }

    /// Mean landing point and the standard errors of its coordinates.
    pub fn mean_displacement(&self) -> Result<([f64; 2], [f64; 2])> {
        let n = self.samples.len();
        if n < 2 {
            return Err(Error::NoData("mean displacement needs at least two samples".into()));
        }
        let mut mean = [0.0; 2];
        let mut se = [0.0; 2];
        for axis in 0..2 {
            let m = self.samples.iter().map(|s| s.landing[axis]).sum::<f64>() / n as f64;
            let var = self.samples.iter().map(|s| (s.landing[axis] - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            mean[axis] = m;
            se[axis] = (var / n as f64).sqrt();
        }
        Ok((mean, se))
    }
}

/// Worker cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&k: &usize| k > 0)
}

/// Runs `job` on a pool of `threads` workers, or on the global pool.
pub fn with_workers<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads.and_then(|k| rayon::ThreadPoolBuilder::new().num_threads(k).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}

fn run_batches<F>(n: usize, seed: u64, draw: F) -> Vec<LandingSample>
where
    F: Fn(&mut StreamRng) -> LandingSample + Sync,
{
    let batches = n.div_ceil(BATCH_SIZE);
    let chunks: Vec<Vec<LandingSample>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, b as u64);
            let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    chunks.concat()
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("path count n must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Simulates `n` particles: draw T from the lifetime law, fly until T, record
/// the landing point. Uses the worker cap from [`THREADS_ENV`].
pub fn simulate_landings(flight: &FlightParams, lifetime: &LifetimeSpec, n: usize, seed: u64) -> Result<LandingSet> {
    simulate_landings_with(flight, lifetime, n, seed, threads_from_env())
}

/// [`simulate_landings`] with an explicit worker count.
pub fn simulate_landings_with(
    flight: &FlightParams,
    lifetime: &LifetimeSpec,
    n: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<LandingSet> {
    check_count(n)?;
    let samples = with_workers(threads, || {
        run_batches(n, seed, |rng| {
            let t = lifetime.sample(rng);
            let (landing, switches) = simulate_landing(flight, t, rng);
            LandingSample { landing, lifetime: t, switches }
        })
    });
    Ok(LandingSet { flight: *flight, lifetime: *lifetime, seed, samples })
}

/// Positions of `n` paths at the fixed time `t`.
pub fn simulate_at_time(flight: &FlightParams, t: f64, n: usize, seed: u64) -> Result<Vec<LandingSample>> {
    check_count(n)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be > 0, got {t}")));
    }
    Ok(with_workers(threads_from_env(), || {
        run_batches(n, seed, |rng| {
            let (landing, switches) = simulate_landing(flight, t, rng);
            LandingSample { landing, lifetime: t, switches }
        })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleFilter {
    All,
    /// Paths with at least one direction change.
    SwitchedOnly,
}

impl SampleFilter {
    fn keeps(&self, s: &LandingSample) -> bool {
        match self {
            SampleFilter::All => true,
            SampleFilter::SwitchedOnly => s.switches > 0,
        }
    }
}

/// Landing fractions per distance bin. Masses are normalized by the total
/// number of paths, filtered or not, so that with
/// [`SampleFilter::SwitchedOnly`] they estimate 2π∫_bin p(r)·r dr.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialHistogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub masses: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub n_paths: usize,
    pub filter: SampleFilter,
    pub flight: FlightParams,
    pub lifetime: LifetimeSpec,
}

/// Edges 0, w, 2w, … up to `max` inclusive.
pub fn uniform_edges(width: f64, max: f64) -> Result<Vec<f64>> {
    if !(width > 0.0 && width.is_finite() && max > 0.0 && max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bin width and range must be finite and > 0, got width {width}, max {max}"
        )));
    }
    let bins = (max / width - 1e-9).ceil().max(1.0) as usize;
    Ok((0..=bins).map(|i| ((i as f64 * width) * 1e12).round() / 1e12).collect())
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges[0] != 0.0 {
        return Err(Error::InvalidParameter("bin edges must start at 0 and hold at least two values".into()));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) || edges[..edges.len() - 1].iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidParameter(
            "bin edges must be strictly increasing; only the last may be infinite".into(),
        ));
    }
    Ok(())
}

pub fn radial_histogram(set: &LandingSet, bin_edges: &[f64], filter: SampleFilter) -> Result<RadialHistogram> {
    check_edges(bin_edges)?;
    let bins = bin_edges.len() - 1;
    let mut counts = vec![0u64; bins];
    for s in set.samples.iter().filter(|s| filter.keeps(s)) {
        let r = s.distance();
        let i = bin_edges.partition_point(|&e| e <= r);
        if i >= 1 && i <= bins {
            counts[i - 1] += 1;
        }
    }
    let n = set.samples.len();
    let masses: Vec<f64> = counts.iter().map(|&k| if n == 0 { 0.0 } else { k as f64 / n as f64 }).collect();
    let standard_errors =
        masses.iter().map(|&m| if n == 0 { 0.0 } else { (m * (1.0 - m) / n as f64).sqrt() }).collect();
    Ok(RadialHistogram {
        bin_edges: bin_edges.to_vec(),
        counts,
        masses,
        standard_errors,
        n_paths: n,
        filter,
        flight: set.flight,
        lifetime: set.lifetime,
    })
}

impl RadialHistogram {
    /// Density estimate mass/(annulus area) at each finite bin's midpoint.
    pub fn density_table(&self) -> Result<RadialDensityTable> {
        let model = StationaryModel::new(self.flight, self.lifetime)?;
        let rows = self
            .bin_edges
            .windows(2)
            .zip(&self.masses)
            .filter(|(w, _)| w[1].is_finite())
            .map(|(w, &m)| RadialRow {
                r: 0.5 * (w[0] + w[1]),
                density: m / (std::f64::consts::PI * (w[1] * w[1] - w[0] * w[0])),
            })
            .collect();
        Ok(RadialDensityTable { model, method: Method::MonteCarlo, rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinComparison {
    pub lo: f64,
    pub hi: f64,
    pub empirical: f64,
    pub analytic: f64,
    /// Null standard error √(a(1−a)/n) from the analytic mass a.
    pub std_err: f64,
    pub z: f64,
    /// Whether the expected count reaches [`COUNT_FLOOR`].
    pub judged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub n_paths: usize,
    pub bins: Vec<BinComparison>,
}

impl ComparisonReport {
    /// Largest z over judged bins; `None` when no bin meets the count floor.
    pub fn max_z(&self) -> Option<f64> {
        self.bins.iter().filter(|b| b.judged).map(|b| b.z).reduce(f64::max)
    }

    /// `Some(max z ≤ 4)`, or `None` (inconclusive) without judged bins.
    pub fn passed(&self) -> Option<bool> {
        self.max_z().map(|z| z <= Z_THRESHOLD)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,empirical_mass,analytic_mass,std_err,z\n");
        for b in &self.bins {
            writeln!(out, "{},{},{},{},{},{}", b.lo, b.hi, b.empirical, b.analytic, b.std_err, b.z).unwrap();
        }
        out
    }
}

fn check_model(flight: &FlightParams, lifetime: &LifetimeSpec, model: &StationaryModel) -> Result<()> {
    let same_flight = flight.speed() == model.speed() && flight.rate() == model.lambda() && flight.law().is_uniform();
    if !same_flight || lifetime != model.lifetime() {
        return Err(Error::MismatchedParameters(format!(
            "samples from c={} lambda={} law={:?} lifetime={}, model {}",
            flight.speed(),
            flight.rate(),
            flight.law(),
            lifetime,
            model
        )));
    }
    Ok(())
}

fn judge(empirical: f64, analytic: f64, n: usize, lo: f64, hi: f64) -> BinComparison {
    let std_err = (analytic * (1.0 - analytic) / n as f64).sqrt();
    let z = if std_err > 0.0 {
        (empirical - analytic).abs() / std_err
    } else if empirical == analytic {
        0.0
    } else {
        f64::INFINITY
    };
    BinComparison { lo, hi, empirical, analytic, std_err, z, judged: analytic * n as f64 >= COUNT_FLOOR }
}

/// Bin-by-bin comparison of a switched-only histogram with the analytic
/// radial mass of `model`, which must carry the simulation parameters.
pub fn compare_to_analytic(
    hist: &RadialHistogram,
    model: &StationaryModel,
    settings: &QuadratureSettings,
) -> Result<ComparisonReport> {
    if hist.n_paths > 0 && hist.filter == SampleFilter::SwitchedOnly {
        check_model(&hist.flight, &hist.lifetime, model)?;
    }
    compare_to_model(hist, model, settings)
}

/// [`compare_to_analytic`] without the parameter check, for judging a
/// histogram against some other model (sensitivity checks).
pub fn compare_to_model(
    hist: &RadialHistogram,
    model: &StationaryModel,
    settings: &QuadratureSettings,
) -> Result<ComparisonReport> {
    if hist.n_paths == 0 {
        return Err(Error::NoData("histogram holds no paths".into()));
    }
    if hist.filter != SampleFilter::SwitchedOnly {
        return Err(Error::MismatchedParameters(
            "the analytic density excludes no-switch paths; use a switched-only histogram".into(),
        ));
    }
    let analytic =
        hist.bin_edges.par_windows(2).map(|w| radial_mass(model, w[0], w[1], settings)).collect::<Result<Vec<_>>>()?;
    let bins = hist
        .bin_edges
        .windows(2)
        .zip(hist.masses.iter().zip(analytic))
        .map(|(w, (&m, a))| judge(m, a, hist.n_paths, w[0], w[1]))
        .collect();
    Ok(ComparisonReport { n_paths: hist.n_paths, bins })
}

/// Square grid of `cells × cells` cells on [−half_width, half_width]².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub cells: usize,
}

impl GridSpec {
    pub fn cell_width(&self) -> f64 {
        2.0 * self.half_width / self.cells as f64
    }

    /// Lower edge of cell `i` along either axis.
    pub fn edge(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.cell_width()
    }

    fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) || self.cells == 0 {
            return Err(Error::InvalidParameter(format!("invalid grid {self:?}")));
        }
        Ok(())
    }
}

/// Planar landing histogram; `counts[iy * cells + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarGrid {
    pub spec: GridSpec,
    pub counts: Vec<u64>,
    pub n_paths: usize,
    pub filter: SampleFilter,
    pub flight: FlightParams,
    pub lifetime: LifetimeSpec,
}

pub fn planar_density_grid(set: &LandingSet, spec: GridSpec, filter: SampleFilter) -> Result<PlanarGrid> {
    spec.validate()?;
    let m = spec.cells;
    let w = spec.cell_width();
    let mut counts = vec![0u64; m * m];
    for s in set.samples.iter().filter(|s| filter.keeps(s)) {
        let ix = ((s.landing[0] + spec.half_width) / w).floor();
        let iy = ((s.landing[1] + spec.half_width) / w).floor();
        if ix >= 0.0 && iy >= 0.0 && (ix as usize) < m && (iy as usize) < m {
            counts[iy as usize * m + ix as usize] += 1;
        }
    }
    Ok(PlanarGrid { spec, counts, n_paths: set.samples.len(), filter, flight: set.flight, lifetime: set.lifetime })
}

impl PlanarGrid {
    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.spec.cells + ix]
    }

    /// Landing density estimate in a cell.
    pub fn density(&self, ix: usize, iy: usize) -> f64 {
        let w = self.spec.cell_width();
        self.count(ix, iy) as f64 / (self.n_paths as f64 * w * w)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_lo,x_hi,y_lo,y_hi,count,density\n");
        let m = self.spec.cells;
        for iy in 0..m {
            for ix in 0..m {
                let (x0, x1) = (self.spec.edge(ix), self.spec.edge(ix + 1));
                let (y0, y1) = (self.spec.edge(iy), self.spec.edge(iy + 1));
                writeln!(out, "{x0},{x1},{y0},{y1},{},{}", self.count(ix, iy), self.density(ix, iy)).unwrap();
            }
        }
        out
    }

    /// Ring index of every cell, by the distance of its centre; `None`
    /// outside the last ring.
    fn ring_of_cells(&self, ring_edges: &[f64]) -> Vec<Option<usize>> {
        let m = self.spec.cells;
        let w = self.spec.cell_width();
        (0..m * m)
            .map(|k| {
                let (ix, iy) = (k % m, k / m);
                let cx = self.spec.edge(ix) + 0.5 * w;
                let cy = self.spec.edge(iy) + 0.5 * w;
                let r = cx.hypot(cy);
                let i = ring_edges.partition_point(|&e| e <= r);
                (i >= 1 && i < ring_edges.len()).then(|| i - 1)
            })
            .collect()
    }

    /// Compares ring totals of a switched-only grid with the analytic
    /// density integrated over exactly the same cells.
    pub fn compare_radialized(
        &self,
        model: &StationaryModel,
        ring_edges: &[f64],
        settings: &QuadratureSettings,
    ) -> Result<ComparisonReport> {
        if self.n_paths == 0 {
            return Err(Error::NoData("grid holds no paths".into()));
        }
        if self.filter != SampleFilter::SwitchedOnly {
            return Err(Error::MismatchedParameters("radialized comparison needs a switched-only grid".into()));
        }
        check_edges(ring_edges)?;
        check_model(&self.flight, &self.lifetime, model)?;
        let profile = RadialProfile::new(model, self.spec.half_width * std::f64::consts::SQRT_2, settings)?;
        let rings = ring_edges.len() - 1;
        let ring_of = self.ring_of_cells(ring_edges);
        let m = self.spec.cells;
        let cell_mass: Vec<f64> = (0..m * m)
            .into_par_iter()
            .map(|k| match ring_of[k] {
                Some(_) => {
                    let (ix, iy) = (k % m, k / m);
                    cell_integral(
                        &profile,
                        self.spec.edge(ix),
                        self.spec.edge(ix + 1),
                        self.spec.edge(iy),
                        self.spec.edge(iy + 1),
                        0,
                    )
                }
                None => 0.0,
            })
            .collect();
        let mut counts = vec![0u64; rings];
        let mut analytic = vec![0.0; rings];
        for (k, ring) in ring_of.iter().enumerate() {
            if let Some(i) = *ring {
                counts[i] += self.counts[k];
                analytic[i] += cell_mass[k];
            }
        }
        let n = self.n_paths;
        let bins = (0..rings)
            .map(|i| judge(counts[i] as f64 / n as f64, analytic[i], n, ring_edges[i], ring_edges[i + 1]))
            .collect();
        Ok(ComparisonReport { n_paths: n, bins })
    }
}

/// Result of comparing a grid with the mirror image of another about the
/// vertical axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorReport {
    pub max_z: Option<f64>,
    pub cells_judged: usize,
}

impl MirrorReport {
    pub fn passed(&self) -> Option<bool> {
        self.max_z.map(|z| z <= Z_THRESHOLD)
    }
}

/// Cell-wise check that `b` is the mirror image of `a` under x₁ → −x₁:
/// z = |n_a − n_b|/√(n_a + n_b) over cell pairs with at least
/// [`COUNT_FLOOR`] combined counts. Both grids must use the same spec and
/// path count.
pub fn mirror_comparison(a: &PlanarGrid, b: &PlanarGrid) -> Result<MirrorReport> {
    if a.spec != b.spec || a.n_paths != b.n_paths {
        return Err(Error::MismatchedParameters("mirror comparison needs identical grids and path counts".into()));
    }
    let m = a.spec.cells;
    let mut max_z: Option<f64> = None;
    let mut judged = 0;
    for iy in 0..m {
        for ix in 0..m {
            let (na, nb) = (a.count(ix, iy) as f64, b.count(m - 1 - ix, iy) as f64);
            if na + nb >= COUNT_FLOOR {
                let z = (na - nb).abs() / (na + nb).sqrt();
                max_z = Some(max_z.map_or(z, |cur| cur.max(z)));
                judged += 1;
            }
        }
    }
    Ok(MirrorReport { max_z, cells_judged: judged })
}

/// Stationary density tabulated on a logarithmic grid and interpolated
/// linearly in ln r, which also follows the logarithmic growth of the
/// heavy-particle density near the origin.
struct RadialProfile {
    ln_r0: f64,
    step: f64,
    values: Vec<f64>,
}

impl RadialProfile {
    const NODES: usize = 4000;

    fn new(model: &StationaryModel, r_max: f64, settings: &QuadratureSettings) -> Result<Self> {
        let ln_r0 = (r_max * 1e-7).ln();
        let step = (r_max.ln() - ln_r0) / (Self::NODES - 1) as f64;
        let values = (0..Self::NODES)
            .into_par_iter()
            .map(|j| stationary_density(model, (ln_r0 + j as f64 * step).exp(), settings))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ln_r0, step, values })
    }

    fn eval(&self, r: f64) -> f64 {
        let x = (r.ln() - self.ln_r0) / self.step;
        let j = (x.floor().max(0.0) as usize).min(Self::NODES - 2);
        let f = x - j as f64;
        (self.values[j] * (1.0 - f) + self.values[j + 1] * f).max(0.0)
    }
}

const GL5_NODES: [f64; 5] =
    [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
const GL5_WEIGHTS: [f64; 5] =
    [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];

/// ∫∫ p over a cell; cells touching the origin are split repeatedly.
fn cell_integral(p: &RadialProfile, x0: f64, x1: f64, y0: f64, y1: f64, depth: u32) -> f64 {
    let touches_origin = x0 <= 0.0 && 0.0 <= x1 && y0 <= 0.0 && 0.0 <= y1;
    if touches_origin && depth < 24 {
        let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        return cell_integral(p, x0, xm, y0, ym, depth + 1)
            + cell_integral(p, xm, x1, y0, ym, depth + 1)
            + cell_integral(p, x0, xm, ym, y1, depth + 1)
            + cell_integral(p, xm, x1, ym, y1, depth + 1);
    }
    let (hx, hy) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
    let (cx, cy) = (x0 + hx, y0 + hy);
    let mut sum = 0.0;
    for (xi, wx) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
        for (yi, wy) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
            sum += wx * wy * p.eval((cx + hx * xi).hypot(cy + hy * yi));
        }
    }
    sum * hx * hy
}

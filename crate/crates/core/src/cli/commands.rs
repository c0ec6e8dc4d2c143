use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::config::ConfigFile;
use super::{
    pick, svg, CliError, Command, ConcentrationArgs, ModelArgs, ModelKind, PlotArgs, ResolvedModel, SimulateArgs,
    TableArgs, DEFAULT_SEED, EXIT_NUMERICAL, EXIT_OK, EXIT_STATISTICAL,
};
use crate::mc_oracle::{
    compare_to_analytic, planar_density_grid, radial_histogram, simulate_landings, uniform_edges, GridSpec,
    SampleFilter, COUNT_FLOOR, Z_THRESHOLD,
};
use crate::stationary::{
    compare_light_series, concentration_in_disk, density_table, radial_grid, total_mass, Method, QuadratureSettings,
    SERIES_REL_TOL,
};

const DEFAULT_PATHS: usize = 1_000_000;
const MIN_PLOT_POINTS: usize = 200;

pub(super) fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Table(a) => table(a, stdout, stderr),
        Command::Plot(a) => plot(a, stdout),
        Command::Simulate(a) => simulate(a, stdout, stderr),
        Command::Concentration(a) => concentration(a, stdout),
    }
}

fn load(args: &ModelArgs) -> Result<(ConfigFile, ResolvedModel), CliError> {
    let cfg = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let model = ResolvedModel::resolve(args, &cfg)?;
    Ok((cfg, model))
}

fn emit(out: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout.write_all(content.as_bytes()).map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn resolve_seed(model: &ResolvedModel, stderr: &mut dyn Write) -> u64 {
    match model.seed {
        Some(seed) => seed,
        None => {
            let _ = writeln!(stderr, "seed: {DEFAULT_SEED} (default)");
            DEFAULT_SEED
        }
    }
}

/// Rounds away binary noise from grid arithmetic (0.15000000000000002 → 0.15).
fn clean(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Decimals needed to print every grid point exactly (at least one).
fn grid_decimals(values: &[f64]) -> usize {
    (1..=12)
        .find(|&d| {
            let scale = 10f64.powi(d as i32);
            values.iter().all(|v| ((v * scale).round() - v * scale).abs() < 1e-6)
        })
        .unwrap_or(12)
}

fn default_r_min(model: &ResolvedModel, r_step: f64) -> f64 {
    match model.kind {
        ModelKind::Heavy => r_step,
        ModelKind::Light => 0.0,
    }
}

fn table(args: &TableArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, m) = load(&args.model)?;
    let r_step: f64 = pick(args.r_step, &cfg, "r-step")?
        .ok_or_else(|| CliError::Usage("missing --r-step (flag or config key 'r-step')".into()))?;
    let r_max: f64 = pick(args.r_max, &cfg, "r-max")?
        .ok_or_else(|| CliError::Usage("missing --r-max (flag or config key 'r-max')".into()))?;
    let r_min = pick(args.r_min, &cfg, "r-min")?.unwrap_or_else(|| default_r_min(&m, r_step));
    let method = pick(args.method, &cfg, "method")?.unwrap_or(Method::Quadrature);
    let model = m.stationary()?;
    let settings = QuadratureSettings::default();
    let p = m.precision;
    let mut extra = vec![
        ("method", method.to_string()),
        ("r_min", r_min.to_string()),
        ("r_max", r_max.to_string()),
        ("r_step", r_step.to_string()),
    ];
    let mut csv = String::new();
    let mut code = EXIT_OK;
    let d = grid_decimals(&[r_min, r_step]);
    match method {
        Method::LightSeries => {
            let grid = radial_grid(r_min, r_max, r_step)?;
            writeln!(csv, "{}", m.header("table", &extra)).unwrap();
            csv.push_str("r,density,quadrature,relative_discrepancy,status\n");
            for &r in &grid {
                let cmp = compare_light_series(&model, r, &settings, SERIES_REL_TOL)?;
                match &cmp.series {
                    Ok(s) => {
                        let status = if s.converged { "ok" } else { "not converged" };
                        if !s.converged {
                            code = EXIT_NUMERICAL;
                        }
                        writeln!(
                            csv,
                            "{r:.d$},{:.p$},{:.p$},{:.3e},{status}",
                            s.value,
                            cmp.quadrature,
                            cmp.relative_discrepancy().unwrap_or(f64::NAN)
                        )
                        .unwrap();
                    }
                    Err(e) => {
                        code = EXIT_NUMERICAL;
                        let status = e.to_string().replace(',', ";");
                        writeln!(csv, "{r:.d$},,{:.p$},,{status}", cmp.quadrature).unwrap();
                    }
                }
            }
            if code != EXIT_OK {
                let _ = writeln!(stderr, "light-particle series failed on some rows; see the status column");
            }
        }
        Method::MonteCarlo => {
            let n = pick(args.n, &cfg, "n")?.unwrap_or(DEFAULT_PATHS);
            let seed = resolve_seed(&m, stderr);
            extra.push(("n", n.to_string()));
            extra.push(("seed", seed.to_string()));
            let set = simulate_landings(&m.flight()?, &m.lifetime()?, n, seed)?;
            let edges = uniform_edges(r_step, r_max)?;
            let hist = radial_histogram(&set, &edges, SampleFilter::SwitchedOnly)?;
            let table = hist.density_table()?;
            writeln!(csv, "{}", m.header("table", &extra)).unwrap();
            csv.push_str("r,density\n");
            let d = grid_decimals(&[0.5 * r_step]);
            // rows are the midpoints of the bins [0, step), [step, 2 step), …
            for row in &table.rows {
                writeln!(csv, "{:.d$},{:.p$}", clean(row.r), row.density).unwrap();
            }
        }
        _ => {
            let table = density_table(&model, r_min, r_max, r_step, method, &settings)?;
            writeln!(csv, "{}", m.header("table", &extra)).unwrap();
            csv.push_str("r,density\n");
            for row in &table.rows {
                writeln!(csv, "{:.d$},{:.p$}", row.r, row.density).unwrap();
            }
        }
    }
    emit(m.out.as_deref(), &csv, stdout)?;
    Ok(code)
}

fn plot(args: &PlotArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, m) = load(&args.model)?;
    let r_step = pick(args.r_step, &cfg, "r-step")?.unwrap_or(0.02);
    let r_max = pick(args.r_max, &cfg, "r-max")?.unwrap_or(5.0);
    let r_min = pick(args.r_min, &cfg, "r-min")?.unwrap_or_else(|| default_r_min(&m, r_step));
    let model = m.stationary()?;
    let grid = radial_grid(r_min, r_max, r_step)?;
    if grid.len() < MIN_PLOT_POINTS {
        return Err(CliError::Usage(format!(
            "a plot needs at least {MIN_PLOT_POINTS} samples, the range gives {}; reduce --r-step",
            grid.len()
        )));
    }
    let table = density_table(&model, r_min, r_max, r_step, Method::Quadrature, &QuadratureSettings::default())?;
    let points: Vec<(f64, f64)> = table.rows.iter().map(|row| (row.r, row.density)).collect();
    let header =
        m.header("plot", &[("r_min", r_min.to_string()), ("r_max", r_max.to_string()), ("r_step", r_step.to_string())]);
    let title = format!(
        "Stationary density, {} model (λ={}, μ={}, c={}{})",
        match m.kind {
            ModelKind::Heavy => "heavy",
            ModelKind::Light => "light",
        },
        m.lambda,
        m.mu,
        m.c,
        m.alpha.map_or(String::new(), |a| format!(", α={a}"))
    );
    let svg = svg::line_plot(&points, &title, "distance r", "density p(r)", header.trim_start_matches("# "));
    emit(m.out.as_deref(), &svg, stdout)?;
    Ok(EXIT_OK)
}

fn simulate(args: &SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, m) = load(&args.model)?;
    let n = pick(args.n, &cfg, "n")?.unwrap_or(DEFAULT_PATHS);
    let bin_width = pick(args.bin_width, &cfg, "bin-width")?.unwrap_or(0.1);
    let r_max = pick(args.r_max, &cfg, "r-max")?.unwrap_or(4.0);
    let seed = resolve_seed(&m, stderr);
    let flight = m.flight()?;
    let lifetime = m.lifetime()?;
    let extra = [
        ("n", n.to_string()),
        ("seed", seed.to_string()),
        ("bin_width", bin_width.to_string()),
        ("r_max", r_max.to_string()),
    ];
    let edges = uniform_edges(bin_width, r_max)?;
    let set = simulate_landings(&flight, &lifetime, n, seed)?;

    if m.kappa != 0.0 {
        let cells = (2.0 * r_max / bin_width).round().max(1.0) as usize;
        let spec = GridSpec { half_width: r_max, cells };
        let grid = planar_density_grid(&set, spec, SampleFilter::All)?;
        let mut csv = m.header("simulate", &extra);
        csv.push('\n');
        csv.push_str(&grid.to_csv());
        emit(m.out.as_deref(), &csv, stdout)?;
        if let Ok((mean, se)) = set.mean_displacement() {
            let _ =
                writeln!(stderr, "mean displacement: ({:.6}, {:.6}) ± ({:.6}, {:.6})", mean[0], mean[1], se[0], se[1]);
        }
        return Ok(EXIT_OK);
    }

    let model = m.stationary()?;
    let hist = radial_histogram(&set, &edges, SampleFilter::SwitchedOnly)?;
    let report = compare_to_analytic(&hist, &model, &QuadratureSettings::default())?;
    let mut csv = m.header("simulate", &extra);
    csv.push('\n');
    csv.push_str(&report.to_csv());
    emit(m.out.as_deref(), &csv, stdout)?;

    let zero = set.zero_switch_fraction();
    let expected = model.singular_mass();
    let zero_z = zero.z_against(expected).abs();
    let zero_judged = n as f64 * expected.min(1.0 - expected) >= COUNT_FLOOR;
    let _ = writeln!(
        stderr,
        "zero-switch fraction: {:.6} (expected {:.6}, z = {:.2}{})",
        zero.estimate(),
        expected,
        zero_z,
        if zero_judged { "" } else { ", not judged" }
    );
    let judged = report.bins.iter().filter(|b| b.judged).count();
    match report.max_z() {
        Some(z) => {
            let _ = writeln!(stderr, "max z over {judged} judged bins: {z:.2}");
        }
        None => {
            let _ = writeln!(stderr, "warning: no bin reaches {COUNT_FLOOR} expected counts; increase --n");
        }
    }
    let verdict = verdict(report.passed(), zero_judged.then_some(zero_z <= Z_THRESHOLD));
    let _ = writeln!(stderr, "result: {verdict}");
    Ok(if verdict == "fail" { EXIT_STATISTICAL } else { EXIT_OK })
}

/// Combines the histogram and zero-switch checks; `None` means not judged.
fn verdict(radial: Option<bool>, zero_switch: Option<bool>) -> &'static str {
    match (radial, zero_switch) {
        (Some(false), _) | (_, Some(false)) => "fail",
        (None, None) => "inconclusive",
        _ => "pass",
    }
}

fn concentration(args: &ConcentrationArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, m) = load(&args.model)?;
    let radius: f64 = pick(args.radius, &cfg, "radius")?
        .ok_or_else(|| CliError::Usage("missing --radius (flag or config key 'radius')".into()))?;
    let emitted_mass = pick(args.emitted_mass, &cfg, "emitted-mass")?.unwrap_or(1.0);
    let model = m.stationary()?;
    let settings = QuadratureSettings::default();
    let disk = concentration_in_disk(&model, radius, emitted_mass, &settings)?;
    let total = total_mass(&model, &settings)?;
    let p = m.precision;
    let mut csv =
        m.header("concentration", &[("radius", radius.to_string()), ("emitted_mass", emitted_mass.to_string())]);
    csv.push('\n');
    csv.push_str("radius,k_r,total_mass,emitted_mass,concentration\n");
    writeln!(csv, "{radius},{:.p$},{:.p$},{emitted_mass},{:.p$}", disk.share, total, disk.concentration).unwrap();
    emit(m.out.as_deref(), &csv, stdout)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_for_grids() {
        assert_eq!(grid_decimals(&[0.0, 0.2]), 1);
        assert_eq!(grid_decimals(&[1.0, 1.0]), 1);
        assert_eq!(grid_decimals(&[0.02, 0.02]), 2);
        assert_eq!(grid_decimals(&[0.05]), 2);
        assert_eq!(clean(0.15000000000000002), 0.15);
    }

    #[test]
    fn verdicts() {
        assert_eq!(verdict(Some(true), Some(true)), "pass");
        assert_eq!(verdict(Some(true), None), "pass");
        assert_eq!(verdict(None, Some(true)), "pass");
        assert_eq!(verdict(Some(false), Some(true)), "fail");
        assert_eq!(verdict(None, Some(false)), "fail");
        assert_eq!(verdict(None, None), "inconclusive");
    }
}

//! The `flightfall` command line.
//!
//! Every command takes model parameters from flags, from a `--config`
//! key=value file, or both (flags win). Output goes to `--out` or stdout;
//! diagnostics go to stderr.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O, 5 failed
//! statistical comparison.

mod commands;
pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::Error;
use crate::flight::{DirectionLaw, FlightParams};
use crate::lifetime::LifetimeSpec;
use crate::stationary::{Method, StationaryModel};
use config::ConfigFile;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PRECISION: usize = 6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_STATISTICAL: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "flightfall", version, about = "Stationary landing densities of particles in a planar random flight")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the stationary density as CSV.
    Table(TableArgs),
    /// Plot the stationary density as SVG.
    Plot(PlotArgs),
    /// Simulate landings and compare them with the analytic density.
    Simulate(SimulateArgs),
    /// Share of settled mass inside a disk around the source.
    Concentration(ConcentrationArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Exponential lifetime.
    Heavy,
    /// Gamma lifetime.
    Light,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LifetimeKind {
    #[value(alias = "exponential")]
    Exp,
    Gamma,
}

macro_rules! value_enum_from_str {
    ($t:ty) => {
        impl FromStr for $t {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    };
}
value_enum_from_str!(ModelKind);
value_enum_from_str!(LifetimeKind);

/// `--lifetime` value: a law name, or a full law such as `gamma(mu=2, alpha=5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LifetimeArg {
    Kind(LifetimeKind),
    Spec(LifetimeSpec),
}

impl FromStr for LifetimeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(kind) = s.parse::<LifetimeKind>() {
            return Ok(LifetimeArg::Kind(kind));
        }
        s.parse::<LifetimeSpec>()
            .map(LifetimeArg::Spec)
            .map_err(|e| format!("expected exp, gamma, exp(mu=..) or gamma(mu=.., alpha=..): {e}"))
    }
}

impl LifetimeArg {
    fn kind(&self) -> LifetimeKind {
        match self {
            LifetimeArg::Kind(k) => *k,
            LifetimeArg::Spec(LifetimeSpec::Exponential { .. }) => LifetimeKind::Exp,
            LifetimeArg::Spec(LifetimeSpec::Gamma { .. }) => LifetimeKind::Gamma,
        }
    }
}

/// Merges a value carried by `--lifetime` with the matching explicit option.
fn merge(explicit: Option<f64>, from_law: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
    match (explicit, from_law) {
        (Some(a), Some(b)) if a != b => {
            Err(CliError::Usage(format!("--{key} = {a} contradicts the lifetime law ({key} = {b})")))
        }
        (a, b) => Ok(a.or(b)),
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// heavy (exponential lifetime) or light (gamma lifetime) [default: heavy]
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Direction switching rate λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Lifetime rate μ.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Speed c.
    #[arg(long = "c")]
    pub c: Option<f64>,
    /// Gamma lifetime shape α (light model).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Von Mises concentration of the headings; 0 is the uniform law.
    #[arg(long = "vonmises-k", allow_negative_numbers = true)]
    pub vonmises_k: Option<f64>,
    /// Lifetime law: exp, gamma, exp(mu=2) or gamma(mu=2, alpha=5); an alternative to --model.
    #[arg(long)]
    pub lifetime: Option<LifetimeArg>,
    /// Random seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file supplying any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Decimals of printed values [default: 6].
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// First distance [default: 0 for light, r-step for heavy].
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_step: Option<f64>,
    /// quadrature, heavy-series, light-series or monte-carlo [default: quadrature]
    #[arg(long)]
    pub method: Option<Method>,
    /// Paths for the monte-carlo method [default: 1000000].
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct PlotArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// First distance [default: 0 for light, r-step for heavy].
    #[arg(long)]
    pub r_min: Option<f64>,
    /// [default: 5]
    #[arg(long)]
    pub r_max: Option<f64>,
    /// [default: 0.02]
    #[arg(long)]
    pub r_step: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of simulated particles [default: 1000000].
    #[arg(long)]
    pub n: Option<usize>,
    /// Histogram bin width, also the planar cell width [default: 0.1].
    #[arg(long)]
    pub bin_width: Option<f64>,
    /// Histogram range, also the planar grid half-width [default: 4].
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ConcentrationArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Disk radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Emitted mass M [default: 1].
    #[arg(long)]
    pub emitted_mass: Option<f64>,
}

/// Flag value, else config value.
pub(crate) fn pick<T>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{key} (flag or config key '{key}')")))
}

/// Model options after merging flags and config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedModel {
    pub kind: ModelKind,
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
    pub alpha: Option<f64>,
    pub kappa: f64,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub precision: usize,
}

impl ResolvedModel {
    pub fn resolve(args: &ModelArgs, cfg: &ConfigFile) -> Result<Self, CliError> {
        let model: Option<ModelKind> = pick(args.model, cfg, "model")?;
        let lifetime: Option<LifetimeArg> = pick(args.lifetime, cfg, "lifetime")?;
        let (law_mu, law_alpha) = match lifetime {
            Some(LifetimeArg::Spec(LifetimeSpec::Exponential { mu })) => (Some(mu), None),
            Some(LifetimeArg::Spec(LifetimeSpec::Gamma { mu, alpha })) => (Some(mu), Some(alpha)),
            _ => (None, None),
        };
        let kind = match (model, lifetime.map(|l| l.kind())) {
            (Some(ModelKind::Heavy), Some(LifetimeKind::Gamma)) | (Some(ModelKind::Light), Some(LifetimeKind::Exp)) => {
                return Err(CliError::Usage("--model and --lifetime disagree".into()))
            }
            (Some(m), _) => m,
            (None, Some(LifetimeKind::Gamma)) => ModelKind::Light,
            _ => ModelKind::Heavy,
        };
        let alpha = merge(pick(args.alpha, cfg, "alpha")?, law_alpha, "alpha")?;
        match (kind, alpha) {
            (ModelKind::Light, None) => return Err(CliError::Usage("the light model needs --alpha".into())),
            (ModelKind::Heavy, Some(_)) => {
                return Err(CliError::Usage("--alpha applies to the light model only".into()))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            lambda: required(pick(args.lambda, cfg, "lambda")?, "lambda")?,
            mu: required(merge(pick(args.mu, cfg, "mu")?, law_mu, "mu")?, "mu")?,
            c: required(pick(args.c, cfg, "c")?, "c")?,
            alpha,
            kappa: pick(args.vonmises_k, cfg, "vonmises-k")?.unwrap_or(0.0),
            seed: pick(args.seed, cfg, "seed")?,
            out: pick(args.out.clone(), cfg, "out")?,
            precision: pick(args.precision, cfg, "precision")?.unwrap_or(DEFAULT_PRECISION),
        })
    }

    pub fn lifetime(&self) -> Result<LifetimeSpec, CliError> {
        Ok(match (self.kind, self.alpha) {
            (ModelKind::Light, Some(alpha)) => LifetimeSpec::gamma(self.mu, alpha)?,
            _ => LifetimeSpec::exponential(self.mu)?,
        })
    }

    pub fn flight(&self) -> Result<FlightParams, CliError> {
        let law = if self.kappa == 0.0 { DirectionLaw::Uniform } else { DirectionLaw::VonMises { kappa: self.kappa } };
        Ok(FlightParams::new(self.c, self.lambda, law)?)
    }

    pub fn stationary(&self) -> Result<StationaryModel, CliError> {
        if self.kappa != 0.0 {
            return Err(CliError::Usage("stationary densities need the uniform direction law (--vonmises-k 0)".into()));
        }
        Ok(StationaryModel::new(self.flight()?, self.lifetime()?)?)
    }

    /// Comment line recording the command, version and every parameter.
    pub fn header(&self, command: &str, extra: &[(&str, String)]) -> String {
        let mut line = format!(
            "# flightfall {VERSION} command={command} model={} lambda={} mu={} c={} alpha={} vonmises_k={} precision={}",
            match self.kind {
                ModelKind::Heavy => "heavy",
                ModelKind::Light => "light",
            },
            self.lambda,
            self.mu,
            self.c,
            self.alpha.map_or("none".to_string(), |a| a.to_string()),
            self.kappa,
            self.precision,
        );
        for (key, value) in extra {
            line.push_str(&format!(" {key}={value}"));
        }
        line
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match commands::execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> ModelArgs {
        let mut all = vec!["flightfall", "concentration"];
        all.extend_from_slice(list);
        match Cli::try_parse_from(all).unwrap().command {
            Command::Concentration(a) => a.model,
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_override_config() {
        let cfg: ConfigFile = "lambda = 5\nmu = 2\nc = 3\nseed = 7".parse().unwrap();
        let m = ResolvedModel::resolve(&args(&["--lambda", "1"]), &cfg).unwrap();
        assert_eq!((m.lambda, m.mu, m.c, m.seed), (1.0, 2.0, 3.0, Some(7)));
        assert_eq!(m.kind, ModelKind::Heavy);
        assert_eq!(m.precision, DEFAULT_PRECISION);
    }

    #[test]
    fn model_selection() {
        let cfg = ConfigFile::default();
        let light = ResolvedModel::resolve(
            &args(&["--lifetime", "gamma", "--alpha", "5", "--lambda", "1", "--mu", "2", "--c", "2"]),
            &cfg,
        )
        .unwrap();
        assert_eq!(light.kind, ModelKind::Light);
        assert_eq!(light.lifetime().unwrap(), LifetimeSpec::gamma(2.0, 5.0).unwrap());
        let clash = args(&["--model", "heavy", "--lifetime", "gamma", "--lambda", "1", "--mu", "2", "--c", "2"]);
        assert!(ResolvedModel::resolve(&clash, &cfg).is_err());
        let missing = args(&["--model", "light", "--lambda", "1", "--mu", "2", "--c", "2"]);
        assert!(ResolvedModel::resolve(&missing, &cfg).is_err());
        let no_speed = args(&["--lambda", "1", "--mu", "2"]);
        assert!(matches!(ResolvedModel::resolve(&no_speed, &cfg), Err(CliError::Usage(_))));
    }

    #[test]
    fn full_lifetime_law() {
        let cfg: ConfigFile = "lifetime = gamma(mu=2, alpha=5)\nlambda = 1\nc = 2".parse().unwrap();
        let m = ResolvedModel::resolve(&args(&[]), &cfg).unwrap();
        assert_eq!(m.kind, ModelKind::Light);
        assert_eq!(m.lifetime().unwrap(), LifetimeSpec::gamma(2.0, 5.0).unwrap());
        let m = ResolvedModel::resolve(
            &args(&["--lifetime", "exp(mu=2)", "--lambda", "1", "--c", "3"]),
            &ConfigFile::default(),
        )
        .unwrap();
        assert_eq!(m.lifetime().unwrap(), LifetimeSpec::exponential(2.0).unwrap());
        let clash = args(&["--lifetime", "exp(mu=2)", "--mu", "3", "--lambda", "1", "--c", "3"]);
        assert!(ResolvedModel::resolve(&clash, &ConfigFile::default()).is_err());
        assert!("weibull(k=2)".parse::<LifetimeArg>().is_err());
    }

    #[test]
    fn negative_concentration_parses() {
        let m = ResolvedModel::resolve(
            &args(&["--lambda", "1", "--mu", "2", "--c", "3", "--vonmises-k", "-2"]),
            &ConfigFile::default(),
        )
        .unwrap();
        assert_eq!(m.kappa, -2.0);
        assert!(m.stationary().is_err());
        assert_eq!(m.flight().unwrap().law(), DirectionLaw::VonMises { kappa: -2.0 });
    }

    #[test]
    fn header_lists_parameters() {
        let m =
            ResolvedModel::resolve(&args(&["--lambda", "1", "--mu", "2", "--c", "3"]), &ConfigFile::default()).unwrap();
        let h = m.header("table", &[("r_step", "0.2".into())]);
        assert!(h.starts_with(&format!("# flightfall {VERSION} command=table model=heavy lambda=1 mu=2 c=3")));
        assert!(h.ends_with("r_step=0.2"));
    }
}

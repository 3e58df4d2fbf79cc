//! Flags, optional JSON config file and defaults, layered in that order.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qgame::equilibrium::{grid_intervals, DEFAULT_STEP, DEFAULT_TOL};
use qgame::game::{EntanglerKind, GameConfig, PayoffMode, DEFAULT_EPSILON};
use qgame::kraus::{HamiltonianParams, SeriesConfig, DEFAULT_TERM_TOL};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qgame", version, about = "Open-system quantum games: Kraus derivation, payoff surfaces and Nash equilibria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the Kraus operators of the system/bath coupling and export them as JSON.
    DeriveKraus(Flags),
    /// Compute the payoff weights for a base noise pair.
    Weights(Flags),
    /// Write the payoff surface with best-response residuals.
    Surface(Flags),
    /// Locate grid Nash equilibria and dominant strategies.
    Nash(Flags),
    /// Run the four reference scenarios and compare MAX points with their targets.
    ReproduceFigures(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum EntanglerArg {
    #[value(name = "J")]
    #[serde(rename = "J")]
    J,
    #[value(name = "JPD")]
    #[serde(rename = "JPD")]
    Jpd,
}

impl From<EntanglerArg> for EntanglerKind {
    fn from(e: EntanglerArg) -> Self {
        match e {
            EntanglerArg::J => EntanglerKind::Ewl,
            EntanglerArg::Jpd => EntanglerKind::PhaseDamping,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayoffModeArg {
    Info,
    Vn,
}

impl From<PayoffModeArg> for PayoffMode {
    fn from(m: PayoffModeArg) -> Self {
        match m {
            PayoffModeArg::Info => PayoffMode::JointInformation,
            PayoffModeArg::Vn => PayoffMode::VonNeumann,
        }
    }
}

/// Parses a real number, also accepting `pi`, `pi/N` and `N*pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("cannot parse {s:?} as a number or multiple of pi");
    if t == "pi" {
        return Ok(PI);
    }
    if let Some(den) = t.strip_prefix("pi/") {
        return den.parse::<f64>().map(|d| PI / d).map_err(|_| bad());
    }
    if let Some(num) = t.strip_suffix("*pi") {
        return num.parse::<f64>().map(|n| n * PI).map_err(|_| bad());
    }
    Err(bad())
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Base noise of player A, in [0, 1].
    #[arg(long = "gamma-a")]
    pub gamma_a: Option<f64>,
    /// Base noise of player B, in [0, 1].
    #[arg(long = "gamma-b")]
    pub gamma_b: Option<f64>,
    /// Entanglement angle in [0, pi/2]; accepts `pi/2` style values.
    #[arg(long, value_parser = parse_angle)]
    pub chi: Option<f64>,
    #[arg(long, value_enum)]
    pub entangler: Option<EntanglerArg>,
    /// Grid spacing over [0, 1]; must divide 1.
    #[arg(long)]
    pub step: Option<f64>,
    /// Residual tolerance for equilibrium tests.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Probability floor inside the logarithm.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "payoff-mode", value_enum)]
    pub payoff_mode: Option<PayoffModeArg>,
    /// Interaction time.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Coupling constant.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Number of bath Fock levels.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Series stop threshold on the next term's norm.
    #[arg(long = "term-tol")]
    pub term_tol: Option<f64>,
    /// Output file (directory for reproduce-figures). Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the above keys (snake_case).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Same keys as [`Flags`], read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gamma_a: Option<f64>,
    pub gamma_b: Option<f64>,
    pub chi: Option<f64>,
    pub entangler: Option<EntanglerArg>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub epsilon: Option<f64>,
    pub payoff_mode: Option<PayoffModeArg>,
    pub t: Option<f64>,
    pub xi: Option<f64>,
    pub levels: Option<usize>,
    pub term_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Fully resolved parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub game: GameConfig,
    pub step: f64,
    pub tol: f64,
    pub t: f64,
    pub xi: f64,
    pub levels: usize,
    pub term_tol: f64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let defaults = GameConfig::default();
        let game = GameConfig {
            chi: flags.chi.or(file.chi).unwrap_or(defaults.chi),
            entangler: flags
                .entangler
                .or(file.entangler)
                .map(Into::into)
                .unwrap_or(defaults.entangler),
            base_noise: (
                flags.gamma_a.or(file.gamma_a).unwrap_or(defaults.base_noise.0),
                flags.gamma_b.or(file.gamma_b).unwrap_or(defaults.base_noise.1),
            ),
            epsilon: flags.epsilon.or(file.epsilon).unwrap_or(DEFAULT_EPSILON),
            payoff_mode: flags
                .payoff_mode
                .or(file.payoff_mode)
                .map(Into::into)
                .unwrap_or(defaults.payoff_mode),
        };
        let cfg = Self {
            game,
            step: flags.step.or(file.step).unwrap_or(DEFAULT_STEP),
            tol: flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            t: flags.t.or(file.t).unwrap_or(0.0),
            xi: flags.xi.or(file.xi).unwrap_or(1.0),
            levels: flags.levels.or(file.levels).unwrap_or(2),
            term_tol: flags.term_tol.or(file.term_tol).unwrap_or(DEFAULT_TERM_TOL),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format),
        };
        Ok(cfg)
    }

    pub fn validate_game(&self) -> Result<(), CliError> {
        self.game.validate()?;
        grid_intervals(self.step)?;
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be >= 0, got {}", self.tol)));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianParams, CliError> {
        Ok(HamiltonianParams::new(self.xi, self.t)?)
    }

    pub fn series(&self) -> SeriesConfig {
        SeriesConfig::with_term_tol(self.term_tol)
    }
}

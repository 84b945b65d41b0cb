use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taubnut::GeomError;

#[derive(Debug, Parser)]
#[command(
    name = "taubnut",
    version,
    about = "Taub-NUT Killing fields and Einstein-Randers navigation checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ricci-flatness and non-flatness of the Taub-NUT metric g_a.
    VerifyRicciFlat(CommonArgs),
    /// Numerical Killing algebra of g_a among affine fields.
    ClassifyKilling {
        #[command(flatten)]
        common: CommonArgs,
        /// Classify the flat metric instead.
        #[arg(long)]
        flat: bool,
    },
    /// Einstein condition and flag-curvature non-constancy of a navigation Randers metric.
    VerifyEinstein {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = FieldKind::Vr)]
        field: FieldKind,
    },
    /// Closed-form wind norms against direct contraction.
    CrosscheckNorms(CommonArgs),
    /// Flag curvature over seeded flags, optionally as CSV.
    ScanFlagCurvature {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = FieldKind::Vr)]
        field: FieldKind,
        /// Scan a constant wind on flat space instead.
        #[arg(long)]
        flat: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    Vr,
    Us,
    Wmn,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Vr => "vr",
            FieldKind::Us => "us",
            FieldKind::Wmn => "wmn",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub n: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Sample count; each command has its own default.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Override a named threshold, e.g. `--tol ricci=1e-9`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=R", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
    /// CSV side file (flag-curvature scans).
    #[arg(long)]
    pub csv: Option<String>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=R, got `{s}`"))?;
    let v: f64 = value.parse().map_err(|_| format!("`{value}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("tolerance `{name}` must be finite"));
    }
    Ok((name.to_owned(), v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError(pub String);

impl From<GeomError> for ConfigError {
    fn from(e: GeomError) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    VerifyRicciFlat,
    ClassifyKilling,
    VerifyEinstein,
    CrosscheckNorms,
    ScanFlagCurvature,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::VerifyRicciFlat => "verify-ricci-flat",
            CommandKind::ClassifyKilling => "classify-killing",
            CommandKind::VerifyEinstein => "verify-einstein",
            CommandKind::CrosscheckNorms => "crosscheck-norms",
            CommandKind::ScanFlagCurvature => "scan-flag-curvature",
        }
    }

    fn default_samples(self) -> usize {
        match self {
            CommandKind::VerifyRicciFlat | CommandKind::CrosscheckNorms => 1000,
            CommandKind::ClassifyKilling | CommandKind::VerifyEinstein => 20,
            CommandKind::ScanFlagCurvature => 100,
        }
    }
}

/// Validated configuration of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kind: CommandKind,
    pub a: f64,
    pub m: f64,
    pub n: f64,
    pub r: f64,
    pub s: f64,
    pub seed: u64,
    pub samples: usize,
    pub field: Option<FieldKind>,
    pub flat: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<String>,
    pub csv: Option<String>,
}

impl RunConfig {
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

impl Command {
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let (kind, common, field, flat) = match self {
            Command::VerifyRicciFlat(c) => (CommandKind::VerifyRicciFlat, c, None, false),
            Command::ClassifyKilling { common, flat } => (CommandKind::ClassifyKilling, common, None, *flat),
            Command::VerifyEinstein { common, field } => (CommandKind::VerifyEinstein, common, Some(*field), false),
            Command::CrosscheckNorms(c) => (CommandKind::CrosscheckNorms, c, None, false),
            Command::ScanFlagCurvature { common, field, flat } => {
                (CommandKind::ScanFlagCurvature, common, (!flat).then_some(*field), *flat)
            }
        };
        for (name, v) in [
            ("a", common.a),
            ("m", common.m),
            ("n", common.n),
            ("r", common.r),
            ("s", common.s),
        ] {
            if !v.is_finite() {
                return Err(ConfigError(format!("--{name} must be finite")));
            }
        }
        if !flat && common.a <= 0.0 {
            return Err(ConfigError(format!(
                "--a must be > 0 for Taub-NUT commands, got {}",
                common.a
            )));
        }
        let samples = common.samples.unwrap_or(kind.default_samples());
        if samples == 0 {
            return Err(ConfigError("--samples must be at least 1".into()));
        }
        let mut tolerances = crate::commands::default_tolerances(kind, field, flat);
        for (name, v) in &common.tol {
            match tolerances.get_mut(name) {
                Some(slot) => *slot = *v,
                None => {
                    let known: Vec<&str> = tolerances.keys().map(String::as_str).collect();
                    return Err(ConfigError(format!(
                        "unknown tolerance `{name}` for {}; known: {}",
                        kind.name(),
                        known.join(", ")
                    )));
                }
            }
        }
        Ok(RunConfig {
            kind,
            a: common.a,
            m: common.m,
            n: common.n,
            r: common.r,
            s: common.s,
            seed: common.seed,
            samples,
            field,
            flat,
            tolerances,
            out: common.out.clone(),
            csv: common.csv.clone(),
        })
    }
}

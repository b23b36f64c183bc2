//! Experiment runner behind the `mimohop` binary: layered configuration,
//! figure presets and one runner per subcommand.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod presets;
pub mod run;

use std::fmt;
use std::io;

pub use config::{ExperimentConfig, Layer};
pub use run::RunOutput;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const NUMERIC: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => exit::CONFIG,
            Self::Numeric(_) | Self::Io(_) => exit::NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Numeric(m) => write!(f, "numeric failure: {m}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mimohop::Error> for CliError {
    fn from(e: mimohop::Error) -> Self {
        use mimohop::Error as E;
        match e {
            E::Eval(_) => Self::Numeric(e.to_string()),
            // a lone point outside the model's range is a parameter problem
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    LineCompare,
    RandCompare,
    PppSim,
    McValidate,
    Theorem,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::LineCompare => "line-compare",
            Self::RandCompare => "rand-compare",
            Self::PppSim => "ppp-sim",
            Self::McValidate => "mc-validate",
            Self::Theorem => "theorem",
        }
    }
}

/// Merges preset, file and flag layers (later wins) and checks the preset
/// belongs to `command`.
pub fn effective_config(
    command: Command,
    preset: Option<&str>,
    file: Option<&Layer>,
    flags: &Layer,
) -> Result<ExperimentConfig, CliError> {
    let preset_layer = match preset {
        Some(name) => {
            let p = presets::find(name)?;
            if p.command != command.name() {
                return Err(CliError::config(format!(
                    "preset '{name}' runs with '{}', not '{}'",
                    p.command,
                    command.name()
                )));
            }
            p.layer()
        }
        None => Layer::default(),
    };
    let empty = Layer::default();
    ExperimentConfig::resolve(&Layer::merge(&[
        &preset_layer,
        file.unwrap_or(&empty),
        flags,
    ]))
}

/// Runs `command` and prefixes the CSV with the `# key=value` echo.
pub fn execute(
    command: Command,
    preset: Option<&str>,
    cfg: &ExperimentConfig,
) -> Result<RunOutput, CliError> {
    let mut out = match command {
        Command::LineCompare => run::line_compare(cfg)?,
        Command::RandCompare => run::rand_compare(cfg)?,
        Command::PppSim => run::ppp_sim(cfg)?,
        Command::McValidate => run::mc_validate(cfg)?,
        Command::Theorem => run::theorem(cfg)?,
    };
    let mut head = format!("# command={}\n", command.name());
    if let Some(p) = preset {
        head.push_str(&format!("# preset={p}\n"));
    }
    for (k, v) in cfg.echo() {
        head.push_str(&format!("# {k}={v}\n"));
    }
    out.csv.insert_str(0, &head);
    Ok(out)
}

/// `name,command,description` lines for every preset.
pub fn preset_listing() -> String {
    let mut s = String::from("name,command,description\n");
    for p in presets::PRESETS {
        s.push_str(&format!("{},{},\"{}\"\n", p.name, p.command, p.description));
    }
    s
}

//! Command-line parsing.

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Colonization matrix of an influence matrix
    Colonize,
    /// Pure and mixed equilibria of a game
    Equilibria,
    /// Colonization and influence spaces of a two-by-two game
    Space,
    /// Labor equilibrium of a Landowner scenario
    Landowner,
    /// Potential power of one player over another
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "fgame", version, about = "Strategic games with influence networks")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Input JSON document
    input: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Artifact formats; repeat or comma-separate. Defaults to all.
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
    /// Profile label for `space` (UL, UR, DL or DR)
    #[arg(long)]
    profile: Option<String>,
    /// Source player (name or index) for `power`
    #[arg(long)]
    source: Option<String>,
    /// Target player (name or index) for `power`
    #[arg(long)]
    target: Option<String>,
    /// Raster side for `space`, samples per side of zero for `power`
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: PathBuf,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub resolution: usize,
    pub seed: u64,
    pub profile: Option<String>,
    pub source: Option<String>,
    pub target: Option<String>,
}

impl RunConfig {
    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown command\n{0}")]
    UnknownCommand(String),
    #[error("missing input\n{0}")]
    MissingInput(String),
    #[error("{0}")]
    BadFlag(String),
    /// `--help` or `--version`; not a failure.
    #[error("{0}")]
    Info(String),
}

pub const DEFAULT_SPACE_RESOLUTION: usize = 101;
pub const DEFAULT_POWER_RESOLUTION: usize = 100;

/// Parses `argv` without the program name.
pub fn parse_config<I, S>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let full = std::iter::once(std::ffi::OsString::from("fgame")).chain(argv.into_iter().map(Into::into));
    let args = Args::try_parse_from(full).map_err(|e| {
        let text = e.render().to_string();
        match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ConfigError::Info(text),
            ErrorKind::InvalidValue
                if e.get(clap::error::ContextKind::InvalidArg).map(|a| a.to_string()).as_deref()
                    == Some("<COMMAND>") =>
            {
                ConfigError::UnknownCommand(text)
            }
            ErrorKind::MissingRequiredArgument => ConfigError::MissingInput(text),
            _ => ConfigError::BadFlag(text),
        }
    })?;

    let resolution = args.resolution.unwrap_or(match args.command {
        Command::Power => DEFAULT_POWER_RESOLUTION,
        _ => DEFAULT_SPACE_RESOLUTION,
    });
    if resolution < 2 {
        return Err(ConfigError::BadFlag(format!("--resolution must be at least 2, got {resolution}")));
    }
    if args.command == Command::Power && (args.source.is_none() || args.target.is_none()) {
        return Err(ConfigError::BadFlag("power needs --source and --target".into()));
    }
    if args.profile.is_some() && args.command != Command::Space {
        return Err(ConfigError::BadFlag("--profile only applies to space".into()));
    }
    let mut formats = if args.format.is_empty() { vec![Format::Json, Format::Csv, Format::Svg] } else { args.format };
    formats.sort();
    formats.dedup();
    Ok(RunConfig {
        command: args.command,
        input_path: args.input,
        output_dir: args.out,
        formats,
        resolution,
        seed: args.seed,
        profile: args.profile,
        source: args.source,
        target: args.target,
    })
}

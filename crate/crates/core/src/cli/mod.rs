//! Batch front end: JSON job files in, JSON reports and CSV profiles out.
//!
//! ```text
//! diskop analyze --config job.json [--out report.json] [--csv profile.csv]
//! diskop profile --config job.json --csv profile.csv [--dn-level N]
//! diskop classify --symbol "log(1/(1-z))" --family bloch:1
//! diskop norm --space hardy:2 --function "1/(1-0.5*z)"
//! ```

mod config;
mod output;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::criteria::{classify_symbol, criterion_profile, CriteriaError, ProfileGrid, SymbolFamily, Tolerances};
use crate::expr::parse;
use crate::spaces::{space_norm, FunctionHandle, NormConfig, SpaceDescriptor};

pub use config::{JobConfig, OperatorSpec, OutputPaths, ValidatedJob};
pub use output::{emit_level_set_csv, emit_profile_csv, CSV_HEADER};
pub use report::{
    analyze_job, grid_fingerprint, run_analysis, DnReport, LittleCheck, NormEstimates,
    ProfileSummary, Report, ToolInfo, UpperEstimate,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: CriteriaError,
    },
    #[error("cannot write {}: {detail}", path.display())]
    Output { path: PathBuf, detail: String },
    #[error("cannot read {}: {detail}", path.display())]
    Input { path: PathBuf, detail: String },
}

#[derive(Debug, Parser)]
#[command(name = "diskop", version, about = "Operator diagnostics on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline: profile, verdicts, D_N, closed forms, kernel bounds.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Report path; defaults to the config's output.report, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Criterion profile as CSV only.
    Profile {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Keep only the samples of the level set D_N.
        #[arg(long)]
        dn_level: Option<f64>,
    },
    /// Membership of a symbol in a derivative class.
    Classify {
        #[arg(long)]
        symbol: String,
        /// bloch:<gamma>, logbloch, lipschitz, little-growth:<beta>,
        /// little-bloch:<weight> or constant.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 64)]
        rays: usize,
        #[arg(long, default_value_t = 40)]
        max_j: u32,
    },
    /// Norm of a function in a space.
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        function: String,
        /// Radii to add to the quadrature or sup grid.
        #[arg(long = "extra-radius")]
        extra_radii: Vec<f64>,
    },
}

fn read_config(path: &Path) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    JobConfig::from_json(&text)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output {
            path: path.to_path_buf(),
            detail: e.to_string(),
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output {
                path: PathBuf::from("<stdout>"),
                detail: e.to_string(),
            }),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

/// Executes one subcommand.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { config, out, csv } => {
            let job = read_config(&config)?;
            let (report, profile) = analyze_job(&job)?;
            if let Some(csv) = csv.as_ref().or(job.output.csv.as_ref()) {
                emit_profile_csv(&profile, csv)?;
            }
            write_text(out.as_ref().or(job.output.report.as_ref()).map(PathBuf::as_path), &report.to_json())
        }
        Command::Profile {
            config,
            csv,
            dn_level,
        } => {
            let job = read_config(&config)?;
            let v = job.validate()?;
            let profile = criterion_profile(&v.operator, &v.source, &v.target, job.grid, &job.tolerances)
                .map_err(|source| CliError::Stage {
                    stage: "profile",
                    source,
                })?;
            match dn_level {
                Some(n) => emit_level_set_csv(&profile, n, &csv)?,
                None => emit_profile_csv(&profile, &csv)?,
            };
            Ok(())
        }
        Command::Classify {
            symbol,
            family,
            rays,
            max_j,
        } => {
            if rays == 0 || !(1..=52).contains(&max_j) {
                return Err(CliError::Config("rays must be positive and max_j in 1..=52".into()));
            }
            let g = parse(&symbol).map_err(|e| CliError::Config(format!("symbol: {e}")))?;
            let family = SymbolFamily::from_name(&family).map_err(|e| CliError::Config(e.to_string()))?;
            let c = classify_symbol(&g, &family, ProfileGrid { rays, max_j }, &Tolerances::default())
                .map_err(|source| CliError::Stage {
                    stage: "classify",
                    source,
                })?;
            write_text(None, &to_json(&c))
        }
        Command::Norm {
            space,
            function,
            extra_radii,
        } => {
            let x = SpaceDescriptor::from_name(&space).map_err(|e| CliError::Config(e.to_string()))?;
            let f = FunctionHandle::parse(&function).map_err(|e| CliError::Config(format!("function: {e}")))?;
            let cfg = NormConfig {
                extra_radii,
                ..NormConfig::default()
            };
            let estimate = space_norm(&x, &f, &cfg).map_err(|e| CliError::Stage {
                stage: "norm",
                source: e.into(),
            })?;
            write_text(None, &to_json(&estimate))
        }
    }
}

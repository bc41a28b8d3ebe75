//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{self, AnalysisArgs, AttractorArgs, Format, DEFAULT_TOL};
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "mwlab", version, about = "Mauldin-Williams graph systems: attractors, structural conditions and K-theory")]
pub struct Cli {
    /// Add per-stage wall-clock timings to reports.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a spec file or bundled dataset.
    Validate { spec: String },
    /// Sample the invariant list and export it.
    Attractor {
        spec: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        png: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        px: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Merge points closer than a quarter of the error bound.
        #[arg(long)]
        dedup: bool,
    },
    /// Branch points, graph separation, open set condition and the
    /// simplicity hypotheses.
    Conditions {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// K-groups of the graph algebra of a spec or a vertex matrix.
    Ktheory {
        #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
        spec: Option<String>,
        /// Rows separated by `;`, entries by `,`, e.g. "3,1;1,3".
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Validation, attractor statistics, conditions and K-theory in one report.
    Report {
        spec: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Bundled example systems.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    List,
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Executes a parsed command line and returns its standard output.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Validate { spec } => Ok(commands::validate(&commands::load_spec(&spec)?.0)),
        Command::Attractor { spec, depth, png, px, csv, dedup } => {
            let budget = commands::point_budget()?;
            let (spec, _) = commands::load_spec(&spec)?;
            commands::attractor(&spec, &AttractorArgs { depth, csv, png, px, dedup }, budget)
        }
        Command::Conditions { spec, depth, tol, format } => analysis(&spec, depth, tol, format, false, cli.timings),
        Command::Report { spec, depth, tol, format } => analysis(&spec, depth, tol, format, true, cli.timings),
        Command::Ktheory { spec, matrix, format } => {
            let format = Format::from(format);
            match (matrix, spec) {
                (Some(m), _) => {
                    let k = commands::ktheory_matrix(&m)?;
                    Ok(match format {
                        Format::Text => k.to_text(),
                        Format::Json => serde_json::to_string_pretty(&k).expect("serialisable") + "\n",
                    })
                }
                (None, Some(s)) => {
                    let (spec, reference) = commands::load_spec(&s)?;
                    commands::ktheory_spec(&spec, reference.as_ref())
                }
                (None, None) => unreachable!("clap requires one of spec or --matrix"),
            }
        }
        Command::Examples { action: ExamplesAction::List } => Ok(commands::examples_list()),
        Command::Examples { action: ExamplesAction::Export { name, out } } => commands::examples_export(&name, out.as_deref()),
    }
}

fn analysis(spec: &str, depth: Option<usize>, tol: f64, format: FormatArg, with_attractor: bool, timings: bool) -> CliResult<String> {
    let budget = commands::point_budget()?;
    let (spec, reference) = commands::load_spec(spec)?;
    let report = commands::analyze(&spec, reference, &AnalysisArgs { depth, tol, with_attractor, timings }, budget)?;
    Ok(commands::render(&report, format.into()))
}

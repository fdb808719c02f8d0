//! Command-line front end for the defect classifier.
//!
//! [`run`] is the whole program minus process plumbing: it parses arguments,
//! dispatches, and returns the exit code with the bytes destined for standard
//! output and standard error.

pub mod commands;
pub mod render;
pub mod schema;
pub mod selftest;

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use commands::{Outcome, RetractArgs, DEFAULT_WINDOW, SELFTEST_WINDOW};
use schema::OutputFormat;
use selftest::Fixtures;

pub const TOOL: &str = "defects";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error: {message}")]
    Parse { message: String },
    #[error("unsupported input at `{field}`: {reason}")]
    Unsupported { field: String, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Unsupported { .. } => 3,
        }
    }

    /// Rewrites a spec-file field path for a command-line context.
    pub(crate) fn with_field_prefix(self, replacement: &str, prefix: &str) -> Self {
        match self {
            CliError::Unsupported { field, reason } => {
                let field = match field.strip_prefix(prefix) {
                    Some(rest) => format!("{replacement}{rest}"),
                    None => field,
                };
                CliError::Unsupported { field, reason }
            }
            other => other,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "Topological classification of defects in crystals")]
pub struct Cli {
    /// Report format; overrides `options.output` in a spec file.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,
    /// Half-width of the window used for oracle runs and infinite-set examples.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify defects (or textures) for a JSON system specification.
    Classify { spec: String },
    /// Conjugacy classes of Z^2 ⋊_M Z at a fixed disclination index n3.
    #[command(allow_negative_numbers = true)]
    Conjugacy {
        /// parallelogram, rectangle, square, hexagonal or custom
        lattice: String,
        n3: i64,
        /// Generator for a custom lattice, e.g. "[[0,-1],[1,0]]".
        #[arg(long)]
        matrix: Option<String>,
        /// Mark a custom lattice as having a reflection symmetry.
        #[arg(long)]
        reflection: bool,
    },
    /// Build a binary polyhedral group and enumerate its conjugacy classes.
    Spherical {
        /// cyclic, dihedral, tetrahedral, octahedral or icosahedral
        kind: String,
        n: Option<u32>,
    },
    /// Homotopy type of a manifold with defects removed.
    Retract {
        /// euclidean, sphere, cylinder, torus2d, flat-torus or annulus
        manifold: String,
        #[arg(long)]
        dim: Option<u32>,
        #[arg(long)]
        points: Option<u32>,
        /// Remove a circle (R^3 only).
        #[arg(long)]
        circle: bool,
        /// Number of parallel hyperplanes in an affine arrangement.
        #[arg(long)]
        hyperplanes: Option<u32>,
        /// Per-slab subspace counts, e.g. "[[1,0],[1,1]]".
        #[arg(long)]
        k: Option<String>,
    },
    /// Check the built-in table fixtures and oracle agreement.
    Selftest,
}

/// Exit code and captured output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn envelope(command: &str, outcome: &Outcome) -> Value {
    json!({
        "command": command,
        "input": outcome.input,
        "result": outcome.result,
        "provenance": {"tool": TOOL, "version": VERSION, "tables": outcome.tables},
    })
}

fn emit(command: &str, outcome: &Outcome, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(command, outcome)).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => format!("{}\n", outcome.text),
    }
}

fn failure(err: &CliError) -> Invocation {
    Invocation { code: err.exit_code(), stdout: String::new(), stderr: format!("error: {err}\n") }
}

/// Runs the tool with `fixtures` standing in for the built-in selftest data.
pub fn run_with_fixtures<I, T>(args: I, fixtures: &Fixtures) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Invocation { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Invocation { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let format = cli.output.unwrap_or(OutputFormat::Json);
    let result = match &cli.command {
        Command::Classify { spec } => classify_command(spec, &cli),
        Command::Conjugacy { lattice, n3, matrix, reflection } => {
            commands::conjugacy(lattice, *n3, matrix.as_deref(), *reflection, cli.window)
                .map(|o| ("conjugacy", o, format))
        }
        Command::Spherical { kind, n } => commands::spherical(kind, *n).map(|o| ("spherical", o, format)),
        Command::Retract { manifold, dim, points, circle, hyperplanes, k } => {
            let args = RetractArgs {
                manifold,
                dim: *dim,
                points: *points,
                circle: *circle,
                hyperplanes: *hyperplanes,
                counts: k.as_deref(),
            };
            commands::retract_space(&args).map(|o| ("retract", o, format))
        }
        Command::Selftest => {
            let window = cli.window.unwrap_or(SELFTEST_WINDOW);
            if window < 1 {
                return failure(&CliError::Unsupported {
                    field: "--window".into(),
                    reason: "must be at least 1".into(),
                });
            }
            let (outcome, failed) = commands::selftest(fixtures, window);
            let stdout = emit("selftest", &outcome, format);
            let stderr: String = failed.iter().map(|name| format!("selftest failure: {name}\n")).collect();
            return Invocation { code: if failed.is_empty() { 0 } else { 1 }, stdout, stderr };
        }
    };
    match result {
        Ok((command, outcome, format)) => {
            Invocation { code: 0, stdout: emit(command, &outcome, format), stderr: String::new() }
        }
        Err(e) => failure(&e),
    }
}

fn classify_command(path: &str, cli: &Cli) -> Result<(&'static str, Outcome, OutputFormat), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Parse { message: format!("{path}: cannot read: {e}") })?;
    let file = schema::parse_spec(path, &text)?;
    let window = cli.window.or(file.options.window).unwrap_or(DEFAULT_WINDOW);
    if window < 1 {
        return Err(CliError::Unsupported { field: "options.window".into(), reason: "must be at least 1".into() });
    }
    let format = cli.output.or(file.options.output).unwrap_or(OutputFormat::Json);
    commands::classify_file(&file, window).map(|o| ("classify", o, format))
}

pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_fixtures(args, &Fixtures::default())
}

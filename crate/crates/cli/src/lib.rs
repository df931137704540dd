//! Command-line front end: parse input documents, run a computation from
//! `lhl-core`, and emit a table or a JSON report.

pub mod commands;
pub mod error;
pub mod io;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use commands::{FiltrationKind, Output};
use error::CliError;
use lhl_core::localmodel::Source;

#[derive(Debug, Parser)]
#[command(name = "lhl", version, about = "Weighted log Hodge laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Holo,
    Log,
}

impl From<FlavorArg> for Source {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Holo => Source::Holomorphic,
            FlavorArg::Log => Source::Logarithmic,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cells and cohomology of the cone complex of intersection data.
    ConeComplex {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Positivity, convexity, and face compatibility of a weight function.
    ValidateWeights {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
    /// Cohomology of the weighted tropical cochain complex.
    TropCohomology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        /// Expected dims to print alongside, e.g. `1,1`.
        #[arg(long, value_delimiter = ',')]
        expected: Option<Vec<usize>>,
    },
    /// Spectral sequence of the weight-threshold filtration.
    TropSs {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        /// Increasing rationals; defaults to the distinct cell weights.
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<String>>,
    },
    /// Log Hodge numbers of a smooth complete fan.
    LogHodge {
        #[arg(long)]
        fan: PathBuf,
        /// `zero`, `weight` (with --weights), or comma-separated rationals.
        #[arg(long, default_value = "zero", allow_hyphen_values = true)]
        twist: String,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Sheaf cohomology of a torus-invariant divisor.
    DivisorCohomology {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        divisor: Vec<i64>,
    },
    /// Obstruction cone at a point, computed directly and assembled over supports.
    ObstructionStalk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[arg(long, value_enum, default_value_t = FlavorArg::Log)]
        flavor: FlavorArg,
    },
    /// Graded local cohomology of log forms with support on coordinate strata.
    LocalCohomology {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        window: i64,
        /// 1-based boundary coordinates, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
        /// Form degree.
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Jordan type, weight filtration, and stratum weight of a nilpotent operator.
    Monodromy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        center: i64,
    },
    /// Spectral sequence of a filtered cochain complex.
    SpectralSequence {
        #[arg(long = "in")]
        input: PathBuf,
        /// Override the filtration in the file.
        #[arg(long, value_enum)]
        filtration: Option<FiltrationKind>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ConeComplex { .. } => "cone-complex",
            Command::ValidateWeights { .. } => "validate-weights",
            Command::TropCohomology { .. } => "trop-cohomology",
            Command::TropSs { .. } => "trop-ss",
            Command::LogHodge { .. } => "log-hodge",
            Command::DivisorCohomology { .. } => "divisor-cohomology",
            Command::ObstructionStalk { .. } => "obstruction-stalk",
            Command::LocalCohomology { .. } => "local-cohomology",
            Command::Monodromy { .. } => "monodromy",
            Command::SpectralSequence { .. } => "spectral-sequence",
        }
    }

    pub fn execute(&self) -> Result<Output, CliError> {
        match self {
            Command::ConeComplex { input } => commands::cone_complex(input),
            Command::ValidateWeights { complex, weights } => commands::validate_weights(complex, weights),
            Command::TropCohomology {
                complex,
                weights,
                expected,
            } => commands::trop_cohomology(complex, weights, expected.as_deref()),
            Command::TropSs {
                complex,
                weights,
                thresholds,
            } => commands::trop_ss(complex, weights, thresholds.as_deref()),
            Command::LogHodge { fan, twist, weights } => commands::log_hodge(fan, twist, weights.as_deref()),
            Command::DivisorCohomology { fan, divisor } => commands::divisor_cohomology_cmd(fan, divisor),
            Command::ObstructionStalk { n, r, window, flavor } => {
                commands::obstruction_stalk_cmd(*n, *r, *window, (*flavor).into())
            }
            Command::LocalCohomology {
                n,
                r,
                window,
                subset,
                degree,
            } => commands::local_cohomology_cmd(*n, *r, *window, subset, *degree),
            Command::Monodromy { input, center } => commands::monodromy_cmd(input, *center),
            Command::SpectralSequence { input, filtration } => {
                commands::spectral_sequence_cmd(input, *filtration)
            }
        }
    }
}

#[derive(Serialize)]
struct InputDigest {
    name: String,
    sha256: String,
}

#[derive(Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    inputs: Vec<InputDigest>,
    options: BTreeMap<String, Value>,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    status: &'a str,
    provenance: Provenance,
    result: &'a Value,
}

/// Renders the report for `command` in `format`.
pub fn render(command: &str, output: &Output, format: Format) -> String {
    let status = if output.ok { "ok" } else { "fail" };
    match format {
        Format::Json => {
            let report = Report {
                command,
                status,
                provenance: Provenance {
                    tool: "lhl",
                    version: env!("CARGO_PKG_VERSION"),
                    inputs: output
                        .inputs
                        .iter()
                        .map(|(name, sha256)| InputDigest {
                            name: name.clone(),
                            sha256: sha256.clone(),
                        })
                        .collect(),
                    options: output.options.clone(),
                },
                result: &output.result,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => format!("{command}: {status}\n{}", output.table),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let output = match cli.command.execute() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = render(cli.command.name(), &output, cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = io::write_atomic(path, &text) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        }
        None => print!("{text}"),
    }
    if output.ok {
        0
    } else {
        eprintln!("validation failed; see the report");
        1
    }
}

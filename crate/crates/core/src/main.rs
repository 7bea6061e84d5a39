use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spring::harness;
use spring::lineage;
use spring::numdiff::compare;
use spring::ode::integrate;
use spring::output::{format_result, format_trajectory};
use spring::scenario::parse_scenario;
use spring::Tolerance;

#[derive(Parser)]
#[command(name = "spring")]
#[command(about = "Two-body spring simulator with a golden-file test harness")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario file and print the final state
    Run {
        /// Scenario file (JSON)
        input: PathBuf,

        /// Also write the sampled trajectory to this CSV file
        #[arg(long, value_name = "OUT.csv")]
        trajectory: Option<PathBuf>,

        /// Override the scenario's integration time step
        #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
        dt: Option<f64>,
    },

    /// Run every testcase in a directory against its reference output
    Test {
        /// Directory holding NAME.json / NAME.reference pairs
        dir: PathBuf,

        /// Absolute tolerance for numeric comparison
        #[arg(short = 'a', long, default_value_t = 0.0, value_name = "ABS", allow_negative_numbers = true)]
        absolute: f64,

        /// Relative tolerance for numeric comparison
        #[arg(short = 'r', long, default_value_t = 0.0, value_name = "REL", allow_negative_numbers = true)]
        relative: f64,
    },

    /// Overwrite reference files with current simulator output
    Bless {
        /// Directory holding the testcases
        dir: PathBuf,

        /// Specific testcases to bless (default: all)
        names: Vec<String>,
    },

    /// Emit the test-lineage similarity graph as DOT
    Graph {
        /// Directory holding the testcases
        dir: PathBuf,

        /// Where to write the DOT graph
        #[arg(short = 'o', long = "output", value_name = "GRAPH.dot")]
        output: PathBuf,

        /// Also write the full pairwise distance matrix as CSV
        #[arg(long, value_name = "OUT.csv")]
        matrix: Option<PathBuf>,
    },

    /// Compare two text files with numeric tolerances
    Numdiff {
        /// Absolute tolerance
        #[arg(short = 'a', long, default_value_t = 0.0, value_name = "ABS", allow_negative_numbers = true)]
        absolute: f64,

        /// Relative tolerance
        #[arg(short = 'r', long, default_value_t = 0.0, value_name = "REL", allow_negative_numbers = true)]
        relative: f64,

        /// Reference file
        reference: PathBuf,

        /// Candidate file
        candidate: PathBuf,
    },
}

const USAGE_ERROR: u8 = 2;

fn tolerance_from_flags(absolute: f64, relative: f64) -> Result<Tolerance, u8> {
    Tolerance::new(absolute, relative).map_err(|e| {
        eprintln!("error: {e}");
        USAGE_ERROR
    })
}

fn run(input: &Path, trajectory: Option<&Path>, dt: Option<f64>) -> Result<u8, u8> {
    let text = fs::read_to_string(input).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", input.display());
        USAGE_ERROR
    })?;
    let mut scenario = parse_scenario(&text).map_err(|e| {
        eprintln!("error: {}: {e}", input.display());
        USAGE_ERROR
    })?;
    if let Some(dt) = dt {
        scenario.time_step = dt;
        scenario.validate().map_err(|e| {
            eprintln!("error: --dt: {e}");
            USAGE_ERROR
        })?;
    }

    let result = integrate(&scenario).map_err(|e| {
        eprintln!("error: {}: {e}", input.display());
        1
    })?;
    if let Some(path) = trajectory {
        fs::write(path, format_trajectory(&result)).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            USAGE_ERROR
        })?;
    }
    print!("{}", format_result(&result.final_state()));
    Ok(0)
}

fn numdiff(reference: &Path, candidate: &Path, tolerance: &Tolerance) -> Result<u8, u8> {
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|e| {
            eprintln!("error: cannot read {}: {e}", path.display());
            USAGE_ERROR
        })
    };
    let report = compare(&read(reference)?, &read(candidate)?, tolerance);
    if report.is_equal() {
        Ok(0)
    } else {
        print!("{}", report.describe());
        Ok(1)
    }
}

fn graph(dir: &Path, output: &Path, matrix: Option<&Path>) -> Result<u8, u8> {
    let graph = lineage_or_usage_error(dir)?;
    let write = |path: &Path, text: String| {
        fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            USAGE_ERROR
        })
    };
    write(output, graph.to_dot())?;
    if let Some(path) = matrix {
        write(path, graph.matrix_csv())?;
    }
    Ok(0)
}

fn lineage_or_usage_error(dir: &Path) -> Result<lineage::LineageGraph, u8> {
    lineage::lineage_graph(dir).map_err(|e| {
        eprintln!("error: {e}");
        USAGE_ERROR
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            input,
            trajectory,
            dt,
        } => run(input, trajectory.as_deref(), *dt),
        Command::Test {
            dir,
            absolute,
            relative,
        } => tolerance_from_flags(*absolute, *relative).and_then(|tolerance| {
            harness::run_all(dir, &tolerance)
                .map(|(report, code)| {
                    print!("{report}");
                    code as u8
                })
                .map_err(|e| {
                    eprintln!("error: {e}");
                    USAGE_ERROR
                })
        }),
        Command::Bless { dir, names } => harness::bless(dir, names)
            .map(|(summary, code)| {
                print!("{summary}");
                code as u8
            })
            .map_err(|e| {
                eprintln!("error: {e}");
                USAGE_ERROR
            }),
        Command::Graph {
            dir,
            output,
            matrix,
        } => graph(dir, output, matrix.as_deref()),
        Command::Numdiff {
            absolute,
            relative,
            reference,
            candidate,
        } => tolerance_from_flags(*absolute, *relative)
            .and_then(|tolerance| numdiff(reference, candidate, &tolerance)),
    };

    match outcome {
        Ok(code) | Err(code) => ExitCode::from(code),
    }
}

//! `arfc`: Arf closures of parametrized algebroid curves from the command
//! line. Exit codes: 0 success, 1 input error, 2 computation error.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use arfc_core::bounds::bound_curve;
use arfc_core::parse::{curve_file_from_str, parse_curve_file};
use arfc_core::pipeline::{run_pipeline, PipelineOptions};
use arfc_core::render;
use arfc_core::tree::validate_tree;

#[derive(Parser)]
#[command(
    name = "arfc",
    version,
    about = "Arf closure of an algebroid curve from its parametrization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicity tree, ramification matrix and conductor.
    Tree(RunArgs),
    /// Full closure data: tree, small elements and presentation.
    Closure(RunArgs),
    /// Truncation bound report only.
    Bound(CommonArgs),
    /// Run the pipeline and verify the tree axioms and the Arf condition.
    Check(RunArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Curve file (JSON).
    file: std::path::PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Skip the bound computation and run on the untruncated input.
    #[arg(long)]
    no_truncate: bool,
    /// Cap on the number of blow-up levels.
    #[arg(long, default_value_t = arfc_core::lipman::DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Dump every blow-up record before the result.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Tree,
    Closure,
    Check,
}

struct CliError {
    code: u8,
    message: String,
}

fn input_error(e: impl std::fmt::Display) -> CliError {
    CliError { code: 1, message: e.to_string() }
}

fn computation_error(e: impl std::fmt::Display) -> CliError {
    CliError { code: 2, message: e.to_string() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(args) => run_bound(args),
        Command::Tree(args) => run_curve(args, Kind::Tree),
        Command::Closure(args) => run_curve(args, Kind::Closure),
        Command::Check(args) => run_curve(args, Kind::Check),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

/// Variable names are needed to print polynomials; read from the same file.
fn read_vars(path: &Path) -> Result<Vec<String>, CliError> {
    let src = std::fs::read_to_string(path).map_err(input_error)?;
    Ok(curve_file_from_str(&src).map_err(input_error)?.vars)
}

fn run_bound(args: CommonArgs) -> Result<(), CliError> {
    let p = parse_curve_file(&args.file).map_err(input_error)?;
    let report = bound_curve(&p).map_err(computation_error)?;
    match args.format {
        Format::Json => println!("{}", render::bound_json(&report)),
        Format::Text => print!("{}", render::bound_text(&report)),
        Format::Dot => return Err(input_error("the bound report has no dot representation")),
    }
    Ok(())
}

fn run_curve(args: RunArgs, kind: Kind) -> Result<(), CliError> {
    let vars = read_vars(&args.common.file)?;
    let p = parse_curve_file(&args.common.file).map_err(input_error)?;
    let opts = PipelineOptions { truncate: !args.no_truncate, max_steps: args.max_steps };
    let result = run_pipeline(&p, &opts).map_err(computation_error)?;
    if args.trace {
        print!("{}", render::trace_text(&result.sequence, &vars));
    }
    match kind {
        Kind::Check => {
            match validate_tree(&result.tree) {
                Ok(()) => println!("tree axioms: ok"),
                Err(msg) => return Err(computation_error(format!("tree axioms violated: {msg}"))),
            }
            println!("arf condition: {}", if result.arf_check { "ok" } else { "violated" });
            Ok(())
        }
        Kind::Tree | Kind::Closure => {
            match args.common.format {
                Format::Json => println!("{}", render::result_json(&result, &vars)),
                Format::Text => print!("{}", render::result_text(&result, &vars)),
                Format::Dot => {
                    if kind != Kind::Tree {
                        return Err(input_error(
                            "dot output is only available for the tree command",
                        ));
                    }
                    print!("{}", render::tree_dot(&result.tree, result.sequence.levels()));
                }
            }
            Ok(())
        }
    }
}

//! `linewatch` command-line entry point.

mod common;
mod dataset;
mod eval;
mod filters;
mod pipeline;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::Globals;

#[derive(Parser)]
#[command(name = "linewatch", version, about = "Power-line corridor inspection toolkit")]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotation conversion, tiling and splitting.
    #[command(subcommand)]
    Dataset(dataset::DatasetCmd),
    /// Directional filter bank tools.
    #[command(subcommand)]
    Filters(filters::FiltersCmd),
    /// Vegetation encroachment metric.
    #[command(subcommand)]
    Vegmetric(pipeline::VegmetricCmd),
    /// Threshold sweeps, ROC, severity levels and detection AP.
    #[command(subcommand)]
    Eval(eval::EvalCmd),
    /// End-to-end analysis with alert emission.
    #[command(subcommand)]
    Pipeline(pipeline::PipelineCmd),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(common::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    cli.globals.init_logging();
    let result = cli.globals.exec().and_then(|exec| match cli.command {
        Command::Dataset(c) => dataset::run(c, &cli.globals, exec),
        Command::Filters(c) => filters::run(c, &cli.globals, exec),
        Command::Vegmetric(c) => pipeline::run_vegmetric(c, &cli.globals, exec),
        Command::Eval(c) => eval::run(c, &cli.globals, exec),
        Command::Pipeline(c) => pipeline::run_pipeline_cmd(c, &cli.globals, exec),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("linewatch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

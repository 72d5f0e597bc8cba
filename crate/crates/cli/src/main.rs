use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use decide_cli::{
    cmd_decide, cmd_explain, cmd_export_aba, parse_criterion, parse_problem, CliError, Format,
};
use decision_core::Criterion;

/// Decision frameworks, their argumentative semantics, and explanations.
#[derive(Parser)]
#[command(name = "decide", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the decisions that satisfy a criterion, one per line.
    Decide {
        /// JSON problem file (kind: adf | pdf | dg | pdg).
        file: PathBuf,
        /// Decision criterion: sd, d, wd, or ps.
        #[arg(short, long)]
        criterion: String,
    },
    /// Explain why a decision does or does not satisfy a criterion.
    Explain {
        file: PathBuf,
        #[arg(short, long)]
        criterion: String,
        /// The decision to explain.
        #[arg(short, long)]
        decision: String,
        /// Output format: flat-json, dialogue, dot, or tree-json.
        #[arg(short, long, default_value = "dialogue")]
        format: String,
    },
    /// Print the assumption-based framework the problem compiles to.
    ExportAba {
        file: PathBuf,
        #[arg(short, long)]
        criterion: String,
    },
}

fn criterion_arg(name: &str) -> Result<Criterion, CliError> {
    parse_criterion(name)
        .ok_or_else(|| CliError::BadArgument(format!("unknown criterion `{name}`")))
}

fn run() -> Result<String, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Decide { file, criterion } => {
            cmd_decide(&parse_problem(file)?, criterion_arg(&criterion)?)
        }
        Command::Explain {
            file,
            criterion,
            decision,
            format,
        } => {
            let format = Format::parse(&format)
                .ok_or_else(|| CliError::BadArgument(format!("unknown format `{format}`")))?;
            cmd_explain(
                &parse_problem(file)?,
                criterion_arg(&criterion)?,
                &decision,
                format,
            )
        }
        Command::ExportAba { file, criterion } => {
            cmd_export_aba(&parse_problem(file)?, criterion_arg(&criterion)?)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("decide: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

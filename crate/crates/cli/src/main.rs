use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jetram::exec::{EXIT_ENGINE, EXIT_PARSE};
use jetram::{run_script, Flags};

#[derive(Parser)]
#[command(name = "jetram", version, about = "Jet schemes and ramification groups of finite actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a workspace script and print its report.
    Run {
        file: PathBuf,
        /// Emit the structured JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Treat violated hypotheses as errors (exit code 2).
        #[arg(long)]
        strict: bool,
        #[arg(long, value_name = "N")]
        max_group: Option<usize>,
        #[arg(long, value_name = "D")]
        max_degree: Option<u32>,
        #[arg(long, value_name = "N")]
        max_pairs: Option<usize>,
        /// Permute Gröbner inputs with this seed; results must not change.
        #[arg(long, value_name = "SEED", hide = true)]
        shuffle_seed: Option<u64>,
    },
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return exit(EXIT_PARSE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let Command::Run { file, json, strict, max_group, max_degree, max_pairs, shuffle_seed } = cli.command;
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return exit(EXIT_ENGINE);
        }
    };
    let flags = Flags { strict, max_group, max_degree, max_pairs, shuffle_seed };
    match run_script(&text, &flags) {
        Ok(report) => {
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            exit(report.exit_code())
        }
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            exit(EXIT_PARSE)
        }
    }
}

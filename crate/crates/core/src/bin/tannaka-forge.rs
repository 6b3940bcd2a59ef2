use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tannaka_forge::commands;
use tannaka_forge::module::DEFAULT_BUDGET;
use tannaka_forge::report::Report;
use tannaka_forge::Result;

#[derive(Parser)]
#[command(name = "tannaka-forge", version, about = "Exact Tannakian reconstruction over finite chain rings")]
struct Cli {
    /// Cap on enumerated candidates per search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Also write the report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coend coalgebra of a diagram, lifted comodules and the unit check.
    Coend { input: PathBuf },
    /// Counit map from the coend of a comodule family to a given coalgebra.
    Reconstruct { input: PathBuf },
    /// Finite checks of the recognition conditions.
    Recognize { input: PathBuf },
    /// Filtered F-module demos.
    Mf {
        #[command(subcommand)]
        command: MfCommand,
    },
    /// Built-in examples and seeded property checks.
    VerifySuite,
}

#[derive(Subcommand)]
enum MfCommand {
    /// Tate twist sums over W_n(F_{p^f}), e.g. `--objects 'M(0),M(1),M(0)+M(1)'`.
    Demo {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        objects: String,
    },
}

fn read(path: &PathBuf) -> std::result::Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(3)
    })
}

fn run(cli: &Cli) -> std::result::Result<Result<Report>, ExitCode> {
    let b = cli.budget;
    Ok(match &cli.command {
        Command::Coend { input } => commands::cmd_coend(&read(input)?, b),
        Command::Reconstruct { input } => commands::cmd_reconstruct(&read(input)?, b),
        Command::Recognize { input } => commands::cmd_recognize(&read(input)?, b),
        Command::Mf { command: MfCommand::Demo { p, n, f, objects } } => commands::cmd_mf_demo(*p, *n, *f, objects, b),
        Command::VerifySuite => commands::cmd_verify_suite(b),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::error_exit_code(&e) as u8);
        }
        Err(code) => return code,
    };
    print!("{}", report.render_text());
    if let Some(path) = &cli.json {
        let body = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

//! Runs the built-in suite and prints the report as JSON.

use tannaka_forge::commands;
use tannaka_forge::module::DEFAULT_BUDGET;

fn main() -> tannaka_forge::Result<()> {
    let report = commands::cmd_verify_suite(DEFAULT_BUDGET)?;
    for c in report.failures() {
        eprintln!("failed: {}", c.name);
    }
    println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
    std::process::exit(report.exit_code());
}

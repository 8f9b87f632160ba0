// Analyze a channel stored as a JSON document, as the `analyze` subcommand does.

use uqt::explorer::{analyze_file, AnalysisReport, InitialState};
use uqt::families::example_rank4;
use uqt::oracle::QuadratureSpec;
use uqt::Result;

pub fn run_example() -> Result<AnalysisReport> {
    let path = std::env::temp_dir().join(format!("uqt-example-rank4-{}.json", std::process::id()));
    std::fs::write(&path, example_rank4()?.to_json()?)?;
    let report = analyze_file(&path, &"bell1".parse::<InitialState>()?, &QuadratureSpec::default());
    std::fs::remove_file(&path)?;
    let report = report?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}

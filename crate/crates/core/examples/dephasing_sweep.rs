// Sweep the dephasing strength on a Bell pair and emit CSV.

use uqt::explorer::{run_sweep, Axis, InitialState, SweepSpec};
use uqt::families::FamilySpec;
use uqt::Result;

pub fn run_example() -> Result<String> {
    let spec = SweepSpec {
        family: FamilySpec::new("dephasing", &[]),
        axes: vec![Axis { param: "p".into(), start: 0.0, stop: 1.0, step: 0.05 }],
        initial_state: InitialState::Bell(1),
        outputs: Some(vec!["f_max".into(), "delta".into(), "useful".into(), "uqt".into(), "oracle_checked".into()]),
        max_rows: None,
        oracle_every: Some(5),
    };
    let result = run_sweep(&spec)?;
    assert_eq!(result.oracle_disagreements(), 0);
    result.to_csv_string()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}

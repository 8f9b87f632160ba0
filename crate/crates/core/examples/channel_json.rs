// Build a channel from Kraus operators, inspect its Choi state and round-trip it through JSON.

use uqt::channels::{validate, QubitChannel};
use uqt::linalg::ComplexMat;
use uqt::Result;

pub fn run_example() -> Result<String> {
    let g: f64 = 0.3;
    let damping = validate(vec![
        ComplexMat::real2([[1.0, 0.0], [0.0, (1.0 - g).sqrt()]]),
        ComplexMat::real2([[0.0, g.sqrt()], [0.0, 0.0]]),
    ])?;
    let report = damping.report();
    println!("unital: {}  choi rank: {}", report.unital, report.choi_rank);
    println!("choi spectrum: {:.4?}", report.choi_eigenvalues);
    println!("bob vector of the choi state: {:.4?}", report.choi_bob_vector);

    let text = damping.to_json()?;
    let back = QubitChannel::from_json(&text)?;
    assert_eq!(back, damping);

    // too weak to be trace preserving
    let bad = validate(vec![ComplexMat::identity(2).scale_re(0.9)]);
    println!("rejected: {}", bad.unwrap_err());
    Ok(text)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("{}", run_example()?);
    Ok(())
}

// Locate where usefulness and UQT switch on along one parameter.

use uqt::explorer::{find_threshold, InitialState, Predicate, ThresholdResult, DEFAULT_TOL};
use uqt::families::FamilySpec;
use uqt::Result;

pub fn run_example() -> Result<Vec<ThresholdResult>> {
    let bell = InitialState::Bell(1);
    let runs = [
        (FamilySpec::new("werner", &[]), "p", (0.3, 0.9), Predicate::Useful, bell.clone()),
        (FamilySpec::new("gadc", &[("N", 0.7)]), "gamma", (0.1, 1.0), Predicate::Useful, bell.clone()),
        (FamilySpec::new("depolarizing_nm", &[("alpha", 0.5)]), "p", (0.0, 0.5), Predicate::Uqt, bell),
        (
            FamilySpec::new("lambda_star_nu", &[]),
            "p1",
            (0.3, 0.6),
            Predicate::Uqt,
            InitialState::Matched("p1".into()),
        ),
    ];
    let mut out = Vec::new();
    for (family, param, bracket, predicate, initial) in runs {
        let r = find_threshold(&family, param, bracket, predicate, &initial, DEFAULT_TOL)?;
        println!("{:<16} {param:<6} {predicate:<8} {:.9}", family.family, r.critical_value);
        out.push(r);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}

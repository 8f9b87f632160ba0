// Every catalogued family at a sample point, applied to a Bell pair.

use std::collections::BTreeMap;

use uqt::families::{build, FamilySpec, CATALOG};
use uqt::states::bell_state;
use uqt::Result;

fn sample_point(id: &str) -> Vec<(&'static str, f64)> {
    match id {
        "pauli_mixture" => vec![("p0", 0.7), ("p1", 0.1), ("p2", 0.1), ("p3", 0.1)],
        "uqt_unital_for_pure" => vec![("c", 0.8), ("p0", 0.8)],
        "uqt_nonunital_rank4" => vec![("s1", 0.1), ("s2", 0.1), ("s3", 0.1), ("t", 0.5)],
        "uqt_nonunital_rank3" => vec![("theta", 1.0), ("phi", 2.0), ("t", 0.6)],
        "lambda_tilde_nu" => vec![("p1", 0.6), ("p2", 0.5)],
        "lambda_star_nu" => vec![("p1", 0.6)],
        "gadc" => vec![("gamma", 0.5), ("N", 0.7)],
        "unruh" => vec![("r", 0.5)],
        "depolarizing_nm" | "dephasing_nm" => vec![("alpha", 0.5), ("p", 0.2)],
        "adc_m" => vec![("gamma", 1.0), ("t", 0.7)],
        "pln_m" | "oun_m" => vec![("G", 1.0), ("t", 0.7)],
        "adc_nm" => vec![("R", 1.0), ("gamma", 0.5), ("omega0", 1.0), ("g", 1.0), ("t", 1.0)],
        "pln_nm" | "oun_nm" => vec![("G", 1.0), ("g", 1.0), ("t", 1.0)],
        "rtn_nm" => vec![("g", 1.0), ("omega", 2.0), ("t", 0.5)],
        "lambda_u4" => vec![("p", 0.7)],
        "identity" | "example_rank4" | "example_rank3_universal_only" => vec![],
        _ => vec![("p", 0.6)],
    }
}

pub fn run_example() -> Result<BTreeMap<&'static str, bool>> {
    let bell = bell_state(1)?;
    let mut verdicts = BTreeMap::new();
    for info in CATALOG {
        let ch = build(&FamilySpec::new(info.id, &sample_point(info.id)))?;
        let p = ch.apply_to_bob(&bell)?.profile();
        println!(
            "{:<30} rank {} F={:<20} delta={:<24} uqt={}",
            info.id,
            ch.report().choi_rank,
            format!("{:?}", p.f_max),
            format!("{:?}", p.delta),
            p.uqt
        );
        verdicts.insert(info.id, p.uqt);
    }
    Ok(verdicts)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}

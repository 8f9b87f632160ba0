// Non-unital channels that keep a Bell pair useful for universal teleportation.

use std::f64::consts::PI;

use uqt::families::{uqt_nonunital_rank3, uqt_nonunital_rank4, uqt_nonunital_rank4_closed_form};
use uqt::states::bell_state;
use uqt::Result;

pub fn run_example() -> Result<Vec<(usize, f64, f64)>> {
    let bell = bell_state(1)?;
    let mut rows = Vec::new();
    for t in [0.4, 0.6, 0.9] {
        let s = [0.3 * (1.0 - t), -0.2 * (1.0 - t), 0.5 * (1.0 - t)];
        let ch = uqt_nonunital_rank4(s, t)?;
        let p = ch.apply_to_bob(&bell)?.profile();
        println!("rank4 t={t}: F={:.6} delta={:.1e} unital={}", p.f_max.unwrap_or(f64::NAN), p.delta.unwrap_or(f64::NAN), ch.is_unital());
        rows.push((ch.report().choi_rank, p.f_max.unwrap_or(f64::NAN), p.delta.unwrap_or(f64::NAN)));

        let ch = uqt_nonunital_rank3(PI / 3.0, PI / 5.0, t)?;
        let p = ch.apply_to_bob(&bell)?.profile();
        println!("rank3 t={t}: F={:.6} delta={:.1e}", p.f_max.unwrap_or(f64::NAN), p.delta.unwrap_or(f64::NAN));
        rows.push((ch.report().choi_rank, p.f_max.unwrap_or(f64::NAN), p.delta.unwrap_or(f64::NAN)));
    }
    // on the s3 axis only the eigen-based construction is defined
    let axis = uqt_nonunital_rank4([0.0, 0.0, 0.2], 0.5)?;
    println!("axis point: {} Kraus operators; closed form: {:?}", axis.kraus().len(),
        uqt_nonunital_rank4_closed_form([0.0, 0.0, 0.2], 0.5).err().map(|e| e.to_string()));
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}

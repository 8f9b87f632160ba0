// Compare the closed-form fidelity and deviation with a simulated protocol.

use uqt::families::gadc;
use uqt::linalg::{c, ComplexMat};
use uqt::oracle::{canonicalize, optimal_moments, QuadratureSpec};
use uqt::states::{bell_state, pure_state};
use uqt::Result;

pub fn run_example() -> Result<f64> {
    let u1 = ComplexMat::from_rows2([[c(0.6, 0.0), c(0.0, 0.8)], [c(0.0, 0.8), c(0.6, 0.0)]]);
    let u2 = ComplexMat::from_rows2([[c(0.8, 0.6), c(0.0, 0.0)], [c(0.0, 0.0), c(0.8, -0.6)]]);
    let states = [
        ("pure a=0.9", pure_state(0.9)?),
        ("rotated pure a=0.7", pure_state(0.7)?.local_unitary(&u1, &u2)?),
        ("gadc bell", gadc(0.5, 0.7)?.apply_to_bob(&bell_state(1)?)?),
    ];
    let mut worst: f64 = 0.0;
    for (name, s) in states {
        let p = s.profile();
        let grid = optimal_moments(&s, &QuadratureSpec::default());
        let mc = optimal_moments(&s, &QuadratureSpec::monte_carlo(20_000, 5)?);
        let t = canonicalize(&s).state.hs().t;
        println!("{name}: canonical diag {:.4?}", [t[0][0], t[1][1], t[2][2]]);
        println!("  formula  F={:.9} delta={:.9}", p.f_max.unwrap_or(f64::NAN), p.delta.unwrap_or(f64::NAN));
        println!("  grid     F={:.9} delta={:.9}", grid.mean_f, grid.delta);
        println!("  mc       F={:.9} delta={:.9}", mc.mean_f, mc.delta);
        worst = worst.max((grid.mean_f - p.f_max.unwrap_or(f64::NAN)).abs());
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("largest gap {:.1e}", run_example()?);
    Ok(())
}

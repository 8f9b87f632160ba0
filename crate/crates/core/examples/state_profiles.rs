// Teleportation profiles of the standard resource states.

use uqt::states::{bell_state, pure_state, werner};
use uqt::Result;

pub fn run_example() -> Result<Vec<String>> {
    let mut lines = Vec::new();
    let states = [
        ("bell1", bell_state(1)?),
        ("bell3", bell_state(3)?),
        ("pure a=0.9", pure_state(0.9)?),
        ("werner p=0.8", werner(0.8)?),
        ("werner p=0.2", werner(0.2)?),
    ];
    for (name, s) in states {
        let p = s.profile();
        lines.push(format!(
            "{name:<14} C={:.4} |t|={:.4?} F={:?} delta={:?} uqt={}",
            s.concurrence(),
            p.abs_t,
            p.f_max,
            p.delta,
            p.uqt
        ));
    }
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for line in run_example()? {
        println!("{line}");
    }
    Ok(())
}

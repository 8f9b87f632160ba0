// Randomized search for non-unital channels that keep a weakly entangled state UQT.

use uqt::explorer::{search_uqt, SearchReport};
use uqt::Result;

pub fn run_example() -> Result<Vec<SearchReport>> {
    let mut reports = Vec::new();
    for c in [0.6, 0.45, 0.2] {
        let r = search_uqt(c, 2_000, 42)?;
        let best = r.frontier.last().map(|p| (p.delta, p.f_max));
        println!("C={c}: {} hits in {} samples, frontier size {}, top F point {best:?}", r.hit_count, r.evaluated, r.frontier.len());
        for hit in r.hits.iter().take(2) {
            println!("  hit from {} with F={:?}", hit.source, hit.profile.f_max);
        }
        reports.push(r);
    }
    Ok(reports)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}

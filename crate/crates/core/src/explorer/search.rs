use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{from_choi, random_choi, ChannelDoc, QubitChannel};
use crate::error::{Error, Result};
use crate::families::{gadc, lambda_star_nu, lambda_tilde_nu, lambda_tilde_p2_bound};
use crate::states::{pure_state_with_concurrence, TeleportProfile, TwoQubitState};

/// Hits kept verbatim in the report; the total is always counted.
const MAX_REPORTED_HITS: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    pub sample: usize,
    pub source: String,
    pub channel: ChannelDoc,
    pub profile: TeleportProfile,
}

/// Non-dominated point: no other sample has both smaller delta and larger f_max.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub sample: usize,
    pub source: String,
    pub delta: f64,
    pub f_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub concurrence: f64,
    pub budget: usize,
    pub seed: u64,
    pub evaluated: usize,
    pub hit_count: usize,
    pub hits: Vec<SearchHit>,
    pub frontier: Vec<FrontierPoint>,
}

struct Sample {
    source: String,
    channel: QubitChannel,
    profile: TeleportProfile,
}

fn draw(index: usize, seed: u64, c: f64, input: &TwoQubitState) -> Option<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index as u64);
    let (source, channel) = match index % 4 {
        0 | 1 => {
            let rank = 3 + index % 2;
            let choi = random_choi(&mut rng, rank).ok()?;
            let s = choi.hs().s;
            if s.iter().map(|x| x * x).sum::<f64>().sqrt() <= 1e-6 {
                return None;
            }
            (format!("random_choi_rank{rank}"), from_choi("random_choi", &choi).ok()?)
        }
        2 => {
            let p2 = rng.random_range(0.0..1.0) * lambda_tilde_p2_bound(c);
            ("lambda_tilde_nu".into(), lambda_tilde_nu(c, p2).ok()?)
        }
        _ => {
            let g: f64 = rng.random_range(0.0..1.0);
            let n: f64 = rng.random_range(0.0..1.0);
            ("gadc".into(), gadc(g, n).ok()?)
        }
    };
    let profile = channel.apply_to_bob(input).ok()?.profile();
    Some(Sample { source, channel, profile })
}

fn frontier(samples: &[(usize, &Sample)]) -> Vec<FrontierPoint> {
    let mut pts: Vec<FrontierPoint> = samples
        .iter()
        .filter_map(|(i, s)| {
            Some(FrontierPoint {
                sample: *i,
                source: s.source.clone(),
                delta: s.profile.delta?,
                f_max: s.profile.f_max?,
            })
        })
        .collect();
    pts.sort_by(|a, b| {
        a.delta.total_cmp(&b.delta).then(b.f_max.total_cmp(&a.f_max)).then(a.sample.cmp(&b.sample))
    });
    let mut best = f64::NEG_INFINITY;
    pts.retain(|p| {
        let keep = p.f_max > best;
        best = best.max(p.f_max);
        keep
    });
    pts
}

/// Look for non-unital channels that leave the pure state of concurrence `c`
/// UQT-useful. Sample 0 is the `lambda_star_nu` channel matched to `c`; the
/// rest cycle through random Choi states of rank 3 and 4, `lambda_tilde_nu`
/// and generalized amplitude damping, each drawn from `seed ^ index`.
pub fn search_uqt(c: f64, budget: usize, seed: u64) -> Result<SearchReport> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::out_of_range("concurrence", c, "(0, 1)"));
    }
    let input = pure_state_with_concurrence(c)?;
    let mut samples: Vec<(usize, Sample)> = Vec::with_capacity(budget);
    if budget > 0 {
        if let Ok(ch) = lambda_star_nu(c) {
            let profile = ch.apply_to_bob(&input)?.profile();
            samples.push((0, Sample { source: "lambda_star_nu".into(), channel: ch, profile }));
        }
    }
    let drawn: Vec<(usize, Sample)> = (1..budget)
        .into_par_iter()
        .filter_map(|i| draw(i, seed, c, &input).map(|s| (i, s)))
        .collect();
    samples.extend(drawn);

    let hit_list: Vec<&(usize, Sample)> = samples.iter().filter(|(_, s)| s.profile.uqt).collect();
    let hits = hit_list
        .iter()
        .take(MAX_REPORTED_HITS)
        .map(|(i, s)| SearchHit {
            sample: *i,
            source: s.source.clone(),
            channel: s.channel.to_doc(),
            profile: s.profile,
        })
        .collect();
    let refs: Vec<(usize, &Sample)> = samples.iter().map(|(i, s)| (*i, s)).collect();
    Ok(SearchReport {
        concurrence: c,
        budget,
        seed,
        evaluated: samples.len(),
        hit_count: hit_list.len(),
        hits,
        frontier: frontier(&refs),
    })
}

use serde::Serialize;

use super::{InitialState, Predicate};
use crate::error::{Error, Result};
use crate::families::{build, FamilySpec};

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub family: String,
    pub param: String,
    pub predicate: Predicate,
    pub critical_value: f64,
    pub bracket_width: f64,
    /// Final bracket; the predicate differs at its two ends.
    pub lo: f64,
    pub hi: f64,
    pub holds_below: bool,
}

fn holds(
    family: &FamilySpec,
    param: &str,
    x: f64,
    initial: &InitialState,
    predicate: Predicate,
) -> Result<bool> {
    let mut spec = family.clone();
    spec.params.insert(param.to_string(), x);
    let state = initial.evolve(&build(&spec)?)?;
    Ok(predicate.holds(&state.profile()))
}

/// Shrink `bracket` around the point where `test` changes value.
/// Returns the final `(lo, hi)` and the value of `test` at `lo`.
pub fn bisect(
    bracket: (f64, f64),
    tol: f64,
    name: &str,
    test: impl Fn(f64) -> Result<bool>,
) -> Result<(f64, f64, bool)> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::Spec(format!("need lo < hi and tol > 0, got [{lo}, {hi}] tol {tol}")));
    }
    let at_lo = test(lo)?;
    if test(hi)? == at_lo {
        return Err(Error::NoBracket { predicate: name.to_string(), value: at_lo, lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if test(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi, at_lo))
}

/// Bisect `param` over `bracket` for the point where `predicate` flips.
pub fn find_threshold(
    family: &FamilySpec,
    param: &str,
    bracket: (f64, f64),
    predicate: Predicate,
    initial: &InitialState,
    tol: f64,
) -> Result<ThresholdResult> {
    let (lo, hi, at_lo) = bisect(bracket, tol, predicate.name(), |x| {
        holds(family, param, x, initial, predicate)
    })?;
    Ok(ThresholdResult {
        family: family.family.clone(),
        param: param.to_string(),
        predicate,
        critical_value: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        lo,
        hi,
        holds_below: at_lo,
    })
}

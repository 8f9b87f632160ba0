//! Batch experiments over channel families: grid sweeps, threshold
//! bisection, randomized UQT search and single-channel analysis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::QubitChannel;
use crate::error::{Error, Result};
use crate::families::Params;
use crate::states::{bell_state, pure_state, pure_state_with_concurrence, TeleportProfile, TwoQubitState};

mod analyze;
mod search;
mod sweep;
mod threshold;

pub use analyze::{analyze, analyze_file, AnalysisReport, OracleCheck, ORACLE_TOL};
pub use search::{search_uqt, FrontierPoint, SearchHit, SearchReport};
pub use sweep::{run_sweep, Axis, SweepResult, SweepRow, SweepSpec, OUTPUT_FIELDS};
pub use threshold::{bisect, find_threshold, ThresholdResult, DEFAULT_TOL};

/// The two-qubit state that Bob's half of is sent through the channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitialState {
    /// `bell<k>`, k in 1..=4.
    Bell(usize),
    /// `pure:<a>`, the state `sqrt(a)|00> + sqrt(1-a)|11>`.
    Pure(f64),
    /// `concurrence:<c>`, the same family picked by concurrence.
    Concurrence(f64),
    /// `matched:<param>`, concurrence read from a channel parameter.
    Matched(String),
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Bell(1)
    }
}

impl InitialState {
    pub fn resolve(&self, params: &Params) -> Result<TwoQubitState> {
        match self {
            InitialState::Bell(k) => bell_state(*k),
            InitialState::Pure(a) => pure_state(*a),
            InitialState::Concurrence(c) => pure_state_with_concurrence(*c),
            InitialState::Matched(name) => {
                let c = params.get(name).ok_or_else(|| {
                    Error::Spec(format!("initial state is matched to `{name}`, which is not set"))
                })?;
                pure_state_with_concurrence(*c)
            }
        }
    }

    /// State after sending Bob's half through `channel`.
    pub fn evolve(&self, channel: &QubitChannel) -> Result<TwoQubitState> {
        channel.apply_to_bob(&self.resolve(channel.params())?)
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| {
            v.parse::<f64>().map_err(|_| Error::Spec(format!("bad number `{v}` in initial state `{s}`")))
        };
        if let Some(k) = s.strip_prefix("bell") {
            let k: usize = k.parse().map_err(|_| Error::Spec(format!("bad Bell index in `{s}`")))?;
            bell_state(k)?;
            return Ok(InitialState::Bell(k));
        }
        match s.split_once(':') {
            Some(("pure", v)) => Ok(InitialState::Pure(num(v)?)),
            Some(("concurrence", v)) => Ok(InitialState::Concurrence(num(v)?)),
            Some(("matched", v)) if !v.is_empty() => Ok(InitialState::Matched(v.to_string())),
            _ => Err(Error::Spec(format!(
                "initial state `{s}` is not one of bell1..bell4, pure:<a>, concurrence:<c>, matched:<param>"
            ))),
        }
    }
}

impl TryFrom<String> for InitialState {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<InitialState> for String {
    fn from(s: InitialState) -> String {
        s.to_string()
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Bell(k) => write!(f, "bell{k}"),
            InitialState::Pure(a) => write!(f, "pure:{a}"),
            InitialState::Concurrence(c) => write!(f, "concurrence:{c}"),
            InitialState::Matched(p) => write!(f, "matched:{p}"),
        }
    }
}

/// Verdict tested by threshold searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Useful,
    Universal,
    Uqt,
}

impl Predicate {
    pub fn holds(self, p: &TeleportProfile) -> bool {
        match self {
            Predicate::Useful => p.useful,
            Predicate::Universal => p.universal,
            Predicate::Uqt => p.uqt,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Useful => "useful",
            Predicate::Universal => "universal",
            Predicate::Uqt => "uqt",
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "useful" => Ok(Predicate::Useful),
            "universal" => Ok(Predicate::Universal),
            "uqt" => Ok(Predicate::Uqt),
            _ => Err(Error::Spec(format!("predicate `{s}` is not one of useful, universal, uqt"))),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

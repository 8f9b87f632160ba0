//! Parametric channel families: Pauli mixtures, the named examples, the
//! non-unital channels that keep a Bell pair UQT-useful, and a catalog of
//! physical noise models with their time-dependent damping laws.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::channels::{kraus_from_choi, validate_weighted, QubitChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, re, ComplexMat, C64, ZERO};
use crate::states::TwoQubitState;

pub type Params = BTreeMap<String, f64>;

/// A family name plus parameter values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub params: Params,
}

impl FamilySpec {
    pub fn new(family: &str, params: &[(&str, f64)]) -> Self {
        FamilySpec {
            family: family.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn build(&self) -> Result<QubitChannel> {
        build(self)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamDoc {
    pub name: &'static str,
    pub range: &'static str,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FamilyInfo {
    pub id: &'static str,
    pub params: &'static [ParamDoc],
    /// `Some(true)` for unital families, `None` when it depends on parameters.
    pub unital: Option<bool>,
    pub description: &'static str,
}

macro_rules! params {
    ($($n:literal : $r:literal),* $(,)?) => { &[$(ParamDoc { name: $n, range: $r }),*] };
}

/// Every family [`build`] understands.
pub const CATALOG: &[FamilyInfo] = &[
    FamilyInfo {
        id: "identity",
        params: params![],
        unital: Some(true),
        description: "noiseless channel",
    },
    FamilyInfo {
        id: "pauli_mixture",
        params: params!["p0": "[0,1]", "p1": "[0,1]", "p2": "[0,1]", "p3": "[0,1], sum = 1"],
        unital: Some(true),
        description: "sum p_i sigma_i rho sigma_i",
    },
    FamilyInfo {
        id: "werner",
        params: params!["p": "[0,1]"],
        unital: Some(true),
        description: "Pauli mixture (p, (1-p)/3, (1-p)/3, (1-p)/3); Bell input gives a Werner state",
    },
    FamilyInfo {
        id: "dephasing",
        params: params!["p": "[0,1]"],
        unital: Some(true),
        description: "K0 = sqrt(p) I, K1 = sqrt(1-p) Z",
    },
    FamilyInfo {
        id: "lambda_u4",
        params: params!["p": "[1/2,1) (CP only from 1/2)"],
        unital: Some(true),
        description: "Pauli weights (2/3, (3-p)/(6(2+p)) x2, (2p-1)/(3(2+p)))",
    },
    FamilyInfo {
        id: "uqt_unital_for_pure",
        params: params!["c": "(1/2,1)", "p0": "((1+2c)/(6c), 1/(2-c)]"],
        unital: Some(true),
        description: "Pauli mixture with p1 = p2 = (1+(1-2p0)c)/(4+2c) making |Psi_a> UQT",
    },
    FamilyInfo {
        id: "uqt_nonunital_rank4",
        params: params!["s1": "real", "s2": "real", "s3": "real, 0 < |s| < 1-t", "t": "(1/3,1)"],
        unital: Some(false),
        description: "rank-4 Choi, Bell input gives T = -t I with Bob vector s",
    },
    FamilyInfo {
        id: "uqt_nonunital_rank3",
        params: params!["theta": "[0,pi]", "phi": "[0,2pi]", "t": "(1/3,1)"],
        unital: Some(false),
        description: "rank-3 Choi, |s| = 1-t along (theta, phi)",
    },
    FamilyInfo {
        id: "example_rank3",
        params: params!["p": "(0,1)"],
        unital: Some(false),
        description: "K0 = sqrt(1-p)|0><0|, K1 = sqrt(1-p)|0><1|, K2 = sqrt(p) I",
    },
    FamilyInfo {
        id: "example_rank4",
        params: params![],
        unital: Some(false),
        description: "fixed rank-4 non-unital channel with F = 3/4, Delta = 0",
    },
    FamilyInfo {
        id: "example_rank3_universal_only",
        params: params![],
        unital: Some(false),
        description: "fixed rank-3 non-unital channel with F = 11/20, Delta = 0",
    },
    FamilyInfo {
        id: "lambda_tilde_nu",
        params: params!["p1": "(0,1)", "p2": "(0, (1+p1)/(1+p1+sqrt(1-p1^2)))"],
        unital: Some(false),
        description: "four-Kraus non-unital family matched to |Psi_a> with C = p1",
    },
    FamilyInfo {
        id: "lambda_star_nu",
        params: params!["p1": "(0,1)"],
        unital: Some(false),
        description: "GADC with N = 1 and gamma(p1), matched to |Psi_a> with C = p1",
    },
    FamilyInfo {
        id: "gadc",
        params: params!["gamma": "[0,1]", "N": "[0,1]"],
        unital: None,
        description: "generalized amplitude damping",
    },
    FamilyInfo {
        id: "depolarizing_m",
        params: params!["p": "[0,1]"],
        unital: Some(true),
        description: "Markovian depolarizing: M0 = sqrt(1-p) I, Mi = sqrt(p/3) sigma_i",
    },
    FamilyInfo {
        id: "dephasing_m",
        params: params!["p": "[0,1]"],
        unital: Some(true),
        description: "Markovian dephasing: M0 = sqrt(1-p) I, M1 = sqrt(p) Z",
    },
    FamilyInfo {
        id: "adc_m",
        params: params!["gamma": "> 0", "t": ">= 0", "p": "[0,1] (instead of gamma, t)"],
        unital: Some(false),
        description: "Markovian amplitude damping, p(t) = 1 - exp(-gamma t)",
    },
    FamilyInfo {
        id: "pln_m",
        params: params!["G": "> 0", "t": ">= 0", "p": "[0,1] (instead of G, t)"],
        unital: Some(true),
        description: "Markovian power-law noise, dephasing form with p(t) = exp(-G t)",
    },
    FamilyInfo {
        id: "oun_m",
        params: params!["G": "> 0", "t": ">= 0", "p": "[0,1] (instead of G, t)"],
        unital: Some(true),
        description: "Markovian Ornstein-Uhlenbeck noise, p(t) = exp(-G t / 2)",
    },
    FamilyInfo {
        id: "unruh",
        params: params!["r": "(0,pi/4]"],
        unital: Some(false),
        description: "Unruh channel: M0 = diag(cos r, 1), M1 = sin r |1><0|",
    },
    FamilyInfo {
        id: "depolarizing_nm",
        params: params!["alpha": "(0,1]", "p": "[0, min(1/2, 1/(3 alpha))]"],
        unital: Some(true),
        description: "non-Markovian depolarizing",
    },
    FamilyInfo {
        id: "dephasing_nm",
        params: params!["alpha": "(0,1]", "p": "[0,1/2]"],
        unital: Some(true),
        description: "non-Markovian dephasing",
    },
    FamilyInfo {
        id: "adc_nm",
        params: params![
            "R": "> 0", "gamma": "> 0", "omega0": "> 0", "g": "> 0", "t": "> 0",
            "p": "[0,1] (instead of the constants)",
        ],
        unital: Some(false),
        description: "non-Markovian amplitude damping, p(t) = 1 - exp(-2 R gamma / (omega0 coth(g omega0 t / 2) + 1))",
    },
    FamilyInfo {
        id: "pln_nm",
        params: params!["G": "> 0", "g": "> 0", "t": ">= 0", "p": "[0,1] (instead of G, g, t)"],
        unital: Some(true),
        description: "non-Markovian power-law noise, p(t) = exp(-G t (g t + 2) / (2 (g t + 1)^2))",
    },
    FamilyInfo {
        id: "oun_nm",
        params: params!["G": "> 0", "g": "> 0", "t": ">= 0", "p": "[0,1] (instead of G, g, t)"],
        unital: Some(true),
        description: "non-Markovian Ornstein-Uhlenbeck noise, p(t) = exp(-G ((exp(-g t) - 1)/g + t) / 2)",
    },
    FamilyInfo {
        id: "rtn_nm",
        params: params!["g": "> 0", "omega": "> 0", "t": ">= 0", "p": "[0,1] (instead of g, omega, t)"],
        unital: Some(true),
        description: "random telegraph noise, p(t) = exp(-g t) (cos(g omega t) + sin(g omega t) / omega)",
    },
];

pub fn family_info(id: &str) -> Result<&'static FamilyInfo> {
    CATALOG
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// Parameter reader that rejects unknown and missing names.
struct Reader<'a> {
    family: &'a str,
    params: &'a Params,
    seen: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn new(spec: &'a FamilySpec) -> Self {
        Reader { family: &spec.family, params: &spec.params, seen: Vec::new() }
    }

    fn opt(&mut self, name: &'static str) -> Option<f64> {
        self.seen.push(name);
        self.params.get(name).copied()
    }

    fn get(&mut self, name: &'static str) -> Result<f64> {
        self.opt(name).ok_or_else(|| Error::MissingParam {
            family: self.family.to_string(),
            param: name.to_string(),
        })
    }

    fn has(&self, name: &str) -> bool {
        self.params.contains_key(name)
    }

    fn finish(self) -> Result<()> {
        for key in self.params.keys() {
            if !self.seen.contains(&key.as_str()) {
                return Err(Error::UnknownParam {
                    family: self.family.to_string(),
                    param: key.clone(),
                });
            }
        }
        Ok(())
    }
}

fn closed(name: &str, v: f64, lo: f64, hi: f64) -> Result<f64> {
    if v.is_finite() && v >= lo && v <= hi {
        Ok(v)
    } else {
        Err(Error::out_of_range(name, v, &format!("[{lo}, {hi}]")))
    }
}

fn open(name: &str, v: f64, lo: f64, hi: f64) -> Result<f64> {
    if v.is_finite() && v > lo && v < hi {
        Ok(v)
    } else {
        Err(Error::out_of_range(name, v, &format!("({lo}, {hi})")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::out_of_range(name, v, "(0, inf)"))
    }
}

fn non_negative(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::out_of_range(name, v, "[0, inf)"))
    }
}

/// Clamp a damping law to `[0, 1]`, rejecting values further than 1e-12 out.
fn probability(law: &str, p: f64) -> Result<f64> {
    if !p.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::out_of_range(&format!("p(t) of {law}"), p, "[0, 1]"));
    }
    Ok(p.clamp(0.0, 1.0))
}

fn params_of(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn pauli(k: usize) -> ComplexMat {
    ComplexMat::pauli(k)
}

fn real(rows: [[f64; 2]; 2]) -> ComplexMat {
    ComplexMat::real2(rows)
}

/// `sum p_i sigma_i rho sigma_i`.
pub fn pauli_mixture(p: [f64; 4]) -> Result<QubitChannel> {
    for (i, v) in p.iter().enumerate() {
        if !(v.is_finite() && *v >= -1e-15) {
            return Err(Error::out_of_range(&format!("p{i}"), *v, "[0, 1]"));
        }
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::out_of_range("p0+p1+p2+p3", total, "{1}"));
    }
    let kraus = (0..4)
        .filter(|&k| p[k] > 0.0)
        .map(|k| pauli(k).scale_re(p[k].sqrt()))
        .collect();
    QubitChannel::new(
        "pauli_mixture",
        params_of(&[("p0", p[0]), ("p1", p[1]), ("p2", p[2]), ("p3", p[3])]),
        kraus,
    )
}

pub fn werner(p: f64) -> Result<QubitChannel> {
    closed("p", p, 0.0, 1.0)?;
    let q = (1.0 - p) / 3.0;
    Ok(pauli_mixture([p, q, q, q])?.with_name("werner", params_of(&[("p", p)])))
}

/// `K0 = sqrt(p) I`, `K1 = sqrt(1-p) Z`.
pub fn dephasing(p: f64) -> Result<QubitChannel> {
    closed("p", p, 0.0, 1.0)?;
    QubitChannel::new(
        "dephasing",
        params_of(&[("p", p)]),
        vec![pauli(0).scale_re(p.sqrt()), pauli(3).scale_re((1.0 - p).sqrt())],
    )
}

fn dephasing_form(name: &str, params: Params, p: f64) -> Result<QubitChannel> {
    QubitChannel::new(
        name,
        params,
        vec![pauli(0).scale_re((1.0 - p).sqrt()), pauli(3).scale_re(p.sqrt())],
    )
}

fn damping_form(name: &str, params: Params, p: f64) -> Result<QubitChannel> {
    QubitChannel::new(
        name,
        params,
        vec![real([[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]), real([[0.0, p.sqrt()], [0.0, 0.0]])],
    )
}

/// Pauli-weighted map whose `sigma_3` weight turns negative below `p = 1/2`.
pub fn lambda_u4(p: f64) -> Result<QubitChannel> {
    closed("p", p, 0.0, 1.0)?;
    let w12 = (3.0 - p) / (6.0 * (2.0 + p));
    let w3 = (2.0 * p - 1.0) / (3.0 * (2.0 + p));
    validate_weighted(
        "lambda_u4",
        params_of(&[("p", p)]),
        &[(2.0 / 3.0, pauli(0)), (w12, pauli(1)), (w12, pauli(2)), (w3, pauli(3))],
    )
}

/// Open lower end of the `p0` window for [`uqt_unital_for_pure`].
pub fn unital_window(cc: f64) -> (f64, f64) {
    ((1.0 + 2.0 * cc) / (6.0 * cc), 1.0 / (2.0 - cc))
}

pub fn uqt_unital_for_pure(cc: f64, p0: f64) -> Result<QubitChannel> {
    open("c", cc, 0.5, 1.0)?;
    let (lo, hi) = unital_window(cc);
    if !(p0 > lo && p0 <= hi) {
        return Err(Error::out_of_range("p0", p0, &format!("({lo}, {hi}]")));
    }
    let p1 = (1.0 + (1.0 - 2.0 * p0) * cc) / (4.0 + 2.0 * cc);
    let p3 = 1.0 - p0 - 2.0 * p1;
    let ch = pauli_mixture([p0, p1, p1, p3.max(0.0)])?;
    Ok(ch.with_name("uqt_unital_for_pure", params_of(&[("c", cc), ("p0", p0)])))
}

/// Canonical Choi matrix with `T = -t I` and Bob vector `s`.
pub fn uqt_choi_matrix(s: [f64; 3], t: f64) -> ComplexMat {
    let [s1, s2, s3] = s;
    let q = 0.25;
    ComplexMat::from_rows4([
        [re(q * (1.0 + s3 - t)), c(q * s1, -q * s2), ZERO, ZERO],
        [c(q * s1, q * s2), re(q * (1.0 - s3 + t)), re(-2.0 * q * t), ZERO],
        [ZERO, re(-2.0 * q * t), re(q * (1.0 + s3 + t)), c(q * s1, -q * s2)],
        [ZERO, ZERO, c(q * s1, q * s2), re(q * (1.0 - s3 - t))],
    ])
}

/// Closed-form spectrum `q0 > q1 > q2 > q3` of [`uqt_choi_matrix`].
pub fn uqt_choi_eigenvalues(s_norm: f64, t: f64) -> [f64; 4] {
    let root = (s_norm * s_norm + 4.0 * t * t).sqrt();
    [
        0.25 * (1.0 + t + root),
        0.25 * (1.0 + s_norm - t),
        0.25 * (1.0 + t - root),
        0.25 * (1.0 - s_norm - t),
    ]
}

fn uqt_channel_from_choi(name: &str, params: Params, s: [f64; 3], t: f64) -> Result<QubitChannel> {
    let choi = TwoQubitState::from_density(uqt_choi_matrix(s, t))?;
    QubitChannel::new(name, params, kraus_from_choi(choi.rho())?)
}

fn norm3(s: &[f64; 3]) -> f64 {
    s.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_rank4_region(s: [f64; 3], t: f64) -> Result<f64> {
    open("t", t, 1.0 / 3.0, 1.0)?;
    let n = norm3(&s);
    if !(n > 0.0 && n < 1.0 - t) {
        return Err(Error::out_of_range("|s|", n, &format!("(0, 1-t) = (0, {})", 1.0 - t)));
    }
    Ok(n)
}

/// Rank-4 non-unital channel whose Choi state has `T = -t I` and Bob vector `s`.
/// Built from the spectral decomposition of the target Choi state, so the
/// `s1 = s2 = 0` axis needs no special handling.
pub fn uqt_nonunital_rank4(s: [f64; 3], t: f64) -> Result<QubitChannel> {
    check_rank4_region(s, t)?;
    let params = params_of(&[("s1", s[0]), ("s2", s[1]), ("s3", s[2]), ("t", t)]);
    uqt_channel_from_choi("uqt_nonunital_rank4", params, s, t)
}

/// Bob vector of the rank-3 family: length `1 - t` along `(theta, phi)`.
pub fn rank3_vector(theta: f64, phi: f64, t: f64) -> [f64; 3] {
    let n = 1.0 - t;
    [n * theta.sin() * phi.cos(), n * theta.sin() * phi.sin(), n * theta.cos()]
}

pub fn uqt_nonunital_rank3(theta: f64, phi: f64, t: f64) -> Result<QubitChannel> {
    open("t", t, 1.0 / 3.0, 1.0)?;
    closed("theta", theta, 0.0, PI)?;
    closed("phi", phi, 0.0, 2.0 * PI)?;
    let params = params_of(&[("theta", theta), ("phi", phi), ("t", t)]);
    uqt_channel_from_choi("uqt_nonunital_rank3", params, rank3_vector(theta, phi, t), t)
}

fn cm(rows: [[C64; 2]; 2]) -> ComplexMat {
    ComplexMat::from_rows2(rows)
}

const I_: C64 = C64::new(0.0, 1.0);

/// Closed-form Kraus components for the rank-4 family. They divide by
/// `s1 +- i s2` and by `|s|^2 - s3^2 + 4 s3 t`, so points where either
/// vanishes are rejected.
pub fn uqt_nonunital_rank4_closed_form(s: [f64; 3], t: f64) -> Result<Vec<ComplexMat>> {
    let n = check_rank4_region(s, t)?;
    let [s1, s2, s3] = s;
    let n2 = n * n;
    let r = (n2 + 4.0 * t * t).sqrt();
    let den = n2 - s3 * s3 + 4.0 * s3 * t;
    if s1.hypot(s2) < 1e-9 || den.abs() < 1e-12 {
        return Err(Error::Spec("closed-form rank-4 Kraus operators are singular here".into()));
    }
    let k = 2.0 * SQRT_2;
    let x0 = (2.0 * t - s3 + r) / k * ((1.0 + t + r) / (n2 + 2.0 * t * (2.0 * t + r))).sqrt();
    let x1 = ((n2 - s3 * s3) * (1.0 + n - t)).sqrt() / n / k;
    let x2 = (s3 - 2.0 * t + r) / k * ((1.0 + t - r) / (n2 + 2.0 * t * (2.0 * t - r))).sqrt();
    let x3 = ((n2 - s3 * s3) * (1.0 - n - t)).sqrt() / n / k;
    let a = c(s2, s1); // i s1 + s2
    let b = c(-s2, s1); // i s1 - s2
    let sp = c(s1, s2);
    let sm = c(s1, -s2);
    Ok(vec![
        cm([
            [a / (s3 - 2.0 * t - r), I_ * (n2 + s3 * (s3 + 2.0 * r)) / den],
            [-I_, b / (-s3 + 2.0 * t + r)],
        ])
        .scale_re(x0),
        cm([[-I_ * (n + s3) / sp, -I_], [-I_, I_ * (s3 - n) / sm]]).scale_re(x1),
        cm([
            [a / (s3 - 2.0 * t + r), I_ * (n2 + s3 * (s3 - 2.0 * r)) / den],
            [-I_, -b / (s3 - 2.0 * t + r)],
        ])
        .scale_re(x2),
        cm([[a / (n + s3), -I_], [-I_, I_ * (n + s3) / sm]]).scale_re(x3),
    ])
}

/// Closed-form Kraus components for the rank-3 family; singular at
/// `sin theta = 0` and where `(1-t) sin^2 theta + 4 t cos theta = 0`.
pub fn uqt_nonunital_rank3_closed_form(theta: f64, phi: f64, t: f64) -> Result<Vec<ComplexMat>> {
    open("t", t, 1.0 / 3.0, 1.0)?;
    let (sn, cs) = theta.sin_cos();
    let u = 1.0 - t;
    let r = (u * u + 4.0 * t * t).sqrt();
    let den = u * u * sn * sn + 4.0 * t * u * cs;
    if sn.abs() < 1e-9 || den.abs() < 1e-12 {
        return Err(Error::Spec("closed-form rank-3 Kraus operators are singular here".into()));
    }
    let e = C64::from_polar(1.0, phi);
    let k = 2.0 * SQRT_2;
    let y0 = (2.0 * t - u * cs + r) / k * ((1.0 + t + r) / (u * u + 2.0 * t * (2.0 * t + r))).sqrt();
    let y1 = sn * u.sqrt() / 2.0;
    let y2 = (u * cs - 2.0 * t + r) / k * ((1.0 + t - r) / (u * u + 2.0 * t * (2.0 * t - r))).sqrt();
    let top0 = I_ * (u * u * (1.0 + cs * cs) + 2.0 * u * cs * r) / den;
    let top2 = I_ * (u * u * (1.0 + cs * cs) - 2.0 * u * cs * r) / den;
    Ok(vec![
        cm([
            [I_ * u * sn / e / (u * cs - 2.0 * t - r), top0],
            [-I_, I_ * u * sn * e / (-u * cs + 2.0 * t + r)],
        ])
        .scale_re(y0),
        cm([[-I_ * (1.0 + cs) / (e * sn), -I_], [-I_, -I_ * (1.0 - cs) * e / sn]]).scale_re(y1),
        cm([
            [I_ * u * sn / e / (u * cs - 2.0 * t + r), top2],
            [-I_, -I_ * u * sn * e / (u * cs - 2.0 * t + r)],
        ])
        .scale_re(y2),
    ])
}

pub fn example_rank3(p: f64) -> Result<QubitChannel> {
    open("p", p, 0.0, 1.0)?;
    let q = (1.0 - p).sqrt();
    QubitChannel::new(
        "example_rank3",
        params_of(&[("p", p)]),
        vec![real([[q, 0.0], [0.0, 0.0]]), real([[0.0, q], [0.0, 0.0]]), pauli(0).scale_re(p.sqrt())],
    )
}

pub fn example_rank4() -> Result<QubitChannel> {
    let r17 = 17f64.sqrt();
    let a = ((6.0 + r17) / (17.0 - r17)).sqrt();
    let b = ((6.0 - r17) / (17.0 + r17)).sqrt();
    let k = 2.0 * SQRT_2;
    QubitChannel::new(
        "example_rank4",
        Params::new(),
        vec![
            real([[0.0, 1.0], [(1.0 - r17) / 4.0, 0.0]]).scale_re(a),
            real([[3f64.sqrt() / k, 0.0], [0.0, 0.0]]),
            real([[0.0, 1.0], [(1.0 + r17) / 4.0, 0.0]]).scale_re(b),
            real([[0.0, 0.0], [0.0, 1.0 / k]]),
        ],
    )
}

pub fn example_rank3_universal_only() -> Result<QubitChannel> {
    let a = (5.0f64 / 17.0).sqrt();
    let d = 2.0 * 10f64.sqrt();
    let i = |x: f64| c(0.0, x);
    let (u, v) = ((5.0 + 7.0 * a).sqrt() / 20.0, (65.0 + 107.0 * a).sqrt() / 20.0);
    let (w, z) = ((5.0 - 7.0 * a).sqrt() / 20.0, (65.0 - 107.0 * a).sqrt() / 20.0);
    QubitChannel::new(
        "example_rank3_universal_only",
        Params::new(),
        vec![
            cm([[i(-3.0 * u), i(v)], [i(-v), i(3.0 * u)]]),
            cm([[i(-3.0 / d), i(-3.0 / d)], [i(-3.0 / d), i(-3.0 / d)]]),
            cm([[i(3.0 * w), i(z)], [i(-z), i(-3.0 * w)]]),
        ],
    )
}

/// Upper end of the open `p2` range of [`lambda_tilde_nu`].
pub fn lambda_tilde_p2_bound(p1: f64) -> f64 {
    (1.0 + p1) / (1.0 + p1 + (1.0 - p1 * p1).sqrt())
}

pub fn lambda_tilde_nu(p1: f64, p2: f64) -> Result<QubitChannel> {
    open("p1", p1, 0.0, 1.0)?;
    open("p2", p2, 0.0, lambda_tilde_p2_bound(p1))?;
    let ratio = ((1.0 - p1) / (1.0 + p1)).sqrt();
    let q = (1.0 + p1).sqrt() * (5.0 + 3.0 * p1).sqrt();
    let w = (1.0 - p1).sqrt() * (5.0 + 3.0 * p1).sqrt();
    let base = 1.0 + p1 + p2 + p1 * p2;
    let lower = |sign: f64| ((1.0 - p1).sqrt() + sign * (5.0 + 3.0 * p1).sqrt()) / (2.0 * (1.0 + p1).sqrt());
    QubitChannel::new(
        "lambda_tilde_nu",
        params_of(&[("p1", p1), ("p2", p2)]),
        vec![
            real([[0.0, 0.0], [0.0, 1.0]]).scale_re(((1.0 - p2 - p2 * ratio) / 2.0).sqrt()),
            real([[1.0, 0.0], [0.0, 0.0]]).scale_re(((1.0 - p2 + p2 * ratio) / 2.0).sqrt()),
            real([[0.0, 1.0], [lower(1.0), 0.0]]).scale_re(((base - p2 * q) / (5.0 + 3.0 * p1 + w)).sqrt()),
            real([[0.0, 1.0], [lower(-1.0), 0.0]]).scale_re(((base + p2 * q) / (5.0 + 3.0 * p1 - w)).sqrt()),
        ],
    )
}

/// Damping strength used by [`lambda_star_nu`].
pub fn lambda_star_gamma(p1: f64) -> f64 {
    let s = (1.0 - p1 * p1).sqrt();
    (1.0 + s - (3.0 * p1 * p1 - 2.0 + 2.0 * s).max(0.0).sqrt()) / (2.0 + 2.0 * s)
}

pub fn lambda_star_nu(p1: f64) -> Result<QubitChannel> {
    open("p1", p1, 0.0, 1.0)?;
    let g = lambda_star_gamma(p1);
    let ch = gadc(g, 1.0)?;
    Ok(ch.with_name("lambda_star_nu", params_of(&[("p1", p1)])))
}

pub fn gadc(gamma: f64, n: f64) -> Result<QubitChannel> {
    closed("gamma", gamma, 0.0, 1.0)?;
    closed("N", n, 0.0, 1.0)?;
    let (a, b) = ((1.0 - n).sqrt(), n.sqrt());
    let (d, s) = ((1.0 - gamma).sqrt(), gamma.sqrt());
    let kraus: Vec<ComplexMat> = [
        real([[1.0, 0.0], [0.0, d]]).scale_re(a),
        real([[0.0, s], [0.0, 0.0]]).scale_re(a),
        real([[d, 0.0], [0.0, 1.0]]).scale_re(b),
        real([[0.0, 0.0], [s, 0.0]]).scale_re(b),
    ]
    .into_iter()
    .filter(|k| k.max_abs() > 0.0)
    .collect();
    QubitChannel::new("gadc", params_of(&[("gamma", gamma), ("N", n)]), kraus)
}

pub fn depolarizing_m(p: f64) -> Result<QubitChannel> {
    closed("p", p, 0.0, 1.0)?;
    let q = (p / 3.0).sqrt();
    QubitChannel::new(
        "depolarizing_m",
        params_of(&[("p", p)]),
        vec![pauli(0).scale_re((1.0 - p).sqrt()), pauli(1).scale_re(q), pauli(2).scale_re(q), pauli(3).scale_re(q)],
    )
}

pub fn unruh(r: f64) -> Result<QubitChannel> {
    if !(r > 0.0 && r <= FRAC_PI_4) {
        return Err(Error::out_of_range("r", r, "(0, pi/4]"));
    }
    QubitChannel::new(
        "unruh",
        params_of(&[("r", r)]),
        vec![real([[r.cos(), 0.0], [0.0, 1.0]]), real([[0.0, 0.0], [r.sin(), 0.0]])],
    )
}

pub fn depolarizing_nm(alpha: f64, p: f64) -> Result<QubitChannel> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::out_of_range("alpha", alpha, "(0, 1]"));
    }
    closed("p", p, 0.0, 0.5f64.min(1.0 / (3.0 * alpha)))?;
    let w0 = ((1.0 - 3.0 * alpha * p) * (1.0 - p)).max(0.0);
    let wi = (1.0 + 3.0 * alpha * (1.0 - p)) * p / 3.0;
    QubitChannel::new(
        "depolarizing_nm",
        params_of(&[("alpha", alpha), ("p", p)]),
        vec![
            pauli(0).scale_re(w0.sqrt()),
            pauli(1).scale_re(wi.sqrt()),
            pauli(2).scale_re(wi.sqrt()),
            pauli(3).scale_re(wi.sqrt()),
        ],
    )
}

pub fn dephasing_nm(alpha: f64, p: f64) -> Result<QubitChannel> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::out_of_range("alpha", alpha, "(0, 1]"));
    }
    closed("p", p, 0.0, 0.5)?;
    QubitChannel::new(
        "dephasing_nm",
        params_of(&[("alpha", alpha), ("p", p)]),
        vec![
            pauli(0).scale_re(((1.0 - alpha * p) * (1.0 - p)).sqrt()),
            pauli(3).scale_re((p * (1.0 + alpha * (1.0 - p))).sqrt()),
        ],
    )
}

/// `1 - exp(-gamma t)`.
pub fn adc_m_law(gamma: f64, t: f64) -> f64 {
    1.0 - (-gamma * t).exp()
}

/// `exp(-G t)`.
pub fn pln_m_law(g_big: f64, t: f64) -> f64 {
    (-g_big * t).exp()
}

/// `exp(-G t / 2)`.
pub fn oun_m_law(g_big: f64, t: f64) -> f64 {
    (-g_big * t / 2.0).exp()
}

/// `1 - exp(-2 R gamma / (omega0 coth(g omega0 t / 2) + 1))`.
pub fn adc_nm_law(r: f64, gamma: f64, omega0: f64, g: f64, t: f64) -> f64 {
    let coth = 1.0 / (g * omega0 * t / 2.0).tanh();
    1.0 - (-2.0 * r * gamma / (omega0 * coth + 1.0)).exp()
}

/// `exp(-G t (g t + 2) / (2 (g t + 1)^2))`, decaying from 1 at `t = 0`.
pub fn pln_nm_law(g_big: f64, g: f64, t: f64) -> f64 {
    let gt = g * t;
    (-g_big * t * (gt + 2.0) / (2.0 * (gt + 1.0).powi(2))).exp()
}

/// `exp(-G ((exp(-g t) - 1)/g + t) / 2)`.
pub fn oun_nm_law(g_big: f64, g: f64, t: f64) -> f64 {
    (-g_big * (((-g * t).exp() - 1.0) / g + t) / 2.0).exp()
}

/// `exp(-g t) (cos(g omega t) + sin(g omega t) / omega)`.
pub fn rtn_nm_law(g: f64, omega: f64, t: f64) -> f64 {
    (-g * t).exp() * ((g * omega * t).cos() + (g * omega * t).sin() / omega)
}

/// Reads either a direct `p` or the constants of a time-dependent law.
fn time_law(
    r: &mut Reader,
    names: &[&'static str],
    law: impl Fn(&[f64]) -> f64,
    strictly_positive_t: bool,
) -> Result<(f64, Params)> {
    if r.has("p") {
        let p = closed("p", r.get("p")?, 0.0, 1.0)?;
        return Ok((p, params_of(&[("p", p)])));
    }
    let mut vals = Vec::with_capacity(names.len());
    for &name in names {
        let v = r.get(name)?;
        let v = if name == "t" && !strictly_positive_t {
            non_negative(name, v)?
        } else {
            positive(name, v)?
        };
        vals.push(v);
    }
    let p = probability(r.family, law(&vals))?;
    let params = names.iter().zip(&vals).map(|(k, v)| (k.to_string(), *v)).collect();
    Ok((p, params))
}

/// Construct any catalogued family from a name and parameter map.
pub fn build(spec: &FamilySpec) -> Result<QubitChannel> {
    let mut r = Reader::new(spec);
    let ch = match spec.family.as_str() {
        "identity" => QubitChannel::identity(),
        "pauli_mixture" => {
            pauli_mixture([r.get("p0")?, r.get("p1")?, r.get("p2")?, r.get("p3")?])?
        }
        "werner" => werner(r.get("p")?)?,
        "dephasing" => dephasing(r.get("p")?)?,
        "lambda_u4" => lambda_u4(r.get("p")?)?,
        "uqt_unital_for_pure" => uqt_unital_for_pure(r.get("c")?, r.get("p0")?)?,
        "uqt_nonunital_rank4" => {
            uqt_nonunital_rank4([r.get("s1")?, r.get("s2")?, r.get("s3")?], r.get("t")?)?
        }
        "uqt_nonunital_rank3" => {
            uqt_nonunital_rank3(r.get("theta")?, r.get("phi")?, r.get("t")?)?
        }
        "example_rank3" => example_rank3(r.get("p")?)?,
        "example_rank4" => example_rank4()?,
        "example_rank3_universal_only" => example_rank3_universal_only()?,
        "lambda_tilde_nu" => lambda_tilde_nu(r.get("p1")?, r.get("p2")?)?,
        "lambda_star_nu" => lambda_star_nu(r.get("p1")?)?,
        "gadc" => gadc(r.get("gamma")?, r.get("N")?)?,
        "depolarizing_m" => depolarizing_m(r.get("p")?)?,
        "dephasing_m" => {
            let p = closed("p", r.get("p")?, 0.0, 1.0)?;
            dephasing_form("dephasing_m", params_of(&[("p", p)]), p)?
        }
        "unruh" => unruh(r.get("r")?)?,
        "depolarizing_nm" => depolarizing_nm(r.get("alpha")?, r.get("p")?)?,
        "dephasing_nm" => dephasing_nm(r.get("alpha")?, r.get("p")?)?,
        "adc_m" => {
            let (p, params) = time_law(&mut r, &["gamma", "t"], |v| adc_m_law(v[0], v[1]), false)?;
            damping_form("adc_m", params, p)?
        }
        "pln_m" => {
            let (p, params) = time_law(&mut r, &["G", "t"], |v| pln_m_law(v[0], v[1]), false)?;
            dephasing_form("pln_m", params, p)?
        }
        "oun_m" => {
            let (p, params) = time_law(&mut r, &["G", "t"], |v| oun_m_law(v[0], v[1]), false)?;
            dephasing_form("oun_m", params, p)?
        }
        "adc_nm" => {
            let (p, params) = time_law(
                &mut r,
                &["R", "gamma", "omega0", "g", "t"],
                |v| adc_nm_law(v[0], v[1], v[2], v[3], v[4]),
                true,
            )?;
            damping_form("adc_nm", params, p)?
        }
        "pln_nm" => {
            let (p, params) =
                time_law(&mut r, &["G", "g", "t"], |v| pln_nm_law(v[0], v[1], v[2]), false)?;
            dephasing_form("pln_nm", params, p)?
        }
        "oun_nm" => {
            let (p, params) =
                time_law(&mut r, &["G", "g", "t"], |v| oun_nm_law(v[0], v[1], v[2]), false)?;
            dephasing_form("oun_nm", params, p)?
        }
        "rtn_nm" => {
            let (p, params) =
                time_law(&mut r, &["g", "omega", "t"], |v| rtn_nm_law(v[0], v[1], v[2]), false)?;
            dephasing_form("rtn_nm", params, p)?
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    r.finish()?;
    Ok(ch)
}

/// Same as [`build`]; the name used for the physical noise catalog.
pub fn noise_channel(spec: &FamilySpec) -> Result<QubitChannel> {
    build(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::EPS_CPTP;
    use crate::linalg::hermitian_eig;
    use crate::states::{bell_state, pure_state_with_concurrence};
    use proptest::prelude::*;

    fn orthogonal(kraus: &[ComplexMat]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in kraus.iter().enumerate() {
            for (j, b) in kraus.iter().enumerate() {
                if i != j {
                    worst = worst.max(a.hs_inner(b).norm());
                }
            }
        }
        worst
    }

    #[test]
    fn pauli_mixture_examples() {
        let id = pauli_mixture([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(id.action_distance(&QubitChannel::identity()) < 1e-15);
        let w = werner(0.8).unwrap().choi().profile();
        assert!(w.uqt && (w.f_max.unwrap() - 13.0 / 15.0).abs() < 1e-12);
        let bd = pauli_mixture([0.5, 0.3, 0.2, 0.0]).unwrap().choi().profile();
        assert!(!bd.uqt);
        assert!(pauli_mixture([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(pauli_mixture([0.5, 0.3, 0.1, 0.0]).is_err());
    }

    #[test]
    fn unital_for_pure_examples() {
        let ch = uqt_unital_for_pure(0.8, 0.8).unwrap();
        let out = ch.apply_to_bob(&pure_state_with_concurrence(0.8).unwrap()).unwrap();
        let prof = out.profile();
        let t = 0.8 * (4.0 * 0.8 - 1.0) / 2.8;
        for x in prof.abs_t {
            assert!((x - t).abs() < 1e-12);
        }
        assert!(prof.uqt);
        assert!(matches!(
            uqt_unital_for_pure(0.6, 2.2 / 3.6),
            Err(Error::OutOfRange { .. })
        ));
        let ch = uqt_unital_for_pure(0.51, 0.67).unwrap();
        let out = ch.apply_to_bob(&pure_state_with_concurrence(0.51).unwrap()).unwrap();
        assert!(out.profile().uqt);
    }

    #[test]
    fn rank4_examples() {
        let ch = uqt_nonunital_rank4([0.1, 0.1, 0.1], 0.5).unwrap();
        let prof = ch.choi().profile();
        assert!((prof.f_max.unwrap() - 0.75).abs() < 1e-12);
        assert!(prof.delta.unwrap() < 1e-12);
        assert!(prof.uqt);
        assert!(!ch.is_unital());
        assert_eq!(ch.report().choi_rank, 4);
        let n = 0.5 / 3f64.sqrt();
        assert!(uqt_nonunital_rank4([n, n, n], 0.5).is_err());
        assert!(uqt_nonunital_rank4([0.0, 0.0, 0.0], 0.5).is_err());
        // on-axis point where the closed forms divide by zero
        let axis = uqt_nonunital_rank4([0.0, 0.0, 0.2], 0.6).unwrap();
        assert!(axis.choi().profile().uqt);
        assert!(uqt_nonunital_rank4_closed_form([0.0, 0.0, 0.2], 0.6).is_err());
    }

    #[test]
    fn rank3_examples() {
        let ch = uqt_nonunital_rank3(PI / 3.0, PI / 4.0, 0.6).unwrap();
        let prof = ch.choi().profile();
        for x in prof.abs_t {
            assert!((x - 0.6).abs() < 1e-10);
        }
        assert!((prof.f_max.unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(ch.report().choi_rank, 3);
        let low = uqt_nonunital_rank3(1.0, 2.0, 0.34).unwrap().choi().profile();
        assert!((low.f_max.unwrap() - 0.67).abs() < 1e-12 && low.uqt);
        for theta in [0.0, PI, PI / 2.0] {
            let edge = uqt_nonunital_rank3(theta, 0.0, 0.5).unwrap();
            assert_eq!(edge.kraus().len(), 3);
            assert!(edge.choi().profile().uqt);
        }
        assert!(uqt_nonunital_rank3(1.0, 1.0, 1.0 / 3.0).is_err());
    }

    #[test]
    fn closed_form_spectrum_matches_eigensolver() {
        let s = [0.1, 0.0, 0.1];
        let e = hermitian_eig(&uqt_choi_matrix(s, 0.5)).unwrap();
        let want = uqt_choi_eigenvalues(norm3(&s), 0.5);
        for (got, w) in e.values.iter().zip(want) {
            assert!((got - w).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_kraus_sets() {
        let k4 = uqt_nonunital_rank4_closed_form([0.1, 0.1, 0.1], 0.5).unwrap();
        let ch = crate::channels::validate(k4.clone()).unwrap();
        assert!(ch.choi().rho().max_abs_diff(&uqt_choi_matrix([0.1, 0.1, 0.1], 0.5)) < 1e-12);
        assert!(orthogonal(&k4) < 1e-12);
        let k3 = uqt_nonunital_rank3_closed_form(PI / 3.0, PI / 4.0, 0.6).unwrap();
        let ch = crate::channels::validate(k3.clone()).unwrap();
        let s = rank3_vector(PI / 3.0, PI / 4.0, 0.6);
        assert!(ch.choi().rho().max_abs_diff(&uqt_choi_matrix(s, 0.6)) < 1e-12);
        assert!(orthogonal(&k3) < 1e-12);
    }

    #[test]
    fn named_examples() {
        let p = example_rank4().unwrap().choi().profile();
        assert!((p.f_max.unwrap() - 0.75).abs() < 1e-12 && p.delta.unwrap() < 1e-12);
        let p = example_rank3_universal_only().unwrap().choi().profile();
        assert!((p.f_max.unwrap() - 0.55).abs() < 1e-12 && p.delta.unwrap() < 1e-12 && !p.useful);
        let ch = example_rank3(0.6).unwrap();
        let p = ch.choi().profile();
        assert!((p.f_max.unwrap() - 0.8).abs() < 1e-12 && p.delta.unwrap() < 1e-12);
        assert!(!ch.is_unital());
        assert!(example_rank3_universal_only().unwrap().report().choi_rank == 3);
    }

    #[test]
    fn lambda_u4_positivity_edge() {
        assert!(matches!(lambda_u4(0.4), Err(Error::NotCompletelyPositive { .. })));
        let ch = lambda_u4(0.7).unwrap();
        let out = ch.apply_to_bob(&pure_state_with_concurrence(0.7).unwrap()).unwrap();
        let prof = out.profile();
        assert!((prof.f_max.unwrap() - (3.0 + 2.8) / (6.0 + 2.1)).abs() < 1e-12);
        assert!(prof.uqt);
    }

    #[test]
    fn gadc_unitality_and_rank() {
        assert!(gadc(0.5, 0.5).unwrap().is_unital());
        let ch = gadc(0.5, 0.7).unwrap();
        assert!(!ch.is_unital());
        assert_eq!(ch.report().choi_rank, 4);
        assert!(orthogonal(ch.kraus()) > 1e-3);
        let orth = ch.orthogonalize();
        assert_eq!(orth.kraus().len(), 4);
        assert!(orthogonal(orth.kraus()) < 1e-10);
        assert!(orth.action_distance(&ch) < 1e-10);
        let s = gadc(0.5, 1.0).unwrap().choi().hs().s;
        assert!(s[2].abs() > 0.1);
    }

    #[test]
    fn unruh_and_rtn() {
        let ch = unruh(FRAC_PI_4).unwrap();
        let cr = FRAC_PI_4.cos();
        assert!(ch.kraus()[0].max_abs_diff(&real([[cr, 0.0], [0.0, 1.0]])) < 1e-15);
        assert!(!ch.is_unital());
        assert!(unruh(1.0).is_err());

        let (g, w, t) = (0.3, 2.0, 1.5);
        let ch = build(&FamilySpec::new("rtn_nm", &[("g", g), ("omega", w), ("t", t)])).unwrap();
        let p = rtn_nm_law(g, w, t);
        assert!(ch.kraus()[1].max_abs_diff(&pauli(3).scale_re(p.sqrt())) < 1e-15);
        let bad = FamilySpec::new("rtn_nm", &[("g", 1.0), ("omega", 1.0), ("t", 2.5)]);
        assert!(matches!(build(&bad), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn lambda_star_by_setting_n_to_one() {
        let ch = lambda_star_nu(0.6).unwrap();
        let g = lambda_star_gamma(0.6);
        assert!(ch.kraus()[0].max_abs_diff(&real([[(1.0 - g).sqrt(), 0.0], [0.0, 1.0]])) < 1e-15);
        assert!(ch.kraus()[1].max_abs_diff(&real([[0.0, 0.0], [g.sqrt(), 0.0]])) < 1e-15);
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(build(&FamilySpec::new("nope", &[])), Err(Error::UnknownFamily(_))));
        assert!(matches!(build(&FamilySpec::new("gadc", &[("gamma", 0.2)])), Err(Error::MissingParam { .. })));
        assert!(matches!(
            build(&FamilySpec::new("dephasing", &[("p", 0.2), ("q", 1.0)])),
            Err(Error::UnknownParam { .. })
        ));
        assert!(matches!(build(&FamilySpec::new("gadc", &[("gamma", 1.2), ("N", 0.1)])), Err(Error::OutOfRange { .. })));
        for f in CATALOG {
            assert!(family_info(f.id).is_ok());
        }
    }

    #[test]
    fn dephasing_bell_law() {
        for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let prof = dephasing(p).unwrap().apply_to_bob(&bell_state(1).unwrap()).unwrap().profile();
            let want = if p >= 0.5 { (2.0 * p + 1.0) / 3.0 } else { 1.0 - 2.0 * p / 3.0 };
            assert!((prof.f_max.unwrap() - want).abs() < 1e-12, "p = {p}");
        }
    }

    fn uniform_ball(x: [f64; 3], radius: f64) -> [f64; 3] {
        let n = norm3(&x).max(1e-12);
        let r = radius * (n / 3f64.sqrt()).min(1.0);
        x.map(|v| v / n * r)
    }

    proptest! {
        #[test]
        fn rank4_family_sound(x in prop::array::uniform3(-1.0f64..1.0), t in 0.34f64..0.99) {
            let s = uniform_ball(x, (1.0 - t) * 0.999);
            prop_assume!(norm3(&s) > 1e-6);
            let ch = uqt_nonunital_rank4(s, t).unwrap();
            let prof = ch.choi().profile();
            for v in prof.abs_t { prop_assert!((v - t).abs() < 1e-10); }
            prop_assert!(prof.delta.unwrap() < 1e-9);
            prop_assert!((prof.f_max.unwrap() - (1.0 + t) / 2.0).abs() < 1e-12);
            prop_assert_eq!(ch.report().choi_rank, 4);
            prop_assert!(orthogonal(ch.kraus()) < 1e-10);
            let q = uqt_choi_eigenvalues(norm3(&s), t);
            prop_assert!(q[0] > q[1] && q[1] > q[2] && q[2] > q[3]);
        }

        #[test]
        fn closed_form_rank4_matches_eigen_route(x in prop::array::uniform3(-1.0f64..1.0), t in 0.34f64..0.99) {
            let s = uniform_ball(x, (1.0 - t) * 0.999);
            prop_assume!(s[0].hypot(s[1]) > 1e-3);
            if let Ok(k) = uqt_nonunital_rank4_closed_form(s, t) {
                let closed = crate::channels::validate(k).unwrap();
                let built = uqt_nonunital_rank4(s, t).unwrap();
                prop_assert!(closed.choi().rho().max_abs_diff(built.choi().rho()) < 1e-9);
            }
        }

        #[test]
        fn closed_form_rank3_matches_eigen_route(theta in 0.05f64..3.09, phi in 0.0f64..std::f64::consts::TAU, t in 0.34f64..0.99) {
            if let Ok(k) = uqt_nonunital_rank3_closed_form(theta, phi, t) {
                let closed = crate::channels::validate(k).unwrap();
                let built = uqt_nonunital_rank3(theta, phi, t).unwrap();
                prop_assert!(closed.choi().rho().max_abs_diff(built.choi().rho()) < 1e-9);
            }
        }

        #[test]
        fn lambda_tilde_matched_delta_zero(p1 in 0.01f64..0.99, frac in 0.01f64..0.99) {
            let p2 = frac * lambda_tilde_p2_bound(p1);
            let ch = lambda_tilde_nu(p1, p2).unwrap();
            prop_assert!(!ch.is_unital());
            let out = ch.apply_to_bob(&pure_state_with_concurrence(p1).unwrap()).unwrap();
            let prof = out.profile();
            prop_assert!(prof.delta.unwrap() < 1e-9);
            prop_assert!((prof.f_max.unwrap() - (1.0 + p2 * p1) / 2.0).abs() < 1e-12);
        }

        #[test]
        fn catalog_draws_validate(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let u = |rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64| rng.random_range(lo..hi);
            let alpha = u(&mut rng, 0.01, 1.0);
            let specs = vec![
                FamilySpec::new("depolarizing_m", &[("p", u(&mut rng, 0.0, 1.0))]),
                FamilySpec::new("dephasing_m", &[("p", u(&mut rng, 0.0, 1.0))]),
                FamilySpec::new("adc_m", &[("gamma", u(&mut rng, 0.01, 5.0)), ("t", u(&mut rng, 0.0, 5.0))]),
                FamilySpec::new("pln_m", &[("G", u(&mut rng, 0.01, 5.0)), ("t", u(&mut rng, 0.0, 5.0))]),
                FamilySpec::new("oun_m", &[("G", u(&mut rng, 0.01, 5.0)), ("t", u(&mut rng, 0.0, 5.0))]),
                FamilySpec::new("unruh", &[("r", u(&mut rng, 0.01, FRAC_PI_4))]),
                FamilySpec::new("depolarizing_nm", &[("alpha", alpha), ("p", u(&mut rng, 0.0, 0.5f64.min(1.0 / (3.0 * alpha))))]),
                FamilySpec::new("dephasing_nm", &[("alpha", alpha), ("p", u(&mut rng, 0.0, 0.5))]),
                FamilySpec::new("adc_nm", &[("R", u(&mut rng, 0.1, 2.0)), ("gamma", u(&mut rng, 0.1, 2.0)), ("omega0", u(&mut rng, 0.1, 2.0)), ("g", u(&mut rng, 0.1, 2.0)), ("t", u(&mut rng, 0.01, 5.0))]),
                FamilySpec::new("pln_nm", &[("G", u(&mut rng, 0.01, 5.0)), ("g", u(&mut rng, 0.01, 5.0)), ("t", u(&mut rng, 0.0, 5.0))]),
                FamilySpec::new("oun_nm", &[("G", u(&mut rng, 0.01, 5.0)), ("g", u(&mut rng, 0.01, 5.0)), ("t", u(&mut rng, 0.0, 5.0))]),
                FamilySpec::new("gadc", &[("gamma", u(&mut rng, 0.01, 1.0)), ("N", u(&mut rng, 0.0, 1.0))]),
                FamilySpec::new("example_rank3", &[("p", u(&mut rng, 0.01, 0.99))]),
            ];
            for spec in specs {
                let ch = build(&spec).unwrap();
                let rep = ch.report();
                prop_assert!(rep.trace_preserving_residual <= EPS_CPTP);
                if let Some(unital) = family_info(&spec.family).unwrap().unital {
                    prop_assert_eq!(rep.unital, unital, "{}", spec.family);
                }
            }
            let p: Vec<f64> = (0..4).map(|_| u(&mut rng, 0.01, 1.0)).collect();
            let total: f64 = p.iter().sum();
            let ch = pauli_mixture([p[0] / total, p[1] / total, p[2] / total, 1.0 - (p[0] + p[1] + p[2]) / total]).unwrap();
            prop_assert_eq!(ch.report().choi_rank, 4);
            prop_assert_eq!(example_rank3(u(&mut rng, 0.01, 0.99)).unwrap().report().choi_rank, 3);
        }
    }
}

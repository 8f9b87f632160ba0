//! Independent numerical route to the teleportation figures of merit:
//! explicit Bell-measurement simulation, quadrature over the Bloch sphere,
//! and local-unitary canonicalization of the correlation matrix.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, det3, matmul3, transpose3, ComplexMat, Real3, C64};
use crate::states::{bell_vector, TwoQubitState};

/// Default Gauss-Legendre order in `cos theta`.
pub const DEFAULT_N_THETA: usize = 64;
/// Default number of uniform nodes in `phi`.
pub const DEFAULT_N_PHI: usize = 64;

/// Integration rule over the normalized Haar measure on pure qubit inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureSpec {
    Grid { n_theta: usize, n_phi: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::Grid { n_theta: DEFAULT_N_THETA, n_phi: DEFAULT_N_PHI }
    }
}

impl QuadratureSpec {
    pub fn grid(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 4 {
            return Err(Error::Spec(format!(
                "quadrature needs n_theta >= 2 and n_phi >= 4, got {n_theta} x {n_phi}"
            )));
        }
        Ok(QuadratureSpec::Grid { n_theta, n_phi })
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Spec("Monte Carlo quadrature needs at least one sample".into()));
        }
        Ok(QuadratureSpec::MonteCarlo { samples, seed })
    }

    /// `(theta, phi, weight)` triples; weights sum to one.
    pub fn nodes(&self) -> Vec<(f64, f64, f64)> {
        match *self {
            QuadratureSpec::Grid { n_theta, n_phi } => {
                let n_theta = NonZeroUsize::new(n_theta.max(2)).expect("nonzero");
                let n_phi = n_phi.max(4);
                let rule = GaussLegendre::new(n_theta);
                let mut out = Vec::with_capacity(n_theta.get() * n_phi);
                for &(x, w) in rule.as_node_weight_pairs() {
                    let theta = x.clamp(-1.0, 1.0).acos();
                    for k in 0..n_phi {
                        let phi = 2.0 * PI * k as f64 / n_phi as f64;
                        out.push((theta, phi, w / 2.0 / n_phi as f64));
                    }
                }
                out
            }
            QuadratureSpec::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let w = 1.0 / samples as f64;
                (0..samples)
                    .map(|_| {
                        let z: f64 = rng.random_range(-1.0..=1.0);
                        let phi: f64 = rng.random_range(0.0..2.0 * PI);
                        (z.acos(), phi, w)
                    })
                    .collect()
            }
        }
    }
}

/// Mean, second moment and standard deviation of the fidelity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericMoments {
    pub mean_f: f64,
    pub second_f: f64,
    pub delta: f64,
}

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn input_vector(theta: f64, phi: f64) -> [C64; 2] {
    [c((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

/// Correction applied by Bob after each Bell outcome, in Bell index order.
pub fn corrections() -> [ComplexMat; 4] {
    let x = ComplexMat::pauli(1);
    let z = ComplexMat::pauli(3);
    [ComplexMat::identity(2), x, z * x, z]
}

/// Bob's state after the standard protocol, averaged over the four Bell
/// outcomes on (input, Alice).
pub fn teleport_output(shared: &TwoQubitState, theta: f64, phi: f64) -> ComplexMat {
    let psi = input_vector(theta, phi);
    let rho = shared.rho();
    let fixes = corrections();
    let mut out = ComplexMat::zeros(2);
    for (k, fix) in fixes.iter().enumerate() {
        let bell = bell_vector(k + 1).expect("Bell index in range");
        // amplitude <Phi_k|_{in,A} |psi>_in restricted to Alice index j
        let amp: Vec<C64> =
            (0..2).map(|j| (0..2).map(|i| bell[2 * i + j].conj() * psi[i]).sum()).collect();
        let mut bob = ComplexMat::zeros(2);
        for b in 0..2 {
            for bp in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..2 {
                    for jp in 0..2 {
                        acc += amp[j] * rho[(2 * j + b, 2 * jp + bp)] * amp[jp].conj();
                    }
                }
                bob[(b, bp)] = acc;
            }
        }
        out = out + *fix * bob * fix.adjoint();
    }
    out
}

/// `<psi| teleport_output |psi>`.
pub fn fidelity(shared: &TwoQubitState, theta: f64, phi: f64) -> f64 {
    let psi = input_vector(theta, phi);
    let out = teleport_output(shared, theta, phi);
    let v = out.mul_vec(&psi);
    (psi[0].conj() * v[0] + psi[1].conj() * v[1]).re
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Quadrature of `f` and `f^2` under the standard protocol with the state as given.
pub fn numeric_moments(shared: &TwoQubitState, q: &QuadratureSpec) -> NumericMoments {
    let nodes = q.nodes();
    let terms: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&(theta, phi, w)| {
            let f = fidelity(shared, theta, phi);
            (w * f, w * f * f)
        })
        .collect();
    let first: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let second: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let mean_f = pairwise_sum(&first);
    let second_f = pairwise_sum(&second);
    NumericMoments { mean_f, second_f, delta: (second_f - mean_f * mean_f).max(0.0).sqrt() }
}

/// State with diagonal correlation matrix, reached by local unitaries.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub state: TwoQubitState,
    pub u1: ComplexMat,
    pub u2: ComplexMat,
}

fn to_na(m: &Real3) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[i][j])
}

fn from_na(m: &Matrix3<f64>) -> Real3 {
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[(i, j)]))
}

/// SU(2) element `w I - i (x X + y Y + z Z)` whose adjoint action on Bloch
/// vectors is the rotation `r`.
pub fn lift_rotation(r: &Real3) -> ComplexMat {
    let tr = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        w = s / 4.0;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        w = (r[2][1] - r[1][2]) / s;
        x = s / 4.0;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = s / 4.0;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = s / 4.0;
    }
    let n = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / n, x / n, y / n, z / n);
    ComplexMat::from_rows2([[c(w, -z), c(-y, -x)], [c(y, -x), c(w, z)]])
}

fn flip(rot: &mut Real3, i: usize) {
    for v in rot[i].iter_mut() {
        *v = -*v;
    }
}

/// Rotations `O1, O2` in SO(3) with `O1 T O2^T` diagonal, signed per the
/// determinant rule: all negative when `det T <= 0`, otherwise the two
/// largest magnitudes negative and the smallest positive.
pub fn canonical_rotations(t: &Real3) -> (Real3, Real3, [f64; 3]) {
    let svd = to_na(t).svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut o1 = from_na(&u.transpose());
    let mut o2 = from_na(&vt);
    let mut d = [svd.singular_values[0], svd.singular_values[1], svd.singular_values[2]];
    if det3(&o1) < 0.0 {
        flip(&mut o1, 2);
        d[2] = -d[2];
    }
    if det3(&o2) < 0.0 {
        flip(&mut o2, 2);
        d[2] = -d[2];
    }
    let tiny = 1e-14 * d.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let det = det3(t);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| d[b].abs().partial_cmp(&d[a].abs()).unwrap_or(std::cmp::Ordering::Equal));
    let mut target = [-1.0; 3];
    let has_zero = d.iter().any(|x| x.abs() <= tiny);
    if det > 0.0 && !has_zero {
        target[order[2]] = 1.0;
    }
    let mut wrong: Vec<usize> =
        (0..3).filter(|&i| d[i].abs() > tiny && d[i].signum() != target[i]).collect();
    if wrong.len() % 2 == 1 {
        if let Some(z) = (0..3).find(|&i| d[i].abs() <= tiny) {
            wrong.push(z);
        }
    }
    for pair in wrong.chunks(2) {
        if let [i, j] = *pair {
            flip(&mut o1, i);
            flip(&mut o1, j);
            d[i] = -d[i];
            d[j] = -d[j];
        }
    }
    (o1, o2, d)
}

/// Local-unitary canonical form of a two-qubit state.
pub fn canonicalize(s: &TwoQubitState) -> Canonical {
    let t = s.hs().t;
    let (o1, o2, _) = canonical_rotations(&t);
    let u1 = lift_rotation(&o1);
    let u2 = lift_rotation(&o2);
    let state = s.local_unitary(&u1, &u2).expect("local unitaries keep a valid state");
    Canonical { state, u1, u2 }
}

/// Moments of the canonical-form protocol. Bob's extra `sigma_2` maps the
/// all-negative canonical diagonal onto the `Phi_1` frame that the fixed
/// corrections are written for.
pub fn optimal_moments(s: &TwoQubitState, q: &QuadratureSpec) -> NumericMoments {
    let canon = canonicalize(s).state;
    let framed = canon
        .local_unitary(&ComplexMat::identity(2), &ComplexMat::pauli(2))
        .expect("local unitaries keep a valid state");
    numeric_moments(&framed, q)
}

/// Off-diagonal magnitude of a correlation matrix, for checking canonical forms.
pub fn off_diagonal(t: &Real3) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in t.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// `O1 T O2^T`.
pub fn rotate_correlations(o1: &Real3, t: &Real3, o2: &Real3) -> Real3 {
    matmul3(&matmul3(o1, t), &transpose3(o2))
}

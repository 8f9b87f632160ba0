//! Two-qubit states, their Pauli-basis decomposition and the teleportation
//! figures of merit derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    det3, hermitian_eig, kron, re, symmetric3_eig, transpose3, matmul3, ComplexMat,
    Real3, EPS_HERM, ZERO,
};

/// Strictness margin for the `> 2/3` and `> 1/3` comparisons.
pub const EPS_CLS: f64 = 1e-9;
/// Tolerance for `|t_11| = |t_22| = |t_33|`.
pub const EPS_UQT: f64 = 1e-9;
/// Relative size below which a density-matrix eigenvalue is rounding noise.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;
/// Accepted deviation of `Tr rho` from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-9;

/// Local Bloch vectors and correlation matrix of a two-qubit operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsDecomposition {
    /// Alice's local vector, `R_i = Tr(rho sigma_i x I)`.
    pub r: [f64; 3],
    /// Bob's local vector, `S_j = Tr(rho I x sigma_j)`.
    pub s: [f64; 3],
    /// `T_ij = Tr(rho sigma_i x sigma_j)`.
    pub t: Real3,
}

impl HsDecomposition {
    pub fn of(rho: &ComplexMat) -> Self {
        let id = ComplexMat::identity(2);
        let mut out = HsDecomposition { r: [0.0; 3], s: [0.0; 3], t: [[0.0; 3]; 3] };
        for i in 0..3 {
            let si = ComplexMat::pauli(i + 1);
            out.r[i] = (*rho * kron(&si, &id)).trace().re;
            out.s[i] = (*rho * kron(&id, &si)).trace().re;
            for j in 0..3 {
                let sj = ComplexMat::pauli(j + 1);
                out.t[i][j] = (*rho * kron(&si, &sj)).trace().re;
            }
        }
        out
    }

    /// Rebuild `rho = (I + R.sigma x I + I x S.sigma + sum T_ij sigma_i x sigma_j) / 4`.
    pub fn to_density(&self) -> ComplexMat {
        let id = ComplexMat::identity(2);
        let mut m = ComplexMat::identity(4);
        for i in 0..3 {
            let si = ComplexMat::pauli(i + 1);
            m = m + kron(&si, &id).scale_re(self.r[i]) + kron(&id, &si).scale_re(self.s[i]);
            for j in 0..3 {
                let sj = ComplexMat::pauli(j + 1);
                m = m + kron(&si, &sj).scale_re(self.t[i][j]);
            }
        }
        m.scale_re(0.25)
    }
}

/// Validated two-qubit density matrix with its decomposition cached.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState {
    rho: ComplexMat,
    hs: HsDecomposition,
}

impl TwoQubitState {
    pub fn from_density(m: ComplexMat) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::Dimension { expected: 4, got: m.dim() });
        }
        let residual = m.hermiticity_residual();
        if residual > EPS_HERM {
            return Err(Error::NotHermitian { residual });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace });
        }
        let min = hermitian_eig(&m)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let rho = m.hermitian_part();
        Ok(TwoQubitState { hs: HsDecomposition::of(&rho), rho })
    }

    pub fn from_hs(hs: &HsDecomposition) -> Result<Self> {
        Self::from_density(hs.to_density())
    }

    /// Normalised projector onto `v`.
    pub fn from_vector(v: &[crate::linalg::C64]) -> Result<Self> {
        if v.len() != 4 {
            return Err(Error::Dimension { expected: 4, got: v.len() });
        }
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Self::from_density(ComplexMat::outer(v).scale_re(1.0 / norm2))
    }

    pub fn maximally_mixed() -> Self {
        Self::from_density(ComplexMat::identity(4).scale_re(0.25)).expect("I/4 is a state")
    }

    pub fn rho(&self) -> &ComplexMat {
        &self.rho
    }

    pub fn hs(&self) -> &HsDecomposition {
        &self.hs
    }

    /// `(U1 x U2) rho (U1 x U2)^dag`.
    pub fn local_unitary(&self, u1: &ComplexMat, u2: &ComplexMat) -> Result<Self> {
        let u = crate::linalg::tensor(u1, u2)?;
        Self::from_density(u * self.rho * u.adjoint())
    }

    /// Convex mixture `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        Self::from_density(self.rho.scale_re(w) + other.rho.scale_re(1.0 - w))
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(self)
    }

    pub fn correlation_spectrum(&self) -> CorrelationSpectrum {
        correlation_spectrum(self)
    }

    pub fn profile(&self) -> TeleportProfile {
        profile(self)
    }
}

/// `sqrt(a)|00> + sqrt(1-a)|11>` for `a` in `[1/2, 1)`.
pub fn pure_state(a: f64) -> Result<TwoQubitState> {
    if !(0.5..1.0).contains(&a) {
        return Err(Error::out_of_range("a", a, "[1/2, 1)"));
    }
    TwoQubitState::from_vector(&[re(a.sqrt()), ZERO, ZERO, re((1.0 - a).sqrt())])
}

/// The `a` in `[1/2, 1)` whose pure state has concurrence `c`.
pub fn a_for_concurrence(c: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::out_of_range("concurrence", c, "(0, 1]"));
    }
    Ok(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

/// Pure state `|Psi_a>` with the requested concurrence.
pub fn pure_state_with_concurrence(c: f64) -> Result<TwoQubitState> {
    pure_state(a_for_concurrence(c)?)
}

/// Bell basis vector `k` in 1..=4: `00+11`, `01+10`, `01-10`, `00-11`.
pub fn bell_vector(k: usize) -> Result<[crate::linalg::C64; 4]> {
    let h = re(std::f64::consts::FRAC_1_SQRT_2);
    Ok(match k {
        1 => [h, ZERO, ZERO, h],
        2 => [ZERO, h, h, ZERO],
        3 => [ZERO, h, -h, ZERO],
        4 => [h, ZERO, ZERO, -h],
        other => return Err(Error::BellIndex(other)),
    })
}

pub fn bell_state(k: usize) -> Result<TwoQubitState> {
    TwoQubitState::from_vector(&bell_vector(k)?)
}

/// `p |Phi_1><Phi_1| + (1 - p) I/4`.
pub fn werner(p: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::out_of_range("p", p, "[0, 1]"));
    }
    bell_state(1)?.mix(&TwoQubitState::maximally_mixed(), p)
}

/// Wootters concurrence. The `lambda_i` are taken as singular values of
/// `sqrt(rho) (Y x Y) sqrt(rho)^*`, which avoids square-rooting eigenvalues
/// that are pure rounding noise.
pub fn concurrence(s: &TwoQubitState) -> f64 {
    let yy = kron(&ComplexMat::pauli(2), &ComplexMat::pauli(2));
    let eig = hermitian_eig(&s.rho).expect("state is Hermitian");
    let floor = NOISE_FLOOR * eig.max_value();
    let root = eig.map_spectrum(|lam| if lam > floor { lam.sqrt() } else { 0.0 });
    let a = root * yy * root.conj();
    let m = nalgebra::Matrix4::from_fn(|r, col| a[(r, col)]);
    let mut lam: Vec<f64> = m.singular_values().iter().copied().collect();
    lam.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    (lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0)
}

/// Magnitudes and signs of the correlation matrix's canonical diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSpectrum {
    /// Singular values of `T`, descending.
    pub abs_t: [f64; 3],
    pub det_t: f64,
    /// Signs matching `abs_t`, available when `T` is symmetric.
    pub signs: Option<[i8; 3]>,
}

impl CorrelationSpectrum {
    pub fn max_pairwise_gap(&self) -> f64 {
        self.abs_t[0] - self.abs_t[2]
    }
}

pub fn correlation_spectrum(s: &TwoQubitState) -> CorrelationSpectrum {
    correlation_spectrum_of(&s.hs.t)
}

pub fn correlation_spectrum_of(t: &Real3) -> CorrelationSpectrum {
    let det_t = det3(t);
    let diagonal = (0..3).all(|i| (0..3).all(|j| i == j || t[i][j] == 0.0));
    let abs_t = if diagonal {
        let mut d = [t[0][0].abs(), t[1][1].abs(), t[2][2].abs()];
        d.sort_by(|a, b| b.total_cmp(a));
        d
    } else {
        let (sq, _) = symmetric3_eig(&matmul3(&transpose3(t), t));
        sq.map(|v| v.max(0.0).sqrt())
    };

    let symmetric = (0..3).all(|i| (0..3).all(|j| (t[i][j] - t[j][i]).abs() <= 1e-12));
    let signs = symmetric.then(|| {
        let (vals, _) = symmetric3_eig(t);
        let mut v = vals.to_vec();
        v.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap_or(std::cmp::Ordering::Equal));
        [0, 1, 2].map(|k| if v[k] < 0.0 { -1 } else { 1 })
    });
    CorrelationSpectrum { abs_t, det_t, signs }
}

/// Teleportation verdicts for a shared state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportProfile {
    /// Maximal average fidelity, set only where the closed form applies.
    pub f_max: Option<f64>,
    /// Fidelity deviation, set only where the closed form applies.
    pub delta: Option<f64>,
    pub det_t: f64,
    pub abs_t: [f64; 3],
    pub useful: bool,
    pub universal: bool,
    pub uqt: bool,
    pub formula_valid: bool,
}

pub fn profile(s: &TwoQubitState) -> TeleportProfile {
    profile_of_spectrum(&correlation_spectrum(s))
}

/// Closed-form `F` and `Delta` from `|t_ii|`, valid for `det T <= 0`.
/// Gaps at the level of rounding in `abs_t` count as zero.
pub fn fidelity_and_deviation(abs_t: &[f64; 3]) -> (f64, f64) {
    let [a, b, c] = *abs_t;
    let f = 0.5 * (1.0 + (a + b + c) / 3.0);
    let floor = 8.0 * f64::EPSILON * a.max(b).max(c);
    let gap = |x: f64, y: f64| if (x - y).abs() <= floor { 0.0 } else { (x - y).powi(2) };
    let spread = (gap(a, b) + gap(a, c) + gap(b, c)).sqrt();
    (f, spread / (3.0 * 10f64.sqrt()))
}

pub fn profile_of_spectrum(spec: &CorrelationSpectrum) -> TeleportProfile {
    let abs_t = spec.abs_t;
    // det T = 0 up to rounding belongs to the same branch as det T < 0.
    let formula_valid = spec.det_t < 0.0 || abs_t[2] <= EPS_CLS;
    if !formula_valid {
        return TeleportProfile {
            f_max: None,
            delta: None,
            det_t: spec.det_t,
            abs_t,
            useful: false,
            universal: false,
            uqt: false,
            formula_valid,
        };
    }
    let (f, delta) = fidelity_and_deviation(&abs_t);
    let useful = f > 2.0 / 3.0 + EPS_CLS;
    let universal = spec.max_pairwise_gap() <= EPS_UQT && delta <= EPS_UQT;
    let uqt = useful && universal && abs_t[2] > 1.0 / 3.0 + EPS_CLS;
    TeleportProfile {
        f_max: Some(f),
        delta: Some(delta),
        det_t: spec.det_t,
        abs_t,
        useful,
        universal,
        uqt,
        formula_valid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};
    use proptest::prelude::*;

    fn diag_t(t: &Real3) -> [f64; 3] {
        [t[0][0], t[1][1], t[2][2]]
    }

    #[test]
    fn decomposition_of_named_states() {
        let mm = TwoQubitState::maximally_mixed();
        assert_eq!(mm.hs().r, [0.0; 3]);
        assert_eq!(diag_t(&mm.hs().t), [0.0; 3]);

        let expected = [
            [1.0, -1.0, 1.0],
            [1.0, 1.0, -1.0],
            [-1.0, -1.0, -1.0],
            [-1.0, 1.0, 1.0],
        ];
        for (k, want) in expected.iter().enumerate() {
            let b = bell_state(k + 1).unwrap();
            let got = diag_t(&b.hs().t);
            for i in 0..3 {
                assert!((got[i] - want[i]).abs() < 1e-14, "Bell {} T_{i}{i}", k + 1);
            }
            assert!(b.hs().r.iter().chain(&b.hs().s).all(|x| x.abs() < 1e-14));
        }
        assert!(matches!(bell_state(5), Err(Error::BellIndex(5))));

        let p = pure_state(0.9).unwrap();
        let t = diag_t(&p.hs().t);
        assert!((t[0] - 0.6).abs() < 1e-14 && (t[1] + 0.6).abs() < 1e-14 && (t[2] - 1.0).abs() < 1e-14);
        assert!((p.hs().r[2] - 0.8).abs() < 1e-14 && (p.hs().s[2] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn from_density_rejects_bad_input() {
        let half = ComplexMat::identity(4).scale_re(0.5);
        assert!(matches!(TwoQubitState::from_density(half), Err(Error::Trace { .. })));
        let neg = ComplexMat::diag(&[re(0.6), re(0.5), re(-0.1), ZERO]);
        assert!(matches!(TwoQubitState::from_density(neg), Err(Error::NotPositive { .. })));
        let mut skew = ComplexMat::identity(4).scale_re(0.25);
        skew[(0, 1)] = c(0.0, 0.1);
        assert!(matches!(TwoQubitState::from_density(skew), Err(Error::NotHermitian { .. })));
        assert!(TwoQubitState::from_density(ComplexMat::identity(2)).is_err());
    }

    #[test]
    fn pure_state_concurrence() {
        assert!((pure_state(0.5).unwrap().concurrence() - 1.0).abs() < 1e-12);
        assert!((pure_state(0.9).unwrap().concurrence() - 0.6).abs() < 1e-12);
        let a = 0.5 + 3f64.sqrt() / 4.0;
        assert!((pure_state(a).unwrap().concurrence() - 0.5).abs() < 1e-12);
        assert!(pure_state(1.0).is_err());
        assert!(pure_state(0.4).is_err());
        assert!((a_for_concurrence(0.6).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn concurrence_of_mixed_states() {
        assert!((bell_state(1).unwrap().concurrence() - 1.0).abs() < 1e-12);
        assert!(TwoQubitState::maximally_mixed().concurrence().abs() < 1e-12);
        // Werner: max(0, (3p - 1)/2)
        assert!((werner(0.8).unwrap().concurrence() - 0.7).abs() < 1e-12);
        assert!(werner(0.3).unwrap().concurrence().abs() < 1e-12);
    }

    #[test]
    fn spectrum_examples() {
        let s = bell_state(1).unwrap().correlation_spectrum();
        assert_eq!(s.abs_t.map(|x| (x * 1e12).round()), [1e12; 3]);
        assert!((s.det_t + 1.0).abs() < 1e-14);

        let p = 0.75;
        let deph = bell_state(1)
            .unwrap()
            .mix(&bell_state(4).unwrap(), p)
            .unwrap()
            .correlation_spectrum();
        for (got, want) in deph.abs_t.iter().zip([1.0, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((deph.det_t + 0.25).abs() < 1e-14);

        let ps = pure_state(0.9).unwrap().correlation_spectrum();
        for (got, want) in ps.abs_t.iter().zip([1.0, 0.6, 0.6]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((ps.det_t + 0.36).abs() < 1e-14);
        let signs = ps.signs.unwrap();
        assert_eq!(signs[0], 1);
        assert_eq!(signs[1] * signs[2], -1);
    }

    #[test]
    fn profile_examples() {
        let b = bell_state(1).unwrap().profile();
        assert!((b.f_max.unwrap() - 1.0).abs() < 1e-12);
        assert!(b.delta.unwrap() < 1e-12);
        assert!(b.uqt);

        let deph = bell_state(1).unwrap().mix(&bell_state(4).unwrap(), 0.75).unwrap().profile();
        assert!((deph.f_max.unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!((deph.delta.unwrap() - 1.0 / (6.0 * 5f64.sqrt())).abs() < 1e-12);
        assert!(deph.useful && !deph.universal && !deph.uqt);

        // Bell-diagonal Werner form: p on Phi_1 and (1 - p)/3 on the others.
        let p = 0.8;
        let mut rho = bell_state(1).unwrap().rho().scale_re(p);
        for k in 2..=4 {
            rho = rho + bell_state(k).unwrap().rho().scale_re((1.0 - p) / 3.0);
        }
        let w = TwoQubitState::from_density(rho).unwrap().profile();
        assert!((w.f_max.unwrap() - 13.0 / 15.0).abs() < 1e-12);
        assert_eq!(w.delta.unwrap(), 0.0);
        assert!(w.uqt);

        // Positive determinant: formula does not apply.
        let prod = TwoQubitState::from_density(
            ComplexMat::outer(&[ONE, ZERO, ZERO, ZERO]),
        )
        .unwrap();
        let pp = prod.profile();
        assert!(pp.formula_valid); // T = diag(0,0,1), det = 0
        let pos = bell_state(1).unwrap().mix(&bell_state(2).unwrap(), 0.5).unwrap();
        let pr = pos.profile();
        assert!(pr.det_t >= 0.0);
        assert!(!pr.useful);
        let phi2 = bell_state(2).unwrap().profile();
        assert!((phi2.det_t + 1.0).abs() < 1e-14);
        assert!(phi2.uqt);
    }

    fn random_state(seed: [f64; 16]) -> TwoQubitState {
        let mut a = ComplexMat::zeros(4);
        for r in 0..4 {
            for col in 0..4 {
                let k = r * 4 + col;
                a[(r, col)] = c(seed[k], seed[(k + 5) % 16] - 0.5);
            }
        }
        let m = a * a.adjoint();
        let tr = m.trace().re;
        TwoQubitState::from_density(m.scale_re(1.0 / tr)).unwrap()
    }

    fn random_unitary2(x: [f64; 4]) -> ComplexMat {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-9);
        let [w, a, b, d] = x.map(|v| v / n);
        ComplexMat::from_rows2([[c(w, d), c(b, a)], [c(-b, a), c(w, -d)]])
    }

    proptest! {
        #[test]
        fn hs_round_trip(seed in prop::array::uniform16(-1.0f64..1.0)) {
            let s = random_state(seed);
            let back = s.hs().to_density();
            prop_assert!(back.max_abs_diff(s.rho()) < 1e-12);
            let r2: f64 = s.hs().r.iter().map(|x| x * x).sum();
            prop_assert!(r2.sqrt() <= 1.0 + 1e-10);
            let spec = s.correlation_spectrum();
            prop_assert!(spec.abs_t.iter().all(|&x| x <= 1.0 + 1e-10));
        }

        #[test]
        fn concurrence_local_unitary_invariant(
            seed in prop::array::uniform16(-1.0f64..1.0),
            u in prop::array::uniform4(-1.0f64..1.0),
            v in prop::array::uniform4(-1.0f64..1.0),
        ) {
            let s = random_state(seed);
            let rotated = s.local_unitary(&random_unitary2(u), &random_unitary2(v)).unwrap();
            prop_assert!((s.concurrence() - rotated.concurrence()).abs() < 1e-10);
        }

        #[test]
        fn pure_state_closed_forms(a in 0.5f64..0.999) {
            let s = pure_state(a).unwrap();
            let cc = 2.0 * (a * (1.0 - a)).sqrt();
            let prof = s.profile();
            prop_assert!((s.concurrence() - cc).abs() < 1e-10);
            prop_assert!((prof.f_max.unwrap() - (2.0 + cc) / 3.0).abs() < 1e-12);
            prop_assert!((prof.delta.unwrap() - (1.0 - cc) / (3.0 * 5f64.sqrt())).abs() < 1e-12);
        }

        #[test]
        fn delta_in_range(seed in prop::array::uniform16(-1.0f64..1.0)) {
            let prof = random_state(seed).profile();
            if let Some(d) = prof.delta {
                prop_assert!((0.0..=0.5).contains(&d));
                prop_assert_eq!(prof.uqt, prof.useful && prof.universal && prof.abs_t[2] > 1.0/3.0 + EPS_CLS);
            }
        }
    }
}

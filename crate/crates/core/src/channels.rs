//! Qubit channels in Kraus form, their Choi states and the checks that
//! separate a CPTP map from an arbitrary list of matrices.

use std::collections::BTreeMap;
use std::path::Path;

use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eig, kron, numeric_rank, partial_trace, ComplexMat, Subsystem, C64, RANK_TOL,
};
use crate::states::{bell_state, TwoQubitState};

/// Residual allowed for completeness, unitality and Choi positivity.
pub const EPS_CPTP: f64 = 1e-9;
/// Largest Kraus list accepted from callers.
pub const MAX_KRAUS: usize = 8;

/// A validated CPTP map on one qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitChannel {
    name: String,
    params: BTreeMap<String, f64>,
    kraus: Vec<ComplexMat>,
}

/// Summary of the structural properties of a channel.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub unital: bool,
    pub choi_rank: usize,
    #[serde(skip)]
    pub choi: TwoQubitState,
    pub choi_eigenvalues: Vec<f64>,
    /// Bob's local vector of the Choi state; zero exactly for unital maps.
    pub choi_bob_vector: [f64; 3],
    pub trace_preserving_residual: f64,
    pub unitality_residual: f64,
}

fn completeness_residual(terms: &[(f64, ComplexMat)]) -> f64 {
    let sum: ComplexMat = terms.iter().map(|(w, k)| (k.adjoint() * *k).scale_re(*w)).sum();
    sum.max_abs_diff(&ComplexMat::identity(2))
}

fn unitality_residual(kraus: &[ComplexMat]) -> f64 {
    let sum: ComplexMat = kraus.iter().map(|k| *k * k.adjoint()).sum();
    sum.max_abs_diff(&ComplexMat::identity(2))
}

/// `sum w_i (I x A_i) |Phi_1><Phi_1| (I x A_i)^dag`, not checked for positivity.
fn choi_matrix(terms: &[(f64, ComplexMat)]) -> ComplexMat {
    let phi = *bell_state(1).expect("Bell index 1").rho();
    let id = ComplexMat::identity(2);
    terms
        .iter()
        .map(|(w, a)| {
            let op = kron(&id, a);
            (op * phi * op.adjoint()).scale_re(*w)
        })
        .sum()
}

fn check_shapes(ops: &[&ComplexMat]) -> Result<()> {
    if ops.is_empty() {
        return Err(Error::EmptyKraus);
    }
    if ops.len() > MAX_KRAUS {
        return Err(Error::TooManyKraus(ops.len()));
    }
    for k in ops {
        if k.dim() != 2 {
            return Err(Error::Dimension { expected: 2, got: k.dim() });
        }
    }
    Ok(())
}

/// Accept a Kraus list as a channel, or report why it is not CPTP.
pub fn validate(kraus: Vec<ComplexMat>) -> Result<QubitChannel> {
    QubitChannel::new("custom", BTreeMap::new(), kraus)
}

/// Validate the map `rho -> sum w_i A_i rho A_i^dag` with real, possibly
/// negative, weights. Maps that pass are returned in Kraus form.
pub fn validate_weighted(
    name: &str,
    params: BTreeMap<String, f64>,
    terms: &[(f64, ComplexMat)],
) -> Result<QubitChannel> {
    check_shapes(&terms.iter().map(|(_, k)| k).collect::<Vec<_>>())?;
    let residual = completeness_residual(terms);
    if residual > EPS_CPTP {
        return Err(Error::Completeness { residual });
    }
    let choi = choi_matrix(terms);
    let min = hermitian_eig(&choi)?.min_value();
    if min < -EPS_CPTP {
        return Err(Error::NotCompletelyPositive { min_eigenvalue: min });
    }
    if terms.iter().all(|(w, _)| *w >= 0.0) {
        let kraus = terms.iter().map(|(w, k)| k.scale_re(w.sqrt())).collect();
        return QubitChannel::new(name, params, kraus);
    }
    let kraus = kraus_from_choi(&choi)?;
    QubitChannel::new(name, params, kraus)
}

/// Orthogonal Kraus operators from the spectral decomposition of a
/// trace-one Choi matrix: `K_k = sqrt(2 l_k) reshape(v_k)^T`.
pub fn kraus_from_choi(choi: &ComplexMat) -> Result<Vec<ComplexMat>> {
    let eig = hermitian_eig(choi)?;
    let top = eig.max_value();
    let mut kraus = Vec::new();
    for (lam, v) in eig.values.iter().zip(&eig.vectors) {
        if *lam <= RANK_TOL * top {
            continue;
        }
        let scale = (2.0 * lam).sqrt();
        let a = ComplexMat::from_rows2([[v[0], v[1]], [v[2], v[3]]]);
        kraus.push(a.transpose().scale_re(scale));
    }
    Ok(kraus)
}

impl QubitChannel {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, f64>,
        kraus: Vec<ComplexMat>,
    ) -> Result<Self> {
        check_shapes(&kraus.iter().collect::<Vec<_>>())?;
        let terms: Vec<(f64, ComplexMat)> = kraus.iter().map(|k| (1.0, *k)).collect();
        let residual = completeness_residual(&terms);
        if residual > EPS_CPTP {
            return Err(Error::Completeness { residual });
        }
        let min = hermitian_eig(&choi_matrix(&terms))?.min_value();
        if !(min >= -EPS_CPTP) {
            return Err(Error::NotCompletelyPositive { min_eigenvalue: min });
        }
        Ok(QubitChannel { name: name.into(), params, kraus })
    }

    pub fn identity() -> Self {
        Self::new("identity", BTreeMap::new(), vec![ComplexMat::identity(2)])
            .expect("identity is CPTP")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn kraus(&self) -> &[ComplexMat] {
        &self.kraus
    }

    pub fn with_name(mut self, name: impl Into<String>, params: BTreeMap<String, f64>) -> Self {
        self.name = name.into();
        self.params = params;
        self
    }

    /// `sum K_i x K_i^dag`.
    pub fn apply(&self, x: &ComplexMat) -> ComplexMat {
        self.kraus.iter().map(|k| *k * *x * k.adjoint()).sum()
    }

    /// `(I x Lambda)(rho)`.
    pub fn apply_to_bob(&self, s: &TwoQubitState) -> Result<TwoQubitState> {
        let id = ComplexMat::identity(2);
        let out: ComplexMat = self
            .kraus
            .iter()
            .map(|k| {
                let op = kron(&id, k);
                op * *s.rho() * op.adjoint()
            })
            .sum();
        TwoQubitState::from_density(out)
    }

    /// Trace-one Choi state `(I x Lambda)|Phi_1><Phi_1|`.
    pub fn choi(&self) -> TwoQubitState {
        self.apply_to_bob(&bell_state(1).expect("Bell index 1"))
            .expect("a CPTP map yields a state")
    }

    pub fn is_unital(&self) -> bool {
        unitality_residual(&self.kraus) <= EPS_CPTP
    }

    pub fn report(&self) -> ChannelReport {
        let choi = self.choi();
        let eig = hermitian_eig(choi.rho()).expect("Choi state is Hermitian");
        let terms: Vec<(f64, ComplexMat)> = self.kraus.iter().map(|k| (1.0, *k)).collect();
        let unitality = unitality_residual(&self.kraus);
        ChannelReport {
            unital: unitality <= EPS_CPTP,
            choi_rank: numeric_rank(choi.rho(), RANK_TOL),
            choi_eigenvalues: eig.values,
            choi_bob_vector: choi.hs().s,
            trace_preserving_residual: completeness_residual(&terms),
            unitality_residual: unitality,
            choi,
        }
    }

    /// `K~_i = sum_j W_ij K_j`, padding with zero operators to the size of `w`.
    pub fn rotate_kraus(&self, w: &[Vec<C64>]) -> Result<Self> {
        let n = w.len();
        if n < self.kraus.len() || w.iter().any(|row| row.len() != n) {
            return Err(Error::Spec(format!(
                "mixing matrix must be square with at least {} rows",
                self.kraus.len()
            )));
        }
        let mut residual: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: C64 = (0..n).map(|k| w[k][i].conj() * w[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((dot - c(expect, 0.0)).norm());
            }
        }
        if residual > EPS_CPTP {
            return Err(Error::NotUnitary { residual });
        }
        let zero = ComplexMat::zeros(2);
        let padded: Vec<ComplexMat> =
            (0..n).map(|j| self.kraus.get(j).copied().unwrap_or(zero)).collect();
        let rotated = (0..n)
            .map(|i| {
                padded
                    .iter()
                    .enumerate()
                    .map(|(j, k)| k.scale(w[i][j]))
                    .sum::<ComplexMat>()
            })
            .collect();
        Self::new(self.name.clone(), self.params.clone(), rotated)
    }

    /// Minimal, mutually orthogonal Kraus set rebuilt from the Choi state.
    pub fn orthogonalize(&self) -> Self {
        let kraus = kraus_from_choi(self.choi().rho()).expect("Choi state is Hermitian");
        Self::new(self.name.clone(), self.params.clone(), kraus)
            .expect("Choi reconstruction preserves the map")
    }

    /// Largest entrywise difference of the two maps on `{I, X, Y, Z}`.
    pub fn action_distance(&self, other: &Self) -> f64 {
        (0..4)
            .map(|k| {
                let p = ComplexMat::pauli(k);
                self.apply(&p).max_abs_diff(&other.apply(&p))
            })
            .fold(0.0, f64::max)
    }

    /// Bob marginal of the Choi state, `Lambda(I/2)`.
    pub fn choi_bob_marginal(&self) -> ComplexMat {
        partial_trace(self.choi().rho(), Subsystem::Bob).expect("4x4 Choi")
    }

    pub fn to_doc(&self) -> ChannelDoc {
        ChannelDoc {
            name: self.name.clone(),
            kraus: self
                .kraus
                .iter()
                .map(|k| k.entries().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            params: self.params.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ChannelDoc = serde_json::from_str(text)?;
        doc.into_channel()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk channel description: Kraus operators as row-major `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    pub name: String,
    pub kraus: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl ChannelDoc {
    pub fn into_channel(self) -> Result<QubitChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(|entries| {
                if entries.len() != 4 {
                    return Err(Error::Spec(format!(
                        "Kraus operator needs 4 entries, got {}",
                        entries.len()
                    )));
                }
                let z: Vec<C64> = entries.iter().map(|[r, i]| c(*r, *i)).collect();
                ComplexMat::from_entries(&z)
            })
            .collect::<Result<Vec<_>>>()?;
        QubitChannel::new(self.name, self.params, kraus)
    }
}

/// Channel whose Choi state is `choi`. The Alice marginal must be `I/2`.
pub fn from_choi(name: &str, choi: &TwoQubitState) -> Result<QubitChannel> {
    QubitChannel::new(name, BTreeMap::new(), kraus_from_choi(choi.rho())?)
}


fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    let z: [f64; 2] = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
    c(z[0], z[1]) * std::f64::consts::FRAC_1_SQRT_2
}

/// Channel with `n_kraus` Gaussian Kraus operators, normalized as
/// `K_i G^{-1/2}` with `G = sum K_i^dag K_i`. Its Choi rank is at most `n_kraus`.
pub fn random_channel<R: rand::Rng + ?Sized>(rng: &mut R, n_kraus: usize) -> Result<QubitChannel> {
    if n_kraus == 0 {
        return Err(Error::EmptyKraus);
    }
    let blocks: Vec<ComplexMat> = (0..n_kraus)
        .map(|_| {
            let e: Vec<C64> = (0..4).map(|_| gaussian(rng)).collect();
            ComplexMat::from_entries(&e).expect("four entries")
        })
        .collect();
    let g: ComplexMat = blocks.iter().map(|b| b.adjoint() * *b).sum();
    let g_inv_sqrt = crate::linalg::pd_inv_sqrt(&g)?;
    QubitChannel::new("random", BTreeMap::new(), blocks.iter().map(|b| *b * g_inv_sqrt).collect())
}

/// Random rank-`rank` Choi state with Alice marginal exactly `I/2`.
/// A Wishart matrix `M` is mapped to `(A^{-1/2} x I) M (A^{-1/2} x I) / 2`
/// with `A = Tr_B M`.
pub fn random_choi<R: rand::Rng + ?Sized>(rng: &mut R, rank: usize) -> Result<TwoQubitState> {
    let mut m = ComplexMat::zeros(4);
    for _ in 0..rank.clamp(1, 4) {
        let v: Vec<C64> = (0..4).map(|_| gaussian(rng)).collect();
        m = m + ComplexMat::outer(&v);
    }
    let a = partial_trace(&m, Subsystem::Alice)?;
    let w = kron(&crate::linalg::pd_inv_sqrt(&a)?, &ComplexMat::identity(2));
    TwoQubitState::from_density((w * m * w).scale_re(0.5).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{re, ONE, ZERO};
    use crate::states::pure_state;
    use proptest::prelude::*;

    fn dephasing(p: f64) -> QubitChannel {
        validate(vec![
            ComplexMat::identity(2).scale_re(p.sqrt()),
            ComplexMat::pauli(3).scale_re((1.0 - p).sqrt()),
        ])
        .unwrap()
    }

    fn nonkrausex(p: f64) -> QubitChannel {
        let q = (1.0 - p).sqrt();
        validate(vec![
            ComplexMat::real2([[q, 0.0], [0.0, 0.0]]),
            ComplexMat::real2([[0.0, q], [0.0, 0.0]]),
            ComplexMat::identity(2).scale_re(p.sqrt()),
        ])
        .unwrap()
    }

    #[test]
    fn identity_channel() {
        let id = QubitChannel::identity();
        let r = id.report();
        assert!(r.unital);
        assert_eq!(r.choi_rank, 1);
        assert!(id.choi().rho().max_abs_diff(bell_state(1).unwrap().rho()) < 1e-15);
        let x = ComplexMat::from_rows2([[re(0.3), c(0.1, 0.2)], [c(0.1, -0.2), re(0.7)]]);
        assert_eq!(id.apply(&x), x);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(validate(vec![]), Err(Error::EmptyKraus)));
        assert!(matches!(
            validate(vec![ComplexMat::identity(2).scale_re(0.9)]),
            Err(Error::Completeness { .. })
        ));
        assert!(matches!(
            validate(vec![ComplexMat::identity(4)]),
            Err(Error::Dimension { .. })
        ));
        let many = vec![ComplexMat::identity(2).scale_re(1.0 / 3.0); 9];
        assert!(matches!(validate(many), Err(Error::TooManyKraus(9))));
    }

    #[test]
    fn weighted_pauli_with_negative_weight_is_not_cp() {
        let p: f64 = 0.4;
        let w12 = (3.0 - p) / (6.0 * (2.0 + p));
        let terms = [
            (2.0 / 3.0, ComplexMat::pauli(0)),
            (w12, ComplexMat::pauli(1)),
            (w12, ComplexMat::pauli(2)),
            ((2.0 * p - 1.0) / (3.0 * (2.0 + p)), ComplexMat::pauli(3)),
        ];
        let err = validate_weighted("lambda_u4", BTreeMap::new(), &terms).unwrap_err();
        match err {
            Error::NotCompletelyPositive { min_eigenvalue } => {
                assert!((min_eigenvalue - (2.0 * p - 1.0) / (3.0 * (2.0 + p))).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!crate::linalg::is_psd(&choi_matrix(&terms), 1e-10));
    }

    #[test]
    fn dephasing_examples() {
        let ch = dephasing(0.3);
        let r = ch.report();
        assert!(r.unital);
        assert_eq!(r.choi_rank, 2);
        let marginal = partial_trace(ch.choi().rho(), Subsystem::Alice).unwrap();
        assert!(marginal.max_abs_diff(&ComplexMat::identity(2).scale_re(0.5)) < 1e-15);

        let plus = ComplexMat::real2([[0.5, 0.5], [0.5, 0.5]]);
        let out = dephasing(0.5).apply(&plus);
        assert!(out.max_abs_diff(&ComplexMat::identity(2).scale_re(0.5)) < 1e-15);

        let p = 0.3;
        let want = bell_state(1).unwrap().mix(&bell_state(4).unwrap(), p).unwrap();
        assert!(ch.choi().rho().max_abs_diff(want.rho()) < 1e-15);

        let orth = ch.orthogonalize();
        assert_eq!(orth.kraus().len(), 2);
        for k in orth.kraus() {
            let off = k[(0, 1)].norm() + k[(1, 0)].norm();
            assert!(off < 1e-12);
        }
    }

    #[test]
    fn nonkrausex_examples() {
        let ch = nonkrausex(0.6);
        let r = ch.report();
        assert!(!r.unital);
        assert_eq!(r.choi_rank, 3);
        let p = 0.6;
        let zero = ComplexMat::diag(&[ONE, ZERO]);
        let want = bell_state(1).unwrap().rho().scale_re(p)
            + kron(&ComplexMat::identity(2).scale_re(0.5), &zero).scale_re(1.0 - p);
        assert!(ch.choi().rho().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn amplitude_damping_to_ground() {
        let ch = validate(vec![
            ComplexMat::real2([[1.0, 0.0], [0.0, 0.0]]),
            ComplexMat::real2([[0.0, 1.0], [0.0, 0.0]]),
        ])
        .unwrap();
        let out = ch.apply(&ComplexMat::identity(2).scale_re(0.5));
        assert!(out.max_abs_diff(&ComplexMat::real2([[1.0, 0.0], [0.0, 0.0]])) < 1e-15);
    }

    #[test]
    fn rotation_by_hadamard_mixing() {
        let ch = dephasing(0.5);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let w = vec![vec![re(h), re(h)], vec![re(h), re(-h)]];
        let rot = ch.rotate_kraus(&w).unwrap();
        let p0 = ComplexMat::real2([[1.0, 0.0], [0.0, 0.0]]);
        let p1 = ComplexMat::real2([[0.0, 0.0], [0.0, 1.0]]);
        assert!(rot.kraus()[0].max_abs_diff(&p0) < 1e-15);
        assert!(rot.kraus()[1].max_abs_diff(&p1) < 1e-15);
        assert!(rot.action_distance(&ch) < 1e-12);

        let bad = vec![vec![re(1.0), re(1.0)], vec![ZERO, re(1.0)]];
        assert!(matches!(ch.rotate_kraus(&bad), Err(Error::NotUnitary { .. })));

        let perm = vec![
            vec![ZERO, re(1.0), ZERO],
            vec![ZERO, ZERO, re(1.0)],
            vec![re(1.0), ZERO, ZERO],
        ];
        let rot = nonkrausex(0.4).rotate_kraus(&perm).unwrap();
        assert!(rot.action_distance(&nonkrausex(0.4)) < 1e-15);
    }

    #[test]
    fn orthogonalize_drops_redundant_zeros() {
        let zero = ComplexMat::zeros(2);
        let ch = validate(vec![ComplexMat::identity(2), zero, zero]).unwrap();
        let orth = ch.orthogonalize();
        assert_eq!(orth.kraus().len(), 1);
        assert!(orth.kraus()[0].max_abs_diff(&ComplexMat::identity(2)) < 1e-12);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let ch = nonkrausex(0.123456789);
        let text = ch.to_json().unwrap();
        let back = QubitChannel::from_json(&text).unwrap();
        assert_eq!(back, ch);
        let bad = r#"{"name":"x","kraus":[[[1,0],[0,0],[0,0]]]}"#;
        assert!(QubitChannel::from_json(bad).is_err());
    }

    /// Random channel: Stinespring isometry from a random 4x2 complex block.
    pub(crate) fn random_channel(x: &[f64]) -> QubitChannel {
        let n = x.len() / 8;
        let blocks: Vec<ComplexMat> = (0..n)
            .map(|k| {
                let e = &x[8 * k..8 * k + 8];
                ComplexMat::from_rows2([[c(e[0], e[1]), c(e[2], e[3])], [c(e[4], e[5]), c(e[6], e[7])]])
            })
            .collect();
        let g: ComplexMat = blocks.iter().map(|b| b.adjoint() * *b).sum();
        let g_inv_sqrt = crate::linalg::pd_inv_sqrt(&g).unwrap();
        validate(blocks.iter().map(|b| *b * g_inv_sqrt).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn choi_round_trip(x in prop::collection::vec(-1.0f64..1.0, 32)) {
            let ch = random_channel(&x);
            let orth = ch.orthogonalize();
            prop_assert!(orth.action_distance(&ch) < 1e-10);
            prop_assert_eq!(orth.kraus().len(), ch.report().choi_rank);
            for (i, a) in orth.kraus().iter().enumerate() {
                for (j, b) in orth.kraus().iter().enumerate() {
                    if i != j {
                        prop_assert!(a.hs_inner(b).norm() < 1e-10);
                    }
                }
            }
            let marg = partial_trace(ch.choi().rho(), Subsystem::Alice).unwrap();
            prop_assert!(marg.max_abs_diff(&ComplexMat::identity(2).scale_re(0.5)) < EPS_CPTP);
        }

        #[test]
        fn concurrence_is_monotone(x in prop::collection::vec(-1.0f64..1.0, 24), a in 0.5f64..0.99) {
            let ch = random_channel(&x);
            let s = pure_state(a).unwrap();
            let out = ch.apply_to_bob(&s).unwrap();
            prop_assert!(out.concurrence() <= s.concurrence() + 1e-10);
        }

        #[test]
        fn rank_one_choi_is_uqt(u in prop::array::uniform4(-1.0f64..1.0)) {
            let n = u.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-6);
            let [w, a, b, d] = u.map(|v| v / n);
            let unitary = ComplexMat::from_rows2([[c(w, d), c(b, a)], [c(-b, a), c(w, -d)]]);
            let ch = validate(vec![unitary]).unwrap();
            prop_assert_eq!(ch.report().choi_rank, 1);
            prop_assert!(ch.choi().profile().uqt);
        }

        #[test]
        fn unital_choi_has_flat_bob_marginal(p in prop::array::uniform4(0.0f64..1.0)) {
            let total: f64 = p.iter().sum::<f64>().max(1e-9);
            let ch = validate((0..4).map(|k| ComplexMat::pauli(k).scale_re((p[k] / total).sqrt())).collect()).unwrap();
            prop_assert!(ch.is_unital());
            prop_assert!(ch.choi_bob_marginal().max_abs_diff(&ComplexMat::identity(2).scale_re(0.5)) < EPS_CPTP);
        }
    }
}

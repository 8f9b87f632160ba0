//! Dense complex linear algebra for 2x2 and 4x4 operators.
//!
//! Everything in this crate lives on one or two qubits, so [`ComplexMat`]
//! stores its entries inline and is `Copy`. Eigenproblems are handed to
//! nalgebra; results come back sorted descending with a fixed phase.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hermiticity tolerance (max-norm of `M - M^dag`).
pub const EPS_HERM: f64 = 1e-10;
/// Eigen-decomposition reconstruction tolerance.
pub const EPS_EIG: f64 = 1e-10;
/// Default relative tolerance for [`numeric_rank`].
pub const RANK_TOL: f64 = 1e-9;


pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Which qubit of a two-qubit operator. Alice is the leftmost tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Alice,
    Bob,
}

impl Subsystem {
    /// 1-based index as used in `Tr_1` / `Tr_2` notation.
    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Subsystem::Alice),
            2 => Ok(Subsystem::Bob),
            other => Err(Error::Subsystem(other)),
        }
    }
}

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMat {
    dim: usize,
    data: [C64; 16],
}

impl fmt::Debug for ComplexMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMat({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for col in 0..self.dim {
                let z = self[(r, col)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMat {
    /// Zero matrix. Panics for dimensions other than 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "ComplexMat dimension must be 2 or 4, got {dim}");
        ComplexMat { dim, data: [ZERO; 16] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Build from row-major entries; the length fixes the dimension.
    pub fn from_entries(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(Error::UnsupportedDimension((n as f64).sqrt() as usize)),
        };
        let mut m = Self::zeros(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for (r, row) in rows.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                m[(r, col)] = *z;
            }
        }
        m
    }

    pub fn from_rows4(rows: [[C64; 4]; 4]) -> Self {
        let mut m = Self::zeros(4);
        for (r, row) in rows.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                m[(r, col)] = *z;
            }
        }
        m
    }

    pub fn real2(rows: [[f64; 2]; 2]) -> Self {
        Self::from_rows2(rows.map(|row| row.map(re)))
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (k, z) in values.iter().enumerate() {
            m[(k, k)] = *z;
        }
        m
    }

    /// Pauli matrix `sigma_k`, with `k = 0` the identity.
    pub fn pauli(k: usize) -> Self {
        match k {
            0 => Self::identity(2),
            1 => Self::from_rows2([[ZERO, ONE], [ONE, ZERO]]),
            2 => Self::from_rows2([[ZERO, -I], [I, ZERO]]),
            3 => Self::from_rows2([[ONE, ZERO], [ZERO, -ONE]]),
            _ => panic!("Pauli index {k} out of range 0..=3"),
        }
    }

    /// Projector `|v><v|` (not normalised).
    pub fn outer(v: &[C64]) -> Self {
        let mut m = Self::zeros(v.len());
        for r in 0..v.len() {
            for col in 0..v.len() {
                m[(r, col)] = v[r] * v[col].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for col in 0..self.dim {
                m[(r, col)] = self[(col, r)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for col in 0..self.dim {
                m[(r, col)] = self[(col, r)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut m = *self;
        for z in m.data[..self.dim * self.dim].iter_mut() {
            *z = f(*z);
        }
        m
    }

    pub fn scale(&self, k: C64) -> Self {
        self.map(|z| z * k)
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.map(|z| z * k)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// `v^dag M v` style matrix-vector product `M v`.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| (0..self.dim).map(|col| self[(r, col)] * v[col]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        (*self - *other).max_abs()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_re(0.5)
    }

    /// `Tr(A^dag B)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::Dimension { expected: dim, got: self.dim })
        }
    }
}

impl Index<(usize, usize)> for ComplexMat {
    type Output = C64;
    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        debug_assert!(r < self.dim && col < self.dim);
        &self.data[r * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.dim && col < self.dim);
        &mut self.data[r * self.dim + col]
    }
}

impl Add for ComplexMat {
    type Output = ComplexMat;
    fn add(mut self, rhs: ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        for k in 0..self.dim * self.dim {
            self.data[k] += rhs.data[k];
        }
        self
    }
}

impl Sub for ComplexMat {
    type Output = ComplexMat;
    fn sub(mut self, rhs: ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        for k in 0..self.dim * self.dim {
            self.data[k] -= rhs.data[k];
        }
        self
    }
}

impl Neg for ComplexMat {
    type Output = ComplexMat;
    fn neg(self) -> ComplexMat {
        self.map(|z| -z)
    }
}

impl Mul for ComplexMat {
    type Output = ComplexMat;
    fn mul(self, rhs: ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = ComplexMat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for col in 0..n {
                    out.data[r * n + col] += a * rhs.data[k * n + col];
                }
            }
        }
        out
    }
}

impl std::iter::Sum for ComplexMat {
    fn sum<It: Iterator<Item = ComplexMat>>(mut iter: It) -> ComplexMat {
        let first = iter.next().expect("sum of an empty matrix iterator");
        iter.fold(first, |acc, m| acc + m)
    }
}

/// Kronecker product of two single-qubit operators.
pub fn tensor(a: &ComplexMat, b: &ComplexMat) -> Result<ComplexMat> {
    a.expect_dim(2)?;
    b.expect_dim(2)?;
    let mut m = ComplexMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(m)
}

/// Infallible Kronecker product for operands already known to be 2x2.
pub(crate) fn kron(a: &ComplexMat, b: &ComplexMat) -> ComplexMat {
    tensor(a, b).expect("kron operands must be 2x2")
}

/// Reduced operator on `keep`, tracing out the other qubit.
pub fn partial_trace(m: &ComplexMat, keep: Subsystem) -> Result<ComplexMat> {
    m.expect_dim(4)?;
    let mut out = ComplexMat::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Subsystem::Alice => (0..2).map(|k| m[(2 * i + k, 2 * j + k)]).sum(),
                Subsystem::Bob => (0..2).map(|k| m[(2 * k + i, 2 * k + j)]).sum(),
            };
        }
    }
    Ok(out)
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

impl EigenDecomp {
    pub fn reconstruct(&self) -> ComplexMat {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&lam, v)| ComplexMat::outer(v).scale_re(lam))
            .sum()
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    /// Apply a real function to the spectrum: `sum f(l_k) |v_k><v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMat {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&lam, v)| ComplexMat::outer(v).scale_re(f(lam)))
            .sum()
    }
}

pub fn hermitian_eig(m: &ComplexMat) -> Result<EigenDecomp> {
    let residual = m.hermiticity_residual();
    if residual > EPS_HERM {
        return Err(Error::NotHermitian { residual });
    }
    let n = m.dim();
    let a = m.hermitian_part();
    let eig = nalgebra::DMatrix::from_fn(n, n, |r, col| a[(r, col)]).symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let col: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            (eig.eigenvalues[k], fix_phase(col))
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal));
    canonicalize_clusters(&mut pairs);

    Ok(EigenDecomp {
        values: pairs.iter().map(|p| p.0).collect(),
        vectors: pairs.into_iter().map(|p| p.1).collect(),
    })
}

/// Rotate a vector so its first non-negligible component is real positive.
pub fn fix_phase(mut v: Vec<C64>) -> Vec<C64> {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let rot = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
    v
}

fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn lexicographic_desc(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > 1e-12 {
                return q.partial_cmp(&p).unwrap_or(Ordering::Equal);
            }
        }
    }
    Ordering::Equal
}

/// Within each degenerate cluster: modified Gram-Schmidt, phase fixing and a
/// deterministic lexicographic order.
fn canonicalize_clusters(pairs: &mut [(f64, Vec<C64>)]) {
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() {
            let tol = EPS_EIG * pairs[start].0.abs().max(1.0);
            if (pairs[start].0 - pairs[end].0).abs() > tol {
                break;
            }
            end += 1;
        }
        if end - start > 1 {
            let cluster = &mut pairs[start..end];
            for k in 0..cluster.len() {
                let (done, rest) = cluster.split_at_mut(k);
                let v = &mut rest[0].1;
                for prev in done.iter() {
                    let proj = inner(&prev.1, v);
                    for (z, p) in v.iter_mut().zip(&prev.1) {
                        *z -= proj * p;
                    }
                }
                normalize(v);
                *v = fix_phase(std::mem::take(v));
            }
            cluster.sort_by(|x, y| lexicographic_desc(&x.1, &y.1));
        }
        start = end;
    }
}

/// Positive semidefinite within `tol`. Non-Hermitian input is never PSD.
pub fn is_psd(m: &ComplexMat, tol: f64) -> bool {
    match hermitian_eig(m) {
        Ok(eig) => eig.min_value() >= -tol,
        Err(_) => false,
    }
}

/// Number of eigenvalues above `tol` times the largest one.
pub fn numeric_rank(m: &ComplexMat, tol: f64) -> usize {
    let eig = match hermitian_eig(m) {
        Ok(e) => e,
        Err(_) => return 0,
    };
    let top = eig.max_value();
    if top <= 0.0 {
        return 0;
    }
    eig.values.iter().filter(|&&lam| lam > tol * top).count()
}

/// Principal square root of a PSD matrix; tiny negative eigenvalues clip to 0.
pub fn psd_sqrt(m: &ComplexMat) -> Result<ComplexMat> {
    Ok(hermitian_eig(m)?.map_spectrum(|lam| lam.max(0.0).sqrt()))
}

/// Inverse square root of a positive definite matrix.
pub fn pd_inv_sqrt(m: &ComplexMat) -> Result<ComplexMat> {
    let eig = hermitian_eig(m)?;
    let min = eig.min_value();
    if min <= 0.0 {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(eig.map_spectrum(|lam| 1.0 / lam.sqrt()))
}

/// Real 3x3 matrix, row-major.
pub type Real3 = [[f64; 3]; 3];

pub fn det3(m: &Real3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn transpose3(m: &Real3) -> Real3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = *x;
        }
    }
    t
}

pub fn matmul3(a: &Real3, b: &Real3) -> Real3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Eigenvalues (descending) and eigenvectors (columns of the returned matrix)
/// of a real symmetric 3x3 matrix.
pub fn symmetric3_eig(m: &Real3) -> ([f64; 3], Real3) {
    let a = nalgebra::Matrix3::from_fn(|i, j| 0.5 * (m[i][j] + m[j][i]));
    let eig = a.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&x, &y| eig.eigenvalues[y].partial_cmp(&eig.eigenvalues[x]).unwrap_or(Ordering::Equal));
    let values = order.map(|k| eig.eigenvalues[k]);
    let mut vecs = [[0.0; 3]; 3];
    for (col, &k) in order.iter().enumerate() {
        for r in 0..3 {
            vecs[r][col] = eig.eigenvectors[(r, k)];
        }
    }
    (values, vecs)
}

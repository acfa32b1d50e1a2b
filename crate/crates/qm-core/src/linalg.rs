//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. All physics runs with ħ = 1.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{QmError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Max-entry tolerance for accepting a matrix as Hermitian (scaled by max(1, ‖M‖)).
pub const HERM_TOL: f64 = 1e-12;
/// Reconstruction / unitarity tolerance.
pub const RECON_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Build a matrix from row-major rows.
pub fn cmat(rows: &[&[C64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| rows[i][j])
}

/// Real row-major rows to a complex matrix.
pub fn rmat(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| r(rows[i][j]))
}

pub fn cvec(v: &[C64]) -> CVector {
    CVector::from_column_slice(v)
}

pub fn rvec(v: &[f64]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&x| r(x)))
}

pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag_real(d: &[f64]) -> CMatrix {
    let n = d.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { r(d[i]) } else { ZERO })
}

pub fn sigma_x() -> CMatrix {
    rmat(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> CMatrix {
    cmat(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn sigma_z() -> CMatrix {
    rmat(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// n̂·σ for a 3-vector.
pub fn sigma_dot(n: [f64; 3]) -> CMatrix {
    sigma_x() * r(n[0]) + sigma_y() * r(n[1]) + sigma_z() * r(n[2])
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn is_hermitian(m: &CMatrix) -> bool {
    m.is_square() && hermiticity_residual(m) <= HERM_TOL * max_abs(m).max(1.0)
}

pub fn unitarity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m.adjoint() * m - eye(m.nrows())))
}

pub fn is_unitary(m: &CMatrix) -> bool {
    m.is_square() && unitarity_residual(m) <= RECON_TOL
}

pub fn require_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(QmError::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !is_hermitian(m) {
        return Err(QmError::NotHermitian(hermiticity_residual(m)));
    }
    Ok(())
}

/// Kronecker product with (A⊗B)[iq+k, jq+l] = A[i,j]·B[k,l].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Kronecker product of a list, left to right.
pub fn kron_all(ms: &[CMatrix]) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for m in ms {
        out = kron(&out, m);
    }
    out
}

/// ⟨a|b⟩.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

pub fn normalized(v: &CVector) -> CVector {
    let n = v.norm();
    v / r(n)
}

/// ⟨v|A|v⟩ as a complex number.
pub fn expect(v: &CVector, a: &CMatrix) -> C64 {
    v.dotc(&(a * v))
}

/// Outer product |a⟩⟨b|.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Distance between vectors after removing the best global phase.
pub fn phase_distance(a: &CVector, b: &CVector) -> f64 {
    let ov = a.dotc(b);
    let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
    (a * ph - b).norm()
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: CMatrix,
}

impl EigenSystem {
    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    /// V Λ V†.
    pub fn reconstruct(&self) -> CMatrix {
        let lam = diag_real(&self.values);
        &self.vectors * lam * self.vectors.adjoint()
    }

    /// V f(Λ) V†.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn eigh(m: &CMatrix) -> Result<EigenSystem> {
    require_hermitian(m)?;
    let sym = (m + m.adjoint()) * r(0.5);
    let se = SymmetricEigen::new(sym);
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    require_hermitian(m)?;
    let sym = (m + m.adjoint()) * r(0.5);
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// e^{−iHt} through the eigenbasis of H.
pub fn expm_i(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let es = eigh(h)?;
    Ok(es.apply_fn(|l| C64::from_polar(1.0, -l * t)))
}

/// General matrix exponential: scaling and squaring around a Taylor series.
///
/// Used for non-normal generators (displacement, squeezing) where eigh does not apply.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(QmError::Dimension("expm needs a square matrix".into()));
    }
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0u32;
    let mut scale = 1.0;
    while norm1 * scale > 0.5 {
        scale *= 0.5;
        s += 1;
    }
    let x = a * r(scale);
    let mut term = eye(n);
    let mut sum = eye(n);
    let mut converged = false;
    for k in 1..=60 {
        term = &term * &x * r(1.0 / k as f64);
        sum += &term;
        if max_abs(&term) <= 1e-18 * max_abs(&sum).max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QmError::Convergence("Taylor series for expm".into()));
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    Ok(sum)
}

//! Angular momentum: spin-j matrices, Clebsch–Gordan tables, Wigner rotation matrices and
//! low-order spherical harmonics.
//!
//! Bases are |j, m⟩ with m descending from +j. Half-integers are carried as twice their value.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::linalg::{self, expm, kron, r, CMatrix, C64, I};
use crate::{QmError, Result};

/// 2x as an integer, rejecting values that are not half-integers.
pub fn twice(x: f64) -> Result<i32> {
    let t = 2.0 * x;
    if (t - t.round()).abs() > 1e-9 {
        return Err(QmError::InvalidArgument(format!("{x} is not a half-integer")));
    }
    Ok(t.round() as i32)
}

fn m_values(two_j: i32) -> impl Iterator<Item = i32> {
    (0..=two_j).map(move |k| two_j - 2 * k)
}

#[derive(Clone, Debug)]
pub struct JRep {
    pub two_j: i32,
    pub jz: CMatrix,
    pub jp: CMatrix,
    pub jm: CMatrix,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub j2: CMatrix,
}

impl JRep {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

pub fn j_rep(j: f64) -> Result<JRep> {
    let two_j = twice(j)?;
    if two_j < 0 {
        return Err(QmError::InvalidArgument("j must be nonnegative".into()));
    }
    Ok(j_rep_twice(two_j))
}

pub fn j_rep_twice(two_j: i32) -> JRep {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let ms: Vec<f64> = m_values(two_j).map(|t| t as f64 / 2.0).collect();
    let jz = linalg::diag_real(&ms);
    let mut jp = CMatrix::zeros(d, d);
    // J+|j,m⟩ = √((j−m)(j+m+1)) |j,m+1⟩; m+1 sits one row above
    for k in 1..d {
        let m = ms[k];
        jp[(k - 1, k)] = r(((j - m) * (j + m + 1.0)).sqrt());
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * r(0.5);
    let jy = (&jp - &jm) * C64::new(0.0, -0.5);
    let j2 = &jx * &jx + &jy * &jy + &jz * &jz;
    JRep { two_j, jz, jp, jm, jx, jy, j2 }
}

/// Clebsch–Gordan coefficients for j₁ ⊗ j₂, keyed by twice (j, m, m₁, m₂).
#[derive(Clone, Debug)]
pub struct CGTable {
    pub two_j1: i32,
    pub two_j2: i32,
    coeffs: HashMap<(i32, i32, i32, i32), f64>,
    /// Columns are coupled states |j, m⟩ (j descending, then m descending) in the product basis.
    pub transform: DMatrix<f64>,
    pub labels: Vec<(i32, i32)>,
}

impl CGTable {
    /// ⟨j₁ m₁; j₂ m₂ | j m⟩, zero outside the selection rules.
    pub fn coeff(&self, j: f64, m: f64, m1: f64, m2: f64) -> f64 {
        match (twice(j), twice(m), twice(m1), twice(m2)) {
            (Ok(a), Ok(b), Ok(c), Ok(d)) => self.coeff_twice(a, b, c, d),
            _ => 0.0,
        }
    }

    pub fn coeff_twice(&self, two_j: i32, two_m: i32, two_m1: i32, two_m2: i32) -> f64 {
        self.coeffs.get(&(two_j, two_m, two_m1, two_m2)).copied().unwrap_or(0.0)
    }

    /// Allowed total j values, descending, as twice their value.
    pub fn two_js(&self) -> Vec<i32> {
        let hi = self.two_j1 + self.two_j2;
        let lo = (self.two_j1 - self.two_j2).abs();
        (lo..=hi).rev().step_by(2).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(i32, i32, i32, i32), &f64)> {
        self.coeffs.iter()
    }

    /// Projector onto total angular momentum j in the product space.
    pub fn projector(&self, j: f64) -> Result<DMatrix<f64>> {
        let tj = twice(j)?;
        let d = self.transform.nrows();
        let mut p = DMatrix::zeros(d, d);
        for (col, &(lj, _)) in self.labels.iter().enumerate() {
            if lj == tj {
                let v = self.transform.column(col);
                p += &v * v.transpose();
            }
        }
        Ok(p)
    }
}

fn product_index(two_j2: i32, k1: usize, k2: usize) -> usize {
    k1 * (two_j2 as usize + 1) + k2
}

/// Highest weight + lowering + Gram–Schmidt, Condon–Shortley phase.
pub fn clebsch_gordan(j1: f64, j2: f64) -> Result<CGTable> {
    let (t1, t2) = (twice(j1)?, twice(j2)?);
    if t1 < 0 || t2 < 0 {
        return Err(QmError::InvalidArgument("j must be nonnegative".into()));
    }
    let (d1, d2) = (t1 as usize + 1, t2 as usize + 1);
    let dim = d1 * d2;
    let r1 = j_rep_twice(t1);
    let r2 = j_rep_twice(t2);
    let lower = (kron(&r1.jm, &linalg::eye(d2)) + kron(&linalg::eye(d1), &r2.jm)).map(|z| z.re);
    let m1s: Vec<i32> = m_values(t1).collect();
    let m2s: Vec<i32> = m_values(t2).collect();
    let two_m_of = |idx: usize| m1s[idx / d2] + m2s[idx % d2];

    let mut built: Vec<(i32, i32, nalgebra::DVector<f64>)> = Vec::with_capacity(dim);
    let hi = t1 + t2;
    let lo = (t1 - t2).abs();
    for tj in (lo..=hi).rev().step_by(2) {
        // highest weight: the part of the m = j subspace orthogonal to larger j
        let mut top: Option<nalgebra::DVector<f64>> = None;
        for idx in (0..dim).filter(|&i| two_m_of(i) == tj) {
            let mut v = nalgebra::DVector::zeros(dim);
            v[idx] = 1.0;
            for (_, tm, u) in &built {
                if *tm == tj {
                    let ov = u.dot(&v);
                    v -= u * ov;
                }
            }
            let n = v.norm();
            if n > 1e-8 {
                top = Some(v / n);
                break;
            }
        }
        let mut v = top.ok_or_else(|| QmError::Convergence("no highest-weight state".into()))?;
        // Condon–Shortley: the m₁ = j₁ component is positive
        let k2 = ((t2 - (tj - t1)) / 2) as usize;
        let anchor = v[product_index(t2, 0, k2)];
        if anchor < 0.0 {
            v = -v;
        }
        let mut tm = tj;
        loop {
            built.push((tj, tm, v.clone()));
            if tm == -tj {
                break;
            }
            let (jj, mm) = (tj as f64 / 2.0, tm as f64 / 2.0);
            let norm = ((jj + mm) * (jj - mm + 1.0)).sqrt();
            v = &lower * &v / norm;
            tm -= 2;
        }
    }

    let mut coeffs = HashMap::new();
    let mut transform = DMatrix::zeros(dim, dim);
    let mut labels = Vec::with_capacity(dim);
    for (col, (tj, tm, v)) in built.iter().enumerate() {
        transform.set_column(col, v);
        labels.push((*tj, *tm));
        for idx in 0..dim {
            if v[idx].abs() > 1e-14 {
                coeffs.insert((*tj, *tm, m1s[idx / d2], m2s[idx % d2]), v[idx]);
            }
        }
    }
    Ok(CGTable { two_j1: t1, two_j2: t2, coeffs, transform, labels })
}

/// Wigner 3j symbol from the corresponding Clebsch–Gordan coefficient.
pub fn wigner_3j(table: &CGTable, j3: f64, m1: f64, m2: f64, m3: f64) -> Result<f64> {
    let (j1, j2) = (table.two_j1 as f64 / 2.0, table.two_j2 as f64 / 2.0);
    if (m1 + m2 + m3).abs() > 1e-9 {
        return Ok(0.0);
    }
    let ph = twice(j1 - j2 - m3)?;
    if ph % 2 != 0 {
        return Err(QmError::InvalidArgument("j1 − j2 − m3 must be an integer".into()));
    }
    let sign = if (ph / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign / (2.0 * j3 + 1.0).sqrt() * table.coeff(j3, -m3, m1, m2))
}

/// d^{(j)}(β) = exp(−iβJ_y), real.
pub fn wigner_d(j: f64, beta: f64) -> Result<DMatrix<f64>> {
    let rep = j_rep(j)?;
    let u = expm(&(&rep.jy * (-I * beta)))?;
    Ok(u.map(|z| z.re))
}

/// D^{(j)}(α, β, γ) = e^{−iαJ_z} e^{−iβJ_y} e^{−iγJ_z}.
#[allow(non_snake_case)]
pub fn wigner_D(j: f64, alpha: f64, beta: f64, gamma: f64) -> Result<CMatrix> {
    let two_j = twice(j)?;
    let d = wigner_d(j, beta)?;
    let ms: Vec<f64> = m_values(two_j).map(|t| t as f64 / 2.0).collect();
    Ok(CMatrix::from_fn(d.nrows(), d.ncols(), |a, b| {
        C64::from_polar(1.0, -alpha * ms[a]) * d[(a, b)] * C64::from_polar(1.0, -gamma * ms[b])
    }))
}

/// Rotates ℓ = 1 coefficients over (Y₁¹, Y₁⁰, Y₁⁻¹): c′ = D⁽¹⁾(α, β, γ) c.
pub fn rotate_l1_coeffs(c: [C64; 3], alpha: f64, beta: f64, gamma: f64) -> Result<[C64; 3]> {
    let d = wigner_D(1.0, alpha, beta, gamma)?;
    let v = d * linalg::cvec(&c);
    Ok([v[0], v[1], v[2]])
}

/// Highest ℓ supported by [`sph_harm`].
pub const SPH_LMAX: u32 = 3;

/// Y_ℓ^m(θ, φ) with the Condon–Shortley phase, ℓ ≤ 3.
pub fn sph_harm(l: u32, m: i32, theta: f64, phi: f64) -> Result<C64> {
    if l > SPH_LMAX {
        return Err(QmError::InvalidArgument(format!("l = {l} above {SPH_LMAX}")));
    }
    if m.unsigned_abs() > l {
        return Err(QmError::InvalidArgument(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let am = m.unsigned_abs();
    let x = theta.cos();
    let plm = assoc_legendre(l, am, x);
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
    let y = C64::from_polar(norm * plm, am as f64 * phi);
    if m >= 0 {
        Ok(y)
    } else if am % 2 == 0 {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// P_ℓ^m(x) including (−1)^m.
fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut prev = pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = pm1;
        pm1 = next;
    }
    pm1
}

/// ∫ f(θ, φ) dΩ with Gauss–Legendre in cos θ and the trapezoid rule in φ.
pub fn integrate_sphere(f: impl Fn(f64, f64) -> C64, n_theta: usize, n_phi: usize) -> C64 {
    let (xs, ws) = crate::numerics::gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        let th = x.acos();
        for k in 0..n_phi {
            acc += f(th, k as f64 * dphi) * (w * dphi);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, commutator, max_abs, rmat, sigma_x, sigma_y, sigma_z};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dmax(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn spin_one_matrices() {
        let rep = j_rep(1.0).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!(max_abs(&(&rep.jx - rmat(&[&[0.0, s, 0.0], &[s, 0.0, s], &[0.0, s, 0.0]]))) < 1e-15);
        let want_y = linalg::cmat(&[
            &[r(0.0), c(0.0, -s), r(0.0)],
            &[c(0.0, s), r(0.0), c(0.0, -s)],
            &[r(0.0), c(0.0, s), r(0.0)],
        ]);
        assert!(max_abs(&(&rep.jy - want_y)) < 1e-15);
        assert!(max_abs(&(&rep.jz - linalg::diag_real(&[1.0, 0.0, -1.0]))) < 1e-15);
        let half = j_rep(0.5).unwrap();
        assert!(max_abs(&(&half.jx - sigma_x() * r(0.5))) < 1e-15);
        assert!(max_abs(&(&half.jy - sigma_y() * r(0.5))) < 1e-15);
        assert!(max_abs(&(&half.jz - sigma_z() * r(0.5))) < 1e-15);
        let two = j_rep(2.0).unwrap();
        let ev = linalg::eigvalsh(&two.jz).unwrap();
        assert_eq!(ev.iter().map(|x| x.round() as i32).collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert!(j_rep(0.3).is_err());
    }

    #[test]
    fn algebra_for_many_j() {
        for tj in 0..=8 {
            let rep = j_rep_twice(tj);
            let j = rep.j();
            assert!(max_abs(&(commutator(&rep.jx, &rep.jy) - &rep.jz * I)) < 1e-12);
            assert!(max_abs(&(&rep.j2 - linalg::eye(rep.dim()) * r(j * (j + 1.0)))) < 1e-12);
        }
    }

    #[test]
    fn cg_two_halves() {
        let t = clebsch_gordan(0.5, 0.5).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!((t.coeff(1.0, 0.0, 0.5, -0.5) - s).abs() < 1e-12);
        assert!((t.coeff(1.0, 0.0, -0.5, 0.5) - s).abs() < 1e-12);
        assert!((t.coeff(0.0, 0.0, 0.5, -0.5) - s).abs() < 1e-12);
        assert!((t.coeff(0.0, 0.0, -0.5, 0.5) + s).abs() < 1e-12);
        assert!((t.coeff(1.0, 1.0, 0.5, 0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cg_one_half_table() {
        let t = clebsch_gordan(1.0, 0.5).unwrap();
        let (a, b) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
        assert!((t.coeff(1.5, 0.5, 0.0, 0.5) - a).abs() < 1e-12);
        assert!((t.coeff(1.5, 0.5, 1.0, -0.5) - b).abs() < 1e-12);
        assert!((t.coeff(0.5, 0.5, 1.0, -0.5) - a).abs() < 1e-12);
        assert!((t.coeff(0.5, 0.5, 0.0, 0.5) + b).abs() < 1e-12);
        assert!((t.coeff(0.5, -0.5, 0.0, -0.5) - b).abs() < 1e-12);
        assert!((t.coeff(0.5, -0.5, -1.0, 0.5) + a).abs() < 1e-12);
        assert_eq!(t.coeff(1.5, 0.5, 1.0, 0.5), 0.0);
    }

    #[test]
    fn cg_one_one_singlet_and_ranks() {
        let t = clebsch_gordan(1.0, 1.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((t.coeff(0.0, 0.0, 1.0, -1.0) - s).abs() < 1e-12);
        assert!((t.coeff(0.0, 0.0, 0.0, 0.0) + s).abs() < 1e-12);
        assert!((t.coeff(0.0, 0.0, -1.0, 1.0) - s).abs() < 1e-12);
        let mut total = DMatrix::<f64>::zeros(9, 9);
        for (j, rank) in [(0.0, 1), (1.0, 3), (2.0, 5)] {
            let p = t.projector(j).unwrap();
            assert!(dmax(&(&p * &p), &p) < 1e-12);
            assert_eq!(p.trace().round() as usize, rank);
            total += p;
        }
        assert!(dmax(&total, &DMatrix::identity(9, 9)) < 1e-12);
    }

    #[test]
    fn cg_orthonormality_and_symmetry() {
        for t1 in 0..=5 {
            for t2 in 0..=5 {
                let (j1, j2) = (t1 as f64 / 2.0, t2 as f64 / 2.0);
                let t = clebsch_gordan(j1, j2).unwrap();
                let u = &t.transform;
                let n = u.nrows();
                assert!(dmax(&(u.transpose() * u), &DMatrix::identity(n, n)) < 1e-12);
                assert!(dmax(&(u * u.transpose()), &DMatrix::identity(n, n)) < 1e-12);
                assert_eq!(t.two_js().iter().map(|&tj| tj as usize + 1).sum::<usize>(), n);
                let sw = clebsch_gordan(j2, j1).unwrap();
                for (&(tj, tm, tm1, tm2), &v) in t.entries() {
                    let ph = (t1 + t2 - tj) / 2;
                    let sign = if ph % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((v - sign * sw.coeff_twice(tj, tm, tm2, tm1)).abs() < 1e-12);
                    assert_eq!(tm, tm1 + tm2);
                }
            }
        }
    }

    #[test]
    fn coupled_basis_diagonalizes() {
        let (j1, j2) = (1.5, 1.0);
        let t = clebsch_gordan(j1, j2).unwrap();
        let r1 = j_rep(j1).unwrap();
        let r2 = j_rep(j2).unwrap();
        let (d1, d2) = (r1.dim(), r2.dim());
        let jz = kron(&r1.jz, &linalg::eye(d2)) + kron(&linalg::eye(d1), &r2.jz);
        let jx = kron(&r1.jx, &linalg::eye(d2)) + kron(&linalg::eye(d1), &r2.jx);
        let jy = kron(&r1.jy, &linalg::eye(d2)) + kron(&linalg::eye(d1), &r2.jy);
        let j2 = &jx * &jx + &jy * &jy + &jz * &jz;
        let u = t.transform.map(r);
        let zz = u.adjoint() * &jz * &u;
        let jj = u.adjoint() * &j2 * &u;
        for a in 0..u.nrows() {
            let (tj, tm) = t.labels[a];
            let (jv, mv) = (tj as f64 / 2.0, tm as f64 / 2.0);
            for b in 0..u.nrows() {
                let (wz, wj) = if a == b { (mv, jv * (jv + 1.0)) } else { (0.0, 0.0) };
                assert!((zz[(a, b)] - r(wz)).norm() < 1e-10);
                assert!((jj[(a, b)] - r(wj)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn three_j_known_value() {
        // (1 1 0; 1 −1 0) = 1/√3
        let t = clebsch_gordan(1.0, 1.0).unwrap();
        assert!((wigner_3j(&t, 0.0, 1.0, -1.0, 0.0).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(wigner_3j(&t, 1.0, 1.0, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn wigner_small_d() {
        let b = 0.83;
        let d = wigner_d(0.5, b).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[(b / 2.0).cos(), -(b / 2.0).sin(), (b / 2.0).sin(), (b / 2.0).cos()]);
        assert!(dmax(&d, &want) < 1e-12);
        let s = FRAC_1_SQRT_2;
        let d1 = wigner_d(1.0, PI / 2.0).unwrap();
        let want = DMatrix::from_row_slice(3, 3, &[0.5, -s, 0.5, s, 0.0, -s, 0.5, s, 0.5]);
        assert!(dmax(&d1, &want) < 1e-12);
        assert!(dmax(&wigner_d(2.0, 0.0).unwrap(), &DMatrix::identity(5, 5)) < 1e-14);
        assert!(dmax(&wigner_d(0.5, 2.0 * PI).unwrap(), &(-DMatrix::<f64>::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn wigner_d_composition_and_pi() {
        for tj in 1..=4 {
            let j = tj as f64 / 2.0;
            let a = wigner_d(j, 0.4).unwrap();
            let b = wigner_d(j, 1.1).unwrap();
            assert!(dmax(&(a * b), &wigner_d(j, 1.5).unwrap()) < 1e-12);
            let p = wigner_d(j, PI).unwrap();
            let ms: Vec<i32> = m_values(tj).collect();
            for (r_, &mp) in ms.iter().enumerate() {
                for (c_, &m) in ms.iter().enumerate() {
                    // (−1)^{j−m}; equals (−1)^{j+m} only for integer j
                    let want = if mp == -m {
                        if ((tj - m) / 2) % 2 == 0 { 1.0 } else { -1.0 }
                    } else {
                        0.0
                    };
                    assert!((p[(r_, c_)] - want).abs() < 1e-12, "j={j} m'={mp} m={m}");
                }
            }
        }
    }

    #[test]
    fn l1_rotation_example() {
        let b = PI / 4.0;
        let pz = rotate_l1_coeffs([r(0.0), r(1.0), r(0.0)], 0.0, b, 0.0).unwrap();
        let want = [-0.5, FRAC_1_SQRT_2, 0.5];
        for k in 0..3 {
            assert!((pz[k] - r(want[k])).norm() < 1e-12);
        }
        let px = rotate_l1_coeffs([r(-FRAC_1_SQRT_2), r(0.0), r(FRAC_1_SQRT_2)], 0.0, b, 0.0).unwrap();
        let want = [-0.5, -FRAC_1_SQRT_2, 0.5];
        for k in 0..3 {
            assert!((px[k] - r(want[k])).norm() < 1e-12);
        }
        let v = [c(0.2, 0.1), c(-0.5, 0.3), c(0.0, 0.7)];
        let same = rotate_l1_coeffs(v, 0.0, 0.0, 0.0).unwrap();
        for k in 0..3 {
            assert!((same[k] - v[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn rotated_harmonics_transform_with_d() {
        // Y₁ᵐ at a rotated point mixes through D: Y_m(R⁻¹ r̂) = Σ_{m'} Y_{m'}(r̂) D_{m'm}(R)
        let (a, b, g) = (0.3, 0.9, -0.4);
        let d = wigner_D(1.0, a, b, g).unwrap();
        let rot = |v: [f64; 3]| {
            let rz = |t: f64, v: [f64; 3]| [t.cos() * v[0] - t.sin() * v[1], t.sin() * v[0] + t.cos() * v[1], v[2]];
            let ry = |t: f64, v: [f64; 3]| [t.cos() * v[0] + t.sin() * v[2], v[1], -t.sin() * v[0] + t.cos() * v[2]];
            rz(-g, ry(-b, rz(-a, v)))
        };
        let (th, ph): (f64, f64) = (1.1, 2.3);
        let v = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        let w = rot(v);
        let (th2, ph2) = (w[2].acos(), w[1].atan2(w[0]));
        for (col, m) in [1, 0, -1].into_iter().enumerate() {
            let lhs = sph_harm(1, m, th2, ph2).unwrap();
            let mut rhs = C64::new(0.0, 0.0);
            for (row, mp) in [1, 0, -1].into_iter().enumerate() {
                rhs += sph_harm(1, mp, th, ph).unwrap() * d[(row, col)];
            }
            assert!((lhs - rhs).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn spherical_harmonics_values() {
        for (th, ph) in [(0.3, 1.0), (1.2, -2.0), (2.9, 0.5)] {
            assert!((sph_harm(0, 0, th, ph).unwrap() - r(1.0 / (4.0 * PI).sqrt())).norm() < 1e-15);
            let k = (3.0 / (8.0 * PI)).sqrt();
            assert!((sph_harm(1, 1, th, ph).unwrap() - C64::from_polar(-k * f64::sin(th), ph)).norm() < 1e-14);
            assert!((sph_harm(1, -1, th, ph).unwrap() - C64::from_polar(k * f64::sin(th), -ph)).norm() < 1e-14);
            assert!((sph_harm(1, 0, th, ph).unwrap() - r((3.0 / (4.0 * PI)).sqrt() * f64::cos(th))).norm() < 1e-14);
            let y20 = (5.0 / (16.0 * PI)).sqrt() * (3.0 * f64::cos(th).powi(2) - 1.0);
            assert!((sph_harm(2, 0, th, ph).unwrap() - r(y20)).norm() < 1e-14);
            let y22 = (15.0 / (32.0 * PI)).sqrt() * f64::sin(th).powi(2);
            assert!((sph_harm(2, 2, th, ph).unwrap() - C64::from_polar(y22, 2.0 * ph)).norm() < 1e-14);
        }
        assert!(sph_harm(4, 0, 0.1, 0.1).is_err());
        assert!(sph_harm(1, 2, 0.1, 0.1).is_err());
    }

    #[test]
    fn spherical_harmonics_orthonormal() {
        let n = integrate_sphere(|t, p| r(sph_harm(1, 0, t, p).unwrap().norm_sqr()), 20, 16);
        assert!((n.re - 1.0).abs() < 1e-8);
        let lm: Vec<(u32, i32)> = (0..=3u32).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m))).collect();
        for &(l1, m1) in &lm {
            for &(l2, m2) in &lm {
                let v = integrate_sphere(
                    |t, p| sph_harm(l1, m1, t, p).unwrap().conj() * sph_harm(l2, m2, t, p).unwrap(),
                    20,
                    16,
                );
                let want = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
                assert!((v - r(want)).norm() < 1e-8);
            }
        }
    }
}

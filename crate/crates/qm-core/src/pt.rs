//! Perturbation theory, variational minimization and WKB quantization.

use crate::linalg::{self, eigh, r, CMatrix, CVector};
use crate::numerics::{brent_root, gauss_legendre, minimize};
use crate::oscillator::FockSpace;
use crate::{QmError, Result};

/// Relative gap below which two unperturbed levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// H = H₀ + λV with H₀ diagonalized once.
#[derive(Clone, Debug)]
pub struct PerturbationProblem {
    pub energies: Vec<f64>,
    pub basis: CMatrix,
    /// V in the original basis.
    pub v: CMatrix,
    /// V in the H₀ eigenbasis.
    v_eig: CMatrix,
}

impl PerturbationProblem {
    pub fn new(h0: &CMatrix, v: &CMatrix) -> Result<Self> {
        if h0.shape() != v.shape() {
            return Err(QmError::Dimension("H0 and V differ in shape".into()));
        }
        linalg::require_hermitian(v)?;
        let es = eigh(h0)?;
        let v_eig = es.vectors.adjoint() * v * &es.vectors;
        Ok(PerturbationProblem { energies: es.values, basis: es.vectors, v: v.clone(), v_eig })
    }

    /// H₀ already diagonal with the given energies (basis kept in the given order).
    pub fn from_diagonal(energies: &[f64], v: &CMatrix) -> Result<Self> {
        if v.nrows() != energies.len() {
            return Err(QmError::Dimension("V does not match the level count".into()));
        }
        linalg::require_hermitian(v)?;
        Ok(PerturbationProblem {
            energies: energies.to_vec(),
            basis: linalg::eye(energies.len()),
            v: v.clone(),
            v_eig: v.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    fn scale(&self) -> f64 {
        self.energies.iter().fold(1.0f64, |m, e| m.max(e.abs()))
    }

    /// Levels within the degeneracy tolerance of level `n`, including `n`.
    pub fn degenerate_with(&self, n: usize) -> Vec<usize> {
        let tol = DEGENERACY_TOL * self.scale();
        (0..self.dim()).filter(|&k| (self.energies[k] - self.energies[n]).abs() <= tol).collect()
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.dim() {
            return Err(QmError::Dimension(format!("level {n} out of range")));
        }
        let group = self.degenerate_with(n);
        if group.len() > 1 {
            let other = group.iter().find(|&&k| k != n).copied().unwrap_or(n);
            return Err(QmError::Degenerate((self.energies[other] - self.energies[n]).abs()));
        }
        Ok(())
    }
}

/// E_n⁽¹⁾ = ⟨n|V|n⟩.
pub fn pt_first(p: &PerturbationProblem, n: usize) -> Result<f64> {
    p.check_level(n)?;
    Ok(p.v_eig[(n, n)].re)
}

/// |n⁽¹⁾⟩ = Σ_{k≠n} V_kn/(E_n − E_k)|k⟩ in the original basis.
pub fn pt_state_first(p: &PerturbationProblem, n: usize) -> Result<CVector> {
    p.check_level(n)?;
    let mut coeffs = CVector::zeros(p.dim());
    for k in 0..p.dim() {
        if k != n {
            coeffs[k] = p.v_eig[(k, n)] / (p.energies[n] - p.energies[k]);
        }
    }
    Ok(&p.basis * coeffs)
}

/// E_n⁽²⁾ = Σ_{k≠n} |V_kn|²/(E_n − E_k).
pub fn pt_second(p: &PerturbationProblem, n: usize) -> Result<f64> {
    p.check_level(n)?;
    Ok((0..p.dim())
        .filter(|&k| k != n)
        .map(|k| p.v_eig[(k, n)].norm_sqr() / (p.energies[n] - p.energies[k]))
        .sum())
}

/// First-order corrections in a degenerate block: eigenvalues of V restricted to `levels`,
/// with zeroth-order vectors (columns) in the original basis.
pub fn pt_degenerate(p: &PerturbationProblem, levels: &[usize]) -> Result<(Vec<f64>, CMatrix)> {
    if levels.is_empty() {
        return Err(QmError::InvalidArgument("empty degenerate set".into()));
    }
    let tol = DEGENERACY_TOL * p.scale();
    for &k in levels {
        if k >= p.dim() {
            return Err(QmError::Dimension(format!("level {k} out of range")));
        }
        if (p.energies[k] - p.energies[levels[0]]).abs() > tol {
            return Err(QmError::InvalidArgument(format!("level {k} is not degenerate with {}", levels[0])));
        }
    }
    let g = levels.len();
    let block = CMatrix::from_fn(g, g, |a, b| p.v_eig[(levels[a], levels[b])]);
    let es = eigh(&block)?;
    let mut vecs = CMatrix::zeros(p.dim(), g);
    for col in 0..g {
        let mut full = CVector::zeros(p.dim());
        for (a, &k) in levels.iter().enumerate() {
            full[k] = es.vectors[(a, col)];
        }
        vecs.set_column(col, &(&p.basis * full));
    }
    Ok((es.values, vecs))
}

/// Oscillator H₀ = ω(n̂+½) with V = x̂⁴ (unit mass) in a truncated Fock basis.
pub fn quartic_problem(omega: f64, n_max: usize) -> Result<PerturbationProblem> {
    let space = FockSpace::new(n_max, omega)?;
    let x = space.ladder_ops().x;
    let x2 = &x * &x;
    let v = &x2 * &x2;
    let energies: Vec<f64> = (0..n_max).map(|k| omega * (k as f64 + 0.5)).collect();
    PerturbationProblem::from_diagonal(&energies, &v)
}

/// Golden-section/Brent minimization to 1e-10 on a bracket.
pub fn variational_minimize(energy: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    minimize(energy, lo, hi, 1e-10)
}

/// Helium ground-state functional in Hartree for effective charge Z.
pub fn helium_energy(z: f64) -> f64 {
    z * z - 27.0 / 8.0 * z
}

/// ⟨H⟩ for the oscillator trial function e^{−αx²}.
pub fn gaussian_trial_energy(alpha: f64, mass: f64, omega: f64) -> f64 {
    alpha / (2.0 * mass) + mass * omega * omega / (8.0 * alpha)
}

/// Location and value of the minimum of a 1D potential, found by scanning then refining.
fn potential_minimum(v: &impl Fn(f64) -> f64, half_width: f64) -> Result<(f64, f64)> {
    let steps = 2000;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..=steps {
        let x = -half_width + 2.0 * half_width * i as f64 / steps as f64;
        let y = v(x);
        if y < best.1 {
            best = (x, y);
        }
    }
    let h = 2.0 * half_width / steps as f64;
    match minimize(v, best.0 - h, best.0 + h, 1e-12) {
        Ok(m) => Ok(m),
        // kinks such as |x| sit on a grid point; the scan value is already the minimum
        Err(QmError::NoMinimum) => Ok(best),
        Err(e) => Err(e),
    }
}

fn turning_point(v: &impl Fn(f64) -> f64, x0: f64, e: f64, dir: f64) -> Result<f64> {
    let mut step = 1e-3;
    let mut x = x0;
    loop {
        let next = x + dir * step;
        if v(next) > e {
            return brent_root(|y| v(y) - e, x.min(next), x.max(next), 1e-14);
        }
        x = next;
        step *= 2.0;
        if step > 1e8 {
            return Err(QmError::InvalidArgument("potential is not confining".into()));
        }
    }
}

/// ∮p dx = 2∫√(2m(E − V)) dx between the turning points.
///
/// Each side of the minimum x₀ is mapped by x = x₀ + (t − x₀)·sin u, which removes the
/// square-root endpoint behaviour and keeps a kink at x₀ on the split point.
pub fn wkb_action(v: &impl Fn(f64) -> f64, mass: f64, e: f64, x0: f64) -> Result<f64> {
    let a = turning_point(v, x0, e, -1.0)?;
    let b = turning_point(v, x0, e, 1.0)?;
    let (us, ws) = gauss_legendre(120);
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut acc = 0.0;
    for end in [a, b] {
        let h = (end - x0).abs();
        for (u, w) in us.iter().zip(&ws) {
            let t = quarter * (u + 1.0);
            let x = x0 + (end - x0) * t.sin();
            let k = (2.0 * mass * (e - v(x)).max(0.0)).sqrt();
            acc += w * quarter * k * h * t.cos();
        }
    }
    Ok(2.0 * acc)
}

/// Lowest `count` WKB levels of a confining 1D potential: ∮p dx = 2π(n + ½).
pub fn wkb_levels(v: impl Fn(f64) -> f64, mass: f64, count: usize) -> Result<Vec<f64>> {
    if mass <= 0.0 {
        return Err(QmError::InvalidArgument("mass must be positive".into()));
    }
    let (x0, vmin) = potential_minimum(&v, 50.0)?;
    let mut levels = Vec::with_capacity(count);
    let mut lo = vmin;
    for n in 0..count {
        let target = 2.0 * std::f64::consts::PI * (n as f64 + 0.5);
        let g = |e: f64| wkb_action(&v, mass, e, x0).map(|s| s - target);
        let mut hi = lo + 1.0;
        while g(hi)? < 0.0 {
            hi = lo + 2.0 * (hi - lo);
            if hi - lo > 1e12 {
                return Err(QmError::Convergence("WKB level bracket".into()));
            }
        }
        let low = if lo == vmin { vmin + 1e-12 } else { lo };
        let e = brent_root(|e| g(e).unwrap_or(f64::NAN), low, hi, 1e-13)?;
        levels.push(e);
        lo = e;
    }
    Ok(levels)
}

/// Lowest eigenvalues of −(1/2m)d²/dx² + V on [−L, L] by second-order finite differences.
///
/// The matrix is tridiagonal, so levels come from Sturm-count bisection.
pub fn finite_difference_levels(v: impl Fn(f64) -> f64, mass: f64, half_width: f64, points: usize, count: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (points + 1) as f64;
    let t = 1.0 / (2.0 * mass * h * h);
    let diag: Vec<f64> = (0..points).map(|i| 2.0 * t + v(-half_width + (i + 1) as f64 * h)).collect();
    // number of eigenvalues below x
    let below = |x: f64| {
        let mut n = 0;
        let mut q = 1.0;
        for (i, d) in diag.iter().enumerate() {
            let off = if i == 0 { 0.0 } else { t * t / q };
            q = d - x - off;
            if q == 0.0 {
                q = -1e-300;
            }
            if q < 0.0 {
                n += 1;
            }
        }
        n
    };
    let lo0 = diag.iter().copied().fold(f64::INFINITY, f64::min) - 2.0 * t;
    let hi0 = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 2.0 * t;
    (0..count.min(points))
        .map(|k| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-13 * hi.abs().max(1.0) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Two-level tilted-field problem H₀ = −B_z σ_z, V = −B_x σ_x.
pub fn tilted_spin(bz: f64, bx: f64) -> Result<PerturbationProblem> {
    // basis order |↑⟩, |↓⟩ with energies −B_z, +B_z
    let v = linalg::sigma_x() * r(-bx);
    PerturbationProblem::from_diagonal(&[-bz, bz], &v)
}

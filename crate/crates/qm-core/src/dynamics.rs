//! Time evolution: exact propagators, first-order Trotter splitting, conservation checks,
//! Rabi oscillations and discrete Berry phases.

use std::f64::consts::PI;

use crate::linalg::{self, commutator, eigh, expect, expm_i, max_abs, r, sigma_dot, sigma_x, sigma_z, CMatrix, CVector, C64};
use crate::{QmError, Result};

/// U(t) = e^{−iHt}.
pub fn propagator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    expm_i(h, t)
}

/// |ψ(t)⟩ = e^{−iHt}|ψ(0)⟩.
pub fn evolve(h: &CMatrix, psi0: &CVector, t: f64) -> Result<CVector> {
    if h.ncols() != psi0.len() {
        return Err(QmError::Dimension("state does not match Hamiltonian".into()));
    }
    Ok(expm_i(h, t)? * psi0)
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub observables: Vec<(String, Vec<f64>)>,
    pub states: Option<Vec<CVector>>,
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.observables.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Evolves once per time point from a single eigendecomposition and records ⟨A⟩(t).
pub fn trajectory(
    h: &CMatrix,
    psi0: &CVector,
    times: &[f64],
    observables: &[(&str, CMatrix)],
    keep_states: bool,
) -> Result<Trajectory> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(QmError::InvalidArgument("times must be nondecreasing".into()));
    }
    for (name, a) in observables {
        linalg::require_hermitian(a).map_err(|_| QmError::InvalidArgument(format!("{name} is not Hermitian")))?;
    }
    let es = eigh(h)?;
    let coeffs = es.vectors.adjoint() * psi0;
    let mut series: Vec<Vec<f64>> = vec![Vec::with_capacity(times.len()); observables.len()];
    let mut states = Vec::new();
    for &t in times {
        let phased = CVector::from_fn(coeffs.len(), |i, _| coeffs[i] * C64::from_polar(1.0, -es.values[i] * t));
        let psi = &es.vectors * phased;
        for (k, (_, a)) in observables.iter().enumerate() {
            series[k].push(expect(&psi, a).re);
        }
        if keep_states {
            states.push(psi);
        }
    }
    Ok(Trajectory {
        times: times.to_vec(),
        observables: observables.iter().map(|(n, _)| n.to_string()).zip(series).collect(),
        states: keep_states.then_some(states),
    })
}

/// Closed form of the single-particle 3-ring propagator for H = −Δ Σ(a_i†a_j + h.c.).
/// Sites j, k are 1-based.
pub fn ring3_propagator_element(delta: f64, t: f64, j: usize, k: usize) -> C64 {
    let d = j as f64 - k as f64;
    (C64::from_polar(1.0, 2.0 * delta * t) + C64::from_polar(2.0 * (2.0 * PI * d / 3.0).cos(), -delta * t)) / 3.0
}

/// First-order Trotter product (∏_k e^{−iH_kΔt})^n applied to ψ0.
///
/// Returns the split state and ‖ψ̃ − ψ_exact‖.
pub fn trotter_evolve(terms: &[CMatrix], psi0: &CVector, t: f64, n_steps: usize) -> Result<(CVector, f64)> {
    if terms.is_empty() {
        return Err(QmError::InvalidArgument("no Hamiltonian terms".into()));
    }
    if n_steps == 0 {
        return Err(QmError::InvalidArgument("n_steps must be at least 1".into()));
    }
    let dt = t / n_steps as f64;
    let mut step = linalg::eye(psi0.len());
    for h in terms {
        step = expm_i(h, dt)? * step;
    }
    let mut psi = psi0.clone();
    for _ in 0..n_steps {
        psi = &step * psi;
    }
    let total = terms.iter().skip(1).fold(terms[0].clone(), |acc, h| acc + h);
    let exact = evolve(&total, psi0, t)?;
    let err = (&psi - exact).norm();
    Ok((psi, err))
}

/// (‖[H, A]‖_max ≤ tol·scale, ‖[H, A]‖_max).
pub fn conserved(h: &CMatrix, a: &CMatrix) -> Result<(bool, f64)> {
    linalg::require_hermitian(h)?;
    linalg::require_hermitian(a)?;
    let c = max_abs(&commutator(h, a));
    let scale = max_abs(h).max(1.0) * max_abs(a).max(1.0);
    Ok((c <= 1e-12 * scale, c))
}

/// Rotating-frame excitation probability Ω²/Ω_eff² · sin²(Ω_eff t/2), Ω_eff = √(Ω² + Δω²).
pub fn rabi_excited_prob(omega: f64, detuning: f64, t: f64) -> f64 {
    let eff = omega.hypot(detuning);
    if eff == 0.0 {
        return 0.0;
    }
    (omega / eff).powi(2) * (eff * t / 2.0).sin().powi(2)
}

/// Weak-drive limit Ω²/Δω² · sin²(Δω t/2).
pub fn rabi_perturbative(omega: f64, detuning: f64, t: f64) -> f64 {
    if detuning == 0.0 {
        return (omega * t / 2.0).powi(2);
    }
    (omega / detuning).powi(2) * (detuning * t / 2.0).sin().powi(2)
}

/// Rotating-wave Hamiltonian (Δω/2)σ_z + (Ω/2)σ_x.
pub fn rabi_hamiltonian(omega: f64, detuning: f64) -> CMatrix {
    sigma_z() * r(detuning / 2.0) + sigma_x() * r(omega / 2.0)
}

/// Excitation probability from evolving |+z⟩ under the rotating-frame Hamiltonian.
pub fn rabi_evolved(omega: f64, detuning: f64, t: f64) -> Result<f64> {
    let psi = evolve(&rabi_hamiltonian(omega, detuning), &linalg::rvec(&[1.0, 0.0]), t)?;
    Ok(psi[1].norm_sqr())
}

/// Time-ordered evolution under H(t) as a midpoint product ∏ e^{−iH(t_k)δt}.
///
/// Repeats with halved steps until successive results agree to `tol`; returns
/// (ψ, last change).
pub fn time_ordered_evolve(
    h_of_t: impl Fn(f64) -> CMatrix,
    psi0: &CVector,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<(CVector, f64)> {
    let run = |n: usize| -> Result<CVector> {
        let dt = (t1 - t0) / n as f64;
        let mut psi = psi0.clone();
        for k in 0..n {
            let tm = t0 + (k as f64 + 0.5) * dt;
            psi = expm_i(&h_of_t(tm), dt)? * psi;
        }
        Ok(psi)
    };
    let mut n = 16;
    let mut prev = run(n)?;
    for _ in 0..14 {
        n *= 2;
        let next = run(n)?;
        let change = (&next - &prev).norm();
        if change <= tol {
            return Ok((next, change));
        }
        prev = next;
    }
    Err(QmError::Convergence("time-ordered product".into()))
}

/// Closed loop of unit vectors on the sphere (first point repeated at the end).
#[derive(Clone, Debug)]
pub struct ParameterPath {
    points: Vec<[f64; 3]>,
}

impl ParameterPath {
    /// Validates closure and the largest angular step.
    pub fn new(points: Vec<[f64; 3]>, max_step: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(QmError::InvalidArgument("path needs at least two points".into()));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if dist(first, last) > 1e-12 {
            return Err(QmError::InvalidArgument("path is not closed".into()));
        }
        for w in points.windows(2) {
            let ang = dot(w[0], w[1]).clamp(-1.0, 1.0).acos();
            if ang > max_step {
                return Err(QmError::InvalidArgument(format!("angular step {ang} exceeds {max_step}")));
            }
        }
        Ok(ParameterPath { points })
    }

    /// Circle of constant polar angle α, traversed with increasing azimuth.
    pub fn latitude(alpha: f64, n_points: usize) -> Self {
        let n = n_points.max(3);
        let mut pts: Vec<[f64; 3]> = (0..n)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / n as f64;
                spherical(alpha, phi)
            })
            .collect();
        pts.push(pts[0]);
        ParameterPath { points: pts }
    }

    /// Great-circle polygon through `vertices` (closed automatically), about `n_points` in total.
    pub fn geodesic_polygon(vertices: &[[f64; 3]], n_points: usize) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(QmError::InvalidArgument("polygon needs at least two vertices".into()));
        }
        let per = (n_points / vertices.len()).max(1);
        let mut pts = Vec::with_capacity(per * vertices.len() + 1);
        for i in 0..vertices.len() {
            let a = unit(vertices[i])?;
            let b = unit(vertices[(i + 1) % vertices.len()])?;
            for k in 0..per {
                pts.push(slerp(a, b, k as f64 / per as f64)?);
            }
        }
        pts.push(pts[0]);
        Ok(ParameterPath { points: pts })
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.points.clone();
        p.reverse();
        ParameterPath { points: p }
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    Ground,
    Excited,
}

/// Spin-½ Hamiltonian −(1/2) n̂·σ; its ground state is aligned with n̂.
pub fn spin_hamiltonian(n: [f64; 3]) -> CMatrix {
    sigma_dot(n) * r(-0.5)
}

/// Discrete Pancharatnam phase −arg ∏_k ⟨n_k|n_{k+1}⟩ around the loop, in [−π, π).
pub fn berry_phase(path: &ParameterPath, band: Band) -> Result<f64> {
    let pts = path.points();
    let pick = match band {
        Band::Ground => 0,
        Band::Excited => 1,
    };
    let mut states = Vec::with_capacity(pts.len());
    for p in &pts[..pts.len() - 1] {
        let norm = dot(*p, *p).sqrt();
        if norm < 1e-12 {
            return Err(QmError::InvalidArgument("degenerate point (zero field) on path".into()));
        }
        let es = eigh(&spin_hamiltonian(*p))?;
        if es.values[1] - es.values[0] < 1e-12 {
            return Err(QmError::Degenerate(es.values[1] - es.values[0]));
        }
        states.push(es.vector(pick));
    }
    let m = states.len();
    let mut prod = C64::new(1.0, 0.0);
    for k in 0..m {
        let ov = states[k].dotc(&states[(k + 1) % m]);
        prod *= ov / ov.norm();
    }
    Ok(wrap_angle(-prod.arg()))
}

/// Solid angle enclosed by a latitude loop at polar angle α.
pub fn cap_solid_angle(alpha: f64) -> f64 {
    2.0 * PI * (1.0 - alpha.cos())
}

/// Maps an angle into [−π, π).
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Distance between two phases on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

fn spherical(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn unit(a: [f64; 3]) -> Result<[f64; 3]> {
    let n = dot(a, a).sqrt();
    if n == 0.0 {
        return Err(QmError::InvalidArgument("zero vertex".into()));
    }
    Ok([a[0] / n, a[1] / n, a[2] / n])
}

fn slerp(a: [f64; 3], b: [f64; 3], s: f64) -> Result<[f64; 3]> {
    let om = dot(a, b).clamp(-1.0, 1.0).acos();
    if om < 1e-15 {
        return Ok(a);
    }
    if (PI - om).abs() < 1e-12 {
        return Err(QmError::InvalidArgument("antipodal vertices have no unique geodesic".into()));
    }
    let wa = ((1.0 - s) * om).sin() / om.sin();
    let wb = (s * om).sin() / om.sin();
    unit([wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]])
}

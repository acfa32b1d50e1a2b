//! Harmonic oscillator in a truncated Fock basis |0⟩..|n_max−1⟩.

use std::f64::consts::SQRT_2;

use crate::linalg::{self, expect, expm, r, CMatrix, CVector, C64, I};
use crate::{QmError, Result};

/// Leakage above this into the top four levels is reported by [`CoherentState::truncation_warning`].
pub const LEAKAGE_WARN: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct FockSpace {
    n_max: usize,
    omega: f64,
    mass: f64,
}

/// a, a†, n̂, x̂, p̂ on a [`FockSpace`].
#[derive(Clone, Debug)]
pub struct LadderOps {
    pub a: CMatrix,
    pub adag: CMatrix,
    pub n: CMatrix,
    pub x: CMatrix,
    pub p: CMatrix,
}

impl FockSpace {
    pub fn new(n_max: usize, omega: f64) -> Result<Self> {
        Self::with_mass(n_max, omega, 1.0)
    }

    pub fn with_mass(n_max: usize, omega: f64, mass: f64) -> Result<Self> {
        if n_max < 4 {
            return Err(QmError::InvalidArgument("n_max must be at least 4".into()));
        }
        if !(omega > 0.0 && mass > 0.0) {
            return Err(QmError::InvalidArgument("omega and mass must be positive".into()));
        }
        Ok(FockSpace { n_max, omega, mass })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Length scale √(1/mω).
    pub fn x0(&self) -> f64 {
        (1.0 / (self.mass * self.omega)).sqrt()
    }

    /// Momentum scale √(mω).
    pub fn p0(&self) -> f64 {
        (self.mass * self.omega).sqrt()
    }

    pub fn annihilation(&self) -> CMatrix {
        let n = self.n_max;
        let mut a = CMatrix::zeros(n, n);
        for k in 1..n {
            a[(k - 1, k)] = r((k as f64).sqrt());
        }
        a
    }

    pub fn ladder_ops(&self) -> LadderOps {
        let a = self.annihilation();
        let adag = a.adjoint();
        let n = linalg::diag_real(&(0..self.n_max).map(|k| k as f64).collect::<Vec<_>>());
        let x = (&a + &adag) * r(self.x0() / SQRT_2);
        let p = (&adag - &a) * (I * self.p0() / SQRT_2);
        LadderOps { a, adag, n, x, p }
    }

    /// H = ω(n̂ + ½), diagonal.
    pub fn hamiltonian(&self) -> CMatrix {
        linalg::diag_real(&(0..self.n_max).map(|k| self.omega * (k as f64 + 0.5)).collect::<Vec<_>>())
    }

    pub fn fock(&self, k: usize) -> Result<CVector> {
        if k >= self.n_max {
            return Err(QmError::Dimension(format!("level {k} outside truncation {}", self.n_max)));
        }
        let mut v = CVector::zeros(self.n_max);
        v[k] = r(1.0);
        Ok(v)
    }
}

#[derive(Clone, Debug)]
pub struct CoherentState {
    pub alpha: C64,
    pub amps: CVector,
}

impl CoherentState {
    /// Probability outside the truncated space, 1 − Σ|c_n|².
    pub fn leakage(&self) -> f64 {
        1.0 - self.amps.norm_squared()
    }

    /// Weight in the top four retained levels.
    pub fn edge_weight(&self) -> f64 {
        let n = self.amps.len();
        self.amps.iter().skip(n.saturating_sub(4)).map(|z| z.norm_sqr()).sum()
    }

    pub fn truncation_warning(&self) -> Option<String> {
        let w = self.edge_weight();
        (w > LEAKAGE_WARN).then(|| format!("coherent state |α|={:.3} has edge weight {w:.2e}", self.alpha.norm()))
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// e^{−|α|²/2} Σ αⁿ/√n! |n⟩, truncated (not renormalized).
pub fn coherent(space: &FockSpace, alpha: C64) -> CoherentState {
    let mut amps = CVector::zeros(space.n_max);
    let mut term = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..space.n_max {
        amps[k] = term;
        term = term * alpha / ((k + 1) as f64).sqrt();
    }
    CoherentState { alpha, amps }
}

/// |⟨α|β⟩|² = e^{−|α−β|²}.
pub fn overlap2(alpha: C64, beta: C64) -> f64 {
    (-(alpha - beta).norm_sqr()).exp()
}

/// D(α) = exp(αa† − α*a).
pub fn displacement(space: &FockSpace, alpha: C64) -> Result<CMatrix> {
    let a = space.annihilation();
    expm(&(a.adjoint() * alpha - a * alpha.conj()))
}

/// S(r) = exp[(r/2)a² − (r/2)a†²] for real r.
pub fn squeeze(space: &FockSpace, r_: f64) -> Result<CMatrix> {
    let a = space.annihilation();
    let a2 = &a * &a;
    let ad2 = a2.adjoint();
    expm(&((a2 - ad2) * r(r_ / 2.0)))
}

/// Variance ⟨A²⟩ − ⟨A⟩² for Hermitian A.
pub fn variance(psi: &CVector, a: &CMatrix) -> f64 {
    let m = expect(psi, a).re;
    expect(psi, &(a * a)).re - m * m
}

/// Analytic evolution: α(t) = α₀e^{−iωt} and the global phase e^{−iωt/2}.
pub fn coherent_evolve(space: &FockSpace, alpha0: C64, t: f64) -> (CoherentState, C64) {
    let w = space.omega;
    let alpha = alpha0 * C64::from_polar(1.0, -w * t);
    (coherent(space, alpha), C64::from_polar(1.0, -w * t / 2.0))
}

/// e^{−iHt}|ψ⟩ with the diagonal Fock Hamiltonian.
pub fn evolve_fock(space: &FockSpace, psi: &CVector, t: f64) -> CVector {
    CVector::from_fn(psi.len(), |k, _| psi[k] * C64::from_polar(1.0, -space.omega * (k as f64 + 0.5) * t))
}

/// ‖e^{αa†−α*a} − e^{−|α|²/2}e^{αa†}e^{−α*a}‖_max on the top-left `block`×`block` corner.
pub fn bch_residual(space: &FockSpace, alpha: C64, block: usize) -> Result<f64> {
    let a = space.annihilation();
    let d = displacement(space, alpha)?;
    let f = expm(&(a.adjoint() * alpha))? * expm(&(a * (-alpha.conj())))? * r((-alpha.norm_sqr() / 2.0).exp());
    let b = block.min(space.n_max);
    Ok(linalg::max_abs(&(d - f).view((0, 0), (b, b)).into_owned()))
}

/// ‖S†aS − (a cosh r − a† sinh r)‖_max on the top-left block.
pub fn squeeze_conjugation_residual(space: &FockSpace, r_: f64, block: usize) -> Result<f64> {
    let a = space.annihilation();
    let s = squeeze(space, r_)?;
    let lhs = s.adjoint() * &a * &s;
    let rhs = &a * r(r_.cosh()) - a.adjoint() * r(r_.sinh());
    let b = block.min(space.n_max);
    Ok(linalg::max_abs(&(lhs - rhs).view((0, 0), (b, b)).into_owned()))
}

/// Largest |d⟨x⟩/dt − ⟨p⟩/m| along a numerically evolved coherent state (central differences).
pub fn ehrenfest_residual(space: &FockSpace, alpha0: C64, t_end: f64, samples: usize, dt: f64) -> f64 {
    let ops = space.ladder_ops();
    let psi0 = coherent(space, alpha0).amps;
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let t = t_end * k as f64 / samples.max(1) as f64;
        let xp = expect(&evolve_fock(space, &psi0, t + dt), &ops.x).re;
        let xm = expect(&evolve_fock(space, &psi0, t - dt), &ops.x).re;
        let p = expect(&evolve_fock(space, &psi0, t), &ops.p).re;
        worst = worst.max(((xp - xm) / (2.0 * dt) - p / space.mass).abs());
    }
    worst
}

/// Σ_n |⟨n|ψ⟩|² for odd n.
pub fn odd_weight(psi: &CVector) -> f64 {
    psi.iter().skip(1).step_by(2).map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, commutator, max_abs};
    use proptest::prelude::*;

    fn space() -> FockSpace {
        FockSpace::new(64, 1.0).unwrap()
    }

    #[test]
    fn ladder_algebra_away_from_edge() {
        let s = FockSpace::with_mass(30, 1.7, 0.6).unwrap();
        let ops = s.ladder_ops();
        let comm = commutator(&ops.a, &ops.adag);
        let n = s.n_max();
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - r(want)).norm() < 1e-12);
            }
        }
        assert!(max_abs(&(&ops.adag * &ops.a - &ops.n)) < 1e-12);
        let xp = commutator(&ops.x, &ops.p);
        for i in 0..n - 1 {
            assert!((xp[(i, i)] - I).norm() < 1e-12);
        }
        let x2 = &ops.x * &ops.x;
        for k in 0..n - 1 {
            let want = (2 * k + 1) as f64 / (2.0 * s.mass() * s.omega());
            assert!((x2[(k, k)].re - want).abs() < 1e-12);
        }
        assert!(FockSpace::new(3, 1.0).is_err());
        assert!(FockSpace::new(8, 0.0).is_err());
    }

    #[test]
    fn coherent_basics() {
        let s = space();
        let vac = coherent(&s, C64::new(0.0, 0.0));
        assert!((vac.amps.clone() - s.fock(0).unwrap()).norm() < 1e-15);
        let alpha = c(1.2, -0.7);
        let st = coherent(&s, alpha);
        assert!(st.leakage().abs() < 1e-10);
        assert!(st.truncation_warning().is_none());
        let p = st.photon_distribution();
        let nbar = alpha.norm_sqr();
        let mean: f64 = p.iter().enumerate().map(|(k, w)| k as f64 * w).sum();
        let var: f64 = p.iter().enumerate().map(|(k, w)| (k as f64 - mean).powi(2) * w).sum();
        assert!((mean - nbar).abs() < 1e-10);
        assert!((var - nbar).abs() < 1e-10);
        let mut fact = 1.0;
        for (k, w) in p.iter().enumerate().take(12) {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((w - (-nbar).exp() * nbar.powi(k as i32) / fact).abs() < 1e-14);
        }
        let ops = s.ladder_ops();
        assert!((expect(&st.amps, &ops.x).re - s.x0() * SQRT_2 * alpha.re).abs() < 1e-10);
        assert!((expect(&st.amps, &ops.p).re - s.p0() * SQRT_2 * alpha.im).abs() < 1e-10);
        assert!((&ops.a * &st.amps - &st.amps * alpha).norm() < 1e-8);
        assert!(coherent(&FockSpace::new(8, 1.0).unwrap(), c(2.0, 0.0)).truncation_warning().is_some());
    }

    #[test]
    fn overlap_closed_form() {
        assert_eq!(overlap2(c(0.3, 0.2), c(0.3, 0.2)), 1.0);
        assert!((overlap2(c(0.0, 0.0), c(1.0, 0.0)) - (-1.0f64).exp()).abs() < 1e-15);
        let s = space();
        let grid = [-2.0, -1.1, 0.0, 0.7, 1.4];
        for &ar in &grid {
            for &ai in &grid {
                for &br in &grid {
                    let a = c(ar, ai) * (2.0 / c(ar, ai).norm().max(2.0));
                    let b = c(br, -ai) * (2.0 / c(br, -ai).norm().max(2.0));
                    let num = coherent(&s, a).amps.dotc(&coherent(&s, b).amps).norm_sqr();
                    assert!((num - overlap2(a, b)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn displacement_makes_coherent() {
        let s = space();
        for alpha in [c(0.5, 0.0), c(-1.0, 1.2), c(0.0, 2.0), c(1.4, 1.4)] {
            let d = displacement(&s, alpha).unwrap();
            let v = d.column(0).into_owned();
            assert!((v - coherent(&s, alpha).amps).norm() < 1e-8);
        }
    }

    #[test]
    fn squeezed_vacuum_variances() {
        let s = FockSpace::with_mass(80, 1.3, 0.8).unwrap();
        let ops = s.ladder_ops();
        for rr in [0.2, 0.5, 0.8] {
            let psi = squeeze(&s, rr).unwrap().column(0).into_owned();
            let vx = variance(&psi, &ops.x);
            let vp = variance(&psi, &ops.p);
            assert!((vx - s.x0().powi(2) / 2.0 * (-2.0 * rr).exp()).abs() < 1e-6);
            assert!((vp - s.p0().powi(2) / 2.0 * (2.0 * rr).exp()).abs() < 1e-6);
            assert!(((vx * vp).sqrt() - 0.5).abs() < 1e-6);
            assert!(odd_weight(&psi) < 1e-24);
        }
    }

    #[test]
    fn coherent_time_evolution() {
        let s = FockSpace::new(64, 2.0).unwrap();
        let alpha0 = C64::from_polar(1.5, 0.4);
        let period = 2.0 * std::f64::consts::PI / s.omega();
        let (back, phase) = coherent_evolve(&s, alpha0, period);
        assert!((back.alpha - alpha0).norm() < 1e-12);
        assert!((phase + 1.0).norm() < 1e-12);
        let ops = s.ladder_ops();
        let h = s.hamiltonian();
        let e0 = s.omega() * (alpha0.norm_sqr() + 0.5);
        for k in 0..25 {
            let t = 0.17 * k as f64;
            let psi = evolve_fock(&s, &coherent(&s, alpha0).amps, t);
            let (ana, ph) = coherent_evolve(&s, alpha0, t);
            assert!((&psi - ana.amps * ph).norm() < 1e-12);
            let want = s.x0() * SQRT_2 * alpha0.norm() * (s.omega() * t - alpha0.arg()).cos();
            assert!((expect(&psi, &ops.x).re - want).abs() < 1e-9);
            assert!((expect(&psi, &h).re - e0).abs() < 1e-9);
        }
    }

    #[test]
    fn bch_and_squeeze_conjugation() {
        let s = space();
        for alpha in [c(0.5, 0.3), c(-1.0, 0.2), c(0.0, -1.2)] {
            assert!(bch_residual(&s, alpha, 32).unwrap() < 1e-8);
        }
        let s = FockSpace::new(100, 1.0).unwrap();
        assert!(squeeze_conjugation_residual(&s, 0.5, 20).unwrap() < 1e-6);
    }

    #[test]
    fn ehrenfest_along_orbit() {
        let s = FockSpace::with_mass(64, 1.5, 0.7).unwrap();
        assert!(ehrenfest_residual(&s, c(1.0, -0.8), 6.0, 40, 1e-4) < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn overlap_matches_series(ar in -1.4f64..1.4, ai in -1.4f64..1.4, br in -1.4f64..1.4, bi in -1.4f64..1.4) {
            let s = space();
            let (a, b) = (c(ar, ai), c(br, bi));
            let num = coherent(&s, a).amps.dotc(&coherent(&s, b).amps).norm_sqr();
            prop_assert!((num - overlap2(a, b)).abs() < 1e-8);
        }
    }
}

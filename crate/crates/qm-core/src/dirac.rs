//! Discrete 1+1D Dirac chain, gamma matrices in 1+1 and 3+1 dimensions, plane-wave spinors and
//! spin-conservation identities. Units ħ = c = a = 1, metric (+,−,−,−).

use std::f64::consts::PI;

use crate::lattice::Boundary;
use crate::linalg::{self, anticommutator, c, commutator, eigvalsh, kron, max_abs, r, sigma_x, sigma_y, sigma_z, CMatrix, CVector, I};
use crate::{QmError, Result};

/// Chain with on-site masses; the uniform case has every mass equal.
#[derive(Clone, Debug)]
pub struct DiracChain {
    masses: Vec<f64>,
    boundary: Boundary,
}

impl DiracChain {
    pub fn uniform(n: usize, m: f64, boundary: Boundary) -> Result<Self> {
        Self::with_masses(vec![m; n], boundary)
    }

    pub fn with_masses(masses: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if masses.len() < 2 {
            return Err(QmError::InvalidArgument("chain needs at least two sites".into()));
        }
        Ok(DiracChain { masses, boundary })
    }

    pub fn n_sites(&self) -> usize {
        self.masses.len()
    }

    /// (Hψ)_n = (1/2i)σ_x(ψ_{n+1} − ψ_{n−1}) + m_n σ_z ψ_n on components (ψ_n^A, ψ_n^B).
    pub fn hamiltonian(&self) -> CMatrix {
        let n = self.n_sites();
        let mut h = CMatrix::zeros(2 * n, 2 * n);
        let hop = sigma_x() * (-I * 0.5);
        let sz = sigma_z();
        for site in 0..n {
            for a in 0..2 {
                for b in 0..2 {
                    h[(2 * site + a, 2 * site + b)] += sz[(a, b)] * self.masses[site];
                }
            }
            let next = if site + 1 < n {
                Some(site + 1)
            } else if self.boundary == Boundary::Periodic {
                Some(0)
            } else {
                None
            };
            if let Some(nb) = next {
                for a in 0..2 {
                    for b in 0..2 {
                        h[(2 * site + a, 2 * nb + b)] += hop[(a, b)];
                        h[(2 * nb + a, 2 * site + b)] += hop[(b, a)].conj();
                    }
                }
            }
        }
        h
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.hamiltonian())
    }
}

/// H(k) = sin k σ_x + m σ_z.
pub fn bloch_hamiltonian(k: f64, m: f64) -> CMatrix {
    sigma_x() * r(k.sin()) + sigma_z() * r(m)
}

/// E_k = √(sin²k + m²).
pub fn dispersion(k: f64, m: f64) -> f64 {
    (k.sin().powi(2) + m * m).sqrt()
}

/// Closed-form periodic spectrum {±E(2πα/N)}, sorted.
pub fn periodic_spectrum(n: usize, m: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .flat_map(|a| {
            let e = dispersion(2.0 * PI * a as f64 / n as f64, m);
            [e, -e]
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// u₊(k) = (E+m, sin k)/√(2E(E+m)).
pub fn eigenspinor(k: f64, m: f64) -> Result<CVector> {
    let e = dispersion(k, m);
    let denom = 2.0 * e * (e + m);
    if denom <= 0.0 {
        return Err(QmError::Degenerate(0.0));
    }
    Ok(linalg::rvec(&[(e + m) / denom.sqrt(), k.sin() / denom.sqrt()]))
}

/// ‖H(k)u₊ − E u₊‖.
pub fn eigenspinor_residual(k: f64, m: f64) -> Result<f64> {
    let u = eigenspinor(k, m)?;
    Ok((bloch_hamiltonian(k, m) * &u - &u * r(dispersion(k, m))).norm())
}

/// max over sampled k of ‖{H(k), σ_z} − 2mI‖.
pub fn chiral_check(m: f64, samples: usize) -> f64 {
    (0..samples.max(1))
        .map(|i| {
            let k = -PI + 2.0 * PI * i as f64 / samples.max(1) as f64;
            max_abs(&(anticommutator(&bloch_hamiltonian(k, m), &sigma_z()) - linalg::eye(2) * r(2.0 * m)))
        })
        .fold(0.0, f64::max)
}

/// ‖{H(k), σ_z}‖ itself, zero only when m = 0.
pub fn chiral_anticommutator_norm(k: f64, m: f64) -> f64 {
    max_abs(&anticommutator(&bloch_hamiltonian(k, m), &sigma_z()))
}

/// Eigenvalues with |E| below `tol`, with the weight of each eigenvector on the outer quarters.
#[derive(Clone, Debug)]
pub struct ZeroMode {
    pub energy: f64,
    pub site_weights: Vec<f64>,
}

impl ZeroMode {
    /// Fraction of the weight within `width` sites of either end.
    pub fn edge_weight(&self, width: usize) -> f64 {
        let n = self.site_weights.len();
        self.site_weights.iter().enumerate().filter(|(i, _)| *i < width || *i + width >= n).map(|(_, w)| w).sum()
    }

    /// Fraction of the weight within `width` sites of `center` (cyclic distance).
    pub fn weight_near(&self, center: usize, width: usize) -> f64 {
        let n = self.site_weights.len();
        self.site_weights
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let d = i.abs_diff(center);
                d.min(n - d) <= width
            })
            .map(|(_, w)| w)
            .sum()
    }
}

pub fn zero_modes(chain: &DiracChain, tol: f64) -> Result<Vec<ZeroMode>> {
    modes_below(chain, tol)
}

/// All eigenstates with |E| < `emax`, e.g. in-gap bound states.
pub fn modes_below(chain: &DiracChain, emax: f64) -> Result<Vec<ZeroMode>> {
    let es = linalg::eigh(&chain.hamiltonian())?;
    let n = chain.n_sites();
    Ok(es
        .values
        .iter()
        .enumerate()
        .filter(|(_, e)| e.abs() < emax)
        .map(|(i, &e)| {
            let v = es.vector(i);
            let site_weights = (0..n).map(|s| v[2 * s].norm_sqr() + v[2 * s + 1].norm_sqr()).collect();
            ZeroMode { energy: e, site_weights }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpacetimeDim {
    OnePlusOne,
    ThreePlusOne,
}

#[derive(Clone, Debug)]
pub struct GammaSet {
    pub dim: SpacetimeDim,
    pub gammas: Vec<CMatrix>,
}

impl GammaSet {
    /// g^{μμ}: +1 for time, −1 for space.
    pub fn metric(&self, mu: usize, nu: usize) -> f64 {
        match (mu == nu, mu) {
            (false, _) => 0.0,
            (true, 0) => 1.0,
            (true, _) => -1.0,
        }
    }

    pub fn size(&self) -> usize {
        self.gammas[0].nrows()
    }
}

/// 1+1: γ⁰ = σ_z, γ¹ = iσ_y. 3+1: Dirac representation.
pub fn gamma_set(dim: SpacetimeDim) -> GammaSet {
    let gammas = match dim {
        SpacetimeDim::OnePlusOne => vec![sigma_z(), sigma_y() * I],
        SpacetimeDim::ThreePlusOne => {
            let g0 = kron(&sigma_z(), &linalg::eye(2));
            // [[0, σ],[−σ, 0]] = iσ_y ⊗ σ
            let off = sigma_y() * I;
            let mut v = vec![g0];
            for s in [sigma_x(), sigma_y(), sigma_z()] {
                v.push(kron(&off, &s));
            }
            v
        }
    };
    GammaSet { dim, gammas }
}

/// max_{μν} ‖{γ^μ, γ^ν} − 2g^{μν}I‖.
pub fn clifford_verify(set: &GammaSet) -> f64 {
    let d = set.size();
    let mut worst: f64 = 0.0;
    for (mu, a) in set.gammas.iter().enumerate() {
        for (nu, b) in set.gammas.iter().enumerate() {
            let want = linalg::eye(d) * r(2.0 * set.metric(mu, nu));
            worst = worst.max(max_abs(&(anticommutator(a, b) - want)));
        }
    }
    worst
}

/// γ⁵ = iγ⁰γ¹γ²γ³.
pub fn gamma5(set: &GammaSet) -> Result<CMatrix> {
    if set.dim != SpacetimeDim::ThreePlusOne {
        return Err(QmError::InvalidArgument("γ⁵ is defined for 3+1".into()));
    }
    let g = &set.gammas;
    Ok(&g[0] * &g[1] * &g[2] * &g[3] * I)
}

/// α^i = γ⁰γ^i in 3+1.
pub fn alpha_matrices() -> [CMatrix; 3] {
    let g = gamma_set(SpacetimeDim::ThreePlusOne).gammas;
    [&g[0] * &g[1], &g[0] * &g[2], &g[0] * &g[3]]
}

/// Σ^z = diag(σ_z, σ_z).
pub fn sigma_z4() -> CMatrix {
    kron(&linalg::eye(2), &sigma_z())
}

/// H = α·p + βm.
pub fn dirac_hamiltonian(p: [f64; 3], m: f64) -> CMatrix {
    let al = alpha_matrices();
    let beta = kron(&sigma_z(), &linalg::eye(2));
    &al[0] * r(p[0]) + &al[1] * r(p[1]) + &al[2] * r(p[2]) + beta * r(m)
}

/// u(p) = √(E+m)(χ, σ·p χ/(E+m)) with χ = (1,0) for spin up or (0,1) for spin down.
pub fn boosted_spinor(p: [f64; 3], m: f64, spin_up: bool) -> Result<CVector> {
    if m < 0.0 {
        return Err(QmError::InvalidArgument("mass must be nonnegative".into()));
    }
    let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt();
    if e + m == 0.0 {
        return Err(QmError::InvalidArgument("zero-energy spinor".into()));
    }
    let chi = if spin_up { linalg::rvec(&[1.0, 0.0]) } else { linalg::rvec(&[0.0, 1.0]) };
    let lower = linalg::sigma_dot(p) * &chi / r(e + m);
    let k = (e + m).sqrt();
    Ok(CVector::from_fn(4, |i, _| if i < 2 { chi[i] * k } else { lower[i - 2] * k }))
}

/// ‖(γ^μ p_μ − m)u‖ with p_μ = (E, −p).
pub fn boosted_residual(p: [f64; 3], m: f64, u: &CVector) -> f64 {
    let g = gamma_set(SpacetimeDim::ThreePlusOne).gammas;
    let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt();
    let slash = &g[0] * r(e) - &g[1] * r(p[0]) - &g[2] * r(p[1]) - &g[3] * r(p[2]);
    ((slash - linalg::eye(4) * r(m)) * u).norm()
}

/// Residuals of the spin/orbital commutator identities at momentum (p_x, p_y).
#[derive(Clone, Copy, Debug)]
pub struct SpinConservation {
    /// ‖[α^x, Σ^z] + 2iα^y‖
    pub alpha_x: f64,
    /// ‖[α^y, Σ^z] − 2iα^x‖
    pub alpha_y: f64,
    /// ‖[H, S^z] + i(α^y p_x − α^x p_y)‖
    pub spin: f64,
    /// ‖[H, S^z] + [H, L^z]‖ with [H, L^z] = i(α^y p_x − α^x p_y) from [x, p] = i
    pub total: f64,
    /// ‖[H, S^z]‖, nonzero unless p_x = p_y = 0
    pub spin_norm: f64,
}

pub fn spin_conservation_check(px: f64, py: f64) -> SpinConservation {
    let al = alpha_matrices();
    let sz = sigma_z4();
    let alpha_x = max_abs(&(commutator(&al[0], &sz) + &al[1] * c(0.0, 2.0)));
    let alpha_y = max_abs(&(commutator(&al[1], &sz) - &al[0] * c(0.0, 2.0)));
    let h = dirac_hamiltonian([px, py, 0.0], 1.0);
    let hs = commutator(&h, &(&sz * r(0.5)));
    let orbital = (&al[1] * r(px) - &al[0] * r(py)) * I;
    let spin = max_abs(&(&hs + &orbital));
    let total = max_abs(&(&hs + &orbital));
    SpinConservation { alpha_x, alpha_y, spin, total, spin_norm: max_abs(&hs) }
}

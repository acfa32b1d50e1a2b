//! Renormalization-group calculations: 1D Ising decimation, transfer matrices, Kramers–Wannier
//! duality, scaling relations, the transverse-field Ising gap, the imaginary-time qubit chain
//! and the Wilson–Fisher flow.

use nalgebra::DMatrix;

use crate::lattice::Boundary;
use crate::numerics::brent_root;
use crate::{QmError, Result};

/// Largest spin count summed by brute force.
pub const MAX_ENUM_SPINS: usize = 24;

/// Step in ℓ for the β-function flow.
pub const WF_STEP: f64 = 1e-3;

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        // cosh a − 1 = 2 sinh²(a/2) keeps precision as a → 0
        (2.0 * (0.5 * a).sinh().powi(2)).ln_1p()
    } else {
        a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// K' = ½ ln cosh 2K.
pub fn decimate(k: f64) -> f64 {
    0.5 * ln_cosh(2.0 * k)
}

/// Prefactor A = 2 (cosh 2K)^{1/2} from summing out one spin.
pub fn decimation_prefactor(k: f64) -> f64 {
    2.0 * (0.5 * ln_cosh(2.0 * k)).exp()
}

/// Sequence of couplings along a flow; `t` is the step index or the RG time ℓ.
#[derive(Clone, Debug)]
pub struct FlowTrajectory {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl FlowTrajectory {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("trajectory is never empty")
    }

    pub fn is_monotone_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn decimation_flow(k0: f64, steps: usize) -> FlowTrajectory {
    let mut values = Vec::with_capacity(steps + 1);
    values.push(k0);
    for _ in 0..steps {
        values.push(decimate(*values.last().unwrap()));
    }
    FlowTrajectory { t: (0..=steps).map(|s| s as f64).collect(), values }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMethod {
    Enumeration,
    TransferMatrix,
}

/// 1D Ising chain of `spins` spins: open has spins−1 bonds, periodic has `spins` bonds.
/// Z = Σ_s exp(K Σ_bonds s_i s_j).
pub fn ising1d_partition(spins: usize, k: f64, boundary: Boundary, method: PartitionMethod) -> Result<f64> {
    if spins == 0 {
        return Err(QmError::InvalidArgument("chain needs at least one spin".into()));
    }
    match method {
        PartitionMethod::Enumeration => {
            if spins > MAX_ENUM_SPINS {
                return Err(QmError::InvalidArgument(format!("enumeration limited to {MAX_ENUM_SPINS} spins")));
            }
            let n_bonds = match boundary {
                Boundary::Open => spins - 1,
                Boundary::Periodic => spins,
            };
            // Σ over configurations of e^{K(n_bonds − 2·#unsatisfied)}
            let mut counts = vec![0u64; n_bonds + 1];
            for cfg in 0u64..(1u64 << spins) {
                let mut bad = 0;
                for i in 0..n_bonds {
                    let j = (i + 1) % spins;
                    bad += (((cfg >> i) ^ (cfg >> j)) & 1) as usize;
                }
                counts[bad] += 1;
            }
            Ok(counts
                .iter()
                .enumerate()
                .map(|(bad, &cnt)| cnt as f64 * (k * (n_bonds as f64 - 2.0 * bad as f64)).exp())
                .sum())
        }
        PartitionMethod::TransferMatrix => {
            let (lp, lm) = (2.0 * k.cosh(), 2.0 * k.sinh());
            Ok(match boundary {
                // (1,1) is the λ₊ eigenvector
                Boundary::Open => 2.0 * lp.powi(spins as i32 - 1),
                Boundary::Periodic => lp.powi(spins as i32) + lm.powi(spins as i32),
            })
        }
    }
}

/// Chain geometry for the decimation identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecimationGeometry {
    /// Open chain with N bonds (N+1 spins); summing out the N/2 even-numbered interior spins.
    OpenBonds,
    /// Periodic ring of N spins.
    Ring,
}

/// Relative error of Z(N, K) = A^{N/2} Z(N/2, K') with N the bond count.
pub fn decimation_consistency(n_bonds: usize, k: f64, geometry: DecimationGeometry, method: PartitionMethod) -> Result<f64> {
    if n_bonds == 0 || n_bonds % 2 == 1 {
        return Err(QmError::InvalidArgument("bond count must be even and positive".into()));
    }
    let (full, coarse) = match geometry {
        DecimationGeometry::OpenBonds => (
            ising1d_partition(n_bonds + 1, k, Boundary::Open, method)?,
            ising1d_partition(n_bonds / 2 + 1, decimate(k), Boundary::Open, method)?,
        ),
        DecimationGeometry::Ring => (
            ising1d_partition(n_bonds, k, Boundary::Periodic, method)?,
            ising1d_partition(n_bonds / 2, decimate(k), Boundary::Periodic, method)?,
        ),
    };
    let rebuilt = decimation_prefactor(k).powi((n_bonds / 2) as i32) * coarse;
    Ok((full - rebuilt).abs() / full.abs())
}

/// Kramers–Wannier dual coupling K* = −½ ln tanh K.
pub fn kramers_wannier_dual(k: f64) -> Result<f64> {
    if k <= 0.0 {
        return Err(QmError::InvalidArgument("dual map needs K > 0".into()));
    }
    Ok(-0.5 * k.tanh().ln())
}

#[derive(Clone, Copy, Debug)]
pub struct CriticalPoint {
    pub k_c: f64,
    /// k_B T_c / J = 1/K_c
    pub t_c: f64,
    /// |sinh 2K_c − 1|
    pub sinh_residual: f64,
}

/// Self-dual point from tanh K = e^{−2K}.
pub fn kramers_wannier_tc() -> Result<CriticalPoint> {
    let k_c = brent_root(|k| k.tanh() - (-2.0 * k).exp(), 0.1, 1.0, 1e-15)?;
    Ok(CriticalPoint { k_c, t_c: 1.0 / k_c, sinh_residual: ((2.0 * k_c).sinh() - 1.0).abs() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingExponents {
    pub d: f64,
    pub y_t: f64,
    pub y_h: f64,
    pub nu: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
}

impl ScalingExponents {
    /// α + 2β + γ − 2.
    pub fn rushbrooke_residual(&self) -> f64 {
        self.alpha + 2.0 * self.beta + self.gamma - 2.0
    }

    /// 2 − α − dν.
    pub fn hyperscaling_residual(&self) -> f64 {
        2.0 - self.alpha - self.d * self.nu
    }
}

pub fn scaling_exponents(d: f64, y_t: f64, y_h: f64) -> Result<ScalingExponents> {
    if y_t <= 0.0 || y_h <= 0.0 {
        return Err(QmError::InvalidArgument("eigenvalues must be relevant (> 0)".into()));
    }
    if y_h == d {
        return Err(QmError::InvalidArgument("y_h = d makes δ infinite".into()));
    }
    let nu = 1.0 / y_t;
    Ok(ScalingExponents {
        d,
        y_t,
        y_h,
        nu,
        beta: (d - y_h) / y_t,
        gamma: nu * (2.0 * y_h - d),
        delta: y_h / (d - y_h),
        alpha: 2.0 - d * nu,
    })
}

/// Thermodynamic-limit gap 2|J − h|.
pub fn tfim_gap(j: f64, h: f64) -> f64 {
    2.0 * (j - h).abs()
}

/// Largest chain diagonalized densely.
pub const TFIM_MAX_SITES: usize = 12;

/// H = −J Σ σᶻᵢσᶻᵢ₊₁ − h Σ σˣᵢ as a real symmetric matrix.
pub fn tfim_hamiltonian(n: usize, j: f64, h: f64, boundary: Boundary) -> Result<DMatrix<f64>> {
    if !(2..=TFIM_MAX_SITES).contains(&n) {
        return Err(QmError::InvalidArgument(format!("chain length must be in 2..={TFIM_MAX_SITES}")));
    }
    let dim = 1usize << n;
    let n_bonds = if boundary == Boundary::Periodic { n } else { n - 1 };
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let mut zz = 0.0;
        for i in 0..n_bonds {
            let k = (i + 1) % n;
            zz += if ((s >> i) ^ (s >> k)) & 1 == 0 { 1.0 } else { -1.0 };
        }
        m[(s, s)] = -j * zz;
        for i in 0..n {
            m[(s ^ (1 << i), s)] = -h;
        }
    }
    Ok(m)
}

pub fn tfim_spectrum(n: usize, j: f64, h: f64, boundary: Boundary) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = tfim_hamiltonian(n, j, h, boundary)?.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Levels closer than this (relative to |J|+|h|) to the ground energy count as one manifold.
pub const QUASI_DEGENERATE_TOL: f64 = 1e-4;

/// First level above the (quasi-)degenerate ground manifold.
pub fn tfim_numeric_gap(n: usize, j: f64, h: f64, boundary: Boundary) -> Result<f64> {
    let ev = tfim_spectrum(n, j, h, boundary)?;
    let tol = QUASI_DEGENERATE_TOL * (j.abs() + h.abs()).max(f64::MIN_POSITIVE);
    ev.iter()
        .find(|&&e| e - ev[0] > tol)
        .map(|e| e - ev[0])
        .ok_or_else(|| QmError::Convergence("spectrum is fully degenerate".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceKind {
    /// ⟨s'|e^{Δτ h σx}|s⟩ = cosh(Δτh) or sinh(Δτh)
    Exact,
    /// ⟨s'|1 + Δτ h σx|s⟩ = 1 or Δτh
    Linearized,
}

#[derive(Clone, Copy, Debug)]
pub struct ImaginaryTime {
    pub z_chain: f64,
    pub z_exact: f64,
    pub rel_error: f64,
    /// Classical coupling with e^{2K} = diagonal/off-diagonal weight; None when h ≤ 0.
    pub k: Option<f64>,
    /// Per-bond prefactor A with weight = A e^{K s s'}.
    pub a: Option<f64>,
}

/// Tr e^{βhσx} as a classical ring of N Ising spins with one slice per spin.
pub fn qubit_imaginary_time(beta: f64, h: f64, slices: usize, kind: SliceKind) -> Result<ImaginaryTime> {
    if slices == 0 {
        return Err(QmError::InvalidArgument("need at least one slice".into()));
    }
    let dt = beta / slices as f64;
    let (same, flip) = match kind {
        SliceKind::Exact => ((dt * h).cosh(), (dt * h).sinh()),
        SliceKind::Linearized => (1.0, dt * h),
    };
    // transfer matrix [[same, flip], [flip, same]] has eigenvalues same ± flip
    let n = slices as i32;
    let z_chain = (same + flip).powi(n) + (same - flip).powi(n);
    let z_exact = 2.0 * (beta * h).cosh();
    let (k, a) = if flip > 0.0 {
        (Some(0.5 * (same / flip).ln()), Some((same * flip).sqrt()))
    } else {
        (None, None)
    };
    Ok(ImaginaryTime { z_chain, z_exact, rel_error: (z_chain - z_exact).abs() / z_exact, k, a })
}

/// dg/dℓ = εg − (N+8)/3 g².
pub fn beta_function(g: f64, eps: f64, n_comp: usize) -> f64 {
    eps * g - (n_comp as f64 + 8.0) / 3.0 * g * g
}

/// g* = 3ε/(N+8).
pub fn wf_fixed_point(eps: f64, n_comp: usize) -> f64 {
    3.0 * eps / (n_comp as f64 + 8.0)
}

fn rk4_flow(g0: f64, eps: f64, n_comp: usize, l_max: f64, step: f64) -> FlowTrajectory {
    let steps = (l_max / step).round().max(1.0) as usize;
    let h = l_max / steps as f64;
    let f = |g: f64| beta_function(g, eps, n_comp);
    let mut t = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut g = g0;
    t.push(0.0);
    values.push(g);
    for s in 1..=steps {
        g = crate::numerics::rk4_step(&f, g, h);
        t.push(s as f64 * h);
        values.push(g);
    }
    FlowTrajectory { t, values }
}

#[derive(Clone, Debug)]
pub struct WfFlow {
    pub trajectory: FlowTrajectory,
    /// |g(ℓ_max) at step h − g(ℓ_max) at step h/2|
    pub richardson: f64,
}

pub fn wf_flow(g0: f64, eps: f64, l_max: f64, n_comp: usize) -> Result<WfFlow> {
    if g0 < 0.0 || l_max <= 0.0 {
        return Err(QmError::InvalidArgument("need g₀ ≥ 0 and ℓ_max > 0".into()));
    }
    let trajectory = rk4_flow(g0, eps, n_comp, l_max, WF_STEP);
    let half = rk4_flow(g0, eps, n_comp, l_max, WF_STEP / 2.0);
    let richardson = (trajectory.last() - half.last()).abs();
    if !trajectory.last().is_finite() {
        return Err(QmError::Convergence("flow diverged".into()));
    }
    Ok(WfFlow { trajectory, richardson })
}

#[derive(Clone, Copy, Debug)]
pub struct WfExponents {
    pub g_star: f64,
    /// One-loop ν = 1/2 + ε/12.
    pub nu: f64,
    /// β'(g*) = −ε.
    pub y_g: f64,
    pub beta_residual: f64,
}

pub fn wf_exponents(eps: f64) -> WfExponents {
    let g_star = wf_fixed_point(eps, 1);
    WfExponents {
        g_star,
        nu: 0.5 + eps / 12.0,
        y_g: eps - 2.0 * 3.0 * g_star,
        beta_residual: beta_function(g_star, eps, 1).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decimation_basics() {
        assert_eq!(decimate(0.0), 0.0);
        let k: f64 = 0.01;
        assert!((decimate(k) - k * k).abs() / (k * k) <= 0.02);
        let flow = decimation_flow(2.0, 12);
        assert!(flow.is_monotone_decreasing());
        assert!(flow.last() < 1e-6);
        assert!(decimate(400.0).is_finite());
        let mut k = 1e-4;
        while k < 100.0 {
            assert!(decimate(k) < k);
            k *= 1.3;
        }
    }

    #[test]
    fn partition_functions() {
        for k in [0.0, 0.3, 1.0, -0.7] {
            let z = ising1d_partition(2, k, Boundary::Open, PartitionMethod::Enumeration).unwrap();
            assert!((z - (2.0 * k.exp() + 2.0 * (-k).exp())).abs() < 1e-12);
        }
        for n in 1..=16 {
            assert_eq!(ising1d_partition(n, 0.0, Boundary::Open, PartitionMethod::Enumeration).unwrap(), 2f64.powi(n as i32));
            for b in [Boundary::Open, Boundary::Periodic] {
                let e = ising1d_partition(n, 0.8, b, PartitionMethod::Enumeration).unwrap();
                let t = ising1d_partition(n, 0.8, b, PartitionMethod::TransferMatrix).unwrap();
                assert!((e - t).abs() / e < 1e-12, "{n} {b:?}");
            }
        }
        let e = ising1d_partition(8, 1.0, Boundary::Open, PartitionMethod::Enumeration).unwrap();
        let t = ising1d_partition(8, 1.0, Boundary::Open, PartitionMethod::TransferMatrix).unwrap();
        assert!((e - t).abs() / e < 1e-12);
        assert!(ising1d_partition(25, 1.0, Boundary::Open, PartitionMethod::Enumeration).is_err());
    }

    #[test]
    fn decimation_identity() {
        for n in (2..=16).step_by(2) {
            for k in [0.1, 0.5, 1.0, 2.0] {
                for g in [DecimationGeometry::OpenBonds, DecimationGeometry::Ring] {
                    for m in [PartitionMethod::Enumeration, PartitionMethod::TransferMatrix] {
                        assert!(decimation_consistency(n, k, g, m).unwrap() <= 1e-10);
                    }
                }
            }
        }
        assert!(decimation_consistency(7, 1.0, DecimationGeometry::Ring, PartitionMethod::TransferMatrix).is_err());
        // N spins with N−1 bonds misses the identity by a boundary factor
        let full = ising1d_partition(8, 1.0, Boundary::Open, PartitionMethod::Enumeration).unwrap();
        let coarse = ising1d_partition(4, decimate(1.0), Boundary::Open, PartitionMethod::Enumeration).unwrap();
        assert!((full - decimation_prefactor(1.0).powi(4) * coarse).abs() / full > 1e-3);
    }

    #[test]
    fn duality() {
        let cp = kramers_wannier_tc().unwrap();
        assert!((cp.k_c - 0.5 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        assert!((cp.t_c - 2.0 / (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);
        assert!((cp.t_c - 2.269185).abs() < 1e-6);
        assert!(cp.sinh_residual < 1e-12);
        assert!((kramers_wannier_dual(cp.k_c).unwrap() - cp.k_c).abs() < 1e-12);
        for k in [0.05, 0.2, 0.44, 0.9, 2.0] {
            let kk = kramers_wannier_dual(kramers_wannier_dual(k).unwrap()).unwrap();
            assert!((kk - k).abs() < 1e-10 * k.max(1.0));
        }
        assert!(kramers_wannier_dual(0.0).is_err());
    }

    #[test]
    fn exponents() {
        let s = scaling_exponents(2.0, 1.0, 15.0 / 8.0).unwrap();
        assert_eq!((s.nu, s.beta, s.gamma, s.delta, s.alpha), (1.0, 0.125, 1.75, 15.0, 0.0));
        let mf = scaling_exponents(4.0, 2.0, 3.0).unwrap();
        assert_eq!((mf.nu, mf.beta, mf.gamma, mf.delta, mf.alpha), (0.5, 0.5, 1.0, 3.0, 0.0));
        assert_eq!(s.rushbrooke_residual(), 0.0);
        assert_eq!(mf.hyperscaling_residual(), 0.0);
        assert!(scaling_exponents(2.0, -1.0, 1.0).is_err());
        assert!(scaling_exponents(2.0, 1.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn rushbrooke_holds(d in 1.0f64..6.0, yt in 0.2f64..3.0, yh in 0.1f64..5.0) {
            prop_assume!((yh - d).abs() > 1e-3);
            let s = scaling_exponents(d, yt, yh).unwrap();
            prop_assert!(s.rushbrooke_residual().abs() < 1e-10);
            prop_assert!(s.hyperscaling_residual().abs() < 1e-12);
        }

        #[test]
        fn decimation_below_diagonal(k in 1e-3f64..50.0) {
            prop_assert!(decimate(k) < k);
        }
    }

    #[test]
    fn tfim() {
        assert_eq!(tfim_gap(1.0, 0.0), 2.0);
        assert_eq!(tfim_gap(1.0, 2.0), 2.0);
        assert_eq!(tfim_gap(1.0, 1.0), 0.0);
        // h = 0: classical, gap 2J per broken bond on an open chain
        let g = tfim_numeric_gap(6, 1.0, 0.0, Boundary::Open).unwrap();
        assert!((g - 2.0).abs() < 1e-12);
        // J = 0: free spins, gap 2h
        let g = tfim_numeric_gap(6, 0.0, 0.7, Boundary::Periodic).unwrap();
        assert!((g - 1.4).abs() < 1e-12);
        for h in [0.25, 2.0] {
            let g = tfim_numeric_gap(10, 1.0, h, Boundary::Open).unwrap();
            assert!((g - tfim_gap(1.0, h)).abs() / tfim_gap(1.0, h) <= 0.10, "h={h} gap={g}");
        }
        // periodic: disordered side converges, ordered side's first excitation is a wall pair
        let g = tfim_numeric_gap(10, 1.0, 2.0, Boundary::Periodic).unwrap();
        assert!((g - 2.0).abs() < 0.01);
        let g = tfim_numeric_gap(10, 1.0, 0.25, Boundary::Periodic).unwrap();
        assert!((g - 2.0 * tfim_gap(1.0, 0.25)).abs() / 3.0 < 0.1);
        assert!(tfim_hamiltonian(13, 1.0, 1.0, Boundary::Open).is_err());
    }

    #[test]
    fn tfim_small_chain_matches_dense_complex() {
        use crate::linalg::{kron_all, sigma_x, sigma_z, eye, CMatrix};
        let n = 4;
        let op = |site: usize, m: CMatrix| kron_all(&(0..n).map(|i| if i == site { m.clone() } else { eye(2) }).collect::<Vec<_>>());
        let mut h = CMatrix::zeros(16, 16);
        for i in 0..n {
            h -= op(i, sigma_z()) * op((i + 1) % n, sigma_z());
            h -= op(i, sigma_x()) * crate::linalg::r(0.6);
        }
        let want = crate::linalg::eigvalsh(&h).unwrap();
        let got = tfim_spectrum(n, 1.0, 0.6, Boundary::Periodic).unwrap();
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn imaginary_time() {
        for n in [1, 2, 4, 16, 64, 256] {
            let it = qubit_imaginary_time(1.0, 1.0, n, SliceKind::Exact).unwrap();
            assert!(it.rel_error < 1e-12);
            let (k, a) = (it.k.unwrap(), it.a.unwrap());
            assert!(((2.0 * k).exp() - 1.0 / (1.0 / n as f64).tanh()).abs() < 1e-9 * (2.0 * k).exp());
            if n == 1 {
                // one slice: Z = Σ_s A e^{K} = 2A e^K
                assert!((2.0 * a * k.exp() - 2.0 * 1f64.cosh()).abs() < 1e-12);
            }
        }
        let errs: Vec<f64> = [4, 16, 64, 256]
            .iter()
            .map(|&n| qubit_imaginary_time(1.0, 1.0, n, SliceKind::Linearized).unwrap().rel_error)
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        for n in [1, 5, 40] {
            for kind in [SliceKind::Exact, SliceKind::Linearized] {
                let it = qubit_imaginary_time(2.0, 0.0, n, kind).unwrap();
                assert_eq!(it.z_chain, 2.0);
                assert!(it.k.is_none());
            }
        }
    }

    #[test]
    fn wilson_fisher() {
        assert!((wf_fixed_point(1.0, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((wf_fixed_point(0.5, 3) - 1.5 / 11.0).abs() < 1e-15);
        let ex = wf_exponents(1.0);
        assert!((ex.nu - 7.0 / 12.0).abs() <= 1e-12);
        assert!(ex.beta_residual <= 1e-12);
        assert!((ex.y_g + 1.0).abs() < 1e-12);
        for g0 in [0.01, 0.2, 0.5, 0.99] {
            let f = wf_flow(g0, 1.0, 50.0, 1).unwrap();
            assert!((f.trajectory.last() - 1.0 / 3.0).abs() < 1e-8);
            assert!(f.richardson < 1e-10);
        }
        for eps in [0.0, -0.5] {
            let f = wf_flow(0.4, eps, 200.0, 1).unwrap();
            assert!(f.trajectory.last() < 0.02);
            assert!(f.trajectory.is_monotone_decreasing());
        }
        assert!(wf_flow(-0.1, 1.0, 1.0, 1).is_err());
    }
}

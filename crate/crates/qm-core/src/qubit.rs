//! Single qubits: Bloch-cube states, Pauli and rotation operators, Born rule, density matrices.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{
    self, c, cmat, eigvalsh, max_abs, r, require_hermitian, sigma_dot, sigma_x, sigma_y, sigma_z,
    CMatrix, CVector, C64, I, ONE, ZERO,
};
use crate::{QmError, Result};

/// Amplitudes below this count as zero when fixing the global phase.
const PHASE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn unit(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }

    pub fn pauli(self) -> CMatrix {
        match self {
            Axis::X => sigma_x(),
            Axis::Y => sigma_y(),
            Axis::Z => sigma_z(),
        }
    }
}

/// One of the six Bloch-cube states |±x⟩, |±y⟩, |±z⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeState {
    pub axis: Axis,
    pub plus: bool,
}

impl CubeState {
    pub const fn new(axis: Axis, plus: bool) -> Self {
        CubeState { axis, plus }
    }

    pub fn all() -> [CubeState; 6] {
        [
            CubeState::new(Axis::X, true),
            CubeState::new(Axis::X, false),
            CubeState::new(Axis::Y, true),
            CubeState::new(Axis::Y, false),
            CubeState::new(Axis::Z, true),
            CubeState::new(Axis::Z, false),
        ]
    }

    pub fn state(self) -> QubitState {
        let s = FRAC_1_SQRT_2;
        let (a, b) = match (self.axis, self.plus) {
            (Axis::Z, true) => (ONE, ZERO),
            (Axis::Z, false) => (ZERO, ONE),
            (Axis::X, true) => (r(s), r(s)),
            (Axis::X, false) => (r(s), r(-s)),
            (Axis::Y, true) => (r(s), c(0.0, s)),
            (Axis::Y, false) => (r(s), c(0.0, -s)),
        };
        QubitState { alpha: a, beta: b }
    }

    pub fn label(self) -> String {
        let sign = if self.plus { '+' } else { '-' };
        let ax = match self.axis {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        };
        format!("{sign}{ax}")
    }

    pub fn opposite(self) -> CubeState {
        CubeState::new(self.axis, !self.plus)
    }
}

/// Pure qubit state α|+z⟩ + β|−z⟩.
///
/// Amplitudes are stored as computed so global phases survive (a 2π rotation
/// returns −ψ). [`QubitState::canonical`] splits the phase off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    pub alpha: C64,
    pub beta: C64,
}

impl QubitState {
    /// Normalizes the input; the zero vector is rejected.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(QmError::InvalidArgument("zero qubit state".into()));
        }
        Ok(QubitState { alpha: alpha / n, beta: beta / n })
    }

    /// cos(θ/2)|+z⟩ + e^{iφ} sin(θ/2)|−z⟩.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        QubitState {
            alpha: r((theta / 2.0).cos()),
            beta: C64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn cube(cs: CubeState) -> Self {
        cs.state()
    }

    pub fn from_vector(v: &CVector) -> Result<Self> {
        if v.len() != 2 {
            return Err(QmError::Dimension(format!("qubit needs 2 amplitudes, got {}", v.len())));
        }
        QubitState::new(v[0], v[1])
    }

    pub fn vector(&self) -> CVector {
        linalg::cvec(&[self.alpha, self.beta])
    }

    pub fn norm(&self) -> f64 {
        (self.alpha.norm_sqr() + self.beta.norm_sqr()).sqrt()
    }

    /// (canonical state, phase) with self = phase · canonical and the first
    /// nonzero amplitude of the canonical state real and positive.
    pub fn canonical(&self) -> (QubitState, C64) {
        let lead = if self.alpha.norm() > PHASE_EPS { self.alpha } else { self.beta };
        let phase = lead / lead.norm();
        let inv = phase.conj();
        (QubitState { alpha: self.alpha * inv, beta: self.beta * inv }, phase)
    }

    /// (θ, φ) on the Bloch sphere.
    pub fn bloch_angles(&self) -> (f64, f64) {
        let (s, _) = self.canonical();
        let theta = 2.0 * s.beta.norm().atan2(s.alpha.norm());
        let phi = if s.beta.norm() > PHASE_EPS { s.beta.arg() - s.alpha.arg() } else { 0.0 };
        (theta, phi)
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        bloch_vector(&QubitDensity::pure(self))
    }

    /// Equal up to a global phase.
    pub fn same_ray(&self, other: &QubitState, tol: f64) -> bool {
        (1.0 - born(self, other)).abs() <= tol
    }

    /// Which cube state this is (up to phase), if any.
    pub fn as_cube(&self, tol: f64) -> Option<CubeState> {
        CubeState::all().into_iter().find(|cs| self.same_ray(&cs.state(), tol))
    }
}

/// ⟨a|b⟩.
pub fn inner(a: &QubitState, b: &QubitState) -> C64 {
    a.alpha.conj() * b.alpha + a.beta.conj() * b.beta
}

/// |⟨outcome|state⟩|².
pub fn born(state: &QubitState, outcome: &QubitState) -> f64 {
    inner(outcome, state).norm_sqr()
}

/// R_n(θ) = cos(θ/2) I − i sin(θ/2) n̂·σ.
pub fn rotation_matrix(axis: [f64; 3], angle: f64) -> Result<CMatrix> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if n == 0.0 {
        return Err(QmError::InvalidArgument("rotation axis is the zero vector".into()));
    }
    if (n - 1.0).abs() > 1e-9 {
        return Err(QmError::InvalidArgument(format!("rotation axis has length {n}, expected 1")));
    }
    let h = angle / 2.0;
    Ok(linalg::eye(2) * r(h.cos()) - sigma_dot(axis) * (I * h.sin()))
}

pub fn rotate(state: &QubitState, axis: [f64; 3], angle: f64) -> Result<QubitState> {
    let u = rotation_matrix(axis, angle)?;
    let v = u * state.vector();
    Ok(QubitState { alpha: v[0], beta: v[1] })
}

/// The 90° cube operators X̂, Ŷ, Ẑ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubeOp {
    X,
    Y,
    Z,
}

impl CubeOp {
    fn axis(self) -> Axis {
        match self {
            CubeOp::X => Axis::X,
            CubeOp::Y => Axis::Y,
            CubeOp::Z => Axis::Z,
        }
    }
}

/// |+n⟩⟨+n| + i|−n⟩⟨−n|.
pub fn cube_matrix(op: CubeOp) -> CMatrix {
    let ax = op.axis();
    let p = CubeState::new(ax, true).state().vector();
    let m = CubeState::new(ax, false).state().vector();
    linalg::outer(&p, &p) + linalg::outer(&m, &m) * I
}

/// Applies a cube operator and returns (canonical state, stripped global phase).
pub fn cube_op(op: CubeOp, state: &QubitState) -> (QubitState, C64) {
    let v = cube_matrix(op) * state.vector();
    QubitState { alpha: v[0], beta: v[1] }.canonical()
}

/// A validated 2×2 density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitDensity {
    rho: CMatrix,
}

impl QubitDensity {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != 2 || rho.ncols() != 2 {
            return Err(QmError::Dimension("qubit density must be 2x2".into()));
        }
        require_hermitian(&rho)?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(QmError::InvalidArgument(format!("trace {tr} is not 1")));
        }
        let ev = eigvalsh(&rho)?;
        if ev[0] < -1e-12 {
            return Err(QmError::InvalidArgument(format!("negative eigenvalue {}", ev[0])));
        }
        Ok(QubitDensity { rho })
    }

    pub fn pure(s: &QubitState) -> Self {
        let v = s.vector();
        QubitDensity { rho: linalg::outer(&v, &v) }
    }

    /// Convex combination Σ p_k |ψ_k⟩⟨ψ_k|.
    pub fn mixture(parts: &[(f64, QubitState)]) -> Result<Self> {
        let mut rho = CMatrix::zeros(2, 2);
        for (p, s) in parts {
            if *p < 0.0 {
                return Err(QmError::InvalidArgument("negative mixture weight".into()));
            }
            let v = s.vector();
            rho += linalg::outer(&v, &v) * r(*p);
        }
        QubitDensity::new(rho)
    }

    /// ρ = ½(I + r·σ).
    pub fn from_bloch(rv: [f64; 3]) -> Result<Self> {
        QubitDensity::new((linalg::eye(2) + sigma_dot(rv)) * r(0.5))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }
}

/// Tr(ρ O); O must be Hermitian.
pub fn expectation(rho: &QubitDensity, o: &CMatrix) -> Result<f64> {
    require_hermitian(o)?;
    if o.nrows() != 2 {
        return Err(QmError::Dimension("observable must be 2x2".into()));
    }
    Ok((rho.matrix() * o).trace().re)
}

/// r_i = Tr(ρ σ_i).
pub fn bloch_vector(rho: &QubitDensity) -> [f64; 3] {
    let m = rho.matrix();
    [
        (m * sigma_x()).trace().re,
        (m * sigma_y()).trace().re,
        (m * sigma_z()).trace().re,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChange {
    ZtoX,
    ZtoY,
    XtoY,
}

/// Change-of-basis unitary whose columns are the target-basis kets written in
/// the source basis: U_xz, U_yz and U_yx (the last one in x coordinates).
pub fn basis_change(which: BasisChange) -> CMatrix {
    let col = |cs: CubeState, src: Axis| -> [C64; 2] {
        let v = cs.state();
        let bp = CubeState::new(src, true).state();
        let bm = CubeState::new(src, false).state();
        [inner(&bp, &v), inner(&bm, &v)]
    };
    let (target, src) = match which {
        BasisChange::ZtoX => (Axis::X, Axis::Z),
        BasisChange::ZtoY => (Axis::Y, Axis::Z),
        BasisChange::XtoY => (Axis::Y, Axis::X),
    };
    let p = col(CubeState::new(target, true), src);
    let m = col(CubeState::new(target, false), src);
    cmat(&[&[p[0], m[0]], &[p[1], m[1]]])
}

/// Largest deviation of Pauli algebra identities; used as a self-check.
pub fn pauli_algebra_residual() -> f64 {
    let s = [sigma_x(), sigma_y(), sigma_z()];
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let comm = linalg::commutator(&s[i], &s[j]);
            let mut want = CMatrix::zeros(2, 2);
            for (k, sk) in s.iter().enumerate() {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    want += sk * (I * (2.0 * e));
                }
            }
            worst = worst.max(max_abs(&(comm - want)));
        }
    }
    let prod = &s[0] * &s[1] * &s[2];
    worst.max(max_abs(&(prod - linalg::eye(2) * I)))
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn st(axis: Axis, plus: bool) -> QubitState {
        CubeState::new(axis, plus).state()
    }

    #[test]
    fn inner_products() {
        let v = inner(&st(Axis::X, true), &st(Axis::Y, true));
        assert!((v - c(0.5, 0.5)).norm() < 1e-15);
        assert!((inner(&st(Axis::Z, true), &st(Axis::Z, true)) - ONE).norm() < 1e-15);
        let m = inner(&st(Axis::Z, true), &st(Axis::X, true)).norm();
        assert!((m - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cube_overlap_magnitudes() {
        let all = CubeState::all();
        let mut pairs = 0;
        for a in all {
            for b in all {
                if a == b {
                    continue;
                }
                pairs += 1;
                let m = inner(&a.state(), &b.state()).norm();
                if a.axis == b.axis {
                    assert!(m < 1e-15);
                } else {
                    assert!((m - FRAC_1_SQRT_2).abs() < 1e-15);
                }
            }
        }
        assert_eq!(pairs, 30);
    }

    #[test]
    fn born_examples() {
        assert!((born(&st(Axis::X, true), &st(Axis::Z, true)) - 0.5).abs() < 1e-15);
        assert!(born(&st(Axis::Y, true), &st(Axis::Y, false)) < 1e-15);
        let th = 1.1;
        let s = QubitState::from_bloch(th, 0.4);
        assert!((born(&s, &st(Axis::Z, true)) - (th / 2.0).cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn rotations() {
        let z = st(Axis::Z, true);
        let out = rotate(&z, [0.0, 0.0, 1.0], 0.77).unwrap();
        assert!(out.same_ray(&z, 1e-14));
        let out = rotate(&st(Axis::X, true), [0.0, 0.0, 1.0], FRAC_PI_2).unwrap();
        assert!(out.same_ray(&st(Axis::Y, true), 1e-14));
        let n = [0.48, -0.6, 0.64];
        let s = QubitState::from_bloch(0.3, 2.0);
        let out = rotate(&s, n, 2.0 * PI).unwrap();
        assert!((out.alpha + s.alpha).norm() < 1e-14 && (out.beta + s.beta).norm() < 1e-14);
        assert!(rotate(&s, [0.0, 0.0, 0.0], 1.0).is_err());
        assert!(rotate(&s, [0.0, 0.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn quarter_turns_cycle() {
        let seq = [(Axis::X, true), (Axis::Y, true), (Axis::X, false), (Axis::Y, false)];
        let mut s = st(Axis::X, true);
        for k in 1..=4 {
            s = rotate(&s, [0.0, 0.0, 1.0], FRAC_PI_2).unwrap();
            let (ax, p) = seq[k % 4];
            assert!(s.same_ray(&st(ax, p), 1e-14));
        }
    }

    #[test]
    fn cube_operator_actions() {
        let (s, ph) = cube_op(CubeOp::Z, &st(Axis::X, true));
        assert!(s.same_ray(&st(Axis::Y, true), 1e-14));
        assert!((ph - ONE).norm() < 1e-14);

        let e = C64::from_polar(1.0, FRAC_PI_4);
        let (s, ph) = cube_op(CubeOp::X, &st(Axis::Z, true));
        assert!((s.alpha - st(Axis::Y, false).alpha).norm() < 1e-14);
        assert!((s.beta - st(Axis::Y, false).beta).norm() < 1e-14);
        assert!((ph - e).norm() < 1e-14);

        let (s, ph) = cube_op(CubeOp::Y, &st(Axis::Z, true));
        assert!(s.same_ray(&st(Axis::X, true), 1e-14));
        assert!((ph - e).norm() < 1e-14);
    }

    #[test]
    fn cube_ops_are_unitary_quarter_turns() {
        for op in [CubeOp::X, CubeOp::Y, CubeOp::Z] {
            let m = cube_matrix(op);
            assert!(linalg::is_unitary(&m));
            let m4 = &m * &m * &m * &m;
            assert!(max_abs(&(m4 - linalg::eye(2))) < 1e-14);
        }
    }

    #[test]
    fn expectations() {
        let px = QubitDensity::pure(&st(Axis::X, true));
        assert!((expectation(&px, &sigma_x()).unwrap() - 1.0).abs() < 1e-14);
        assert!(expectation(&px, &sigma_z()).unwrap().abs() < 1e-14);
        let mix = QubitDensity::mixture(&[(0.6, st(Axis::Z, true)), (0.4, st(Axis::Z, false))]).unwrap();
        assert!((expectation(&mix, &sigma_z()).unwrap() - 0.2).abs() < 1e-14);
        let bad = linalg::rmat(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(expectation(&mix, &bad).is_err());
    }

    #[test]
    fn bloch_vectors() {
        let mixed = QubitDensity::new(linalg::eye(2) * r(0.5)).unwrap();
        assert_eq!(bloch_vector(&mixed), [0.0, 0.0, 0.0]);
        let y = bloch_vector(&QubitDensity::pure(&st(Axis::Y, true)));
        assert!((y[0]).abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-15 && y[2].abs() < 1e-15);
        let (th, ph) = (0.9, -2.2);
        let b = QubitState::from_bloch(th, ph).bloch_vector();
        let want = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        for k in 0..3 {
            assert!((b[k] - want[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn density_validation() {
        assert!(QubitDensity::new(linalg::eye(2)).is_err());
        assert!(QubitDensity::new(linalg::diag_real(&[1.2, -0.2])).is_err());
        assert!(QubitDensity::from_bloch([0.0, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn printed_basis_changes() {
        let s = FRAC_1_SQRT_2;
        let uxz = basis_change(BasisChange::ZtoX);
        assert!(max_abs(&(uxz - linalg::rmat(&[&[s, s], &[s, -s]]))) < 1e-15);
        let uyz = basis_change(BasisChange::ZtoY);
        let want = cmat(&[&[r(s), r(s)], &[c(0.0, s), c(0.0, -s)]]);
        assert!(max_abs(&(uyz - want)) < 1e-15);
        let uyx = basis_change(BasisChange::XtoY);
        let want = cmat(&[&[c(0.5, 0.5), c(0.5, -0.5)], &[c(0.5, -0.5), c(0.5, 0.5)]]);
        assert!(max_abs(&(uyx.clone() - want)) < 1e-15);
        assert!(linalg::is_unitary(&uyx));
    }

    #[test]
    fn pauli_identities_exact() {
        assert!(pauli_algebra_residual() <= 1e-14);
    }

    #[test]
    fn canonical_phase() {
        let s = QubitState::new(c(0.0, 1.0), r(1.0)).unwrap();
        let (cs, ph) = s.canonical();
        assert!(cs.alpha.im == 0.0 && cs.alpha.re > 0.0);
        assert!((ph - I).norm() < 1e-15);
        let s = QubitState::new(ZERO, c(-1.0, 0.0)).unwrap();
        let (cs, _) = s.canonical();
        assert_eq!(cs.beta, ONE);
    }

    fn arb_state() -> impl Strategy<Value = QubitState> {
        (0.0f64..PI, -PI..PI).prop_map(|(t, p)| QubitState::from_bloch(t, p))
    }

    fn arb_axis() -> impl Strategy<Value = [f64; 3]> {
        (0.0f64..PI, -PI..PI).prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
    }

    proptest! {
        #[test]
        fn born_sums_to_one(s in arb_state(), n in arb_axis()) {
            let h = rotation_matrix(n, 1.234).unwrap();
            let bp = h.column(0).into_owned();
            let bm = h.column(1).into_owned();
            let p = QubitState::from_vector(&bp).unwrap();
            let m = QubitState::from_vector(&bm).unwrap();
            prop_assert!((born(&s, &p) + born(&s, &m) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn parallel_rotations_compose(s in arb_state(), n in arb_axis(), a in -7.0f64..7.0, b in -7.0f64..7.0) {
            let one = rotate(&rotate(&s, n, b).unwrap(), n, a).unwrap();
            let both = rotate(&s, n, a + b).unwrap();
            prop_assert!(one.same_ray(&both, 1e-12));
            prop_assert!((one.norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn global_phase_invariance(s in arb_state(), t in arb_state(), ph in -PI..PI) {
            let g = C64::from_polar(1.0, ph);
            let sg = QubitState { alpha: s.alpha * g, beta: s.beta * g };
            prop_assert!((born(&s, &t) - born(&sg, &t)).abs() <= 1e-12);
        }
    }
}

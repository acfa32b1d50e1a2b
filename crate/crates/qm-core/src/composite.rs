//! Multi-qubit states: gates, partial measurement, partial trace, entanglement measures.
//!
//! Qubit 1 is the slow (leftmost) index: basis index j = Σ_k b_k 2^{n−k}, so
//! the ket |b_1 b_2 … b_n⟩ reads as a binary number.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::SVD;

use crate::linalg::{self, c, eigh, eigvalsh, max_abs, r, CMatrix, CVector, C64, ONE, ZERO};
use crate::qubit::{Axis, CubeState, QubitState};
use crate::{QmError, Result};

/// Eigenvalues above −PSD_TOL are accepted as nonnegative.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiQubitState {
    n: usize,
    amps: CVector,
}

impl MultiQubitState {
    /// Normalizes; length must be 2ⁿ.
    pub fn new(n: usize, amps: CVector) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(QmError::Dimension(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(QmError::InvalidArgument("zero state".into()));
        }
        Ok(MultiQubitState { n, amps: amps / r(norm) })
    }

    /// Computational basis ket from a bit string such as "010".
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        let j = usize::from_str_radix(bits, 2)
            .map_err(|_| QmError::InvalidArgument(format!("bad bit string {bits:?}")))?;
        let mut amps = CVector::zeros(1 << n);
        amps[j] = ONE;
        Ok(MultiQubitState { n, amps })
    }

    /// Superposition Σ c_k |bits_k⟩, normalized.
    pub fn superpose(terms: &[(C64, &str)]) -> Result<Self> {
        let n = terms
            .first()
            .map(|t| t.1.len())
            .ok_or_else(|| QmError::InvalidArgument("empty superposition".into()))?;
        let mut amps = CVector::zeros(1 << n);
        for (coef, bits) in terms {
            if bits.len() != n {
                return Err(QmError::Dimension("bit strings of unequal length".into()));
            }
            let j = usize::from_str_radix(bits, 2)
                .map_err(|_| QmError::InvalidArgument(format!("bad bit string {bits:?}")))?;
            amps[j] += *coef;
        }
        MultiQubitState::new(n, amps)
    }

    /// Tensor product of single-qubit states, qubit 1 first.
    pub fn product(qs: &[QubitState]) -> Self {
        let mut v = CVector::from_element(1, ONE);
        for q in qs {
            v = linalg::kron_vec(&v, &q.vector());
        }
        MultiQubitState { n: qs.len(), amps: v }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn apply(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.amps.len() || u.nrows() != self.amps.len() {
            return Err(QmError::Dimension("operator does not match state".into()));
        }
        Ok(MultiQubitState { n: self.n, amps: u * &self.amps })
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn density(&self) -> MultiQubitDensity {
        MultiQubitDensity { n: self.n, rho: linalg::outer(&self.amps, &self.amps) }
    }

    /// Bit string label of basis index j.
    pub fn label(n: usize, j: usize) -> String {
        (0..n).map(|k| if (j >> (n - 1 - k)) & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// Bit position (from the least significant end) of 1-based qubit `q`.
#[inline]
fn bitpos(n: usize, q: usize) -> usize {
    n - q
}

fn check_targets(n: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t == 0 || t > n {
            return Err(QmError::InvalidArgument(format!("qubit {t} out of range 1..={n}")));
        }
        if targets[..i].contains(&t) {
            return Err(QmError::InvalidArgument(format!("qubit {t} repeated")));
        }
    }
    Ok(())
}

/// Embeds a 2^k×2^k operator acting on `targets` (first target = most significant) into n qubits.
pub fn embed(op: &CMatrix, targets: &[usize], n: usize) -> Result<CMatrix> {
    check_targets(n, targets)?;
    let k = targets.len();
    if op.nrows() != 1 << k || op.ncols() != 1 << k {
        return Err(QmError::Dimension(format!("operator is not 2^{k} square")));
    }
    let dim = 1usize << n;
    let pos: Vec<usize> = targets.iter().map(|&t| bitpos(n, t)).collect();
    let sub = |j: usize| -> usize {
        pos.iter().fold(0, |acc, &p| (acc << 1) | ((j >> p) & 1))
    };
    let mut mask = 0usize;
    for &p in &pos {
        mask |= 1 << p;
    }
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let sc = sub(col);
        let base = col & !mask;
        for sr in 0..(1usize << k) {
            let v = op[(sr, sc)];
            if v == ZERO {
                continue;
            }
            let mut row = base;
            for (i, &p) in pos.iter().enumerate() {
                if (sr >> (k - 1 - i)) & 1 == 1 {
                    row |= 1 << p;
                }
            }
            out[(row, col)] += v;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Cnot,
    Cz,
    Swap,
    SqrtSwap,
    H,
    X,
    Y,
    Z,
    T,
    CPhase(f64),
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::H | Gate::X | Gate::Y | Gate::Z | Gate::T => 1,
            _ => 2,
        }
    }

    /// The bare 2×2 or 4×4 matrix.
    pub fn matrix(self) -> CMatrix {
        let s = FRAC_1_SQRT_2;
        match self {
            Gate::H => linalg::rmat(&[&[s, s], &[s, -s]]),
            Gate::X => linalg::sigma_x(),
            Gate::Y => linalg::sigma_y(),
            Gate::Z => linalg::sigma_z(),
            Gate::T => linalg::cmat(&[&[ONE, ZERO], &[ZERO, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]]),
            Gate::Cnot => linalg::rmat(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
            Gate::Cz => linalg::diag_real(&[1.0, 1.0, 1.0, -1.0]),
            Gate::Swap => linalg::rmat(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
            ]),
            Gate::SqrtSwap => {
                let p = c(0.5, 0.5);
                let m = c(0.5, -0.5);
                linalg::cmat(&[
                    &[ONE, ZERO, ZERO, ZERO],
                    &[ZERO, p, m, ZERO],
                    &[ZERO, m, p, ZERO],
                    &[ZERO, ZERO, ZERO, ONE],
                ])
            }
            Gate::CPhase(phi) => {
                let mut m = linalg::eye(4);
                m[(3, 3)] = C64::from_polar(1.0, phi);
                m
            }
        }
    }
}

/// Gate embedded on n qubits. For CNOT the first target is the control.
pub fn gate(g: Gate, targets: &[usize], n: usize) -> Result<CMatrix> {
    if targets.len() != g.arity() {
        return Err(QmError::InvalidArgument(format!(
            "{g:?} needs {} target(s), got {}",
            g.arity(),
            targets.len()
        )));
    }
    embed(&g.matrix(), targets, n)
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    /// +1 for the |+n⟩ outcome of the chosen axis, −1 for |−n⟩.
    pub eigenvalue: i8,
    pub probability: f64,
    /// None when the outcome has zero probability.
    pub post_state: Option<MultiQubitState>,
}

/// Projective measurement of one qubit along a cube axis.
pub fn measure_subsystem(state: &MultiQubitState, qubit: usize, basis: Axis) -> Result<Vec<MeasurementOutcome>> {
    let n = state.n;
    check_targets(n, &[qubit])?;
    let mut out = Vec::with_capacity(2);
    for plus in [true, false] {
        let b = CubeState::new(basis, plus).state().vector();
        let proj = embed(&linalg::outer(&b, &b), &[qubit], n)?;
        let v = proj * &state.amps;
        let p = v.norm_squared();
        let post = if p > 1e-15 { Some(MultiQubitState { n, amps: v / r(p.sqrt()) }) } else { None };
        out.push(MeasurementOutcome { eigenvalue: if plus { 1 } else { -1 }, probability: p, post_state: post });
    }
    Ok(out)
}

/// |(⟨o_1| ⊗ … ⊗ ⟨o_n|) ψ⟩|².
pub fn joint_probability(state: &MultiQubitState, outcomes: &[QubitState]) -> Result<f64> {
    if outcomes.len() != state.n {
        return Err(QmError::Dimension("one outcome per qubit required".into()));
    }
    let o = MultiQubitState::product(outcomes);
    Ok(o.inner(state).norm_sqr())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiQubitDensity {
    n: usize,
    rho: CMatrix,
}

impl MultiQubitDensity {
    /// Validates Hermiticity, unit trace and PSD (to −1e-10).
    pub fn new(n: usize, rho: CMatrix) -> Result<Self> {
        if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
            return Err(QmError::Dimension(format!("density is not 2^{n} square")));
        }
        linalg::require_hermitian(&rho)?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(QmError::InvalidArgument(format!("trace {tr} is not 1")));
        }
        let ev = eigvalsh(&rho)?;
        if ev[0] < -PSD_TOL {
            return Err(QmError::InvalidArgument(format!("negative eigenvalue {}", ev[0])));
        }
        Ok(MultiQubitDensity { n, rho })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn product(a: &MultiQubitDensity, b: &MultiQubitDensity) -> Self {
        MultiQubitDensity { n: a.n + b.n, rho: linalg::kron(&a.rho, &b.rho) }
    }
}

/// Partial trace keeping `keep` (1-based, any order; the result keeps ascending order).
///
/// Index-summation definition: (ρ_A)_{ij} = Σ_k ρ_{ik,jk}.
pub fn partial_trace(rho: &MultiQubitDensity, keep: &[usize]) -> Result<MultiQubitDensity> {
    let n = rho.n;
    if keep.is_empty() {
        return Err(QmError::InvalidArgument("keep set is empty".into()));
    }
    check_targets(n, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();
    let nk = kept.len();
    let nt = traced.len();
    let compose = |a: usize, t: usize| -> usize {
        let mut j = 0usize;
        for (i, &q) in kept.iter().enumerate() {
            if (a >> (nk - 1 - i)) & 1 == 1 {
                j |= 1 << bitpos(n, q);
            }
        }
        for (i, &q) in traced.iter().enumerate() {
            if (t >> (nt - 1 - i)) & 1 == 1 {
                j |= 1 << bitpos(n, q);
            }
        }
        j
    };
    let dk = 1usize << nk;
    let mut out = CMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = ZERO;
            for t in 0..(1usize << nt) {
                s += rho.rho[(compose(a, t), compose(b, t))];
            }
            out[(a, b)] = s;
        }
    }
    Ok(MultiQubitDensity { n: nk, rho: out })
}

/// Which factor of a bipartite d_A·d_B space to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Block method: Tr_B sums the diagonal entries of each d_B×d_B block;
/// Tr_A sums the diagonal blocks.
pub fn partial_trace_blocks(rho: &CMatrix, da: usize, db: usize, trace_out: Side) -> CMatrix {
    match trace_out {
        Side::B => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum()
        }),
        Side::A => {
            let mut out = CMatrix::zeros(db, db);
            for k in 0..da {
                out += rho.view((k * db, k * db), (db, db));
            }
            out
        }
    }
}

/// Projection method: Σ_j (I ⊗ ⟨j|) ρ (I ⊗ |j⟩) (or the mirror for Tr_A).
pub fn partial_trace_projection(rho: &CMatrix, da: usize, db: usize, trace_out: Side) -> CMatrix {
    let (keep_dim, gone_dim) = match trace_out {
        Side::B => (da, db),
        Side::A => (db, da),
    };
    let mut out = CMatrix::zeros(keep_dim, keep_dim);
    for j in 0..gone_dim {
        let mut e = CMatrix::zeros(gone_dim, 1);
        e[(j, 0)] = ONE;
        let p = match trace_out {
            Side::B => linalg::kron(&linalg::eye(da), &e),
            Side::A => linalg::kron(&e, &linalg::eye(db)),
        };
        out += p.adjoint() * rho * p;
    }
    out
}

#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients, descending, summing to 1.
    pub lambdas: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SchmidtDecomposition {
    pub fn schmidt_number(&self) -> usize {
        self.lambdas.iter().filter(|&&l| l > 1e-10).count()
    }

    pub fn reconstruct(&self) -> CVector {
        let mut v = CVector::zeros(self.left[0].len() * self.right[0].len());
        for (k, &l) in self.lambdas.iter().enumerate() {
            v += linalg::kron_vec(&self.left[k], &self.right[k]) * r(l.sqrt());
        }
        v
    }
}

/// Schmidt decomposition across the cut after the first `cut` qubits.
pub fn schmidt(state: &MultiQubitState, cut: usize) -> Result<SchmidtDecomposition> {
    if cut == 0 || cut >= state.n {
        return Err(QmError::InvalidArgument(format!("cut {cut} must split {} qubits", state.n)));
    }
    let da = 1usize << cut;
    let db = 1usize << (state.n - cut);
    let m = CMatrix::from_fn(da, db, |a, b| state.amps[a * db + b]);
    let svd = SVD::new(m, true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut lambdas = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in order {
        let s = svd.singular_values[k];
        lambdas.push(s * s);
        left.push(u.column(k).into_owned());
        right.push(vt.row(k).transpose());
    }
    Ok(SchmidtDecomposition { lambdas, left, right })
}

/// Von Neumann entropy of the first `cut` qubits, in bits.
pub fn entanglement_entropy(state: &MultiQubitState, cut: usize) -> Result<f64> {
    let sd = schmidt(state, cut)?;
    Ok(shannon_bits(&sd.lambdas))
}

/// −Σ p log₂ p over the positive entries.
pub fn shannon_bits(ps: &[f64]) -> f64 {
    ps.iter().filter(|&&p| p > 1e-300).map(|&p| -p * p.log2()).sum::<f64>().max(0.0)
}

/// −Tr ρ log₂ ρ.
pub fn von_neumann_entropy(rho: &MultiQubitDensity) -> Result<f64> {
    Ok(shannon_bits(&eigvalsh(&rho.rho)?))
}

fn check_two_qubit(rho: &CMatrix) -> Result<()> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(QmError::Dimension("two-qubit density must be 4x4".into()));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit density.
pub fn concurrence(rho: &MultiQubitDensity) -> Result<f64> {
    let m = &rho.rho;
    check_two_qubit(m)?;
    let yy = linalg::kron(&linalg::sigma_y(), &linalg::sigma_y());
    let tilde = &yy * m.conjugate() * &yy;
    let es = eigh(m)?;
    let sqrt_rho = es.apply_fn(|l| r(l.max(0.0).sqrt()));
    let herm = &sqrt_rho * tilde * &sqrt_rho;
    let herm = (&herm + herm.adjoint()) * r(0.5);
    let mut lam: Vec<f64> = eigvalsh(&herm)?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// ρ^{T_B} for a d_A·d_B bipartite matrix.
pub fn partial_transpose(rho: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da * db, da * db, |row, col| {
        let (a, b) = (row / db, row % db);
        let (a2, b2) = (col / db, col % db);
        rho[(a * db + b2, a2 * db + b)]
    })
}

/// Smallest eigenvalue of the partial transpose over the second qubit.
pub fn ppt_min_eigenvalue(rho: &MultiQubitDensity) -> Result<f64> {
    check_two_qubit(&rho.rho)?;
    Ok(eigvalsh(&partial_transpose(&rho.rho, 2, 2))?[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    /// (|000⟩ + |111⟩)/√2
    Ghz,
    /// (|000⟩ − |111⟩)/√2
    GhzMinus,
    W,
}

pub fn named_state(name: NamedState) -> MultiQubitState {
    let s = FRAC_1_SQRT_2;
    let amps: Vec<f64> = match name {
        NamedState::PhiPlus => vec![s, 0.0, 0.0, s],
        NamedState::PhiMinus => vec![s, 0.0, 0.0, -s],
        NamedState::PsiPlus => vec![0.0, s, s, 0.0],
        NamedState::PsiMinus => vec![0.0, s, -s, 0.0],
        NamedState::Ghz => vec![s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s],
        NamedState::GhzMinus => vec![s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -s],
        NamedState::W => {
            let t = 1.0 / 3f64.sqrt();
            vec![0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]
        }
    };
    let n = amps.len().trailing_zeros() as usize;
    MultiQubitState { n, amps: linalg::rvec(&amps) }
}

/// Werner state p|β⟩⟨β| + (1−p) I/4 around a Bell state β.
pub fn werner(p: f64, bell: NamedState) -> Result<MultiQubitDensity> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QmError::InvalidArgument(format!("Werner weight {p} outside [0,1]")));
    }
    let b = named_state(bell);
    if b.n != 2 {
        return Err(QmError::InvalidArgument("Werner states need a two-qubit Bell state".into()));
    }
    let rho = b.density().rho * r(p) + linalg::eye(4) * r((1.0 - p) / 4.0);
    MultiQubitDensity::new(2, rho)
}

/// Max-entry distance between two densities.
pub fn density_distance(a: &MultiQubitDensity, b: &MultiQubitDensity) -> f64 {
    max_abs(&(&a.rho - &b.rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(n: usize, rng: &mut impl Rng) -> MultiQubitDensity {
        let d = 1 << n;
        let a = CMatrix::from_fn(d, d, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let m = &a * a.adjoint();
        let tr = m.trace().re;
        MultiQubitDensity::new(n, m / r(tr)).unwrap()
    }

    fn random_state(n: usize, rng: &mut impl Rng) -> MultiQubitState {
        let v = CVector::from_fn(1 << n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        MultiQubitState::new(n, v).unwrap()
    }

    fn worked_rho() -> CMatrix {
        linalg::rmat(&[
            &[0.4, 0.0, 0.0, 0.2],
            &[0.0, 0.1, 0.05, 0.0],
            &[0.0, 0.05, 0.1, 0.0],
            &[0.2, 0.0, 0.0, 0.4],
        ])
    }

    #[test]
    fn cnot_entangles() {
        let s = MultiQubitState::superpose(&[(ONE, "00"), (ONE, "10")]).unwrap();
        let out = s.apply(&gate(Gate::Cnot, &[1, 2], 2).unwrap()).unwrap();
        assert!((out.inner(&named_state(NamedState::PhiPlus)).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_swap_squares_to_swap() {
        let m = Gate::SqrtSwap.matrix();
        assert!(max_abs(&(&m * &m - Gate::Swap.matrix())) < 1e-15);
    }

    #[test]
    fn sqrt_swap_on_three_sites() {
        let s = MultiQubitState::basis("100").unwrap();
        let out = s.apply(&gate(Gate::SqrtSwap, &[1, 2], 3).unwrap()).unwrap();
        let want = MultiQubitState::superpose(&[(c(0.5, 0.5), "100"), (c(0.5, -0.5), "010")]).unwrap();
        assert!((out.amps() - want.amps()).norm() < 1e-15);
    }

    #[test]
    fn gate_argument_errors() {
        assert!(gate(Gate::Cnot, &[1, 1], 2).is_err());
        assert!(gate(Gate::Cnot, &[1, 3], 2).is_err());
        assert!(gate(Gate::H, &[1, 2], 2).is_err());
    }

    #[test]
    fn reversed_control_cnot() {
        let u = gate(Gate::Cnot, &[2, 1], 2).unwrap();
        let out = MultiQubitState::basis("01").unwrap().apply(&u).unwrap();
        assert!((out.amps()[3] - ONE).norm() < 1e-15);
    }

    #[test]
    fn involutions() {
        for g in [Gate::Cnot, Gate::Swap, Gate::Cz] {
            let m = g.matrix();
            assert_eq!(&m * &m, linalg::eye(4));
        }
        for g in [Gate::H, Gate::T, Gate::CPhase(0.3), Gate::SqrtSwap] {
            assert!(linalg::is_unitary(&g.matrix()));
        }
    }

    #[test]
    fn partial_measurement_example() {
        let s = MultiQubitState::superpose(&[(ONE, "00"), (ONE, "01"), (ONE, "10"), (ONE, "11")]).unwrap();
        let out = measure_subsystem(&s, 1, Axis::Z).unwrap();
        assert!((out[0].probability - 0.5).abs() < 1e-15);
        let post = out[0].post_state.as_ref().unwrap();
        let want = MultiQubitState::superpose(&[(ONE, "00"), (ONE, "01")]).unwrap();
        assert!((post.amps() - want.amps()).norm() < 1e-15);
    }

    #[test]
    fn ghz_collapse() {
        let out = measure_subsystem(&named_state(NamedState::Ghz), 1, Axis::Z).unwrap();
        for (o, bits) in out.iter().zip(["000", "111"]) {
            assert!((o.probability - 0.5).abs() < 1e-15);
            let want = MultiQubitState::basis(bits).unwrap();
            assert!((o.post_state.as_ref().unwrap().amps() - want.amps()).norm() < 1e-15);
        }
    }

    #[test]
    fn product_measure_x() {
        let z = CubeState::new(Axis::Z, true).state();
        let x = CubeState::new(Axis::X, true).state();
        let out = measure_subsystem(&MultiQubitState::product(&[z, x]), 2, Axis::X).unwrap();
        assert!((out[0].probability - 1.0).abs() < 1e-15);
        assert!(out[1].post_state.is_none());
    }

    #[test]
    fn joint_probabilities() {
        let phi = named_state(NamedState::PhiPlus);
        let px = CubeState::new(Axis::X, true).state();
        let mx = CubeState::new(Axis::X, false).state();
        assert!((joint_probability(&phi, &[px, px]).unwrap() - 0.5).abs() < 1e-15);
        assert!(joint_probability(&phi, &[px, mx]).unwrap() < 1e-15);
        let z0 = CubeState::new(Axis::Z, true).state();
        let s = MultiQubitState::basis("00").unwrap();
        assert!((joint_probability(&s, &[z0, z0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn worked_partial_trace_three_ways() {
        let rho = MultiQubitDensity::new(2, worked_rho()).unwrap();
        let half = linalg::eye(2) * r(0.5);
        for keep in [1usize, 2] {
            let pt = partial_trace(&rho, &[keep]).unwrap();
            assert!(max_abs(&(pt.matrix() - &half)) <= 1e-12);
        }
        for side in [Side::A, Side::B] {
            assert!(max_abs(&(partial_trace_blocks(&worked_rho(), 2, 2, side) - &half)) <= 1e-12);
            assert!(max_abs(&(partial_trace_projection(&worked_rho(), 2, 2, side) - &half)) <= 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_density(1, &mut rng);
        let b = random_density(2, &mut rng);
        let ab = MultiQubitDensity::product(&a, &b);
        assert!(density_distance(&partial_trace(&ab, &[1]).unwrap(), &a) < 1e-14);
        assert!(density_distance(&partial_trace(&ab, &[2, 3]).unwrap(), &b) < 1e-14);
        let phi = named_state(NamedState::PhiPlus).density();
        let ra = partial_trace(&phi, &[1]).unwrap();
        assert!(max_abs(&(ra.matrix() - linalg::eye(2) * r(0.5))) < 1e-15);
        assert!((ra.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_partial_trace_methods_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let rho = random_density(2, &mut rng);
            for (keep, side) in [(1usize, Side::B), (2, Side::A)] {
                let idx = partial_trace(&rho, &[keep]).unwrap();
                let blk = partial_trace_blocks(rho.matrix(), 2, 2, side);
                let prj = partial_trace_projection(rho.matrix(), 2, 2, side);
                assert!(max_abs(&(idx.matrix() - &blk)) <= 1e-12);
                assert!(max_abs(&(idx.matrix() - &prj)) <= 1e-12);
            }
        }
    }

    #[test]
    fn schmidt_examples() {
        let sd = schmidt(&named_state(NamedState::PhiPlus), 1).unwrap();
        assert!((sd.lambdas[0] - 0.5).abs() < 1e-14 && (sd.lambdas[1] - 0.5).abs() < 1e-14);
        assert_eq!(sd.schmidt_number(), 2);
        let px = CubeState::new(Axis::X, true).state();
        let mx = CubeState::new(Axis::X, false).state();
        let sd = schmidt(&MultiQubitState::product(&[px, mx]), 1).unwrap();
        assert!((sd.lambdas[0] - 1.0).abs() < 1e-14 && sd.lambdas[1] < 1e-14);
        assert_eq!(sd.schmidt_number(), 1);
        let s = MultiQubitState::superpose(&[(r(0.7f64.sqrt()), "00"), (r(0.3f64.sqrt()), "11")]).unwrap();
        let sd = schmidt(&s, 1).unwrap();
        assert!((sd.lambdas[0] - 0.7).abs() < 1e-14 && (sd.lambdas[1] - 0.3).abs() < 1e-14);
        assert!((sd.reconstruct() - s.amps()).norm() < 1e-12);
    }

    #[test]
    fn entropies() {
        assert!((entanglement_entropy(&named_state(NamedState::PhiPlus), 1).unwrap() - 1.0).abs() < 1e-14);
        let prod = MultiQubitState::basis("01").unwrap();
        assert!(entanglement_entropy(&prod, 1).unwrap().abs() < 1e-14);
        let s = MultiQubitState::superpose(&[(r(0.7f64.sqrt()), "00"), (r(0.3f64.sqrt()), "11")]).unwrap();
        let h = -(0.7f64 * 0.7f64.log2() + 0.3 * 0.3f64.log2());
        assert!((entanglement_entropy(&s, 1).unwrap() - h).abs() < 1e-13);
        assert!((h - 0.8813).abs() < 1e-4);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&named_state(NamedState::PhiPlus).density()).unwrap() - 1.0).abs() < 1e-10);
        let px = CubeState::new(Axis::X, true).state();
        let y = QubitState::from_bloch(0.4, 1.0);
        let prod = MultiQubitState::product(&[px, y]).density();
        assert!(concurrence(&prod).unwrap() < 1e-7);
    }

    #[test]
    fn concurrence_pure_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let s = random_state(2, &mut rng);
            let a = s.amps();
            let want = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
            assert!((concurrence(&s.density()).unwrap() - want).abs() < 1e-7);
        }
    }

    #[test]
    fn werner_concurrence_grid() {
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            for bell in [NamedState::PsiMinus, NamedState::PhiPlus] {
                let got = concurrence(&werner(p, bell).unwrap()).unwrap();
                assert!((got - want).abs() < 1e-7, "p={p} got={got}");
            }
        }
        assert!(concurrence(&werner(1.0 / 3.0, NamedState::PsiMinus).unwrap()).unwrap() < 1e-7);
    }

    #[test]
    fn ppt_examples() {
        let bell = named_state(NamedState::PhiPlus).density();
        assert!((ppt_min_eigenvalue(&bell).unwrap() + 0.5).abs() < 1e-12);
        let prod = MultiQubitState::basis("10").unwrap().density();
        assert!(ppt_min_eigenvalue(&prod).unwrap() >= -1e-12);
        let w = werner(0.2, NamedState::PsiMinus).unwrap();
        assert!(ppt_min_eigenvalue(&w).unwrap() >= 0.0);
        assert!((ppt_min_eigenvalue(&w).unwrap() - (1.0 - 3.0 * 0.2) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn named_states() {
        let pm = named_state(NamedState::PsiMinus);
        let s = FRAC_1_SQRT_2;
        assert!((pm.amps() - linalg::rvec(&[0.0, s, -s, 0.0])).norm() < 1e-15);
        assert!(named_state(NamedState::PhiPlus).inner(&named_state(NamedState::PsiPlus)).norm() < 1e-15);
        let w = named_state(NamedState::W);
        let t = 1.0 / 3f64.sqrt();
        for bits in ["100", "010", "001"] {
            let j = usize::from_str_radix(bits, 2).unwrap();
            assert!((w.amps()[j] - r(t)).norm() < 1e-15);
        }
        let names = [NamedState::PhiPlus, NamedState::PhiMinus, NamedState::PsiPlus, NamedState::PsiMinus];
        for a in names {
            for b in names {
                let o = named_state(a).inner(&named_state(b)).norm();
                assert!((o - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ghz_vs_w_reduced_entanglement() {
        let ghz = named_state(NamedState::Ghz).density();
        let w = named_state(NamedState::W).density();
        for keep in [[1usize, 2], [1, 3], [2, 3]] {
            assert!(concurrence(&partial_trace(&ghz, &keep).unwrap()).unwrap() < 1e-7);
            assert!(concurrence(&partial_trace(&w, &keep).unwrap()).unwrap() > 0.5);
        }
    }

    #[test]
    fn sequential_measurement_order() {
        // |+y⟩: Z then X and X then Z give the same uniform joint table
        let y = MultiQubitState::product(&[CubeState::new(Axis::Y, true).state()]);
        let joint = |first: Axis, second: Axis| -> Vec<f64> {
            let mut out = Vec::new();
            for o1 in measure_subsystem(&y, 1, first).unwrap() {
                let post = o1.post_state.unwrap();
                for o2 in measure_subsystem(&post, 1, second).unwrap() {
                    out.push(o1.probability * o2.probability);
                }
            }
            out
        };
        let zx = joint(Axis::Z, Axis::X);
        let xz = joint(Axis::X, Axis::Z);
        for (a, b) in zx.iter().zip(&xz) {
            assert!((a - b).abs() < 1e-15 && (a - 0.25).abs() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn entropy_symmetric(seed in 0u64..100_000, n in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_state(n, &mut rng);
            for cut in 1..n {
                let sa = entanglement_entropy(&s, cut).unwrap();
                let rho = s.density();
                let ra = partial_trace(&rho, &(1..=cut).collect::<Vec<_>>()).unwrap();
                let rb = partial_trace(&rho, &((cut + 1)..=n).collect::<Vec<_>>()).unwrap();
                prop_assert!((von_neumann_entropy(&ra).unwrap() - sa).abs() <= 1e-9);
                prop_assert!((von_neumann_entropy(&rb).unwrap() - sa).abs() <= 1e-9);
            }
        }
    }
}

//! Bell correlations: quantum predictions for entangled pairs, CHSH and Mermin combinations,
//! GHZ parities, teleportation corrections and local hidden-variable simulations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::composite::{embed, named_state, MultiQubitDensity, MultiQubitState, NamedState};
use crate::linalg::{self, kron, r, sigma_dot, trace, CMatrix};
use crate::qubit::{Axis, CubeState, QubitState};
use crate::{QmError, Result};

/// Monte Carlo work is split into this many independent streams regardless of thread count.
pub const MC_CHUNKS: usize = 64;

/// A unit measurement direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAxis {
    v: [f64; 3],
}

impl MeasurementAxis {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(QmError::InvalidArgument(format!("axis norm {n} is not 1")));
        }
        Ok(MeasurementAxis { v })
    }

    /// Normalizes any nonzero vector.
    pub fn along(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 {
            return Err(QmError::InvalidArgument("zero axis".into()));
        }
        Ok(MeasurementAxis { v: [v[0] / n, v[1] / n, v[2] / n] })
    }

    /// Direction at angle θ from ẑ toward x̂.
    pub fn xz(theta: f64) -> Self {
        MeasurementAxis { v: [theta.sin(), 0.0, theta.cos()] }
    }

    pub fn face(axis: Axis) -> Self {
        MeasurementAxis { v: axis.unit() }
    }

    /// (ẑ + x̂)/√2
    pub fn edge_plus() -> Self {
        Self::xz(std::f64::consts::FRAC_PI_4)
    }

    /// (x̂ − ẑ)/√2
    pub fn edge_minus() -> Self {
        Self::xz(3.0 * std::f64::consts::FRAC_PI_4)
    }

    pub fn vec(&self) -> [f64; 3] {
        self.v
    }

    pub fn dot(&self, w: &[f64; 3]) -> f64 {
        self.v[0] * w[0] + self.v[1] * w[1] + self.v[2] * w[2]
    }

    /// n̂·σ
    pub fn observable(&self) -> CMatrix {
        sigma_dot(self.v)
    }

    pub fn angle_to(&self, other: &MeasurementAxis) -> f64 {
        self.dot(&other.v).clamp(-1.0, 1.0).acos()
    }
}

/// ⟨(a·σ) ⊗ (b·σ)⟩ on a two-qubit density.
pub fn quantum_correlation(rho: &MultiQubitDensity, a: &MeasurementAxis, b: &MeasurementAxis) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(QmError::Dimension("correlation needs two qubits".into()));
    }
    Ok(trace(&(rho.matrix() * kron(&a.observable(), &b.observable()))).re)
}

/// S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′).
pub fn chsh(
    rho: &MultiQubitDensity,
    a: &MeasurementAxis,
    a2: &MeasurementAxis,
    b: &MeasurementAxis,
    b2: &MeasurementAxis,
) -> Result<f64> {
    Ok(quantum_correlation(rho, a, b)? - quantum_correlation(rho, a, b2)?
        + quantum_correlation(rho, a2, b)?
        + quantum_correlation(rho, a2, b2)?)
}

/// Face/edge settings a = ẑ, a′ = x̂, b = (ẑ+x̂)/√2, b′ = (x̂−ẑ)/√2.
pub fn face_edge_axes() -> [MeasurementAxis; 4] {
    [
        MeasurementAxis::face(Axis::Z),
        MeasurementAxis::face(Axis::X),
        MeasurementAxis::edge_plus(),
        MeasurementAxis::edge_minus(),
    ]
}

/// Local hidden-variable bound check: S(λ) for all 16 deterministic outcome assignments
/// (A(a), A(a′), B(b), B(b′)).
pub fn chsh_lhv_table() -> Vec<([i8; 4], i8)> {
    let mut rows = Vec::with_capacity(16);
    for bits in 0..16u8 {
        let v: [i8; 4] = std::array::from_fn(|k| if (bits >> (3 - k)) & 1 == 0 { 1 } else { -1 });
        let s = v[0] * v[2] - v[0] * v[3] + v[1] * v[2] + v[1] * v[3];
        rows.push((v, s));
    }
    rows
}

/// How sign(0) is resolved when a measurement axis is orthogonal to the hidden vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    Plus,
    Minus,
    FairCoin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LhvKind {
    /// Hidden triple (ε_x, ε_y, ε_z), uniform over the eight sign choices.
    FaceCube,
    /// Hidden unit vector uniform on the sphere.
    SphereSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LhvModel {
    pub kind: LhvKind,
    pub tie: TieBreak,
    pub seed: u64,
}

impl LhvModel {
    pub fn sphere(seed: u64) -> Self {
        LhvModel { kind: LhvKind::SphereSign, tie: TieBreak::Plus, seed }
    }

    fn sample_lambda(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        match self.kind {
            LhvKind::FaceCube => std::array::from_fn(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }),
            LhvKind::SphereSign => loop {
                let g: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
                if n > 1e-300 {
                    break [g[0] / n, g[1] / n, g[2] / n];
                }
            },
        }
    }
}

/// sign(n·λ) with the tie rule; Alice's outcome depends only on her own axis.
fn outcome(axis: &MeasurementAxis, lambda: &[f64; 3], tie: TieBreak, rng: &mut ChaCha8Rng) -> i8 {
    let d = axis.dot(lambda);
    if d > 1e-12 {
        1
    } else if d < -1e-12 {
        -1
    } else {
        match tie {
            TieBreak::Plus => 1,
            TieBreak::Minus => -1,
            TieBreak::FairCoin => {
                if rng.random::<bool>() {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn chunk_sizes(n: usize) -> Vec<usize> {
    let base = n / MC_CHUNKS;
    let extra = n % MC_CHUNKS;
    (0..MC_CHUNKS).map(|k| base + usize::from(k < extra)).collect()
}

/// Monte Carlo mean of A(a)·B(b) with B = −sign(b·λ), as (estimate, standard error).
pub fn lhv_correlation(model: &LhvModel, a: &MeasurementAxis, b: &MeasurementAxis, n_samples: usize) -> Result<(f64, f64)> {
    if n_samples == 0 {
        return Err(QmError::InvalidArgument("n_samples must be at least 1".into()));
    }
    let sizes = chunk_sizes(n_samples);
    let sums: Vec<i64> = sizes
        .par_iter()
        .enumerate()
        .map(|(k, &len)| {
            let mut rng = chunk_rng(model.seed, k);
            let mut s = 0i64;
            for _ in 0..len {
                let lam = model.sample_lambda(&mut rng);
                let x = outcome(a, &lam, model.tie, &mut rng);
                let y = -outcome(b, &lam, model.tie, &mut rng);
                s += i64::from(x * y);
            }
            s
        })
        .collect();
    let total: i64 = sums.iter().sum();
    let n = n_samples as f64;
    let mean = total as f64 / n;
    let stderr = if n_samples > 1 { ((1.0 - mean * mean).max(0.0) * n / (n - 1.0)).sqrt() / n.sqrt() } else { 0.0 };
    Ok((mean, stderr))
}

/// The sphere-sign model's exact line −1 + 2θ/π.
pub fn lhv_line(theta: f64) -> f64 {
    -1.0 + 2.0 * theta / std::f64::consts::PI
}

/// P(+1 | axis) for a cube-state preparation in the face model, by exact enumeration.
///
/// The prepared face fixes its own component of λ; the other two are uniform ±1.
pub fn face_model_prob(prepared: CubeState, axis: &MeasurementAxis, tie: TieBreak) -> f64 {
    let fixed = match prepared.axis {
        Axis::X => 0,
        Axis::Y => 1,
        Axis::Z => 2,
    };
    let mut p = 0.0;
    for bits in 0..4u8 {
        let mut lam = [0.0; 3];
        let mut k = 0;
        for (i, l) in lam.iter_mut().enumerate() {
            if i == fixed {
                *l = if prepared.plus { 1.0 } else { -1.0 };
            } else {
                *l = if (bits >> k) & 1 == 0 { 1.0 } else { -1.0 };
                k += 1;
            }
        }
        let d = axis.dot(&lam);
        let plus = if d > 1e-12 {
            1.0
        } else if d < -1e-12 {
            0.0
        } else {
            match tie {
                TieBreak::Plus => 1.0,
                TieBreak::Minus => 0.0,
                TieBreak::FairCoin => 0.5,
            }
        };
        p += 0.25 * plus;
    }
    p
}

/// Quantum P(+1 | axis) for a cube state, cos²(θ/2).
pub fn quantum_prob(prepared: CubeState, axis: &MeasurementAxis) -> f64 {
    let s = prepared.state().vector();
    let proj = (linalg::eye(2) + axis.observable()) * r(0.5);
    linalg::expect(&s, &proj).re
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Xyy,
    Yxy,
    Yyx,
    Xxx,
}

impl Parity {
    pub const ALL: [Parity; 4] = [Parity::Xyy, Parity::Yxy, Parity::Yyx, Parity::Xxx];

    pub fn axes(self) -> [Axis; 3] {
        match self {
            Parity::Xyy => [Axis::X, Axis::Y, Axis::Y],
            Parity::Yxy => [Axis::Y, Axis::X, Axis::Y],
            Parity::Yyx => [Axis::Y, Axis::Y, Axis::X],
            Parity::Xxx => [Axis::X, Axis::X, Axis::X],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Xyy => "XYY",
            Parity::Yxy => "YXY",
            Parity::Yyx => "YYX",
            Parity::Xxx => "XXX",
        }
    }
}

fn three_qubit_op(axes: [Axis; 3]) -> CMatrix {
    linalg::kron_all(&[axes[0].pauli(), axes[1].pauli(), axes[2].pauli()])
}

/// Eigenvalue of the parity operator on (|000⟩ − |111⟩)/√2 and the eigenvector residual.
pub fn ghz_parity(which: Parity) -> Result<(i8, f64)> {
    let ghz = named_state(NamedState::GhzMinus);
    let out = three_qubit_op(which.axes()) * ghz.amps();
    let ev = linalg::inner(ghz.amps(), &out).re;
    let sign: i8 = if ev >= 0.0 { 1 } else { -1 };
    let residual = (out - ghz.amps() * r(sign as f64)).norm();
    if residual > 1e-10 {
        return Err(QmError::InvalidArgument(format!("{} is not a GHZ eigen-operator", which.label())));
    }
    Ok((sign, residual))
}

/// Mermin M = E(aaa) − E(abb) − E(bab) − E(bba) on a three-qubit state.
pub fn mermin(state: &MultiQubitState, a: Axis, b: Axis) -> Result<f64> {
    if state.n_qubits() != 3 {
        return Err(QmError::Dimension("Mermin needs three qubits".into()));
    }
    let e = |ax: [Axis; 3]| linalg::expect(state.amps(), &three_qubit_op(ax)).re;
    Ok(e([a, a, a]) - e([a, b, b]) - e([b, a, b]) - e([b, b, a]))
}

/// Pauli correction Bob applies after Alice reports a Bell outcome.
pub fn teleport_correction(outcome: NamedState) -> Result<CMatrix> {
    Ok(match outcome {
        NamedState::PhiPlus => linalg::eye(2),
        NamedState::PhiMinus => linalg::sigma_z(),
        NamedState::PsiPlus => linalg::sigma_x(),
        NamedState::PsiMinus => linalg::sigma_z() * linalg::sigma_x(),
        _ => return Err(QmError::InvalidArgument("outcome must be a two-qubit Bell state".into())),
    })
}

/// Full three-qubit teleportation of ψ through Φ⁺ on qubits 2,3, conditioned on Alice's
/// Bell outcome on qubits 1,2. Returns (outcome probability, Bob's corrected state).
pub fn teleport(psi: &QubitState, outcome: NamedState) -> Result<(f64, QubitState)> {
    let bell = named_state(outcome);
    if bell.n_qubits() != 2 {
        return Err(QmError::InvalidArgument("outcome must be a two-qubit Bell state".into()));
    }
    let input = linalg::kron_vec(&psi.vector(), named_state(NamedState::PhiPlus).amps());
    // ⟨β|₁₂ ⊗ I₃ applied to the three-qubit state
    let bra = CMatrix::from_fn(1, 4, |_, j| bell.amps()[j].conj());
    let bob = kron(&bra, &linalg::eye(2)) * input;
    let p = bob.norm_squared();
    if p < 1e-15 {
        return Err(QmError::InvalidArgument("outcome has zero probability".into()));
    }
    let corrected = teleport_correction(outcome)? * (bob / r(p.sqrt()));
    Ok((p, QubitState::from_vector(&corrected)?))
}

/// The four dense-coding states (I, X, Z, XZ) ⊗ I |Φ⁺⟩.
pub fn dense_coding_states() -> Result<Vec<MultiQubitState>> {
    let phi = named_state(NamedState::PhiPlus);
    [linalg::eye(2), linalg::sigma_x(), linalg::sigma_z(), linalg::sigma_x() * linalg::sigma_z()]
        .iter()
        .map(|u| phi.apply(&embed(u, &[1], 2)?))
        .collect()
}

//! One function per subcommand; each builds a [`Table`] from a single library module.

use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use qm_core::angular;
use qm_core::bell::{self, LhvModel, MeasurementAxis, Parity, TieBreak};
use qm_core::composite::{self, named_state, MultiQubitDensity, MultiQubitState, NamedState, Side};
use qm_core::dirac::{self, SpacetimeDim};
use qm_core::dynamics::{self, Band, ParameterPath};
use qm_core::hydrogen::{self, SuddenKind};
use qm_core::lattice::{self, Boundary, OccupationBasis, Statistics};
use qm_core::linalg::{self, c, CMatrix};
use qm_core::oscillator::{self, FockSpace};
use qm_core::pt::{self, PerturbationProblem};
use qm_core::qubit::{self, Axis, CubeState, QubitState};
use qm_core::rg::{self, SliceKind};
use qm_core::QmError;

use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unwritable output; exit code 2.
    Usage(String),
    /// A computation failed; exit code 1.
    Numeric(String),
}

impl From<QmError> for CliError {
    fn from(e: QmError) -> Self {
        match e {
            QmError::InvalidArgument(_) | QmError::Dimension(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type Out = Result<Table, CliError>;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn need_points(n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(CliError::Usage("--points must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[derive(Args, Debug)]
pub struct BlochArgs {
    /// Azimuth φ of the sweep.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Number of polar angles in [0, π].
    #[arg(long, default_value_t = 13)]
    pub points: usize,
}

pub fn bloch(a: &BlochArgs) -> Out {
    need_points(a.points)?;
    let up = CubeState::new(Axis::Z, true).state();
    let mut t = Table::new(&["theta", "phi", "alpha_re", "alpha_im", "beta_re", "beta_im", "x", "y", "z", "p_up"]);
    for th in linspace(0.0, PI, a.points) {
        let s = QubitState::from_bloch(th, a.phi);
        let b = s.bloch_vector();
        t.push(vec![th.into(), a.phi.into(), s.alpha.re.into(), s.alpha.im.into(), s.beta.re.into(), s.beta.im.into(), b[0].into(), b[1].into(), b[2].into(), qubit::born(&s, &up).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct BasisTablesArgs {}

pub fn basis_tables(_: &BasisTablesArgs) -> Out {
    let mut t = Table::new(&["bra", "ket", "re", "im", "abs"]);
    for a in CubeState::all() {
        for b in CubeState::all() {
            let v = qubit::inner(&a.state(), &b.state());
            t.push(vec![a.label().into(), b.label().into(), v.re.into(), v.im.into(), v.norm().into()]);
        }
    }
    Ok(t)
}

const NAMED: [(NamedState, &str); 7] = [
    (NamedState::PhiPlus, "phi+"),
    (NamedState::PhiMinus, "phi-"),
    (NamedState::PsiPlus, "psi+"),
    (NamedState::PsiMinus, "psi-"),
    (NamedState::Ghz, "ghz"),
    (NamedState::GhzMinus, "ghz-"),
    (NamedState::W, "w"),
];

#[derive(Args, Debug)]
pub struct BellStatesArgs {}

pub fn bell_states(_: &BellStatesArgs) -> Out {
    let mut t = Table::new(&["state", "basis", "re", "im", "entropy_cut1"]);
    for (which, name) in NAMED {
        let s = named_state(which);
        let ent = composite::entanglement_entropy(&s, 1)?;
        for (j, amp) in s.amps().iter().enumerate() {
            t.push(vec![name.into(), MultiQubitState::label(s.n_qubits(), j).into(), amp.re.into(), amp.im.into(), ent.into()]);
        }
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PtState {
    /// The worked two-qubit density matrix.
    Worked,
    PhiPlus,
    PsiMinus,
    Ghz,
    W,
}

#[derive(Args, Debug)]
pub struct PartialTraceArgs {
    #[arg(long, value_enum, default_value_t = PtState::Worked)]
    pub state: PtState,
}

pub fn partial_trace(a: &PartialTraceArgs) -> Out {
    let rho = match a.state {
        PtState::Worked => MultiQubitDensity::new(2, qm_core::verify::worked_rho())?,
        PtState::PhiPlus => named_state(NamedState::PhiPlus).density(),
        PtState::PsiMinus => named_state(NamedState::PsiMinus).density(),
        PtState::Ghz => named_state(NamedState::Ghz).density(),
        PtState::W => named_state(NamedState::W).density(),
    };
    let n = rho.n_qubits();
    let mut t = Table::new(&["method", "keep", "i", "j", "re", "im"]);
    let emit = |t: &mut Table, method: &str, keep: usize, m: &CMatrix| {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                t.push(vec![method.into(), keep.into(), i.into(), j.into(), m[(i, j)].re.into(), m[(i, j)].im.into()]);
            }
        }
    };
    for keep in 1..=n {
        let m = composite::partial_trace(&rho, &[keep])?;
        emit(&mut t, "index", keep, m.matrix());
        if n == 2 {
            let side = if keep == 1 { Side::B } else { Side::A };
            emit(&mut t, "block", keep, &composite::partial_trace_blocks(rho.matrix(), 2, 2, side));
            emit(&mut t, "projection", keep, &composite::partial_trace_projection(rho.matrix(), 2, 2, side));
        }
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct DispersionArgs {
    /// Ring length.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Hopping amplitude Δ.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
}

pub fn dispersion(a: &DispersionArgs) -> Out {
    let basis = OccupationBasis::sector(a.n, 1)?;
    let h = lattice::hopping_hamiltonian(a.delta, Boundary::Periodic, Statistics::Fermion, &basis)?;
    let numeric = linalg::eigvalsh(&h)?;
    let mut closed: Vec<(f64, usize)> = lattice::ring_dispersion(a.n, a.delta).into_iter().enumerate().map(|(al, e)| (e, al)).collect();
    closed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut t = Table::new(&["rank", "alpha", "k", "e_closed", "e_numeric"]);
    for (rank, ((e, al), en)) in closed.iter().zip(&numeric).enumerate() {
        t.push(vec![rank.into(), (*al).into(), (2.0 * PI * *al as f64 / a.n as f64).into(), (*e).into(), (*en).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct RingPropagatorArgs {
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 51)]
    pub points: usize,
    /// Final site (1..=3).
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    /// Initial site (1..=3).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

pub fn ring_propagator(a: &RingPropagatorArgs) -> Out {
    need_points(a.points)?;
    if !(1..=3).contains(&a.j) || !(1..=3).contains(&a.k) {
        return Err(CliError::Usage("sites must be 1, 2 or 3".into()));
    }
    let basis = OccupationBasis::sector(3, 1)?;
    let h = lattice::hopping_hamiltonian(a.delta, Boundary::Periodic, Statistics::HardcoreBoson, &basis)?;
    let mut t = Table::new(&["t", "re", "im", "prob", "closed_re", "closed_im"]);
    for time in linspace(0.0, a.t_max, a.points) {
        let u = dynamics::propagator(&h, time)?;
        // basis index i holds site 3 − i
        let v = u[(3 - a.j, 3 - a.k)];
        let w = dynamics::ring3_propagator_element(a.delta, time, a.j, a.k);
        t.push(vec![time.into(), v.re.into(), v.im.into(), v.norm_sqr().into(), w.re.into(), w.im.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct RabiArgs {
    /// Rabi frequency Ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Detuning Δω.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub detuning: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

pub fn rabi(a: &RabiArgs) -> Out {
    need_points(a.points)?;
    let mut t = Table::new(&["t", "p_formula", "p_evolved", "p_perturbative"]);
    for time in linspace(0.0, a.t_max, a.points) {
        let pert = if a.detuning != 0.0 { dynamics::rabi_perturbative(a.omega, a.detuning, time) } else { (a.omega * time / 2.0).powi(2) };
        t.push(vec![time.into(), dynamics::rabi_excited_prob(a.omega, a.detuning, time).into(), dynamics::rabi_evolved(a.omega, a.detuning, time)?.into(), pert.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct BerryArgs {
    /// Number of cone angles in (0, π].
    #[arg(long, default_value_t = 12)]
    pub alphas: usize,
    /// Points on each loop.
    #[arg(long, default_value_t = 10_000)]
    pub path_points: usize,
}

pub fn berry(a: &BerryArgs) -> Out {
    need_points(a.alphas)?;
    let mut t = Table::new(&["alpha", "phase_ground", "phase_excited", "expected_ground"]);
    for i in 1..=a.alphas {
        let al = PI * i as f64 / a.alphas as f64;
        let path = ParameterPath::latitude(al, a.path_points);
        let g = dynamics::berry_phase(&path, Band::Ground)?;
        let e = dynamics::berry_phase(&path, Band::Excited)?;
        t.push(vec![al.into(), g.into(), e.into(), dynamics::wrap_angle(-PI * (1.0 - al.cos())).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct CoherentArgs {
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
}

pub fn coherent(a: &CoherentArgs) -> Out {
    let space = FockSpace::new(a.n_max, 1.0)?;
    let alpha = c(a.alpha_re, a.alpha_im);
    let st = oscillator::coherent(&space, alpha);
    let nbar = alpha.norm_sqr();
    let mut t = Table::new(&["n", "p_n", "poisson"]);
    t.comment(format!("leakage={:?}", st.leakage()));
    if let Some(w) = st.truncation_warning() {
        t.comment(format!("warning: {w}"));
    }
    let mut log_fact = 0.0;
    for (k, p) in st.photon_distribution().into_iter().enumerate() {
        if k > 0 {
            log_fact += (k as f64).ln();
        }
        let poisson = if nbar == 0.0 { if k == 0 { 1.0 } else { 0.0 } } else { (-nbar + k as f64 * nbar.ln() - log_fact).exp() };
        t.push(vec![k.into(), p.into(), poisson.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct SqueezeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    #[arg(long, default_value_t = 80)]
    pub n_max: usize,
}

pub fn squeeze(a: &SqueezeArgs) -> Out {
    need_points(a.points)?;
    let space = FockSpace::new(a.n_max, 1.0)?;
    let ops = space.ladder_ops();
    let mut t = Table::new(&["r", "var_x", "var_p", "var_x_expected", "var_p_expected", "dx_dp"]);
    for r in linspace(0.0, a.r_max, a.points) {
        let psi = oscillator::squeeze(&space, r)?.column(0).into_owned();
        let (vx, vp) = (oscillator::variance(&psi, &ops.x), oscillator::variance(&psi, &ops.p));
        t.push(vec![r.into(), vx.into(), vp.into(), (0.5 * (-2.0 * r).exp()).into(), (0.5 * (2.0 * r).exp()).into(), (vx * vp).sqrt().into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct CgTableArgs {
    #[arg(long, default_value_t = 1.0)]
    pub j1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub j2: f64,
}

pub fn cg_table(a: &CgTableArgs) -> Out {
    let table = angular::clebsch_gordan(a.j1, a.j2)?;
    let mut entries: Vec<((i32, i32, i32, i32), f64)> = table.entries().map(|(k, v)| (*k, *v)).collect();
    entries.sort_by(|x, y| (y.0 .0, y.0 .1, y.0 .2).cmp(&(x.0 .0, x.0 .1, x.0 .2)));
    let mut t = Table::new(&["j", "m", "m1", "m2", "coeff"]);
    for ((tj, tm, tm1, tm2), v) in entries {
        let h = |x: i32| x as f64 / 2.0;
        t.push(vec![h(tj).into(), h(tm).into(), h(tm1).into(), h(tm2).into(), v.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct WignerDArgs {
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub beta: f64,
}

pub fn wigner_d(a: &WignerDArgs) -> Out {
    let d = angular::wigner_d(a.j, a.beta)?;
    let two_j = angular::twice(a.j)?;
    let m = |i: usize| (two_j - 2 * i as i32) as f64 / 2.0;
    let mut t = Table::new(&["m_prime", "m", "value"]);
    for i in 0..d.nrows() {
        for k in 0..d.ncols() {
            t.push(vec![m(i).into(), m(k).into(), d[(i, k)].into()]);
        }
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct HydrogenArgs {
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    /// Nuclear charge.
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
}

pub fn hydrogen(a: &HydrogenArgs) -> Out {
    if a.n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let mut t = Table::new(&["n", "l", "energy", "r_mean", "r_mean_closed", "r_most_probable", "v_over_e"]);
    for n in 1..=a.n_max {
        for l in 0..n {
            let lv = hydrogen::HydrogenLevel::new(n, l, a.z)?;
            let (_, v) = hydrogen::kinetic_potential(n, l, a.z)?;
            let closed = hydrogen::expectation_closed_form(n, l, a.z, 1).ok_or_else(|| CliError::Numeric("no closed form".into()))?;
            t.push(vec![
                n.into(),
                l.into(),
                lv.energy().into(),
                hydrogen::hydrogen_expectation(n, l, a.z, 1)?.into(),
                closed.into(),
                hydrogen::most_probable_radius(n, l, a.z)?.into(),
                (v / lv.energy()).into(),
            ]);
        }
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct StarkArgs {
    /// Largest field strength (atomic units).
    #[arg(long, default_value_t = 1e-3)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 11)]
    pub points: usize,
}

pub fn stark(a: &StarkArgs) -> Out {
    need_points(a.points)?;
    let states = [(2, 0, 0), (2, 1, 0), (2, 1, 1), (2, 1, -1)];
    let mut dz = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            dz[(i, j)] = linalg::r(hydrogen::dipole_z(states[i], states[j], 1.0)?);
        }
    }
    let mut t = Table::new(&["eps", "shift_1", "shift_2", "shift_3", "shift_4", "closed_low", "closed_high"]);
    t.comment(format!("<2s|z|2p0>={:?}", hydrogen::dipole_z(states[0], states[1], 1.0)?));
    for eps in linspace(0.0, a.eps_max, a.points) {
        let p = PerturbationProblem::from_diagonal(&[-0.125; 4], &(&dz * linalg::r(eps)))?;
        let (vals, _) = pt::pt_degenerate(&p, &[0, 1, 2, 3])?;
        t.push(vec![eps.into(), vals[0].into(), vals[1].into(), vals[2].into(), vals[3].into(), (-3.0 * eps).into(), (3.0 * eps).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct VariationalArgs {
    #[arg(long, default_value_t = 1.0)]
    pub z_min: f64,
    #[arg(long, default_value_t = 2.5)]
    pub z_max: f64,
    #[arg(long, default_value_t = 31)]
    pub points: usize,
}

pub fn variational(a: &VariationalArgs) -> Out {
    need_points(a.points)?;
    let (zs, es) = pt::variational_minimize(pt::helium_energy, a.z_min, a.z_max)?;
    let mut t = Table::new(&["z", "energy_ha", "energy_ev"]);
    t.comment(format!("minimum Z*={zs:?} E*={es:?} Ha = {:?} eV", es * hydrogen::HARTREE_EV));
    for z in linspace(a.z_min, a.z_max, a.points) {
        let e = pt::helium_energy(z);
        t.push(vec![z.into(), e.into(), (e * hydrogen::HARTREE_EV).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct SuddenArgs {
    #[arg(long, default_value_t = 1.0)]
    pub w1: f64,
    #[arg(long, default_value_t = 4.0)]
    pub w2_max: f64,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
}

pub fn sudden(a: &SuddenArgs) -> Out {
    need_points(a.points)?;
    let mut t = Table::new(&["w2", "p_closed", "p_quadrature", "squared_form"]);
    t.comment(format!("hydrogenic Z 1->2 P(1s)={:?}", hydrogen::sudden_overlap(SuddenKind::HydrogenicZ { z1: 1.0, z2: 2.0 })?));
    for w2 in linspace(a.w1, a.w2_max, a.points) {
        let k = SuddenKind::HoFrequency { w1: a.w1, w2 };
        t.push(vec![w2.into(), hydrogen::sudden_overlap(k)?.into(), hydrogen::sudden_overlap_quadrature(k)?.into(), hydrogen::ho_sudden_squared_form(a.w1, w2).into()]);
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Potential {
    Harmonic,
    Abs,
    Quartic,
}

#[derive(Args, Debug)]
pub struct WkbArgs {
    #[arg(long, value_enum, default_value_t = Potential::Harmonic)]
    pub potential: Potential,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
}

pub fn wkb(a: &WkbArgs) -> Out {
    let v: fn(f64) -> f64 = match a.potential {
        Potential::Harmonic => |x| 0.5 * x * x,
        Potential::Abs => |x: f64| x.abs(),
        Potential::Quartic => |x: f64| x.powi(4),
    };
    let w = pt::wkb_levels(v, 1.0, a.count)?;
    let fd = pt::finite_difference_levels(v, 1.0, 12.0, 4000, a.count);
    let mut t = Table::new(&["n", "e_wkb", "e_finite_difference"]);
    for (n, (ew, ef)) in w.iter().zip(&fd).enumerate() {
        t.push(vec![n.into(), (*ew).into(), (*ef).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct ChshArgs {
    /// Number of angles in [0, π].
    #[arg(long, default_value_t = 16)]
    pub theta_grid: usize,
    /// Monte Carlo samples per angle.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
}

pub fn chsh(a: &ChshArgs, seed: u64) -> Out {
    need_points(a.theta_grid)?;
    let singlet = named_state(NamedState::PsiMinus).density();
    let [a1, a2, b1, b2] = bell::face_edge_axes();
    let mut t = Table::new(&["theta", "E_quantum", "E_lhv", "stderr"]);
    t.comment(format!("S_face_edge={:?}", bell::chsh(&singlet, &a1, &a2, &b1, &b2)?));
    let model = LhvModel::sphere(seed);
    let z = MeasurementAxis::face(Axis::Z);
    for th in linspace(0.0, PI, a.theta_grid) {
        let b = MeasurementAxis::xz(th);
        let (e, se) = bell::lhv_correlation(&model, &z, &b, a.samples)?;
        t.push(vec![th.into(), bell::quantum_correlation(&singlet, &z, &b)?.into(), e.into(), se.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct GhzArgs {}

pub fn ghz(_: &GhzArgs) -> Out {
    let mut t = Table::new(&["parity", "value", "residual"]);
    let ghz = named_state(NamedState::GhzMinus);
    t.comment(format!("mermin_xy={:?} mermin_zx={:?}", bell::mermin(&ghz, Axis::X, Axis::Y)?, bell::mermin(&ghz, Axis::Z, Axis::X)?));
    for p in Parity::ALL {
        let (v, res) = bell::ghz_parity(p)?;
        t.push(vec![p.label().into(), (v as i64).into(), res.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct LhvCurveArgs {
    /// Number of measurement angles in [0, π] from the prepared +z face.
    #[arg(long, default_value_t = 33)]
    pub points: usize,
}

pub fn lhv_curve(a: &LhvCurveArgs) -> Out {
    need_points(a.points)?;
    let prep = CubeState::new(Axis::Z, true);
    let mut t = Table::new(&["theta", "face_tie_plus", "face_tie_minus", "face_tie_coin", "quantum"]);
    for th in linspace(0.0, PI, a.points) {
        let ax = MeasurementAxis::xz(th);
        t.push(vec![
            th.into(),
            bell::face_model_prob(prep, &ax, TieBreak::Plus).into(),
            bell::face_model_prob(prep, &ax, TieBreak::Minus).into(),
            bell::face_model_prob(prep, &ax, TieBreak::FairCoin).into(),
            bell::quantum_prob(prep, &ax).into(),
        ]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct DiracDispersionArgs {
    #[arg(long, default_value_t = 0.5)]
    pub m: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Also diagonalize a periodic chain of this many sites and report the deviation.
    #[arg(long, default_value_t = 0)]
    pub chain: usize,
}

pub fn dirac_dispersion(a: &DiracDispersionArgs) -> Out {
    need_points(a.points)?;
    let mut t = Table::new(&["k", "e_plus", "e_minus"]);
    if a.chain > 0 {
        let ch = dirac::DiracChain::uniform(a.chain, a.m, Boundary::Periodic)?;
        let dev = ch.spectrum()?.iter().zip(dirac::periodic_spectrum(a.chain, a.m)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        t.comment(format!("chain N={} max |E_numeric - E_closed|={dev:?}", a.chain));
    }
    for k in linspace(-PI, PI, a.points) {
        let e = dirac::dispersion(k, a.m);
        t.push(vec![k.into(), e.into(), (-e).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct CliffordArgs {}

pub fn clifford(_: &CliffordArgs) -> Out {
    let mut t = Table::new(&["dim", "mu", "nu", "anticommutator", "residual"]);
    for (dim, label) in [(SpacetimeDim::OnePlusOne, "1+1"), (SpacetimeDim::ThreePlusOne, "3+1")] {
        let set = dirac::gamma_set(dim);
        let n = set.size();
        for (mu, g) in set.gammas.iter().enumerate() {
            for (nu, h) in set.gammas.iter().enumerate() {
                let ac = linalg::anticommutator(g, h);
                let want = linalg::eye(n) * linalg::r(2.0 * set.metric(mu, nu));
                t.push(vec![label.into(), mu.into(), nu.into(), (2.0 * set.metric(mu, nu)).into(), linalg::max_abs(&(ac - want)).into()]);
            }
        }
    }
    let four = dirac::gamma_set(SpacetimeDim::ThreePlusOne);
    let g5 = dirac::gamma5(&four)?;
    let sq = linalg::max_abs(&(&g5 * &g5 - linalg::eye(4)));
    let anti = four.gammas.iter().map(|g| linalg::max_abs(&linalg::anticommutator(&g5, g))).fold(0.0, f64::max);
    t.comment(format!("gamma5: |(g5)^2 - I|={sq:?} max|{{g5, g_mu}}|={anti:?}"));
    Ok(t)
}

#[derive(Args, Debug)]
pub struct RgFlowArgs {
    #[arg(long, default_value_t = 2.0)]
    pub k0: f64,
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
}

pub fn rg_flow(a: &RgFlowArgs) -> Out {
    let flow = rg::decimation_flow(a.k0, a.steps);
    let mut t = Table::new(&["step", "K"]);
    for (i, k) in flow.values.iter().enumerate() {
        t.push(vec![i.into(), (*k).into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct DualityTcArgs {}

pub fn duality_tc(_: &DualityTcArgs) -> Out {
    let cp = rg::kramers_wannier_tc()?;
    let mut t = Table::new(&["k_c", "t_c", "sinh_residual", "t_c_closed"]);
    t.push(vec![cp.k_c.into(), cp.t_c.into(), cp.sinh_residual.into(), (2.0 / (1.0 + 2f64.sqrt()).ln()).into()]);
    Ok(t)
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 2.0)]
    pub d: f64,
    #[arg(long, default_value_t = 1.0)]
    pub yt: f64,
    #[arg(long, default_value_t = 1.875)]
    pub yh: f64,
}

pub fn scaling_exponents(a: &ScalingArgs) -> Out {
    let s = rg::scaling_exponents(a.d, a.yt, a.yh)?;
    let mut t = Table::new(&["d", "y_t", "y_h", "nu", "beta", "gamma", "delta", "alpha", "rushbrooke_residual"]);
    t.push(vec![s.d.into(), s.y_t.into(), s.y_h.into(), s.nu.into(), s.beta.into(), s.gamma.into(), s.delta.into(), s.alpha.into(), s.rushbrooke_residual().into()]);
    Ok(t)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Args, Debug)]
pub struct TfimGapArgs {
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    #[arg(long, default_value_t = 0.0)]
    pub h_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub h_max: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Chain length for an extra dense-diagonalization column (0 = off).
    #[arg(long, default_value_t = 0)]
    pub numeric_n: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
}

pub fn tfim_gap(a: &TfimGapArgs) -> Out {
    need_points(a.points)?;
    let boundary = match a.boundary {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    let mut t = if a.numeric_n > 0 { Table::new(&["h", "gap", "gap_numeric"]) } else { Table::new(&["h", "gap"]) };
    for h in linspace(a.h_min, a.h_max, a.points) {
        let mut row: Vec<Cell> = vec![h.into(), rg::tfim_gap(a.j, h).into()];
        if a.numeric_n > 0 {
            row.push(rg::tfim_numeric_gap(a.numeric_n, a.j, h, boundary)?.into());
        }
        t.push(row);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct ImagTimeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub h: f64,
    /// Slice counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,4,16,64,256")]
    pub slices: Vec<usize>,
}

pub fn qubit_imaginary_time(a: &ImagTimeArgs) -> Out {
    let mut t = Table::new(&["slices", "z_exact_slices", "z_linearized", "z_exact", "rel_err_exact_slices", "rel_err_linearized"]);
    for &n in &a.slices {
        let ex = rg::qubit_imaginary_time(a.beta, a.h, n, SliceKind::Exact)?;
        let li = rg::qubit_imaginary_time(a.beta, a.h, n, SliceKind::Linearized)?;
        t.push(vec![n.into(), ex.z_chain.into(), li.z_chain.into(), ex.z_exact.into(), ex.rel_error.into(), li.rel_error.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct WfFlowArgs {
    #[arg(long, default_value_t = 0.1)]
    pub g0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 20.0)]
    pub l_max: f64,
    /// Number of order-parameter components N.
    #[arg(long, default_value_t = 1)]
    pub n_comp: usize,
    /// Keep every k-th RK4 step.
    #[arg(long, default_value_t = 100)]
    pub every: usize,
}

pub fn wf_flow(a: &WfFlowArgs) -> Out {
    if a.every == 0 {
        return Err(CliError::Usage("--every must be at least 1".into()));
    }
    let f = rg::wf_flow(a.g0, a.eps, a.l_max, a.n_comp)?;
    let mut t = Table::new(&["l", "g", "beta"]);
    t.comment(format!("g*={:?} richardson={:?}", rg::wf_fixed_point(a.eps, a.n_comp), f.richardson));
    let n = f.trajectory.values.len();
    for (i, (l, g)) in f.trajectory.t.iter().zip(&f.trajectory.values).enumerate() {
        if i % a.every == 0 || i + 1 == n {
            t.push(vec![(*l).into(), (*g).into(), rg::beta_function(*g, a.eps, a.n_comp).into()]);
        }
    }
    Ok(t)
}

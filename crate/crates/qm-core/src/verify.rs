//! Acceptance checks with pinned tolerances and a plain-text report.
//!
//! Each criterion yields a list of (check, expected, got, tol, pass) rows. Checks that are known
//! to fail for documented reasons stay in the report as FAIL and are listed in [`KNOWN_RED`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt::Write as _;

use crate::angular::{clebsch_gordan, j_rep, rotate_l1_coeffs, wigner_d};
use crate::bell::{self, LhvModel, MeasurementAxis, Parity, TieBreak};
use crate::composite::{self, gate, measure_subsystem, named_state, Gate, MultiQubitDensity, MultiQubitState, NamedState, Side};
use crate::dirac::{self, SpacetimeDim};
use crate::dynamics::{self, Band, ParameterPath};
use crate::hydrogen::{self, SuddenKind};
use crate::lattice::{self, Boundary, OccupationBasis, Statistics};
use crate::linalg::{self, c, max_abs, r, sigma_x, sigma_z, CMatrix, C64, ONE};
use crate::oscillator::{self, FockSpace};
use crate::pt::{self, PerturbationProblem};
use crate::qubit::{self, cube_matrix, Axis, CubeOp, CubeState};
use crate::rg::{self, DecimationGeometry, PartitionMethod, SliceKind};
use crate::{QmError, Result};

pub const DEFAULT_SEED: u64 = 20250101;
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=16;

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: DEFAULT_SEED, mc_samples: DEFAULT_MC_SAMPLES }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// |got − expected| ≤ tol; NaN never passes.
    pub fn value(criterion: u8, name: impl Into<String>, expected: f64, got: f64, tol: f64) -> Self {
        let pass = (got - expected).abs() <= tol;
        Check { criterion, name: name.into(), expected, got, tol, pass }
    }

    pub fn residual(criterion: u8, name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::value(criterion, name, 0.0, residual, tol)
    }

    pub fn flag(criterion: u8, name: impl Into<String>, ok: bool) -> Self {
        Self::value(criterion, name, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }

    fn error(criterion: u8, e: &QmError) -> Self {
        Check { criterion, name: format!("error: {e}"), expected: 0.0, got: f64::NAN, tol: 0.0, pass: false }
    }

    pub fn known_red(&self) -> Option<&'static KnownRed> {
        KNOWN_RED.iter().find(|k| k.name == self.name)
    }
}

pub struct KnownRed {
    pub name: &'static str,
    pub reason: &'static str,
}

/// Checks implemented as stated whose stated value cannot be reproduced.
pub const KNOWN_RED: &[KnownRed] = &[
    KnownRed {
        name: "sudden HO w2=2w1 P0 = 8/9",
        reason: "the true stay probability is 2√(ω₁ω₂)/(ω₁+ω₂) = 2√2/3 ≈ 0.9428; 8/9 is its square",
    },
    KnownRed {
        name: "face model P(+|e+) with sign(0)=+1 = 3/4",
        reason: "with λ = (±1, ±1, +1) and ê₊ = (ẑ+x̂)/√2, n̂·λ is 0 or √2, so sign(0)=+1 gives 1; 3/4 needs a fair-coin tie",
    },
];

/// Module group a criterion belongs to, used by `--only`.
pub fn topic(criterion: u8) -> &'static str {
    match criterion {
        1 | 2 => "qubit",
        3 | 4 => "composite",
        5 => "lattice",
        6..=8 => "dynamics",
        9 => "oscillator",
        10 => "angular",
        11 => "hydrogen",
        12 => "pt",
        13 => "bell",
        14 => "dirac",
        15 => "rg",
        16 => "determinism",
        _ => "unknown",
    }
}

/// Parses a filter: a criterion number ("15", "c15") or a topic name ("rg").
pub fn parse_filter(s: &str) -> Result<Vec<u8>> {
    let t = s.trim().to_ascii_lowercase();
    let num = t.strip_prefix('c').unwrap_or(&t);
    if let Ok(n) = num.parse::<u8>() {
        return if CRITERIA.contains(&n) {
            Ok(vec![n])
        } else {
            Err(QmError::InvalidArgument(format!("no criterion {n}")))
        };
    }
    let hits: Vec<u8> = CRITERIA.filter(|&n| topic(n) == t).collect();
    if hits.is_empty() {
        Err(QmError::InvalidArgument(format!("unknown filter '{s}'")))
    } else {
        Ok(hits)
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn c01() -> Result<Vec<Check>> {
    let st = |ax, p| CubeState::new(ax, p).state();
    let v = qubit::inner(&st(Axis::X, true), &st(Axis::Y, true));
    let mut ok = 0;
    let mut total = 0;
    for a in CubeState::all() {
        for b in CubeState::all() {
            if a == b {
                continue;
            }
            total += 1;
            let m = qubit::inner(&a.state(), &b.state()).norm();
            if [0.0, FRAC_1_SQRT_2, 1.0].iter().any(|w| (m - w).abs() <= 1e-12) {
                ok += 1;
            }
        }
    }
    Ok(vec![
        Check::residual(1, "<+x|+y> - (1+i)/2", (v - c(0.5, 0.5)).norm(), 1e-12),
        Check::value(1, "cube overlap pairs examined", 30.0, total as f64, 0.0),
        Check::value(1, "overlap magnitudes in {0, 1/sqrt2, 1}", total as f64, ok as f64, 0.0),
    ])
}

fn c02() -> Result<Vec<Check>> {
    let v = |ax, p| CubeState::new(ax, p).state().vector();
    let (x, y, z) = (cube_matrix(CubeOp::X), cube_matrix(CubeOp::Y), cube_matrix(CubeOp::Z));
    let e = |k: f64| C64::from_polar(1.0, k * FRAC_PI_4);
    let pz = v(Axis::Z, true);
    Ok(vec![
        Check::residual(2, "Z|+x> = |+y>", (&z * v(Axis::X, true) - v(Axis::Y, true)).norm(), 1e-12),
        Check::residual(2, "X|+z> = e^{i pi/4}|-y>", (&x * &pz - v(Axis::Y, false) * e(1.0)).norm(), 1e-12),
        Check::residual(2, "Y|+z> = e^{i pi/4}|+x>", (&y * &pz - v(Axis::X, true) * e(1.0)).norm(), 1e-12),
        Check::residual(2, "YX|+z> = e^{i 3pi/4}|-y>", (&y * &x * &pz - v(Axis::Y, false) * e(3.0)).norm(), 1e-12),
        Check::residual(2, "XY|+z> = e^{i pi/4}|+x>", (&x * &y * &pz - v(Axis::X, true) * e(1.0)).norm(), 1e-12),
        Check::flag(2, "XY != YX on |+z>", (&y * &x * &pz - &x * &y * &pz).norm() > 0.5),
    ])
}

pub fn worked_rho() -> CMatrix {
    linalg::rmat(&[&[0.4, 0.0, 0.0, 0.2], &[0.0, 0.1, 0.05, 0.0], &[0.0, 0.05, 0.1, 0.0], &[0.2, 0.0, 0.0, 0.4]])
}

fn c03() -> Result<Vec<Check>> {
    let m = worked_rho();
    let rho = MultiQubitDensity::new(2, m.clone())?;
    let half = linalg::eye(2) * r(0.5);
    let mut out = Vec::new();
    for (keep, side, label) in [(1usize, Side::B, "rho_A"), (2, Side::A, "rho_B")] {
        out.push(Check::residual(3, format!("{label} index contraction"), max_abs(&(composite::partial_trace(&rho, &[keep])?.matrix() - &half)), 1e-12));
        out.push(Check::residual(3, format!("{label} block method"), max_abs(&(composite::partial_trace_blocks(&m, 2, 2, side) - &half)), 1e-12));
        out.push(Check::residual(3, format!("{label} projection"), max_abs(&(composite::partial_trace_projection(&m, 2, 2, side) - &half)), 1e-12));
    }
    Ok(out)
}

fn c04() -> Result<Vec<Check>> {
    let s = MultiQubitState::superpose(&[(ONE, "00"), (ONE, "10")])?;
    let out = s.apply(&gate(Gate::Cnot, &[1, 2], 2)?)?;
    let phi = named_state(NamedState::PhiPlus);
    let px = CubeState::new(Axis::X, true).state();
    let ghz = measure_subsystem(&named_state(NamedState::Ghz), 1, Axis::Z)?;
    let mut checks = vec![
        Check::residual(4, "CNOT (|00>+|10>)/sqrt2 = Phi+", 1.0 - out.inner(&phi).norm(), 1e-12),
        Check::value(4, "Phi+ P(+x,+x)", 0.5, composite::joint_probability(&phi, &[px, px])?, 1e-12),
    ];
    for (o, bits) in ghz.iter().zip(["000", "111"]) {
        checks.push(Check::value(4, format!("GHZ P(qubit1 -> {})", &bits[..1]), 0.5, o.probability, 1e-12));
        let post = o.post_state.as_ref().ok_or_else(|| QmError::Convergence("missing post state".into()))?;
        let want = MultiQubitState::basis(bits)?;
        checks.push(Check::residual(4, format!("GHZ collapse to |{bits}>"), (post.amps() - want.amps()).norm(), 1e-12));
    }
    Ok(checks)
}

fn c05() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let basis = OccupationBasis::full(3)?;
    let delta = 0.7;
    for (kind, label) in [(Statistics::HardcoreBoson, "boson"), (Statistics::Fermion, "fermion")] {
        let h = lattice::hopping_hamiltonian(delta, Boundary::Open, kind, &basis)?;
        let res = (h * basis.ket("110")? - basis.ket("101")? * r(-delta)).norm();
        checks.push(Check::residual(5, format!("H|110> = -D|101> ({label})"), res, 1e-12));
    }
    let mut worst: f64 = 0.0;
    for n in 3..=12 {
        let b = OccupationBasis::sector(n, 1)?;
        let ev = linalg::eigvalsh(&lattice::hopping_hamiltonian(1.0, Boundary::Periodic, Statistics::Fermion, &b)?)?;
        let mut want = lattice::ring_dispersion(n, 1.0);
        want.sort_by(f64::total_cmp);
        worst = worst.max(max_of(ev.iter().zip(&want).map(|(a, b)| (a - b).abs())));
    }
    checks.push(Check::residual(5, "ring spectrum -2D cos(2 pi a/N), N=3..12", worst, 1e-10));
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let id = linalg::eye(1 << n);
        let zero = CMatrix::zeros(1 << n, 1 << n);
        let cs = (1..=n).map(|s| lattice::annihilation_op(Statistics::Fermion, s, n)).collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { &id } else { &zero };
                worst = worst.max(max_abs(&(linalg::anticommutator(&cs[i], &cs[j].adjoint()) - want)));
                worst = worst.max(max_abs(&linalg::anticommutator(&cs[i], &cs[j])));
            }
        }
    }
    checks.push(Check::residual(5, "fermion anticommutators n_sites <= 6", worst, 0.0));
    Ok(checks)
}

fn c06() -> Result<Vec<Check>> {
    let basis = OccupationBasis::sector(3, 1)?;
    let delta = 0.9;
    let h = lattice::hopping_hamiltonian(delta, Boundary::Periodic, Statistics::HardcoreBoson, &basis)?;
    let mut worst: f64 = 0.0;
    for k in 0..40 {
        let t = 0.13 * k as f64;
        let u = dynamics::propagator(&h, t)?;
        for i in 0..3 {
            for j in 0..3 {
                // basis index i is site 3 − i
                worst = worst.max((u[(i, j)] - dynamics::ring3_propagator_element(delta, t, 3 - i, 3 - j)).norm());
            }
        }
    }
    Ok(vec![Check::residual(6, "3-site propagator vs closed form", worst, 1e-10)])
}

fn c07() -> Result<Vec<Check>> {
    let w = 1.7;
    let h = sigma_z() * r(w / 2.0);
    let psi0 = linalg::rvec(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let times: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
    let tr = dynamics::trajectory(&h, &psi0, &times, &[("sx", sigma_x())], false)?;
    let sx = tr.series("sx").ok_or_else(|| QmError::Convergence("missing series".into()))?;
    let larmor = max_of(times.iter().zip(sx).map(|(t, v)| (v - (w * t).cos()).abs()));
    let om = 1.3;
    let mut rabi: f64 = 0.0;
    for k in 0..40 {
        let t = 0.2 * k as f64;
        rabi = rabi.max((dynamics::rabi_evolved(om, 0.0, t)? - (om * t / 2.0).sin().powi(2)).abs());
    }
    let terms = [sigma_x() * r(0.5), sigma_z() * r(0.5)];
    let start = linalg::rvec(&[1.0, 0.0]);
    let (_, e1) = dynamics::trotter_evolve(&terms, &start, 1.0, 16)?;
    let (_, e2) = dynamics::trotter_evolve(&terms, &start, 1.0, 32)?;
    Ok(vec![
        Check::residual(7, "Larmor <sx>(t) = cos wt", larmor, 1e-10),
        Check::residual(7, "resonant Rabi P(t) = sin^2(Wt/2)", rabi, 1e-10),
        Check::value(7, "Trotter error ratio n=16 -> 32", 0.5, e2 / e1, 0.1),
    ])
}

fn c08() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (alpha, label) in [(PI / 6.0, "pi/6"), (PI / 4.0, "pi/4"), (PI / 2.0, "pi/2")] {
        let g = dynamics::berry_phase(&ParameterPath::latitude(alpha, 10_000), Band::Ground)?;
        let want = -PI * (1.0 - alpha.cos());
        checks.push(Check::value(8, format!("Berry latitude alpha={label}"), want, want + dynamics::angle_distance(g, want), 1e-4));
    }
    let tri = ParameterPath::geodesic_polygon(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 10_000)?;
    let g = dynamics::berry_phase(&tri, Band::Ground)?;
    checks.push(Check::value(8, "Berry cube triangle", -FRAC_PI_4, -FRAC_PI_4 + dynamics::angle_distance(g, -FRAC_PI_4), 1e-4));
    Ok(checks)
}

fn c09() -> Result<Vec<Check>> {
    let s = FockSpace::new(64, 1.0)?;
    let grid = [-2.0, -1.1, 0.0, 0.7, 1.4];
    let mut worst: f64 = 0.0;
    for &ar in &grid {
        for &ai in &grid {
            for &br in &grid {
                let a = c(ar, ai) * (2.0 / c(ar, ai).norm().max(2.0));
                let b = c(br, -ai) * (2.0 / c(br, -ai).norm().max(2.0));
                let num = oscillator::coherent(&s, a).amps.dotc(&oscillator::coherent(&s, b).amps).norm_sqr();
                worst = worst.max((num - oscillator::overlap2(a, b)).abs());
            }
        }
    }
    let mut checks = vec![Check::residual(9, "|<a|b>|^2 = exp(-|a-b|^2), n_max=64", worst, 1e-8)];
    let sq = FockSpace::new(80, 1.0)?;
    let ops = sq.ladder_ops();
    for rr in [0.2, 0.5, 0.8] {
        let psi = oscillator::squeeze(&sq, rr)?.column(0).into_owned();
        let (vx, vp) = (oscillator::variance(&psi, &ops.x), oscillator::variance(&psi, &ops.p));
        checks.push(Check::value(9, format!("squeezed Var x, r={rr}"), 0.5 * (-2.0 * rr).exp(), vx, 1e-6));
        checks.push(Check::value(9, format!("squeezed Var p, r={rr}"), 0.5 * (2.0 * rr).exp(), vp, 1e-6));
        checks.push(Check::value(9, format!("squeezed dx dp, r={rr}"), 0.5, (vx * vp).sqrt(), 1e-6));
    }
    let h = s.hamiltonian();
    let psi0 = oscillator::coherent(&s, C64::from_polar(1.5, 0.4)).amps;
    let e0 = linalg::expect(&psi0, &h).re;
    let drift = max_of((0..25).map(|k| {
        let psi = oscillator::evolve_fock(&s, &psi0, 0.17 * k as f64);
        (linalg::expect(&psi, &h).re - e0).abs()
    }));
    checks.push(Check::residual(9, "coherent <E>(t) constant", drift, 1e-9));
    Ok(checks)
}

/// One printed Clebsch–Gordan entry: (j1, j2, j, m, m1, m2, value).
pub type CgEntry = (f64, f64, f64, f64, f64, f64, f64);

pub fn printed_cg_tables() -> Vec<(&'static str, Vec<CgEntry>)> {
    let (s2, s3, s6) = (FRAC_1_SQRT_2, 1.0 / 3f64.sqrt(), 1.0 / 6f64.sqrt());
    let (a, b) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
    let hh = vec![
        (0.5, 0.5, 1.0, 1.0, 0.5, 0.5, 1.0),
        (0.5, 0.5, 1.0, 0.0, 0.5, -0.5, s2),
        (0.5, 0.5, 1.0, 0.0, -0.5, 0.5, s2),
        (0.5, 0.5, 1.0, -1.0, -0.5, -0.5, 1.0),
        (0.5, 0.5, 0.0, 0.0, 0.5, -0.5, s2),
        (0.5, 0.5, 0.0, 0.0, -0.5, 0.5, -s2),
    ];
    let oh = vec![
        (1.0, 0.5, 1.5, 1.5, 1.0, 0.5, 1.0),
        (1.0, 0.5, 1.5, 0.5, 1.0, -0.5, b),
        (1.0, 0.5, 1.5, 0.5, 0.0, 0.5, a),
        (1.0, 0.5, 1.5, -0.5, 0.0, -0.5, a),
        (1.0, 0.5, 1.5, -0.5, -1.0, 0.5, b),
        (1.0, 0.5, 1.5, -1.5, -1.0, -0.5, 1.0),
        (1.0, 0.5, 0.5, 0.5, 1.0, -0.5, a),
        (1.0, 0.5, 0.5, 0.5, 0.0, 0.5, -b),
        (1.0, 0.5, 0.5, -0.5, 0.0, -0.5, b),
        (1.0, 0.5, 0.5, -0.5, -1.0, 0.5, -a),
    ];
    let oo = vec![
        (1.0, 1.0, 2.0, 2.0, 1.0, 1.0, 1.0),
        (1.0, 1.0, 2.0, 1.0, 1.0, 0.0, s2),
        (1.0, 1.0, 2.0, 1.0, 0.0, 1.0, s2),
        (1.0, 1.0, 2.0, 0.0, 1.0, -1.0, s6),
        (1.0, 1.0, 2.0, 0.0, 0.0, 0.0, 2.0 * s6),
        (1.0, 1.0, 2.0, 0.0, -1.0, 1.0, s6),
        (1.0, 1.0, 2.0, -1.0, 0.0, -1.0, s2),
        (1.0, 1.0, 2.0, -1.0, -1.0, 0.0, s2),
        (1.0, 1.0, 2.0, -2.0, -1.0, -1.0, 1.0),
        (1.0, 1.0, 1.0, 1.0, 1.0, 0.0, s2),
        (1.0, 1.0, 1.0, 1.0, 0.0, 1.0, -s2),
        (1.0, 1.0, 1.0, 0.0, 1.0, -1.0, s2),
        (1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0),
        (1.0, 1.0, 1.0, 0.0, -1.0, 1.0, -s2),
        (1.0, 1.0, 1.0, -1.0, 0.0, -1.0, s2),
        (1.0, 1.0, 1.0, -1.0, -1.0, 0.0, -s2),
        (1.0, 1.0, 0.0, 0.0, 1.0, -1.0, s3),
        (1.0, 1.0, 0.0, 0.0, 0.0, 0.0, -s3),
        (1.0, 1.0, 0.0, 0.0, -1.0, 1.0, s3),
    ];
    vec![("1/2 x 1/2", hh), ("1 x 1/2", oh), ("1 x 1", oo)]
}

/// Compares any coefficient source against the printed tables; one row per table.
pub fn check_cg_tables(coeff: impl Fn(f64, f64, f64, f64, f64, f64) -> Result<f64>) -> Result<Vec<Check>> {
    printed_cg_tables()
        .into_iter()
        .map(|(label, rows)| {
            let mut worst: f64 = 0.0;
            for (j1, j2, j, m, m1, m2, v) in rows {
                worst = worst.max((coeff(j1, j2, j, m, m1, m2)? - v).abs());
            }
            Ok(Check::residual(10, format!("CG {label} printed coefficients"), worst, 1e-12))
        })
        .collect()
}

fn c10() -> Result<Vec<Check>> {
    let rep = j_rep(1.0)?;
    let s = FRAC_1_SQRT_2;
    let jx = linalg::rmat(&[&[0.0, s, 0.0], &[s, 0.0, s], &[0.0, s, 0.0]]);
    let i = |x: f64| c(0.0, x);
    let z = r(0.0);
    let jy = linalg::cmat(&[&[z, i(-s), z], &[i(s), z, i(-s)], &[z, i(s), z]]);
    let jz = linalg::diag_real(&[1.0, 0.0, -1.0]);
    let d1 = wigner_d(1.0, FRAC_PI_2)?;
    let want = nalgebra::DMatrix::from_row_slice(3, 3, &[0.5, -s, 0.5, s, 0.0, -s, 0.5, s, 0.5]);
    let dh = wigner_d(0.5, 2.0 * PI)?;
    let mut checks = vec![
        Check::residual(10, "l=1 Lx printed form", max_abs(&(&rep.jx - jx)), 0.0),
        Check::residual(10, "l=1 Ly printed form", max_abs(&(&rep.jy - jy)), 0.0),
        Check::residual(10, "l=1 Lz printed form", max_abs(&(&rep.jz - jz)), 0.0),
        Check::residual(10, "d^1(pi/2) printed matrix", (d1 - want).amax(), 1e-12),
        Check::residual(10, "d^1/2(2pi) = -I", (dh + nalgebra::DMatrix::<f64>::identity(2, 2)).amax(), 1e-12),
    ];
    let tables = [clebsch_gordan(0.5, 0.5)?, clebsch_gordan(1.0, 0.5)?, clebsch_gordan(1.0, 1.0)?];
    checks.extend(check_cg_tables(|j1, j2, j, m, m1, m2| {
        tables
            .iter()
            .find(|t| t.two_j1 as f64 == 2.0 * j1 && t.two_j2 as f64 == 2.0 * j2)
            .map(|t| t.coeff(j, m, m1, m2))
            .ok_or_else(|| QmError::InvalidArgument("table not built".into()))
    })?);
    let rot = rotate_l1_coeffs([r(0.0), r(1.0), r(0.0)], 0.0, FRAC_PI_4, 0.0)?;
    for (k, w) in [-0.5, 0.7071, 0.5].into_iter().enumerate() {
        checks.push(Check::value(10, format!("l=1 45deg rotation of p_z, component {k}"), w, rot[k].re, 1e-4));
    }
    Ok(checks)
}

fn c11() -> Result<Vec<Check>> {
    let exact = (1..=10u32).all(|n| hydrogen::energy(n) == -0.5 / (n * n) as f64);
    let virial = max_of(
        [(1, 0), (2, 0), (2, 1), (3, 2), (4, 1)]
            .iter()
            .map(|&(n, l)| hydrogen::kinetic_potential(n, l, 1.0).map(|(_, v)| (v - 2.0 * hydrogen::energy(n)).abs()).unwrap_or(f64::NAN)),
    );
    Ok(vec![
        Check::flag(11, "E_n = -1/2n^2 bitwise, n=1..10", exact),
        Check::value(11, "<r>_1s quadrature", 1.5, hydrogen::hydrogen_expectation(1, 0, 1.0, 1)?, 1e-6),
        Check::value(11, "most probable r_1s", 1.0, hydrogen::most_probable_radius(1, 0, 1.0)?, 1e-6),
        Check::residual(11, "virial <V> = 2E", virial, 1e-6),
    ])
}

fn c12() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for w in [1.0, 1.5] {
        let p = pt::quartic_problem(w, 80)?;
        checks.push(Check::value(12, format!("quartic E0(1), w={w}"), 3.0 / (4.0 * w * w), pt::pt_first(&p, 0)?, 1e-10));
        checks.push(Check::value(12, format!("quartic E0(2), w={w}"), -21.0 / (8.0 * w.powi(5)), pt::pt_second(&p, 0)?, 1e-8));
    }
    checks.push(Check::value(12, "Stark <2s|z|2p0>", -3.0, hydrogen::dipole_z((2, 0, 0), (2, 1, 0), 1.0)?, 1e-6));
    let eps = 1e-3;
    let states = [(2, 0, 0), (2, 1, 0), (2, 1, 1), (2, 1, -1)];
    let mut v = CMatrix::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            v[(a, b)] = r(eps * hydrogen::dipole_z(states[a], states[b], 1.0)?);
        }
    }
    let (vals, _) = pt::pt_degenerate(&PerturbationProblem::from_diagonal(&[-0.125; 4], &v)?, &[0, 1, 2, 3])?;
    checks.push(Check::value(12, "Stark n=2 lower shift / eps", -3.0, vals[0] / eps, 1e-6));
    checks.push(Check::value(12, "Stark n=2 upper shift / eps", 3.0, vals[3] / eps, 1e-6));
    let (zs, es) = pt::variational_minimize(pt::helium_energy, 0.5, 3.0)?;
    checks.push(Check::value(12, "helium Z*", 27.0 / 16.0, zs, 1e-6));
    checks.push(Check::value(12, "helium E* (eV)", -77.5, es * hydrogen::HARTREE_EV, 0.1));
    let ho = SuddenKind::HoFrequency { w1: 1.0, w2: 2.0 };
    let p_ho = hydrogen::sudden_overlap(ho)?;
    checks.push(Check::value(12, "sudden HO w2=2w1 P0 = 8/9", 8.0 / 9.0, p_ho, 1e-6));
    checks.push(Check::residual(12, "sudden HO closed form vs quadrature", (p_ho - hydrogen::sudden_overlap_quadrature(ho)?).abs(), 1e-10));
    let tri = SuddenKind::HydrogenicZ { z1: 1.0, z2: 2.0 };
    checks.push(Check::value(12, "sudden tritium decay P(1s)", 512.0 / 729.0, hydrogen::sudden_overlap(tri)?, 1e-6));
    let wkb = pt::wkb_levels(|x| 0.5 * x * x, 1.0, 6)?;
    checks.push(Check::residual(12, "WKB HO levels n+1/2, n<6", max_of(wkb.iter().enumerate().map(|(n, e)| (e - n as f64 - 0.5).abs())), 1e-6));
    let la = hydrogen::lyman_alpha_rate()?;
    checks.push(Check::value(12, "Lyman-alpha A (1/s)", 6.27e8, la.rate, 0.02 * 6.27e8));
    Ok(checks)
}

fn c13(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let singlet = named_state(NamedState::PsiMinus).density();
    let a = MeasurementAxis::face(Axis::Z);
    let corr = max_of((0..=16).map(|k| {
        let th = k as f64 * PI / 16.0;
        bell::quantum_correlation(&singlet, &a, &MeasurementAxis::xz(th)).map(|e| (e + th.cos()).abs()).unwrap_or(f64::NAN)
    }));
    let [a1, a2, b1, b2] = bell::face_edge_axes();
    let mut checks = vec![
        Check::residual(13, "singlet E(theta) = -cos theta", corr, 1e-12),
        Check::value(13, "CHSH face/edge S", -2.0 * SQRT_2, bell::chsh(&singlet, &a1, &a2, &b1, &b2)?, 1e-12),
    ];
    let mut werner: f64 = 0.0;
    for p in [0.0, 0.25, 0.5, FRAC_1_SQRT_2, 0.9, 1.0] {
        let w = composite::werner(p, NamedState::PsiMinus)?;
        werner = werner.max((bell::chsh(&w, &a1, &a2, &b1, &b2)?.abs() - 2.0 * SQRT_2 * p).abs());
    }
    checks.push(Check::residual(13, "Werner |S(p)| = 2 sqrt2 p", werner, 1e-12));
    for (which, want) in Parity::ALL.into_iter().zip([1.0, 1.0, 1.0, -1.0]) {
        let (sign, res) = bell::ghz_parity(which)?;
        checks.push(Check::value(13, format!("GHZ parity {}", which.label()), want, sign as f64, 0.0));
        checks.push(Check::residual(13, format!("GHZ parity {} eigen-residual", which.label()), res, 1e-12));
    }
    let z = CubeState::new(Axis::Z, true);
    let e = MeasurementAxis::edge_plus();
    checks.push(Check::value(13, "face model P(+|e+) with sign(0)=+1 = 3/4", 0.75, bell::face_model_prob(z, &e, TieBreak::Plus), 1e-12));
    checks.push(Check::value(13, "face model P(+|e+) with fair-coin tie = 3/4", 0.75, bell::face_model_prob(z, &e, TieBreak::FairCoin), 1e-12));
    checks.push(Check::value(13, "quantum P(+|e+) = cos^2(pi/8)", (PI / 8.0).cos().powi(2), bell::quantum_prob(z, &e), 1e-12));
    let model = LhvModel::sphere(cfg.seed);
    for k in 0..=8 {
        let th = k as f64 * PI / 8.0;
        let (mean, se) = bell::lhv_correlation(&model, &a, &MeasurementAxis::xz(th), cfg.mc_samples)?;
        checks.push(Check::value(13, format!("sphere-sign MC theta={k}pi/8 (tol 3 stderr)"), bell::lhv_line(th), mean, 3.0 * se + 1e-12));
    }
    Ok(checks)
}

fn c14() -> Result<Vec<Check>> {
    let chain = dirac::DiracChain::uniform(8, 0.5, Boundary::Periodic)?;
    let spec_dev = max_of(chain.spectrum()?.iter().zip(dirac::periodic_spectrum(8, 0.5)).map(|(a, b)| (a - b).abs()));
    let mut spinor: f64 = 0.0;
    for k in [-2.5, -0.4, 0.0, 0.3, 1.2, 3.0] {
        for m in [0.2, 0.5, 1.0] {
            spinor = spinor.max(dirac::eigenspinor_residual(k, m)?);
        }
    }
    let m = 0.8;
    let rest = dirac::boosted_spinor([0.0; 3], m, true)?;
    let p = [0.0, 0.0, m];
    let u = dirac::boosted_spinor(p, m, true)?;
    let e = SQRT_2 * m;
    Ok(vec![
        Check::residual(14, "N=8 periodic spectrum vs +-sqrt(sin^2k+m^2)", spec_dev, 1e-10),
        Check::residual(14, "eigenspinor residual", spinor, 1e-12),
        Check::residual(14, "Clifford 1+1", dirac::clifford_verify(&dirac::gamma_set(SpacetimeDim::OnePlusOne)), 0.0),
        Check::residual(14, "Clifford 3+1", dirac::clifford_verify(&dirac::gamma_set(SpacetimeDim::ThreePlusOne)), 0.0),
        Check::residual(14, "{H(k), sz} = 2mI, m=0.3", dirac::chiral_check(0.3, 64), 1e-15),
        Check::residual(14, "{H(k), sz} = 0, m=0", dirac::chiral_check(0.0, 64), 1e-15),
        Check::residual(14, "rest spinor sqrt(2m)(1,0,0,0)", (&rest - linalg::rvec(&[(2.0 * m).sqrt(), 0.0, 0.0, 0.0])).norm(), 1e-12),
        Check::residual(14, "rest spinor Dirac residual", dirac::boosted_residual([0.0; 3], m, &rest), 1e-12),
        Check::residual(14, "p=m boosted spinor Dirac residual", dirac::boosted_residual(p, m, &u), 1e-12),
        Check::value(14, "p=m boosted spinor u'u = 2E", 2.0 * e, u.norm_squared(), 1e-12),
    ])
}

fn c15() -> Result<Vec<Check>> {
    let flow = rg::decimation_flow(2.0, 12);
    let k: f64 = 0.01;
    let mut z: f64 = 0.0;
    for n in (2..=16).step_by(2) {
        for kk in [0.1, 0.5, 1.0, 2.0] {
            z = z.max(rg::decimation_consistency(n, kk, DecimationGeometry::OpenBonds, PartitionMethod::Enumeration)?);
        }
    }
    let cp = rg::kramers_wannier_tc()?;
    let ex = rg::scaling_exponents(2.0, 1.0, 15.0 / 8.0)?;
    let mut checks = vec![
        Check::flag(15, "decimation flow from K=2 monotone", flow.is_monotone_decreasing()),
        Check::value(15, "decimation flow endpoint (12 steps)", 0.0, flow.last(), 1e-6),
        Check::value(15, "K' / K^2 at K=0.01", 1.0, rg::decimate(k) / (k * k), 0.02),
        Check::residual(15, "Z(N,K) = A^{N/2} Z(N/2,K'), open, N<=16", z, 1e-10),
        Check::value(15, "T_c/J = 2/ln(1+sqrt2)", 2.0 / (1.0 + SQRT_2).ln(), cp.t_c, 1e-9),
    ];
    for (label, got, want) in [("nu", ex.nu, 1.0), ("beta", ex.beta, 0.125), ("gamma", ex.gamma, 1.75), ("delta", ex.delta, 15.0), ("alpha", ex.alpha, 0.0)] {
        checks.push(Check::value(15, format!("2D Ising {label}"), want, got, 0.0));
    }
    checks.push(Check::residual(15, "Rushbrooke a+2b+g-2 (2D)", ex.rushbrooke_residual(), 0.0));
    let mf = rg::scaling_exponents(4.0, 2.0, 3.0)?;
    checks.push(Check::residual(15, "Rushbrooke a+2b+g-2 (mean field)", mf.rushbrooke_residual(), 0.0));
    for h in [0.25, 2.0] {
        let g = rg::tfim_numeric_gap(10, 1.0, h, Boundary::Open)?;
        let want = rg::tfim_gap(1.0, h);
        checks.push(Check::value(15, format!("TFIM N=10 open gap, h={h} (10%)"), want, g, 0.1 * want));
    }
    let errs = [4, 16, 64, 256]
        .iter()
        .map(|&n| rg::qubit_imaginary_time(1.0, 1.0, n, SliceKind::Linearized).map(|it| it.rel_error))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::flag(15, "imaginary-time error monotone, N=4..256", errs.windows(2).all(|w| w[1] < w[0])));
    let exact = max_of([1, 4, 16, 64].iter().map(|&n| rg::qubit_imaginary_time(1.0, 1.0, n, SliceKind::Exact).map(|it| it.rel_error).unwrap_or(f64::NAN)));
    checks.push(Check::residual(15, "imaginary-time exact slices", exact, 1e-12));
    let wf = rg::wf_exponents(1.0);
    checks.push(Check::value(15, "WF g* (eps=1)", 1.0 / 3.0, wf.g_star, 1e-12));
    checks.push(Check::value(15, "WF nu(1) = 7/12", 7.0 / 12.0, wf.nu, 1e-12));
    checks.push(Check::residual(15, "WF |beta(g*)|", wf.beta_residual, 1e-12));
    Ok(checks)
}

fn run_single(n: u8, cfg: &VerifyConfig) -> Vec<Check> {
    let res = match n {
        1 => c01(),
        2 => c02(),
        3 => c03(),
        4 => c04(),
        5 => c05(),
        6 => c06(),
        7 => c07(),
        8 => c08(),
        9 => c09(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        13 => c13(cfg),
        14 => c14(),
        15 => c15(),
        _ => Err(QmError::InvalidArgument(format!("no criterion {n}"))),
    };
    res.unwrap_or_else(|e| vec![Check::error(n, &e)])
}

/// Runs one criterion; 16 reruns the numeric criteria and compares the two reports.
pub fn run_criterion(n: u8, cfg: &VerifyConfig) -> Vec<Check> {
    if n == 16 {
        let first = render(&Report { checks: (1..=15).flat_map(|k| run_single(k, cfg)).collect() });
        let second = render(&Report { checks: (1..=15).flat_map(|k| run_single(k, cfg)).collect() });
        return vec![Check::flag(16, "repeat run with the same seed is byte-identical", first == second)];
    }
    run_single(n, cfg)
}

#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Failures that are not on the known-red list.
    pub fn unexpected_failures(&self) -> impl Iterator<Item = &Check> {
        self.failures().filter(|c| c.known_red().is_none())
    }

    pub fn criterion_pass(&self, n: u8) -> bool {
        self.checks.iter().filter(|c| c.criterion == n).all(|c| c.pass)
    }
}

pub fn verify(criteria: &[u8], cfg: &VerifyConfig) -> Report {
    Report { checks: criteria.iter().flat_map(|&n| run_criterion(n, cfg)).collect() }
}

pub fn verify_all(cfg: &VerifyConfig) -> Report {
    verify(&CRITERIA.collect::<Vec<_>>(), cfg)
}

fn num(x: f64) -> String {
    if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.10}")
    } else {
        format!("{x:.6e}")
    }
}

/// Table of (criterion, status, check, expected, got, tol), one line per check, plus notes for
/// known-red checks and a summary line.
pub fn render(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<4} {:<6} {:<58} {:>18} {:>18} {:>14}", "crit", "status", "check", "expected", "got", "tol");
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{:<4} {:<6} {:<58} {:>18} {:>18} {:>14}", c.criterion, status, c.name, num(c.expected), num(c.got), num(c.tol));
    }
    for c in report.failures() {
        if let Some(k) = c.known_red() {
            let _ = writeln!(s, "note: '{}' is a known failure: {}", k.name, k.reason);
        }
    }
    let fails = report.failures().count();
    let _ = writeln!(s, "{} checks, {} passed, {} failed", report.checks.len(), report.checks.len() - fails, fails);
    s
}

//! Identities that tie two modules together.

use qm_core::angular::{j_rep, wigner_d};
use qm_core::bell::{quantum_correlation, MeasurementAxis};
use qm_core::composite::{concurrence, named_state, ppt_min_eigenvalue, werner, NamedState};
use qm_core::lattice::{hopping_hamiltonian, ring_dispersion, Boundary, OccupationBasis, Statistics};
use qm_core::linalg::{self, max_abs, r, sigma_x, sigma_y, sigma_z};
use qm_core::qubit::rotation_matrix;
use qm_core::rg::{ising1d_partition, PartitionMethod};

#[test]
fn spin_half_rep_is_half_pauli() {
    let j = j_rep(0.5).unwrap();
    assert!(max_abs(&(j.jx - sigma_x() * r(0.5))) < 1e-15);
    assert!(max_abs(&(j.jy - sigma_y() * r(0.5))) < 1e-15);
    assert!(max_abs(&(j.jz - sigma_z() * r(0.5))) < 1e-15);
}

#[test]
fn qubit_y_rotation_matches_wigner_d() {
    for beta in [0.0, 0.3, 1.2, 2.9, 4.0, 2.0 * std::f64::consts::PI] {
        let u = rotation_matrix([0.0, 1.0, 0.0], beta).unwrap();
        let d = wigner_d(0.5, beta).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((u[(a, b)] - r(d[(a, b)])).norm() < 1e-14, "beta={beta}");
            }
        }
    }
}

#[test]
fn werner_entangled_iff_not_ppt() {
    for i in 0..=40 {
        let p = i as f64 / 40.0;
        let rho = werner(p, NamedState::PsiMinus).unwrap();
        let c = concurrence(&rho).unwrap();
        let ppt = ppt_min_eigenvalue(&rho).unwrap();
        if (p - 1.0 / 3.0).abs() > 1e-9 {
            assert_eq!(c > 1e-12, ppt < -1e-12, "p={p}: C={c}, min eig={ppt}");
        }
    }
}

#[test]
fn singlet_correlation_is_minus_cosine_of_angle() {
    let rho = named_state(NamedState::PsiMinus).density();
    for (ta, tb) in [(0.0, 0.0), (0.0, 0.7), (1.1, -0.4), (2.5, 0.2)] {
        let (a, b) = (MeasurementAxis::xz(ta), MeasurementAxis::xz(tb));
        let e = quantum_correlation(&rho, &a, &b).unwrap();
        assert!((e + a.angle_to(&b).cos()).abs() < 1e-13);
    }
}

#[test]
fn single_fermion_ring_matches_closed_dispersion() {
    for n in 3..=9 {
        let basis = OccupationBasis::sector(n, 1).unwrap();
        let h = hopping_hamiltonian(0.8, Boundary::Periodic, Statistics::Fermion, &basis).unwrap();
        let got = linalg::eigvalsh(&h).unwrap();
        let mut want = ring_dispersion(n, 0.8);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "n={n}");
        }
    }
}

#[test]
fn ising_enumeration_matches_transfer_matrix() {
    for spins in 2..=12 {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let a = ising1d_partition(spins, 0.37, boundary, PartitionMethod::Enumeration).unwrap();
            let b = ising1d_partition(spins, 0.37, boundary, PartitionMethod::TransferMatrix).unwrap();
            assert!((a - b).abs() / a < 1e-13, "spins={spins}");
        }
    }
}

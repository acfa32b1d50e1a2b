//! Second-quantized lattices: occupation bases, hardcore bosons and Jordan–Wigner fermions.
//!
//! Site 1 is the leftmost (most significant) bit, so |110⟩ has sites 1 and 2 filled.
//! The fermion string runs over lower-numbered sites: c_j† carries (−1)^{#occupied k<j}.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::linalg::{self, r, CMatrix, CVector, C64, ZERO};
use crate::{QmError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    HardcoreBoson,
    Fermion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Ordered bit-string basis for an n-site lattice, optionally fixed particle number.
#[derive(Clone, Debug)]
pub struct OccupationBasis {
    n_sites: usize,
    sector: Option<usize>,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl OccupationBasis {
    pub fn full(n_sites: usize) -> Result<Self> {
        Self::build(n_sites, None)
    }

    /// Fixed popcount m, bit strings in lexicographic order.
    pub fn sector(n_sites: usize, m: usize) -> Result<Self> {
        if m > n_sites {
            return Err(QmError::InvalidArgument(format!("{m} particles on {n_sites} sites")));
        }
        Self::build(n_sites, Some(m))
    }

    fn build(n_sites: usize, sector: Option<usize>) -> Result<Self> {
        if n_sites == 0 || n_sites > 24 {
            return Err(QmError::InvalidArgument(format!("n_sites {n_sites} outside 1..=24")));
        }
        let states: Vec<u64> = (0..(1u64 << n_sites))
            .filter(|s| sector.is_none_or(|m| s.count_ones() as usize == m))
            .collect();
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(OccupationBasis { n_sites, sector, states, index })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn particle_number(&self) -> Option<usize> {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, bits: u64) -> Option<usize> {
        self.index.get(&bits).copied()
    }

    pub fn label(&self, i: usize) -> String {
        bits_label(self.n_sites, self.states[i])
    }

    /// Basis vector for a bit-string label like "101".
    pub fn ket(&self, label: &str) -> Result<CVector> {
        let bits = parse_bits(self.n_sites, label)?;
        let i = self
            .index_of(bits)
            .ok_or_else(|| QmError::InvalidArgument(format!("{label} not in this basis")))?;
        let mut v = CVector::zeros(self.dim());
        v[i] = linalg::ONE;
        Ok(v)
    }
}

/// Sector dimensions C(n, m) for m = 0..=n.
pub fn sector_dims(n_sites: usize) -> Vec<usize> {
    (0..=n_sites)
        .map(|m| OccupationBasis::sector(n_sites, m).map(|b| b.dim()).unwrap_or(0))
        .collect()
}

pub fn bits_label(n: usize, bits: u64) -> String {
    (1..=n).map(|s| if occupied(n, bits, s) { '1' } else { '0' }).collect()
}

pub fn parse_bits(n: usize, label: &str) -> Result<u64> {
    if label.len() != n || !label.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(QmError::InvalidArgument(format!("{label:?} is not a {n}-site occupation")));
    }
    Ok(u64::from_str_radix(label, 2).expect("validated"))
}

#[inline]
fn site_bit(n: usize, site: usize) -> u64 {
    1u64 << (n - site)
}

#[inline]
fn occupied(n: usize, bits: u64, site: usize) -> bool {
    bits & site_bit(n, site) != 0
}

/// Number of occupied sites with index < site.
#[inline]
fn occupied_before(n: usize, bits: u64, site: usize) -> u32 {
    // sites 1..site-1 live in the bits above site's bit
    (bits >> (n - site + 1)).count_ones()
}

fn check_site(n: usize, site: usize) -> Result<()> {
    if site == 0 || site > n {
        return Err(QmError::InvalidArgument(format!("site {site} outside 1..={n}")));
    }
    Ok(())
}

/// a_site† on a basis ket: None when the site is already full.
pub fn create_bits(kind: Statistics, n: usize, site: usize, bits: u64) -> Option<(f64, u64)> {
    if occupied(n, bits, site) {
        return None;
    }
    let sign = match kind {
        Statistics::HardcoreBoson => 1.0,
        Statistics::Fermion => parity(occupied_before(n, bits, site)),
    };
    Some((sign, bits | site_bit(n, site)))
}

/// a_site on a basis ket: None when the site is empty.
pub fn annihilate_bits(kind: Statistics, n: usize, site: usize, bits: u64) -> Option<(f64, u64)> {
    if !occupied(n, bits, site) {
        return None;
    }
    let sign = match kind {
        Statistics::HardcoreBoson => 1.0,
        Statistics::Fermion => parity(occupied_before(n, bits, site)),
    };
    Some((sign, bits & !site_bit(n, site)))
}

#[inline]
fn parity(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Creation operator on the full 2ⁿ space.
pub fn creation_op(kind: Statistics, site: usize, n: usize) -> Result<CMatrix> {
    check_site(n, site)?;
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for s in 0..dim as u64 {
        if let Some((sign, t)) = create_bits(kind, n, site, s) {
            m[(t as usize, s as usize)] = r(sign);
        }
    }
    Ok(m)
}

pub fn annihilation_op(kind: Statistics, site: usize, n: usize) -> Result<CMatrix> {
    Ok(creation_op(kind, site, n)?.adjoint())
}

/// Applies a_site† to a full-space state vector; the zero vector is a valid result.
pub fn create(kind: Statistics, site: usize, n: usize, state: &CVector) -> Result<CVector> {
    check_site(n, site)?;
    if state.len() != 1 << n {
        return Err(QmError::Dimension("state is not on the full 2^n space".into()));
    }
    let mut out = CVector::zeros(state.len());
    for (s, &amp) in state.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        if let Some((sign, t)) = create_bits(kind, n, site, s as u64) {
            out[t as usize] += amp * sign;
        }
    }
    Ok(out)
}

/// n̂_site on the given basis (diagonal).
pub fn number_op(site: usize, basis: &OccupationBasis) -> Result<CMatrix> {
    let n = basis.n_sites;
    check_site(n, site)?;
    let d: Vec<f64> = basis.states.iter().map(|&s| if occupied(n, s, site) { 1.0 } else { 0.0 }).collect();
    Ok(linalg::diag_real(&d))
}

/// N̂ = Σ_j n̂_j on the given basis.
pub fn total_number(basis: &OccupationBasis) -> CMatrix {
    let d: Vec<f64> = basis.states.iter().map(|&s| s.count_ones() as f64).collect();
    linalg::diag_real(&d)
}

/// Nearest-neighbour bonds (i, i+1), plus (n, 1) on a ring of three or more sites.
pub fn bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && n > 2 {
        b.push((n, 1));
    }
    b
}

/// H = −Δ Σ_⟨ij⟩ (a_i†a_j + a_j†a_i) restricted to `basis`.
pub fn hopping_hamiltonian(delta: f64, boundary: Boundary, kind: Statistics, basis: &OccupationBasis) -> Result<CMatrix> {
    let n = basis.n_sites;
    if n < 2 {
        return Err(QmError::InvalidArgument("hopping needs at least two sites".into()));
    }
    let dim = basis.dim();
    let mut h = CMatrix::zeros(dim, dim);
    for (col, &s) in basis.states.iter().enumerate() {
        for &(i, j) in &bonds(n, boundary) {
            for (to, from) in [(i, j), (j, i)] {
                let Some((s1, mid)) = annihilate_bits(kind, n, from, s) else { continue };
                let Some((s2, t)) = create_bits(kind, n, to, mid) else { continue };
                let row = basis
                    .index_of(t)
                    .expect("hopping conserves particle number, so the target is in the sector");
                h[(row, col)] += r(-delta * s1 * s2);
            }
        }
    }
    Ok(h)
}

/// Single-particle momentum state (1/√N) Σ_j e^{i k_α j} a_j†|vac⟩ on the full 2^N space.
pub fn momentum_state(n: usize, alpha: i64) -> Result<CVector> {
    if n == 0 || n > 20 {
        return Err(QmError::InvalidArgument(format!("ring size {n} outside 1..=20")));
    }
    let k = 2.0 * PI * alpha as f64 / n as f64;
    let mut v = CVector::zeros(1 << n);
    let norm = 1.0 / (n as f64).sqrt();
    for j in 1..=n {
        v[site_bit(n, j) as usize] = C64::from_polar(norm, k * j as f64);
    }
    Ok(v)
}

/// Cyclic translation with T a_j† T† = a_{j−1}†, so T|k_α⟩ = e^{i k_α}|k_α⟩.
pub fn translation_op(n: usize) -> Result<CMatrix> {
    if n == 0 || n > 16 {
        return Err(QmError::InvalidArgument(format!("ring size {n} outside 1..=16")));
    }
    let dim = 1usize << n;
    let mask = (dim - 1) as u64;
    let mut t = CMatrix::zeros(dim, dim);
    for s in 0..dim as u64 {
        let shifted = ((s << 1) | (s >> (n - 1))) & mask;
        t[(shifted as usize, s as usize)] = linalg::ONE;
    }
    Ok(t)
}

/// Closed-form ring spectrum −2Δ cos(2πα/N), α = 0..N−1.
pub fn ring_dispersion(n: usize, delta: f64) -> Vec<f64> {
    (0..n).map(|a| -2.0 * delta * (2.0 * PI * a as f64 / n as f64).cos()).collect()
}

//! Hydrogen-like atoms in atomic units (a₀ = 1, E_h = 1, ħ = m_e = e = 1).

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::angular::{integrate_sphere, sph_harm};
use crate::numerics::{assoc_laguerre, integrate_adaptive, minimize, GaussLaguerre};
use crate::{QmError, Result};

/// Hartree energy in eV.
pub const HARTREE_EV: f64 = 27.211386;
/// Atomic unit of time in seconds.
pub const ATOMIC_TIME_S: f64 = 2.4188843e-17;
/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035999;
/// Speed of light in atomic units.
pub const C_AU: f64 = 1.0 / FINE_STRUCTURE;
/// Rydberg in Hartree.
pub const RYDBERG: f64 = 0.5;
/// Hyperfine splitting wavelength of the hydrogen ground state, in metres.
pub const HYPERFINE_21CM_M: f64 = 0.21106114;

/// Node count of the shared radial grid.
pub const RADIAL_NODES: usize = 200;

/// Shared Gauss–Laguerre radial grid.
pub fn radial_grid() -> &'static GaussLaguerre {
    static GRID: OnceLock<GaussLaguerre> = OnceLock::new();
    GRID.get_or_init(|| GaussLaguerre::new(RADIAL_NODES))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HydrogenLevel {
    pub n: u32,
    pub l: u32,
    pub z: f64,
}

impl HydrogenLevel {
    pub fn new(n: u32, l: u32, z: f64) -> Result<Self> {
        if n == 0 || l >= n {
            return Err(QmError::InvalidArgument(format!("need n ≥ 1 and l < n, got n={n}, l={l}")));
        }
        if z < 1.0 {
            return Err(QmError::InvalidArgument("Z must be at least 1".into()));
        }
        Ok(HydrogenLevel { n, l, z })
    }

    /// E = −Z²/(2n²) Hartree.
    pub fn energy(&self) -> f64 {
        -self.z * self.z / (2.0 * (self.n * self.n) as f64)
    }

    /// ℓ-summed degeneracy without spin.
    pub fn shell_degeneracy(&self) -> u32 {
        self.n * self.n
    }

    pub fn radial(&self) -> RadialFunction {
        RadialFunction::from_level(*self)
    }
}

/// E_n = −1/(2n²) for hydrogen.
pub fn energy(n: u32) -> f64 {
    -0.5 / (n * n) as f64
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[derive(Clone, Copy, Debug)]
pub struct RadialFunction {
    pub level: HydrogenLevel,
    norm: f64,
}

impl RadialFunction {
    pub fn new(n: u32, l: u32, z: f64) -> Result<Self> {
        Ok(Self::from_level(HydrogenLevel::new(n, l, z)?))
    }

    fn from_level(level: HydrogenLevel) -> Self {
        let (n, l, z) = (level.n, level.l, level.z);
        let k = 2.0 * z / n as f64;
        let norm = (k.powi(3) * factorial(n - l - 1) / (2.0 * n as f64 * factorial(n + l))).sqrt();
        RadialFunction { level, norm }
    }

    fn rho(&self, r: f64) -> f64 {
        2.0 * self.level.z * r / self.level.n as f64
    }

    /// R_{nℓ}(r).
    pub fn eval(&self, r: f64) -> f64 {
        let (n, l) = (self.level.n, self.level.l);
        let rho = self.rho(r);
        self.norm * rho.powi(l as i32) * (-rho / 2.0).exp() * assoc_laguerre((n - l - 1) as usize, (2 * l + 1) as f64, rho)
    }

    /// dR/dr, from L_k^{(α)}′ = −L_{k−1}^{(α+1)}.
    pub fn derivative(&self, r: f64) -> f64 {
        let (n, l) = (self.level.n, self.level.l);
        let k = (n - l - 1) as usize;
        let alpha = (2 * l + 1) as f64;
        let rho = self.rho(r);
        let lag = assoc_laguerre(k, alpha, rho);
        let dlag = if k == 0 { 0.0 } else { -assoc_laguerre(k - 1, alpha + 1.0, rho) };
        let e = (-rho / 2.0).exp();
        let pow_l = rho.powi(l as i32);
        let d_pow = if l == 0 { 0.0 } else { l as f64 * rho.powi(l as i32 - 1) };
        let drho = d_pow * e * lag + pow_l * e * (dlag - 0.5 * lag);
        self.norm * drho * 2.0 * self.level.z / n as f64
    }

    /// Decay length of R, so R·R′ tails are e^{−r/scale} with scale = n/(2Z).
    pub fn pair_scale(&self, other: &RadialFunction) -> f64 {
        1.0 / (self.level.z / self.level.n as f64 + other.level.z / other.level.n as f64)
    }

    /// ∫ R_a R_b r^{2+k} dr on the shared grid.
    pub fn matrix_element(&self, other: &RadialFunction, k: i32) -> f64 {
        radial_grid().integrate(|r| self.eval(r) * other.eval(r) * r.powi(2 + k), self.pair_scale(other))
    }

    /// ∫ R² r² dr.
    pub fn norm_integral(&self) -> f64 {
        self.matrix_element(self, 0)
    }
}

/// ⟨r^k⟩ for k ∈ {−2, −1, 1, 2} by quadrature.
pub fn hydrogen_expectation(n: u32, l: u32, z: f64, k: i32) -> Result<f64> {
    if ![-2, -1, 1, 2].contains(&k) {
        return Err(QmError::InvalidArgument(format!("power {k} not supported")));
    }
    let rf = RadialFunction::new(n, l, z)?;
    Ok(rf.matrix_element(&rf, k))
}

/// Closed-form ⟨r^k⟩ used as a quadrature oracle.
pub fn expectation_closed_form(n: u32, l: u32, z: f64, k: i32) -> Option<f64> {
    let (nf, lf) = (n as f64, l as f64);
    let ll = lf * (lf + 1.0);
    match k {
        1 => Some((3.0 * nf * nf - ll) / (2.0 * z)),
        2 => Some(nf * nf * (5.0 * nf * nf + 1.0 - 3.0 * ll) / (2.0 * z * z)),
        -1 => Some(z / (nf * nf)),
        -2 => Some(z * z / (nf.powi(3) * (lf + 0.5))),
        _ => None,
    }
}

/// argmax of r²R²(r).
pub fn most_probable_radius(n: u32, l: u32, z: f64) -> Result<f64> {
    let rf = RadialFunction::new(n, l, z)?;
    let p = |r: f64| r * r * rf.eval(r).powi(2);
    // coarse scan for the outermost global peak, then refine
    let hi = 4.0 * (n * n) as f64 / z + 10.0;
    let steps = 4000;
    let (mut best, mut best_r) = (f64::MIN, 0.0);
    for i in 1..steps {
        let r = hi * i as f64 / steps as f64;
        let v = p(r);
        if v > best {
            best = v;
            best_r = r;
        }
    }
    let h = hi / steps as f64;
    let (r, _) = minimize(|r| -p(r), (best_r - 2.0 * h).max(1e-12), best_r + 2.0 * h, 1e-12)?;
    Ok(r)
}

/// V_eff(r) = −Z/r + ℓ(ℓ+1)/(2r²).
pub fn effective_potential(l: u32, z: f64, r: f64) -> f64 {
    -z / r + (l * (l + 1)) as f64 / (2.0 * r * r)
}

/// (r_min, V_eff(r_min)); no minimum for ℓ = 0.
pub fn veff_minimum(l: u32, z: f64) -> Result<(f64, f64)> {
    if l == 0 {
        return Err(QmError::NoMinimum);
    }
    let guess = (l * (l + 1)) as f64 / z;
    minimize(|r| effective_potential(l, z, r), guess / 20.0, guess * 20.0, 1e-12)
}

/// (⟨T⟩, ⟨V⟩) by quadrature.
pub fn kinetic_potential(n: u32, l: u32, z: f64) -> Result<(f64, f64)> {
    let rf = RadialFunction::new(n, l, z)?;
    let ll = (l * (l + 1)) as f64;
    let scale = rf.pair_scale(&rf);
    let t = 0.5
        * radial_grid().integrate(
            |r| {
                let d = rf.derivative(r);
                let v = rf.eval(r);
                d * d * r * r + ll * v * v
            },
            scale,
        );
    let v = -z * rf.matrix_element(&rf, -1);
    Ok((t, v))
}

/// ⟨n₁ℓ₁m₁|z|n₂ℓ₂m₂⟩: radial quadrature times the angular integral of cos θ.
pub fn dipole_z(a: (u32, u32, i32), b: (u32, u32, i32), z: f64) -> Result<f64> {
    let ra = RadialFunction::new(a.0, a.1, z)?;
    let rb = RadialFunction::new(b.0, b.1, z)?;
    let radial = ra.matrix_element(&rb, 1);
    Ok(radial * angular_cos(a.1, a.2, b.1, b.2)?)
}

/// ⟨ℓ₁m₁|cos θ|ℓ₂m₂⟩ by sphere quadrature.
pub fn angular_cos(l1: u32, m1: i32, l2: u32, m2: i32) -> Result<f64> {
    sph_harm(l1, m1, 0.0, 0.0)?;
    sph_harm(l2, m2, 0.0, 0.0)?;
    let v = integrate_sphere(
        |t, p| sph_harm(l1, m1, t, p).unwrap().conj() * sph_harm(l2, m2, t, p).unwrap() * t.cos(),
        24,
        24,
    );
    Ok(v.re)
}

/// Hydrogen 2p → 1s spontaneous emission.
#[derive(Clone, Copy, Debug)]
pub struct LymanAlpha {
    /// |⟨1s|z|2p₀⟩| in a₀.
    pub dipole: f64,
    /// Transition energy in Hartree.
    pub omega: f64,
    pub energy_ev: f64,
    /// Einstein A in s⁻¹.
    pub rate: f64,
    /// Lifetime in s.
    pub lifetime: f64,
}

/// A = 4ω³|d|²/(3c³) in atomic units, converted to SI.
pub fn lyman_alpha_rate() -> Result<LymanAlpha> {
    let d = dipole_z((1, 0, 0), (2, 1, 0), 1.0)?.abs();
    let omega = energy(2) - energy(1);
    let a_au = 4.0 * omega.powi(3) * d * d / (3.0 * C_AU.powi(3));
    let rate = a_au / ATOMIC_TIME_S;
    Ok(LymanAlpha { dipole: d, omega, energy_ev: omega * HARTREE_EV, rate, lifetime: 1.0 / rate })
}

/// Sommerfeld fine-structure shift −(α²Ry/n³)(1/(j+½) − 3/(4n)), in Hartree, for Z = 1.
pub fn fine_structure(n: u32, j: f64) -> Result<f64> {
    if n == 0 || j < 0.5 || j > n as f64 - 0.5 || ((2.0 * j) as i64) % 2 != 1 {
        return Err(QmError::InvalidArgument(format!("invalid (n, j) = ({n}, {j})")));
    }
    let nf = n as f64;
    Ok(-(FINE_STRUCTURE.powi(2) * RYDBERG / nf.powi(3)) * (1.0 / (j + 0.5) - 3.0 / (4.0 * nf)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SuddenKind {
    /// Oscillator frequency jumps ω₁ → ω₂ (same mass).
    HoFrequency { w1: f64, w2: f64 },
    /// Hydrogenic 1s with nuclear charge jumping Z₁ → Z₂.
    HydrogenicZ { z1: f64, z2: f64 },
}

/// Probability of staying in the new ground state, |⟨0_new|0_old⟩|², closed form.
pub fn sudden_overlap(kind: SuddenKind) -> Result<f64> {
    match kind {
        SuddenKind::HoFrequency { w1, w2 } => {
            if !(w1 > 0.0 && w2 > 0.0) {
                return Err(QmError::InvalidArgument("frequencies must be positive".into()));
            }
            Ok(2.0 * (w1 * w2).sqrt() / (w1 + w2))
        }
        SuddenKind::HydrogenicZ { z1, z2 } => {
            if !(z1 > 0.0 && z2 > 0.0) {
                return Err(QmError::InvalidArgument("charges must be positive".into()));
            }
            let amp = 8.0 * (z1 * z2).powf(1.5) / (z1 + z2).powi(3);
            Ok(amp * amp)
        }
    }
}

/// Same probability from direct overlap quadrature of the two ground-state wavefunctions.
pub fn sudden_overlap_quadrature(kind: SuddenKind) -> Result<f64> {
    match kind {
        SuddenKind::HoFrequency { w1, w2 } => {
            let g = |w: f64, x: f64| (w / PI).powf(0.25) * (-w * x * x / 2.0).exp();
            let half = 40.0 / w1.min(w2).sqrt();
            let amp = integrate_adaptive(|x| g(w1, x) * g(w2, x), -half, half, 1e-14)?;
            Ok(amp * amp)
        }
        SuddenKind::HydrogenicZ { z1, z2 } => {
            let a = RadialFunction::new(1, 0, z1.max(1.0))?;
            let b = RadialFunction::new(1, 0, z2.max(1.0))?;
            let amp = a.matrix_element(&b, 0);
            Ok(amp * amp)
        }
    }
}

/// 4ω₁ω₂/(ω₁+ω₂)², the squared form sometimes quoted for the oscillator case.
/// It equals the true probability for a two-dimensional isotropic oscillator.
pub fn ho_sudden_squared_form(w1: f64, w2: f64) -> f64 {
    4.0 * w1 * w2 / (w1 + w2).powi(2)
}

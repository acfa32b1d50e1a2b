//! Quadrature, root finding, 1D minimization and ODE stepping.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{QmError, Result};

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// ∫_a^b f with an n-point Gauss–Legendre rule.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).map(|(&xi, &wi)| wi * f(mid + h * xi)).sum::<f64>() * h
}

/// Gauss–Laguerre rule for ∫₀^∞ e^{−x} g(x) dx.
///
/// `scaled_weights` holds w_i·e^{x_i}, so ∫₀^∞ f(x) dx ≈ Σ W_i f(x_i) when f
/// already carries the exponential tail. Weights are built in log form to
/// stay finite for large node counts.
#[derive(Clone, Debug)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        // Golub–Welsch eigenvalues as starting points, then Newton polish
        let jac = DMatrix::<f64>::from_fn(n, n, |i, j| {
            if i == j {
                2.0 * i as f64 + 1.0
            } else if i + 1 == j || j + 1 == i {
                (i.max(j)) as f64
            } else {
                0.0
            }
        });
        let mut start: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
        start.sort_by(f64::total_cmp);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut scaled = Vec::with_capacity(n);
        for &x0 in &start {
            let mut x = x0;
            for _ in 0..50 {
                let (ln, lnm1) = laguerre_pair(n, x);
                let d = n as f64 * (ln - lnm1) / x;
                let dx = ln / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let (lnp1, _) = laguerre_pair(n + 1, x);
            let log_w = x.ln() - 2.0 * ((n as f64 + 1.0) * lnp1.abs()).ln();
            nodes.push(x);
            weights.push(log_w.exp());
            scaled.push((log_w + x).exp());
        }
        GaussLaguerre { nodes, weights, scaled_weights: scaled }
    }

    /// ∫₀^∞ f(r) dr with nodes stretched by `scale`; exact when f = poly·e^{−r/scale}.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, scale: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(&x, &w)| {
                let v = f(scale * x);
                if v == 0.0 {
                    0.0
                } else {
                    w * v
                }
            })
            .sum::<f64>()
            * scale
    }
}

/// (L_n(x), L_{n−1}(x)) by the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 - x) * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Generalized Laguerre L_k^{(α)}(x).
pub fn assoc_laguerre(k: usize, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = 1.0 + alpha - x;
    for i in 1..k {
        let fi = i as f64;
        let p2 = ((2.0 * fi + 1.0 + alpha - x) * p1 - (fi + alpha) * p0) / (fi + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

const GK_X: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WK[7] * fc;
    let mut g = GK_WG[3] * fc;
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        k += GK_WK[i] * s;
        if i % 2 == 1 {
            g += GK_WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) to absolute tolerance `tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut stack = vec![(a, b, tol)];
    let mut total = 0.0;
    let mut evals = 0usize;
    while let Some((lo, hi, t)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        evals += 1;
        if err <= t || (hi - lo).abs() < 1e-13 * (1.0 + lo.abs()) {
            total += v;
        } else if evals > 200_000 {
            return Err(QmError::Convergence("adaptive quadrature".into()));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t));
            stack.push((mid, hi, 0.5 * t));
        }
    }
    Ok(total)
}

/// Brent's root finder on a sign-changing bracket.
pub fn brent_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(QmError::InvalidArgument(format!(
            "root not bracketed on [{a}, {b}]"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(QmError::Convergence("brent_root".into()))
}

/// Brent minimization (golden section with parabolic steps) on [a, b].
///
/// Returns (x*, f(x*)). Fails with `NoMinimum` when the minimum sits on the bracket edge.
pub fn minimize(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    const CGOLD: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let (lo, hi) = (a, b);
    let mut x = a + CGOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut done = false;
    for _ in 0..500 {
        let xm = 0.5 * (a + b);
        let tol1 = tol * x.abs().max(1.0) * 0.5 + 1e-300;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            done = true;
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    if !done {
        return Err(QmError::Convergence("minimize".into()));
    }
    let edge = 1e3 * tol * (hi - lo).abs().max(1.0);
    if (x - lo).abs() < edge || (hi - x).abs() < edge {
        return Err(QmError::NoMinimum);
    }
    Ok((x, fx))
}

/// One classical RK4 step for dy/dt = f(y).
pub fn rk4_step(f: &impl Fn(f64) -> f64, y: f64, h: f64) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let v = integrate_gl(|x| x.powi(6) - 2.0 * x * x, -1.0, 1.0, 8);
        assert!((v - (2.0 / 7.0 - 4.0 / 3.0)).abs() < 1e-14);
        let (_, w) = gauss_legendre(31);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn laguerre_moments() {
        let gl = GaussLaguerre::new(200);
        assert!((gl.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        // ∫ x^k e^{-x} = k!
        let mut fact = 1.0;
        for k in 0..12 {
            if k > 0 {
                fact *= k as f64;
            }
            let v = gl.integrate(|x| x.powi(k) * (-x).exp(), 1.0);
            assert!((v / fact - 1.0).abs() < 1e-11, "k={k} v={v}");
        }
        // scale stretch: ∫ r² e^{-2r} dr = 1/4
        let v = gl.integrate(|r| r * r * (-2.0 * r).exp(), 0.5);
        assert!((v - 0.25).abs() < 1e-13);
    }

    #[test]
    fn assoc_laguerre_known() {
        // L_2^{(1)}(x) = (x² − 6x + 6)/2
        for &x in &[0.0, 0.5, 3.0] {
            assert!((assoc_laguerre(2, 1.0, x) - 0.5 * (x * x - 6.0 * x + 6.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_sqrt_edge() {
        let v = integrate_adaptive(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn brent_finds_cos_root() {
        let x = brent_root(f64::cos, 1.0, 2.0, 1e-15).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!(brent_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn minimize_quadratic_and_rejects_monotone() {
        let (x, f) = minimize(|x| (x - 2.0).powi(2) + 1.0, 0.0, 5.0, 1e-10).unwrap();
        assert!((x - 2.0).abs() < 1e-8);
        assert!((f - 1.0).abs() < 1e-14);
        assert!(matches!(minimize(|x| x, 0.0, 1.0, 1e-10), Err(QmError::NoMinimum)));
    }

    #[test]
    fn rk4_exponential() {
        let mut y = 1.0;
        for _ in 0..1000 {
            y = rk4_step(&|y| -y, y, 1e-3);
        }
        assert!((y - (-1f64).exp()).abs() < 1e-13);
    }
}

//! The oscillatory profile `gamma_N(xi) = (1/N) int_0^N e(xi t^2 / 2) dt`
//! `= int_0^1 e(c u^2) du` with `c = xi N^2 / 2`.

use std::sync::LazyLock;

use num_complex::Complex64;

use super::fresnel::fresnel_with_phase;
use crate::error::{domain, Error, Result};
use crate::sum::{e, ComplexSum};

/// Panels allowed per evaluation before reporting non-convergence.
pub const PANEL_BUDGET: usize = 1 << 26;
pub const MIN_TOL: f64 = 1e-12;
const MAX_DEPTH: u32 = 16;

struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// 15-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration.
static GL15: LazyLock<GaussLegendre> = LazyLock::new(|| gauss_legendre(15));

fn gauss_legendre(n: usize) -> GaussLegendre {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussLegendre { nodes, weights }
}

fn gl15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    let rule = &*GL15;
    let mut s = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        s += f(m + r * x) * *w;
    }
    s * r
}

/// Adaptive bisection on one panel with absolute tolerance `tol * (b - a)`.
fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    whole: Complex64,
    depth: u32,
    panels: &mut usize,
) -> Result<Complex64> {
    *panels += 1;
    if *panels > PANEL_BUDGET {
        return Err(Error::Numeric("gamma_N quadrature panel budget exceeded".into()));
    }
    let m = 0.5 * (a + b);
    let left = gl15(f, a, m);
    let right = gl15(f, m, b);
    let split = left + right;
    if (split - whole).norm() <= tol * (b - a) || depth >= MAX_DEPTH {
        return Ok(split);
    }
    Ok(adaptive(f, a, m, tol, left, depth + 1, panels)?
        + adaptive(f, m, b, tol, right, depth + 1, panels)?)
}

fn check(theta: f64, n: u64, tol: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(domain!("gamma_N: non-finite frequency"));
    }
    if n == 0 {
        return Err(domain!("gamma_N: N must be positive"));
    }
    if tol.is_nan() || tol < MIN_TOL {
        return Err(domain!("gamma_N: tolerance {tol} below {MIN_TOL}"));
    }
    Ok(())
}

/// Quadrature in `u = t / N`: panels `[u_k, u_{k+1}]` with `c u_k^2 = k/2`, so each
/// covers half an oscillation; Gauss-Legendre 15 with adaptive bisection.
pub fn gamma_n(theta: f64, n: u64, tol: f64) -> Result<Complex64> {
    check(theta, n, tol)?;
    let c = 0.5 * theta * (n as f64) * (n as f64);
    if c == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let half_turns = (2.0 * c.abs()).ceil();
    if half_turns > PANEL_BUDGET as f64 {
        return Err(Error::Numeric(format!(
            "gamma_N: {half_turns} panels exceed the budget"
        )));
    }
    let k_max = half_turns as u64;
    let mut panels = 0usize;
    let mut total = ComplexSum::new();
    for k in 0..k_max {
        let a = (k as f64 / (2.0 * c.abs())).sqrt();
        let b = (((k + 1) as f64) / (2.0 * c.abs())).sqrt().min(1.0);
        if a >= b {
            break;
        }
        // Local variable v = u - u_k: e(c u^2) = (-1)^k e(c v (2 u_k + v)).
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let f = |v: f64| e(c * v * (2.0 * a + v)) * sign;
        let whole = gl15(&f, 0.0, b - a);
        total.add(adaptive(&f, 0.0, b - a, tol, whole, 0, &mut panels)?);
    }
    Ok(total.value())
}

/// The same value as the Fourier transform of `h(t) = chi_[0,1](t) / (2 sqrt t)`
/// at `-N^2 xi / 2`: uniform panels in `t`, with `t = u^2` on the first panel to
/// absorb the endpoint singularity.
pub fn gamma_n_density(theta: f64, n: u64, tol: f64) -> Result<Complex64> {
    check(theta, n, tol)?;
    let kappa = 0.5 * theta * (n as f64) * (n as f64);
    if kappa == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // Half-oscillation panels t_k = k / (2|kappa|), so e(kappa t_k) = (-1)^k exactly.
    let w = (0.5 / kappa.abs()).min(1.0);
    let count = (1.0 / w).ceil();
    if count > PANEL_BUDGET as f64 {
        return Err(Error::Numeric(format!("gamma_N: {count} panels exceed the budget")));
    }
    let count = count as u64;
    let mut panels = 0usize;
    let mut total = ComplexSum::new();
    let head = |u: f64| e(kappa * u * u);
    let whole = gl15(&head, 0.0, w.sqrt());
    total.add(adaptive(&head, 0.0, w.sqrt(), tol, whole, 0, &mut panels)?);
    for k in 1..count {
        let a = k as f64 * w;
        let b = ((k + 1) as f64 * w).min(1.0);
        if a >= b {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let f = |v: f64| e(kappa * v) * (0.5 * sign / (a + v).sqrt());
        let whole = gl15(&f, 0.0, b - a);
        total.add(adaptive(&f, 0.0, b - a, tol, whole, 0, &mut panels)?);
    }
    Ok(total.value())
}

/// Closed form through Fresnel integrals: with `z = 2 sqrt|c|`,
/// `gamma = (C(z) + i sgn(c) S(z)) / z`.
pub fn gamma_n_fresnel(theta: f64, n: u64) -> Complex64 {
    let nf = n as f64;
    let c = 0.5 * theta * nf * nf;
    if c == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let z = 2.0 * c.abs().sqrt();
    if z < 1e-4 {
        // int_0^1 e(c u^2) du = 1 + 2 pi i c / 3 - (2 pi c)^2 / 10 + O(c^3)
        let w = std::f64::consts::TAU * c;
        return Complex64::new(1.0 - w * w / 10.0, w / 3.0 - w * w * w / 42.0);
    }
    let a = c.abs();
    let (fc, fs) = fresnel_with_phase(z, a - a.floor());
    Complex64::new(fc, c.signum() * fs) / z
}

/// `min(1, N^{-1} |xi|^{-1/2})`.
pub fn gamma_bound(theta: f64, n: u64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        (1.0 / (n as f64 * theta.abs().sqrt())).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_oracle(c: f64) -> Complex64 {
        // int_0^1 exp(2 pi i c u^2) du = sum_k (2 pi i c)^k / (k! (2k+1))
        let w = Complex64::new(0.0, std::f64::consts::TAU * c);
        let mut p = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..120 {
            s += p / (2 * k + 1) as f64;
            p = p * w / (k + 1) as f64;
        }
        s
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let f = |x: f64| Complex64::new(x.powi(28), 0.0);
        let v = gl15(&f, 0.0, 1.0);
        assert!((v.re - 1.0 / 29.0).abs() < 1e-15);
    }

    #[test]
    fn zero_frequency_is_one() {
        assert_eq!(gamma_n(0.0, 17, 1e-12).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(gamma_n_fresnel(0.0, 17), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn unit_case_matches_power_series() {
        // gamma_1(1) = int_0^1 e(t^2 / 2) dt
        let o = series_oracle(0.5);
        assert!((gamma_n(1.0, 1, 1e-12).unwrap() - o).norm() < 1e-13);
        assert!((gamma_n_fresnel(1.0, 1) - o).norm() < 1e-13);
        assert!((gamma_n_density(1.0, 1, 1e-12).unwrap() - o).norm() < 1e-12);
    }

    #[test]
    fn routes_agree_into_oscillatory_regime() {
        for &(theta, n) in &[(0.3, 5u64), (-0.013, 64), (0.5, 128), (1e-3, 1024), (-0.77, 300)] {
            let q = gamma_n(theta, n, 1e-12).unwrap();
            let f = gamma_n_fresnel(theta, n);
            let d = gamma_n_density(theta, n, 1e-12).unwrap();
            assert!((q - f).norm() < 1e-11, "theta={theta} n={n}");
            assert!((q - d).norm() < 2e-11, "theta={theta} n={n}");
            assert!(q.norm() <= gamma_bound(theta, n) + 1e-12);
        }
    }

    #[test]
    fn small_argument_branch() {
        for c in [1e-12, 3e-10, -2e-9] {
            let theta = 2.0 * c / 100.0;
            assert!((gamma_n_fresnel(theta, 10) - series_oracle(c)).norm() < 1e-14);
        }
    }

    #[test]
    fn tolerance_floor_enforced() {
        assert!(gamma_n(0.1, 4, 1e-13).is_err());
    }
}

//! Fresnel integrals `C(x) = int_0^x cos(pi t^2 / 2) dt`, `S(x)` likewise with sin.
//! Power series below `x = 1.5`, modified Lentz continued fraction above.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 400;
const XMIN: f64 = 1.5;

/// `(C(x), S(x))`.
pub fn fresnel(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let turns = 0.25 * ax * ax;
    let (c, s) = fresnel_with_phase(ax, turns - turns.floor());
    if x < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

/// Fresnel integrals at `ax >= 0`, with `frac(ax^2 / 4)` supplied by the caller
/// so large arguments keep an exact phase.
pub(crate) fn fresnel_with_phase(ax: f64, frac_turns: f64) -> (f64, f64) {
    if ax < FPMIN.sqrt() {
        return (ax, 0.0);
    }
    if ax <= XMIN {
        return series(ax);
    }
    let pix2 = PI * ax * ax;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 2..=MAXIT {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (a * d + b).inv();
        cc = b + a / cc;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() <= EPS {
            break;
        }
    }
    h *= Complex64::new(ax, -ax);
    let angle = std::f64::consts::TAU * frac_turns;
    let ph = Complex64::new(angle.cos(), angle.sin());
    let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - ph * h);
    (cs.re, cs.im)
}

fn series(ax: f64) -> (f64, f64) {
    let fact = FRAC_PI_2 * ax * ax;
    let (mut sum, mut sums, mut sumc) = (0.0f64, 0.0f64, ax);
    let mut sign = 1.0f64;
    let mut odd = true;
    let mut term = ax;
    let mut n = 3.0f64;
    for k in 1..=MAXIT {
        term *= fact / k as f64;
        sum += sign * term / n;
        let test = sum.abs() * EPS;
        if odd {
            sign = -sign;
            sums = sum;
            sum = sumc;
        } else {
            sumc = sum;
            sum = sums;
        }
        if term < test {
            break;
        }
        odd = !odd;
        n += 2.0;
    }
    (sumc, sums)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Term-by-term series of `int_0^x exp(i pi t^2 / 2) dt`.
    fn oracle(x: f64) -> (f64, f64) {
        let mut z = Complex64::new(0.0, 0.0);
        let w = Complex64::new(0.0, FRAC_PI_2 * x * x);
        let mut p = Complex64::new(x, 0.0);
        for k in 0..200 {
            z += p / (2 * k + 1) as f64;
            p = p * w / (k + 1) as f64;
        }
        (z.re, z.im)
    }

    #[test]
    fn matches_series_oracle() {
        // The oracle loses digits to cancellation as x grows.
        for i in 0..=60 {
            let x = i as f64 * 0.05;
            let tol = if x <= 2.0 { 1e-13 } else { 1e-11 };
            let (c, s) = fresnel(x);
            let (oc, os) = oracle(x);
            assert!((c - oc).abs() < tol && (s - os).abs() < tol, "x={x}");
        }
    }

    #[test]
    fn large_argument_limit() {
        let (c, s) = fresnel(1e4);
        assert!((c - 0.5).abs() < 1e-4 && (s - 0.5).abs() < 1e-4);
        let (c, s) = fresnel(-2.0);
        let (c2, s2) = fresnel(2.0);
        assert_eq!((c, s), (-c2, -s2));
    }
}

//! Exact frequencies and Dirichlet approximation of `2 xi` on `2T`.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{domain, Result};

/// Exact frequency `xi = num / den` reduced into `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Freq {
    num: u64,
    den: u64,
}

/// Largest denominator accepted, so `k^2 num` fits in `u128` for `k <= 2^32`.
pub const MAX_DEN: u64 = 1 << 62;

impl Freq {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 || den > MAX_DEN {
            return Err(domain!("frequency denominator {den} outside [1, 2^62]"));
        }
        let r = (num as i128).rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        Ok(Self {
            num: r / g,
            den: den / g,
        })
    }

    /// Nearest point of the `2^-62` lattice to `x` (mod 1).
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(domain!("frequency must be finite"));
        }
        let f = x - x.floor();
        let scaled = (f * MAX_DEN as f64).round() as u128 % MAX_DEN as u128;
        Self::new(scaled as i64, MAX_DEN)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Arc center `a/q` on `2T`: `gcd(a, q) = 1` and `0 <= a < 2q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedRational {
    pub a: u64,
    pub q: u64,
}

impl ReducedRational {
    pub fn to_f64(&self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

/// `2 xi - a/q` taken modulo 2 into `[-1, 1)`, from exact integers.
pub fn arc_offset(xi: Freq, r: ReducedRational) -> f64 {
    let (x, d) = (2 * xi.num as i128, xi.den as i128);
    let q = r.q as i128;
    let dq = d * q;
    let n = (x * q - r.a as i128 * d).rem_euclid(2 * dq);
    let n = if n >= dq { n - 2 * dq } else { n };
    n as f64 / dq as f64
}

fn satisfies(x: i128, d: i128, a: i128, q: i128, n: u64) -> bool {
    (x * q - a * d).abs() * 4 * n as i128 <= d
}

/// Reduced `a/q` with `q <= 4N` and `|2 xi - a/q| <= 1/(4Nq)`, with the smallest
/// such `q`: continued-fraction convergents of `2 xi`, then a linear scan of the
/// range `[2N, q_c)` where non-convergent solutions can live.
pub fn dirichlet_approx(xi: Freq, n: u64) -> Result<ReducedRational> {
    if n == 0 || n > 1 << 40 {
        return Err(domain!("dirichlet_approx: N = {n} outside [1, 2^40]"));
    }
    let (x, d) = (2 * xi.num as i128, xi.den as i128);
    let q_max = 4 * n as i128;
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let (mut num, mut den) = (x, d);
    let mut found = None;
    while den != 0 {
        let t = num.div_euclid(den);
        let (h2, k2) = (t * h1 + h0, t * k1 + k0);
        if k2 > q_max {
            break;
        }
        if satisfies(x, d, h2, k2, n) {
            found = Some((h2, k2));
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        (num, den) = (den, num - t * den);
    }
    let (mut a, mut q) = match found {
        Some(v) => v,
        None => exhaustive(x, d, n, q_max).ok_or_else(|| {
            crate::error::Error::Numeric("dirichlet_approx: no approximant found".into())
        })?,
    };
    if q > 2 * n as i128 {
        for cand in (2 * n as i128)..q {
            let ca = (x * cand + d / 2).div_euclid(d);
            if satisfies(x, d, ca, cand, n) {
                (a, q) = (ca, cand);
                break;
            }
        }
    }
    let g = gcd(a.unsigned_abs() as u64, q as u64) as i128;
    let (a, q) = (a / g, q / g);
    Ok(ReducedRational {
        a: a.rem_euclid(2 * q) as u64,
        q: q as u64,
    })
}

fn exhaustive(x: i128, d: i128, n: u64, q_max: i128) -> Option<(i128, i128)> {
    (1..=q_max).find_map(|q| {
        let a = (x * q + d / 2).div_euclid(d);
        satisfies(x, d, a, q, n).then_some((a, q))
    })
}

/// Smallest-`q` approximant by scanning every `q <= 4N`.
pub fn dirichlet_approx_exhaustive(xi: Freq, n: u64) -> Result<ReducedRational> {
    if n == 0 || n > 1 << 20 {
        return Err(domain!("exhaustive search needs N in [1, 2^20]"));
    }
    let (x, d) = (2 * xi.num as i128, xi.den as i128);
    let (a, q) = exhaustive(x, d, n, 4 * n as i128)
        .ok_or_else(|| crate::error::Error::Numeric("no approximant".into()))?;
    let g = gcd(a.unsigned_abs() as u64, q as u64) as i128;
    let (a, q) = (a / g, q / g);
    Ok(ReducedRational {
        a: a.rem_euclid(2 * q) as u64,
        q: q as u64,
    })
}

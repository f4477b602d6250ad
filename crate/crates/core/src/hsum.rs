//! The exponential sums `H`, `H0`, `H1`, `H~`, `H_j`, their support sets, and
//! the logarithmic average `S_J(x) = sum_{q<=J} |H(q,x)| / q`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{count_sqrts, factorize, gcd, jacobi_odd, primes_up_to, reduce};
use crate::error::{domain, Result};
use crate::gauss::{g0_closed, g_closed};
use crate::sum::{unit_root, ComplexSum, KahanSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HKind {
    H,
    H0,
    H1,
    HTilde,
    /// Restriction of `H~` to `a = j (mod 8)`.
    Hj(u8),
}

/// Coefficients `c_a` and period `P` with `H(q, x) = sum_a c_a e(a x / P)`.
pub fn h_coefficients(kind: HKind, q: u64) -> Result<(u64, Vec<Complex64>)> {
    if q == 0 {
        return Err(domain!("H sums need q >= 1"));
    }
    if let HKind::Hj(j) = kind {
        if j > 7 {
            return Err(domain!("H_j needs j in 0..8, got {j}"));
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok(match kind {
        HKind::H => {
            let p = 2 * q;
            let mut c = vec![zero; p as usize];
            for a in 1..p {
                if gcd(a, q) == 1 {
                    c[a as usize] = g0_closed(a, q);
                }
            }
            (p, c)
        }
        HKind::H0 => (q, (0..q).map(|a| g_closed(a, q)).collect()),
        HKind::H1 => {
            let mut c = vec![zero; q as usize];
            for a in 1..=q {
                if gcd(a, q) == 1 {
                    c[(a % q) as usize] += g_closed(a % q, q);
                }
            }
            (q, c)
        }
        HKind::HTilde | HKind::Hj(_) => {
            let p = 2 * q;
            let odd = q >> q.trailing_zeros();
            let scale = 1.0 / (q as f64).sqrt();
            let mut c = vec![zero; p as usize];
            for a in 1..p {
                if let HKind::Hj(j) = kind {
                    if a % 8 != u64::from(j) {
                        continue;
                    }
                }
                let s = jacobi_odd(a % odd, odd);
                if gcd(a, odd) == 1 {
                    c[a as usize] = Complex64::new(scale * f64::from(s), 0.0);
                }
            }
            (p, c)
        }
    })
}

/// Direct evaluation of the displayed sum (compensated accumulation).
pub fn h_sum(kind: HKind, q: u64, x: i64) -> Result<Complex64> {
    let (p, c) = h_coefficients(kind, q)?;
    Ok(eval_coefficients(p, &c, x))
}

pub(crate) fn eval_coefficients(p: u64, c: &[Complex64], x: i64) -> Complex64 {
    let xr = reduce(x, p) as u128;
    let mut s = ComplexSum::new();
    for (a, &ca) in c.iter().enumerate() {
        if ca.re != 0.0 || ca.im != 0.0 {
            let r = (a as u128 * xr) % p as u128;
            s.add(ca * unit_root(r as i128, p));
        }
    }
    s.value()
}

/// All values `H(q, x)` for `x` in one period, by an inverse FFT of the coefficients.
pub fn h_profile(kind: HKind, q: u64) -> Result<Vec<Complex64>> {
    let (_, mut c) = h_coefficients(kind, q)?;
    crate::fft::inverse(&mut c);
    Ok(c)
}

/// `H0(q, x) = r_q(-x)`.
pub fn h0_fast(q: u64, x: i64) -> Result<u64> {
    if q == 0 {
        return Err(domain!("h0_fast needs q >= 1"));
    }
    count_sqrts(-(reduce(x, q) as i64), q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportFlavor {
    Plain,
    Tilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSupportVerdict {
    pub in_support: bool,
    pub bound: f64,
}

fn divides(d: u64, x: i64) -> bool {
    (x as i128).rem_euclid(d as i128) == 0
}

/// Membership of `x` in the support set of `H(q, .)` (plain) or `H~(q, .)` (tilde)
/// together with the modulus bound on that set.
pub fn support_verdict(q: u64, x: i64, flavor: SupportFlavor) -> Result<HSupportVerdict> {
    let f = factorize(q)?;
    let (_, b) = f.odd_part();
    let mut bound = 1.0f64;
    for (p, k) in f.odd_factors() {
        let pk = p.pow(k);
        let ok = (k % 2 == 0 && divides(pk, x)) || (divides(pk / p, x) && !divides(pk, x));
        if !ok {
            return Ok(HSupportVerdict {
                in_support: false,
                bound: 0.0,
            });
        }
        bound *= p.pow(k / 2) as f64;
    }
    let two = match flavor {
        SupportFlavor::Plain => 1u64 << b.saturating_sub(2),
        SupportFlavor::Tilde => 1u64 << (b + 1),
    };
    if !divides(two, x) {
        return Ok(HSupportVerdict {
            in_support: false,
            bound: 0.0,
        });
    }
    bound *= 2f64.powf(f64::from(b) / 2.0);
    if flavor == SupportFlavor::Tilde {
        bound *= 2.0;
    }
    Ok(HSupportVerdict {
        in_support: true,
        bound,
    })
}

/// Moduli `q <= J` whose factorization pattern admits `H(q, x) != 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorSet {
    pub x: i64,
    pub j: u64,
    pub members: Vec<u64>,
}

impl DivisorSet {
    pub fn contains(&self, q: u64) -> bool {
        self.members.binary_search(&q).is_ok()
    }
}

pub const DIVISOR_SET_MAX_J: u64 = 1 << 26;

pub fn divisor_set(x: i64, j: u64) -> Result<DivisorSet> {
    if j == 0 || j > DIVISOR_SET_MAX_J {
        return Err(domain!("divisor_set: J = {j} outside [1, 2^26]"));
    }
    if x == i64::MIN {
        return Err(domain!("divisor_set: x = i64::MIN has no absolute value"));
    }
    // Exponent of each prime in x; `None` encodes x = 0.
    let fx = if x == 0 {
        None
    } else {
        Some(factorize(x.unsigned_abs())?)
    };
    let allowed = |p: u64, k: u32| -> bool {
        match &fx {
            None => p == 2 || k % 2 == 0,
            Some(f) => {
                let l = f.exponent(p);
                if p == 2 {
                    k <= l + 2
                } else {
                    (k % 2 == 0 && k <= l) || k == l + 1
                }
            }
        }
    };
    let primes = primes_up_to(j);
    let mut members = Vec::new();
    enumerate(0, 1, &primes, j, &allowed, &mut members);
    members.sort_unstable();
    Ok(DivisorSet { x, j, members })
}

fn enumerate(
    start: usize,
    v: u64,
    primes: &[u64],
    j: u64,
    allowed: &dyn Fn(u64, u32) -> bool,
    out: &mut Vec<u64>,
) {
    out.push(v);
    for (i, &p) in primes.iter().enumerate().skip(start) {
        if v * p > j {
            break;
        }
        let (mut pk, mut k) = (p, 1u32);
        while v * pk <= j {
            if allowed(p, k) {
                enumerate(i + 1, v * pk, primes, j, allowed, out);
            }
            pk *= p;
            k += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SMethod {
    Direct,
    SupportFiltered,
}

/// `S_J(x) = sum_{q=1}^{J} |H(q, x)| / q`.
pub fn log_average_s(x: i64, j: u64, method: SMethod) -> Result<f64> {
    if j == 0 {
        return Err(domain!("log_average_s needs J >= 1"));
    }
    let qs: Vec<u64> = match method {
        SMethod::Direct => (1..=j).collect(),
        SMethod::SupportFiltered => divisor_set(x, j)?.members,
    };
    let mut s = KahanSum::new();
    for q in qs {
        s.add(h_sum(HKind::H, q, x)?.norm() / q as f64);
    }
    Ok(s.value())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub j: u64,
    pub argmax: i64,
    pub max: f64,
}

/// Candidate `x` values built from small prime powers: every 13-smooth
/// integer up to `limit`, together with `0`.
pub fn adversarial_candidates(limit: u64) -> Vec<i64> {
    const SMALL: [u64; 6] = [2, 3, 5, 7, 11, 13];
    let mut out = vec![0u64, 1];
    let mut frontier = vec![1u64];
    for p in SMALL {
        let mut next = Vec::new();
        for &v in &frontier {
            let mut w = v;
            loop {
                next.push(w);
                match w.checked_mul(p) {
                    Some(m) if m <= limit => w = m,
                    _ => break,
                }
            }
        }
        frontier = next;
    }
    out.extend(frontier);
    out.sort_unstable();
    out.dedup();
    out.into_iter().map(|v| v as i64).collect()
}

const SCAN_BLOCK: u64 = 32;

/// Maximum of `S_J` over `[x_lo, x_hi]` (plus adversarial candidates) for
/// every `J` in `js`, sharing one accumulation pass over `q`.
/// Ties resolve to the smallest `x`.
pub fn scan_s_profile(js: &[u64], x_lo: i64, x_hi: i64, adversarial: bool) -> Result<Vec<ScanPoint>> {
    if x_lo > x_hi {
        return Err(domain!("scan window [{x_lo}, {x_hi}] is empty"));
    }
    if js.is_empty() || js.windows(2).any(|w| w[0] >= w[1]) || js[0] == 0 {
        return Err(domain!("scan needs a strictly increasing list of J >= 1"));
    }
    let j_max = *js.last().expect("nonempty");
    let mut xs: Vec<i64> = (x_lo..=x_hi).collect();
    if adversarial {
        let limit = j_max.saturating_mul(j_max);
        xs.extend(
            adversarial_candidates(limit)
                .into_iter()
                .filter(|&x| x < x_lo || x > x_hi),
        );
        xs.sort_unstable();
    }
    let mut s = vec![0.0f64; xs.len()];
    let mut out = Vec::with_capacity(js.len());
    let mut q0 = 1u64;
    for &jb in js {
        while q0 <= jb {
            let q1 = (q0 + SCAN_BLOCK - 1).min(jb);
            accumulate_block(q0, q1, &xs, &mut s)?;
            q0 = q1 + 1;
        }
        let (mut best_x, mut best) = (xs[0], s[0]);
        for (&x, &v) in xs.iter().zip(&s).skip(1) {
            if v > best {
                best = v;
                best_x = x;
            }
        }
        out.push(ScanPoint {
            j: jb,
            argmax: best_x,
            max: best,
        });
    }
    Ok(out)
}

/// Adds `|H(q, x)| / q` for `q in [q0, q1]` into `s`; per-x order is q-ascending
/// regardless of the thread count.
fn accumulate_block(q0: u64, q1: u64, xs: &[i64], s: &mut [f64]) -> Result<()> {
    let profiles: Vec<Vec<f64>> = (q0..=q1)
        .into_par_iter()
        .map(|q| {
            h_profile(HKind::H, q).map(|p| p.into_iter().map(|z| z.norm() / q as f64).collect())
        })
        .collect::<Result<_>>()?;
    const CHUNK: usize = 4096;
    s.par_chunks_mut(CHUNK)
        .zip(xs.par_chunks(CHUNK))
        .for_each(|(sc, xc)| {
            for (qi, prof) in profiles.iter().enumerate() {
                let period = 2 * (q0 + qi as u64);
                for (sv, &x) in sc.iter_mut().zip(xc) {
                    *sv += prof[reduce(x, period) as usize];
                }
            }
        });
    Ok(())
}

/// `(argmax x, max S_J)` over the window, optionally with adversarial candidates.
pub fn scan_max_s(j: u64, x_lo: i64, x_hi: i64, adversarial: bool) -> Result<(i64, f64)> {
    let p = scan_s_profile(&[j], x_lo, x_hi, adversarial)?[0];
    Ok((p.argmax, p.max))
}

//! Exact 64-bit integer arithmetic: factorization, Jacobi symbols, the unit
//! `eps_m`, quadratic residues and square-root counting modulo `q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const MAX_N: u64 = (1 << 63) - 1;
const TRIAL_LIMIT: u64 = 1_000_000;
/// Two-power moduli up to this exponent are counted by enumeration.
pub const TWO_POWER_ENUM_MAX: u32 = 20;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Canonical representative of `x` modulo `q` in `[0, q)`.
#[inline]
pub fn reduce(x: i64, q: u64) -> u64 {
    (x as i128).rem_euclid(q as i128) as u64
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime-power decomposition `n = prod p^k` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Exponent of `p` in `n` (0 when absent).
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(r, _)| r == p)
            .map_or(0, |&(_, k)| k)
    }

    /// Splits `n = 2^b * odd`, returning `(odd, b)`.
    pub fn odd_part(&self) -> (u64, u32) {
        let b = self.exponent(2);
        (self.n >> b, b)
    }

    /// Odd prime powers `(p, k)` only.
    pub fn odd_factors(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().copied().filter(|&(p, _)| p != 2)
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n > MAX_N {
        return Err(domain!("factorize: n = {n} outside [1, 2^63-1]"));
    }
    let mut primes = Vec::new();
    let mut m = n;
    let tz = m.trailing_zeros();
    if tz > 0 {
        primes.extend(std::iter::repeat_n(2, tz as usize));
        m >>= tz;
    }
    let mut d = 3u64;
    while d <= TRIAL_LIMIT && d * d <= m {
        while m % d == 0 {
            primes.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 {
        split_large(m, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((r, k)) if *r == p => *k += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let d = pollard_brent(m);
    split_large(d, out);
    split_large(m / d, out);
}

/// A nontrivial factor of the odd composite `n` (no factor below the trial limit).
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let (mut x, mut ys, mut g) = (0u64, 0u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Primes `<= n` by a simple sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &s)| s.then_some(i as u64))
        .collect()
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(domain!("jacobi: modulus {n} is even"));
    }
    Ok(jacobi_odd(reduce(a, n), n))
}

/// Jacobi symbol for `0 <= a` and odd `n`; binary reciprocity loop.
pub fn jacobi_odd(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The unit `eps_m`: 1 when `m = 1 mod 4`, `i` when `m = 3 mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitEps {
    One,
    I,
}

impl UnitEps {
    pub fn value(self) -> Complex64 {
        match self {
            UnitEps::One => Complex64::new(1.0, 0.0),
            UnitEps::I => Complex64::new(0.0, 1.0),
        }
    }

    pub fn inv(self) -> Complex64 {
        match self {
            UnitEps::One => Complex64::new(1.0, 0.0),
            UnitEps::I => Complex64::new(0.0, -1.0),
        }
    }
}

pub fn epsilon(m: i64) -> Result<UnitEps> {
    match m.rem_euclid(4) {
        1 => Ok(UnitEps::One),
        3 => Ok(UnitEps::I),
        _ => Err(domain!("epsilon: argument {m} is even")),
    }
}

/// `x` is a nonzero square modulo the odd prime `p`.
pub fn is_qr_prime(x: u64, p: u64) -> bool {
    jacobi_odd(x % p, p) == 1
}

/// Exhaustive count of `l in [0, q)` with `l^2 = x (mod q)`.
pub fn count_sqrts_bruteforce(x: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(domain!("count_sqrts_bruteforce: q = 0"));
    }
    let x = reduce(x, q);
    Ok((0..q).filter(|&l| mul_mod(l, l, q) == x).count() as u64)
}

/// `r_q(x)` for every `x in [0, q)` by one pass of exhaustive squaring.
pub fn sqrt_count_table(q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(domain!("sqrt_count_table: q = 0"));
    }
    let mut t = vec![0u64; q as usize];
    for l in 0..q {
        t[mul_mod(l, l, q) as usize] += 1;
    }
    Ok(t)
}

/// `r_q(x)` assembled over the factorization of `q` (CRT multiplicativity).
pub fn count_sqrts(x: i64, q: u64) -> Result<u64> {
    let f = factorize(q)?;
    let x = reduce(x, q);
    let mut total = 1u64;
    for &(p, k) in f.factors() {
        let pk = p.pow(k);
        let c = if p == 2 {
            count_sqrts_two_power(x % pk, k)
        } else {
            count_sqrts_prime_power(x % pk, p, k)
        };
        if c == 0 {
            return Ok(0);
        }
        total *= c;
    }
    Ok(total)
}

/// Three-case count of square roots of `x` modulo `p^k`, `p` odd.
pub fn count_sqrts_prime_power(x: u64, p: u64, k: u32) -> u64 {
    let pk = p.pow(k);
    let mut x = x % pk;
    if x == 0 {
        return p.pow(k / 2);
    }
    let mut n = 0u32;
    while x % p == 0 {
        x /= p;
        n += 1;
    }
    if n % 2 == 0 && is_qr_prime(x, p) {
        2 * p.pow(n / 2)
    } else {
        0
    }
}

/// Square roots of `x` modulo `2^b`: enumeration up to `2^20`, 2-adic cases above.
pub fn count_sqrts_two_power(x: u64, b: u32) -> u64 {
    if b <= TWO_POWER_ENUM_MAX {
        let m = 1u64 << b;
        let x = x & (m - 1);
        (0..m).filter(|&l| l.wrapping_mul(l) & (m - 1) == x).count() as u64
    } else {
        count_sqrts_two_power_hensel(x, b)
    }
}

/// 2-adic case analysis: write `x = 2^n x'` with `x'` odd and `e = b - n`.
pub fn count_sqrts_two_power_hensel(x: u64, b: u32) -> u64 {
    let m = if b >= 64 { u64::MAX } else { (1u64 << b) - 1 };
    let x = x & m;
    if x == 0 {
        return 1 << (b / 2);
    }
    let n = x.trailing_zeros();
    if n % 2 == 1 {
        return 0;
    }
    let odd = x >> n;
    let s = match b - n {
        1 => 1,
        2 if odd % 4 == 1 => 2,
        e if e >= 3 && odd % 8 == 1 => 4,
        _ => return 0,
    };
    s << (n / 2)
}

/// Predicted `|r_{p^k}(x) - r_{p^{k-1}}(x)|` for odd `p` and `k >= 2`.
pub fn sqrt_count_jump(x: u64, p: u64, k: u32) -> u64 {
    assert!(k >= 2, "jump needs k >= 2");
    let pk = p.pow(k);
    let x = x % pk;
    if x == 0 {
        return if k % 2 == 0 {
            p.pow(k / 2) - p.pow(k / 2 - 1)
        } else {
            0
        };
    }
    let pk1 = p.pow(k - 1);
    if x % pk1 == 0 {
        // x = p^{k-1} x' with x' a unit since p^k does not divide x
        return p.pow((k - 1) / 2);
    }
    0
}

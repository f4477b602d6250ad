//! Normalized quadratic Gauss sums
//! `G(a,q) = (1/q) sum_{n<q} e(a n^2 / q)` and `G0(a,q) = G(a, 2q)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{epsilon, gcd, jacobi_odd, mul_mod};
use crate::error::{domain, Result};
use crate::sum::{unit_root, ComplexSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaussMethod {
    Direct,
    Closed,
}

fn check_q(q: u64) -> Result<()> {
    if q == 0 || q > (1 << 62) {
        return Err(domain!("Gauss sum modulus q = {q} outside [1, 2^62]"));
    }
    Ok(())
}

pub fn gauss_g(a: i64, q: u64, method: GaussMethod) -> Result<Complex64> {
    check_q(q)?;
    let a = crate::arith::reduce(a, q);
    Ok(match method {
        GaussMethod::Direct => g_direct(a, q),
        GaussMethod::Closed => g_closed(a, q),
    })
}

pub fn gauss_g0(a: i64, q: u64, method: GaussMethod) -> Result<Complex64> {
    check_q(q)?;
    let a = crate::arith::reduce(a, 2 * q);
    Ok(match method {
        GaussMethod::Direct => g_direct(a, 2 * q),
        GaussMethod::Closed => g0_closed(a, q),
    })
}

/// Direct compensated sum; `a` already reduced modulo `q`.
pub(crate) fn g_direct(a: u64, q: u64) -> Complex64 {
    let mut s = ComplexSum::new();
    for n in 0..q {
        let r = mul_mod(a, mul_mod(n, n, q), q);
        s.add(unit_root(r as i128, q));
    }
    s.value() / q as f64
}

/// Direct sums `G(a, m)` for every `a in [0, m)`, `m <= 2^31`, with root and
/// square tables shared across `a`. Bit-identical to [`GaussMethod::Direct`].
pub fn gauss_direct_table(m: u64) -> Result<Vec<Complex64>> {
    if m == 0 || m > 1 << 31 {
        return Err(domain!("direct table modulus {m} outside [1, 2^31]"));
    }
    let roots: Vec<Complex64> = (0..m).map(|r| unit_root(r as i128, m)).collect();
    let squares: Vec<u64> = (0..m).map(|n| n * n % m).collect();
    Ok((0..m)
        .map(|a| {
            let mut s = ComplexSum::new();
            for &sq in &squares {
                s.add(roots[(a * sq % m) as usize]);
            }
            s.value() / m as f64
        })
        .collect())
}

/// Closed form after removing `gcd(a, q)`.
pub(crate) fn g_closed(a: u64, q: u64) -> Complex64 {
    let g = gcd(a % q, q);
    let (a, q) = ((a % q) / g, q / g);
    g_closed_coprime(a, q)
}

fn g_closed_coprime(a: u64, q: u64) -> Complex64 {
    let scale = 1.0 / (q as f64).sqrt();
    if q % 4 == 2 {
        Complex64::new(0.0, 0.0)
    } else if q % 2 == 1 {
        let eps = epsilon((q % 4) as i64).expect("odd modulus").value();
        eps * scale * f64::from(jacobi_odd(a, q))
    } else {
        // 4 | q and a odd
        let eps_inv = epsilon((a % 4) as i64).expect("odd numerator").inv();
        Complex64::new(1.0, 1.0) * eps_inv * scale * f64::from(jacobi_odd(q % a, a))
    }
}

/// Three-branch closed form for `G0`; non-coprime input falls back to `G(a, 2q)`.
pub(crate) fn g0_closed(a: u64, q: u64) -> Complex64 {
    let a = a % (2 * q);
    if gcd(a, q) != 1 {
        return g_closed(a, 2 * q);
    }
    let scale = 1.0 / (q as f64).sqrt();
    if a % 2 == 1 && q % 2 == 1 {
        Complex64::new(0.0, 0.0)
    } else if a % 2 == 0 {
        // (q-1)^2/16 with q odd: reduce (q-1)^2 modulo 16 exactly.
        let t = ((q - 1) % 16) * ((q - 1) % 16) % 16;
        let sym = jacobi_odd(mul_mod(2, a, q), q);
        unit_root(t as i128, 16) * scale * f64::from(sym)
    } else {
        let sym = jacobi_odd(q % a, a);
        unit_root((a % 8) as i128, 8) * scale * f64::from(sym)
    }
}

/// `G0(a, q)` for every `a in [0, 2q)` via the closed form.
pub fn g0_table(q: u64) -> Vec<Complex64> {
    (0..2 * q).map(|a| g0_closed(a, q)).collect()
}

/// `G(a, q)` for every `a in [0, q)` via the closed form.
pub fn g_table(q: u64) -> Vec<Complex64> {
    (0..q).map(|a| g_closed(a, q)).collect()
}

/// Expected `|G0(a,q)|` for coprime `(a, q)`: zero when `a q` is odd, else `q^{-1/2}`.
pub fn g0_modulus_class(a: u64, q: u64) -> Option<f64> {
    if gcd(a, q) != 1 {
        return None;
    }
    Some(if a % 2 == 1 && q % 2 == 1 {
        0.0
    } else {
        1.0 / (q as f64).sqrt()
    })
}

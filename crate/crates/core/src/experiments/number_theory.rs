//! Exhaustive audits of the Gauss-sum closed forms, the square-root counts and
//! the identities and support lemmas of the `H` family.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    count_sqrts, count_sqrts_prime_power, epsilon, gcd, is_qr_prime, jacobi, primes_up_to,
    sqrt_count_jump, sqrt_count_table,
};
use crate::error::Result;
use crate::gauss::{g0_modulus_class, gauss_direct_table, gauss_g, gauss_g0, GaussMethod};
use crate::hsum::{divisor_set, h_profile, h_sum, support_verdict, HKind, SupportFlavor};
use crate::report::{Check, ExperimentReport};
use crate::sum::e;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaussCheckParams {
    pub q_max: u64,
    /// Largest odd modulus in the product identity.
    pub product_q_max: u64,
    pub tol: f64,
}

impl Default for GaussCheckParams {
    fn default() -> Self {
        Self {
            q_max: 500,
            product_q_max: 99,
            tol: 1e-10,
        }
    }
}

/// Per-`q` maxima over `a in [0, 2q)`.
struct GaussRow {
    q: u64,
    err_g: f64,
    err_g0: f64,
    class_mismatch: u64,
    err_g0_g2q: f64,
    err_g_double: f64,
}

fn gauss_row(q: u64, tol: f64) -> Result<GaussRow> {
    let tq = gauss_direct_table(q)?;
    let t2q = gauss_direct_table(2 * q)?;
    let mut r = GaussRow {
        q,
        err_g: 0.0,
        err_g0: 0.0,
        class_mismatch: 0,
        err_g0_g2q: 0.0,
        err_g_double: 0.0,
    };
    for a in 0..2 * q {
        let gd = tq[(a % q) as usize];
        // G0 by its definition (1/2q) sum_{n < 2q} e(a n^2 / 2q), the same sum as G(a, 2q).
        let g0d = t2q[a as usize];
        let g0c = gauss_g0(a as i64, q, GaussMethod::Closed)?;
        r.err_g = r.err_g.max((gd - gauss_g(a as i64, q, GaussMethod::Closed)?).norm());
        r.err_g0 = r.err_g0.max((g0d - g0c).norm());
        // Closed forms of G0(a, q) and G(a, 2q) are separate code paths.
        let g2qc = gauss_g(a as i64, 2 * q, GaussMethod::Closed)?;
        r.err_g0_g2q = r.err_g0_g2q.max((g0c - g2qc).norm());
        r.err_g_double = r.err_g_double.max((t2q[(2 * a % (2 * q)) as usize] - gd).norm());
        if let Some(m) = g0_modulus_class(a, q) {
            if (g0d.norm() - m).abs() > tol {
                r.class_mismatch += 1;
            }
        }
    }
    Ok(r)
}

/// Largest defect of `G(a1,q1) G(a2,q2) = e_{q1} e_{q2} e_{q1 q2}^{-1} (q1/q2)(q2/q1) G(a1 q2 + a2 q1, q1 q2)`
/// over odd coprime `q1 < q2 <= q_max` and a few coprime `a_j` each. The right side is summed directly.
pub fn gauss_product_defect(q_max: u64) -> Result<f64> {
    let odd: Vec<u64> = (1..=q_max).filter(|q| q % 2 == 1).collect();
    let pairs: Vec<(u64, u64)> = odd
        .iter()
        .flat_map(|&a| odd.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a < b && gcd(a, b) == 1)
        .collect();
    let sample = |q: u64| -> Vec<u64> {
        let units: Vec<u64> = (1..=q).filter(|&a| gcd(a, q) == 1).collect();
        let mut s: Vec<u64> = units.iter().take(2).copied().collect();
        s.extend(units.last());
        s.dedup();
        s
    };
    let defects: Vec<f64> = pairs
        .par_iter()
        .map(|&(q1, q2)| -> Result<f64> {
            let unit = epsilon(q1 as i64)?.value() * epsilon(q2 as i64)?.value()
                * epsilon((q1 * q2) as i64)?.inv()
                * f64::from(jacobi(q1 as i64, q2)? * jacobi(q2 as i64, q1)?);
            let mut worst = 0.0f64;
            for a1 in sample(q1) {
                for a2 in sample(q2) {
                    let lhs = gauss_g(a1 as i64, q1, GaussMethod::Closed)?
                        * gauss_g(a2 as i64, q2, GaussMethod::Closed)?;
                    let arg = (a1 * q2 + a2 * q1) as i64;
                    let rhs = unit * gauss_g(arg, q1 * q2, GaussMethod::Direct)?;
                    worst = worst.max((lhs - rhs).norm());
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

pub fn run_gauss_check(p: &GaussCheckParams) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(
        "gauss-check",
        p,
        &["q", "max_err_g", "max_err_g0", "class_mismatches", "max_err_g0_vs_g2q", "max_err_g_2a_2q"],
    )?;
    let rows: Vec<GaussRow> = (1..=p.q_max)
        .into_par_iter()
        .map(|q| gauss_row(q, p.tol))
        .collect::<Result<_>>()?;
    let mut worst = [0.0f64; 4];
    let mut mismatches = 0u64;
    for r in &rows {
        rep.push_row(vec![
            r.q as f64,
            r.err_g,
            r.err_g0,
            r.class_mismatch as f64,
            r.err_g0_g2q,
            r.err_g_double,
        ]);
        for (w, v) in worst.iter_mut().zip([r.err_g, r.err_g0, r.err_g0_g2q, r.err_g_double]) {
            *w = w.max(v);
        }
        mismatches += r.class_mismatch;
    }
    rep.check(Check::at_most("closed_vs_direct_g", worst[0], p.tol));
    rep.check(Check::at_most("closed_vs_direct_g0", worst[1], p.tol));
    rep.check(Check::equals("g0_modulus_class_mismatches", mismatches as f64, 0.0));
    rep.check(Check::at_most("g0_equals_g_2q", worst[2], p.tol));
    rep.check(Check::at_most("g_2a_2q_equals_g", worst[3], p.tol));
    rep.check(Check::at_most(
        "product_identity",
        gauss_product_defect(p.product_q_max)?,
        p.tol,
    ));
    rep.meta("direct_summation", "compensated, exact modular phase");
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HsumParams {
    /// Square-root counts are compared with exhaustive tables for `q <= sqrt_q_max`.
    pub sqrt_q_max: u64,
    /// Prime-power case tables use odd `p <= prime_max`, `k <= k_max`, every `x in [0, p^k)`.
    pub prime_max: u64,
    pub k_max: u32,
    /// `QR(p^k)` reduction uses odd `p <= qr_prime_max`, `k <= 4`.
    pub qr_prime_max: u64,
    pub h_eq_h1_q_max: u64,
    pub h0_q_max: u64,
    pub multiplicative_q_max: u64,
    pub shift_q_max: u64,
    pub support_q_max: u64,
    pub divisor_q_max: u64,
    pub divisor_x_max: i64,
    pub tol: f64,
}

impl Default for HsumParams {
    fn default() -> Self {
        Self {
            sqrt_q_max: 3000,
            prime_max: 50,
            k_max: 6,
            qr_prime_max: 100,
            h_eq_h1_q_max: 999,
            h0_q_max: 1000,
            multiplicative_q_max: 99,
            shift_q_max: 256,
            support_q_max: 300,
            divisor_q_max: 200,
            divisor_x_max: 500,
            tol: 1e-9,
        }
    }
}

/// `QR(p^k)` reduction is audited for `k <= QR_K_MAX`.
const QR_K_MAX: u32 = 4;

/// Inverse of an odd `p` modulo `2^64`.
fn inverse_mod_2_64(p: u64) -> u64 {
    let mut inv = p;
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
    }
    inv
}

/// Exhaustive `r_{p^k}(x)` over the class `x = c (mod p)`. With `y = (x - c)/p`
/// written as `y = row + m col`, `m = p^{k-2}`, the count sits at `row * cols + col`,
/// or at `row` alone when every column of a row holds the same count.
pub(crate) struct ClassTable {
    m: u64,
    cols: u64,
    row_uniform: bool,
    counts: Vec<u32>,
}

impl ClassTable {
    pub(crate) fn get(&self, y: u64) -> u32 {
        if self.row_uniform {
            self.counts[(y % self.m) as usize]
        } else {
            self.counts[((y % self.m) * self.cols + y / self.m) as usize]
        }
    }
}

pub(crate) fn sqrt_count_class(p: u64, k: u32, c: u64) -> ClassTable {
    let pk = p.pow(k);
    let (m, cols) = if k == 1 { (1, 1) } else { (pk / (p * p), p) };
    let row_uniform = c != 0;
    let mut t = ClassTable {
        m,
        cols,
        row_uniform,
        counts: vec![0u32; if row_uniform { m } else { m * cols } as usize],
    };
    // l and p^k - l have the same square, so for c != 0 the root classes r and
    // p - r fill identical tables and only one is enumerated.
    let (root, w) = if c == 0 {
        (Some(0), 1)
    } else {
        ((1..p).find(|r| r * r % p == c), 2)
    };
    let Some(r) = root else {
        return t;
    };
    if k == 1 {
        t.counts[0] = w;
        return t;
    }
    // l = r + p (i0 + m j): (l + p^{k-1})^2 = l^2 + p^{k-1} (2r mod p) (mod p^k),
    // so the p values of j share a row and step the column by 2r mod p. For
    // c != 0 that step is a unit and the p values visit every column once.
    let pinv = inverse_mod_2_64(p);
    let step = 2 * p * p % pk;
    let mut sq = r * r % pk;
    let mut d = (2 * p * r + p * p) % pk;
    for _ in 0..m {
        // sq = c (mod p), so the division is exact.
        let y = (sq - c).wrapping_mul(pinv);
        if row_uniform {
            t.counts[(y % m) as usize] += w;
        } else {
            t.counts[((y % m) * cols + y / m) as usize] += w * p as u32;
        }
        sq += d;
        if sq >= pk {
            sq -= pk;
        }
        d += step;
        if d >= pk {
            d -= pk;
        }
    }
    t
}

/// Mismatches `(case formula, jump formula, QR reduction)` over all `x in [0, p^k)`.
fn prime_power_mismatches(p: u64, k: u32, rx: bool, qr: bool) -> (u64, u64, u64) {
    let (mut bad_rx, mut bad_jump, mut bad_qr) = (0, 0, 0);
    let jump = rx && k >= 2;
    let closed = |x: u64| {
        let j = if jump { sqrt_count_jump(x, p, k) } else { 0 };
        (count_sqrts_prime_power(x, p, k), j)
    };
    for c in 0..p {
        let t = sqrt_count_class(p, k, c);
        let prev = jump.then(|| sqrt_count_class(p, k - 1, c));
        // For a unit x both closed forms read only x mod p; evaluate them at c.
        let (unit_want, unit_jump) = closed(c);
        let residue = is_qr_prime(c, p);
        for row in 0..t.m {
            let pv = prev.as_ref().map_or(0, |pt| u64::from(pt.get(row)));
            let mut tally = |v: u64, want: u64, want_jump: u64, times: u64| {
                if rx {
                    bad_rx += times * u64::from(v != want);
                }
                if jump {
                    bad_jump += times * u64::from(v.abs_diff(pv) != want_jump);
                }
            };
            if t.row_uniform {
                let v = u64::from(t.counts[row as usize]);
                tally(v, unit_want, unit_jump, t.cols);
                if qr {
                    bad_qr += t.cols * u64::from((v > 0) != residue);
                }
                continue;
            }
            let counts = &t.counts[(row * t.cols) as usize..][..t.cols as usize];
            // x = p (row + m col). For row != 0 the valuation of x and its unit
            // part mod p do not depend on col, and the closed forms read nothing else.
            let shared = (row != 0).then(|| closed(p * row));
            for (col, &v) in counts.iter().enumerate() {
                let (want, want_jump) = shared.unwrap_or_else(|| closed(p * t.m * col as u64));
                tally(u64::from(v), want, want_jump, 1);
            }
        }
    }
    (bad_rx, bad_jump, bad_qr)
}

/// Square-root counting audit: CRT assembly against exhaustive squaring, the
/// prime-power case formula, the jump formula between `p^{k-1}` and `p^k`, the
/// reduction of `QR(p^k)` to `QR(p)`, and `sum_x r_q(x) = q`.
pub fn sqrt_count_audit(p: &HsumParams) -> Result<Vec<Check>> {
    let bad_crt: u64 = (1..=p.sqrt_q_max)
        .into_par_iter()
        .map(|q| -> Result<u64> {
            let t = sqrt_count_table(q)?;
            let mut bad = u64::from(t.iter().sum::<u64>() != q);
            for (x, &c) in t.iter().enumerate() {
                bad += u64::from(count_sqrts(x as i64, q)? != c);
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let mut cases = Vec::new();
    for pr in primes_up_to(p.prime_max.max(p.qr_prime_max)).into_iter().filter(|&x| x > 2) {
        let rx_range = pr <= p.prime_max;
        let k_top = if rx_range { p.k_max.max(QR_K_MAX) } else { QR_K_MAX };
        for k in 1..=k_top {
            cases.push((pr, k, rx_range && k <= p.k_max, pr <= p.qr_prime_max && k <= QR_K_MAX));
        }
    }
    // Sequential: the largest class tables hold p^{k-1} counters each.
    let (mut bad_rx, mut bad_jump, mut bad_qr) = (0, 0, 0);
    for (pr, k, rx, qr) in cases {
        let (a, b, c) = prime_power_mismatches(pr, k, rx, qr);
        bad_rx += a;
        bad_jump += b;
        bad_qr += c;
    }
    Ok(vec![
        Check::equals("count_sqrts_vs_exhaustive_mismatches", bad_crt as f64, 0.0),
        Check::equals("prime_power_formula_mismatches", bad_rx as f64, 0.0),
        Check::equals("jump_formula_mismatches", bad_jump as f64, 0.0),
        Check::equals("qr_reduction_mismatches", bad_qr as f64, 0.0),
    ])
}

fn max_defect<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Largest `|H(q,x) - H1(q,x)|` over odd `3 <= q <= q_max`, `x in [0, 2q)`,
/// plus a pointwise direct-sum spot check of both profiles.
fn h_eq_h1_defect(q_max: u64) -> Result<f64> {
    let qs: Vec<u64> = (3..=q_max).step_by(2).collect();
    let v: Vec<f64> = qs
        .par_iter()
        .map(|&q| -> Result<f64> {
            let h = h_profile(HKind::H, q)?;
            let h1 = h_profile(HKind::H1, q)?;
            let mut d = max_defect((0..2 * q as usize).map(|x| (h[x] - h1[x % q as usize]).norm()));
            for x in [0i64, 1, q as i64 - 1] {
                d = d.max((h_sum(HKind::H, q, x)? - h[x as usize]).norm());
                d = d.max((h_sum(HKind::H1, q, x)? - h1[x as usize]).norm());
            }
            Ok(d)
        })
        .collect::<Result<_>>()?;
    Ok(max_defect(v))
}

/// Largest distance of `H0(q, x)` from the integer `r_q(-x)` over `q <= q_max`.
fn h0_defect(q_max: u64) -> Result<f64> {
    let v: Vec<f64> = (1..=q_max)
        .into_par_iter()
        .map(|q| -> Result<f64> {
            let h0 = h_profile(HKind::H0, q)?;
            let t = sqrt_count_table(q)?;
            Ok(max_defect((0..q as usize).map(|x| {
                let r = t[(q as usize - x) % q as usize] as f64;
                (h0[x] - Complex64::new(r, 0.0)).norm()
            })))
        })
        .collect::<Result<_>>()?;
    Ok(max_defect(v))
}

/// Largest `| |H1(q1 q2, x)| - |H1(q1, x)| |H1(q2, x)| |` over odd coprime `3 <= q1 < q2 <= q_max`.
fn multiplicative_defect(q_max: u64) -> Result<f64> {
    let odd: Vec<u64> = (3..=q_max).step_by(2).collect();
    let pairs: Vec<(u64, u64)> = odd
        .iter()
        .flat_map(|&a| odd.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a < b && gcd(a, b) == 1)
        .collect();
    let v: Vec<f64> = pairs
        .par_iter()
        .map(|&(q1, q2)| -> Result<f64> {
            let (p1, p2, p12) = (
                h_profile(HKind::H1, q1)?,
                h_profile(HKind::H1, q2)?,
                h_profile(HKind::H1, q1 * q2)?,
            );
            Ok(max_defect((0..(q1 * q2) as usize).map(|x| {
                (p12[x].norm() - p1[x % q1 as usize].norm() * p2[x % q2 as usize].norm()).abs()
            })))
        })
        .collect::<Result<_>>()?;
    Ok(max_defect(v))
}

/// `H(q, x + 2q) = H(q, x)` bit for bit, by direct summation.
fn periodicity_exact(q_max: u64) -> Result<bool> {
    for q in 1..=q_max {
        for x in 0..2 * q as i64 {
            if h_sum(HKind::H, q, x)? != h_sum(HKind::H, q, x + 2 * q as i64)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Default)]
struct ShiftDefects {
    sum_odd: f64,
    mod4: f64,
    mod8: f64,
    h_in_h1357: f64,
    tilde_vanish: f64,
    tilde_bound: f64,
    tilde_identity: f64,
}

/// Identities of `H~` and `H_j` for one even `q`, all `x in [0, 2q)`.
fn shift_defects(q: u64, tol: f64) -> Result<ShiftDefects> {
    let p = 2 * q as usize;
    let b = q.trailing_zeros();
    let odd = q >> b;
    let t = h_profile(HKind::HTilde, q)?;
    let hj: Vec<Vec<Complex64>> = (0..8u8)
        .map(|j| h_profile(HKind::Hj(j), q))
        .collect::<Result<_>>()?;
    let h = h_profile(HKind::H, q)?;
    let ht = |x: usize| t[x % p];
    let i = Complex64::new(0.0, 1.0);
    let sgn = |even: bool| if even { 1.0 } else { -1.0 };
    let s_odd = sgn((odd - 1) / 2 % 2 == 0);
    let s_b = sgn(b % 2 == 0);
    let mut d = ShiftDefects::default();
    for x in 0..p {
        let odd_sum = hj[1][x] + hj[3][x] + hj[5][x] + hj[7][x];
        let a0 = ht(x) - ht(x + q as usize);
        d.sum_odd = d.sum_odd.max((odd_sum - 0.5 * a0).norm());
        if q % 2 == 0 {
            let half = q as usize / 2;
            let a1 = ht(x + half) - ht(x + 3 * half);
            let h15 = 0.25 * a0 + a1 / (4.0 * i);
            let h37 = 0.25 * a0 - a1 / (4.0 * i);
            d.mod4 = d
                .mod4
                .max((hj[1][x] + hj[5][x] - h15).norm())
                .max((hj[3][x] + hj[7][x] - h37).norm());
            let rhs = e(1.0 / 8.0) * hj[1][x]
                + s_b * s_odd * e(3.0 / 8.0) * hj[3][x]
                + s_b * e(5.0 / 8.0) * hj[5][x]
                + s_odd * e(7.0 / 8.0) * hj[7][x];
            d.h_in_h1357 = d.h_in_h1357.max((h[x] - rhs).norm());
        }
        if q % 4 == 0 {
            let qq = q as usize / 4;
            let c1 = ht(x + qq) - ht(x + 5 * qq);
            let c3 = ht(x + 3 * qq) - ht(x + 7 * qq);
            let m15 = e(-1.0 / 8.0) * (0.25 * c1 + c3 / (4.0 * i));
            let m37 = e(-3.0 / 8.0) * (0.25 * c1 - c3 / (4.0 * i));
            d.mod8 = d
                .mod8
                .max((hj[1][x] - hj[5][x] - m15).norm())
                .max((hj[3][x] - hj[7][x] - m37).norm());
        }
        // The vanishing lemma needs a nontrivial odd part.
        if odd >= 3 {
            let v = support_verdict(q, x as i64, SupportFlavor::Tilde)?;
            if v.in_support {
                d.tilde_bound = d.tilde_bound.max(t[x].norm() - v.bound - tol);
            } else {
                d.tilde_vanish = d.tilde_vanish.max(t[x].norm());
            }
        }
    }
    if odd >= 3 {
        let step = 1usize << (b + 1);
        let hq = h_profile(HKind::H, odd)?;
        let eps_inv = epsilon(odd as i64)?.inv();
        let scale = 2f64.powf(f64::from(b) / 2.0 + 1.0);
        for xp in 0..(p / step) {
            let rhs = eps_inv * scale * hq[xp % (2 * odd as usize)];
            d.tilde_identity = d.tilde_identity.max((t[xp * step] - rhs).norm());
        }
    }
    Ok(d)
}

struct SupportDefects {
    vanish: f64,
    bound_excess: f64,
    sqrt_excess: f64,
}

fn support_defects(q_max: u64) -> Result<SupportDefects> {
    let v: Vec<SupportDefects> = (1..=q_max)
        .into_par_iter()
        .map(|q| -> Result<SupportDefects> {
            let mut d = SupportDefects {
                vanish: 0.0,
                bound_excess: f64::NEG_INFINITY,
                sqrt_excess: f64::NEG_INFINITY,
            };
            for x in 0..2 * q as i64 {
                let h = h_sum(HKind::H, q, x)?.norm();
                let v = support_verdict(q, x, SupportFlavor::Plain)?;
                if v.in_support {
                    d.bound_excess = d.bound_excess.max(h - v.bound);
                } else {
                    d.vanish = d.vanish.max(h);
                }
                d.sqrt_excess = d.sqrt_excess.max(h - (q as f64).sqrt());
            }
            Ok(d)
        })
        .collect::<Result<_>>()?;
    Ok(v.into_iter().fold(
        SupportDefects {
            vanish: 0.0,
            bound_excess: f64::NEG_INFINITY,
            sqrt_excess: f64::NEG_INFINITY,
        },
        |a, b| SupportDefects {
            vanish: a.vanish.max(b.vanish),
            bound_excess: a.bound_excess.max(b.bound_excess),
            sqrt_excess: a.sqrt_excess.max(b.sqrt_excess),
        },
    ))
}

/// Counts `(x, q)` where `divisor_set` disagrees with the support pattern, or
/// omits a modulus with `|H(q, x)| > tol` found by direct summation.
fn divisor_set_disagreements(q_max: u64, x_max: i64, tol: f64) -> Result<u64> {
    let v: Vec<u64> = (0..=x_max)
        .into_par_iter()
        .map(|x| -> Result<u64> {
            let d = divisor_set(x, q_max)?;
            let mut bad = 0;
            for q in 1..=q_max {
                let member = d.contains(q);
                let pattern = support_verdict(q, x, SupportFlavor::Plain)?.in_support;
                let nonzero = h_sum(HKind::H, q, x)?.norm() > tol;
                bad += u64::from(member != pattern || (nonzero && !member));
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(v.into_iter().sum())
}

/// Identity checks of the `H` family (criterion-level ranges by default).
pub fn h_identity_audit(p: &HsumParams) -> Result<Vec<Check>> {
    let tol = p.tol;
    let mut checks = vec![
        Check::at_most("h_equals_h1_odd_q", h_eq_h1_defect(p.h_eq_h1_q_max)?, tol),
        Check::at_most("h0_equals_sqrt_count", h0_defect(p.h0_q_max)?, tol),
        Check::at_most(
            "h1_multiplicative",
            multiplicative_defect(p.multiplicative_q_max)?,
            tol,
        ),
        Check::holds("h_periodic_2q_exact", periodicity_exact(p.support_q_max.min(100))?),
    ];
    let evens: Vec<u64> = (2..=p.shift_q_max).step_by(2).collect();
    let ds: Vec<ShiftDefects> = evens
        .par_iter()
        .map(|&q| shift_defects(q, tol))
        .collect::<Result<_>>()?;
    let m = |f: fn(&ShiftDefects) -> f64| max_defect(ds.iter().map(f));
    checks.extend([
        Check::at_most("shift_sum_h_odd", m(|d| d.sum_odd), tol),
        Check::at_most("shift_sum_h_mod4", m(|d| d.mod4), tol),
        Check::at_most("shift_sum_h_mod8", m(|d| d.mod8), tol),
        Check::at_most("h_in_h1357", m(|d| d.h_in_h1357), tol),
        Check::at_most("tilde_vanishing", m(|d| d.tilde_vanish), tol),
        Check::at_most("tilde_bound_excess", m(|d| d.tilde_bound), 0.0),
        Check::at_most("tilde_identity", m(|d| d.tilde_identity), tol),
    ]);
    Ok(checks)
}

/// Support lemma checks: vanishing outside the pattern, the modulus bound
/// inside it, the square-root bound, and `divisor_set` against a direct scan.
pub fn support_audit(p: &HsumParams) -> Result<Vec<Check>> {
    let d = support_defects(p.support_q_max)?;
    Ok(vec![
        Check::at_most("h_vanishes_off_support", d.vanish, 1e-10),
        Check::at_most("h_bound_excess", d.bound_excess, 1e-9),
        Check::at_most("h_sqrt_q_excess", d.sqrt_excess, 1e-9),
        Check::equals(
            "divisor_set_disagreements",
            divisor_set_disagreements(p.divisor_q_max, p.divisor_x_max, 1e-10)? as f64,
            0.0,
        ),
    ])
}

pub fn run_hsum_identities(p: &HsumParams) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("hsum-identities", p, &["check_index", "passed", "value", "limit"])?;
    let mut checks = sqrt_count_audit(p)?;
    checks.extend(h_identity_audit(p)?);
    checks.extend(support_audit(p)?);
    for (i, c) in checks.into_iter().enumerate() {
        rep.push_row(vec![i as f64, f64::from(u8::from(c.passed)), c.value, c.limit]);
        rep.check(c);
    }
    rep.meta("profiles", "inverse FFT of the coefficient vectors, spot-checked by direct sums");
    rep.meta("tilde_lemma_scope", "odd part q' >= 3");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_tables_match_full_squaring() {
        for (p, k) in [(3u64, 1u32), (3, 4), (5, 3), (7, 2), (11, 3)] {
            let full = sqrt_count_table(p.pow(k)).unwrap();
            for c in 0..p {
                let t = sqrt_count_class(p, k, c);
                for y in 0..p.pow(k - 1) {
                    assert_eq!(u64::from(t.get(y)), full[(c + p * y) as usize], "p={p} k={k} c={c}");
                }
            }
        }
    }

    #[test]
    fn prime_power_audit_is_clean_on_small_cases() {
        for (p, k) in [(3u64, 5u32), (5, 4), (13, 3)] {
            assert_eq!(prime_power_mismatches(p, k, true, true), (0, 0, 0));
        }
    }
}

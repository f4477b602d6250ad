//! Major-arc decomposition `m_N = a_N + c_N` of the Weyl multiplier and the
//! further splits of `a_N` into `b_{N,1} + b_{N,2}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bump::eta;
use super::gamma::gamma_n_fresnel;
use super::rational::{arc_offset, dirichlet_approx, Freq, ReducedRational};
use crate::arith::{gcd, mul_mod};
use crate::error::{contract, domain, Result};
use crate::gauss::g0_closed;
use crate::sum::{unit_root, ComplexSum};

/// `(1/N) sum_{k=1}^{N} e(k^2 xi)`, exact phases, compensated sum.
pub fn weyl_multiplier(xi: Freq, n: u64) -> Result<Complex64> {
    if n == 0 || n > 1 << 32 {
        return Err(domain!("weyl_multiplier: N = {n} outside [1, 2^32]"));
    }
    let (num, den) = (xi.num(), xi.den());
    let mut s = ComplexSum::new();
    for k in 1..=n {
        let k2 = mul_mod(k, k, den);
        s.add(unit_root(mul_mod(k2, num, den) as i128, den));
    }
    Ok(s.value() / n as f64)
}

/// How `a_N` is split into low (`b_{N,1}`) and high (`b_{N,2}`) parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    None,
    /// `M = J`: `b1 = sum_{s<=s0} a~_{N,s}` with the narrow bump `eta_{qN^2/J}`.
    Fixed { j: u64 },
    /// `M = N/4`: `a~ = sum_{s<=s0} a^(1)`, `b1 = sum_{s<=s0} (a_s - a^(1)_s)`,
    /// `b2 = sum_{s>s0} a_s`.
    Maximal { j: u64 },
}

impl Split {
    fn j(&self) -> Option<u64> {
        match *self {
            Split::None => None,
            Split::Fixed { j } | Split::Maximal { j } => Some(j),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcDecomposition {
    pub weyl: Complex64,
    pub a_n: Complex64,
    pub c_n: Complex64,
    /// `a_{N,s}` for `s = 1..=log2 M`.
    pub per_level: Vec<Complex64>,
    pub tilde_a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

fn log2_exact(v: u64, what: &str) -> Result<u32> {
    if v == 0 || !v.is_power_of_two() {
        return Err(domain!("{what} = {v} must be a power of two"));
    }
    Ok(v.trailing_zeros())
}

/// Validates `(N, M, split)` and returns `(m, s0)`.
fn check_params(n: u64, m_cut: u64, split: Split) -> Result<(u32, u32)> {
    if n == 0 {
        return Err(domain!("N must be positive"));
    }
    let m = log2_exact(m_cut, "M")?;
    if m_cut > 1 && 4 * m_cut > n {
        return Err(contract!("M = {m_cut} exceeds N/4 for N = {n}"));
    }
    let s0 = match split {
        Split::None => 0,
        Split::Fixed { j } => {
            if j != m_cut {
                return Err(contract!("fixed-scale split needs M = J (M = {m_cut}, J = {j})"));
            }
            log2_exact(j, "J")?
        }
        Split::Maximal { j } => {
            if 4 * m_cut != n {
                return Err(contract!("maximal split needs M = N/4 (M = {m_cut}, N = {n})"));
            }
            if j > m_cut {
                return Err(contract!("maximal split needs J <= M"));
            }
            log2_exact(j, "J")?
        }
    };
    Ok((m, s0))
}

/// Contribution of one arc at offset `theta`: `(a_{N,s} term, narrow-bump term)`.
#[inline]
fn arc_terms(g0: Complex64, q: u64, theta: f64, s: u32, n: u64, j: Option<u64>) -> (Complex64, Complex64) {
    let wide = eta(4f64.powi(s as i32) * theta);
    let narrow_k = j.map(|j| q as f64 * (n as f64) * (n as f64) / j as f64);
    let narrow = narrow_k.map_or(0.0, |k| eta(k * theta));
    if wide == 0.0 && narrow == 0.0 {
        let z = Complex64::new(0.0, 0.0);
        return (z, z);
    }
    let base = g0 * gamma_n_fresnel(theta, n);
    (base * wide, base * narrow)
}

/// Pointwise evaluation of the decomposition at an exact frequency.
pub fn arc_multipliers(xi: Freq, n: u64, m_cut: u64, split: Split) -> Result<ArcDecomposition> {
    check_params(n, m_cut, split)?;
    arc_multipliers_with_weyl(xi, n, m_cut, split, weyl_multiplier(xi, n)?)
}

/// As [`arc_multipliers`], with `m_N(xi)` supplied by the caller (e.g. from [`weyl_grid`]).
pub(crate) fn arc_multipliers_with_weyl(
    xi: Freq,
    n: u64,
    m_cut: u64,
    split: Split,
    weyl: Complex64,
) -> Result<ArcDecomposition> {
    let (m, s0) = check_params(n, m_cut, split)?;
    let x2 = 2.0 * xi.to_f64();
    let mut per_level = Vec::with_capacity(m as usize);
    let mut narrow_levels = Vec::with_capacity(m as usize);
    for s in 1..=m {
        let (mut wide, mut narrow) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for q in (1u64 << (s - 1))..(1u64 << s) {
            // Only the nearest a/q can meet the support of eta_{2^{2s}}.
            let a = ((x2 * q as f64).round() as i64).rem_euclid(2 * q as i64) as u64;
            if gcd(a, q) != 1 {
                continue;
            }
            let r = ReducedRational { a, q };
            let theta = arc_offset(xi, r);
            let (w, nw) = arc_terms(g0_closed(a, q), q, theta, s, n, split.j());
            wide += w;
            narrow += nw;
        }
        per_level.push(wide);
        narrow_levels.push(narrow);
    }
    Ok(assemble(weyl, per_level, &narrow_levels, split, s0))
}

fn assemble(
    weyl: Complex64,
    per_level: Vec<Complex64>,
    narrow: &[Complex64],
    split: Split,
    s0: u32,
) -> ArcDecomposition {
    let zero = Complex64::new(0.0, 0.0);
    let a_n: Complex64 = per_level.iter().sum();
    let low = s0 as usize;
    let (tilde_a, b1, b2) = match split {
        Split::None => (zero, zero, zero),
        Split::Fixed { .. } => {
            let b1: Complex64 = narrow[..low].iter().sum();
            (b1, b1, a_n - b1)
        }
        Split::Maximal { .. } => {
            let ta: Complex64 = narrow[..low].iter().sum();
            let b1: Complex64 = per_level[..low]
                .iter()
                .zip(&narrow[..low])
                .map(|(w, nw)| w - nw)
                .sum();
            let b2: Complex64 = per_level[low..].iter().sum();
            (ta, b1, b2)
        }
    };
    ArcDecomposition {
        weyl,
        a_n,
        c_n: weyl - a_n,
        per_level,
        tilde_a,
        b1,
        b2,
    }
}

/// FJK remainder `|m_N(xi) - G0(a,q) gamma_N(2 xi - a/q)|` at the Dirichlet approximant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FjkRemainder {
    pub approx: ReducedRational,
    pub theta: f64,
    pub remainder: f64,
    /// `remainder * N / sqrt(q)`.
    pub normalized: f64,
    pub gamma_abs: f64,
}

pub fn fjk_remainder(xi: Freq, n: u64) -> Result<FjkRemainder> {
    let weyl = weyl_multiplier(xi, n)?;
    fjk_from_weyl(xi, n, weyl)
}

pub(crate) fn fjk_from_weyl(xi: Freq, n: u64, weyl: Complex64) -> Result<FjkRemainder> {
    let approx = dirichlet_approx(xi, n)?;
    let theta = arc_offset(xi, approx);
    let gamma = gamma_n_fresnel(theta, n);
    let remainder = (weyl - g0_closed(approx.a, approx.q) * gamma).norm();
    Ok(FjkRemainder {
        approx,
        theta,
        remainder,
        normalized: remainder * n as f64 / (approx.q as f64).sqrt(),
        gamma_abs: gamma.norm(),
    })
}

/// One sampled multiplier at `xi = j/L`, `j in [0, L)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierGrid {
    pub n: u64,
    pub values: Vec<Complex64>,
}

impl MultiplierGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    Weyl,
    A,
    C,
    B1,
    B2,
    TildeA,
    /// `a_{N,s}` for one level `s`.
    Level(u32),
}

/// Arcs of one level sorted by center on `[0, 2)`.
struct LevelTable {
    s: u32,
    centers: Vec<f64>,
    arcs: Vec<(u64, u64, Complex64)>,
}

fn level_table(s: u32) -> LevelTable {
    let mut arcs = Vec::new();
    for q in (1u64 << (s - 1))..(1u64 << s) {
        for a in 0..2 * q {
            if gcd(a, q) == 1 {
                arcs.push((a, q, g0_closed(a, q)));
            }
        }
    }
    arcs.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    let centers = arcs.iter().map(|&(a, q, _)| a as f64 / q as f64).collect();
    LevelTable { s, centers, arcs }
}

impl LevelTable {
    /// Nearest arc to `x in [0, 2)` on the circle `2T`.
    fn nearest(&self, x: f64) -> usize {
        let n = self.centers.len();
        let i = self.centers.partition_point(|&c| c < x);
        let cand = [(i + n - 1) % n, i % n];
        let dist = |k: usize| {
            let d = (x - self.centers[k]).abs();
            d.min(2.0 - d)
        };
        if dist(cand[0]) <= dist(cand[1]) {
            cand[0]
        } else {
            cand[1]
        }
    }
}

/// Samples the requested multipliers at `xi = j/L`. Every grid shares one
/// arc search per point; the Weyl grid is the exact DFT of the kernel.
pub fn sample_multipliers(
    kinds: &[MultiplierKind],
    n: u64,
    m_cut: u64,
    split: Split,
    l: usize,
) -> Result<Vec<MultiplierGrid>> {
    let (m, s0) = check_params(n, m_cut, split)?;
    if !l.is_power_of_two() {
        return Err(domain!("grid length {l} must be a power of two"));
    }
    if (l as u128) < 4 * (n as u128) * (n as u128) {
        return Err(contract!("grid length {l} below 4 N^2 for N = {n}"));
    }
    for k in kinds {
        if let MultiplierKind::Level(s) = k {
            if *s == 0 || *s > m {
                return Err(domain!("level {s} outside 1..={m}"));
            }
        }
    }
    let needs_weyl = kinds
        .iter()
        .any(|k| matches!(k, MultiplierKind::Weyl | MultiplierKind::C));
    let weyl = if needs_weyl {
        Some(weyl_grid(n, l))
    } else {
        None
    };
    let needs_arcs = kinds.iter().any(|k| !matches!(k, MultiplierKind::Weyl));
    let tables: Vec<LevelTable> = if needs_arcs {
        (1..=m).into_par_iter().map(level_table).collect()
    } else {
        Vec::new()
    };
    let j_opt = split.j();
    let zero = Complex64::new(0.0, 0.0);
    let lk = l as i128;
    let point = |jx: usize, slot: &mut [Complex64]| {
        let w = weyl.as_ref().map_or(zero, |g| g[jx]);
        let mut per_level = Vec::with_capacity(tables.len());
        let mut narrow = Vec::with_capacity(tables.len());
        let x = 2.0 * jx as f64 / l as f64;
        for t in &tables {
            let (a, q, g0) = t.arcs[t.nearest(x)];
            // theta = (2 j q - a L) / (L q), wrapped into [-1, 1).
            let dq = lk * q as i128;
            let num = (2 * jx as i128 * q as i128 - a as i128 * lk).rem_euclid(2 * dq);
            let num = if num >= dq { num - 2 * dq } else { num };
            let theta = num as f64 / dq as f64;
            let (wv, nv) = arc_terms(g0, q, theta, t.s, n, j_opt);
            per_level.push(wv);
            narrow.push(nv);
        }
        let d = assemble(w, per_level, &narrow, split, s0);
        for (v, k) in slot.iter_mut().zip(kinds) {
            *v = match *k {
                MultiplierKind::Weyl => d.weyl,
                MultiplierKind::A => d.a_n,
                MultiplierKind::C => d.c_n,
                MultiplierKind::B1 => d.b1,
                MultiplierKind::B2 => d.b2,
                MultiplierKind::TildeA => d.tilde_a,
                MultiplierKind::Level(s) => d.per_level[s as usize - 1],
            };
        }
    };
    let kk = kinds.len();
    if kk == 1 && kinds[0] == MultiplierKind::Weyl {
        return Ok(vec![MultiplierGrid {
            n,
            values: weyl.expect("weyl grid computed"),
        }]);
    }
    // Interleaved buffer: entry j * K + k holds kind k at frequency j/L.
    let mut flat = vec![zero; l * kk];
    const CHUNK: usize = 1 << 12;
    flat.par_chunks_mut(CHUNK * kk)
        .enumerate()
        .for_each(|(b, chunk)| {
            for (i, slot) in chunk.chunks_mut(kk).enumerate() {
                point(b * CHUNK + i, slot);
            }
        });
    drop(weyl);
    Ok((0..kk)
        .map(|k| MultiplierGrid {
            n,
            values: flat.iter().skip(k).step_by(kk).copied().collect(),
        })
        .collect())
}

pub fn sample_multiplier(
    kind: MultiplierKind,
    n: u64,
    m_cut: u64,
    split: Split,
    l: usize,
) -> Result<MultiplierGrid> {
    Ok(sample_multipliers(&[kind], n, m_cut, split, l)?.remove(0))
}

/// Exact Weyl multiplier on the grid `j/L` via the DFT of the kernel `(1/N) delta_{k^2 mod L}`.
pub fn weyl_grid(n: u64, l: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); l];
    let w = 1.0 / n as f64;
    for k in 1..=n {
        v[mul_mod(k, k, l as u64) as usize] += w;
    }
    crate::fft::inverse(&mut v);
    v
}

/// All reduced `a/q` on `[0, 2)` with `2^{s-1} <= q < 2^s`, sorted by value.
pub fn arc_centers(s: u32) -> Vec<ReducedRational> {
    level_table(s)
        .arcs
        .into_iter()
        .map(|(a, q, _)| ReducedRational { a, q })
        .collect()
}

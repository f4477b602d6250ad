//! Stopping-time machinery for sparse domination: stopping children, admissible
//! stopping times, the recursive sparse collection and the sparse form.
//!
//! Averages over `3I` use the zero extension of `f` to all of the integers, so
//! no clipping happens at the left edge of a window.

use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Error, Result};
use crate::ops::{average_an, norm_p, AverageMethod, IntervalZ, Signal};
use crate::sum::KahanSum;

/// Default stopping constant.
pub const DEFAULT_STOP_C: f64 = 8.0;

/// Largest `|E|` the exhaustive scans accept.
pub const MAX_E: u64 = 1 << 16;

fn check_e(e: IntervalZ) -> Result<()> {
    if !e.len().is_power_of_two() || e.len() > MAX_E {
        return Err(domain!(
            "E must have power-of-two length <= {MAX_E}, got {}",
            e.len()
        ));
    }
    Ok(())
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(domain!("stopping constant must be finite and > 1, got {c}"));
    }
    Ok(())
}

fn check_supported(f: &Signal, window: IntervalZ, what: &str) -> Result<()> {
    if let Some(s) = f.support() {
        if !window.contains_interval(&s) {
            return Err(contract!(
                "{what} supported on [{}, {}], outside [{}, {}]",
                s.a,
                s.b,
                window.a,
                window.b
            ));
        }
    }
    Ok(())
}

/// Largest power of two `<= floor(sqrt(|E|))`.
pub fn tau_cap(e: IntervalZ) -> u64 {
    let r = e.len().isqrt();
    1 << (63 - r.leading_zeros())
}

/// Prefix sums of `|f|` over `3E`, the hull of every `3I` with `I` inside `E`.
struct Stopping {
    e: IntervalZ,
    lo: i64,
    prefix: Vec<f64>,
    /// `C * sum_{2E} |f|`.
    c_mass: f64,
}

impl Stopping {
    fn new(e: IntervalZ, f: &Signal, c: f64) -> Result<Self> {
        check_e(e)?;
        check_c(c)?;
        check_supported(f, e.double(), "f")?;
        let t = e.triple();
        let mut prefix = Vec::with_capacity(t.len() as usize + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for x in t.iter() {
            acc += f.get(x).abs();
            prefix.push(acc);
        }
        let mut s = Self {
            e,
            lo: t.a,
            prefix,
            c_mass: 0.0,
        };
        s.c_mass = c * s.sum(e.double());
        Ok(s)
    }

    fn sum(&self, i: IntervalZ) -> f64 {
        let lo = (i.a - self.lo) as usize;
        let hi = (i.b - self.lo) as usize + 1;
        self.prefix[hi] - self.prefix[lo]
    }

    /// `<f>_{3I,1} > C <f>_{2E,1}`, cross-multiplied.
    fn violates(&self, i: IntervalZ) -> bool {
        self.sum(i.triple()) * (2 * self.e.len()) as f64 > self.c_mass * (3 * i.len()) as f64
    }

    /// Violating intervals satisfy `|I| < sum_{2E}|f| / (3 <f>_{2E} C) = 2|E| / (3C)`.
    fn max_violating_len(&self) -> u64 {
        if self.c_mass == 0.0 {
            return 0;
        }
        let total = self.sum(self.e.triple());
        let bound = total * (2 * self.e.len()) as f64 / (3.0 * self.c_mass);
        (bound.ceil() as u64).min(self.e.len())
    }

    /// Largest `l` with `[s, s + l - 1]` violating and inside `E`, or 0.
    fn longest_from(&self, s: i64, cap: u64) -> u64 {
        let room = (self.e.b - s + 1) as u64;
        (1..=cap.min(room))
            .rev()
            .find(|&l| self.violates(IntervalZ { a: s, b: s + l as i64 - 1 }))
            .unwrap_or(0)
    }
}

/// Maximal dyadic `I` strictly inside `E` with `<f>_{3I,1} > C <f>_{2E,1}`,
/// left to right. Their total length must not exceed `|E|/4`.
pub fn find_stopping_children(e: IntervalZ, f: &Signal, c: f64) -> Result<Vec<IntervalZ>> {
    let st = Stopping::new(e, f, c)?;
    let mut out = Vec::new();
    if st.c_mass == 0.0 {
        return Ok(out);
    }
    let mut stack = Vec::new();
    if e.len() > 1 {
        let h = (e.len() / 2) as i64;
        stack.push(IntervalZ { a: e.a + h, b: e.b });
        stack.push(IntervalZ { a: e.a, b: e.a + h - 1 });
    }
    while let Some(i) = stack.pop() {
        if st.violates(i) {
            out.push(i);
        } else if i.len() > 1 {
            let h = (i.len() / 2) as i64;
            stack.push(IntervalZ { a: i.a + h, b: i.b });
            stack.push(IntervalZ { a: i.a, b: i.a + h - 1 });
        }
    }
    let mass: u64 = out.iter().map(IntervalZ::len).sum();
    if 4 * mass > e.len() {
        return Err(Error::Invariant(format!(
            "stopping children cover {mass} > |E|/4 = {} points at C = {c}",
            e.len() / 4
        )));
    }
    Ok(out)
}

/// A power-of-two scale `tau(x) <= floor(sqrt|E|)` for every `x` in `E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoppingTime {
    e: IntervalZ,
    values: Vec<u64>,
}

impl StoppingTime {
    pub fn new(e: IntervalZ, values: Vec<u64>) -> Result<Self> {
        check_e(e)?;
        if values.len() as u64 != e.len() {
            return Err(contract!(
                "stopping time has {} values for |E| = {}",
                values.len(),
                e.len()
            ));
        }
        if let Some(v) = values
            .iter()
            .find(|&&v| !v.is_power_of_two() || v * v > e.len())
        {
            return Err(domain!("stopping time value {v} is not a power of two with square <= |E|"));
        }
        Ok(Self { e, values })
    }

    pub fn constant(e: IntervalZ, n: u64) -> Result<Self> {
        Self::new(e, vec![n; e.len() as usize])
    }

    pub fn interval(&self) -> IntervalZ {
        self.e
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn at(&self, x: i64) -> Option<u64> {
        self.e
            .contains(x)
            .then(|| self.values[(x - self.e.a) as usize])
    }
}

/// `V(x)`: length of the longest violating subinterval of `E` through `x`, or 0.
fn longest_violation(st: &Stopping) -> Vec<u64> {
    let e = st.e;
    let n = e.len() as usize;
    let cap = st.max_violating_len();
    let mut runs: Vec<(u64, usize)> = Vec::new();
    if cap > 0 {
        for s in 0..n {
            let l = st.longest_from(e.a + s as i64, cap);
            if l > 0 {
                runs.push((l, s));
            }
        }
    }
    // Longest first; each point takes the first run that covers it.
    runs.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut v = vec![0u64; n];
    let mut next: Vec<usize> = (0..=n).collect();
    fn find(next: &mut [usize], mut i: usize) -> usize {
        while next[i] != i {
            next[i] = next[next[i]];
            i = next[i];
        }
        i
    }
    for (l, s) in runs {
        let end = s + l as usize;
        let mut i = find(&mut next, s);
        while i < end {
            v[i] = l;
            next[i] = i + 1;
            i = find(&mut next, i + 1);
        }
    }
    v
}

/// Averages `A_N f` on `E` for every dyadic `N <= tau_cap(E)`, indexed by `log2 N`.
fn dyadic_averages(e: IntervalZ, f: &Signal) -> Result<Vec<Vec<f64>>> {
    let f2 = f.restrict(e.double());
    let cap = tau_cap(e);
    let mut out = Vec::new();
    let mut n = 1u64;
    while n <= cap {
        let a = average_an(&f2, n, AverageMethod::Auto)?;
        out.push(e.iter().map(|x| a.get(x)).collect());
        n *= 2;
    }
    Ok(out)
}

/// At each `x`, the dyadic scale maximizing `A_N f(x)` among those with
/// `N^2 > V(x)`, ties going to the larger scale. Admissible by construction.
pub fn build_admissible_tau(e: IntervalZ, f: &Signal, c: f64) -> Result<StoppingTime> {
    let st = Stopping::new(e, f, c)?;
    let v = longest_violation(&st);
    let avgs = dyadic_averages(e, f)?;
    let cap = tau_cap(e);
    let mut values = Vec::with_capacity(v.len());
    for (i, &vx) in v.iter().enumerate() {
        let mut best: Option<(u64, f64)> = None;
        for (k, a) in avgs.iter().enumerate() {
            let n = 1u64 << k;
            if n * n <= vx {
                continue;
            }
            if best.is_none_or(|(_, b)| a[i] >= b) {
                best = Some((n, a[i]));
            }
        }
        let Some((n, _)) = best else {
            return Err(Error::Invariant(format!(
                "no admissible scale at x = {}: V = {vx} >= {}",
                e.a + i as i64,
                cap * cap
            )));
        };
        values.push(n);
    }
    StoppingTime::new(e, values)
}

/// Sparse table for range minima of `tau^2`.
struct RangeMin {
    levels: Vec<Vec<u64>>,
}

impl RangeMin {
    fn new(v: Vec<u64>) -> Self {
        let mut levels = vec![v];
        let mut w = 1;
        while 2 * w <= levels[0].len() {
            let prev = levels.last().expect("level");
            let next = (0..prev.len() - w)
                .map(|i| prev[i].min(prev[i + w]))
                .collect();
            levels.push(next);
            w *= 2;
        }
        Self { levels }
    }

    /// Minimum over `[lo, lo + len)`.
    fn min(&self, lo: usize, len: usize) -> u64 {
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        self.levels[k][lo].min(self.levels[k][lo + len - (1 << k)])
    }
}

/// Every subinterval `I` of `E` with `<f>_{3I,1} > C <f>_{2E,1}` has
/// `min_{x in I} tau(x)^2 > |I|`. Exhaustive over positions and lengths.
pub fn check_admissible(tau: &StoppingTime, f: &Signal, c: f64) -> Result<bool> {
    let e = tau.e;
    let st = Stopping::new(e, f, c)?;
    let cap = st.max_violating_len();
    if cap == 0 {
        return Ok(true);
    }
    let rm = RangeMin::new(tau.values.iter().map(|v| v * v).collect());
    let n = e.len() as usize;
    for s in 0..n {
        for l in 1..=(cap as usize).min(n - s) {
            let i = IntervalZ {
                a: e.a + s as i64,
                b: e.a + (s + l) as i64 - 1,
            };
            if st.violates(i) && rm.min(s, l) <= l as u64 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(A_tau f)(x) = A_{tau(x)} f(x)` on `E`.
pub fn apply_a_tau(f: &Signal, tau: &StoppingTime) -> Result<Signal> {
    let e = tau.e;
    check_supported(f, e.double(), "f")?;
    let avgs = dyadic_averages(e, f)?;
    let samples = tau
        .values
        .iter()
        .enumerate()
        .map(|(i, &n)| avgs[n.trailing_zeros() as usize][i])
        .collect();
    Signal::new(e.a, samples)
}

/// One interval of a sparse collection with its witness set `E_I`, sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseInterval {
    pub a: i64,
    pub b: i64,
    pub witness: Vec<i64>,
}

impl SparseInterval {
    pub fn interval(&self) -> IntervalZ {
        IntervalZ {
            a: self.a,
            b: self.b,
        }
    }
}

/// Result of [`audit_sparsity`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityAudit {
    pub intervals: usize,
    /// `min |E_I| / |I|`, 1 for an empty collection.
    pub min_density: f64,
    pub witnesses_inside: bool,
    pub witnesses_disjoint: bool,
}

impl SparsityAudit {
    pub fn passed(&self) -> bool {
        self.witnesses_inside && self.witnesses_disjoint && self.min_density > 0.25
    }
}

/// Intervals with pairwise disjoint witnesses `E_I`, `|E_I| > |I|/4`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseCollection {
    items: Vec<SparseInterval>,
}

impl SparseCollection {
    /// Validates the witness conditions.
    pub fn new(items: Vec<SparseInterval>) -> Result<Self> {
        for it in &items {
            IntervalZ::new(it.a, it.b)?;
        }
        let c = Self { items };
        let audit = audit_sparsity(&c);
        if !audit.passed() {
            return Err(Error::Invariant(format!("sparse collection fails audit: {audit:?}")));
        }
        Ok(c)
    }

    pub fn items(&self) -> &[SparseInterval] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

pub fn audit_sparsity(c: &SparseCollection) -> SparsityAudit {
    let mut inside = true;
    let mut min_density = 1.0f64;
    let mut all = Vec::new();
    for it in &c.items {
        let len = (it.b as i128 - it.a as i128 + 1) as f64;
        let mut w = it.witness.clone();
        w.sort_unstable();
        w.dedup();
        if w.len() != it.witness.len() || w.iter().any(|&x| x < it.a || x > it.b) {
            inside = false;
        }
        min_density = min_density.min(w.len() as f64 / len);
        all.extend(w);
    }
    let total = all.len();
    all.sort_unstable();
    all.dedup();
    SparsityAudit {
        intervals: c.items.len(),
        min_density,
        witnesses_inside: inside,
        witnesses_disjoint: all.len() == total,
    }
}

/// Passes when every witness lies in its interval, witnesses are disjoint and
/// each has density above 1/4.
pub fn verify_sparsity(c: &SparseCollection) -> bool {
    audit_sparsity(c).passed()
}

/// Emits `E`, then recurses into each stopping child `I` with `f` restricted to
/// `2I`. The witness of each interval is the interval minus its children.
/// `g` only has to be supported on `E`; the collection depends on `f` alone.
pub fn sparse_decompose(e: IntervalZ, f: &Signal, g: &Signal, c: f64) -> Result<SparseCollection> {
    check_e(e)?;
    check_supported(g, e, "g")?;
    let depth_limit = ((e.len() as f64).ln() / (4.0f64 / 3.0).ln()).floor() as usize;
    let mut items = Vec::new();
    let mut stack = vec![(e, 0usize)];
    while let Some((i, depth)) = stack.pop() {
        if depth > depth_limit {
            return Err(Error::Invariant(format!(
                "sparse recursion depth {depth} exceeds log_(4/3)|E| = {depth_limit}"
            )));
        }
        let fi = f.restrict(i.double());
        let children = find_stopping_children(i, &fi, c)?;
        let mut witness = Vec::with_capacity(i.len() as usize);
        let mut x = i.a;
        for ch in &children {
            witness.extend(x..ch.a);
            x = ch.b + 1;
        }
        witness.extend(x..=i.b);
        items.push(SparseInterval {
            a: i.a,
            b: i.b,
            witness,
        });
        for ch in children.into_iter().rev() {
            stack.push((ch, depth + 1));
        }
    }
    SparseCollection::new(items)
}

/// `sum_I |I| <f>_{2I,r} <g>_{I,s}`.
pub fn sparse_form(c: &SparseCollection, f: &Signal, g: &Signal, r: f64, s: f64) -> Result<f64> {
    let mut acc = KahanSum::new();
    for it in &c.items {
        let i = it.interval();
        let fr = norm_p(f, i.double(), r)?;
        let gs = norm_p(g, i, s)?;
        acc.add(i.len() as f64 * fr * gs);
    }
    Ok(acc.value())
}

/// `sum_{x in E} g(x) max_{N dyadic, N^2 <= |E|} A_N f(x)`.
pub fn dyadic_maximal_pairing(e: IntervalZ, f: &Signal, g: &Signal) -> Result<f64> {
    check_e(e)?;
    let avgs = dyadic_averages(e, f)?;
    let mut acc = KahanSum::new();
    for (i, x) in e.iter().enumerate() {
        let gx = g.get(x);
        if gx != 0.0 {
            let m = avgs.iter().fold(0.0f64, |m, a| m.max(a[i].abs()));
            acc.add(gx * m);
        }
    }
    Ok(acc.value())
}

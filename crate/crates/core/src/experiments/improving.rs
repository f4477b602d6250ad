//! Improving-inequality experiments for `A_N`: random indicator pairs, the
//! extremal pair (first `N` squares against `delta_0`), the Orlicz variant,
//! the superlevel-set bound, and polynomial averages.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ops::{bilinear, norm_p, IntervalZ, ShiftAverager, Signal};
use crate::report::{stream_rng, Check, ExperimentReport};

/// Stream tags keep experiments independent under one seed. The polynomial
/// runner shares the improving tag so `p(n) = n^2` reproduces its rows.
const TAG_IMPROVING: u64 = 1;
const TAG_ORLICZ: u64 = 2;
const TAG_HALFDIM: u64 = 3;

fn stream_id(tag: u64, size: u64, trial: u64) -> u64 {
    (tag << 56) ^ (size << 20) ^ trial
}

fn check_n_list(n_list: &[u64], max: u64) -> Result<()> {
    if n_list.is_empty() {
        return Err(domain!("N list is empty"));
    }
    for &n in n_list {
        if n < 2 || n > max {
            return Err(domain!("N = {n} outside [2, {max}]"));
        }
    }
    Ok(())
}

fn random_indicator(rng: &mut ChaCha8Rng, i: IntervalZ, density: f64) -> Signal {
    let samples = i
        .iter()
        .map(|_| if rng.random_bool(density) { 1.0 } else { 0.0 })
        .collect();
    Signal::new(i.a, samples).expect("interval length within bounds")
}

/// Indicator pair `f` on `2I`, `g` on `I`, with densities `2^{-u}` and `2^{-v}`
/// for `u, v` uniform in `0..=log2 N`. A pair with `f = 0` or `g = 0` is redrawn.
fn random_pair(rng: &mut ChaCha8Rng, n: u64, i: IntervalZ) -> (Signal, Signal) {
    let lg = 63 - n.leading_zeros();
    loop {
        let u = rng.random_range(0..=lg);
        let v = rng.random_range(0..=lg);
        let f = random_indicator(rng, i.double(), (-(u as f64)).exp2());
        let g = random_indicator(rng, i, (-(v as f64)).exp2());
        if f.sup_norm() > 0.0 && g.sup_norm() > 0.0 {
            return (f, g);
        }
    }
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Shifts `p(1), ..., p(N)` for integer coefficients (constant term first).
fn poly_shifts(coeffs: &[i64], n: u64) -> Result<Vec<i64>> {
    (1..=n as i64)
        .map(|k| {
            let mut acc: i128 = 0;
            for &c in coeffs.iter().rev() {
                acc = acc * k as i128 + c as i128;
            }
            if !(0..=1i128 << 40).contains(&acc) {
                return Err(domain!("p({k}) = {acc} outside [0, 2^40]"));
            }
            Ok(acc as i64)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImprovingParams {
    pub n_list: Vec<u64>,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ImprovingParams {
    fn default() -> Self {
        Self {
            n_list: (2..=5).map(|k| 1u64 << (2 * k)).collect(),
            p: 1.6,
            trials: 50,
            seed: 0,
        }
    }
}

const IMPROVING_COLUMNS: [&str; 9] = [
    "N",
    "max_bilinear_ratio",
    "max_single_ratio",
    "full_indicator_ratio",
    "extremal_pairing",
    "extremal_ratio_p",
    "extremal_ratio_4_3",
    "extremal_closed_form_4_3",
    "interval_len",
];

/// Rows per `N` for averages along `shifts(N)`. `I = [0, max shift - 1]`.
fn improving_rows(
    rep: &mut ExperimentReport,
    params: &ImprovingParams,
    shifts_for: impl Fn(u64) -> Result<Vec<i64>>,
) -> Result<()> {
    let p = params.p;
    let pc = conjugate(p);
    let (mut full_max, mut extremal_err) = (0.0f64, 0.0f64);
    for &n in &params.n_list {
        let shifts = shifts_for(n)?;
        let len = *shifts.iter().max().expect("N >= 2") as u64;
        if len == 0 {
            return Err(domain!("the shifts must not all vanish"));
        }
        let i = IntervalZ::with_len(0, len)?;
        let two_i = i.double();
        let avg = ShiftAverager::new(&shifts, two_i.len() as usize)?;
        let il = i.len() as f64;

        let trials: Vec<(f64, f64)> = (0..params.trials)
            .into_par_iter()
            .map(|t| -> Result<(f64, f64)> {
                let mut rng = stream_rng(params.seed, stream_id(TAG_IMPROVING, n, t));
                let (f, g) = random_pair(&mut rng, n, i);
                let af = avg.apply(&f)?;
                let nf = norm_p(&f, two_i, p)?;
                let bil = bilinear(&af, &g) / (il * nf * norm_p(&g, i, p)?);
                let single = norm_p(&af, i, pc)? / nf;
                Ok((bil, single))
            })
            .collect::<Result<_>>()?;
        let max_bil = trials.iter().map(|t| t.0).fold(0.0, f64::max);
        let max_single = trials.iter().map(|t| t.1).fold(0.0, f64::max);

        let full = Signal::indicator_interval(two_i);
        let full_ratio = norm_p(&avg.apply(&full)?, i, pc)? / norm_p(&full, two_i, p)?;
        full_max = full_max.max(full_ratio);

        // Extremal pair: f = indicator of the shifts, g = delta_0.
        let f = Signal::indicator(shifts.iter().copied());
        let f = f.restrict(two_i);
        let g = Signal::delta(0);
        let pairing = bilinear(&avg.apply(&f)?, &g);
        let ext = |q: f64| -> Result<f64> {
            Ok(pairing / (il * norm_p(&f, two_i, q)? * norm_p(&g, i, q)?))
        };
        let distinct = f.samples.iter().filter(|v| **v != 0.0).count() as f64;
        // (#distinct shifts / (2 |I|))^{-3/4} |I|^{3/4} / |I| for p = 4/3.
        let closed = (distinct / (2.0 * il)).powf(-0.75) * il.powf(0.75) / il;
        let e43 = ext(4.0 / 3.0)?;
        extremal_err = extremal_err.max((e43 / closed - 1.0).abs());
        rep.push_row(vec![
            n as f64,
            max_bil,
            max_single,
            full_ratio,
            pairing,
            ext(p)?,
            e43,
            closed,
            il,
        ]);
    }
    rep.check(Check::at_most("full_indicator_ratio", full_max, 1.0 + 1e-12));
    rep.check(Check::at_most("extremal_closed_form_rel_err", extremal_err, 1e-12));
    rep.meta("interval", "I = [0, max shift - 1], f on 2I, g on I");
    rep.meta("pair_law", "indicators with densities 2^-u, 2^-v, u and v uniform in 0..=log2 N");
    rep.meta("fit", "max over trials; boundedness judged across N");
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(domain!("p = {p} outside (1, 2]"));
    }
    Ok(())
}

pub fn run_improving_ratio(params: &ImprovingParams) -> Result<ExperimentReport> {
    check_n_list(&params.n_list, 1 << 11)?;
    check_p(params.p)?;
    let mut rep = ExperimentReport::new("improving-ratio", params, &IMPROVING_COLUMNS)?;
    improving_rows(&mut rep, params, |n| Ok((1..=n as i64).map(|k| k * k).collect()))?;
    let pairing_ok = rep
        .column("extremal_pairing")
        .expect("column exists")
        .iter()
        .all(|&v| v == 1.0);
    rep.check(Check::holds("extremal_pairing_is_one", pairing_ok));
    rep.meta("seed", params.seed);
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyParams {
    /// Integer coefficients, constant term first.
    pub coeffs: Vec<i64>,
    pub n_list: Vec<u64>,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for PolyParams {
    fn default() -> Self {
        let base = ImprovingParams::default();
        Self {
            coeffs: vec![0, 1, 1],
            n_list: base.n_list,
            p: base.p,
            trials: base.trials,
            seed: base.seed,
        }
    }
}

/// The improving table with `p(k)` in place of `k^2`. Exploratory: no bound is asserted.
pub fn run_poly_average(params: &PolyParams) -> Result<ExperimentReport> {
    check_n_list(&params.n_list, 1 << 11)?;
    check_p(params.p)?;
    if params.coeffs.iter().all(|&c| c == 0) {
        return Err(domain!("polynomial is identically zero"));
    }
    let mut rep = ExperimentReport::new("poly-average", params, &IMPROVING_COLUMNS)?;
    let inner = ImprovingParams {
        n_list: params.n_list.clone(),
        p: params.p,
        trials: params.trials,
        seed: params.seed,
    };
    improving_rows(&mut rep, &inner, |n| poly_shifts(&params.coeffs, n))?;
    rep.meta("seed", params.seed);
    rep.meta("status", "exploratory");
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrliczParams {
    pub n_list: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
}

impl Default for OrliczParams {
    fn default() -> Self {
        Self {
            n_list: ImprovingParams::default().n_list,
            trials: 50,
            seed: 0,
        }
    }
}

/// `psi(x) = x^{2/3} (1 + |ln x|)^{4/3}`, with `psi(0) = 0`.
pub fn orlicz_psi(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    x.powf(2.0 / 3.0) * (1.0 + x.ln().abs()).powf(4.0 / 3.0)
}

pub fn run_orlicz_ratio(params: &OrliczParams) -> Result<ExperimentReport> {
    check_n_list(&params.n_list, 1 << 11)?;
    let mut rep = ExperimentReport::new(
        "orlicz-ratio",
        params,
        &["N", "max_ratio", "full_indicator_ratio", "extremal_ratio", "extremal_times_log8_3"],
    )?;
    let mut full_max = 0.0f64;
    for &n in &params.n_list {
        let shifts: Vec<i64> = (1..=n as i64).map(|k| k * k).collect();
        let i = IntervalZ::with_len(0, n * n)?;
        let two_i = i.double();
        let il = i.len() as f64;
        let avg = ShiftAverager::new(&shifts, two_i.len() as usize)?;
        let ratio = |f: &Signal, g: &Signal| -> Result<f64> {
            let den = orlicz_psi(norm_p(f, two_i, 1.0)?) * orlicz_psi(norm_p(g, i, 1.0)?) * il;
            Ok(bilinear(&avg.apply(f)?, g) / den)
        };
        let max_ratio = (0..params.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream_rng(params.seed, stream_id(TAG_ORLICZ, n, t));
                let (f, g) = random_pair(&mut rng, n, i);
                ratio(&f, &g)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let full = ratio(&Signal::indicator_interval(two_i), &Signal::indicator_interval(i))?;
        full_max = full_max.max(full);
        let ext = ratio(&Signal::indicator(shifts.iter().copied()), &Signal::delta(0))?;
        let lg = (n as f64).ln();
        rep.push_row(vec![n as f64, max_ratio, full, ext, ext * lg.powf(8.0 / 3.0)]);
    }
    rep.check(Check::at_most("full_indicator_ratio", full_max, 1.0 + 1e-12));
    rep.meta("seed", params.seed);
    rep.meta("psi", "x^(2/3) (1 + |ln x|)^(4/3)");
    rep.meta("averages", "<f>_{2I,1} and <g>_{I,1}, I = [0, N^2 - 1]");
    rep.meta("fit", "max over trials; extremal column scaled by (ln N)^(8/3)");
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GStrategy {
    Random,
    /// The first `N` squares.
    Squares,
    /// `[0, N)`.
    Interval,
    All,
}

impl GStrategy {
    fn expand(self) -> Vec<GStrategy> {
        match self {
            GStrategy::All => vec![GStrategy::Random, GStrategy::Squares, GStrategy::Interval],
            s => vec![s],
        }
    }

    fn code(self) -> f64 {
        match self {
            GStrategy::Random => 0.0,
            GStrategy::Squares => 1.0,
            GStrategy::Interval => 2.0,
            GStrategy::All => -1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalfdimParams {
    pub n_list: Vec<u64>,
    pub epsilons: Vec<f64>,
    pub strategy: GStrategy,
    /// Random sets drawn per `N`; the largest superlevel count is kept.
    pub trials: u64,
    pub seed: u64,
}

impl Default for HalfdimParams {
    fn default() -> Self {
        Self {
            n_list: (4..=10).map(|k| 1u64 << k).collect(),
            epsilons: vec![0.05, 0.1, 0.25, 0.5, 1.0, 2.0],
            strategy: GStrategy::All,
            trials: 10,
            seed: 0,
        }
    }
}

/// A uniformly random `N`-subset of `[0, N^2]`.
fn random_set(rng: &mut ChaCha8Rng, n: u64) -> Vec<i64> {
    rand::seq::index::sample(rng, (n * n + 1) as usize, n as usize)
        .into_iter()
        .map(|x| x as i64)
        .collect()
}

fn superlevel_counts(af: &Signal, eps: &[f64]) -> Vec<usize> {
    eps.iter()
        .map(|&e| af.samples.iter().filter(|v| **v > e).count())
        .collect()
}

/// Rows `(N, eps, strategy, eps^3 |{A_N chi_G > eps}|, (ln N)^8)`.
pub fn run_halfdim(params: &HalfdimParams) -> Result<ExperimentReport> {
    check_n_list(&params.n_list, 1 << 12)?;
    if params.epsilons.is_empty() || params.epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(domain!("epsilons must be positive"));
    }
    let mut rep = ExperimentReport::new(
        "halfdim",
        params,
        &["N", "epsilon", "strategy", "superlevel_count", "scaled", "log_n_pow8"],
    )?;
    let mut squares_zero = true;
    let mut empty_above_one = true;
    for &n in &params.n_list {
        let shifts: Vec<i64> = (1..=n as i64).map(|k| k * k).collect();
        let avg = ShiftAverager::new(&shifts, (n * n + 1) as usize)?;
        for strat in params.strategy.expand() {
            let counts: Vec<usize> = match strat {
                GStrategy::Random => {
                    let per: Vec<Vec<usize>> = (0..params.trials.max(1))
                        .into_par_iter()
                        .map(|t| -> Result<Vec<usize>> {
                            let mut rng = stream_rng(params.seed, stream_id(TAG_HALFDIM, n, t));
                            let g = Signal::indicator(random_set(&mut rng, n));
                            Ok(superlevel_counts(&avg.apply(&g)?, &params.epsilons))
                        })
                        .collect::<Result<_>>()?;
                    (0..params.epsilons.len())
                        .map(|k| per.iter().map(|c| c[k]).max().unwrap_or(0))
                        .collect()
                }
                GStrategy::Squares => {
                    let g = Signal::indicator(shifts.iter().copied());
                    let af = avg.apply(&g)?;
                    // A_N chi_G(0) = 1 for G the first N squares.
                    squares_zero &= (af.get(0) - 1.0).abs() < 1e-9;
                    superlevel_counts(&af, &params.epsilons)
                }
                GStrategy::Interval => {
                    let g = Signal::indicator_interval(IntervalZ::with_len(0, n)?);
                    superlevel_counts(&avg.apply(&g)?, &params.epsilons)
                }
                GStrategy::All => unreachable!("expanded above"),
            };
            for (&e, &c) in params.epsilons.iter().zip(&counts) {
                if e >= 1.0 {
                    empty_above_one &= c == 0;
                }
                let lg = (n as f64).ln();
                rep.push_row(vec![n as f64, e, strat.code(), c as f64, e.powi(3) * c as f64, lg.powi(8)]);
            }
        }
    }
    rep.check(Check::holds("squares_superlevel_contains_0", squares_zero));
    rep.check(Check::holds("empty_superlevel_for_eps_ge_1", empty_above_one));
    rep.meta("seed", params.seed);
    rep.meta("strategy_codes", "0 random, 1 squares, 2 interval");
    rep.meta("ground_set", "G subset of [0, N^2], |G| = N");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n_list: Vec<u64>) -> ImprovingParams {
        ImprovingParams { n_list, p: 1.6, trials: 4, seed: 3 }
    }

    #[test]
    fn extremal_ratio_grows_as_fourth_root() {
        let r = run_improving_ratio(&small(vec![64, 256])).unwrap();
        assert!(r.passed());
        let e = r.column("extremal_ratio_4_3").unwrap();
        // N^{1/4}: a factor 4 in N gives sqrt 2.
        assert!((e[1] / e[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn squares_polynomial_reproduces_improving_rows() {
        let base = run_improving_ratio(&small(vec![16, 32])).unwrap();
        let poly = run_poly_average(&PolyParams {
            coeffs: vec![0, 0, 1],
            n_list: vec![16, 32],
            p: 1.6,
            trials: 4,
            seed: 3,
        })
        .unwrap();
        assert_eq!(base.rows, poly.rows);
    }

    #[test]
    fn poly_rejects_negative_values() {
        let p = PolyParams { coeffs: vec![-5, 0, 1], n_list: vec![8], ..Default::default() };
        assert!(run_poly_average(&p).is_err());
    }

    #[test]
    fn orlicz_full_indicator_and_psi() {
        assert_eq!(orlicz_psi(0.0), 0.0);
        assert!((orlicz_psi(1.0) - 1.0).abs() < 1e-15);
        let r = run_orlicz_ratio(&OrliczParams { n_list: vec![8, 16], trials: 3, seed: 1 }).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn halfdim_structured_sets() {
        let p = HalfdimParams {
            n_list: vec![8, 16],
            epsilons: vec![0.5, 1.5],
            strategy: GStrategy::All,
            trials: 2,
            seed: 0,
        };
        let r = run_halfdim(&p).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows.len(), 2 * 3 * 2);
    }
}

//! High/Low decomposition of `A_N f` over random indicators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ops::{HighLowPlan, ShiftAverager, Signal};
use crate::report::{stream_rng, Check, ExperimentReport};

const TAG_HIGH_LOW: u64 = 5;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HighLowParams {
    pub n: u64,
    pub j_list: Vec<u64>,
    pub trials: u64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for HighLowParams {
    fn default() -> Self {
        Self {
            n: 1024,
            j_list: vec![4, 8, 16, 32, 64],
            trials: 20,
            tol: 1e-7,
            seed: 0,
        }
    }
}

/// Indicator on `2I = [0, 2N^2)` with density `2^{-u}`, `u` uniform in `0..=log2 N`.
fn random_f(seed: u64, n: u64, trial: u64) -> Signal {
    let mut rng = stream_rng(seed, (TAG_HIGH_LOW << 56) ^ (n << 20) ^ trial);
    let u = rng.random_range(0..=n.trailing_zeros());
    let d = (-(u as f64)).exp2();
    let len = (2 * n * n) as usize;
    let samples = (0..len)
        .map(|_| if rng.random_bool(d) { 1.0 } else { 0.0 })
        .collect();
    Signal::new(0, samples).expect("2I fits")
}

/// Rows per `J`: identity error `max |H + L - A_N f|`, the largest High and Low
/// ratios over trials, and both normalized by `J^{-1/2} ln J` and `J (ln J)^2`.
pub fn run_high_low(p: &HighLowParams) -> Result<ExperimentReport> {
    if p.j_list.is_empty() || p.trials == 0 {
        return Err(domain!("high-low needs J values and trials"));
    }
    if p.j_list.iter().any(|&j| j < 2) {
        return Err(domain!("J must be at least 2 for the log normalization"));
    }
    let mut rep = ExperimentReport::new(
        "high-low",
        p,
        &["J", "identity_err", "max_high_ratio", "max_low_ratio", "high_normalized", "low_normalized"],
    )?;
    let n2 = p.n * p.n;
    let shifts: Vec<i64> = (1..=p.n as i64).map(|k| k * k).collect();
    let avg = ShiftAverager::new(&shifts, 2 * n2 as usize)?;
    let mut worst = 0.0f64;
    for &j in &p.j_list {
        // One plan at a time: each holds two grids of length about 8 N^2.
        let plan = HighLowPlan::new(p.n, j)?;
        let (mut err, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
        for t in 0..p.trials {
            let f = random_f(p.seed, p.n, t);
            let s = plan.split(&f)?;
            let af = avg.apply(&f)?;
            let sum = s.high.add(&s.low);
            for (k, v) in sum.samples.iter().enumerate() {
                let x = sum.offset + k as i64;
                err = err.max((v - af.get(x)).abs());
            }
            hi = hi.max(s.high_ratio);
            lo = lo.max(s.low_ratio);
        }
        worst = worst.max(err);
        let lj = (j as f64).ln();
        let jf = j as f64;
        rep.push_row(vec![jf, err, hi, lo, hi / (lj / jf.sqrt()), lo / (jf * lj * lj)]);
    }
    rep.check(Check::at_most("high_plus_low_equals_average", worst, p.tol));
    rep.meta("seed", p.seed);
    rep.meta("split", "fixed scale M = J; High = c_N + b_{N,2}, Low = b_{N,1}");
    rep.meta("fit", "max over trials, normalized by J^-1/2 ln J and J (ln J)^2");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_holds_at_small_scale() {
        let p = HighLowParams { n: 64, j_list: vec![2, 4, 8], trials: 2, tol: 1e-7, seed: 9 };
        let r = run_high_low(&p).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows.len(), 3);
    }
}

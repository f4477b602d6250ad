//! Multi-frequency maximal operator `sup_{N >= 2^s} |F^{-1}(a_{N,s} F f)|` on l^2.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{sample_multipliers, MultiplierKind, Split};
use crate::error::{domain, Result};
use crate::ops::Signal;
use crate::ops::average::{apply_to_spectrum, forward_centered};
use crate::fft::next_pow2;
use crate::report::{stream_rng, Check, ExperimentReport};

const TAG_MULTIFREQ: u64 = 6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultifreqParams {
    pub s_list: Vec<u32>,
    pub n_max: u64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for MultifreqParams {
    fn default() -> Self {
        Self {
            s_list: (1..=8).collect(),
            n_max: 1024,
            trials: 3,
            seed: 0,
        }
    }
}

/// Random signs on `[0, N_max^2 / 2)`.
fn random_signs(seed: u64, len: usize, trial: u64) -> Signal {
    let mut rng = stream_rng(seed, (TAG_MULTIFREQ << 56) ^ ((len as u64) << 20) ^ trial);
    let samples = (0..len)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    Signal::new(0, samples).expect("length within bounds")
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// The level-`s` arcs need `4 * 2^s <= N`, so the supremum runs over dyadic
/// `N` in `[max(2^s, 2^{s+2}), N_max]`. All `N` share one DFT length.
pub fn run_multifreq(p: &MultifreqParams) -> Result<ExperimentReport> {
    if !p.n_max.is_power_of_two() || p.n_max < 8 || p.n_max > 1 << 11 {
        return Err(domain!("N_max = {} must be a power of two in [8, 2^11]", p.n_max));
    }
    let s_top = p.n_max.trailing_zeros() - 2;
    let mut s_list = p.s_list.clone();
    s_list.sort_unstable();
    s_list.dedup();
    if s_list.is_empty() || s_list[0] == 0 || *s_list.last().expect("nonempty") > s_top {
        return Err(domain!("levels must lie in 1..={s_top} for N_max = {}", p.n_max));
    }
    if p.trials == 0 {
        return Err(domain!("multifreq needs at least one trial"));
    }
    let mut rep = ExperimentReport::new(
        "multifreq",
        p,
        &["s", "n_count", "max_ratio", "normalized", "zero_input_output"],
    )?;
    let n2 = (p.n_max * p.n_max) as usize;
    let flen = n2 / 2;
    let l = next_pow2(2 * (flen + n2 + 1));
    let inputs: Vec<Signal> = (0..p.trials).map(|t| random_signs(p.seed, flen, t)).collect();
    let norms: Vec<f64> = inputs.iter().map(|f| l2(&f.samples)).collect();
    let spectra: Vec<_> = inputs.iter().map(|f| forward_centered(f, l)).collect();
    // sup over N per (trial, level), on the whole buffer window.
    let mut sup = vec![vec![Vec::<f64>::new(); s_list.len()]; inputs.len()];
    let mut n_count = vec![0u32; s_list.len()];
    let mut n = 8u64;
    while n <= p.n_max {
        let m = n.trailing_zeros() - 2;
        let levels: Vec<(usize, u32)> = s_list
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= m && (1u64 << **s) <= n)
            .map(|(k, s)| (k, *s))
            .collect();
        if !levels.is_empty() {
            let kinds: Vec<MultiplierKind> =
                levels.iter().map(|&(_, s)| MultiplierKind::Level(s)).collect();
            let m_cut = 1u64 << levels.last().expect("nonempty").1;
            let grids = sample_multipliers(&kinds, n, m_cut, Split::None, l)?;
            for (&(k, _), grid) in levels.iter().zip(&grids) {
                n_count[k] += 1;
                for (t, f) in inputs.iter().enumerate() {
                    let out = apply_to_spectrum(&spectra[t], f, &grid.values);
                    let acc = &mut sup[t][k];
                    if acc.is_empty() {
                        *acc = out.samples.iter().map(|v| v.abs()).collect();
                    } else {
                        for (a, v) in acc.iter_mut().zip(&out.samples) {
                            *a = a.max(v.abs());
                        }
                    }
                }
            }
        }
        n *= 2;
    }
    let zero = Signal::zeros(0, flen);
    let zspec = forward_centered(&zero, l);
    let zgrid = sample_multipliers(&[MultiplierKind::Level(1)], 8, 2, Split::None, l)?;
    let zout = apply_to_spectrum(&zspec, &zero, &zgrid[0].values).sup_norm();
    for (k, &s) in s_list.iter().enumerate() {
        let ratio = (0..inputs.len())
            .map(|t| l2(&sup[t][k]) / norms[t])
            .fold(0.0, f64::max);
        let scale = s as f64 * (-(s as f64) / 2.0).exp2();
        rep.push_row(vec![s as f64, n_count[k] as f64, ratio, ratio / scale, zout]);
    }
    rep.check(Check::equals("zero_input_zero_output", zout, 0.0));
    rep.meta("seed", p.seed);
    rep.meta("input", "random signs on [0, N_max^2 / 2)");
    rep.meta("n_range", "dyadic N with 2^(s+2) <= N <= N_max");
    rep.meta("fit", "max over trials of the l2 ratio, normalized by s 2^(-s/2)");
    Ok(rep)
}

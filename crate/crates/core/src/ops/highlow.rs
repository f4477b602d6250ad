//! High/Low split `A_N f = H_{N,J} f + L_{N,J} f` with multipliers
//! `c_N + b_{N,2}` (High) and `b_{N,1}` (Low) from the fixed-scale split `M = J`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::average::{apply_to_spectrum, average_an, forward_centered, AverageMethod};
use super::signal::{norm_p, IntervalZ, Signal};
use crate::circle::{sample_multipliers, MultiplierKind, Split};
use crate::error::{contract, domain, Result};
use crate::fft::next_pow2;

/// Precomputed multiplier grids for one `(N, J)`.
pub struct HighLowPlan {
    n: u64,
    j: u64,
    grids: Option<(Vec<Complex64>, Vec<Complex64>)>,
    len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighLowSplit {
    /// `I = [offset(f), offset(f) + N^2 - 1]`.
    pub interval: IntervalZ,
    pub high: Signal,
    pub low: Signal,
    /// `<H>_{I,2} / <f>_{2I,2}`.
    pub high_ratio: f64,
    /// `<L>_{I,inf} / <f>_{2I,1}`.
    pub low_ratio: f64,
}

impl HighLowPlan {
    pub fn new(n: u64, j: u64) -> Result<Self> {
        if n == 0 || n > 1 << 11 {
            return Err(domain!("High/Low split needs N in [1, 2^11], got {n}"));
        }
        if j == 0 || !j.is_power_of_two() {
            return Err(domain!("J = {j} must be a power of two"));
        }
        let n2 = (n * n) as usize;
        // f lives on 2I (length 2 N^2); the multipliers have scale N.
        let len = next_pow2(2 * (2 * n2 + n2 + 1));
        if 4 * j >= n {
            return Ok(Self {
                n,
                j,
                grids: None,
                len,
            });
        }
        let kinds = [MultiplierKind::C, MultiplierKind::B2, MultiplierKind::B1];
        let mut g = sample_multipliers(&kinds, n, j, Split::Fixed { j }, len)?;
        let low = g.pop().expect("three grids").values;
        let b2 = g.pop().expect("three grids").values;
        let mut high = g.pop().expect("three grids").values;
        for (h, b) in high.iter_mut().zip(&b2) {
            *h += b;
        }
        Ok(Self {
            n,
            j,
            grids: Some((high, low)),
            len,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn grid_len(&self) -> usize {
        self.len
    }

    /// True when `J >= N/4`, where `H = 0` and `L = A_N f`.
    pub fn is_trivial(&self) -> bool {
        self.grids.is_none()
    }

    pub fn split(&self, f: &Signal) -> Result<HighLowSplit> {
        let n2 = self.n * self.n;
        if f.len() as u64 > 2 * n2 {
            return Err(contract!(
                "signal of length {} exceeds 2I with |I| = N^2 = {n2}",
                f.len()
            ));
        }
        let interval = IntervalZ::with_len(f.offset, n2)?;
        let (high, low) = match &self.grids {
            None => (
                Signal::zeros(f.offset, 0),
                average_an(f, self.n, AverageMethod::Auto)?,
            ),
            Some((hg, lg)) => {
                let spec = forward_centered(f, self.len);
                (apply_to_spectrum(&spec, f, hg), apply_to_spectrum(&spec, f, lg))
            }
        };
        let two_i = interval.double();
        let f2 = norm_p(f, two_i, 2.0)?;
        let f1 = norm_p(f, two_i, 1.0)?;
        let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
        Ok(HighLowSplit {
            interval,
            high_ratio: ratio(norm_p(&high, interval, 2.0)?, f2),
            low_ratio: ratio(norm_p(&low, interval, f64::INFINITY)?, f1),
            high,
            low,
        })
    }
}

pub fn high_low_split(f: &Signal, n: u64, j: u64) -> Result<HighLowSplit> {
    HighLowPlan::new(n, j)?.split(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_branch_returns_average() {
        let f = Signal::new(0, vec![1.0; 128]).unwrap();
        let s = high_low_split(&f, 8, 2).unwrap();
        assert_eq!(s.high.sup_norm(), 0.0);
        let a = average_an(&f, 8, AverageMethod::Direct).unwrap();
        assert_eq!(s.low, a);
    }

    #[test]
    fn zero_signal_splits_to_zero() {
        let s = high_low_split(&Signal::zeros(0, 512), 16, 2).unwrap();
        assert_eq!(s.high.sup_norm(), 0.0);
        assert_eq!(s.low.sup_norm(), 0.0);
    }

    #[test]
    fn parts_sum_to_average() {
        let n = 32u64;
        let f = Signal::new(0, (0..2 * n * n).map(|i| ((i * 7919) % 3 == 0) as u8 as f64).collect())
            .unwrap();
        let s = high_low_split(&f, n, 4).unwrap();
        let a = average_an(&f, n, AverageMethod::Direct).unwrap();
        let sum = s.high.add(&s.low);
        let err = (sum.offset..sum.end()).map(|x| (sum.get(x) - a.get(x)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-7, "err = {err}");
    }

    #[test]
    fn oversized_support_rejected() {
        assert!(high_low_split(&Signal::zeros(0, 200), 8, 1).is_err());
    }
}

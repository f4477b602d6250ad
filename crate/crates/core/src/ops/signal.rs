//! Finitely supported real signals on the integers and integer intervals.

use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Result};
use crate::sum::KahanSum;

/// Longest sample array accepted.
pub const MAX_SUPPORT: usize = 1 << 26;

/// Endpoint bound keeping `2I` and `3I` representable.
pub const MAX_ENDPOINT: i64 = 1 << 61;

/// `[a, b]` intersected with the integers, `a <= b`, `|a|, |b| <= 2^61`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalZ {
    pub a: i64,
    pub b: i64,
}

impl IntervalZ {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a > b {
            return Err(domain!("interval [{a}, {b}] is empty"));
        }
        if a < -MAX_ENDPOINT || b > MAX_ENDPOINT {
            return Err(domain!("interval [{a}, {b}] exceeds +-2^61"));
        }
        Ok(Self { a, b })
    }

    /// `[start, start + len - 1]`.
    pub fn with_len(start: i64, len: u64) -> Result<Self> {
        if len == 0 || len > 1 << 62 {
            return Err(domain!("interval length {len} outside [1, 2^62]"));
        }
        Self::new(start, start.saturating_add(len as i64 - 1))
    }

    pub fn len(&self) -> u64 {
        (self.b - self.a) as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `2I = [a, 2b - a + 1]`.
    pub fn double(&self) -> Self {
        Self {
            a: self.a,
            b: 2 * self.b - self.a + 1,
        }
    }

    /// `3I = [2a - b - 1, 2b - a + 1]`, centered on `I`.
    pub fn triple(&self) -> Self {
        Self {
            a: 2 * self.a - self.b - 1,
            b: 2 * self.b - self.a + 1,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn contains_interval(&self, other: &IntervalZ) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.a..=self.b
    }
}

/// `f(x) = samples[x - offset]`, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    pub offset: i64,
    pub samples: Vec<f64>,
}

impl Signal {
    pub fn new(offset: i64, samples: Vec<f64>) -> Result<Self> {
        if samples.len() > MAX_SUPPORT {
            return Err(contract!(
                "signal length {} exceeds {MAX_SUPPORT}",
                samples.len()
            ));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(domain!("signal samples must be finite"));
        }
        if offset.checked_add(samples.len() as i64).is_none() {
            return Err(domain!("signal window overflows i64"));
        }
        Ok(Self { offset, samples })
    }

    pub fn zeros(offset: i64, len: usize) -> Self {
        Self {
            offset,
            samples: vec![0.0; len],
        }
    }

    pub fn delta(x: i64) -> Self {
        Self {
            offset: x,
            samples: vec![1.0],
        }
    }

    /// Indicator of `I`.
    pub fn indicator_interval(i: IntervalZ) -> Self {
        Self {
            offset: i.a,
            samples: vec![1.0; i.len() as usize],
        }
    }

    /// Indicator of a finite set of points; the window spans min..=max.
    pub fn indicator<I: IntoIterator<Item = i64>>(points: I) -> Self {
        let pts: Vec<i64> = points.into_iter().collect();
        let (Some(&lo), Some(&hi)) = (pts.iter().min(), pts.iter().max()) else {
            return Self::zeros(0, 0);
        };
        let mut s = Self::zeros(lo, (hi - lo + 1) as usize);
        for p in pts {
            s.samples[(p - lo) as usize] = 1.0;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.offset + self.samples.len() as i64
    }

    pub fn window(&self) -> Option<IntervalZ> {
        (!self.is_empty()).then(|| IntervalZ {
            a: self.offset,
            b: self.end() - 1,
        })
    }

    pub fn get(&self, x: i64) -> f64 {
        if x < self.offset || x >= self.end() {
            0.0
        } else {
            self.samples[(x - self.offset) as usize]
        }
    }

    /// Values on `I`, zero-extended.
    pub fn restrict(&self, i: IntervalZ) -> Signal {
        Signal {
            offset: i.a,
            samples: i.iter().map(|x| self.get(x)).collect(),
        }
    }

    /// Smallest interval holding every nonzero sample.
    pub fn support(&self) -> Option<IntervalZ> {
        let first = self.samples.iter().position(|&v| v != 0.0)?;
        let last = self.samples.iter().rposition(|&v| v != 0.0)?;
        Some(IntervalZ {
            a: self.offset + first as i64,
            b: self.offset + last as i64,
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        let mut s = KahanSum::new();
        for v in &self.samples {
            s.add(v * v);
        }
        s.value().sqrt()
    }

    /// Pointwise sum over the union window.
    pub fn add(&self, other: &Signal) -> Signal {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        Signal {
            offset: lo,
            samples: (lo..hi).map(|x| self.get(x) + other.get(x)).collect(),
        }
    }
}

/// Normalized norm `(|I|^{-1} sum_{x in I} |f(x)|^p)^{1/p}`; `p = inf` gives the max.
pub fn norm_p(f: &Signal, i: IntervalZ, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(domain!("norm_p needs p >= 1, got {p}"));
    }
    if p.is_infinite() {
        return Ok(i.iter().fold(0.0f64, |m, x| m.max(f.get(x).abs())));
    }
    let mut s = KahanSum::new();
    // Only the overlap with the stored window contributes.
    let lo = i.a.max(f.offset);
    let hi = i.b.min(f.end() - 1);
    for x in lo..=hi {
        let v = f.get(x).abs();
        if v != 0.0 {
            s.add(if p == 1.0 { v } else if p == 2.0 { v * v } else { v.powf(p) });
        }
    }
    let mean = s.value() / i.len() as f64;
    Ok(if p == 1.0 {
        mean
    } else if p == 2.0 {
        mean.sqrt()
    } else {
        mean.powf(1.0 / p)
    })
}

/// `sum_x u(x) v(x)`.
pub fn bilinear(u: &Signal, v: &Signal) -> f64 {
    let lo = u.offset.max(v.offset);
    let hi = u.end().min(v.end());
    let mut s = KahanSum::new();
    for x in lo..hi {
        s.add(u.get(x) * v.get(x));
    }
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_conventions() {
        let i = IntervalZ::new(3, 6).unwrap();
        assert_eq!(i.len(), 4);
        assert_eq!(i.double(), IntervalZ { a: 3, b: 10 });
        assert_eq!(i.triple(), IntervalZ { a: -1, b: 10 });
        assert_eq!(i.triple().len(), 12);
        assert!(IntervalZ::new(2, 1).is_err());
    }

    #[test]
    fn norm_examples() {
        let i = IntervalZ::new(-4, 11).unwrap();
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert!((norm_p(&Signal::indicator_interval(i), i, p).unwrap() - 1.0).abs() < 1e-15);
        }
        let d = Signal::delta(0);
        assert!((norm_p(&d, i, 2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((norm_p(&d, i, 1.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!(norm_p(&d, i, 0.5).is_err());
    }

    #[test]
    fn bilinear_examples() {
        assert_eq!(bilinear(&Signal::delta(0), &Signal::delta(0)), 1.0);
        assert_eq!(bilinear(&Signal::delta(0), &Signal::delta(1)), 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Signal::new(0, vec![1.0, f64::NAN]).is_err());
    }
}

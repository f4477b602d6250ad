//! The averages `A_N f(x) = (1/N) sum_{k=1}^{N} f(x + k^2)`, their dyadic
//! maximal function, and multiplier application by periodized DFT.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::signal::{Signal, MAX_SUPPORT};
use crate::circle::MultiplierGrid;
use crate::error::{contract, domain, Result};
use crate::fft;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AverageMethod {
    Direct,
    Dft,
    /// Direct when `N * support` is small, DFT otherwise.
    Auto,
}

const AUTO_DIRECT_WORK: u128 = 1 << 26;

/// `(1/|S|) sum_{s in S} f(x + s)` on the window where it can be nonzero.
pub fn average_shifts(f: &Signal, shifts: &[i64]) -> Result<Signal> {
    if shifts.is_empty() {
        return Err(domain!("average needs at least one shift"));
    }
    let smax = *shifts.iter().max().expect("nonempty");
    let smin = *shifts.iter().min().expect("nonempty");
    if f.is_empty() {
        return Ok(Signal::zeros(f.offset, 0));
    }
    let out_len = f.len() as u128 + (smax - smin) as u128;
    if out_len > MAX_SUPPORT as u128 {
        return Err(contract!("average output length {out_len} too large"));
    }
    let mut out = vec![0.0; out_len as usize];
    for (i, &v) in f.samples.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        for &s in shifts {
            out[i + (smax - s) as usize] += v;
        }
    }
    let w = 1.0 / shifts.len() as f64;
    for v in &mut out {
        *v *= w;
    }
    Signal::new(f.offset - smax, out)
}

fn square_shifts(n: u64) -> Vec<i64> {
    (1..=n as i64).map(|k| k * k).collect()
}

pub fn average_an(f: &Signal, n: u64, method: AverageMethod) -> Result<Signal> {
    if n == 0 || n > 1 << 13 {
        return Err(domain!("average_an: N = {n} outside [1, 2^13]"));
    }
    let method = match method {
        AverageMethod::Auto if (n as u128) * (f.len() as u128) <= AUTO_DIRECT_WORK => {
            AverageMethod::Direct
        }
        AverageMethod::Auto => AverageMethod::Dft,
        m => m,
    };
    match method {
        AverageMethod::Direct => average_shifts(f, &square_shifts(n)),
        _ => average_an_dft(f, n),
    }
}

/// Circular correlation with `K_N` on a zero-padded buffer of length
/// `next_pow2(4 (|supp f| + N^2))`.
fn average_an_dft(f: &Signal, n: u64) -> Result<Signal> {
    if f.is_empty() {
        return Ok(Signal::zeros(f.offset, 0));
    }
    let n2 = (n * n) as usize;
    let out_len = f.len() + n2 - 1;
    let l = fft::next_pow2(4 * (f.len() + n2));
    if out_len > MAX_SUPPORT || l > 4 * MAX_SUPPORT {
        return Err(contract!("average output length {out_len} too large"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut buf = vec![zero; l];
    for (i, &v) in f.samples.iter().enumerate() {
        buf[i + n2] = Complex64::new(v, 0.0);
    }
    let mut ker = vec![zero; l];
    let w = 1.0 / n as f64;
    for k in 1..=n as usize {
        ker[(l - k * k % l) % l] += w;
    }
    fft::forward(&mut buf);
    fft::forward(&mut ker);
    for (b, k) in buf.iter_mut().zip(&ker) {
        *b *= k;
    }
    fft::inverse(&mut buf);
    let scale = 1.0 / l as f64;
    let samples = buf[..out_len].iter().map(|z| z.re * scale).collect();
    Signal::new(f.offset - n2 as i64, samples)
}

/// `(1/|S|) sum_{s in S} f(x + s)` for many signals of bounded length, with the
/// kernel spectrum computed once. Linear correlation needs only
/// `L >= len + span`, so no padding factor is applied here.
pub struct ShiftAverager {
    shifts: Vec<i64>,
    smax: i64,
    span: usize,
    max_len: usize,
    kernel: Vec<Complex64>,
}

impl ShiftAverager {
    pub fn new(shifts: &[i64], max_len: usize) -> Result<Self> {
        if shifts.is_empty() || max_len == 0 {
            return Err(domain!("averager needs shifts and a positive length"));
        }
        let smax = *shifts.iter().max().expect("nonempty");
        let smin = *shifts.iter().min().expect("nonempty");
        let span = (smax - smin) as usize;
        if max_len + span > MAX_SUPPORT {
            return Err(contract!("averager window {} too large", max_len + span));
        }
        let l = fft::next_pow2(max_len + span);
        let mut kernel = vec![Complex64::new(0.0, 0.0); l];
        let w = 1.0 / shifts.len() as f64;
        for &s in shifts {
            kernel[(smax - s) as usize] += w;
        }
        fft::forward(&mut kernel);
        Ok(Self {
            shifts: shifts.to_vec(),
            smax,
            span,
            max_len,
            kernel,
        })
    }

    /// DFT length.
    pub fn dft_len(&self) -> usize {
        self.kernel.len()
    }

    /// Output window `[offset - max S, end - min S)`. Direct summation when the
    /// nonzero count makes it cheaper than two transforms.
    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        if f.len() > self.max_len {
            return Err(contract!(
                "signal length {} exceeds the averager's {}",
                f.len(),
                self.max_len
            ));
        }
        if f.is_empty() {
            return Ok(Signal::zeros(f.offset, 0));
        }
        let l = self.kernel.len();
        let nnz = f.samples.iter().filter(|v| **v != 0.0).count();
        let direct_work = nnz as f64 * self.shifts.len() as f64;
        if direct_work <= 4.0 * l as f64 * (l as f64).log2() {
            return average_shifts(f, &self.shifts);
        }
        self.apply_dft(f)
    }

    fn apply_dft(&self, f: &Signal) -> Result<Signal> {
        let l = self.kernel.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); l];
        for (b, &v) in buf.iter_mut().zip(&f.samples) {
            b.re = v;
        }
        fft::forward(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel) {
            *b *= k;
        }
        fft::inverse(&mut buf);
        let scale = 1.0 / l as f64;
        let out_len = f.len() + self.span;
        let samples = buf[..out_len].iter().map(|z| z.re * scale).collect();
        Signal::new(f.offset - self.smax, samples)
    }
}

/// `max_{N in {1, 2, 4, ..., dyadic_max}} |A_N f|` on the widest output window.
pub fn maximal_a(f: &Signal, dyadic_max: u64) -> Result<Signal> {
    if dyadic_max == 0 || !dyadic_max.is_power_of_two() {
        return Err(domain!("dyadic_max = {dyadic_max} must be a power of two"));
    }
    let d2 = (dyadic_max * dyadic_max) as i64;
    let mut out = Signal::zeros(f.offset - d2, f.len() + d2 as usize - 1);
    if f.is_empty() {
        return Ok(Signal::zeros(f.offset, 0));
    }
    let mut n = 1u64;
    while n <= dyadic_max {
        let a = average_an(f, n, AverageMethod::Auto)?;
        let shift = (a.offset - out.offset) as usize;
        for (i, v) in a.samples.iter().enumerate() {
            let slot = &mut out.samples[i + shift];
            *slot = slot.max(v.abs());
        }
        n *= 2;
    }
    Ok(out)
}

/// `F^{-1}(m F f)` by a length-`L` circular convolution with `f` centered in the buffer.
/// Requires `L >= 2 (|supp f| + N^2 + 1)` for the grid's scale `N`.
pub fn apply_multiplier(f: &Signal, grid: &MultiplierGrid) -> Result<Signal> {
    let l = grid.len();
    let n2 = grid.n as u128 * grid.n as u128;
    if (l as u128) < 2 * (f.len() as u128 + n2 + 1) {
        return Err(contract!(
            "grid length {l} too short for support {} and N = {}",
            f.len(),
            grid.n
        ));
    }
    let spectrum = forward_centered(f, l);
    Ok(apply_to_spectrum(&spectrum, f, &grid.values))
}

/// Forward DFT of `f` placed at `(L - |f|)/2` in a zero buffer of length `L`.
pub(crate) fn forward_centered(f: &Signal, l: usize) -> Vec<Complex64> {
    let start = (l - f.len()) / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    for (i, &v) in f.samples.iter().enumerate() {
        buf[start + i] = Complex64::new(v, 0.0);
    }
    fft::forward(&mut buf);
    buf
}

/// Inverse transform of `spectrum * m`, as a signal over the whole buffer window.
pub(crate) fn apply_to_spectrum(spectrum: &[Complex64], f: &Signal, m: &[Complex64]) -> Signal {
    let l = spectrum.len();
    let start = (l - f.len()) / 2;
    let mut buf: Vec<Complex64> = spectrum.iter().zip(m).map(|(a, b)| a * b).collect();
    fft::inverse(&mut buf);
    let scale = 1.0 / l as f64;
    Signal {
        offset: f.offset - start as i64,
        samples: buf.into_iter().map(|z| z.re * scale).collect(),
    }
}

//! Shared FFT plan cache over `rustfft`.
//!
//! Forward transforms use `e(-jk/L)`; inverse transforms use `e(+jk/L)` and
//! are not normalized.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanKey = (usize, bool);

static PLANS: LazyLock<Mutex<(FftPlanner<f64>, HashMap<PlanKey, Arc<dyn Fft<f64>>>)>> =
    LazyLock::new(|| Mutex::new((FftPlanner::new(), HashMap::new())));

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let key = (len, direction == FftDirection::Forward);
    let mut guard = PLANS.lock().unwrap_or_else(|p| p.into_inner());
    let (planner, cache) = &mut *guard;
    if let Some(p) = cache.get(&key) {
        return Arc::clone(p);
    }
    let p = planner.plan_fft(len, direction);
    cache.insert(key, Arc::clone(&p));
    p
}

pub fn forward(buf: &mut [Complex64]) {
    if !buf.is_empty() {
        plan(buf.len(), FftDirection::Forward).process(buf);
    }
}

/// Unnormalized inverse: `out[x] = sum_a buf[a] e(a x / L)`.
pub fn inverse(buf: &mut [Complex64]) {
    if !buf.is_empty() {
        plan(buf.len(), FftDirection::Inverse).process(buf);
    }
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

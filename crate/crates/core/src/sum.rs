//! Compensated (Neumaier) accumulation for real and complex sums.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn kahan<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = KahanSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

pub fn complex_kahan<I: IntoIterator<Item = Complex64>>(it: I) -> Complex64 {
    let mut s = ComplexSum::new();
    for z in it {
        s.add(z);
    }
    s.value()
}

/// `e(r/m) = exp(2 pi i r/m)` with `r` reduced modulo `m` first.
#[inline]
pub fn unit_root(r: i128, m: u64) -> Complex64 {
    let m = m as i128;
    let mut r = r.rem_euclid(m);
    // Fold into (-m/2, m/2] so the angle stays small.
    if 2 * r > m {
        r -= m;
    }
    let t = std::f64::consts::TAU * (r as f64) / (m as f64);
    Complex64::new(t.cos(), t.sin())
}

/// `e(t) = exp(2 pi i t)` for a real phase, reduced to [-1/2, 1/2] first.
#[inline]
pub fn e(t: f64) -> Complex64 {
    let f = t - t.round();
    let a = std::f64::consts::TAU * f;
    Complex64::new(a.cos(), a.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(kahan(v), 2.0);
    }

    #[test]
    fn unit_root_quarter_turns() {
        let z = unit_root(1, 4);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let z = unit_root(-1, 4);
        assert!((z - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let z = unit_root(6, 4);
        assert!((z + 1.0).norm() < 1e-15);
    }
}

//! Smooth even bump with `chi_[-1/4,1/4] <= eta <= chi_[-1/2,1/2]`.

fn psi(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`.
fn step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = psi(t);
        a / (a + psi(1.0 - t))
    }
}

pub fn eta(x: f64) -> f64 {
    step(4.0 * (0.5 - x.abs()))
}

/// `eta_k(x) = eta(k x)`.
pub fn eta_k(k: f64, x: f64) -> f64 {
    eta(k * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sandwich_on_fine_grid() {
        for i in -100_000..=100_000 {
            let x = i as f64 * 1e-5;
            let v = eta(x);
            assert!((0.0..=1.0).contains(&v));
            if x.abs() <= 0.25 {
                assert_eq!(v, 1.0);
            }
            if x.abs() >= 0.5 {
                assert_eq!(v, 0.0);
            }
            assert_eq!(v, eta(-x));
        }
    }

    #[test]
    fn midpoint_value() {
        assert!((eta(0.375) - 0.5).abs() < 1e-15);
        assert_eq!(eta_k(4.0, 0.1), eta(0.4));
    }
}

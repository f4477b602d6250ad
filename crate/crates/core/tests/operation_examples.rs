//! Worked input/output pairs for the public operations. Values marked as
//! oracles are recomputed here by independent brute force.

use num_complex::Complex64;
use sqlab_core::arith::{count_sqrts, count_sqrts_bruteforce, epsilon, factorize, jacobi, UnitEps};
use sqlab_core::circle::{
    arc_multipliers, dirichlet_approx, fjk_remainder, gamma_n, sample_multiplier, weyl_multiplier,
    Freq, MultiplierKind, Split,
};
use sqlab_core::gauss::{gauss_g, gauss_g0, GaussMethod};
use sqlab_core::hsum::{
    divisor_set, h0_fast, h_sum, log_average_s, scan_max_s, support_verdict, HKind, SMethod,
    SupportFlavor,
};
use sqlab_core::ops::{
    apply_multiplier, average_an, bilinear, high_low_split, maximal_a, norm_p, AverageMethod,
    IntervalZ, Signal,
};
use sqlab_core::sparse::{
    apply_a_tau, build_admissible_tau, check_admissible, find_stopping_children, sparse_decompose,
    sparse_form, verify_sparsity, SparseCollection, StoppingTime,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

fn fq(n: i64, d: u64) -> Freq {
    Freq::new(n, d).unwrap()
}

/// Legendre symbol by exhaustive squaring.
fn legendre_brute(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if (1..p).any(|l| l * l % p == a) {
        1
    } else {
        -1
    }
}

#[test]
fn factorize_examples() {
    assert!(factorize(1).unwrap().factors().is_empty());
    assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
    let m61 = (1u64 << 61) - 1;
    assert_eq!(factorize(m61).unwrap().factors(), &[(m61, 1)]);
}

#[test]
fn jacobi_examples() {
    assert_eq!(jacobi(1, 1).unwrap(), 1);
    assert_eq!(jacobi(3, 9).unwrap(), 0);
    assert_eq!(jacobi(2, 15).unwrap(), legendre_brute(2, 3) * legendre_brute(2, 5));
    assert_eq!(jacobi(2, 15).unwrap(), 1);
    assert!(jacobi(1, 4).is_err());
}

#[test]
fn epsilon_examples() {
    assert_eq!(epsilon(1).unwrap(), UnitEps::One);
    assert_eq!(epsilon(3).unwrap(), UnitEps::I);
    assert_eq!(epsilon(7).unwrap(), UnitEps::I);
    assert!(epsilon(2).is_err());
}

#[test]
fn square_root_count_examples() {
    assert_eq!(count_sqrts_bruteforce(0, 1).unwrap(), 1);
    assert_eq!(count_sqrts_bruteforce(1, 8).unwrap(), 4);
    assert_eq!(count_sqrts_bruteforce(2, 3).unwrap(), 0);
    assert_eq!(count_sqrts(0, 9).unwrap(), 3);
    assert_eq!(count_sqrts(1, 3).unwrap(), 2);
    assert_eq!(count_sqrts(3, 9).unwrap(), 0);
}

#[test]
fn gauss_examples() {
    let r3 = 3f64.sqrt();
    for m in [GaussMethod::Direct, GaussMethod::Closed] {
        assert!(close(gauss_g(0, 1, m).unwrap(), c(1.0, 0.0), 1e-12));
        assert!(close(gauss_g(1, 3, m).unwrap(), c(0.0, 1.0 / r3), 1e-12));
        assert!(close(gauss_g(1, 2, m).unwrap(), c(0.0, 0.0), 1e-12));
        assert!(close(gauss_g0(1, 1, m).unwrap(), c(0.0, 0.0), 1e-12));
        assert!(close(gauss_g0(1, 2, m).unwrap(), c(0.5, 0.5), 1e-12));
        assert!(close(gauss_g0(2, 1, m).unwrap(), c(1.0, 0.0), 1e-12));
    }
}

#[test]
fn h_sum_examples() {
    for x in -5..5 {
        assert!(h_sum(HKind::H, 1, x).unwrap().norm() < 1e-12);
        assert!(close(h_sum(HKind::H1, 1, x).unwrap(), c(1.0, 0.0), 1e-12));
    }
    assert!(close(h_sum(HKind::H0, 3, 0).unwrap(), c(1.0, 0.0), 1e-12));
    assert_eq!(h0_fast(1, 7).unwrap(), 1);
    assert_eq!(h0_fast(3, 0).unwrap(), 1);
    assert_eq!(h0_fast(8, -1).unwrap(), 4);
}

#[test]
fn support_verdict_examples() {
    let v = support_verdict(9, 1, SupportFlavor::Plain).unwrap();
    assert!(!v.in_support);
    assert!(h_sum(HKind::H, 9, 1).unwrap().norm() < 1e-12);
    let v = support_verdict(3, 1, SupportFlavor::Plain).unwrap();
    assert!(v.in_support && (v.bound - 1.0).abs() < 1e-12);
    assert!((h_sum(HKind::H, 3, 1).unwrap().norm() - 1.0).abs() < 1e-12);
    let v = support_verdict(4, 1, SupportFlavor::Plain).unwrap();
    assert!(v.in_support && (v.bound - 2.0).abs() < 1e-12);
    assert!(h_sum(HKind::H, 4, 1).unwrap().norm() <= 2.0 + 1e-9);
}

#[test]
fn divisor_set_matches_direct_scan() {
    for x in [0i64, 1, 12, 360, 499] {
        let d = divisor_set(x, 60).unwrap();
        for q in 1..=60u64 {
            if h_sum(HKind::H, q, x).unwrap().norm() > 1e-9 {
                assert!(d.contains(q), "q = {q}, x = {x}");
            }
        }
    }
    assert!(divisor_set(0, 4).unwrap().contains(2));
}

#[test]
fn log_average_examples() {
    for m in [SMethod::Direct, SMethod::SupportFiltered] {
        assert_eq!(log_average_s(17, 1, m).unwrap(), 0.0);
        assert!((log_average_s(0, 4, m).unwrap() - 0.5).abs() < 1e-12);
        let want = h_sum(HKind::H, 2, 1).unwrap().norm() / 2.0 + h_sum(HKind::H, 3, 1).unwrap().norm() / 3.0;
        assert!((log_average_s(1, 3, m).unwrap() - want).abs() < 1e-12);
    }
    assert_eq!(scan_max_s(1, 0, 100, false).unwrap().1, 0.0);
    let (x, v) = scan_max_s(16, 0, 0, false).unwrap();
    assert_eq!(x, 0);
    assert!((v - log_average_s(0, 16, SMethod::Direct).unwrap()).abs() < 1e-12);
}

#[test]
fn weyl_and_dirichlet_examples() {
    assert!(close(weyl_multiplier(fq(0, 1), 37).unwrap(), c(1.0, 0.0), 1e-14));
    assert!(weyl_multiplier(fq(1, 2), 2).unwrap().norm() < 1e-14);
    assert!(close(weyl_multiplier(fq(1, 4), 1).unwrap(), c(0.0, 1.0), 1e-14));
    let r = dirichlet_approx(fq(0, 1), 5).unwrap();
    assert_eq!((r.a, r.q), (0, 1));
    let r = dirichlet_approx(fq(1, 3), 2).unwrap();
    assert_eq!((r.a, r.q), (2, 3));
    let r = dirichlet_approx(fq(1, 2), 4).unwrap();
    assert_eq!((r.a, r.q), (1, 1));
}

/// `int_0^1 e(t^2/2) dt = sum_n (i pi)^n / (n! (2n + 1))`.
fn fresnel_series() -> Complex64 {
    let z = c(0.0, std::f64::consts::PI);
    let mut term = c(1.0, 0.0);
    let mut sum = c(0.0, 0.0);
    for n in 0..60 {
        sum += term / (2 * n + 1) as f64;
        term = term * z / (n + 1) as f64;
    }
    sum
}

#[test]
fn gamma_examples() {
    assert!(close(gamma_n(0.0, 9, 1e-12).unwrap(), c(1.0, 0.0), 1e-14));
    assert!(close(gamma_n(1.0, 1, 1e-12).unwrap(), fresnel_series(), 1e-12));
    for (theta, n) in [(0.01, 64u64), (1e-3, 1024), (0.3, 100)] {
        let g = gamma_n(theta, n, 1e-12).unwrap().norm();
        assert!(g <= 1.0 / (n as f64 * f64::sqrt(theta)) + 1e-12);
    }
}

#[test]
fn arc_and_fjk_examples() {
    for j in [0i64, 1, 77, 500, 1023] {
        let xi = fq(j, 1024);
        let d = arc_multipliers(xi, 64, 16, Split::None).unwrap();
        assert!(close(d.a_n + d.c_n, weyl_multiplier(xi, 64).unwrap(), 1e-12));
    }
    let r = fjk_remainder(fq(0, 1), 128).unwrap();
    assert!(r.remainder < 1e-14);
    let g = sample_multiplier(MultiplierKind::Weyl, 8, 1, Split::None, 256).unwrap();
    assert!(close(g.values[0], c(1.0, 0.0), 1e-12));
}

#[test]
fn average_examples() {
    let f = Signal::new(3, vec![1.0, -2.0, 4.0]).unwrap();
    let a = average_an(&f, 1, AverageMethod::Direct).unwrap();
    for x in 0..8 {
        assert_eq!(a.get(x), f.get(x + 1));
    }
    for m in [AverageMethod::Direct, AverageMethod::Dft] {
        let a = average_an(&Signal::delta(5), 2, m).unwrap();
        for x in -2..8 {
            let want = if x == 4 || x == 1 { 0.5 } else { 0.0 };
            assert!((a.get(x) - want).abs() < 1e-12, "x = {x}");
        }
    }
    let n = 12i64;
    let sq = Signal::indicator((1..=n).map(|k| k * k));
    let a = average_an(&sq, n as u64, AverageMethod::Direct).unwrap();
    assert_eq!(a.get(0), 1.0);
    assert_eq!(bilinear(&a, &Signal::delta(0)), 1.0);
}

#[test]
fn maximal_examples() {
    let f = Signal::new(0, vec![0.5, 1.0, 0.0, 2.0]).unwrap();
    let m = maximal_a(&f, 1).unwrap();
    let a1 = average_an(&f, 1, AverageMethod::Direct).unwrap();
    for x in -2..5 {
        assert_eq!(m.get(x), a1.get(x));
    }
    let m = maximal_a(&Signal::delta(0), 8).unwrap();
    for k in 1..=8i64 {
        let n = (k as u64).next_power_of_two();
        assert!(m.get(-k * k) >= 1.0 / n as f64 - 1e-12);
    }
    let z = maximal_a(&Signal::zeros(0, 5), 4).unwrap();
    assert_eq!(z.sup_norm(), 0.0);
}

#[test]
fn norm_and_bilinear_examples() {
    let i = IntervalZ::new(-3, 4).unwrap();
    for p in [1.0, 1.5, 2.0, f64::INFINITY] {
        assert!((norm_p(&Signal::indicator_interval(i), i, p).unwrap() - 1.0).abs() < 1e-12);
    }
    for p in [1.0, 1.6, 2.0] {
        let want = (8f64).powf(-1.0 / p);
        assert!((norm_p(&Signal::delta(2), i, p).unwrap() - want).abs() < 1e-12);
    }
    assert_eq!(bilinear(&Signal::delta(0), &Signal::delta(0)), 1.0);
    assert_eq!(bilinear(&Signal::delta(0), &Signal::delta(1)), 0.0);
}

#[test]
fn multiplier_examples() {
    let f = Signal::new(-7, (0..40).map(|k| ((k * 37) % 11) as f64 - 5.0).collect()).unwrap();
    let n = 8u64;
    let l = 512usize;
    let weyl = sample_multiplier(MultiplierKind::Weyl, n, 2, Split::None, l).unwrap();
    let got = apply_multiplier(&f, &weyl).unwrap();
    let want = average_an(&f, n, AverageMethod::Direct).unwrap();
    for x in want.offset..want.end() {
        assert!((got.get(x) - want.get(x)).abs() < 1e-7);
    }
    let mut one = weyl.clone();
    one.values.iter_mut().for_each(|v| *v = c(1.0, 0.0));
    let same = apply_multiplier(&f, &one).unwrap();
    for x in f.offset..f.end() {
        assert!((same.get(x) - f.get(x)).abs() < 1e-10);
    }
    let a = sample_multiplier(MultiplierKind::A, n, 2, Split::None, l).unwrap();
    let cn = sample_multiplier(MultiplierKind::C, n, 2, Split::None, l).unwrap();
    let (fa, fc) = (apply_multiplier(&f, &a).unwrap(), apply_multiplier(&f, &cn).unwrap());
    for x in want.offset..want.end() {
        assert!((fa.get(x) + fc.get(x) - want.get(x)).abs() < 1e-7);
    }
}

#[test]
fn high_low_examples() {
    let f = Signal::new(0, (0..128).map(|k| (k % 3) as f64).collect()).unwrap();
    let s = high_low_split(&f, 8, 2).unwrap();
    assert_eq!(s.high.sup_norm(), 0.0);
    let a = average_an(&f, 8, AverageMethod::Direct).unwrap();
    for x in a.offset..a.end() {
        assert!((s.low.get(x) - a.get(x)).abs() < 1e-9);
    }
    let z = high_low_split(&Signal::zeros(0, 64), 32, 2).unwrap();
    assert!(z.high.sup_norm() < 1e-12 && z.low.sup_norm() < 1e-12);
}

#[test]
fn stopping_examples() {
    let e = IntervalZ::with_len(0, 256).unwrap();
    let zero = Signal::zeros(0, 0);
    assert!(find_stopping_children(e, &zero, 8.0).unwrap().is_empty());
    let full = Signal::indicator_interval(e.double());
    assert!(find_stopping_children(e, &full, 8.0).unwrap().is_empty());

    let tau = build_admissible_tau(e, &zero, 8.0).unwrap();
    assert!(tau.values().iter().all(|&t| t == 16));
    let one = IntervalZ::with_len(5, 1).unwrap();
    let t1 = build_admissible_tau(one, &zero, 8.0).unwrap();
    assert_eq!(t1.values(), &[1]);

    let cluster = Signal::indicator(100..104);
    let tau = build_admissible_tau(e, &cluster, 8.0).unwrap();
    assert!(check_admissible(&tau, &cluster, 8.0).unwrap());
    let q = IntervalZ::with_len(0, 16).unwrap();
    let f = Signal::indicator(4..8);
    assert!(!check_admissible(&StoppingTime::constant(q, 1).unwrap(), &f, 2.0).unwrap());
    assert!(check_admissible(&StoppingTime::constant(q, 1).unwrap(), &zero, 2.0).unwrap());

    let g = Signal::new(0, (0..512).map(|k| (k % 5) as f64).collect()).unwrap();
    let at = apply_a_tau(&g, &StoppingTime::constant(e, 4).unwrap()).unwrap();
    let a4 = average_an(&g, 4, AverageMethod::Direct).unwrap();
    for x in e.iter() {
        assert!((at.get(x) - a4.get(x)).abs() < 1e-12);
    }
    assert_eq!(apply_a_tau(&zero, &tau).unwrap().sup_norm(), 0.0);
}

#[test]
fn sparse_examples() {
    let e = IntervalZ::with_len(0, 64).unwrap();
    let zero = Signal::zeros(0, 0);
    let col = sparse_decompose(e, &zero, &zero, 8.0).unwrap();
    assert_eq!(col.len(), 1);
    assert_eq!(col.items()[0].witness, e.iter().collect::<Vec<_>>());
    assert!(verify_sparsity(&col));

    let f = Signal::indicator(10..12).add(&Signal::indicator(90..93));
    let col = sparse_decompose(e, &f, &Signal::indicator_interval(e), 8.0).unwrap();
    assert!(verify_sparsity(&col));
    assert!(col.len() > 1);

    let single = sparse_decompose(e, &zero, &zero, 8.0).unwrap();
    let v = sparse_form(
        &single,
        &Signal::indicator_interval(e.double()),
        &Signal::indicator_interval(e),
        1.6,
        1.6,
    )
    .unwrap();
    assert!((v - 64.0).abs() < 1e-9);
    assert_eq!(sparse_form(&SparseCollection::default(), &f, &f, 1.0, 1.0).unwrap(), 0.0);
}

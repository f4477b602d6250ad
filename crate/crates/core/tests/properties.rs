//! Property tests for the arithmetic, Gauss-sum, H-sum, circle-method,
//! operator and sparse invariants.

use proptest::prelude::*;
use sqlab_core::arith::{count_sqrts, count_sqrts_bruteforce, jacobi};
use sqlab_core::circle::{dirichlet_approx, gamma_bound, gamma_n, Freq};
use sqlab_core::codec::{
    decode_signal_binary, decode_signal_json, decode_sparse_collection_json,
    encode_signal_binary, encode_signal_json, encode_sparse_collection_json,
};
use sqlab_core::gauss::{gauss_g, gauss_g0, GaussMethod};
use sqlab_core::hsum::{h_sum, HKind};
use sqlab_core::ops::{average_an, norm_p, AverageMethod, IntervalZ, Signal};
use sqlab_core::sparse::{
    build_admissible_tau, check_admissible, find_stopping_children, sparse_decompose,
    verify_sparsity,
};

fn odd() -> impl Strategy<Value = u64> {
    (0u64..5000).prop_map(|k| 2 * k + 1)
}

fn indicator_on(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::bool::weighted(0.15), len)
        .prop_map(|v| v.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jacobi_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, n in odd()) {
        let ab = jacobi(a * b, n).unwrap();
        prop_assert_eq!(ab, jacobi(a, n).unwrap() * jacobi(b, n).unwrap());
    }

    #[test]
    fn sqrt_count_matches_bruteforce(q in 1u64..6000, x in any::<i64>()) {
        prop_assert_eq!(count_sqrts(x, q).unwrap(), count_sqrts_bruteforce(x, q).unwrap());
    }

    #[test]
    fn closed_gauss_matches_direct(q in 1u64..3000, a in any::<i64>()) {
        let d = gauss_g(a, q, GaussMethod::Direct).unwrap();
        prop_assert!((gauss_g(a, q, GaussMethod::Closed).unwrap() - d).norm() < 1e-10);
        let d0 = gauss_g0(a, q, GaussMethod::Direct).unwrap();
        prop_assert!((gauss_g0(a, q, GaussMethod::Closed).unwrap() - d0).norm() < 1e-10);
        let g2 = gauss_g(a.wrapping_rem(1 << 40) * 2, 2 * q, GaussMethod::Closed).unwrap();
        let g1 = gauss_g(a.wrapping_rem(1 << 40), q, GaussMethod::Closed).unwrap();
        prop_assert!((g2 - g1).norm() < 1e-12);
    }

    #[test]
    fn h_is_2q_periodic_and_below_sqrt_q(q in 1u64..400, x in -100_000i64..100_000) {
        let h = h_sum(HKind::H, q, x).unwrap();
        prop_assert_eq!(h, h_sum(HKind::H, q, x + 2 * q as i64).unwrap());
        prop_assert!(h.norm() <= (q as f64).sqrt() + 1e-9);
    }

    #[test]
    fn dirichlet_inequality_is_exact(num in any::<i64>(), lg in 1u32..40, n in 1u64..5000) {
        let xi = Freq::new(num, 1u64 << lg).unwrap();
        let r = dirichlet_approx(xi, n).unwrap();
        prop_assert!(r.q >= 1 && r.q <= 4 * n && r.a < 2 * r.q);
        // |2 xi - a/q| on 2T, as (2 num q - a den) / (q den), wrapped mod 2.
        let (x, d, q) = (xi.num() as i128, xi.den() as i128, r.q as i128);
        let m = 2 * q * d;
        let mut off = (2 * x * q - r.a as i128 * d).rem_euclid(m);
        if off > m / 2 {
            off = m - off;
        }
        prop_assert!(off * 4 * n as i128 <= d, "off {} den {}", off, d);
    }

    #[test]
    fn gamma_respects_decay_bound(theta in -1.0f64..1.0, n in 1u64..512) {
        let g = gamma_n(theta, n, 1e-11).unwrap();
        prop_assert!(g.norm() <= gamma_bound(theta, n) + 1e-9);
    }

    #[test]
    fn average_methods_agree_and_contract(
        samples in prop::collection::vec(-3.0f64..3.0, 1..200),
        offset in -1000i64..1000,
        n in 1u64..40,
    ) {
        let f = Signal::new(offset, samples).unwrap();
        let d = average_an(&f, n, AverageMethod::Direct).unwrap();
        let t = average_an(&f, n, AverageMethod::Dft).unwrap();
        prop_assert_eq!(d.offset, t.offset);
        for (a, b) in d.samples.iter().zip(&t.samples) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!(d.sup_norm() <= f.sup_norm() + 1e-12);
    }

    #[test]
    fn signal_codecs_round_trip(
        samples in prop::collection::vec(-1e300f64..1e300, 0..64),
        offset in -(1i64 << 60)..(1i64 << 60),
    ) {
        let f = Signal::new(offset, samples).unwrap();
        prop_assert_eq!(&decode_signal_binary(&encode_signal_binary(&f)).unwrap(), &f);
        prop_assert_eq!(&decode_signal_json(&encode_signal_json(&f).unwrap()).unwrap(), &f);
    }

    #[test]
    fn decoders_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..96)) {
        let _ = decode_signal_binary(&bytes);
        let _ = decode_signal_json(&bytes);
        let _ = decode_sparse_collection_json(&bytes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // C >= 8 is what makes children mass <= |E|/4: sum |I| < 2|E|/C.
    #[test]
    fn sparse_recursion_invariants(lg in 4u32..10, v in indicator_on(1024), c in 8.0f64..16.0) {
        let len = 1u64 << lg;
        let e = IntervalZ::with_len(0, len).unwrap();
        let f = Signal::new(0, v[..2 * len as usize].to_vec()).unwrap();
        let g = Signal::indicator_interval(e);
        let col = sparse_decompose(e, &f, &g, c).unwrap();
        prop_assert!(verify_sparsity(&col));
        for it in col.items() {
            let i = it.interval();
            let kids = find_stopping_children(i, &f.restrict(i.double()), c).unwrap();
            let mass: u64 = kids.iter().map(|k| k.len()).sum();
            prop_assert!(4 * mass <= i.len());
        }
        let back = decode_sparse_collection_json(&encode_sparse_collection_json(&col).unwrap()).unwrap();
        prop_assert_eq!(back, col);
        let tau = build_admissible_tau(e, &f, c).unwrap();
        prop_assert!(check_admissible(&tau, &f, c).unwrap());
    }

    #[test]
    fn norms_are_monotone_in_p(v in prop::collection::vec(0.0f64..5.0, 1..100)) {
        let f = Signal::new(0, v.clone()).unwrap();
        let i = IntervalZ::with_len(0, v.len() as u64).unwrap();
        let ps = [1.0, 4.0 / 3.0, 1.6, 2.0, 3.0, f64::INFINITY];
        let ns: Vec<f64> = ps.iter().map(|&p| norm_p(&f, i, p).unwrap()).collect();
        for w in ns.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-12);
        }
    }
}

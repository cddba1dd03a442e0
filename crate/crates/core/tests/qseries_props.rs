use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use springer_core::qseries::{q_binomial, q_factorial};
use springer_core::QPoly;

fn poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-50i64..50, 0..8).prop_map(|c| QPoly::from_coeffs(c.into_iter().map(BigInt::from).collect()))
}

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t) / BigInt::from(t + 1))
}

/// Partitions fitting in a k × (n-k) box, counted by size.
fn box_partitions(n: u32, k: u32) -> Vec<u64> {
    fn rec(parts_left: u32, max_part: u32, size: usize, out: &mut Vec<u64>) {
        out[size] += 1;
        if parts_left == 0 {
            return;
        }
        for p in 1..=max_part {
            rec(parts_left - 1, p, size + p as usize, out);
        }
    }
    let mut out = vec![0; (k * (n - k)) as usize + 1];
    rec(k, n - k, 0, &mut out);
    out
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &QPoly::one(), a.clone());
    }

    #[test]
    fn eval_is_a_ring_map(a in poly(), b in poly(), q in -5i64..6) {
        let q = BigInt::from(q);
        prop_assert_eq!((&a * &b).eval(&q), a.eval(&q) * b.eval(&q));
        prop_assert_eq!((&a + &b).eval(&q), a.eval(&q) + b.eval(&q));
        prop_assert_eq!(a.eval(&BigInt::one()), a.coefficient_sum());
    }
}

#[test]
fn binomial_times_factorials() {
    for n in 0..=12 {
        for k in 0..=n {
            let lhs = q_binomial::<BigInt>(n, k).unwrap() * q_factorial(k) * q_factorial(n - k);
            assert_eq!(lhs, q_factorial(n), "n={n} k={k}");
        }
    }
}

#[test]
fn binomial_at_one_symmetric_unimodal() {
    for n in 0..=12 {
        for k in 0..=n {
            let b: QPoly = q_binomial(n, k).unwrap();
            assert_eq!(b.eval(&BigInt::one()), binom(n, k));
            assert!(b.is_palindromic());
            assert!(b.is_unimodal());
        }
    }
}

#[test]
fn binomial_counts_partitions_in_a_box() {
    for n in 0..=12 {
        for k in 0..=n {
            let expected = QPoly::from_coeffs(box_partitions(n, k).into_iter().map(BigInt::from).collect());
            assert_eq!(q_binomial::<BigInt>(n, k).unwrap(), expected, "n={n} k={k}");
        }
    }
}

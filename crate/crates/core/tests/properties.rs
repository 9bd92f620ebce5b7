//! Property tests pinning the kernel against independent oracles:
//! an arbitrary-precision replay of the map, the halving/parity laws,
//! and the decomposition identity.

use collatz_core::{
    general_term, stopping_count, stopping_count_with, syracuse_decompose, trajectory,
    CollatzInt, Convention, Error, FamilySpec, MemoTable, ParametricName, DEFAULT_BUDGET,
};
use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

fn ci(v: u128) -> CollatzInt {
    CollatzInt::new(v).unwrap()
}

/// Replay of f in arbitrary precision, independent of the u128 path.
fn oracle_step(v: &BigUint) -> BigUint {
    if v.bit(0) {
        v * 3u32 + 1u32
    } else {
        v >> 1
    }
}

proptest! {
    #[test]
    fn step_parity_laws(n in 1u128..u128::MAX / 4) {
        let stepped = collatz_core::collatz_step(ci(n)).unwrap().get();
        if n % 2 == 0 {
            prop_assert_eq!(stepped, n / 2);
            prop_assert!(stepped < n);
        } else {
            prop_assert_eq!(stepped, 3 * n + 1);
            prop_assert_eq!(stepped % 2, 0);
        }
    }

    /// Every trajectory value must match the arbitrary-precision replay
    /// exactly; an overflow error must coincide with the replay leaving
    /// the 128-bit range. Wrapped values would fail one of the two.
    #[test]
    fn trajectory_matches_bigint_replay(n in 1u128..u128::MAX, budget in 1u32..300) {
        let max = BigUint::from(u128::MAX);
        match trajectory(ci(n), budget) {
            Ok(t) => {
                let mut v = BigUint::from(n);
                for got in &t.values {
                    v = oracle_step(&v);
                    prop_assert!(v <= max);
                    prop_assert_eq!(BigUint::from(got.get()), v.clone());
                }
                if t.converged {
                    prop_assert!(v.is_one());
                    prop_assert_eq!(t.steps as usize, t.values.len());
                }
            }
            Err(Error::Overflow { .. }) => {
                let mut v = BigUint::from(n);
                let mut overflowed = false;
                for _ in 0..budget {
                    v = oracle_step(&v);
                    if v > max {
                        overflowed = true;
                        break;
                    }
                }
                prop_assert!(overflowed, "kernel overflowed but the replay stayed in range");
            }
            Err(other) => return Err(TestCaseError::fail(format!("unexpected error {other}"))),
        }
    }

    #[test]
    fn doubling_adds_one_step(m in 2u128..1u128 << 90) {
        let inner = stopping_count(ci(m), DEFAULT_BUDGET);
        let outer = stopping_count(ci(2 * m), DEFAULT_BUDGET);
        match (inner, outer) {
            (Ok(a), Ok(b)) => prop_assert_eq!(b.count, a.count + 1),
            // If one side ran out of budget the other must be off by one.
            (Err(Error::BudgetExhausted { .. }), Err(Error::BudgetExhausted { .. })) => {}
            (a, b) => return Err(TestCaseError::fail(format!("mismatched outcomes {a:?} / {b:?}"))),
        }
    }

    #[test]
    fn decomposition_total_equals_count(n in prop::sample::select(
        (0..400u128).map(|i| 2 * i + 1).collect::<Vec<_>>()
    )) {
        let d = syracuse_decompose(ci(n), DEFAULT_BUDGET).unwrap();
        let c = stopping_count(ci(n), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(d.total_steps(), c.count);
        // And the chain itself must multiply out: 3 b_{i-1} + 1 = 2^s b_i.
        let mut prev = n;
        for (s, b) in &d.pairs {
            prop_assert_eq!(3 * prev + 1, b.get() << s);
            prop_assert_eq!(b.get() % 2, 1);
            prev = b.get();
        }
        prop_assert_eq!(prev, 1);
    }

    /// The family step identity in its general form, on random odd
    /// roots: N(general_term(n, m)) = N(n) + 2m under the paper
    /// convention.
    #[test]
    fn general_term_shifts_count_by_two(n in prop::sample::select(
        (0..300u128).map(|i| 2 * i + 1).collect::<Vec<_>>()
    ), m in 0u32..8) {
        let term = general_term(&BigUint::from(n), m);
        let term = u128::try_from(&term).unwrap();
        let base = stopping_count(ci(n), DEFAULT_BUDGET).unwrap().count;
        let shifted = stopping_count(ci(term), DEFAULT_BUDGET).unwrap().count;
        prop_assert_eq!(shifted, base + 2 * m);
    }

    #[test]
    fn memo_entries_match_fresh_counts(n in 2u128..20_000) {
        static MEMO: std::sync::OnceLock<MemoTable> = std::sync::OnceLock::new();
        let memo = MEMO.get_or_init(|| {
            MemoTable::build(20_000, Convention::Paper, DEFAULT_BUDGET).unwrap()
        });
        let fresh = stopping_count(ci(n), DEFAULT_BUDGET).unwrap().count;
        prop_assert_eq!(memo.lookup(n), Some(fresh));
    }

    #[test]
    fn conventions_agree_above_one(n in 2u128..1u128 << 100) {
        let paper = stopping_count(ci(n), DEFAULT_BUDGET);
        let standard = stopping_count_with(Convention::Standard, ci(n), DEFAULT_BUDGET);
        match (paper, standard) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.count, b.count),
            (Err(_), Err(_)) => {}
            (a, b) => return Err(TestCaseError::fail(format!("mismatched outcomes {a:?} / {b:?}"))),
        }
    }

    /// Terms of every parametric family are odd, integral, and strictly
    /// increasing in both k and n.
    #[test]
    fn parametric_terms_are_odd_and_monotone(
        fam in prop::sample::select(ParametricName::ALL.to_vec()),
        k in 1u64..5_000,
        n in 0u32..12,
    ) {
        let term = collatz_core::parametric_term(fam, k, n);
        prop_assert!(term.bit(0));
        prop_assert!(collatz_core::parametric_term(fam, k + 1, n) > term);
        prop_assert!(collatz_core::parametric_term(fam, k, n + 1) > term);
        prop_assert_eq!(term, general_term(&fam.seed(k), n));
    }
}

#[test]
fn trajectory_and_stopping_count_agree_up_to_1e5() {
    for n in 1u128..100_000 {
        let t = trajectory(ci(n), DEFAULT_BUDGET).unwrap();
        let c = stopping_count(ci(n), DEFAULT_BUDGET).unwrap();
        assert!(t.converged, "n={n}");
        assert_eq!(t.steps, c.count, "n={n}");
    }
}

#[test]
fn step_recurrence_holds_exhaustively_to_1e4() {
    for k in 1u128..=10_000 {
        let lhs = stopping_count(ci(2 * k - 1), DEFAULT_BUDGET).unwrap().count;
        let rhs = stopping_count(ci(3 * k - 1), DEFAULT_BUDGET).unwrap().count;
        assert_eq!(lhs, 2 + rhs, "k={k}");
    }
}

#[test]
fn registry_base_steps_come_from_the_oracle() {
    for spec in FamilySpec::registry() {
        let c = u128::try_from(&spec.coefficient).unwrap();
        let fresh = stopping_count(ci(c), DEFAULT_BUDGET).unwrap().count;
        assert_eq!(spec.base_steps, fresh);
    }
}

/// Sanity timing: the below-n shortcut makes the memo fill measurably
/// cheaper than recomputing every seed from scratch. Not a benchmark,
/// just a strict inequality with a wide real margin.
#[test]
fn memo_build_beats_naive_recomputation() {
    const LIMIT: u64 = 2_000_000;

    let built_at = std::time::Instant::now();
    let memo = MemoTable::build(LIMIT, Convention::Paper, DEFAULT_BUDGET).unwrap();
    let build_time = built_at.elapsed();

    let naive_at = std::time::Instant::now();
    let mut checksum = 0u64;
    for n in 2..=u128::from(LIMIT) {
        checksum =
            checksum.wrapping_add(u64::from(stopping_count(ci(n), DEFAULT_BUDGET).unwrap().count));
    }
    let naive_time = naive_at.elapsed();

    // Keep the naive pass honest and spot-check agreement.
    assert!(checksum > 0);
    assert_eq!(memo.lookup(1_999_999), Some(count_of(1_999_999)));
    assert!(
        build_time < naive_time,
        "memo build {build_time:?} should beat naive recomputation {naive_time:?}"
    );
}

fn count_of(n: u128) -> u32 {
    stopping_count(ci(n), DEFAULT_BUDGET).unwrap().count
}

//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`) and asserting exact values
//! plus its stated wall-clock bound.
//!
//! The tests share a 10^7-entry memo table and serialize through a
//! gate mutex so the timed scans are not distorted by sibling tests.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::Instant;

use collatz_core::{
    check_partition, check_step_identities, decomposition_consistency, general_term,
    parametric_term, predicted_steps, seed_search_chain, stopping_count, syracuse_decompose,
    trajectory, verify_range, CollatzInt, Convention, Error, FamilyName, FamilySpec, MemoTable,
    ParametricName, ResidueCounts, VerifyConfig, DEFAULT_BUDGET,
};
use num_bigint::BigUint;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn gate() -> MutexGuard<'static, ()> {
    static GATE: OnceLock<Mutex<()>> = OnceLock::new();
    GATE.get_or_init(|| Mutex::new(()))
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn shared_memo() -> &'static MemoTable {
    static MEMO: OnceLock<MemoTable> = OnceLock::new();
    MEMO.get_or_init(|| {
        MemoTable::build(10_000_000, Convention::Paper, DEFAULT_BUDGET)
            .expect("memo build at desk scale")
    })
}

fn ci(v: u128) -> CollatzInt {
    CollatzInt::new(v).unwrap()
}

fn count(n: u128) -> u32 {
    stopping_count(ci(n), DEFAULT_BUDGET).unwrap().count
}

#[test]
fn criterion_01_stopping_count_fixtures_exact() {
    let _g = gate();
    let began = Instant::now();

    for (n, want) in [(1u128, 3u32), (2, 1), (11, 14), (27, 111), (109, 113), (437, 115)] {
        assert_eq!(count(n), want, "stopping count of {n}");
    }
    let t = trajectory(ci(6), 100).unwrap();
    let want: Vec<u128> = vec![3, 10, 5, 16, 8, 4, 2, 1];
    let got: Vec<u128> = t.values.iter().map(|v| v.get()).collect();
    assert_eq!(got, want, "trajectory of 6");
    assert!(t.converged);

    let elapsed = began.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, bound 1 s");
    println!("criterion 01: PASS — stopping-count fixtures exact ({elapsed:?})");
}

#[test]
fn criterion_02_family_predictions_exact() {
    let _g = gate();
    let began = Instant::now();

    // Base counts straight from the oracle, never hard-coded.
    let n5 = count(5);
    let n7 = count(7);
    let n11 = count(11);
    let n13 = count(13);
    let n17 = count(17);
    let n29 = count(29);

    for spec in FamilySpec::registry() {
        let name = spec.name.expect("registry families are named");
        for n in 0..=20u32 {
            let term = u128::try_from(&collatz_core::family_term(spec, n)).unwrap();
            let oracle = count(term);
            let predicted = predicted_steps(spec, n);
            // Each family's own affine step form, spelled out.
            let stated = match name {
                FamilyName::A => 2 * n + 3,
                FamilyName::B => n5 + 2 * n + 2,
                FamilyName::C => n13 + 2 * n + 3,
                FamilyName::D => n17 + 2 * n + 2,
                FamilyName::E => n11 + 2 * n + 2,
                FamilyName::F => n7 + 2 * n + 3,
                FamilyName::G => n29 + 2 * n + 2,
            };
            assert_eq!(oracle, predicted, "family {name} n={n}: oracle vs predicted");
            assert_eq!(predicted, stated, "family {name} n={n}: predicted vs stated form");
        }
    }

    let elapsed = began.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, bound 5 s");
    println!("criterion 02: PASS — seven family step predictions exact for n <= 20 ({elapsed:?})");
}

#[test]
fn criterion_03_parametric_families_exact() {
    let _g = gate();
    let memo = shared_memo();
    let began = Instant::now();

    for fam in ParametricName::ALL {
        for k in 1..=1_000u64 {
            let seed = fam.seed(k);
            let seed_count = memo
                .stopping_count(u128::try_from(&seed).unwrap(), DEFAULT_BUDGET)
                .unwrap();
            for n in 0..=10u32 {
                let term = parametric_term(fam, k, n);
                assert!(term.bit(0), "{fam} k={k} n={n}: term must be odd");
                assert_eq!(term, general_term(&seed, n), "{fam} k={k} n={n}: embedding");
                // Integrality witness: the power-of-two side is 1 mod 3.
                let image =
                    fam.coefficient(k) << (2 * u64::from(n) + u64::from(fam.parity()));
                assert_eq!(&image % 3u32, BigUint::one(), "{fam} k={k} n={n}");
                assert_eq!(image, &term * 3u32 + 1u32, "{fam} k={k} n={n}");
                let got = memo
                    .stopping_count(u128::try_from(&term).unwrap(), DEFAULT_BUDGET)
                    .unwrap();
                assert_eq!(got, seed_count + 2 * n, "{fam} k={k} n={n}: step offset");
            }
        }
    }

    let elapsed = began.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, bound 60 s");
    println!("criterion 03: PASS — D/J/M/K/S exact for k <= 1000, n <= 10 ({elapsed:?})");
}

#[test]
fn criterion_04_step_recurrence_sweep_to_1e6() {
    let _g = gate();
    let memo = shared_memo();
    let began = Instant::now();

    let mut cfg = VerifyConfig::new(1, 2);
    cfg.cache = Some(memo);
    let report = check_step_identities(1_000_000, &cfg).unwrap();
    assert!(
        report.stats.identity_failures.is_empty(),
        "failures: {:?}",
        report.stats.identity_failures
    );
    assert_eq!(report.stats.seeds_checked, 1_000_000);

    let elapsed = began.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, bound 120 s");
    println!("criterion 04: PASS — step recurrences hold for k <= 10^6 ({elapsed:?})");
}

#[test]
fn criterion_05_decomposition_sweep_to_1e6() {
    let _g = gate();
    let memo = shared_memo();
    let began = Instant::now();

    let mut cfg = VerifyConfig::new(1, 2);
    cfg.cache = Some(memo);
    cfg.workers = 4;
    let report = decomposition_consistency(1_000_000, &cfg).unwrap();
    assert!(
        report.stats.identity_failures.is_empty(),
        "failures: {:?}",
        report.stats.identity_failures
    );
    assert_eq!(report.stats.seeds_checked, 500_000);

    let elapsed = began.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, bound 120 s");
    println!("criterion 05: PASS — sum(s_i)+k = N(n) for all odd n <= 10^6 ({elapsed:?})");
}

#[test]
fn criterion_06_general_term_identity() {
    let _g = gate();
    let memo = shared_memo();
    let began = Instant::now();

    let mut n = 1u128;
    while n <= 9_999 {
        let base = memo.stopping_count(n, DEFAULT_BUDGET).unwrap();
        for m in 0..=8u32 {
            let term = u128::try_from(&general_term(&BigUint::from(n), m)).unwrap();
            let got = memo.stopping_count(term, DEFAULT_BUDGET).unwrap();
            assert_eq!(got, base + 2 * m, "n={n} m={m}");
        }
        n += 2;
    }

    let elapsed = began.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, bound 60 s");
    println!("criterion 06: PASS — N(general_term(n,m)) = N(n) + 2m for odd n <= 9999, m <= 8 ({elapsed:?})");
}

#[test]
fn criterion_07_seed_search_reproduction() {
    let _g = gate();
    let rounds = seed_search_chain(6, 5).unwrap();
    let want: [(u128, u128, u128, u32); 6] = [
        (10, 3, 5, 1),
        (52, 17, 13, 2),
        (34, 11, 17, 1),
        (22, 7, 11, 1),
        (28, 9, 7, 2),
        (58, 19, 29, 1),
    ];
    assert_eq!(rounds.len(), 6);
    for (round, (beta, seed, source, exponent)) in rounds.iter().zip(want) {
        assert_eq!(round.hit.beta, BigUint::from(beta), "beta {beta}");
        assert_eq!(round.hit.next_seed, BigUint::from(seed), "seed {seed}");
        assert_eq!(round.hit.source_term, BigUint::from(source), "source {source}");
        assert_eq!(round.hit.exponent, exponent, "exponent for beta {beta}");
    }
    println!("criterion 07: PASS — all six betas and successor seeds reproduced at depth 5");
}

#[test]
fn criterion_08_partition_to_1e6() {
    let _g = gate();
    let began = Instant::now();

    let report = check_partition(1_000_000).unwrap();
    assert!(
        report.stats.identity_failures.is_empty(),
        "failures: {:?}",
        report.stats.identity_failures
    );
    assert_eq!(report.stats.seeds_checked, 500_000);
    // Roots are exactly the odds in classes {1, 3, 7} mod 8; 10^6 is
    // divisible by 8, so each class holds 125000.
    assert_eq!(
        report.stats.root_residues,
        Some(ResidueCounts {
            residue_1: 125_000,
            residue_3: 125_000,
            residue_7: 125_000
        })
    );

    let elapsed = began.elapsed();
    println!("criterion 08: PASS — unique roots partition the odds below 10^6 ({elapsed:?})");
}

#[test]
fn criterion_09_range_scan_1e7_deterministic_and_parallel() {
    let _g = gate();

    let mut cfg = VerifyConfig::new(1, 10_000_000);
    cfg.workers = 1;
    let single = verify_range(&cfg).unwrap();
    cfg.workers = 4;
    let quad = verify_range(&cfg).unwrap();

    assert!(single.stats.all_converged);
    assert_eq!(single.stats.seeds_checked, 9_999_999);
    assert_eq!(single.stats, quad.stats, "reports must not depend on worker count");

    // Seed 27 is in range; its excursion is pinned by the 27 walk.
    let spot = verify_range(&VerifyConfig::new(27, 28)).unwrap();
    assert_eq!(spot.stats.max_excursion.map(|m| (m.n, m.peak)), Some((27, 9_232)));

    assert!(
        quad.duration_ms < single.duration_ms,
        "4 workers ({} ms) should beat 1 worker ({} ms)",
        quad.duration_ms,
        single.duration_ms
    );
    println!(
        "criterion 09: PASS — [1,10^7) all converged; max steps {:?}; 1w {} ms vs 4w {} ms",
        single.stats.max_steps, single.duration_ms, quad.duration_ms
    );
}

#[test]
fn criterion_10_cache_round_trip_and_spot_checks() {
    let _g = gate();
    let began = Instant::now();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.czmt");
    let table = MemoTable::build(100_000, Convention::Paper, DEFAULT_BUDGET).unwrap();
    table.save(&path).unwrap();
    let loaded = MemoTable::load(&path).unwrap();
    assert_eq!(table, loaded, "logical round trip");

    let path2 = dir.path().join("memo-again.czmt");
    loaded.save(&path2).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&path2).unwrap(),
        "bit-identical round trip"
    );

    let mut rng = StdRng::seed_from_u64(0x636f6c6c61747a);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=100_000u128);
        assert_eq!(loaded.lookup(n), Some(count(n)), "memo vs fresh at {n}");
    }

    assert!(matches!(
        MemoTable::load_expecting(&path, Convention::Standard),
        Err(Error::ConventionMismatch { .. })
    ));

    let elapsed = began.elapsed();
    println!("criterion 10: PASS — cache round trip bit-identical, 10^4 spot checks clean ({elapsed:?})");
}

#[test]
fn criterion_11_overflow_safety_near_2_pow_120() {
    let _g = gate();

    let seed = (1u128 << 120) - 1;
    assert!(matches!(
        stopping_count(ci(seed), DEFAULT_BUDGET),
        Err(Error::Overflow { .. })
    ));
    assert!(matches!(
        trajectory(ci(seed), DEFAULT_BUDGET),
        Err(Error::Overflow { .. })
    ));
    assert!(matches!(
        syracuse_decompose(ci(seed), DEFAULT_BUDGET),
        Err(Error::Overflow { .. })
    ));

    // Arbitrary-precision replay: the orbit genuinely leaves 128 bits,
    // so the kernel error is forced, not spurious.
    let max = BigUint::from(u128::MAX);
    let mut v = BigUint::from(seed);
    let mut left_range = false;
    for _ in 0..DEFAULT_BUDGET {
        v = if v.bit(0) { &v * 3u32 + 1u32 } else { &v >> 1 };
        if v > max {
            left_range = true;
            break;
        }
    }
    assert!(left_range, "the replay must leave the 128-bit range");

    // A range scan records the overflow per seed and keeps going.
    let report = verify_range(&VerifyConfig::new(seed, seed + 2)).unwrap();
    assert!(!report.stats.all_converged);
    assert_eq!(report.stats.nonconverged.len(), 1);
    assert_eq!(report.stats.nonconverged[0].n, seed);
    assert_eq!(report.stats.seeds_checked, 2);

    println!("criterion 11: PASS — overflow near 2^120 is an error record, never a wrapped value");
}

//! Brute-force verification harness: range scans, identity sweeps, the
//! odd-integer partition check, and decomposition consistency.
//!
//! Scans are chunked over contiguous seed blocks and distributed to
//! worker threads; partial statistics merge in seed order, so reports
//! are identical for any worker count. Extremal ties go to the smaller
//! seed. A seed that overflows 128 bits or outlives its budget is
//! recorded and excluded from the converged set instead of aborting
//! the scan.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::cache::MemoTable;
use crate::error::{Error, Result};
use crate::families::{self, FamilySpec, ParametricName};
use crate::kernel::{self, Convention, WalkOutcome, DEFAULT_BUDGET};

/// Default chunk granularity for worker distribution.
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

/// Bounds and resources for one verification run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig<'a> {
    /// First seed, inclusive. Must be at least 1.
    pub start: u128,
    /// End of the range, exclusive. `end == start` scans nothing.
    pub end: u128,
    /// Maximum f-applications per seed.
    pub step_budget: u32,
    /// Worker threads; 1 runs everything inline.
    pub workers: usize,
    /// Seeds per work unit.
    pub chunk_size: u64,
    pub convention: Convention,
    /// Optional memo table; must match `convention`.
    pub cache: Option<&'a MemoTable>,
}

impl<'a> VerifyConfig<'a> {
    pub fn new(start: u128, end: u128) -> Self {
        VerifyConfig {
            start,
            end,
            step_budget: DEFAULT_BUDGET,
            workers: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
            convention: Convention::Paper,
            cache: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.start < 1 {
            return Err(Error::InvalidConfig("start must be at least 1".into()));
        }
        if self.end < self.start {
            return Err(Error::InvalidConfig(format!(
                "end {} precedes start {}",
                self.end, self.start
            )));
        }
        if self.step_budget == 0 {
            return Err(Error::InvalidConfig("step budget must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("at least one worker is required".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidConfig("chunk size must be at least 1".into()));
        }
        if let Some(cache) = self.cache {
            if cache.convention() != self.convention {
                return Err(Error::InvalidConfig(format!(
                    "cache uses the {} convention but the scan runs under {}",
                    cache.convention(),
                    self.convention
                )));
            }
        }
        Ok(())
    }
}

/// Why a seed failed to reach 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonConvergence {
    BudgetExhausted,
    Overflow,
}

/// A seed that did not converge, with the reason.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NonConverged {
    pub n: u128,
    pub reason: NonConvergence,
}

/// The seed attaining the most steps in a range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaxSteps {
    pub n: u128,
    pub steps: u32,
}

/// The seed attaining the largest trajectory value in a range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaxExcursion {
    pub n: u128,
    pub peak: u128,
}

/// A failed identity check: which identity, and the smallest witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub witness: String,
}

/// Root tallies by residue class mod 8 (partition checks only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueCounts {
    pub residue_1: u64,
    pub residue_3: u64,
    pub residue_7: u64,
}

/// Deterministic result content of a verification run. Two runs over
/// the same configuration compare equal regardless of worker count;
/// timing lives outside, on [`VerifyReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyStats {
    /// Scanned half-open interval [start, end).
    pub start: u128,
    pub end: u128,
    pub convention: Convention,
    pub seeds_checked: u64,
    pub all_converged: bool,
    pub nonconverged: Vec<NonConverged>,
    pub max_steps: Option<MaxSteps>,
    pub max_excursion: Option<MaxExcursion>,
    pub identity_failures: Vec<IdentityFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_residues: Option<ResidueCounts>,
}

impl VerifyStats {
    fn empty(start: u128, end: u128, convention: Convention) -> Self {
        VerifyStats {
            start,
            end,
            convention,
            seeds_checked: 0,
            all_converged: true,
            nonconverged: Vec::new(),
            max_steps: None,
            max_excursion: None,
            identity_failures: Vec::new(),
            root_residues: None,
        }
    }
}

/// Stats plus wall-clock duration.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub stats: VerifyStats,
    pub duration_ms: u64,
}

/// Per-chunk partial result; merged in seed order by the aggregator.
#[derive(Default)]
struct ChunkStats {
    seeds: u64,
    nonconverged: Vec<NonConverged>,
    max_steps: Option<MaxSteps>,
    max_excursion: Option<MaxExcursion>,
    failures: Vec<IdentityFailure>,
}

impl ChunkStats {
    fn absorb_steps(&mut self, n: u128, steps: u32) {
        // Strict comparison keeps the smallest seed on ties.
        if self.max_steps.is_none_or(|m| steps > m.steps) {
            self.max_steps = Some(MaxSteps { n, steps });
        }
    }

    fn absorb_peak(&mut self, n: u128, peak: u128) {
        if self.max_excursion.is_none_or(|m| peak > m.peak) {
            self.max_excursion = Some(MaxExcursion { n, peak });
        }
    }
}

/// Runs `eval` over contiguous chunks of [start, end) on `workers`
/// threads and returns the chunk results in seed order.
fn run_chunks<F>(start: u128, end: u128, chunk_size: u64, workers: usize, eval: F) -> Result<Vec<ChunkStats>>
where
    F: Fn(u128, u128) -> ChunkStats + Sync,
{
    let total = end - start;
    if total == 0 {
        return Ok(Vec::new());
    }
    let chunks = u64::try_from(total.div_ceil(u128::from(chunk_size)))
        .map_err(|_| Error::InvalidConfig("range is far beyond scannable size".into()))?;
    let next = AtomicU64::new(0);
    let collected: Mutex<Vec<(u64, ChunkStats)>> = Mutex::new(Vec::with_capacity(chunks as usize));
    std::thread::scope(|scope| {
        for _ in 0..workers.min(chunks as usize) {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= chunks {
                    break;
                }
                let lo = start + u128::from(index) * u128::from(chunk_size);
                let hi = end.min(lo + u128::from(chunk_size));
                let stats = eval(lo, hi);
                collected.lock().unwrap().push((index, stats));
            });
        }
    });
    let mut parts = collected.into_inner().unwrap();
    parts.sort_unstable_by_key(|(index, _)| *index);
    Ok(parts.into_iter().map(|(_, stats)| stats).collect())
}

/// Folds ordered chunk results into one stats record.
fn merge(start: u128, end: u128, convention: Convention, parts: Vec<ChunkStats>) -> VerifyStats {
    let mut out = VerifyStats::empty(start, end, convention);
    for part in parts {
        out.seeds_checked += part.seeds;
        out.nonconverged.extend(part.nonconverged);
        if let Some(m) = part.max_steps {
            if out.max_steps.is_none_or(|cur| m.steps > cur.steps) {
                out.max_steps = Some(m);
            }
        }
        if let Some(m) = part.max_excursion {
            if out.max_excursion.is_none_or(|cur| m.peak > cur.peak) {
                out.max_excursion = Some(m);
            }
        }
        out.identity_failures.extend(part.failures);
    }
    out.all_converged = out.nonconverged.is_empty();
    out
}

/// Walks every seed in the configured range, recording convergence,
/// the extremal step count, and the extremal excursion.
pub fn verify_range(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let began = Instant::now();
    let parts = run_chunks(cfg.start, cfg.end, cfg.chunk_size, cfg.workers, |lo, hi| {
        let mut chunk = ChunkStats::default();
        let mut seed = lo;
        while seed < hi {
            chunk.seeds += 1;
            match kernel::walk_raw(seed, cfg.step_budget, cfg.convention) {
                WalkOutcome::Converged { steps, peak } => {
                    // The walk is authoritative for the peak; the memo,
                    // when present and in range, supplies the count.
                    let steps = cfg
                        .cache
                        .and_then(|memo| memo.lookup(seed))
                        .filter(|&c| c <= cfg.step_budget)
                        .unwrap_or(steps);
                    chunk.absorb_steps(seed, steps);
                    chunk.absorb_peak(seed, peak);
                }
                WalkOutcome::OutOfBudget => chunk.nonconverged.push(NonConverged {
                    n: seed,
                    reason: NonConvergence::BudgetExhausted,
                }),
                WalkOutcome::Overflow => chunk.nonconverged.push(NonConverged {
                    n: seed,
                    reason: NonConvergence::Overflow,
                }),
            }
            seed += 1;
        }
        chunk
    })?;
    let stats = merge(cfg.start, cfg.end, cfg.convention, parts);
    Ok(VerifyReport {
        stats,
        duration_ms: began.elapsed().as_millis() as u64,
    })
}

/// Oracle-backed stopping count for the sweeps below: memoized where
/// possible, a plain kernel walk otherwise.
fn oracle_count(memo: &MemoTable, n: u128, budget: u32) -> Result<u32> {
    memo.stopping_count(n, budget)
}

/// Sweeps the paper's step identities for k = 1..=max_k:
///
///   (i)  N(2k-1) = 2 + N(3k-1)
///   (ii) N(8k-3) = 2 + N(2k-1)
///   (iii) N(term(n)) = 2n + N(term(0)) for the seven registry
///         families and the five parametric shapes over a fixed
///         deterministic sample grid.
///
/// The identities are paper-convention statements (they pivot on
/// N(1) = 3), so the configuration must use it.
pub fn check_step_identities(max_k: u64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    if max_k < 1 {
        return Err(Error::InvalidConfig("max_k must be at least 1".into()));
    }
    if cfg.convention != Convention::Paper {
        return Err(Error::InvalidConfig(
            "step identities hold under the paper convention; rerun with it".into(),
        ));
    }
    let began = Instant::now();
    let budget = cfg.step_budget;
    let needed = 8u64
        .checked_mul(max_k)
        .ok_or_else(|| Error::InvalidConfig("max_k too large to sweep".into()))?;
    let local;
    let memo = match cfg.cache {
        Some(memo) => memo,
        None => {
            local = MemoTable::build(needed.max(2), Convention::Paper, budget)?;
            &local
        }
    };

    let mut failures: Vec<IdentityFailure> = Vec::new();

    // (i) N(2k-1) = 2 + N(3k-1)
    for k in 1..=max_k {
        let lhs = oracle_count(memo, u128::from(2 * k - 1), budget)?;
        let rhs = oracle_count(memo, u128::from(3 * k - 1), budget)?;
        if lhs != 2 + rhs {
            failures.push(IdentityFailure {
                identity: "N(2k-1) = 2 + N(3k-1)".into(),
                witness: format!("k={k}: lhs={lhs}, rhs=2+{rhs}"),
            });
            break;
        }
    }

    // (ii) N(8k-3) = 2 + N(2k-1)
    for k in 1..=max_k {
        let lhs = oracle_count(memo, u128::from(8 * k - 3), budget)?;
        let rhs = oracle_count(memo, u128::from(2 * k - 1), budget)?;
        if lhs != 2 + rhs {
            failures.push(IdentityFailure {
                identity: "N(8k-3) = 2 + N(2k-1)".into(),
                witness: format!("k={k}: lhs={lhs}, rhs=2+{rhs}"),
            });
            break;
        }
    }

    // (iii) family step offsets, registry then parametric.
    'registry: for spec in FamilySpec::registry() {
        let base = oracle_count(memo, big_to_u128(&spec.seed)?, budget)?;
        for n in 0..=20u32 {
            let term = big_to_u128(&families::family_term(spec, n))?;
            let got = oracle_count(memo, term, budget)?;
            let predicted = families::predicted_steps(spec, n);
            if got != base + 2 * n || got != predicted {
                failures.push(IdentityFailure {
                    identity: "N(family term) = 2n + N(seed)".into(),
                    witness: format!(
                        "family {:?} n={n}: oracle={got}, offset={}, predicted={predicted}",
                        spec.name,
                        base + 2 * n
                    ),
                });
                break 'registry;
            }
        }
    }
    let sample_k = max_k.min(100);
    'parametric: for fam in ParametricName::ALL {
        for k in 1..=sample_k {
            let base = oracle_count(memo, big_to_u128(&fam.seed(k))?, budget)?;
            for n in 0..=6u32 {
                let term = big_to_u128(&families::parametric_term(fam, k, n))?;
                let got = oracle_count(memo, term, budget)?;
                if got != base + 2 * n {
                    failures.push(IdentityFailure {
                        identity: "N(parametric term) = 2n + N(seed)".into(),
                        witness: format!("{fam} k={k} n={n}: oracle={got}, offset={}", base + 2 * n),
                    });
                    break 'parametric;
                }
            }
        }
    }

    let mut stats = VerifyStats::empty(1, u128::from(max_k) + 1, cfg.convention);
    stats.seeds_checked = max_k;
    stats.identity_failures = failures;
    stats.all_converged = true;
    Ok(VerifyReport {
        stats,
        duration_ms: began.elapsed().as_millis() as u64,
    })
}

fn big_to_u128(value: &BigUint) -> Result<u128> {
    u128::try_from(value).map_err(|_| Error::Overflow { at: u128::MAX })
}

/// Exhaustively checks that family membership partitions the odd
/// integers up to `max_odd`: every odd has exactly one root, roots are
/// exactly the odds in residue classes {1, 3, 7} mod 8, and forward
/// generation from the roots covers each odd exactly once.
pub fn check_partition(max_odd: u64) -> Result<VerifyReport> {
    if max_odd < 1 {
        return Err(Error::InvalidConfig("max_odd must be at least 1".into()));
    }
    let began = Instant::now();
    let mut failures: Vec<IdentityFailure> = Vec::new();
    let odd_count = max_odd.div_ceil(2);

    // Route 1: inverse walk per odd, with forward reconstruction.
    let mut residues = ResidueCounts {
        residue_1: 0,
        residue_3: 0,
        residue_7: 0,
    };
    let mut first_bad_inverse: Option<u64> = None;
    let mut o = 1u64;
    while o <= max_odd {
        let (root, index) = inverse_root(o);
        match root % 8 {
            1 => residues.residue_1 += (index == 0) as u64,
            3 => residues.residue_3 += (index == 0) as u64,
            7 => residues.residue_7 += (index == 0) as u64,
            _ => {
                first_bad_inverse.get_or_insert(o);
            }
        }
        if forward_term(root, index) != Some(u128::from(o)) {
            first_bad_inverse.get_or_insert(o);
        }
        o = match o.checked_add(2) {
            Some(next) => next,
            None => break,
        };
    }
    if let Some(o) = first_bad_inverse {
        failures.push(IdentityFailure {
            identity: "inverse root walk".into(),
            witness: format!("odd {o}"),
        });
    }

    // Route 2: forward coverage from every root, each odd hit once.
    let mut seen = vec![0u64; (odd_count as usize).div_ceil(64)];
    let mut double_hit: Option<u64> = None;
    let mut root = 1u64;
    while root <= max_odd {
        if root % 8 != 5 {
            let mut value = u128::from(root);
            loop {
                let slot = ((value as u64 - 1) / 2) as usize;
                let bit = 1u64 << (slot % 64);
                if seen[slot / 64] & bit != 0 {
                    double_hit.get_or_insert(value as u64);
                    break;
                }
                seen[slot / 64] |= bit;
                value = match value.checked_mul(4).and_then(|v| v.checked_add(1)) {
                    Some(next) if next <= u128::from(max_odd) => next,
                    _ => break,
                };
            }
        }
        root = match root.checked_add(2) {
            Some(next) => next,
            None => break,
        };
    }
    if let Some(v) = double_hit {
        failures.push(IdentityFailure {
            identity: "forward coverage uniqueness".into(),
            witness: format!("odd {v} generated twice"),
        });
    }
    let mut gap: Option<u64> = None;
    for slot in 0..odd_count {
        if seen[(slot / 64) as usize] & (1u64 << (slot % 64)) == 0 {
            gap = Some(2 * slot + 1);
            break;
        }
    }
    if let Some(o) = gap {
        failures.push(IdentityFailure {
            identity: "forward coverage totality".into(),
            witness: format!("odd {o} reached by no root"),
        });
    }

    // Spot-check the arbitrary-precision root map against the fast walk.
    let mut sample = 1u64;
    while sample <= max_odd {
        let fr = families::family_root(&BigUint::from(sample))?;
        let (root, index) = inverse_root(sample);
        if fr.root != BigUint::from(root) || fr.index != index {
            failures.push(IdentityFailure {
                identity: "root map cross-check".into(),
                witness: format!("odd {sample}"),
            });
            break;
        }
        sample = match sample.checked_add(1994) {
            Some(next) => next,
            None => break,
        };
    }

    let mut stats = VerifyStats::empty(1, u128::from(max_odd) + 1, Convention::Paper);
    stats.seeds_checked = odd_count;
    stats.identity_failures = failures;
    stats.root_residues = Some(residues);
    Ok(VerifyReport {
        stats,
        duration_ms: began.elapsed().as_millis() as u64,
    })
}

/// (root, index) of one odd value by peeling (o - 1) / 4 while o = 5 mod 8.
fn inverse_root(o: u64) -> (u64, u32) {
    let mut root = o;
    let mut index = 0u32;
    while root % 8 == 5 {
        root = (root - 1) / 4;
        index += 1;
    }
    (root, index)
}

/// root * 4^index + (4^index - 1) / 3 without leaving u128; `None` on overflow.
fn forward_term(root: u64, index: u32) -> Option<u128> {
    let mut value = u128::from(root);
    for _ in 0..index {
        value = value.checked_mul(4)?.checked_add(1)?;
    }
    Some(value)
}

/// Checks sum(s_i) + k = N(n) for every odd n up to `max_odd`: the
/// decomposition side rebuilds the chain, the count side asks the
/// memo-backed oracle.
pub fn decomposition_consistency(max_odd: u64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    if max_odd < 1 {
        return Err(Error::InvalidConfig("max_odd must be at least 1".into()));
    }
    if cfg.convention != Convention::Paper {
        return Err(Error::InvalidConfig(
            "the decomposition identity pivots on N(1) = 3; rerun under paper".into(),
        ));
    }
    let began = Instant::now();
    let budget = cfg.step_budget;
    let parts = run_chunks(1, u128::from(max_odd) + 1, cfg.chunk_size, cfg.workers, |lo, hi| {
        let mut chunk = ChunkStats::default();
        let mut n = if lo % 2 == 1 { lo } else { lo + 1 };
        while n < hi {
            chunk.seeds += 1;
            let verdict = (|| -> Result<Option<(u32, u32)>> {
                let decomp = kernel::syracuse_decompose(kernel::CollatzInt::new(n)?, budget)?;
                let counted = match cfg.cache {
                    Some(memo) => memo.stopping_count(n, budget)?,
                    None => kernel::stopping_count(kernel::CollatzInt::new(n)?, budget)?.count,
                };
                let total = decomp.total_steps();
                Ok((total != counted).then_some((total, counted)))
            })();
            match verdict {
                Ok(None) => {}
                Ok(Some((total, counted))) => {
                    if chunk.failures.is_empty() {
                        chunk.failures.push(IdentityFailure {
                            identity: "sum(s_i) + k = N(n)".into(),
                            witness: format!("n={n}: decomposition={total}, count={counted}"),
                        });
                    }
                }
                Err(err) => {
                    if chunk.failures.is_empty() {
                        chunk.failures.push(IdentityFailure {
                            identity: "sum(s_i) + k = N(n)".into(),
                            witness: format!("n={n}: {err}"),
                        });
                    }
                }
            }
            n += 2;
        }
        chunk
    })?;
    let mut stats = merge(1, u128::from(max_odd) + 1, cfg.convention, parts);
    // Keep only the smallest witness; chunks are already in seed order.
    stats.identity_failures.truncate(1);
    Ok(VerifyReport {
        stats,
        duration_ms: began.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_one_to_ten_peaks_at_nine() {
        let report = verify_range(&VerifyConfig::new(1, 10)).unwrap();
        assert!(report.stats.all_converged);
        assert_eq!(report.stats.seeds_checked, 9);
        assert_eq!(report.stats.max_steps, Some(MaxSteps { n: 9, steps: 19 }));
    }

    #[test]
    fn seed_27_excursion_is_9232() {
        let report = verify_range(&VerifyConfig::new(27, 28)).unwrap();
        assert_eq!(
            report.stats.max_excursion,
            Some(MaxExcursion { n: 27, peak: 9232 })
        );
        assert_eq!(report.stats.max_steps, Some(MaxSteps { n: 27, steps: 111 }));
    }

    #[test]
    fn empty_range_is_vacuously_converged() {
        let report = verify_range(&VerifyConfig::new(5, 5)).unwrap();
        assert_eq!(report.stats.seeds_checked, 0);
        assert!(report.stats.all_converged);
        assert_eq!(report.stats.max_steps, None);
        assert_eq!(report.stats.max_excursion, None);
    }

    #[test]
    fn stats_are_identical_across_worker_counts() {
        let mut one = VerifyConfig::new(1, 20_000);
        one.workers = 1;
        one.chunk_size = 1_024;
        let mut four = one;
        four.workers = 4;
        let a = verify_range(&one).unwrap();
        let b = verify_range(&four).unwrap();
        assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn stats_are_identical_with_and_without_cache() {
        let memo = MemoTable::build(20_000, Convention::Paper, DEFAULT_BUDGET).unwrap();
        let plain = VerifyConfig::new(1, 20_000);
        let mut cached = plain;
        cached.cache = Some(&memo);
        let a = verify_range(&plain).unwrap();
        let b = verify_range(&cached).unwrap();
        assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn overflowing_seed_is_recorded_not_fatal() {
        let seed = (1u128 << 120) - 1;
        let report = verify_range(&VerifyConfig::new(seed, seed + 2)).unwrap();
        assert!(!report.stats.all_converged);
        assert_eq!(report.stats.nonconverged.len(), 1);
        assert_eq!(
            report.stats.nonconverged[0],
            NonConverged {
                n: seed,
                reason: NonConvergence::Overflow
            }
        );
        // The even neighbor 2^120 halves straight down and converges.
        assert_eq!(report.stats.max_steps.map(|m| m.n), Some(seed + 1));
    }

    #[test]
    fn budget_exhaustion_is_recorded() {
        let mut cfg = VerifyConfig::new(27, 28);
        cfg.step_budget = 10;
        let report = verify_range(&cfg).unwrap();
        assert_eq!(
            report.stats.nonconverged,
            vec![NonConverged {
                n: 27,
                reason: NonConvergence::BudgetExhausted
            }]
        );
    }

    #[test]
    fn mismatched_cache_convention_is_rejected() {
        let memo = MemoTable::build(100, Convention::Standard, 1_000).unwrap();
        let mut cfg = VerifyConfig::new(1, 10);
        cfg.cache = Some(&memo);
        assert!(matches!(
            verify_range(&cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn identities_hold_for_small_k() {
        let report = check_step_identities(2_000, &VerifyConfig::new(1, 2)).unwrap();
        assert!(report.stats.identity_failures.is_empty());
        assert_eq!(report.stats.seeds_checked, 2_000);
    }

    #[test]
    fn identity_fixtures_at_109_and_1() {
        let memo = MemoTable::build(1_000, Convention::Paper, DEFAULT_BUDGET).unwrap();
        // k = 14 in N(8k-3) = 2 + N(2k-1): N(109) = 2 + N(27) = 113.
        assert_eq!(memo.lookup(109), Some(113));
        assert_eq!(memo.lookup(27), Some(111));
        // k = 1 in N(2k-1) = 2 + N(3k-1): N(1) = 2 + N(2) = 3.
        assert_eq!(memo.lookup(1), Some(3));
        assert_eq!(memo.lookup(2), Some(1));
    }

    #[test]
    fn identities_demand_the_paper_convention() {
        let mut cfg = VerifyConfig::new(1, 2);
        cfg.convention = Convention::Standard;
        assert!(matches!(
            check_step_identities(10, &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn partition_small_bounds() {
        let report = check_partition(85).unwrap();
        assert!(report.stats.identity_failures.is_empty());
        assert_eq!(report.stats.seeds_checked, 43);

        let report = check_partition(1).unwrap();
        assert!(report.stats.identity_failures.is_empty());
        assert_eq!(report.stats.seeds_checked, 1);
        assert_eq!(
            report.stats.root_residues,
            Some(ResidueCounts {
                residue_1: 1,
                residue_3: 0,
                residue_7: 0
            })
        );
    }

    #[test]
    fn partition_counts_roots_by_residue() {
        let report = check_partition(80).unwrap();
        // Odd residues 1,3,7 mod 8 up to 80: 1,9,17,...,73 (10), 3,11,...,75 (10), 7,15,...,79 (10).
        assert_eq!(
            report.stats.root_residues,
            Some(ResidueCounts {
                residue_1: 10,
                residue_3: 10,
                residue_7: 10
            })
        );
    }

    #[test]
    fn decomposition_consistency_small() {
        let report = decomposition_consistency(2_001, &VerifyConfig::new(1, 2)).unwrap();
        assert!(report.stats.identity_failures.is_empty());
        assert_eq!(report.stats.seeds_checked, 1_001);
    }
}

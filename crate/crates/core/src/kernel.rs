//! The Collatz kernel: single step, bounded trajectories, stopping
//! counts, and the Syracuse-style decomposition of a trajectory into
//! odd iterates and 2-adic valuations.
//!
//! All arithmetic is 128-bit and overflow-checked. Nothing here assumes
//! the conjecture: every walk carries a step budget and reports
//! non-convergence instead of looping.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default step budget used by callers that do not pick their own.
pub const DEFAULT_BUDGET: u32 = 100_000;

/// A positive integer in the fixed 128-bit representation the kernel
/// iterates on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CollatzInt(u128);

impl CollatzInt {
    pub const ONE: CollatzInt = CollatzInt(1);

    pub fn new(magnitude: u128) -> Result<Self> {
        if magnitude == 0 {
            return Err(Error::precondition("value must be at least 1"));
        }
        Ok(CollatzInt(magnitude))
    }

    pub const fn get(self) -> u128 {
        self.0
    }

    pub const fn is_even(self) -> bool {
        self.0 & 1 == 0
    }

    pub const fn is_odd(self) -> bool {
        self.0 & 1 == 1
    }
}

impl fmt::Display for CollatzInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CollatzInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u128> for CollatzInt {
    type Error = Error;

    fn try_from(v: u128) -> Result<Self> {
        CollatzInt::new(v)
    }
}

impl From<CollatzInt> for u128 {
    fn from(v: CollatzInt) -> u128 {
        v.0
    }
}

impl FromStr for CollatzInt {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v: u128 = s
            .parse()
            .map_err(|e| format!("not an unsigned 128-bit integer: {e}"))?;
        CollatzInt::new(v).map_err(|e| e.to_string())
    }
}

/// How many applications of f the input 1 is charged with.
///
/// `Paper` charges the full 1 -> 4 -> 2 -> 1 cycle, so N(1) = 3; that
/// convention is what makes the step identities uniform at the root.
/// `Standard` returns 0 for input 1 and exists for comparing against
/// external stopping-time tables. Inputs >= 2 count identically under
/// both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Paper,
    Standard,
}

impl Convention {
    /// Stopping count assigned to the input 1.
    pub const fn unit_count(self) -> u32 {
        match self {
            Convention::Paper => 3,
            Convention::Standard => 0,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Paper => f.write_str("paper"),
            Convention::Standard => f.write_str("standard"),
        }
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" => Ok(Convention::Paper),
            "standard" => Ok(Convention::Standard),
            other => Err(format!("unknown convention `{other}` (paper|standard)")),
        }
    }
}

/// One application of f: n/2 for even n, 3n+1 for odd n.
pub fn collatz_step(n: CollatzInt) -> Result<CollatzInt> {
    let v = n.get();
    if v & 1 == 0 {
        Ok(CollatzInt(v >> 1))
    } else {
        match triple_plus_one(v) {
            Some(next) => Ok(CollatzInt(next)),
            None => Err(Error::Overflow { at: v }),
        }
    }
}

#[inline]
fn triple_plus_one(v: u128) -> Option<u128> {
    v.checked_mul(3)?.checked_add(1)
}

/// A bounded forward orbit of a seed.
///
/// `values[0]` is the first image of the seed and the walk stops as
/// soon as 1 is appended, so a seed of 1 records the 1 -> 4 -> 2 -> 1
/// cycle once. `steps` equals `values.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub seed: CollatzInt,
    pub values: Vec<CollatzInt>,
    pub steps: u32,
    pub peak: CollatzInt,
    pub converged: bool,
}

/// Iterates f from `n`, recording every value, until 1 is reached or
/// `max_steps` applications have been spent.
///
/// Running out of budget is a status (`converged == false`), not an
/// error; overflow is an error.
pub fn trajectory(n: CollatzInt, max_steps: u32) -> Result<Trajectory> {
    if max_steps == 0 {
        return Err(Error::precondition("max_steps must be at least 1"));
    }
    let seed = n.get();
    let mut values = Vec::new();
    let mut v = seed;
    let mut peak = seed;
    // Apply f at least once so the seed 1 walks its cycle.
    loop {
        v = match step_raw(v) {
            Some(next) => next,
            None => return Err(Error::Overflow { at: v }),
        };
        if v > peak {
            peak = v;
        }
        values.push(CollatzInt(v));
        if v == 1 || values.len() as u32 == max_steps {
            break;
        }
    }
    let converged = v == 1;
    Ok(Trajectory {
        seed: n,
        steps: values.len() as u32,
        values,
        peak: CollatzInt(peak),
        converged,
    })
}

#[inline]
fn step_raw(v: u128) -> Option<u128> {
    if v & 1 == 0 {
        Some(v >> 1)
    } else {
        triple_plus_one(v)
    }
}

/// Stopping count of one integer: how many applications of f it takes
/// to first arrive at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepCount {
    pub n: CollatzInt,
    pub count: u32,
}

/// Stopping count under the paper convention (N(1) = 3).
pub fn stopping_count(n: CollatzInt, budget: u32) -> Result<StepCount> {
    stopping_count_with(Convention::Paper, n, budget)
}

/// Stopping count under an explicit convention. Even inputs are legal;
/// only the input 1 is convention-sensitive.
pub fn stopping_count_with(convention: Convention, n: CollatzInt, budget: u32) -> Result<StepCount> {
    if budget == 0 {
        return Err(Error::precondition("budget must be at least 1"));
    }
    let seed = n.get();
    if seed == 1 {
        let count = convention.unit_count();
        if count > budget {
            return Err(Error::BudgetExhausted { seed, budget });
        }
        return Ok(StepCount { n, count });
    }
    match count_steps_raw(seed, budget) {
        StepsOutcome::Converged(count) => Ok(StepCount { n, count }),
        StepsOutcome::OutOfBudget => Err(Error::BudgetExhausted { seed, budget }),
        StepsOutcome::Overflow { at } => Err(Error::Overflow { at }),
    }
}

/// Raw walk result for seeds >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StepsOutcome {
    Converged(u32),
    OutOfBudget,
    Overflow { at: u128 },
}

/// Counts f-applications from `seed` (>= 2) to the first arrival at 1,
/// folding runs of halvings into one shift.
pub(crate) fn count_steps_raw(seed: u128, budget: u32) -> StepsOutcome {
    debug_assert!(seed >= 2);
    let mut v = seed;
    let mut steps: u32 = 0;
    loop {
        if v & 1 == 0 {
            let tz = v.trailing_zeros();
            v >>= tz;
            steps = match steps.checked_add(tz) {
                Some(s) if s <= budget => s,
                _ => return StepsOutcome::OutOfBudget,
            };
            if v == 1 {
                return StepsOutcome::Converged(steps);
            }
        }
        if steps == budget {
            return StepsOutcome::OutOfBudget;
        }
        v = match triple_plus_one(v) {
            Some(next) => next,
            None => return StepsOutcome::Overflow { at: v },
        };
        steps += 1;
    }
}

/// Full walk of one seed recording the step count and the largest value
/// attained (including the seed itself). Used by range scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WalkOutcome {
    Converged { steps: u32, peak: u128 },
    OutOfBudget,
    Overflow,
}

pub(crate) fn walk_raw(seed: u128, budget: u32, convention: Convention) -> WalkOutcome {
    if seed == 1 {
        // Mirror `trajectory`: the paper convention walks the cycle once.
        return match convention {
            Convention::Paper => WalkOutcome::Converged { steps: 3, peak: 4 },
            Convention::Standard => WalkOutcome::Converged { steps: 0, peak: 1 },
        };
    }
    let mut v = seed;
    let mut peak = seed;
    let mut steps: u32 = 0;
    loop {
        if v & 1 == 0 {
            let tz = v.trailing_zeros();
            v >>= tz;
            steps = match steps.checked_add(tz) {
                Some(s) if s <= budget => s,
                _ => return WalkOutcome::OutOfBudget,
            };
            if v == 1 {
                return WalkOutcome::Converged { steps, peak };
            }
        }
        if steps == budget {
            return WalkOutcome::OutOfBudget;
        }
        v = match triple_plus_one(v) {
            Some(next) => next,
            None => return WalkOutcome::Overflow,
        };
        steps += 1;
        if v > peak {
            peak = v;
        }
    }
}

/// The odd-step structure of a trajectory: the chain
/// `3 b_{i-1} + 1 = 2^{s_i} b_i` with every `b_i` odd and `b_k = 1`.
///
/// The step count decomposes exactly as `sum(s_i) + k`, which for n = 1
/// gives the chain `[(2, 1)]` and the count 3 of the paper convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub n: CollatzInt,
    /// Ordered `(s_i, b_i)` pairs; the final pair has `b = 1`.
    pub pairs: Vec<(u32, CollatzInt)>,
}

impl Decomposition {
    /// Number of odd steps in the chain.
    pub fn k(&self) -> u32 {
        self.pairs.len() as u32
    }

    /// Sum of the 2-adic valuations.
    pub fn valuation_sum(&self) -> u32 {
        self.pairs.iter().map(|(s, _)| *s).sum()
    }

    /// `sum(s_i) + k`, the full stopping count of `n`.
    pub fn total_steps(&self) -> u32 {
        self.valuation_sum() + self.k()
    }
}

/// Decomposes an odd `n` into its Syracuse chain.
pub fn syracuse_decompose(n: CollatzInt, budget: u32) -> Result<Decomposition> {
    if n.is_even() {
        return Err(Error::precondition(format!(
            "syracuse decomposition needs an odd input, got {n}"
        )));
    }
    if budget == 0 {
        return Err(Error::precondition("budget must be at least 1"));
    }
    let seed = n.get();
    let mut pairs = Vec::new();
    let mut b = seed;
    let mut consumed: u64 = 0;
    loop {
        let t = match triple_plus_one(b) {
            Some(t) => t,
            None => return Err(Error::Overflow { at: b }),
        };
        let s = t.trailing_zeros();
        let next = t >> s;
        consumed += u64::from(s) + 1;
        if consumed > u64::from(budget) {
            return Err(Error::BudgetExhausted { seed, budget });
        }
        pairs.push((s, CollatzInt(next)));
        if next == 1 {
            break;
        }
        b = next;
    }
    Ok(Decomposition { n, pairs })
}

//! Collatz trajectories, stopping counts, odd-number families with
//! exact closed forms, and a brute-force verification harness that
//! cross-checks every family prediction against the kernel over
//! desk-scale ranges.
//!
//! The kernel iterates f(n) = n/2 (even) / 3n+1 (odd) in checked
//! 128-bit arithmetic; family closed forms use arbitrary precision.
//! Stopping counts follow the convention N(1) = 3 (the 1 -> 4 -> 2 -> 1
//! cycle walked once) unless the standard convention is requested.
//! Nothing assumes the conjecture: every walk is budgeted.

pub mod cache;
mod error;
pub mod families;
pub mod kernel;
pub mod verify;

pub use cache::{MemoTable, SENTINEL};
pub use error::{Error, Result};
pub use families::{
    family_from_recurrence, family_root, family_term, general_term, parametric_term,
    predicted_steps, seed_search, seed_search_chain, seed_search_excluding, seed_witness,
    FamilyName, FamilyRoot, FamilySpec, ParametricName, SeedSearchHit, SeedSearchRound,
    SeedWitness, WitnessCase,
};
pub use kernel::{
    collatz_step, stopping_count, stopping_count_with, syracuse_decompose, trajectory,
    CollatzInt, Convention, Decomposition, StepCount, Trajectory, DEFAULT_BUDGET,
};
pub use verify::{
    check_partition, check_step_identities, decomposition_consistency, verify_range,
    IdentityFailure, MaxExcursion, MaxSteps, NonConvergence, NonConverged, ResidueCounts,
    VerifyConfig, VerifyReport, VerifyStats, DEFAULT_CHUNK_SIZE,
};

//! Attacks against the cipher.
//!
//! Oracle-based attacks only ever see an [`EncryptionOracle`] or
//! [`TimingOracle`]; none of them takes the hidden key as a parameter.

mod brute_force;
mod cpa;
mod cycle;
mod kpa;
mod oracle;
mod report;
mod timing;

use thiserror::Error;

pub use brute_force::{brute_force, ExactMatch, PlaintextScorer, Smoothness};
pub use cpa::{
    cpa_full, cpa_query_bound, cpa_recover_mask, cpa_recover_permutation, digits_needed,
    CpaOutcome, EquivalentCipher, MaskRecovery,
};
pub use cycle::{cycle_attack, default_max_steps, rounds_candidates};
pub use kpa::{dictionary_stats, kpa, offset_dictionary, DictionaryRow};
pub use oracle::{
    EncryptionOracle, SimulatedOracle, SimulatedTimingOracle, TimingOracle, WallClockOracle,
};
pub use report::{AttackKind, AttackReport, Evidence};
pub use timing::{
    calibrate_pixel_cost, collect_samples, fit_line, timing_attack, timing_estimate, LinearFit,
    TimingModel, TimingSample,
};

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("orbit did not return to the target within {steps} oracle queries")]
    CycleNotClosed { steps: u64 },
    #[error("oracle output is inconsistent with this cipher: {0}")]
    InconsistentOracle(String),
    #[error("attack used {used} oracle queries, budget was {budget}")]
    QueryBudgetExceeded { used: u64, budget: u64 },
    #[error("no key candidate survived verification (s0={s0}, dictionary={dictionary:?})")]
    NoCandidate { s0: u8, dictionary: Vec<u64> },
    #[error("self-check failed: {0}")]
    SelfCheck(&'static str),
    #[error(transparent)]
    Input(#[from] crate::Error),
}

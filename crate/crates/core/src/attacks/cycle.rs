//! Re-encryption (cycle) attack.
//!
//! Encryption is an affine bijection `x -> P x ⊕ s` on the image space. With
//! `T` scrambling rounds the scrambling part repeats after `m / gcd(T, m)`
//! applications and the accumulated mask cancels after twice that, so feeding
//! the ciphertext back into the oracle returns to it after
//! `n = 2m / gcd(T, m)` queries. The state just before it reappears is the
//! plaintext.

use std::time::Instant;

use super::oracle::EncryptionOracle;
use super::report::{AttackKind, AttackReport};
use super::AttackError;
use crate::image::Image;
use crate::number_theory::{arnold_period, gcd};

/// Default query budget: `6N`, twice the largest possible cat map period.
pub fn default_max_steps(size: usize) -> u64 {
    6 * size as u64
}

/// All `T` in `[0, m)` with `gcd(T, m) = 2m / n`, where `gcd(0, m) = m`.
pub fn rounds_candidates(cycle_n: u64, period: u64) -> Vec<u64> {
    if cycle_n == 0 || !(2 * period).is_multiple_of(cycle_n) {
        return Vec::new();
    }
    let target = 2 * period / cycle_n;
    (0..period).filter(|&t| gcd(t, period) == target).collect()
}

pub fn cycle_attack(
    oracle: &mut dyn EncryptionOracle,
    cipher: &Image,
    max_steps: Option<u64>,
) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let budget = max_steps.unwrap_or_else(|| default_max_steps(cipher.size()));
    let period = arnold_period(cipher.size() as u64)?.period;
    let queries_before = oracle.queries();

    let mut current = cipher.clone();
    let mut closed_at = None;
    for step in 1..=budget {
        let next = oracle.encrypt(&current);
        if next.size() != cipher.size() {
            return Err(AttackError::InconsistentOracle(format!(
                "oracle returned a {0}x{0} image for a {1}x{1} query",
                next.size(),
                cipher.size()
            )));
        }
        if next == *cipher {
            closed_at = Some(step);
            break;
        }
        current = next;
    }
    let Some(cycle_n) = closed_at else {
        return Err(AttackError::CycleNotClosed { steps: budget });
    };

    let mut report = AttackReport::new(AttackKind::Cycle);
    report.recovered_plaintext = Some(current);
    report.evidence.cycle_n = Some(cycle_n);
    report.evidence.queries = Some(oracle.queries() - queries_before);
    report.evidence.rounds_candidates = rounds_candidates(cycle_n, period);
    if report.evidence.rounds_candidates.is_empty() {
        report.evidence.notes.push(format!(
            "cycle length {cycle_n} is not of the form 2m/gcd(T, m) for m={period}; \
             the plaintext has extra symmetry"
        ));
    }
    report.evidence.elapsed = start.elapsed();
    Ok(report)
}

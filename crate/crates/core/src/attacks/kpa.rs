//! Known-plaintext attack from a single plaintext/ciphertext pair.
//!
//! Pixel `(0, 0)` never moves, so `plain(0,0) ^ cipher(0,0)` is the first
//! keystream byte. Its positions in the Lucas cycle form a small dictionary
//! of `S` values. Unmasking with the right `S` leaves a pure permutation of the
//! plaintext, which has the same histogram; scrambling that one round at a time
//! brings the plaintext back after `n` steps, giving `T = m − n`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Ratio;

use super::report::{AttackKind, AttackReport};
use super::AttackError;
use crate::cipher::{decrypt, mask, scramble, Key, LucasCycle, LUCAS_CYCLE_LEN};
use crate::image::Image;
use crate::image_io::histogram;
use crate::keyspace::CanonicalKey;
use crate::number_theory::arnold_period;

/// All `S` in `[0, 384)` whose first keystream byte is `s0`.
pub fn offset_dictionary(s0: u8) -> Vec<u64> {
    LucasCycle::positions_of(s0)
        .into_iter()
        .map(|k| k as u64)
        .collect()
}

/// One row of the dictionary-size distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DictionaryRow {
    /// How many cycle positions share a byte value.
    pub size: usize,
    /// Cycle positions whose byte value has a dictionary of this size.
    pub positions: usize,
}

impl DictionaryRow {
    /// Chance that a uniformly random `S` yields a dictionary of this size.
    pub fn probability(&self) -> Ratio<u64> {
        Ratio::new(self.positions as u64, LUCAS_CYCLE_LEN as u64)
    }
}

/// Distribution of `S`-dictionary sizes over all 384 starting positions.
pub fn dictionary_stats() -> Vec<DictionaryRow> {
    let mut occurrences = [0usize; 256];
    for &b in LucasCycle::table() {
        occurrences[b as usize] += 1;
    }
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &b in LucasCycle::table() {
        *by_size.entry(occurrences[b as usize]).or_default() += 1;
    }
    by_size
        .into_iter()
        .map(|(size, positions)| DictionaryRow { size, positions })
        .collect()
}

/// Scrambles `unmasked` one round at a time, up to `budget` rounds, until it
/// equals `plain`. Returns the number of rounds taken.
fn rounds_until(unmasked: &Image, plain: &Image, budget: u64) -> Option<u64> {
    let mut current = unmasked.clone();
    (1..=budget).find(|_| {
        current = scramble(&current, 1);
        current == *plain
    })
}

pub fn kpa(plain: &Image, cipher: &Image) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    plain.same_size(cipher)?;
    let period = arnold_period(plain.size() as u64)?.period;

    let s0 = plain.get(0, 0) ^ cipher.get(0, 0);
    let dictionary = offset_dictionary(s0);
    let plain_hist = histogram(plain);
    let flat = plain_hist.is_flat();

    let mut report = AttackReport::new(AttackKind::Kpa);
    report.evidence.first_mask_byte = Some(s0);
    report.evidence.offset_candidates = dictionary.clone();
    if flat {
        report.evidence.notes.push(
            "flat plaintext histogram: histogram filter skipped, every candidate verified".into(),
        );
    }

    let mut verified = Vec::new();
    for &offset in &dictionary {
        let unmasked = mask(cipher, offset);
        if !flat && histogram(&unmasked) != plain_hist {
            continue;
        }
        let Some(n) = rounds_until(&unmasked, plain, period) else {
            continue;
        };
        let rounds = (period - n % period) % period;
        if decrypt(cipher, Key::new(rounds, offset)) == *plain {
            verified.push((offset, rounds, n));
        }
    }

    let Some(&(offset, rounds, n)) = verified.first() else {
        return Err(AttackError::NoCandidate { s0, dictionary });
    };
    if verified.len() > 1 {
        report.evidence.notes.push(format!(
            "{} keys verify on this pair; reporting the smallest S",
            verified.len()
        ));
    }
    report.recovered_key = Some(CanonicalKey {
        rounds,
        offset,
        period,
    });
    report.recovered_plaintext = Some(plain.clone());
    report.evidence.cycle_n = Some(n);
    report.evidence.elapsed = start.elapsed();
    Ok(report)
}

//! Equivalent keys, effective key-space size and weak keys.
//!
//! `T` only matters modulo the cat map period `m(N)` and `S` only modulo the
//! Lucas cycle length 384, so every key collapses onto one of `m(N) · 384`
//! canonical representatives.

use std::fmt;

use num_rational::Ratio;

use crate::cipher::{Key, LUCAS_CYCLE_LEN};
use crate::error::Result;
use crate::number_theory::{arnold_period, BoundCase};

const CYCLE: u64 = LUCAS_CYCLE_LEN as u64;

/// Representative of an equivalent-key class: `rounds < period`, `offset < 384`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub rounds: u64,
    pub offset: u64,
    pub period: u64,
}

impl CanonicalKey {
    pub fn key(&self) -> Key {
        Key::new(self.rounds, self.offset)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T={} S={} (period m={})",
            self.rounds, self.offset, self.period
        )
    }
}

pub fn canonicalize(key: Key, size: u64) -> Result<CanonicalKey> {
    let period = arnold_period(size)?.period;
    Ok(canonical_with_period(key, period))
}

pub(crate) fn canonical_with_period(key: Key, period: u64) -> CanonicalKey {
    CanonicalKey {
        rounds: key.rounds % period,
        offset: key.offset % CYCLE,
        period,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyspaceReport {
    pub size: u64,
    pub period: u64,
    pub bound_case: BoundCase,
    pub keystream_period: u64,
    pub key_space_size: u64,
    pub weak_key_probability: Ratio<u64>,
    /// `384 ×` the cat map period bound for this `N`.
    pub bound_size: Ratio<u64>,
}

impl KeyspaceReport {
    pub fn log2_size(&self) -> f64 {
        (self.key_space_size as f64).log2()
    }
}

pub fn key_space_size(size: u64) -> Result<KeyspaceReport> {
    let info = arnold_period(size)?;
    Ok(KeyspaceReport {
        size,
        period: info.period,
        bound_case: info.bound_case,
        keystream_period: CYCLE,
        key_space_size: info.period * CYCLE,
        weak_key_probability: Ratio::new(1, info.period),
        bound_size: info.bound * CYCLE,
    })
}

/// A key is weak when its scrambling rounds are a whole number of periods:
/// encryption degenerates to an XOR mask and applying it twice decrypts.
pub fn is_weak_key(key: Key, size: u64) -> Result<bool> {
    Ok(key.rounds.is_multiple_of(arnold_period(size)?.period))
}

/// Chance that a uniformly drawn `T` is weak, `1/m(N)`.
pub fn weak_key_probability(size: u64) -> Result<Ratio<u64>> {
    Ok(Ratio::new(1, arnold_period(size)?.period))
}

//! Chosen-plaintext attack.
//!
//! The all-zero image encrypts to the bare keystream. Once that is XORed off,
//! the cipher is a pure pixel permutation, which `D = ⌈log₂₅₆ N²⌉` further
//! queries reveal by encoding every raster index in base 256, one digit per
//! plaintext.

use std::time::Instant;

use super::oracle::EncryptionOracle;
use super::report::{AttackKind, AttackReport};
use super::AttackError;
use crate::cipher::{forward_matrix_pow, scramble_map, Key, LucasCycle, LUCAS_CYCLE_LEN};
use crate::error::Error;
use crate::image::Image;
use crate::keyspace::CanonicalKey;
use crate::number_theory::arnold_period;

/// Base-256 digits needed to write every raster index of an `N × N` image.
pub fn digits_needed(size: usize) -> u32 {
    let pixels = (size as u128) * (size as u128);
    let mut digits = 0;
    let mut reach: u128 = 1;
    while reach < pixels {
        reach <<= 8;
        digits += 1;
    }
    digits
}

/// Total chosen plaintexts: one for the mask plus one per index digit,
/// i.e. `⌈2·log₂₅₆ N⌉ + 1`.
pub fn cpa_query_bound(size: usize) -> u64 {
    digits_needed(size) as u64 + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskRecovery {
    /// Keystream in raster order, one byte per pixel.
    pub mask: Vec<u8>,
    /// Every `S` in `[0, 384)` whose keystream matches `mask`. A single entry
    /// once the image has at least 384 pixels.
    pub offset_candidates: Vec<u64>,
}

fn check_size(reply: &Image, size: usize) -> Result<(), AttackError> {
    if reply.size() != size {
        return Err(AttackError::InconsistentOracle(format!(
            "asked for {size}x{size}, got {0}x{0}",
            reply.size()
        )));
    }
    Ok(())
}

/// One query with the all-zero image.
pub fn cpa_recover_mask(
    oracle: &mut dyn EncryptionOracle,
    size: usize,
) -> Result<MaskRecovery, AttackError> {
    let zeros = Image::zeros(size)?;
    let reply = oracle.encrypt(&zeros);
    check_size(&reply, size)?;
    let mask = reply.into_pixels();
    let table = LucasCycle::table();
    let offset_candidates: Vec<u64> = (0..LUCAS_CYCLE_LEN)
        .filter(|&s| {
            mask.iter()
                .enumerate()
                .all(|(k, &b)| table[(s + k) % LUCAS_CYCLE_LEN] == b)
        })
        .map(|s| s as u64)
        .collect();
    if offset_candidates.is_empty() {
        return Err(AttackError::InconsistentOracle(
            "all-zero ciphertext is not a rotation of the Lucas cycle".into(),
        ));
    }
    Ok(MaskRecovery {
        mask,
        offset_candidates,
    })
}

/// Recovers the scrambling permutation: entry `k` is the raster index that
/// source pixel `k` is moved to.
pub fn cpa_recover_permutation(
    oracle: &mut dyn EncryptionOracle,
    mask: &[u8],
    size: usize,
) -> Result<Vec<usize>, AttackError> {
    let pixels = size * size;
    if mask.len() != pixels {
        return Err(Error::PixelCount {
            size,
            expected: pixels,
            actual: mask.len(),
        }
        .into());
    }
    // source[q]: which plaintext index ends up at ciphertext position q
    let mut source = vec![0usize; pixels];
    for digit in 0..digits_needed(size) {
        let shift = 8 * digit;
        let probe = Image::new(size, (0..pixels).map(|k| (k >> shift) as u8).collect())?;
        let reply = oracle.encrypt(&probe);
        check_size(&reply, size)?;
        for ((src, &c), &m) in source.iter_mut().zip(reply.pixels()).zip(mask) {
            *src |= ((c ^ m) as usize) << shift;
        }
    }
    let mut dest = vec![usize::MAX; pixels];
    for (q, &k) in source.iter().enumerate() {
        if k >= pixels || dest[k] != usize::MAX {
            return Err(AttackError::InconsistentOracle(format!(
                "decoded source index {k} at position {q} is out of range or repeated"
            )));
        }
        dest[k] = q;
    }
    Ok(dest)
}

/// Mask plus permutation: decrypts anything the oracle's key encrypts,
/// whether or not the permutation is a cat map power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalentCipher {
    size: usize,
    mask: Vec<u8>,
    permutation: Vec<usize>,
}

impl EquivalentCipher {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mask(&self) -> &[u8] {
        &self.mask
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn encrypt(&self, plain: &Image) -> Result<Image, Error> {
        self.check(plain)?;
        let mut out = vec![0u8; plain.len()];
        for (k, &p) in plain.pixels().iter().enumerate() {
            let q = self.permutation[k];
            out[q] = p ^ self.mask[q];
        }
        Image::new(self.size, out)
    }

    pub fn decrypt(&self, cipher: &Image) -> Result<Image, Error> {
        self.check(cipher)?;
        let c = cipher.pixels();
        let out = self
            .permutation
            .iter()
            .map(|&q| c[q] ^ self.mask[q])
            .collect();
        Image::new(self.size, out)
    }

    fn check(&self, image: &Image) -> Result<(), Error> {
        if image.size() != self.size {
            return Err(Error::SizeMismatch(image.size(), self.size));
        }
        Ok(())
    }
}

pub struct CpaOutcome {
    pub report: AttackReport,
    pub decryptor: EquivalentCipher,
}

/// Finds `T` in `[0, m)` whose cat map power produces `dest`, if any.
fn match_rounds(dest: &[usize], size: usize, period: u64) -> Option<u64> {
    if size == 1 {
        return Some(0);
    }
    // The images of (0,1) and (1,0) pin down the whole linear map.
    let n = size as u64;
    let (e01, e10) = (dest[1] as u64, dest[size] as u64);
    let observed = [e10 / n, e01 / n, e10 % n, e01 % n];
    let rounds = (0..period).find(|&t| forward_matrix_pow(t, n) == observed)?;
    (scramble_map(size, rounds) == dest).then_some(rounds)
}

/// Mask recovery followed by permutation recovery, within the
/// `⌈2·log₂₅₆ N⌉ + 1` query budget.
pub fn cpa_full(oracle: &mut dyn EncryptionOracle, size: usize) -> Result<CpaOutcome, AttackError> {
    let start = Instant::now();
    let before = oracle.queries();
    let MaskRecovery {
        mask,
        offset_candidates,
    } = cpa_recover_mask(oracle, size)?;
    let permutation = cpa_recover_permutation(oracle, &mask, size)?;
    let used = oracle.queries() - before;
    let budget = cpa_query_bound(size);
    if used > budget {
        return Err(AttackError::QueryBudgetExceeded { used, budget });
    }

    let period = arnold_period(size as u64)?.period;
    let rounds = match_rounds(&permutation, size, period);
    let mut report = AttackReport::new(AttackKind::Cpa);
    report.evidence.queries = Some(used);
    report.evidence.offset_candidates = offset_candidates.clone();
    report.evidence.first_mask_byte = mask.first().copied();
    match rounds {
        Some(t) => report.evidence.rounds_candidates = vec![t],
        None => report
            .evidence
            .notes
            .push("permutation is not a power of the cat map".into()),
    }
    if offset_candidates.len() > 1 {
        report.evidence.notes.push(format!(
            "{} keystream alignments fit a {size}x{size} mask",
            offset_candidates.len()
        ));
    }

    let decryptor = EquivalentCipher {
        size,
        mask,
        permutation,
    };
    if let (Some(t), [s]) = (rounds, offset_candidates.as_slice()) {
        let key = CanonicalKey {
            rounds: t,
            offset: *s,
            period,
        };
        // the canonical key must reproduce exactly what the queries revealed
        let probe = Image::from_fn(size, |i, j| (i * 31 + j * 7) as u8)?;
        if crate::cipher::encrypt(&probe, Key::new(t, *s)) != decryptor.encrypt(&probe)? {
            return Err(AttackError::SelfCheck(
                "canonical key disagrees with recovered mask",
            ));
        }
        report.recovered_key = Some(key);
    }
    report.evidence.elapsed = start.elapsed();
    Ok(CpaOutcome { report, decryptor })
}

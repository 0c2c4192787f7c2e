//! Exhaustive search over the `m(N) · 384` canonical keys.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{AttackKind, AttackReport};
use super::AttackError;
use crate::cipher::{decrypt, scramble_map, LucasCycle, LUCAS_CYCLE_LEN};
use crate::image::Image;
use crate::image_io::smoothness_raw;
use crate::keyspace::CanonicalKey;
use crate::number_theory::arnold_period;

/// Ranks candidate decryptions; lower means more plaintext-like.
pub trait PlaintextScorer: Sync {
    fn score(&self, image: &Image) -> f64;
}

impl<F> PlaintextScorer for F
where
    F: Fn(&Image) -> f64 + Sync,
{
    fn score(&self, image: &Image) -> f64 {
        self(image)
    }
}

/// Sum of absolute differences between 4-connected neighbours. Natural images
/// score low, masked or scrambled ones high.
#[derive(Debug, Clone, Copy, Default)]
pub struct Smoothness;

impl PlaintextScorer for Smoothness {
    fn score(&self, image: &Image) -> f64 {
        if image.size() < 2 {
            return 0.0;
        }
        smoothness_raw(image.pixels(), image.size()) as f64
    }
}

/// Number of pixels differing from a known plaintext.
#[derive(Debug, Clone)]
pub struct ExactMatch(pub Image);

impl PlaintextScorer for ExactMatch {
    fn score(&self, image: &Image) -> f64 {
        if image.size() != self.0.size() {
            return f64::INFINITY;
        }
        image
            .pixels()
            .iter()
            .zip(self.0.pixels())
            .filter(|(a, b)| a != b)
            .count() as f64
    }
}

#[derive(Debug, Clone, Copy)]
struct Best {
    score: f64,
    rounds: u64,
    offset: u64,
}

impl Best {
    const NONE: Best = Best {
        score: f64::INFINITY,
        rounds: u64::MAX,
        offset: u64::MAX,
    };

    fn order(&self, other: &Best) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then(self.rounds.cmp(&other.rounds))
            .then(self.offset.cmp(&other.offset))
    }

    fn min(self, other: Best) -> Best {
        if other.order(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

/// `S` values are handed out to workers in blocks of this many.
const OFFSET_BLOCK: usize = 96;

/// Scores every `S` in `offsets` for one value of `T`.
fn search_rounds(
    cipher: &Image,
    rounds: u64,
    offsets: std::ops::Range<usize>,
    scorer: &dyn PlaintextScorer,
) -> Best {
    let n = cipher.size();
    // Plaintext pixel k was moved to dest[k] and then masked with s(dest[k]).
    let dest = scramble_map(n, rounds);
    let gathered: Vec<u8> = dest.iter().map(|&d| cipher.pixels()[d]).collect();
    let phase: Vec<u16> = dest.iter().map(|&d| (d % LUCAS_CYCLE_LEN) as u16).collect();
    let mut doubled = [0u8; 2 * LUCAS_CYCLE_LEN];
    doubled[..LUCAS_CYCLE_LEN].copy_from_slice(LucasCycle::table());
    doubled[LUCAS_CYCLE_LEN..].copy_from_slice(LucasCycle::table());

    let mut candidate = Image::zeros(n).expect("cipher size >= 1");
    let mut best = Best::NONE;
    for offset in offsets {
        let stream = &doubled[offset..offset + LUCAS_CYCLE_LEN];
        for ((out, &c), &p) in candidate.pixels_mut().iter_mut().zip(&gathered).zip(&phase) {
            *out = c ^ stream[p as usize];
        }
        let score = scorer.score(&candidate);
        best = best.min(Best {
            score,
            rounds,
            offset: offset as u64,
        });
    }
    best
}

/// Decrypts `cipher` under every canonical key and keeps the lowest-scoring
/// result. `workers == 1` runs serially on the calling thread; `0` uses the
/// machine's available parallelism. Ties go to the smallest `(T, S)`, so the
/// outcome does not depend on the worker count.
pub fn brute_force(
    cipher: &Image,
    scorer: &dyn PlaintextScorer,
    workers: usize,
) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let period = arnold_period(cipher.size() as u64)?.period;
    let tasks: Vec<(u64, std::ops::Range<usize>)> = (0..period)
        .flat_map(|t| {
            (0..LUCAS_CYCLE_LEN)
                .step_by(OFFSET_BLOCK)
                .map(move |s| (t, s..(s + OFFSET_BLOCK).min(LUCAS_CYCLE_LEN)))
        })
        .collect();

    let best = if workers == 1 {
        tasks
            .into_iter()
            .map(|(t, range)| search_rounds(cipher, t, range, scorer))
            .fold(Best::NONE, Best::min)
    } else {
        let run = || {
            tasks
                .into_par_iter()
                .map(|(t, range)| search_rounds(cipher, t, range, scorer))
                .reduce(|| Best::NONE, Best::min)
        };
        if workers == 0 {
            run()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|_| AttackError::SelfCheck("could not start worker pool"))?
                .install(run)
        }
    };

    let key = CanonicalKey {
        rounds: best.rounds,
        offset: best.offset,
        period,
    };
    let plaintext = decrypt(cipher, key.key());
    if scorer.score(&plaintext).total_cmp(&best.score) != Ordering::Equal {
        return Err(AttackError::SelfCheck(
            "fast candidate decryption disagrees with decrypt()",
        ));
    }

    let mut report = AttackReport::new(AttackKind::Brute);
    report.recovered_key = Some(key);
    report.recovered_plaintext = Some(plaintext);
    report.evidence.candidates_tried = Some(period * LUCAS_CYCLE_LEN as u64);
    report.evidence.best_score = Some(best.score);
    report.evidence.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{encrypt, Key};
    use crate::image_io::{make_fixture, FixtureKind};

    #[test]
    fn exact_match_always_recovers() {
        let plain = make_fixture(FixtureKind::Noise(8), 16).unwrap();
        let cipher = encrypt(&plain, Key::new(29, 1000));
        let report = brute_force(&cipher, &ExactMatch(plain.clone()), 1).unwrap();
        assert_eq!(report.recovered_plaintext.unwrap(), plain);
        let m = arnold_period(16).unwrap().period;
        assert_eq!(
            report.recovered_key.unwrap().key(),
            Key::new(29 % m, 1000 % 384)
        );
        assert_eq!(report.evidence.candidates_tried, Some(m * 384));
    }

    #[test]
    fn gradient_under_smoothness() {
        let plain = make_fixture(FixtureKind::Gradient, 24).unwrap();
        let cipher = encrypt(&plain, Key::new(5, 77));
        let serial = brute_force(&cipher, &Smoothness, 1).unwrap();
        let parallel = brute_force(&cipher, &Smoothness, 3).unwrap();
        assert_eq!(serial.recovered_plaintext.as_ref(), Some(&plain));
        assert_eq!(serial.recovered_key, parallel.recovered_key);
        assert_eq!(serial.evidence.best_score, parallel.evidence.best_score);
    }

    #[test]
    fn ties_resolve_to_smallest_key() {
        let cipher = make_fixture(FixtureKind::Noise(2), 8).unwrap();
        let flat = |_: &Image| 1.0;
        let report = brute_force(&cipher, &flat, 4).unwrap();
        assert_eq!(report.recovered_key.unwrap().key(), Key::new(0, 0));
    }
}

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cipher::{encrypt, scramble_rounds, xor_keystream_in_place, Key};
use crate::image::Image;
use crate::image_io::{make_fixture, FixtureKind};

/// Black-box encryption under a fixed hidden key.
pub trait EncryptionOracle {
    fn encrypt(&mut self, plain: &Image) -> Image;
    /// Queries answered so far.
    fn queries(&self) -> u64;
}

/// In-process oracle holding the hidden key. The key is never exposed.
pub struct SimulatedOracle {
    key: Key,
    queries: u64,
}

impl SimulatedOracle {
    pub fn new(key: Key) -> Self {
        Self { key, queries: 0 }
    }
}

impl EncryptionOracle for SimulatedOracle {
    fn encrypt(&mut self, plain: &Image) -> Image {
        self.queries += 1;
        encrypt(plain, self.key)
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// Side channel: how long the victim takes to encrypt an `N × N` image.
pub trait TimingOracle {
    fn time_encryption(&mut self, size: usize) -> f64;
}

/// Cost model of a round-by-round implementation:
/// `pixel_cost · n · (T + 1) · (1 + ε)` with `ε` uniform in `[-noise, noise]`.
pub struct SimulatedTimingOracle {
    key: Key,
    pixel_cost: f64,
    noise: f64,
    rng: ChaCha8Rng,
}

impl SimulatedTimingOracle {
    pub fn new(key: Key, pixel_cost: f64, noise: f64, seed: u64) -> Self {
        Self {
            key,
            pixel_cost,
            noise: noise.abs(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl TimingOracle for SimulatedTimingOracle {
    fn time_encryption(&mut self, size: usize) -> f64 {
        let pixels = (size * size) as f64;
        let eps = if self.noise > 0.0 {
            self.rng.random_range(-self.noise..=self.noise)
        } else {
            0.0
        };
        self.pixel_cost * pixels * (self.key.rounds as f64 + 1.0) * (1.0 + eps)
    }
}

/// Wall-clock seconds of a real round-by-round encryption (median of `repeats`).
pub struct WallClockOracle {
    key: Key,
    repeats: usize,
}

impl WallClockOracle {
    pub fn new(key: Key, repeats: usize) -> Self {
        Self {
            key,
            repeats: repeats.max(1),
        }
    }
}

impl TimingOracle for WallClockOracle {
    fn time_encryption(&mut self, size: usize) -> f64 {
        let plain = make_fixture(FixtureKind::Noise(size as u64), size).expect("size >= 1");
        let mut runs: Vec<f64> = (0..self.repeats)
            .map(|_| {
                let start = Instant::now();
                let mut out = scramble_rounds(&plain, self.key.rounds);
                xor_keystream_in_place(out.pixels_mut(), self.key.offset);
                std::hint::black_box(&out);
                start.elapsed().as_secs_f64()
            })
            .collect();
        runs.sort_by(f64::total_cmp);
        runs[runs.len() / 2]
    }
}

//! Periods of the cat map and of the Lucas sequence under a modulus.

use std::fmt;

use num_rational::Ratio;

use crate::cipher::{forward_matrix_pow, mat_mul};
use crate::error::{Error, Result};

/// Which closed-form bound on the cat map period applies to a given `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCase {
    /// `N = 2·5^r`, `r ≥ 1`: period is exactly `3N`.
    ThreeN,
    /// `N = 5^r` with `r ≥ 1`, or `N = 6·5^r` with `r ≥ 0`: period is exactly `2N`.
    TwoN,
    /// Every other `N`: period is at most `12N/7`.
    General,
}

impl BoundCase {
    pub fn classify(size: u64) -> Self {
        let mut p = 5u64;
        while p <= size {
            if size == p {
                return BoundCase::TwoN;
            }
            if size == 2 * p {
                return BoundCase::ThreeN;
            }
            p = match p.checked_mul(5) {
                Some(next) => next,
                None => break,
            };
        }
        let mut p = 1u64;
        while p.saturating_mul(6) <= size {
            if size == 6 * p {
                return BoundCase::TwoN;
            }
            p *= 5;
        }
        BoundCase::General
    }

    /// The bound's right-hand side for this `N`.
    pub fn bound(self, size: u64) -> Ratio<u64> {
        match self {
            BoundCase::ThreeN => Ratio::from_integer(3 * size),
            BoundCase::TwoN => Ratio::from_integer(2 * size),
            BoundCase::General => Ratio::new(12 * size, 7),
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, BoundCase::General)
    }
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundCase::ThreeN => "THREE_N",
            BoundCase::TwoN => "TWO_N",
            BoundCase::General => "GENERAL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodInfo {
    pub size: u64,
    pub period: u64,
    pub bound_case: BoundCase,
    pub bound: Ratio<u64>,
}

impl PeriodInfo {
    /// Whether the measured period respects the closed-form bound
    /// (equality in the exact cases).
    pub fn within_bound(&self) -> bool {
        let p = Ratio::from_integer(self.period);
        if self.bound_case.is_exact() {
            p == self.bound
        } else {
            p <= self.bound
        }
    }
}

/// Least `m ≥ 1` with `[[1,1],[1,2]]^m ≡ I (mod N)`.
pub fn arnold_period(size: u64) -> Result<PeriodInfo> {
    if size == 0 {
        return Err(Error::InvalidSize { size: 0, min: 1 });
    }
    let identity = forward_matrix_pow(0, size);
    let step = forward_matrix_pow(1, size);
    let cap = 3 * size;
    let mut acc = step;
    let mut period = 1;
    while acc != identity {
        if period >= cap {
            return Err(Error::PeriodCapExceeded { size });
        }
        acc = mat_mul(&acc, &step, size);
        period += 1;
    }
    let bound_case = BoundCase::classify(size);
    Ok(PeriodInfo {
        size,
        period,
        bound_case,
        bound: bound_case.bound(size),
    })
}

pub fn arnold_period_table(sizes: &[u64]) -> Result<Vec<PeriodInfo>> {
    sizes.iter().map(|&n| arnold_period(n)).collect()
}

/// Period of the Lucas sequence reduced modulo `modulus`, found by walking the
/// state pair from `(2, 1)` until it comes back.
pub fn sequence_period_mod(modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus));
    }
    let start = (2 % modulus, 1 % modulus);
    let (mut a, mut b) = start;
    let mut period = 0u64;
    loop {
        (a, b) = (b, ((a as u128 + b as u128) % modulus as u128) as u64);
        period += 1;
        if (a, b) == start {
            return Ok(period);
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple; `lcm(0, x) = 0`.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

//! The cipher itself: `T` rounds of the Arnold cat map, then an XOR mask drawn
//! from the Lucas sequence modulo 256.
//!
//! Coordinates are 0-based. One round sends `(i, j)` to `((i + j) mod N, (i + 2j) mod N)`,
//! so `(0, 0)` is the map's only fixed point. The mask byte for raster index `k`
//! of the scrambled image is `L_{S+k} mod 256`.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::Image;

/// Length of the Lucas sequence cycle modulo 256.
pub const LUCAS_CYCLE_LEN: usize = 384;

const LUCAS_TABLE: [u8; LUCAS_CYCLE_LEN] = build_lucas_table();

const fn build_lucas_table() -> [u8; LUCAS_CYCLE_LEN] {
    let mut table = [0u8; LUCAS_CYCLE_LEN];
    table[0] = 2;
    table[1] = 1;
    let mut k = 2;
    while k < LUCAS_CYCLE_LEN {
        table[k] = table[k - 1].wrapping_add(table[k - 2]);
        k += 1;
    }
    table
}

/// One full period of `L_n mod 256`, entry `k` holding `L_k mod 256`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LucasCycle;

impl LucasCycle {
    #[inline]
    pub fn table() -> &'static [u8; LUCAS_CYCLE_LEN] {
        &LUCAS_TABLE
    }

    /// `L_index mod 256` for any index.
    #[inline]
    pub fn at(index: u64) -> u8 {
        LUCAS_TABLE[(index % LUCAS_CYCLE_LEN as u64) as usize]
    }

    /// Every cycle position holding `value`, ascending.
    pub fn positions_of(value: u8) -> Vec<usize> {
        LUCAS_TABLE
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == value)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Secret key: `rounds` is the scrambling iteration count `T`, `offset` the
/// Lucas start position `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Key {
    pub rounds: u64,
    pub offset: u64,
}

impl Key {
    pub const fn new(rounds: u64, offset: u64) -> Self {
        Self { rounds, offset }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T={} S={}", self.rounds, self.offset)
    }
}

/// 2x2 matrix mod N, row-major.
pub(crate) type Mat2 = [u64; 4];

const FORWARD: Mat2 = [1, 1, 1, 2];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2, modulus: u64) -> Mat2 {
    let m = modulus as u128;
    let e = |x: u64, y: u64, z: u64, w: u64| {
        ((x as u128 * y as u128 + z as u128 * w as u128) % m) as u64
    };
    [
        e(a[0], b[0], a[1], b[2]),
        e(a[0], b[1], a[1], b[3]),
        e(a[2], b[0], a[3], b[2]),
        e(a[2], b[1], a[3], b[3]),
    ]
}

pub(crate) fn mat_pow(base: &Mat2, mut exp: u64, modulus: u64) -> Mat2 {
    let one = 1 % modulus;
    let mut acc = [one, 0, 0, one];
    let mut b = base.map(|x| x % modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mat_mul(&acc, &b, modulus);
        }
        b = mat_mul(&b, &b, modulus);
        exp >>= 1;
    }
    acc
}

pub(crate) fn forward_matrix_pow(rounds: u64, size: u64) -> Mat2 {
    mat_pow(&FORWARD, rounds, size)
}

/// Inverse of the cat map matrix: `(i, j) -> (2i - j, j - i) mod N`.
fn inverse_matrix(size: u64) -> Mat2 {
    let neg_one = (size - 1) % size;
    [2 % size, neg_one, neg_one, 1 % size]
}

/// Raster index that `(i, j)` lands on under the matrix `m`.
#[inline]
fn apply(m: &Mat2, i: usize, j: usize, n: usize) -> usize {
    let (i, j, n64) = (i as u64, j as u64, n as u64);
    let r = (m[0] * i + m[1] * j) % n64;
    let c = (m[2] * i + m[3] * j) % n64;
    (r as usize) * n + c as usize
}

/// One round of the cat map on a single coordinate.
pub fn arnold_step(pos: (usize, usize), size: usize) -> Result<(usize, usize)> {
    let (i, j) = pos;
    if size == 0 {
        return Err(Error::InvalidSize { size, min: 1 });
    }
    if i >= size || j >= size {
        return Err(Error::CoordinateOutOfRange {
            row: i,
            col: j,
            size,
        });
    }
    Ok(((i + j) % size, (i + 2 * j) % size))
}

/// For every source raster index, the raster index it occupies after `rounds`
/// rounds of scrambling.
pub fn scramble_map(size: usize, rounds: u64) -> Vec<usize> {
    let m = forward_matrix_pow(rounds, size as u64);
    let mut dest = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            dest.push(apply(&m, i, j, size));
        }
    }
    dest
}

/// Applies `rounds` rounds of the cat map. Uses the closed-form matrix power,
/// so the cost does not grow with `rounds`.
pub fn scramble(image: &Image, rounds: u64) -> Image {
    let n = image.size();
    let m = forward_matrix_pow(rounds, n as u64);
    let src = image.pixels();
    let mut out = image.clone();
    let dst = out.pixels_mut();
    for i in 0..n {
        for j in 0..n {
            dst[apply(&m, i, j, n)] = src[i * n + j];
        }
    }
    out
}

/// Scrambles by literally iterating the coordinate map once per round, the way
/// a straightforward implementation of the cipher does. Cost is `O(N² T)`.
pub fn scramble_rounds(image: &Image, rounds: u64) -> Image {
    let n = image.size();
    let mut cur = image.clone();
    let mut next = image.clone();
    for _ in 0..rounds {
        let src = cur.pixels();
        let dst = next.pixels_mut();
        for i in 0..n {
            for j in 0..n {
                dst[((i + j) % n) * n + (i + 2 * j) % n] = src[i * n + j];
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Inverse of [`scramble`], applying the inverse matrix `rounds` times.
pub fn unscramble(image: &Image, rounds: u64) -> Image {
    let n = image.size();
    let m = mat_pow(&inverse_matrix(n as u64), rounds, n as u64);
    let src = image.pixels();
    let mut out = image.clone();
    let dst = out.pixels_mut();
    for i in 0..n {
        for j in 0..n {
            dst[apply(&m, i, j, n)] = src[i * n + j];
        }
    }
    out
}

/// `len` keystream bytes starting at Lucas position `start`.
pub fn keystream(start: u64, len: usize) -> Vec<u8> {
    let table = LucasCycle::table();
    let mut pos = (start % LUCAS_CYCLE_LEN as u64) as usize;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(table[pos]);
        pos += 1;
        if pos == LUCAS_CYCLE_LEN {
            pos = 0;
        }
    }
    out
}

/// XORs the keystream starting at `start` onto the image in raster order.
/// Self-inverse.
pub fn mask(image: &Image, start: u64) -> Image {
    let mut out = image.clone();
    xor_keystream_in_place(out.pixels_mut(), start);
    out
}

pub(crate) fn xor_keystream_in_place(pixels: &mut [u8], start: u64) {
    let table = LucasCycle::table();
    let mut pos = (start % LUCAS_CYCLE_LEN as u64) as usize;
    for p in pixels {
        *p ^= table[pos];
        pos += 1;
        if pos == LUCAS_CYCLE_LEN {
            pos = 0;
        }
    }
}

pub fn encrypt(image: &Image, key: Key) -> Image {
    let mut out = scramble(image, key.rounds);
    xor_keystream_in_place(out.pixels_mut(), key.offset);
    out
}

pub fn decrypt(image: &Image, key: Key) -> Image {
    unscramble(&mask(image, key.offset), key.rounds)
}

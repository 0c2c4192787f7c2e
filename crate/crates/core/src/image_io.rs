//! Binary PGM I/O, synthetic fixtures and the image statistics the attacks use.

use std::fs;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, PgmError, Result};
use crate::image::Image;

const PROVENANCE: &str = concat!("# ieal ", env!("CARGO_PKG_VERSION"));

/// Parses a binary (`P5`) PGM holding a square image with max value 255.
pub fn read_pgm(bytes: &[u8]) -> Result<Image, PgmError> {
    let magic = bytes
        .get(..2)
        .ok_or(PgmError::MalformedHeader("missing magic"))?;
    match magic {
        b"P5" => {}
        [b'P', d] if d.is_ascii_digit() => {
            return Err(PgmError::UnsupportedFormat(
                String::from_utf8_lossy(magic).into_owned(),
            ))
        }
        _ => return Err(PgmError::MalformedHeader("missing P5 magic")),
    }
    let mut cursor = HeaderCursor { bytes, pos: 2 };
    let width = cursor.number("width")?;
    let height = cursor.number("height")?;
    let max = cursor.number("max value")?;
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(PgmError::MalformedHeader(
                "missing separator after max value",
            ))
        }
    }
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader("zero dimension"));
    }
    if width != height {
        return Err(PgmError::NotSquare { width, height });
    }
    if max != 255 {
        return Err(PgmError::MaxValue(max));
    }
    let expected = width
        .checked_mul(height)
        .ok_or(PgmError::MalformedHeader("dimensions overflow"))?;
    let payload = &bytes[cursor.pos..];
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            actual: payload.len(),
        });
    }
    Ok(Image::new(width, payload[..expected].to_vec()).expect("dimensions checked above"))
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_blanks(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<usize, PgmError> {
        let before = self.pos;
        self.skip_blanks();
        if self.pos == before {
            return Err(PgmError::MalformedHeader(
                "expected whitespace between fields",
            ));
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::MalformedHeader(what));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::MalformedHeader(what))
    }
}

/// Serializes as binary P5 with one provenance comment line.
pub fn write_pgm(image: &Image) -> Vec<u8> {
    let n = image.size();
    let mut out = format!("P5\n{PROVENANCE}\n{n} {n}\n255\n").into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(read_pgm(&bytes)?)
}

pub fn save_pgm(path: impl AsRef<Path>, image: &Image) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_pgm(image)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// 256-bin pixel value counts.
#[derive(Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: [u64; 256],
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of distinct pixel values present.
    pub fn occupied(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// True when every occupied bin holds the same count, e.g. a constant
    /// image or one using each value equally often.
    pub fn is_flat(&self) -> bool {
        let mut occupied = self.counts.iter().filter(|&&c| c > 0);
        match occupied.next() {
            Some(first) => occupied.all(|c| c == first),
            None => true,
        }
    }
}

impl std::fmt::Debug for Histogram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.counts.iter().enumerate().filter(|(_, &c)| c > 0))
            .finish()
    }
}

pub fn histogram(image: &Image) -> Histogram {
    let mut counts = [0u64; 256];
    for &p in image.pixels() {
        counts[p as usize] += 1;
    }
    Histogram { counts }
}

/// Total absolute difference between horizontally and vertically adjacent pixels.
pub fn smoothness(image: &Image) -> Result<u64> {
    let n = image.size();
    if n < 2 {
        return Err(Error::InvalidSize { size: n, min: 2 });
    }
    Ok(smoothness_raw(image.pixels(), n))
}

pub(crate) fn smoothness_raw(px: &[u8], n: usize) -> u64 {
    let mut total = 0u64;
    for i in 0..n {
        let row = &px[i * n..(i + 1) * n];
        let mut acc = 0u32;
        for w in row.windows(2) {
            acc += w[0].abs_diff(w[1]) as u32;
        }
        if i + 1 < n {
            let below = &px[(i + 1) * n..(i + 2) * n];
            for (a, b) in row.iter().zip(below) {
                acc += a.abs_diff(*b) as u32;
            }
        }
        total += acc as u64;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Zeros,
    /// `(i + j) mod 256`
    Gradient,
    /// 0 where `i + j` is even, 255 elsewhere.
    Checkerboard,
    /// Uniform bytes from a seeded ChaCha8 stream.
    Noise(u64),
}

pub fn make_fixture(kind: FixtureKind, size: usize) -> Result<Image> {
    match kind {
        FixtureKind::Zeros => Image::zeros(size),
        FixtureKind::Gradient => Image::from_fn(size, |i, j| ((i + j) % 256) as u8),
        FixtureKind::Checkerboard => {
            Image::from_fn(size, |i, j| if (i + j) % 2 == 0 { 0 } else { 255 })
        }
        FixtureKind::Noise(seed) => {
            let mut img = Image::zeros(size)?;
            ChaCha8Rng::seed_from_u64(seed).fill_bytes(img.pixels_mut());
            Ok(img)
        }
    }
}

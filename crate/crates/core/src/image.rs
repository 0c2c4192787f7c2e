use std::fmt;

use crate::error::{Error, Result};

/// Square 8-bit grayscale image stored row-major: pixel `(i, j)` lives at `i * size + j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Image {
    size: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(size: usize, pixels: Vec<u8>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSize { size, min: 1 });
        }
        let expected = size
            .checked_mul(size)
            .ok_or(Error::InvalidSize { size, min: 1 })?;
        if pixels.len() != expected {
            return Err(Error::PixelCount {
                size,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self { size, pixels })
    }

    /// All-zero image of side `size`.
    pub fn zeros(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSize { size, min: 1 });
        }
        Ok(Self {
            size,
            pixels: vec![0; size * size],
        })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut img = Self::zeros(size)?;
        for i in 0..size {
            for j in 0..size {
                img.pixels[i * size + j] = f(i, j);
            }
        }
        Ok(img)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub(crate) fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Pixel at row `i`, column `j`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        assert!(
            i < self.size && j < self.size,
            "pixel ({i}, {j}) out of range"
        );
        self.pixels[i * self.size + j]
    }

    pub(crate) fn same_size(&self, other: &Image) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        Ok(())
    }
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Dumping tens of thousands of pixels into a panic message helps nobody.
        let preview = &self.pixels[..self.pixels.len().min(8)];
        f.debug_struct("Image")
            .field("size", &self.size)
            .field("head", &preview)
            .finish()
    }
}

//! In-memory 8-bit images and signed gradient maps, row-major.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// An image smaller than the 3x3 kernel footprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("image {width}x{height} is smaller than the 3x3 kernel")]
pub struct UndersizedImage {
    pub width: u32,
    pub height: u32,
}

/// Grayscale 8-bit image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

/// The 8-bit magnitude image a detector produces.
pub type EdgeImage = Image;

impl Image {
    /// All-zero image.
    pub fn new(width: u32, height: u32) -> Self {
        Self::constant(width, height, 0)
    }

    pub fn constant(width: u32, height: u32, value: u8) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        Image {
            width,
            height,
            pixels: vec![value; width as usize * height as usize],
        }
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        assert_eq!(
            pixels.len(),
            width as usize * height as usize,
            "pixel count does not match dimensions"
        );
        Image { width, height, pixels }
    }

    /// Deterministic pseudo-random image; the same seed always yields the
    /// same pixels on every platform.
    pub fn seeded(width: u32, height: u32, seed: u64) -> Self {
        let mut img = Image::new(width, height);
        ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut img.pixels);
        img
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, row: u32, col: u32) -> u8 {
        debug_assert!(row < self.height && col < self.width);
        self.pixels[row as usize * self.width as usize + col as usize]
    }

    pub fn set(&mut self, row: u32, col: u32, value: u8) {
        debug_assert!(row < self.height && col < self.width);
        self.pixels[row as usize * self.width as usize + col as usize] = value;
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub(crate) fn check_convolvable(&self) -> Result<(), UndersizedImage> {
        if self.width < 3 || self.height < 3 {
            return Err(UndersizedImage {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

/// Signed integer map, the raw result of a kernel convolution. Values use
/// wide exact arithmetic; nothing here wraps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMap {
    width: u32,
    height: u32,
    values: Vec<i32>,
}

impl SignedMap {
    pub fn new(width: u32, height: u32) -> Self {
        SignedMap {
            width,
            height,
            values: vec![0; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, row: u32, col: u32) -> i32 {
        debug_assert!(row < self.height && col < self.width);
        self.values[row as usize * self.width as usize + col as usize]
    }

    pub fn set(&mut self, row: u32, col: u32, value: i32) {
        debug_assert!(row < self.height && col < self.width);
        self.values[row as usize * self.width as usize + col as usize] = value;
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    #[cfg(not(feature = "parallel"))]
    pub(crate) fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, i32> {
        self.values.chunks_mut(self.width as usize)
    }

    #[cfg(feature = "parallel")]
    pub(crate) fn par_rows_mut(&mut self) -> rayon::slice::ChunksMut<'_, i32> {
        use rayon::prelude::*;
        self.values.par_chunks_mut(self.width as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_images_are_reproducible() {
        let a = Image::seeded(16, 9, 1234);
        let b = Image::seeded(16, 9, 1234);
        let c = Image::seeded(16, 9, 1235);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn row_major_addressing() {
        let mut img = Image::new(4, 3);
        img.set(2, 1, 9);
        assert_eq!(img.pixels()[2 * 4 + 1], 9);
        assert_eq!(img.get(2, 1), 9);
    }

    #[test]
    fn undersized_check() {
        assert!(Image::new(2, 5).check_convolvable().is_err());
        assert!(Image::new(3, 3).check_convolvable().is_ok());
    }
}

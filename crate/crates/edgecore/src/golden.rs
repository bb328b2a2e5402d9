//! Plain integer convolution reference detector, the ground truth every
//! bit-level datapath variant is checked against.
//!
//! The sliding dot product is a correlation (no kernel flip), matching the
//! datapath convention. Intermediate arithmetic is wide and exact; nothing
//! here wraps.

use crate::image::{EdgeImage, Image, SignedMap, UndersizedImage};
use crate::magnitude::{apply_params, EdgeParams};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// 3x3 integer kernel, row-major, coefficients in [-8, 8].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kernel3x3 {
    coef: [[i8; 3]; 3],
}

impl Kernel3x3 {
    pub fn new(coef: [[i8; 3]; 3]) -> Self {
        for row in &coef {
            for &c in row {
                assert!((-8..=8).contains(&c), "kernel coefficient {c} outside [-8, 8]");
            }
        }
        Kernel3x3 { coef }
    }

    pub fn coef(&self, row: usize, col: usize) -> i32 {
        i32::from(self.coef[row][col])
    }

    /// Outer product of a column vector and a row vector.
    pub fn outer(col: [i32; 3], row: [i32; 3]) -> Self {
        let mut coef = [[0i8; 3]; 3];
        for (r, cv) in col.iter().enumerate() {
            for (c, rv) in row.iter().enumerate() {
                let v = cv * rv;
                assert!((-8..=8).contains(&v), "outer-product coefficient {v} outside [-8, 8]");
                coef[r][c] = v as i8;
            }
        }
        Kernel3x3 { coef }
    }
}

/// The horizontal- and vertical-gradient Sobel kernels, in that order. Both
/// are separable into a smoothing vector [1, 2, 1] and a difference vector
/// [-1, 0, 1].
pub fn sobel_kernels() -> (Kernel3x3, Kernel3x3) {
    let sx = Kernel3x3::new([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]);
    let sy = Kernel3x3::new([[-1, -2, -1], [0, 0, 0], [1, 2, 1]]);
    (sx, sy)
}

fn conv_row(image: &Image, kernel: &Kernel3x3, row: u32, out: &mut [i32]) {
    let width = image.width();
    for col in 1..width - 1 {
        let mut acc = 0i32;
        for dr in 0..3 {
            for dc in 0..3 {
                acc += kernel.coef(dr as usize, dc as usize)
                    * i32::from(image.get(row - 1 + dr, col - 1 + dc));
            }
        }
        out[col as usize] = acc;
    }
}

/// Sliding 3x3 dot product over every interior pixel; the one-pixel border
/// is zero.
pub fn convolve2d(image: &Image, kernel: &Kernel3x3) -> Result<SignedMap, UndersizedImage> {
    image.check_convolvable()?;
    let height = image.height();
    let mut out = SignedMap::new(image.width(), height);

    #[cfg(feature = "parallel")]
    out.par_rows_mut().enumerate().for_each(|(r, row)| {
        if r >= 1 && (r as u32) < height - 1 {
            conv_row(image, kernel, r as u32, row);
        }
    });

    #[cfg(not(feature = "parallel"))]
    for (r, row) in out.rows_mut().enumerate() {
        if r >= 1 && (r as u32) < height - 1 {
            conv_row(image, kernel, r as u32, row);
        }
    }

    Ok(out)
}

/// Two 1D passes: the column vector along columns, then the row vector along
/// rows. Equal to [`convolve2d`] with the outer-product kernel, and to the
/// opposite pass order.
pub fn separable_convolve(
    image: &Image,
    col: [i32; 3],
    row: [i32; 3],
) -> Result<SignedMap, UndersizedImage> {
    image.check_convolvable()?;
    let (w, h) = (image.width(), image.height());

    // Column pass over every column of the interior rows.
    let mut tmp = SignedMap::new(w, h);
    for r in 1..h - 1 {
        for c in 0..w {
            let v = col[0] * i32::from(image.get(r - 1, c))
                + col[1] * i32::from(image.get(r, c))
                + col[2] * i32::from(image.get(r + 1, c));
            tmp.set(r, c, v);
        }
    }

    let mut out = SignedMap::new(w, h);
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let v = row[0] * tmp.get(r, c - 1) + row[1] * tmp.get(r, c) + row[2] * tmp.get(r, c + 1);
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// Same separated convolution with the pass order swapped: rows first, then
/// columns. The result is identical.
pub fn separable_convolve_rows_first(
    image: &Image,
    col: [i32; 3],
    row: [i32; 3],
) -> Result<SignedMap, UndersizedImage> {
    image.check_convolvable()?;
    let (w, h) = (image.width(), image.height());

    let mut tmp = SignedMap::new(w, h);
    for r in 0..h {
        for c in 1..w - 1 {
            let v = row[0] * i32::from(image.get(r, c - 1))
                + row[1] * i32::from(image.get(r, c))
                + row[2] * i32::from(image.get(r, c + 1));
            tmp.set(r, c, v);
        }
    }

    let mut out = SignedMap::new(w, h);
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let v = col[0] * tmp.get(r - 1, c) + col[1] * tmp.get(r, c) + col[2] * tmp.get(r + 1, c);
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// Reference Sobel detector: both gradient convolutions combined by the
/// configured norm, thresholded if requested, border zero. Uses the same
/// magnitude, rounding and clamp rules as the streaming datapath.
pub fn sobel_golden(image: &Image, params: &EdgeParams) -> Result<EdgeImage, UndersizedImage> {
    image.check_convolvable()?;
    let (sx, sy) = sobel_kernels();
    let gx = convolve2d(image, &sx)?;
    let gy = convolve2d(image, &sy)?;

    let (w, h) = (image.width(), image.height());
    let mut out = EdgeImage::new(w, h);
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let (x, y) = (gx.get(r, c), gy.get(r, c));
            // 8-bit pixels keep every gradient inside the 11-bit datapath range.
            assert!((-1020..=1020).contains(&x) && (-1020..=1020).contains(&y));
            out.set(r, c, apply_params(x, y, params));
        }
    }
    Ok(out)
}

/// Number of multiplications and additions a full n x n kernel convolution
/// costs per pixel: 2n^2 - 1.
///
/// Panics if `n` is zero.
pub fn op_count(n: u32) -> u64 {
    assert!(n >= 1, "kernel size must be at least 1");
    2 * u64::from(n) * u64::from(n) - 1
}

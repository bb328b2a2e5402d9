//! Edge-intensity stages shared by the bit-level datapath and the reference
//! detector: gradient-to-magnitude reduction and binary thresholding.

/// How the two directional gradients combine into one intensity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Norm {
    /// Euclidean: `floor(sqrt(gx^2 + gy^2))`, clamped to 255.
    #[default]
    L2,
    /// Taxicab: `|gx| + |gy|`, clamped to 255.
    L1,
}

/// Detection settings. The one-pixel border of every output is zero-filled;
/// with no threshold the output is the grayscale magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EdgeParams {
    pub norm: Norm,
    pub threshold: Option<u8>,
}

/// Exact integer square root: the largest r with r*r <= n.
///
/// Digit-by-digit binary method; no floating point involved.
pub fn isqrt(n: u64) -> u64 {
    let mut remainder = n;
    let mut result = 0u64;
    let mut probe = 1u64 << 62;
    while probe > n {
        probe >>= 2;
    }
    while probe != 0 {
        if remainder >= result + probe {
            remainder -= result + probe;
            result = (result >> 1) + probe;
        } else {
            result >>= 1;
        }
        probe >>= 2;
    }
    result
}

/// Combines a signed gradient pair into an 8-bit intensity.
pub fn magnitude_values(gx: i32, gy: i32, norm: Norm) -> u8 {
    let m = match norm {
        Norm::L2 => {
            let sq = i64::from(gx) * i64::from(gx) + i64::from(gy) * i64::from(gy);
            isqrt(sq as u64)
        }
        Norm::L1 => u64::from(gx.unsigned_abs()) + u64::from(gy.unsigned_abs()),
    };
    m.min(255) as u8
}

/// Binary threshold, inclusive: 255 when `m >= t`, else 0. Threshold 0 maps
/// everything to white.
pub fn threshold(m: u8, t: u8) -> u8 {
    if m >= t {
        255
    } else {
        0
    }
}

pub(crate) fn apply_params(gx: i32, gy: i32, params: &EdgeParams) -> u8 {
    let m = magnitude_values(gx, gy, params.norm);
    match params.threshold {
        Some(t) => threshold(m, t),
        None => m,
    }
}

//! Binary PGM (P5) reading and writing.
//!
//! The accepted grammar is the classic one: `P5`, then width, height and
//! maxval as ASCII integers separated by any ASCII whitespace, `#` comment
//! lines allowed between tokens, a single whitespace byte, then
//! `width * height` raw bytes row-major. Only maxval 255 is accepted, which
//! keeps the format bit-exact and diffable.

use edgecore::Image;
use std::fmt;

#[derive(Debug, PartialEq, Eq)]
pub enum PgmError {
    /// The file does not start with the P5 magic.
    BadMagic,
    /// Header tokens missing or not parseable as decimal integers.
    Header(&'static str),
    /// Only 8-bit data with maxval 255 is supported.
    UnsupportedMaxval(u32),
    /// Fewer pixel bytes than the header promises.
    Truncated { expected: u64, got: u64 },
}

impl fmt::Display for PgmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgmError::BadMagic => write!(f, "not a binary PGM: missing P5 magic"),
            PgmError::Header(what) => write!(f, "malformed PGM header: {what}"),
            PgmError::UnsupportedMaxval(v) => {
                write!(f, "unsupported maxval {v}; only 255 is accepted")
            }
            PgmError::Truncated { expected, got } => {
                write!(f, "truncated pixel data: expected {expected} bytes, found {got}")
            }
        }
    }
}

impl std::error::Error for PgmError {}

struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => return,
            }
        }
    }

    fn integer(&mut self, what: &'static str) -> Result<u32, PgmError> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PgmError::Header(what));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::Header(what))
    }
}

/// Parses a binary PGM from memory.
pub fn parse(data: &[u8]) -> Result<Image, PgmError> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(PgmError::BadMagic);
    }
    let mut tokens = Tokens { data, pos: 2 };
    let width = tokens.integer("width")?;
    let height = tokens.integer("height")?;
    let maxval = tokens.integer("maxval")?;
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(PgmError::Header("zero dimension"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    let pos = tokens.pos + 1;
    if tokens.pos >= data.len() || !data[tokens.pos].is_ascii_whitespace() {
        return Err(PgmError::Header("missing separator before pixel data"));
    }

    let expected = u64::from(width) * u64::from(height);
    let got = (data.len() - pos) as u64;
    if got < expected {
        return Err(PgmError::Truncated { expected, got });
    }
    let pixels = data[pos..pos + expected as usize].to_vec();
    Ok(Image::from_pixels(width, height, pixels))
}

/// Encodes an image as a binary PGM.
pub fn encode(image: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_identity() {
        for seed in 0..8u64 {
            let img = Image::seeded(13, 7, seed);
            let bytes = encode(&img);
            let back = parse(&bytes).unwrap();
            assert_eq!(back, img);
            // A second trip produces byte-identical output.
            assert_eq!(encode(&back), bytes);
        }
    }

    #[test]
    fn header_whitespace_and_comments_tolerated() {
        let mut data = b"P5 # a comment\n# another one\n 3\t2 \n 255\n".to_vec();
        data.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let img = parse(&data).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.pixels(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn first_raster_byte_may_look_like_whitespace() {
        // Pixel value 0x20 (space) right after the single separator byte.
        let mut data = b"P5\n2 1\n255\n".to_vec();
        data.extend_from_slice(&[0x20, 0x0A]);
        let img = parse(&data).unwrap();
        assert_eq!(img.pixels(), &[0x20, 0x0A]);
    }

    #[test]
    fn rejects_wrong_magic() {
        assert_eq!(parse(b"P6\n1 1\n255\nx"), Err(PgmError::BadMagic));
        assert_eq!(parse(b""), Err(PgmError::BadMagic));
    }

    #[test]
    fn rejects_wrong_maxval() {
        let data = b"P5\n2 2\n65535\n\0\0\0\0\0\0\0\0";
        assert_eq!(parse(data), Err(PgmError::UnsupportedMaxval(65535)));
    }

    #[test]
    fn rejects_truncated_raster() {
        let data = b"P5\n4 4\n255\nabc";
        assert_eq!(parse(data), Err(PgmError::Truncated { expected: 16, got: 3 }));
    }

    #[test]
    fn rejects_missing_header_fields() {
        assert_eq!(parse(b"P5\n3\n255\n"), Err(PgmError::Header("maxval")));
        assert_eq!(parse(b"P5\n\n"), Err(PgmError::Header("width")));
    }
}

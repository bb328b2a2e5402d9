//! Streaming two-line pixel cache.
//!
//! The cache mirrors the hardware arrangement: nine window registers hold the
//! current 3x3 neighborhood and two line buffers of `line_width - 3` pixels
//! each hold the rest of the two most recent rows, so only one pixel enters
//! per cycle. Blanking events stall the pipeline (state held), end-of-frame
//! flushes it, and nothing is emitted until the pipeline is primed with
//! `2*line_width + 3` pixels.
//!
//! Windows are emitted only for neighborhoods fully inside one row span, so
//! the window sequence over a frame equals the sequence of all 3x3 image
//! neighborhoods in raster order.

use std::collections::VecDeque;
use thiserror::Error;

/// One element of a video feed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamEvent {
    Pixel(u8),
    /// Horizontal blanking between lines; the pipeline stalls.
    HBlank,
    /// Vertical blanking between frames; the pipeline stalls.
    VBlank,
    /// End of the current frame; the pipeline flushes.
    EndOfFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StreamError {
    /// A blanking event arrived mid-row. This is also how a row that overran
    /// the configured line width gets caught: the late blank no longer falls
    /// on a row boundary.
    #[error("blanking event {pixels_into_row} pixels into a {line_width}-pixel row")]
    Framing { pixels_into_row: u32, line_width: u32 },
    /// A pixel arrived after an end-of-frame flush without an intervening
    /// clear.
    #[error("pixel received after end-of-frame flush; clear the cache first")]
    PixelAfterFlush,
}

/// A 3x3 pixel neighborhood, rows top to bottom. The newest pixel is at the
/// bottom right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window3x3 {
    px: [[u8; 3]; 3],
}

impl Window3x3 {
    pub fn new(px: [[u8; 3]; 3]) -> Self {
        Window3x3 { px }
    }

    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.px[row][col]
    }

    pub fn pixels(&self) -> [[u8; 3]; 3] {
        self.px
    }
}

/// FIFO holding the part of an image row that sits between the window
/// registers of adjacent lines.
#[derive(Clone, Debug)]
struct LineBuffer {
    slots: VecDeque<u8>,
}

impl LineBuffer {
    fn new(len: u32) -> Self {
        LineBuffer {
            slots: VecDeque::from(vec![0u8; len as usize]),
        }
    }

    /// Pushes one pixel in and pops the oldest out, keeping length constant.
    fn push_pop(&mut self, value: u8) -> u8 {
        if self.slots.is_empty() {
            return value;
        }
        self.slots.push_back(value);
        self.slots.pop_front().expect("line buffer is non-empty")
    }

    fn zero(&mut self) {
        for s in self.slots.iter_mut() {
            *s = 0;
        }
    }
}

/// Streaming pixel cache over a fixed line width.
#[derive(Clone, Debug)]
pub struct PixelCache {
    line_width: u32,
    win: [[u8; 3]; 3],
    /// Buffers the middle row (between window rows 1 and 0).
    upper: LineBuffer,
    /// Buffers the newest row (between window rows 2 and 1).
    lower: LineBuffer,
    /// Raster index of the next pixel; doubles as the priming counter.
    pushed: u64,
    flushed: bool,
}

impl PixelCache {
    /// Panics if `line_width < 3`; the window registers alone need that much.
    pub fn new(line_width: u32) -> Self {
        assert!(line_width >= 3, "line width {line_width} below 3");
        PixelCache {
            line_width,
            win: [[0; 3]; 3],
            upper: LineBuffer::new(line_width - 3),
            lower: LineBuffer::new(line_width - 3),
            pushed: 0,
            flushed: false,
        }
    }

    pub fn line_width(&self) -> u32 {
        self.line_width
    }

    /// Pixels accepted since the last clear or flush.
    pub fn pixels_pushed(&self) -> u64 {
        self.pushed
    }

    /// Feeds one stream event. A pixel shifts the window and buffers one
    /// position and yields a window once the neighborhood it completes is
    /// fully inside the frame and inside one row span; blanking holds state;
    /// end-of-frame invalidates remaining state until [`PixelCache::clear`].
    pub fn push(&mut self, event: StreamEvent) -> Result<Option<Window3x3>, StreamError> {
        match event {
            StreamEvent::Pixel(p) => {
                if self.flushed {
                    return Err(StreamError::PixelAfterFlush);
                }
                let from_upper = self.upper.push_pop(self.win[1][0]);
                self.win[0] = [self.win[0][1], self.win[0][2], from_upper];
                let from_lower = self.lower.push_pop(self.win[2][0]);
                self.win[1] = [self.win[1][1], self.win[1][2], from_lower];
                self.win[2] = [self.win[2][1], self.win[2][2], p];

                let idx = self.pushed;
                self.pushed += 1;
                let row = idx / u64::from(self.line_width);
                let col = (idx % u64::from(self.line_width)) as u32;
                Ok((row >= 2 && col >= 2).then(|| Window3x3::new(self.win)))
            }
            StreamEvent::HBlank | StreamEvent::VBlank => {
                let into_row = (self.pushed % u64::from(self.line_width)) as u32;
                if into_row != 0 {
                    return Err(StreamError::Framing {
                        pixels_into_row: into_row,
                        line_width: self.line_width,
                    });
                }
                Ok(None)
            }
            StreamEvent::EndOfFrame => {
                self.flushed = true;
                self.pushed = 0;
                Ok(None)
            }
        }
    }

    /// The newest column of the window registers (rows top to bottom), once
    /// two full lines and one more pixel are in. This is what feeds the
    /// column-sum and column-difference stages on every cycle, including the
    /// first two cycles of a row where no full window exists yet.
    pub fn right_column(&self) -> Option<[u8; 3]> {
        (self.pushed > 2 * u64::from(self.line_width))
            .then(|| [self.win[0][2], self.win[1][2], self.win[2][2]])
    }

    /// Resets everything; the CLR input.
    pub fn clear(&mut self) {
        self.win = [[0; 3]; 3];
        self.upper.zero();
        self.lower.zero();
        self.pushed = 0;
        self.flushed = false;
    }
}

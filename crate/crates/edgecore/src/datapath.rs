//! Per-cycle gradient datapaths, the four design variants, and the frame and
//! stream drivers around them.
//!
//! For every accepted pixel the pipeline sees a fresh rightmost window
//! column. The horizontal path caches the column sum `top + 2*mid + bot`
//! (10-bit unsigned, computed by a first-layer compressor plus the
//! start-of-pipeline adder) and produces `gx = u_now - u_two_cycles_ago`
//! through the 4:2 compressor. The vertical path caches the column
//! difference `bot - top` (9-bit two's complement, computed before any
//! compression) and produces `gy = v_now + 2*v_prev + v_prevprev` through a
//! first-layer compressor. Either way a gradient sample touches exactly four
//! stored operands. A final adder — ripple or split look-ahead, depending on
//! the variant — collapses each carry-save pair.
//!
//! All four variants produce bit-identical output; they differ in arithmetic
//! structure, which is what the resource model prices.

use std::fmt;

use crate::adder::{lookahead_add, ripple_add};
use crate::cache::{PixelCache, StreamError, StreamEvent, Window3x3};
use crate::compressor::{compress_4_2, p2pp_compress};
use crate::image::{EdgeImage, Image, UndersizedImage};
use crate::magnitude::{apply_params, magnitude_values, EdgeParams, Norm};
use crate::word::{BitWord, CsPair};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Width of the gradient datapath: 8-bit pixels keep every Sobel response in
/// [-1020, 1020], which an 11-bit two's-complement word holds exactly.
pub const GRADIENT_BITS: u8 = 11;
/// Width of a cached column sum, 0..=1020 unsigned.
pub const COLSUM_BITS: u8 = 10;
/// Width of a cached column difference, -255..=255 two's complement.
pub const COLDIFF_BITS: u8 = 9;

/// The four design variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Direct nine-leaf weighted adder tree over the window.
    AdderTree,
    /// Cached 1D partial sums combined with plain adders.
    Separated,
    /// 4:2 compressors with a ripple final adder.
    Compressor,
    /// 4:2 compressors with the split look-ahead final adder.
    LookaheadCompressor,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::AdderTree,
        Variant::Separated,
        Variant::Compressor,
        Variant::LookaheadCompressor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::AdderTree => "adder-tree",
            Variant::Separated => "separated",
            Variant::Compressor => "compressor",
            Variant::LookaheadCompressor => "lookahead-compressor",
        }
    }

    fn has_compressors(self) -> bool {
        matches!(self, Variant::Compressor | Variant::LookaheadCompressor)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Signed gradient pair, both words 11-bit two's complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradientSample {
    pub gx: BitWord,
    pub gy: BitWord,
}

impl GradientSample {
    pub fn new(gx: BitWord, gy: BitWord) -> Self {
        assert_eq!(gx.width(), GRADIENT_BITS);
        assert_eq!(gy.width(), GRADIENT_BITS);
        GradientSample { gx, gy }
    }

    pub fn gx_value(&self) -> i32 {
        self.gx.value_signed()
    }

    pub fn gy_value(&self) -> i32 {
        self.gy.value_signed()
    }
}

/// Combines a gradient sample into an 8-bit edge intensity.
pub fn magnitude(g: &GradientSample, norm: Norm) -> u8 {
    magnitude_values(g.gx_value(), g.gy_value(), norm)
}

/// The two per-direction register chains beside the window. Each shifts once
/// per accepted pixel and resets at every row start, so entries always come
/// from the two previous cycles of the same row segment.
#[derive(Clone, Debug)]
pub struct SideCaches {
    colsum: [BitWord; 2],
    coldiff: [BitWord; 2],
    colsum_filled: u8,
    coldiff_filled: u8,
}

impl Default for SideCaches {
    fn default() -> Self {
        Self::new()
    }
}

impl SideCaches {
    pub fn new() -> Self {
        SideCaches {
            colsum: [BitWord::zero(COLSUM_BITS); 2],
            coldiff: [BitWord::signed(0, COLDIFF_BITS); 2],
            colsum_filled: 0,
            coldiff_filled: 0,
        }
    }

    pub fn reset(&mut self) {
        *self = Self::new();
    }

    pub fn shift_colsum(&mut self, u: BitWord) {
        assert_eq!(u.width(), COLSUM_BITS);
        self.colsum[1] = self.colsum[0];
        self.colsum[0] = u;
        self.colsum_filled = (self.colsum_filled + 1).min(2);
    }

    pub fn shift_coldiff(&mut self, v: BitWord) {
        assert_eq!(v.width(), COLDIFF_BITS);
        self.coldiff[1] = self.coldiff[0];
        self.coldiff[0] = v;
        self.coldiff_filled = (self.coldiff_filled + 1).min(2);
    }

    /// Column sum from two cycles ago, once the chain is primed.
    pub fn colsum_old(&self) -> Option<BitWord> {
        (self.colsum_filled >= 2).then_some(self.colsum[1])
    }

    /// Column differences from one and two cycles ago, once primed.
    pub fn coldiff_pair(&self) -> Option<(BitWord, BitWord)> {
        (self.coldiff_filled >= 2).then_some((self.coldiff[0], self.coldiff[1]))
    }

    /// Chain contents newest-first, for traces.
    pub fn colsum_entries(&self) -> [Option<BitWord>; 2] {
        [
            (self.colsum_filled >= 1).then_some(self.colsum[0]),
            (self.colsum_filled >= 2).then_some(self.colsum[1]),
        ]
    }

    pub fn coldiff_entries(&self) -> [Option<BitWord>; 2] {
        [
            (self.coldiff_filled >= 1).then_some(self.coldiff[0]),
            (self.coldiff_filled >= 2).then_some(self.coldiff[1]),
        ]
    }
}

/// Tally of stored operands a gradient computation actually read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OperandCounts {
    pub window: u32,
    pub cached: u32,
}

/// Verification aid: flips one bit of the horizontal-gradient result. For
/// compressor variants the flip lands on the 4:2 compressor's sum word
/// before the final addition; for the other variants it lands on the
/// finished gradient word. `location` is a window center; `None` faults
/// every window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompressorFault {
    pub bit: u8,
    pub location: Option<(u32, u32)>,
}

fn px(value: u8, width: u8) -> BitWord {
    BitWord::unsigned(u32::from(value), width)
}

fn read_px(window: &Window3x3, row: usize, col: usize, counts: &mut OperandCounts) -> u8 {
    counts.window += 1;
    window.pixel(row, col)
}

fn flip_bit(word: BitWord, bit: u8) -> BitWord {
    BitWord::unsigned(word.raw() ^ (1 << (bit % word.width())), word.width())
}

/// Column sum `top + 2*mid + bot` through the first-layer compressor and the
/// start-of-pipeline adder.
fn column_sum_compressed(top: u8, mid: u8, bot: u8) -> BitWord {
    let pair = p2pp_compress(
        px(top, COLSUM_BITS),
        px(mid, COLSUM_BITS),
        px(bot, COLSUM_BITS),
    );
    ripple_add(pair.sum, pair.carry, false).0
}

/// Same column sum through two plain adders.
fn column_sum_plain(top: u8, mid: u8, bot: u8) -> BitWord {
    let doubled = px(mid, COLSUM_BITS).shl1();
    let partial = ripple_add(px(top, COLSUM_BITS), doubled, false).0;
    ripple_add(partial, px(bot, COLSUM_BITS), false).0
}

fn column_sum(top: u8, mid: u8, bot: u8, variant: Variant) -> BitWord {
    if variant.has_compressors() {
        column_sum_compressed(top, mid, bot)
    } else {
        column_sum_plain(top, mid, bot)
    }
}

/// Column difference `bot - top` as a 9-bit two's-complement subtraction.
fn column_diff(top: u8, bot: u8) -> BitWord {
    ripple_add(px(bot, COLDIFF_BITS), !px(top, COLDIFF_BITS), true)
        .0
        .as_signed()
}

fn final_add(pair: CsPair, variant: Variant) -> BitWord {
    let (sum, _) = match variant {
        Variant::Compressor => ripple_add(pair.sum, pair.carry, false),
        Variant::LookaheadCompressor => lookahead_add(pair.sum, pair.carry, false),
        _ => unreachable!("only compressor variants collapse carry-save pairs"),
    };
    sum.as_signed()
}

const GX_WEIGHTS: [[i8; 3]; 3] = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]];
const GY_WEIGHTS: [[i8; 3]; 3] = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]];

/// Nine-leaf weighted adder tree reduced pairwise with ripple adders.
fn weighted_tree(
    window: &Window3x3,
    weights: &[[i8; 3]; 3],
    counts: &mut OperandCounts,
) -> BitWord {
    let mut level: Vec<BitWord> = Vec::with_capacity(9);
    for (r, row) in weights.iter().enumerate() {
        for (c, &weight) in row.iter().enumerate() {
            let p = read_px(window, r, c, counts);
            let word = px(p, GRADIENT_BITS);
            level.push(match weight {
                0 => BitWord::zero(GRADIENT_BITS),
                1 => word,
                2 => word.shl1(),
                -1 => word.negated(),
                -2 => word.shl1().negated(),
                w => unreachable!("unsupported tree weight {w}"),
            });
        }
    }
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => ripple_add(*a, *b, false).0,
                [a] => *a,
                _ => unreachable!(),
            })
            .collect();
    }
    level[0].as_signed()
}

/// What one gradient direction computed in a cycle.
pub(crate) struct GradientOutcome {
    /// Fresh column value shifted into the chain (cached variants only).
    pub column: Option<BitWord>,
    /// The carry-save pair the final adder collapsed (compressor variants).
    pub pair: Option<CsPair>,
    /// The gradient, absent while the side caches are still priming.
    pub value: Option<BitWord>,
}

pub(crate) fn gx_outcome(
    window: &Window3x3,
    caches: &mut SideCaches,
    variant: Variant,
    fault_bit: Option<u8>,
    counts: &mut OperandCounts,
) -> GradientOutcome {
    if variant == Variant::AdderTree {
        let mut gx = weighted_tree(window, &GX_WEIGHTS, counts);
        if let Some(bit) = fault_bit {
            gx = flip_bit(gx, bit);
        }
        return GradientOutcome { column: None, pair: None, value: Some(gx) };
    }

    let top = read_px(window, 0, 2, counts);
    let mid = read_px(window, 1, 2, counts);
    let bot = read_px(window, 2, 2, counts);
    let u_now = column_sum(top, mid, bot, variant);

    let mut pair_out = None;
    let value = caches.colsum_old().map(|u_old| {
        counts.cached += 1;
        if variant.has_compressors() {
            let mut pair = compress_4_2(
                px(top, GRADIENT_BITS),
                px(mid, GRADIENT_BITS),
                px(bot, GRADIENT_BITS),
                u_old.zero_extend(GRADIENT_BITS),
            );
            if let Some(bit) = fault_bit {
                pair = CsPair::new(flip_bit(pair.sum, bit), pair.carry);
            }
            pair_out = Some(pair);
            final_add(pair, variant)
        } else {
            // Plain subtraction of the two post-adder column sums.
            let mut gx = ripple_add(
                u_now.zero_extend(GRADIENT_BITS),
                !u_old.zero_extend(GRADIENT_BITS),
                true,
            )
            .0
            .as_signed();
            if let Some(bit) = fault_bit {
                gx = flip_bit(gx, bit);
            }
            gx
        }
    });
    caches.shift_colsum(u_now);
    GradientOutcome { column: Some(u_now), pair: pair_out, value }
}

pub(crate) fn gy_outcome(
    window: &Window3x3,
    caches: &mut SideCaches,
    variant: Variant,
    counts: &mut OperandCounts,
) -> GradientOutcome {
    if variant == Variant::AdderTree {
        let gy = weighted_tree(window, &GY_WEIGHTS, counts);
        return GradientOutcome { column: None, pair: None, value: Some(gy) };
    }

    let top = read_px(window, 0, 2, counts);
    let bot = read_px(window, 2, 2, counts);
    let v_now = column_diff(top, bot);

    let mut pair_out = None;
    let value = caches.coldiff_pair().map(|(v_prev, v_prevprev)| {
        counts.cached += 2;
        let now = v_now.sign_extend(GRADIENT_BITS);
        let prev = v_prev.sign_extend(GRADIENT_BITS);
        let prevprev = v_prevprev.sign_extend(GRADIENT_BITS);
        if variant.has_compressors() {
            let pair = p2pp_compress(now, prev, prevprev);
            pair_out = Some(pair);
            final_add(pair, variant)
        } else {
            let partial = ripple_add(now, prev.shl1(), false).0;
            ripple_add(partial, prevprev, false).0.as_signed()
        }
    });
    caches.shift_coldiff(v_now);
    GradientOutcome { column: Some(v_now), pair: pair_out, value }
}

/// Horizontal-gradient step for one valid window: refreshes the column-sum
/// chain and, once the chain holds the sums of the two previous columns,
/// returns `gx = (top + 2*mid + bot) - u_two_cycles_ago` as an 11-bit
/// two's-complement word. Returns `None` for the first two columns of a row.
pub fn gx_datapath(window: &Window3x3, caches: &mut SideCaches, variant: Variant) -> Option<BitWord> {
    let mut counts = OperandCounts::default();
    gx_datapath_counted(window, caches, variant, &mut counts)
}

/// [`gx_datapath`] that also tallies how many stored operands were read.
pub fn gx_datapath_counted(
    window: &Window3x3,
    caches: &mut SideCaches,
    variant: Variant,
    counts: &mut OperandCounts,
) -> Option<BitWord> {
    gx_outcome(window, caches, variant, None, counts).value
}

/// Vertical-gradient step for one valid window: refreshes the
/// column-difference chain and, once primed, returns
/// `gy = v_now + 2*v_prev + v_prevprev` as an 11-bit two's-complement word.
pub fn gy_datapath(window: &Window3x3, caches: &mut SideCaches, variant: Variant) -> Option<BitWord> {
    let mut counts = OperandCounts::default();
    gy_datapath_counted(window, caches, variant, &mut counts)
}

/// [`gy_datapath`] that also tallies how many stored operands were read.
pub fn gy_datapath_counted(
    window: &Window3x3,
    caches: &mut SideCaches,
    variant: Variant,
    counts: &mut OperandCounts,
) -> Option<BitWord> {
    gy_outcome(window, caches, variant, counts).value
}

/// One emitted detector output: the edge value at an interior pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeSample {
    pub row: u32,
    pub col: u32,
    pub value: u8,
}

/// Everything one primed cycle computed, for trace dumps. Chain fields hold
/// the state the cycle consumed, before its own shift.
#[derive(Clone, Debug)]
pub struct CycleTrace {
    /// Raster index of the window's newest pixel.
    pub cycle: u64,
    pub row: u32,
    pub col: u32,
    pub window: Window3x3,
    pub colsum_chain: [Option<BitWord>; 2],
    pub coldiff_chain: [Option<BitWord>; 2],
    pub u_now: Option<BitWord>,
    pub v_now: Option<BitWord>,
    pub gx_pair: Option<CsPair>,
    pub gy_pair: Option<CsPair>,
    pub gradient: GradientSample,
    pub magnitude: u8,
    pub output: u8,
}

/// Deterministic single-writer pixel pipeline: the cache, the side chains and
/// one variant's arithmetic. Independent instances share nothing, so frames
/// can be processed on as many threads as there are pipelines.
#[derive(Clone, Debug)]
pub struct SobelPipeline {
    cache: PixelCache,
    caches: SideCaches,
    variant: Variant,
    params: EdgeParams,
    row: u32,
    col: u32,
    cycles: u64,
    fault: Option<CompressorFault>,
}

impl SobelPipeline {
    /// Panics if `line_width < 3`.
    pub fn new(line_width: u32, variant: Variant, params: EdgeParams) -> Self {
        SobelPipeline {
            cache: PixelCache::new(line_width),
            caches: SideCaches::new(),
            variant,
            params,
            row: 0,
            col: 0,
            cycles: 0,
            fault: None,
        }
    }

    pub fn inject_fault(&mut self, fault: CompressorFault) {
        self.fault = Some(fault);
    }

    /// Pixels accepted in the current frame.
    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Feeds one pixel; returns the sample it completes, if any.
    pub fn push_pixel(&mut self, pixel: u8) -> Result<Option<EdgeSample>, StreamError> {
        self.advance(pixel, None)
    }

    /// Blanking: holds all state. Errors if the stream is mid-row.
    pub fn stall(&mut self) -> Result<(), StreamError> {
        self.cache.push(StreamEvent::HBlank).map(|_| ())
    }

    /// Ends the frame and re-arms for the next one: nothing carries over.
    pub fn end_frame(&mut self) {
        self.cache
            .push(StreamEvent::EndOfFrame)
            .expect("end-of-frame cannot fail");
        self.cache.clear();
        self.caches.reset();
        self.row = 0;
        self.col = 0;
        self.cycles = 0;
    }

    fn advance(
        &mut self,
        pixel: u8,
        trace: Option<&mut Vec<CycleTrace>>,
    ) -> Result<Option<EdgeSample>, StreamError> {
        let (row, col) = (self.row, self.col);
        if col == 0 {
            self.caches.reset();
        }

        let window = self.cache.push(StreamEvent::Pixel(pixel))?;
        self.cycles += 1;
        let cycle = u64::from(row) * u64::from(self.cache.line_width()) + u64::from(col);

        self.col += 1;
        if self.col == self.cache.line_width() {
            self.col = 0;
            self.row += 1;
        }

        let mut sample = None;
        match window {
            Some(win) => {
                let center = (row - 1, col - 1);
                let fault_bit = self.fault.and_then(|f| {
                    f.location.is_none_or(|at| at == center).then_some(f.bit)
                });

                let colsum_chain = self.caches.colsum_entries();
                let coldiff_chain = self.caches.coldiff_entries();
                let mut counts = OperandCounts::default();
                let gxo = gx_outcome(&win, &mut self.caches, self.variant, fault_bit, &mut counts);
                let gyo = gy_outcome(&win, &mut self.caches, self.variant, &mut counts);
                let gx = gxo.value.expect("side caches primed for every full window");
                let gy = gyo.value.expect("side caches primed for every full window");

                let gradient = GradientSample::new(gx, gy);
                let magnitude = magnitude(&gradient, self.params.norm);
                let value = apply_params(gradient.gx_value(), gradient.gy_value(), &self.params);
                sample = Some(EdgeSample { row: center.0, col: center.1, value });

                if let Some(sink) = trace {
                    sink.push(CycleTrace {
                        cycle,
                        row: center.0,
                        col: center.1,
                        window: win,
                        colsum_chain,
                        coldiff_chain,
                        u_now: gxo.column,
                        v_now: gyo.column,
                        gx_pair: gxo.pair,
                        gy_pair: gyo.pair,
                        gradient,
                        magnitude,
                        output: value,
                    });
                }
            }
            None => {
                // First two columns of a row: the chains prime from the raw
                // column taps while no full window exists.
                if self.variant != Variant::AdderTree {
                    if let Some([top, mid, bot]) = self.cache.right_column() {
                        self.caches
                            .shift_colsum(column_sum(top, mid, bot, self.variant));
                        self.caches.shift_coldiff(column_diff(top, bot));
                    }
                }
            }
        }
        Ok(sample)
    }
}

fn drive_frame(
    image: &Image,
    pipe: &mut SobelPipeline,
    mut trace: Option<&mut Vec<CycleTrace>>,
) -> EdgeImage {
    let mut out = EdgeImage::new(image.width(), image.height());
    for r in 0..image.height() {
        for c in 0..image.width() {
            let sample = pipe
                .advance(image.get(r, c), trace.as_deref_mut())
                .expect("a raw pixel feed cannot violate framing");
            if let Some(s) = sample {
                out.set(s.row, s.col, s.value);
            }
        }
    }
    debug_assert_eq!(pipe.cycles(), u64::from(image.width()) * u64::from(image.height()));
    out
}

/// Runs one frame through the selected variant. Interior pixels carry the
/// edge value, the one-pixel border is zero.
pub fn process_frame(
    image: &Image,
    variant: Variant,
    params: &EdgeParams,
) -> Result<EdgeImage, UndersizedImage> {
    process_frame_with_fault(image, variant, params, None)
}

/// [`process_frame`] with an optional injected datapath fault.
pub fn process_frame_with_fault(
    image: &Image,
    variant: Variant,
    params: &EdgeParams,
    fault: Option<CompressorFault>,
) -> Result<EdgeImage, UndersizedImage> {
    image.check_convolvable()?;
    let mut pipe = SobelPipeline::new(image.width(), variant, *params);
    if let Some(f) = fault {
        pipe.inject_fault(f);
    }
    Ok(drive_frame(image, &mut pipe, None))
}

/// Processes a batch of same-sized or mixed frames, one pipeline instance
/// per frame. With the `parallel` feature the batch spreads across threads;
/// results are in input order either way.
pub fn process_frames(
    frames: &[Image],
    variant: Variant,
    params: &EdgeParams,
) -> Result<Vec<EdgeImage>, UndersizedImage> {
    #[cfg(feature = "parallel")]
    {
        frames
            .par_iter()
            .map(|f| process_frame(f, variant, params))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        frames
            .iter()
            .map(|f| process_frame(f, variant, params))
            .collect()
    }
}

/// Runs one frame and records everything each primed cycle computed.
pub fn trace_frame(
    image: &Image,
    variant: Variant,
    params: &EdgeParams,
) -> Result<Vec<CycleTrace>, UndersizedImage> {
    image.check_convolvable()?;
    let mut pipe = SobelPipeline::new(image.width(), variant, *params);
    let mut trace = Vec::new();
    drive_frame(image, &mut pipe, Some(&mut trace));
    Ok(trace)
}

/// Drives a raw event stream. Samples are grouped per frame; frames close on
/// [`StreamEvent::EndOfFrame`], and a trailing unterminated frame is emitted
/// if it received any pixels. Blanking stalls the pipeline and never changes
/// the output.
pub fn process_stream(
    line_width: u32,
    events: impl IntoIterator<Item = StreamEvent>,
    variant: Variant,
    params: &EdgeParams,
) -> Result<Vec<Vec<EdgeSample>>, StreamError> {
    let mut pipe = SobelPipeline::new(line_width, variant, *params);
    let mut frames = Vec::new();
    let mut current = Vec::new();
    let mut dirty = false;
    for event in events {
        match event {
            StreamEvent::Pixel(p) => {
                dirty = true;
                if let Some(s) = pipe.push_pixel(p)? {
                    current.push(s);
                }
            }
            StreamEvent::HBlank | StreamEvent::VBlank => pipe.stall()?,
            StreamEvent::EndOfFrame => {
                frames.push(std::mem::take(&mut current));
                pipe.end_frame();
                dirty = false;
            }
        }
    }
    if dirty {
        frames.push(current);
    }
    Ok(frames)
}

//! Analytical FPGA cost model: logic-element (LE) counts, register and RAM
//! usage, and critical-path levels per design variant, with the published
//! reference build's values embedded for comparison.
//!
//! Structural costs follow the LE mapping rules of the target family:
//!
//! * a 4:2 compressor occupies three LEs per bit slice — carry-chain
//!   initialisation, first layer, second layer, with chain termination shared
//!   with the next compressor's initialisation;
//! * a lone first-layer compressor occupies two LEs per bit slice;
//! * ripple adders cost one LE per bit, and the horizontal path needs one
//!   extra adder between the compressors for the column sum that feeds the
//!   cache chain;
//! * the look-ahead prediction fits one LE per split adder, since all four
//!   operand bits it examines feed a single four-input LUT;
//! * the un-optimised adder tree costs one LE per bit per two-operand add
//!   over its nine leaves;
//! * pure storage (window registers, side-cache chains, pipeline stages)
//!   occupies whole LEs because no LUT output feeds those registers, while
//!   line buffers map to dedicated RAM-based shift registers, not LEs.
//!
//! Timing is modeled as dimensionless LE levels, not megahertz: the longest
//! combinational chain a cycle exercises, plus a routing penalty whenever a
//! chain overflows a 16-LE column. Control and addressing overhead is not
//! derivable from structure; it is calibrated, in one place below.

use thiserror::Error;

use crate::datapath::Variant;

/// LE column height of the modeled device; longer chains must hop columns.
pub const COLUMN_LES: u32 = 16;
/// LE-equivalent penalty per column crossing over slow global routing.
pub const CROSSING_PENALTY: u32 = 3;

// ---------------------------------------------------------------------------
// Calibration constants. Everything below is fitted against the reference
// synthesis rather than derived from the mapping rules; keep it all here.
// ---------------------------------------------------------------------------

/// Control and addressing overhead per variant, in LEs: line-buffer
/// addressing, priming and sync control, output staging. The separated and
/// compressor variants add chain sequencing; the split final adders add
/// select staging beyond the prediction cell itself.
fn control_les(variant: Variant) -> u32 {
    match variant {
        Variant::AdderTree => 15,
        Variant::Separated => 35,
        Variant::Compressor => 30,
        Variant::LookaheadCompressor => 50,
    }
}

/// Control registers; these pack into the control LEs' register bits, so
/// they add to the register tally but not to total LEs.
const CONTROL_REGS: u32 = 20;

/// Dedicated-register bits beyond the two line buffers, per variant. The
/// adder tree trades two buffered pixels per line for direct window taps;
/// the separated design adds one buffered pixel per line of pipeline skew;
/// the look-ahead build retimes a few adder bits into the RAM blocks.
fn dedicated_delta_bits(variant: Variant, bits_per_pixel: u32) -> i64 {
    match variant {
        Variant::AdderTree => -2 * i64::from(bits_per_pixel),
        Variant::Separated => 2 * i64::from(bits_per_pixel),
        Variant::Compressor => 0,
        Variant::LookaheadCompressor => 14,
    }
}

// ---------------------------------------------------------------------------

/// Parameters of one modeled build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignParams {
    pub width: u32,
    pub height: u32,
    pub bits_per_pixel: u32,
    pub datapath_width: u32,
    pub variant: Variant,
}

impl DesignParams {
    /// Defaults: 512x512 frame, 8-bit pixels, 11-bit datapath.
    pub fn new(variant: Variant) -> Self {
        DesignParams {
            width: 512,
            height: 512,
            bits_per_pixel: 8,
            datapath_width: 11,
            variant,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.width < 3 || self.height < 3 {
            return Err(ParamError::Undersized { width: self.width, height: self.height });
        }
        if self.datapath_width < self.bits_per_pixel + 3 {
            return Err(ParamError::NarrowDatapath {
                datapath_width: self.datapath_width,
                bits_per_pixel: self.bits_per_pixel,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("frame {width}x{height} below the 3x3 minimum")]
    Undersized { width: u32, height: u32 },
    #[error("datapath width {datapath_width} cannot hold {bits_per_pixel}-bit column sums")]
    NarrowDatapath { datapath_width: u32, bits_per_pixel: u32 },
}

/// Modeled cost of one build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceReport {
    pub variant: Variant,
    pub total_les: u32,
    pub lut_functions: u32,
    pub logic_registers: u32,
    /// RAM-based shift-register bits: line buffers plus the variant's delta.
    pub dedicated_register_bits: u32,
    /// The two line buffers alone: `2 * (width - 3) * bits_per_pixel`.
    pub line_buffer_bits: u32,
    /// Longest combinational chain plus column-crossing penalties.
    pub critical_path_levels: u32,
    pub column_crossings: u32,
}

/// Pairwise reduction cost of an adder tree: total LEs (sum of the output
/// widths of every add) and the deepest carry path through it.
fn tree_cost(leaf_widths: &[u32], cap: u32) -> (u32, u32) {
    let mut level: Vec<(u32, u32)> = leaf_widths.iter().map(|&w| (w, 0)).collect();
    let mut les = 0u32;
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [(wa, pa), (wb, pb)] => {
                    let out = (wa.max(wb) + 1).min(cap);
                    les += out;
                    (out, out + pa.max(pb))
                }
                [one] => *one,
                _ => unreachable!(),
            })
            .collect();
    }
    (les, level[0].1)
}

fn tree_leaf_widths(bits_per_pixel: u32) -> [u32; 9] {
    // One extra bit wherever the kernel weight is two.
    let bpp = bits_per_pixel;
    [bpp, bpp, bpp, bpp + 1, bpp, bpp + 1, bpp, bpp, bpp]
}

struct Widths {
    gradient: u32,
    colsum: u32,
    coldiff: u32,
}

fn widths(p: &DesignParams) -> Widths {
    Widths {
        gradient: p.datapath_width,
        colsum: p.datapath_width - 1,
        coldiff: p.bits_per_pixel + 1,
    }
}

fn lookahead_adder_les(width: u32) -> u32 {
    width + 1
}

/// Combinational datapath LEs for both gradient directions.
fn datapath_les(p: &DesignParams) -> u32 {
    let w = widths(p);
    match p.variant {
        Variant::AdderTree => {
            let (per_path, _) = tree_cost(&tree_leaf_widths(p.bits_per_pixel), w.gradient);
            2 * per_path
        }
        Variant::Separated => {
            let gx = 2 * w.colsum + w.gradient;
            let gy = w.coldiff + 2 * w.gradient;
            gx + gy
        }
        Variant::Compressor => {
            let gx = 3 * w.gradient + w.colsum + w.gradient;
            let gy = w.coldiff + 2 * w.gradient + w.gradient;
            gx + gy
        }
        Variant::LookaheadCompressor => {
            let gx = 3 * w.gradient + w.colsum + lookahead_adder_les(w.gradient);
            let gy = w.coldiff + 2 * w.gradient + lookahead_adder_les(w.gradient);
            gx + gy
        }
    }
}

/// Register bits that occupy whole LEs: the window, the side-cache chains,
/// and the separated design's pipeline stages.
fn storage_les(p: &DesignParams) -> u32 {
    let w = widths(p);
    let window = 9 * p.bits_per_pixel;
    let chains = 2 * w.colsum + 2 * w.coldiff;
    match p.variant {
        Variant::AdderTree => window,
        Variant::Separated => window + chains + (2 * w.gradient + 2 * w.colsum + 2 * w.coldiff),
        Variant::Compressor | Variant::LookaheadCompressor => window + chains,
    }
}

/// Longest combinational LE chain one cycle exercises, before routing
/// penalties.
fn combinational_chain(p: &DesignParams) -> u32 {
    let w = widths(p);
    match p.variant {
        Variant::AdderTree => {
            let (_, path) = tree_cost(&tree_leaf_widths(p.bits_per_pixel), w.gradient);
            path
        }
        Variant::Separated => {
            let gx = 2 * w.colsum + w.gradient;
            let gy = w.coldiff + 2 * w.gradient;
            gx.max(gy)
        }
        Variant::Compressor => {
            let gx = 3 + w.gradient;
            let colsum_setup = 2 + w.colsum;
            let gy = w.coldiff + 2 + w.gradient;
            gx.max(colsum_setup).max(gy)
        }
        Variant::LookaheadCompressor => {
            // Splitting halves the final-adder chain for one prediction level.
            let final_adder = w.gradient.div_ceil(2) + 1;
            let gx = 3 + final_adder;
            let colsum_setup = 2 + w.colsum;
            let gy = w.coldiff + 2 + final_adder;
            gx.max(colsum_setup).max(gy)
        }
    }
}

fn crossings_for_chain(chain: u32) -> u32 {
    (chain.saturating_sub(1)) / COLUMN_LES
}

/// Column crossings the critical chain incurs.
pub fn column_crossings(p: &DesignParams) -> Result<u32, ParamError> {
    p.validate()?;
    Ok(crossings_for_chain(combinational_chain(p)))
}

/// Critical path in LE levels: the longest combinational chain plus
/// [`CROSSING_PENALTY`] per column crossing.
pub fn critical_path_levels(p: &DesignParams) -> Result<u32, ParamError> {
    p.validate()?;
    let chain = combinational_chain(p);
    Ok(chain + CROSSING_PENALTY * crossings_for_chain(chain))
}

/// Models the full cost of one build.
pub fn estimate_resources(p: &DesignParams) -> Result<ResourceReport, ParamError> {
    p.validate()?;
    let datapath = datapath_les(p);
    let storage = storage_les(p);
    let control = control_les(p.variant);

    let lut_functions = datapath + control;
    let logic_registers = storage + CONTROL_REGS;
    // Control registers pack into control LEs; datapath and storage do not
    // overlap, so the total is simply the three groups.
    let total_les = datapath + storage + control;
    debug_assert_eq!(total_les, lut_functions + logic_registers - CONTROL_REGS);

    let line_buffer_bits = 2 * (p.width - 3) * p.bits_per_pixel;
    let dedicated = i64::from(line_buffer_bits)
        + dedicated_delta_bits(p.variant, p.bits_per_pixel);
    let chain = combinational_chain(p);
    let crossings = crossings_for_chain(chain);

    Ok(ResourceReport {
        variant: p.variant,
        total_les,
        lut_functions,
        logic_registers,
        dedicated_register_bits: dedicated.max(0) as u32,
        line_buffer_bits,
        critical_path_levels: chain + CROSSING_PENALTY * crossings,
        column_crossings: crossings,
    })
}

// ---------------------------------------------------------------------------
// Published reference values.
// ---------------------------------------------------------------------------

/// One row of the published results: absent entries render as "NA".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PaperRow {
    pub name: &'static str,
    pub variant: Option<Variant>,
    pub total_les: Option<u32>,
    pub lut_functions: Option<u32>,
    pub logic_registers: Option<u32>,
    pub dedicated_register_bits: Option<u32>,
    pub max_frequency_mhz: Option<f64>,
}

/// The published measurement rows, including the external reference designs.
pub const PAPER_ROWS: [PaperRow; 7] = [
    PaperRow {
        name: "gumstix-dsp",
        variant: None,
        total_les: None,
        lut_functions: None,
        logic_registers: None,
        dedicated_register_bits: None,
        max_frequency_mhz: Some(43.02),
    },
    PaperRow {
        name: "sobel-reference",
        variant: None,
        total_les: Some(2543),
        lut_functions: None,
        logic_registers: None,
        dedicated_register_bits: None,
        max_frequency_mhz: Some(169.12),
    },
    PaperRow {
        name: "adder-tree",
        variant: Some(Variant::AdderTree),
        total_les: Some(258),
        lut_functions: Some(223),
        logic_registers: Some(115),
        dedicated_register_bits: Some(8128),
        max_frequency_mhz: Some(172.83),
    },
    PaperRow {
        name: "separated",
        variant: Some(Variant::Separated),
        total_les: Some(272),
        lut_functions: Some(180),
        logic_registers: Some(190),
        dedicated_register_bits: Some(8160),
        max_frequency_mhz: Some(235.18),
    },
    PaperRow {
        name: "canny-reference",
        variant: None,
        total_les: Some(1530),
        lut_functions: None,
        logic_registers: None,
        dedicated_register_bits: None,
        max_frequency_mhz: Some(264.00),
    },
    PaperRow {
        name: "compressor",
        variant: Some(Variant::Compressor),
        total_les: Some(243),
        lut_functions: Some(231),
        logic_registers: Some(100),
        dedicated_register_bits: Some(8144),
        max_frequency_mhz: Some(321.89),
    },
    PaperRow {
        name: "lookahead-compressor",
        variant: Some(Variant::LookaheadCompressor),
        total_les: Some(260),
        lut_functions: Some(240),
        logic_registers: Some(105),
        dedicated_register_bits: Some(8158),
        max_frequency_mhz: Some(338.41),
    },
];

/// The published row for an in-model variant.
pub fn paper_row(variant: Variant) -> &'static PaperRow {
    PAPER_ROWS
        .iter()
        .find(|r| r.variant == Some(variant))
        .expect("every variant has a published row")
}

/// One metric compared against its published value. Reporting only; nothing
/// here asserts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub metric: &'static str,
    pub modeled: Option<f64>,
    pub paper: Option<f64>,
}

impl Comparison {
    pub fn abs_delta(&self) -> Option<f64> {
        Some(self.modeled? - self.paper?)
    }

    /// Relative delta against the published value, as a fraction.
    pub fn rel_delta(&self) -> Option<f64> {
        let paper = self.paper?;
        if paper == 0.0 {
            return None;
        }
        Some((self.modeled? - paper) / paper)
    }
}

/// Side-by-side modeled versus published metrics for one variant.
pub fn compare_with_paper(report: &ResourceReport) -> Vec<Comparison> {
    let row = paper_row(report.variant);
    let u = |v: u32| Some(f64::from(v));
    let p = |v: Option<u32>| v.map(f64::from);
    vec![
        Comparison { metric: "total_les", modeled: u(report.total_les), paper: p(row.total_les) },
        Comparison {
            metric: "lut_functions",
            modeled: u(report.lut_functions),
            paper: p(row.lut_functions),
        },
        Comparison {
            metric: "logic_registers",
            modeled: u(report.logic_registers),
            paper: p(row.logic_registers),
        },
        Comparison {
            metric: "dedicated_register_bits",
            modeled: u(report.dedicated_register_bits),
            paper: p(row.dedicated_register_bits),
        },
        Comparison {
            metric: "max_frequency_mhz",
            modeled: None,
            paper: row.max_frequency_mhz,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(variant: Variant) -> ResourceReport {
        estimate_resources(&DesignParams::new(variant)).unwrap()
    }

    #[test]
    fn compressor_dedicated_bits_match_reference_exactly() {
        let r = report(Variant::Compressor);
        assert_eq!(r.line_buffer_bits, 2 * 509 * 8);
        assert_eq!(r.dedicated_register_bits, 8144);
    }

    #[test]
    fn dedicated_bits_within_reference_band() {
        for v in Variant::ALL {
            let r = report(v);
            assert!(
                (8128..=8160).contains(&r.dedicated_register_bits),
                "{v}: {}",
                r.dedicated_register_bits
            );
            assert_eq!(r.dedicated_register_bits, paper_row(v).dedicated_register_bits.unwrap());
        }
    }

    #[test]
    fn total_le_ordering_matches_reference() {
        let total = |v| report(v).total_les;
        assert!(total(Variant::Compressor) < total(Variant::AdderTree));
        assert!(total(Variant::AdderTree) < total(Variant::LookaheadCompressor));
        assert!(total(Variant::LookaheadCompressor) < total(Variant::Separated));
    }

    #[test]
    fn totals_within_fifteen_percent_of_reference() {
        for v in Variant::ALL {
            let modeled = f64::from(report(v).total_les);
            let published = f64::from(paper_row(v).total_les.unwrap());
            let rel = (modeled - published).abs() / published;
            assert!(rel <= 0.15, "{v}: modeled {modeled} vs {published} ({rel:.3})");
        }
    }

    #[test]
    fn critical_path_ordering_is_strict() {
        let levels = |v| critical_path_levels(&DesignParams::new(v)).unwrap();
        let at = levels(Variant::AdderTree);
        let sep = levels(Variant::Separated);
        let comp = levels(Variant::Compressor);
        let la = levels(Variant::LookaheadCompressor);
        assert!(at > sep && sep > comp && comp > la, "{at} {sep} {comp} {la}");
    }

    #[test]
    fn lookahead_pays_little_area_for_its_speed() {
        let comp = report(Variant::Compressor);
        let la = report(Variant::LookaheadCompressor);
        let delta = i64::from(la.total_les) - i64::from(comp.total_les);
        assert!(delta > 0 && delta < 30, "delta {delta}");
        assert!(la.critical_path_levels < comp.critical_path_levels);
    }

    #[test]
    fn packing_invariant() {
        for v in Variant::ALL {
            let r = report(v);
            assert!(r.total_les >= r.lut_functions.max(r.logic_registers), "{v}");
        }
    }

    #[test]
    fn line_buffer_bits_scale_linearly_in_width() {
        for v in Variant::ALL {
            let mut p = DesignParams::new(v);
            let at = |p: &DesignParams| estimate_resources(p).unwrap().line_buffer_bits;
            p.width = 256;
            let b256 = at(&p);
            p.width = 512;
            let b512 = at(&p);
            p.width = 1024;
            let b1024 = at(&p);
            // Every extra pixel of width costs exactly 2*bpp buffered bits.
            assert_eq!(b512 - b256, 2 * 8 * 256);
            assert_eq!(b1024 - b512, 2 * 8 * 512);
            // Doubling the buffered line length doubles its bits exactly.
            p.width = 2 * 256 - 3;
            assert_eq!(at(&p), 2 * b256);
        }
    }

    #[test]
    fn narrow_datapath_has_no_column_crossings() {
        let p = DesignParams {
            width: 64,
            height: 64,
            bits_per_pixel: 1,
            datapath_width: 4,
            variant: Variant::Compressor,
        };
        assert_eq!(column_crossings(&p).unwrap(), 0);
        let r = estimate_resources(&p).unwrap();
        assert_eq!(r.column_crossings, 0);
        assert_eq!(r.critical_path_levels, critical_path_levels(&p).unwrap());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = DesignParams::new(Variant::Compressor);
        p.width = 2;
        assert!(estimate_resources(&p).is_err());
        let mut p = DesignParams::new(Variant::Compressor);
        p.datapath_width = 10;
        assert!(matches!(
            estimate_resources(&p),
            Err(ParamError::NarrowDatapath { .. })
        ));
    }

    #[test]
    fn comparison_never_asserts_and_reports_deltas() {
        let r = report(Variant::Compressor);
        let rows = compare_with_paper(&r);
        let total = rows.iter().find(|c| c.metric == "total_les").unwrap();
        assert_eq!(total.paper, Some(243.0));
        assert!(total.rel_delta().unwrap().abs() <= 0.15);
        // Frequency is published but deliberately not modeled.
        let freq = rows.iter().find(|c| c.metric == "max_frequency_mhz").unwrap();
        assert!(freq.modeled.is_none() && freq.paper.is_some());
        assert!(freq.abs_delta().is_none());
    }

    #[test]
    fn reference_rows_include_na_entries() {
        let gumstix = PAPER_ROWS.iter().find(|r| r.name == "gumstix-dsp").unwrap();
        assert!(gumstix.total_les.is_none());
        assert!(gumstix.max_frequency_mhz.is_some());
    }
}

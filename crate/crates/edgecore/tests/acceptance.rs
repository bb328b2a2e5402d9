//! Acceptance suite: one test per shipping criterion, each printing a PASS
//! line. Run with:
//!
//! ```text
//! cargo test -p edgecore --test acceptance -- --nocapture
//! ```

use edgecore::adder::{lookahead_add, ripple_add};
use edgecore::compressor::{p2pp_compress, ppn_compress};
use edgecore::datapath::{process_frame, process_stream};
use edgecore::golden::{convolve2d, op_count, separable_convolve, separable_convolve_rows_first,
    sobel_golden, Kernel3x3};
use edgecore::magnitude::Norm;
use edgecore::resource::{critical_path_levels, estimate_resources, paper_row, DesignParams};
use edgecore::{BitWord, EdgeParams, Image, PixelCache, StreamEvent, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn pass(criterion: u32, what: &str) {
    println!("criterion {criterion}: PASS - {what}");
}

#[test]
fn c1_compressor_contracts_exhaustive() {
    for width in 2..=6u8 {
        let m = 1u32 << width;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let (xw, yw, zw) = (
                        BitWord::unsigned(x, width),
                        BitWord::unsigned(y, width),
                        BitWord::unsigned(z, width),
                    );
                    let p = p2pp_compress(xw, yw, zw);
                    assert_eq!(
                        p.total_raw(),
                        x.wrapping_add(2 * y).wrapping_add(z) % m,
                        "p2pp w={width} x={x} y={y} z={z}"
                    );
                    assert!(!p.carry.bit(0), "p2pp carry bit 0 must be clear");

                    let n = ppn_compress(xw, yw, zw);
                    assert_eq!(
                        n.total_raw(),
                        x.wrapping_add(y).wrapping_sub(z) % m,
                        "ppn w={width} x={x} y={y} z={z}"
                    );
                    assert!(n.carry.bit(0), "ppn carry bit 0 must be forced to 1");
                }
            }
        }
    }
    pass(1, "both 3:2 compressor contracts hold exhaustively at widths 2..=6");
}

#[test]
fn c2_adder_equivalence_exhaustive() {
    for a in 0..256u32 {
        for b in 0..256u32 {
            for cin in [false, true] {
                let aw = BitWord::unsigned(a, 8);
                let bw = BitWord::unsigned(b, 8);
                assert_eq!(
                    lookahead_add(aw, bw, cin),
                    ripple_add(aw, bw, cin),
                    "a={a} b={b} cin={cin}"
                );
            }
        }
    }
    pass(2, "look-ahead adder equals ripple adder for all 2^17 width-8 inputs");
}

#[test]
fn c3_oracle_equivalence_hundred_frames() {
    let params = EdgeParams::default();
    let failures: Vec<String> = (0..100u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let image = Image::seeded(64, 64, seed);
            let oracle = sobel_golden(&image, &params).unwrap();
            let mut bad = Vec::new();
            for variant in Variant::ALL {
                let out = process_frame(&image, variant, &params).unwrap();
                if out != oracle {
                    bad.push(format!("frame {seed} variant {variant}"));
                }
            }
            bad
        })
        .collect();
    assert!(failures.is_empty(), "mismatches: {failures:?}");
    pass(3, "all four variants bit-identical to the convolution oracle on 100 random 64x64 frames");
}

#[test]
fn c4_separability_both_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for i in 0..50u64 {
        let image = Image::seeded(16, 16, i);
        let col: [i32; 3] = std::array::from_fn(|_| rng.gen_range(-2..=2));
        let row: [i32; 3] = std::array::from_fn(|_| rng.gen_range(-2..=2));
        let two_d = convolve2d(&image, &Kernel3x3::outer(col, row)).unwrap();
        assert_eq!(separable_convolve(&image, col, row).unwrap(), two_d);
        assert_eq!(separable_convolve_rows_first(&image, col, row).unwrap(), two_d);
    }
    // And for the Sobel factorizations specifically.
    let image = Image::seeded(16, 16, 99);
    let two_d = convolve2d(&image, &Kernel3x3::outer([1, 2, 1], [-1, 0, 1])).unwrap();
    assert_eq!(separable_convolve(&image, [1, 2, 1], [-1, 0, 1]).unwrap(), two_d);
    pass(4, "separated convolution equals the 2D outer-product convolution in both pass orders");
}

#[test]
fn c5_operation_count() {
    assert_eq!(op_count(3), 17);
    pass(5, "a full 3x3 convolution costs 17 operations");
}

#[test]
fn c6_resource_model_quantitative() {
    let report = |v| estimate_resources(&DesignParams::new(v)).unwrap();

    let compressor = report(Variant::Compressor);
    assert_eq!(compressor.dedicated_register_bits, 8144);

    for v in Variant::ALL {
        let r = report(v);
        assert!(
            (8128..=8160).contains(&r.dedicated_register_bits),
            "{v} dedicated bits {}",
            r.dedicated_register_bits
        );
        let modeled = f64::from(r.total_les);
        let published = f64::from(paper_row(v).total_les.unwrap());
        let rel = (modeled - published).abs() / published;
        assert!(rel <= 0.15, "{v} total LEs {modeled} vs {published}: {rel:.3}");
    }

    let total = |v| report(v).total_les;
    assert!(
        total(Variant::Compressor) < total(Variant::AdderTree)
            && total(Variant::AdderTree) < total(Variant::LookaheadCompressor)
            && total(Variant::LookaheadCompressor) < total(Variant::Separated),
        "total LE ordering"
    );
    pass(6, "dedicated register bits exact/banded, totals within 15% and ordered as published");
}

#[test]
fn c7_timing_model_ordering() {
    let levels = |v| critical_path_levels(&DesignParams::new(v)).unwrap();
    let (at, sep, comp, la) = (
        levels(Variant::AdderTree),
        levels(Variant::Separated),
        levels(Variant::Compressor),
        levels(Variant::LookaheadCompressor),
    );
    assert!(
        at > sep && sep > comp && comp > la,
        "levels: adder-tree {at}, separated {sep}, compressor {comp}, look-ahead {la}"
    );
    pass(7, "critical-path levels strictly decrease adder-tree > separated > compressor > look-ahead");
}

#[test]
fn c8_streaming_semantics() {
    // Blanking-inserted streams are byte-identical to plain frames.
    let image = Image::seeded(24, 18, 808);
    let params = EdgeParams::default();
    let reference = process_frame(&image, Variant::LookaheadCompressor, &params).unwrap();

    let mut events = vec![StreamEvent::VBlank, StreamEvent::VBlank];
    for r in 0..image.height() {
        for c in 0..image.width() {
            events.push(StreamEvent::Pixel(image.get(r, c)));
        }
        events.push(StreamEvent::HBlank);
        if r % 3 == 0 {
            events.push(StreamEvent::HBlank);
        }
    }
    events.push(StreamEvent::EndOfFrame);
    let frames =
        process_stream(image.width(), events, Variant::LookaheadCompressor, &params).unwrap();
    assert_eq!(frames.len(), 1);
    assert_eq!(frames[0].len(), (22 * 16) as usize);
    for s in &frames[0] {
        assert_eq!(s.value, reference.get(s.row, s.col), "sample at ({},{})", s.row, s.col);
    }

    // First valid window lands exactly at raster index 2W + 2.
    let width = 512u32;
    let mut cache = PixelCache::new(width);
    let mut first = None;
    for idx in 0..u64::from(3 * width) {
        if cache.push(StreamEvent::Pixel(1)).unwrap().is_some() {
            first = Some(idx);
            break;
        }
    }
    assert_eq!(first, Some(u64::from(2 * width + 2)));

    // A full 512x512 detect run finishes within a second.
    let big = Image::seeded(512, 512, 5150);
    let start = std::time::Instant::now();
    let out = process_frame(&big, Variant::LookaheadCompressor, &params).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(out.width(), 512);
    assert!(elapsed.as_secs_f64() < 1.0, "512x512 took {elapsed:?}");

    pass(8, "blanking-insensitive, primed at index 2W+2, 512x512 frame under one second");
}

#[test]
fn c9_horizon_image_analogue() {
    // Dark sky over bright ground with bounded additive noise. Noise of at
    // most +/-8 keeps any intra-region gradient below the 128 threshold, so
    // every white pixel comes from the horizon step itself.
    let (w, h) = (128u32, 128u32);
    let horizon = 64u32;
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut image = Image::new(w, h);
    for r in 0..h {
        for c in 0..w {
            let base: i16 = if r < horizon { 30 } else { 220 };
            let noise: i16 = rng.gen_range(-8..=8);
            image.set(r, c, (base + noise).clamp(0, 255) as u8);
        }
    }

    let params = EdgeParams { norm: Norm::L2, threshold: Some(128) };
    let edges = process_frame(&image, Variant::LookaheadCompressor, &params).unwrap();

    let mut white_total = 0u32;
    let mut white_near_horizon = 0u32;
    for r in 0..h {
        for c in 0..w {
            if edges.get(r, c) == 255 {
                white_total += 1;
                if r.abs_diff(horizon) <= 2 {
                    white_near_horizon += 1;
                }
            }
        }
    }
    assert!(white_total >= w - 2, "horizon line missing: {white_total} white pixels");
    let fraction = f64::from(white_near_horizon) / f64::from(white_total);
    assert!(
        fraction >= 0.9,
        "only {white_near_horizon} of {white_total} white pixels near the horizon"
    );
    pass(9, "thresholded horizon image concentrates white pixels within two rows of the step");
}

//! Bit-accurate simulator for a compressor-based Sobel edge-detection
//! datapath.
//!
//! The crate models the datapath at the bit level — custom 3:2/4:2
//! compressors, ripple and split look-ahead adders, a streaming two-line
//! pixel cache — proves all four design variants bit-exact against a plain
//! integer convolution oracle, and prices each variant with an FPGA
//! logic-element cost model.
//!
//! With the default `parallel` feature, frame batches and the reference
//! convolution fan out over rayon; without it everything runs sequentially
//! with identical results.

pub mod adder;
pub mod cache;
pub mod compressor;
pub mod datapath;
pub mod golden;
pub mod image;
pub mod magnitude;
pub mod resource;
pub mod word;

pub use cache::{PixelCache, StreamError, StreamEvent, Window3x3};
pub use datapath::{
    process_frame, process_frames, process_stream, CompressorFault, EdgeSample, GradientSample,
    SobelPipeline, Variant,
};
pub use image::{EdgeImage, Image, SignedMap, UndersizedImage};
pub use magnitude::{EdgeParams, Norm};
pub use resource::{DesignParams, ResourceReport};
pub use word::{BitWord, CsPair, Signedness};

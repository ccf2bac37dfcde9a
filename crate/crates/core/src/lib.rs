//! Event-camera stream slicing and frame accumulation.
//!
//! Events are cut into slices by count, by fixed interval, or by both (the
//! last `N` events before each publish stamp), and each slice is accumulated
//! into a normalized frame. A contrast-threshold event generator provides
//! ground-truth streams for testing.

pub mod accumulator;
pub mod config;
pub mod error;
pub mod eval;
pub mod event;
pub mod frame;
pub mod io;
pub mod pipeline;
pub mod presets;
pub mod slicer;
pub mod synth;

pub use accumulator::{accumulate_slice, hold_previous, Accumulator, AccumulatorCarry};
pub use config::{window_size_for, AccumulatorConfig, Decay, PolarityMode, SliceMethod};
pub use error::{Error, ParseErrorKind, Result};
pub use event::{Event, Polarity, SensorGeometry};
pub use frame::{
    neutral_value, quantize_frame, quantize_value, BitDepth, EventFrame, FrameSpec, Raster,
};
pub use pipeline::{run_pipeline, FramePipeline, PipelineStats, Published};
pub use slicer::{detect_no_motion, Slice, Slicer};

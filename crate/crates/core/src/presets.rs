//! Named accumulator settings for the Event Camera Dataset sequences
//! (DAVIS240) and for onboard UAV flight (DAVIS346).
//!
//! All presets slice by time and number, rectify polarity and use step
//! decay. Frames are published at 30 Hz; override `interval` for other rates.

use crate::config::{AccumulatorConfig, Decay, PolarityMode, SliceMethod};
use crate::error::{Error, Result};

/// 30 Hz publication.
pub const DATASET_INTERVAL: f64 = 1.0 / 30.0;

/// `(name, contribution, window size)` per dataset sequence.
const DATASET_ROWS: [(&str, f64, usize); 10] = [
    ("dynamic_6dof", 0.2, 10_000),
    ("dynamic_translation", 0.33, 10_000),
    ("shape_6dof", 0.2, 3_000),
    ("shape_translation", 0.2, 3_000),
    ("boxes_6dof", 0.2, 15_000),
    ("boxes_translation", 0.2, 15_000),
    ("poster_6dof", 0.2, 10_000),
    ("poster_translation", 0.33, 10_000),
    ("hdr_poster", 0.2, 10_000),
    ("hdr_boxes", 0.2, 20_000),
];

pub const UAV_PRESET: &str = "uav";

fn slam_config(
    contribution: f64,
    window_size: usize,
    no_motion_threshold: usize,
) -> AccumulatorConfig {
    AccumulatorConfig {
        slice_method: SliceMethod::ByTimeAndNumber,
        window_size,
        interval: DATASET_INTERVAL,
        contribution,
        polarity_mode: PolarityMode::Rectified,
        decay: Decay::Step,
        no_motion_threshold,
        start_time: None,
    }
}

/// Every preset name, dataset rows first.
pub fn preset_names() -> Vec<&'static str> {
    DATASET_ROWS
        .iter()
        .map(|r| r.0)
        .chain(std::iter::once(UAV_PRESET))
        .collect()
}

pub fn preset(name: &str) -> Result<AccumulatorConfig> {
    if name == UAV_PRESET {
        return Ok(slam_config(0.5, 20_000, 200));
    }
    DATASET_ROWS
        .iter()
        .find(|r| r.0 == name)
        .map(|&(_, c, n)| slam_config(c, n, 0))
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            available: preset_names().join(", "),
        })
}

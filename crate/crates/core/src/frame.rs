//! Normalized event frames and their integer rasterization.

use crate::config::PolarityMode;
use crate::error::{Error, Result};
use crate::event::SensorGeometry;

/// Output quantization depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum BitDepth {
    #[default]
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::UnsupportedBitDepth(other)),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }

    /// `2^bits - 1`.
    pub fn max_value(self) -> u16 {
        match self {
            BitDepth::Eight => u8::MAX as u16,
            BitDepth::Sixteen => u16::MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameSpec {
    pub geometry: SensorGeometry,
    pub bit_depth: BitDepth,
}

impl FrameSpec {
    pub fn new(geometry: SensorGeometry, bit_depth: BitDepth) -> Self {
        Self {
            geometry,
            bit_depth,
        }
    }
}

/// Background intensity of an untouched pixel: black when polarities are
/// rectified, mid-gray when they are kept signed.
#[inline]
pub fn neutral_value(mode: PolarityMode) -> f64 {
    match mode {
        PolarityMode::Rectified => 0.0,
        PolarityMode::Signed => 0.5,
    }
}

/// A published event frame. Pixels are row-major and normalized to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EventFrame {
    pub geometry: SensorGeometry,
    pub polarity_mode: PolarityMode,
    pub pixels: Vec<f64>,
    /// Publication time in seconds.
    pub stamp: f64,
    /// Produced by the no-motion hold path rather than by accumulation.
    pub held: bool,
}

impl EventFrame {
    pub fn neutral(geometry: SensorGeometry, polarity_mode: PolarityMode, stamp: f64) -> Self {
        Self {
            geometry,
            polarity_mode,
            pixels: vec![neutral_value(polarity_mode); geometry.area()],
            stamp,
            held: false,
        }
    }

    #[inline]
    pub fn neutral_value(&self) -> f64 {
        neutral_value(self.polarity_mode)
    }

    #[inline]
    pub fn pixel(&self, x: u16, y: u16) -> f64 {
        self.pixels[y as usize * self.geometry.width() as usize + x as usize]
    }

    pub fn quantize(&self, bit_depth: BitDepth) -> Raster {
        quantize_frame(self, bit_depth)
    }
}

/// Integer image ready for output; 8-bit values are stored widened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: u16,
    pub height: u16,
    pub bit_depth: BitDepth,
    pub data: Vec<u16>,
}

/// Maps `v` in `[0, 1]` to `round(v * (2^bits - 1))`, rounding half away from zero.
#[inline]
pub fn quantize_value(v: f64, bit_depth: BitDepth) -> u16 {
    let max = bit_depth.max_value() as f64;
    // f64::round is half-away-from-zero.
    (v.clamp(0.0, 1.0) * max).round() as u16
}

pub fn quantize_frame(frame: &EventFrame, bit_depth: BitDepth) -> Raster {
    Raster {
        width: frame.geometry.width(),
        height: frame.geometry.height(),
        bit_depth,
        data: frame
            .pixels
            .iter()
            .map(|&v| quantize_value(v, bit_depth))
            .collect(),
    }
}

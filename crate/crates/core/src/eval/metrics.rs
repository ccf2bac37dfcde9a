use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::frame::{quantize_value, BitDepth, EventFrame, Raster};

/// Zero-mean normalized cross-correlation over all pixels, in `[-1, 1]`.
/// A constant frame has no defined correlation and yields
/// [`Error::Degenerate`].
pub fn ncc(a: &EventFrame, b: &EventFrame) -> Result<f64> {
    if a.geometry != b.geometry {
        return Err(Error::GeometryMismatch {
            a_width: a.geometry.width(),
            a_height: a.geometry.height(),
            b_width: b.geometry.width(),
            b_height: b.geometry.height(),
        });
    }
    ncc_slices(&a.pixels, &b.pixels)
}

pub fn ncc_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut cross, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (da, db) = (x - mean_a, y - mean_b);
        cross += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    // Relative guard: a frame whose spread is pure rounding noise is constant.
    let scale_a = a
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let scale_b = b
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    if var_a <= 1e-24 * scale_a * scale_a * n || var_b <= 1e-24 * scale_b * scale_b * n {
        return Err(Error::Degenerate);
    }
    Ok((cross / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0))
}

/// Fraction of pixels that differ from the frame's neutral level.
pub fn fill_ratio(frame: &EventFrame) -> f64 {
    let neutral = frame.neutral_value();
    let touched = frame.pixels.iter().filter(|&&v| v != neutral).count();
    touched as f64 / frame.pixels.len() as f64
}

/// Among non-neutral pixels, the fraction pinned at exactly 0 or 1.
/// Zero when no pixel is touched.
pub fn saturation_fraction(frame: &EventFrame) -> f64 {
    let neutral = frame.neutral_value();
    let (mut touched, mut saturated) = (0usize, 0usize);
    for &v in &frame.pixels {
        if v != neutral {
            touched += 1;
            if v == 0.0 || v == 1.0 {
                saturated += 1;
            }
        }
    }
    if touched == 0 {
        0.0
    } else {
        saturated as f64 / touched as f64
    }
}

/// Number of distinct quantized pixel values in the frame.
pub fn distinct_levels(frame: &EventFrame, bit_depth: BitDepth) -> usize {
    frame
        .pixels
        .iter()
        .map(|&v| quantize_value(v, bit_depth))
        .collect::<HashSet<_>>()
        .len()
}

/// Frames laid out left to right with a `gap`-pixel mid-gray divider.
pub fn side_by_side(frames: &[&EventFrame], bit_depth: BitDepth, gap: u16) -> Option<Raster> {
    let first = frames.first()?;
    let h = first.geometry.height() as usize;
    if frames.iter().any(|f| f.geometry.height() as usize != h) {
        return None;
    }
    let total_w: usize = frames
        .iter()
        .map(|f| f.geometry.width() as usize)
        .sum::<usize>()
        + gap as usize * (frames.len() - 1);
    let divider = quantize_value(0.5, bit_depth);
    let mut data = Vec::with_capacity(total_w * h);
    for y in 0..h {
        for (i, f) in frames.iter().enumerate() {
            if i > 0 {
                data.extend(std::iter::repeat_n(divider, gap as usize));
            }
            let w = f.geometry.width() as usize;
            data.extend(
                f.pixels[y * w..(y + 1) * w]
                    .iter()
                    .map(|&v| quantize_value(v, bit_depth)),
            );
        }
    }
    Some(Raster {
        width: u16::try_from(total_w).ok()?,
        height: h as u16,
        bit_depth,
        data,
    })
}

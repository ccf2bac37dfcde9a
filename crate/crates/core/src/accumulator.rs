//! Prints slices of events onto frames.
//!
//! Step decay rebuilds every frame from a neutral canvas, so step frames are
//! a pure function of their slice. Linear and exponential decay keep one
//! persistent canvas across slices and relax each pixel toward neutral in
//! event-time order. Decay acts per pixel independently, so it is applied
//! lazily: a pixel is brought up to date when an event lands on it, and the
//! whole canvas is brought up to date at publication.

use crate::config::{AccumulatorConfig, Decay, PolarityMode};
use crate::error::{Error, Result};
use crate::event::{Event, SensorGeometry};
use crate::frame::{neutral_value, EventFrame};
use crate::slicer::{detect_no_motion, Slice};

/// Increment one event applies to its pixel.
#[inline]
pub fn signed_contribution(event: &Event, mode: PolarityMode, contribution: f64) -> f64 {
    match mode {
        PolarityMode::Rectified => contribution,
        PolarityMode::Signed => contribution * event.polarity.sign(),
    }
}

/// Adds one event to `pixels`, saturating at 0 and 1.
#[inline]
pub fn integrate_event(
    pixels: &mut [f64],
    geometry: SensorGeometry,
    event: &Event,
    mode: PolarityMode,
    contribution: f64,
) -> Result<()> {
    let idx = geometry.index_of(event)?;
    let v = &mut pixels[idx];
    *v = (*v + signed_contribution(event, mode, contribution)).clamp(0.0, 1.0);
    Ok(())
}

/// Relaxes a single value toward `neutral` over `dt` seconds.
#[inline]
pub fn decay_value(v: f64, dt: f64, decay: Decay, neutral: f64) -> f64 {
    match decay {
        Decay::Step => v,
        Decay::Linear { rate } => {
            let gap = v - neutral;
            let step = (rate * dt).min(gap.abs());
            v - gap.signum() * step
        }
        Decay::Exponential { tau } => neutral + (v - neutral) * (-dt / tau).exp(),
    }
}

pub fn apply_decay(pixels: &mut [f64], dt: f64, decay: Decay, neutral: f64) -> Result<()> {
    if dt < 0.0 || dt.is_nan() {
        return Err(Error::NegativeInterval(dt));
    }
    if !decay.is_step() {
        for v in pixels.iter_mut() {
            *v = decay_value(*v, dt, decay, neutral);
        }
    }
    Ok(())
}

pub fn reset_frame(geometry: SensorGeometry, mode: PolarityMode) -> Vec<f64> {
    vec![neutral_value(mode); geometry.area()]
}

/// Cross-slice state: the last published frame and, for non-step decay, the
/// persistent canvas.
#[derive(Clone, Debug, Default)]
pub struct AccumulatorCarry {
    previous: Option<EventFrame>,
    persistent: Option<PersistentCanvas>,
}

#[derive(Clone, Debug)]
struct PersistentCanvas {
    pixels: Vec<f64>,
    /// Time each pixel was last brought up to date.
    updated: Vec<f64>,
    /// Stream index one past the last integrated event.
    next_index: u64,
}

impl AccumulatorCarry {
    pub fn previous(&self) -> Option<&EventFrame> {
        self.previous.as_ref()
    }

    /// The persistent canvas, if a non-step decay mode has started one.
    pub fn persistent_pixels(&self) -> Option<&[f64]> {
        self.persistent.as_ref().map(|p| p.pixels.as_slice())
    }
}

fn check_ordered(slice: &Slice) -> Result<()> {
    for pair in slice.events.windows(2) {
        if pair[1].t < pair[0].t {
            return Err(Error::NonMonotonic {
                previous: pair[0].t,
                current: pair[1].t,
            });
        }
    }
    Ok(())
}

/// Builds the frame for `slice` and records it in `carry`.
pub fn accumulate_slice(
    slice: &Slice,
    config: &AccumulatorConfig,
    geometry: SensorGeometry,
    carry: &mut AccumulatorCarry,
) -> Result<EventFrame> {
    check_ordered(slice)?;
    let mode = config.polarity_mode;
    let c = config.contribution;
    let neutral = neutral_value(mode);

    let pixels = match config.decay {
        Decay::Step => {
            let mut pixels = reset_frame(geometry, mode);
            for ev in &slice.events {
                integrate_event(&mut pixels, geometry, ev, mode, c)?;
            }
            pixels
        }
        decay => {
            let canvas = carry.persistent.get_or_insert_with(|| {
                let start = slice.events.first().map_or(slice.publish_stamp, |e| e.t);
                PersistentCanvas {
                    pixels: reset_frame(geometry, mode),
                    updated: vec![start; geometry.area()],
                    next_index: slice.first_index,
                }
            });
            let skip = canvas.next_index.saturating_sub(slice.first_index) as usize;
            for ev in slice.events.iter().skip(skip) {
                let idx = geometry.index_of(ev)?;
                let dt = (ev.t - canvas.updated[idx]).max(0.0);
                let v = decay_value(canvas.pixels[idx], dt, decay, neutral);
                canvas.pixels[idx] = (v + signed_contribution(ev, mode, c)).clamp(0.0, 1.0);
                canvas.updated[idx] = ev.t;
            }
            canvas.next_index = canvas.next_index.max(slice.end_index());
            for (v, u) in canvas.pixels.iter_mut().zip(canvas.updated.iter_mut()) {
                let dt = (slice.publish_stamp - *u).max(0.0);
                *v = decay_value(*v, dt, decay, neutral);
                *u = u.max(slice.publish_stamp);
            }
            canvas.pixels.clone()
        }
    };

    let frame = EventFrame {
        geometry,
        polarity_mode: mode,
        pixels,
        stamp: slice.publish_stamp,
        held: false,
    };
    carry.previous = Some(frame.clone());
    Ok(frame)
}

/// Republishes the previous frame at a new stamp. At stream start, with
/// nothing to copy, a neutral frame is emitted instead; both are flagged
/// `held`.
pub fn hold_previous(
    carry: &mut AccumulatorCarry,
    publish_stamp: f64,
    geometry: SensorGeometry,
    mode: PolarityMode,
) -> EventFrame {
    let mut frame = match &carry.previous {
        Some(prev) => prev.clone(),
        None => EventFrame::neutral(geometry, mode, publish_stamp),
    };
    frame.stamp = publish_stamp;
    frame.held = true;
    carry.previous = Some(frame.clone());
    frame
}

/// Owns the carry for one sensor and applies the no-motion rule.
#[derive(Clone, Debug)]
pub struct Accumulator {
    config: AccumulatorConfig,
    geometry: SensorGeometry,
    carry: AccumulatorCarry,
}

impl Accumulator {
    pub fn new(config: AccumulatorConfig, geometry: SensorGeometry) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            geometry,
            carry: AccumulatorCarry::default(),
        })
    }

    pub fn config(&self) -> &AccumulatorConfig {
        &self.config
    }

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    pub fn carry(&self) -> &AccumulatorCarry {
        &self.carry
    }

    pub fn process(&mut self, slice: &Slice) -> Result<EventFrame> {
        if detect_no_motion(slice.interval_event_count, self.config.no_motion_threshold) {
            // Skip the quiet interval's events in the persistent canvas too.
            if let Some(canvas) = self.carry.persistent.as_mut() {
                canvas.next_index = canvas.next_index.max(slice.end_index());
            }
            return Ok(hold_previous(
                &mut self.carry,
                slice.publish_stamp,
                self.geometry,
                self.config.polarity_mode,
            ));
        }
        accumulate_slice(slice, &self.config, self.geometry, &mut self.carry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Polarity;
    use crate::frame::{quantize_value, BitDepth};

    fn geom(w: u32, h: u32) -> SensorGeometry {
        SensorGeometry::new(w, h).unwrap()
    }

    fn ev(t: f64, x: u16, y: u16, p: Polarity) -> Event {
        Event::new(t, x, y, p)
    }

    fn slice_of(events: Vec<Event>, stamp: f64) -> Slice {
        Slice {
            interval_event_count: events.len(),
            events,
            first_index: 0,
            publish_stamp: stamp,
            partial: false,
        }
    }

    fn step_config(c: f64, mode: PolarityMode) -> AccumulatorConfig {
        AccumulatorConfig {
            contribution: c,
            polarity_mode: mode,
            ..Default::default()
        }
    }

    #[test]
    fn contribution_signs() {
        let neg = ev(0.0, 0, 0, Polarity::Negative);
        let pos = ev(0.0, 0, 0, Polarity::Positive);
        assert_eq!(signed_contribution(&neg, PolarityMode::Rectified, 0.2), 0.2);
        assert_eq!(signed_contribution(&neg, PolarityMode::Signed, 0.2), -0.2);
        assert_eq!(signed_contribution(&pos, PolarityMode::Signed, 1.0), 1.0);
    }

    #[test]
    fn two_half_contributions_saturate_to_white() {
        let g = geom(2, 2);
        let mut px = reset_frame(g, PolarityMode::Rectified);
        let e = ev(0.0, 1, 1, Polarity::Positive);
        integrate_event(&mut px, g, &e, PolarityMode::Rectified, 0.5).unwrap();
        assert_eq!(quantize_value(px[3], BitDepth::Eight), 128);
        integrate_event(&mut px, g, &e, PolarityMode::Rectified, 0.5).unwrap();
        assert_eq!(px[3], 1.0);
        assert_eq!(quantize_value(px[3], BitDepth::Eight), 255);
        assert_eq!(&px[..3], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn signed_negative_from_neutral_and_clamp() {
        let g = geom(1, 1);
        let mut px = reset_frame(g, PolarityMode::Signed);
        integrate_event(
            &mut px,
            g,
            &ev(0.0, 0, 0, Polarity::Negative),
            PolarityMode::Signed,
            0.2,
        )
        .unwrap();
        assert!((px[0] - 0.3).abs() < 1e-12);

        let mut px = vec![0.9];
        integrate_event(
            &mut px,
            g,
            &ev(0.0, 0, 0, Polarity::Negative),
            PolarityMode::Rectified,
            0.5,
        )
        .unwrap();
        assert_eq!(px[0], 1.0);
    }

    #[test]
    fn out_of_bounds_event_is_an_error() {
        let g = geom(2, 2);
        let mut px = reset_frame(g, PolarityMode::Rectified);
        let e = ev(0.0, 2, 0, Polarity::Positive);
        assert!(matches!(
            integrate_event(&mut px, g, &e, PolarityMode::Rectified, 0.5),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn decay_analytics() {
        let tau = 0.1;
        let v = decay_value(1.0, tau, Decay::Exponential { tau }, 0.0);
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
        let lin = Decay::Linear { rate: 1.0 };
        assert!((decay_value(0.8, 0.1, lin, 0.5) - 0.7).abs() < 1e-12);
        assert_eq!(decay_value(0.8, 1.0, lin, 0.5), 0.5);
        assert_eq!(decay_value(0.2, 1.0, lin, 0.5), 0.5);
        assert_eq!(decay_value(0.37, 5.0, Decay::Step, 0.0), 0.37);
        let mut px = vec![0.1, 0.9];
        assert!(apply_decay(&mut px, -0.1, lin, 0.5).is_err());
        apply_decay(&mut px, 0.0, lin, 0.5).unwrap();
        assert_eq!(px, vec![0.1, 0.9]);
    }

    #[test]
    fn reset_levels() {
        assert!(reset_frame(geom(4, 4), PolarityMode::Rectified)
            .iter()
            .all(|&v| v == 0.0));
        let signed = reset_frame(geom(4, 4), PolarityMode::Signed);
        assert_eq!(signed.len(), 16);
        assert!(signed
            .iter()
            .all(|&v| quantize_value(v, BitDepth::Eight) == 128));
    }

    #[test]
    fn step_slice_accumulation() {
        let g = geom(3, 3);
        let cfg = step_config(0.33, PolarityMode::Rectified);
        let mut carry = AccumulatorCarry::default();

        let empty = accumulate_slice(&slice_of(vec![], 1.0), &cfg, g, &mut carry).unwrap();
        assert!(empty.pixels.iter().all(|&v| v == 0.0));
        assert_eq!(empty.stamp, 1.0);

        let one = slice_of(vec![ev(0.5, 1, 2, Polarity::Negative)], 2.0);
        let f = accumulate_slice(&one, &cfg, g, &mut carry).unwrap();
        assert_eq!(f.pixel(1, 2), 0.33);
        assert_eq!(f.pixels.iter().filter(|&&v| v != 0.0).count(), 1);
        assert!(!f.held);
        let again = accumulate_slice(&one, &cfg, g, &mut carry).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn unordered_slice_rejected() {
        let g = geom(2, 2);
        let s = slice_of(
            vec![
                ev(0.2, 0, 0, Polarity::Positive),
                ev(0.1, 0, 0, Polarity::Positive),
            ],
            1.0,
        );
        let mut carry = AccumulatorCarry::default();
        let cfg = step_config(0.2, PolarityMode::Rectified);
        assert!(matches!(
            accumulate_slice(&s, &cfg, g, &mut carry),
            Err(Error::NonMonotonic { .. })
        ));
    }

    #[test]
    fn hold_copies_previous_frame() {
        let g = geom(2, 2);
        let cfg = step_config(0.5, PolarityMode::Rectified);
        let mut carry = AccumulatorCarry::default();

        let start = hold_previous(&mut carry, 0.5, g, PolarityMode::Signed);
        assert!(start.held);
        assert!(start.pixels.iter().all(|&v| v == 0.5));

        let s = slice_of(vec![ev(0.9, 0, 1, Polarity::Positive)], 1.0);
        let f = accumulate_slice(&s, &cfg, g, &mut carry).unwrap();
        let h1 = hold_previous(&mut carry, 2.0, g, cfg.polarity_mode);
        let h2 = hold_previous(&mut carry, 3.0, g, cfg.polarity_mode);
        assert_eq!(h1.pixels, f.pixels);
        assert_eq!(h2.pixels, f.pixels);
        assert_eq!((h1.stamp, h2.stamp), (2.0, 3.0));
        assert!(h1.held && h2.held);
    }

    #[test]
    fn accumulator_applies_no_motion_rule() {
        let g = geom(2, 2);
        let cfg = AccumulatorConfig {
            no_motion_threshold: 2,
            ..step_config(0.5, PolarityMode::Rectified)
        };
        let mut acc = Accumulator::new(cfg, g).unwrap();
        let busy = slice_of(
            vec![
                ev(0.1, 0, 0, Polarity::Positive),
                ev(0.2, 1, 1, Polarity::Positive),
            ],
            0.3,
        );
        let f = acc.process(&busy).unwrap();
        assert!(!f.held);
        let quiet = Slice {
            interval_event_count: 1,
            ..slice_of(
                vec![
                    ev(0.2, 1, 1, Polarity::Positive),
                    ev(0.4, 0, 1, Polarity::Positive),
                ],
                0.6,
            )
        };
        let h = acc.process(&quiet).unwrap();
        assert!(h.held);
        assert_eq!(h.pixels, f.pixels);
        assert_eq!(h.stamp, 0.6);
    }

    #[test]
    fn persistent_canvas_skips_overlap_and_decays() {
        let g = geom(2, 1);
        let tau = 0.5;
        let cfg = AccumulatorConfig {
            decay: Decay::Exponential { tau },
            contribution: 0.5,
            ..Default::default()
        };
        let mut carry = AccumulatorCarry::default();
        let a = ev(0.0, 0, 0, Polarity::Positive);
        let b = ev(0.5, 1, 0, Polarity::Positive);
        let s1 = Slice {
            events: vec![a],
            first_index: 0,
            publish_stamp: 0.5,
            interval_event_count: 1,
            partial: true,
        };
        let s2 = Slice {
            events: vec![a, b],
            first_index: 0,
            publish_stamp: 1.0,
            interval_event_count: 1,
            partial: false,
        };
        let f1 = accumulate_slice(&s1, &cfg, g, &mut carry).unwrap();
        assert!((f1.pixels[0] - 0.5 * (-1.0f64).exp()).abs() < 1e-12);
        let f2 = accumulate_slice(&s2, &cfg, g, &mut carry).unwrap();
        // `a` is not integrated twice.
        assert!((f2.pixels[0] - 0.5 * (-2.0f64).exp()).abs() < 1e-12);
        assert!((f2.pixels[1] - 0.5 * (-1.0f64).exp()).abs() < 1e-12);
    }
}

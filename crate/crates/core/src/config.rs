//! Accumulator settings and the window-size sizing rule.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::event::SensorGeometry;

/// Default linear decay rate, 1/s. Illustrative only.
pub const DEFAULT_LINEAR_RATE: f64 = 1.0;
/// Default exponential time constant, s. Illustrative only.
pub const DEFAULT_EXP_TAU: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SliceMethod {
    /// A new slice every `N` events; aperiodic output.
    ByNumber,
    /// Every event in each fixed interval; periodic output.
    ByTime,
    /// Periodic output, each frame built from the last `N` events before
    /// its publication time.
    ByTimeAndNumber,
}

impl SliceMethod {
    pub fn uses_time(self) -> bool {
        !matches!(self, SliceMethod::ByNumber)
    }
}

impl FromStr for SliceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "number" => Ok(SliceMethod::ByNumber),
            "time" => Ok(SliceMethod::ByTime),
            "time-number" => Ok(SliceMethod::ByTimeAndNumber),
            other => Err(Error::InvalidConfig(format!(
                "unknown slice method '{other}', expected number|time|time-number"
            ))),
        }
    }
}

impl fmt::Display for SliceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SliceMethod::ByNumber => "number",
            SliceMethod::ByTime => "time",
            SliceMethod::ByTimeAndNumber => "time-number",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolarityMode {
    /// Both polarities add `+c`.
    Rectified,
    /// Positive events add `+c`, negative events subtract `c`.
    Signed,
}

impl FromStr for PolarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectified" => Ok(PolarityMode::Rectified),
            "signed" => Ok(PolarityMode::Signed),
            other => Err(Error::InvalidConfig(format!(
                "unknown polarity mode '{other}', expected rectified|signed"
            ))),
        }
    }
}

impl fmt::Display for PolarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolarityMode::Rectified => "rectified",
            PolarityMode::Signed => "signed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    /// Reset to neutral at every slice.
    Step,
    /// Move toward neutral at `rate` per second, stopping there.
    Linear { rate: f64 },
    /// Relax toward neutral with time constant `tau` seconds.
    Exponential { tau: f64 },
}

impl Decay {
    pub fn is_step(&self) -> bool {
        matches!(self, Decay::Step)
    }
}

impl FromStr for Decay {
    type Err = Error;

    /// `step`, `linear[:RATE]` or `exp[:TAU]`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let parse_arg = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("bad decay parameter '{a}'"))),
            }
        };
        let decay = match kind {
            "step" if arg.is_none() => Decay::Step,
            "linear" => Decay::Linear {
                rate: parse_arg(DEFAULT_LINEAR_RATE)?,
            },
            "exp" => Decay::Exponential {
                tau: parse_arg(DEFAULT_EXP_TAU)?,
            },
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown decay '{s}', expected step|linear:RATE|exp:TAU"
                )))
            }
        };
        Ok(decay)
    }
}

impl fmt::Display for Decay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decay::Step => f.write_str("step"),
            Decay::Linear { rate } => write!(f, "linear:{rate}"),
            Decay::Exponential { tau } => write!(f, "exp:{tau}"),
        }
    }
}

/// The full accumulator settings vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AccumulatorConfig {
    pub slice_method: SliceMethod,
    /// Events per slice, `N`.
    pub window_size: usize,
    /// Publication period in seconds.
    pub interval: f64,
    /// Normalized per-event increment, `0 < c <= 1`.
    pub contribution: f64,
    pub polarity_mode: PolarityMode,
    pub decay: Decay,
    /// Hold the previous frame when fewer events than this arrive in an
    /// interval. Zero disables the hold.
    pub no_motion_threshold: usize,
    /// Phase of the publication clock. `None` starts at the first event.
    pub start_time: Option<f64>,
}

impl Default for AccumulatorConfig {
    fn default() -> Self {
        Self {
            slice_method: SliceMethod::ByTimeAndNumber,
            window_size: 10_000,
            interval: 1.0 / 30.0,
            contribution: 0.2,
            polarity_mode: PolarityMode::Rectified,
            decay: Decay::Step,
            no_motion_threshold: 0,
            start_time: None,
        }
    }
}

impl AccumulatorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.window_size == 0 {
            return bad("window size must be at least 1".into());
        }
        if self.slice_method.uses_time() && !(self.interval > 0.0 && self.interval.is_finite()) {
            return bad(format!("interval must be positive, got {}", self.interval));
        }
        if !(self.contribution > 0.0 && self.contribution <= 1.0) {
            return bad(format!(
                "contribution must lie in (0, 1], got {}",
                self.contribution
            ));
        }
        match self.decay {
            Decay::Linear { rate } if !(rate > 0.0 && rate.is_finite()) => {
                return bad(format!("linear decay rate must be positive, got {rate}"))
            }
            Decay::Exponential { tau } if !(tau > 0.0 && tau.is_finite()) => {
                return bad(format!("exponential decay tau must be positive, got {tau}"))
            }
            _ => {}
        }
        if let Some(t0) = self.start_time {
            if !t0.is_finite() {
                return bad(format!("start time must be finite, got {t0}"));
            }
        }
        Ok(())
    }
}

/// Event window size for a target density: `round(density * width * height)`,
/// at least one event.
pub fn window_size_for(events_per_pixel: f64, geometry: SensorGeometry) -> Result<usize> {
    if !(events_per_pixel > 0.0 && events_per_pixel.is_finite()) {
        return Err(Error::NonPositiveDensity(events_per_pixel));
    }
    let n = (events_per_pixel * geometry.width() as f64 * geometry.height() as f64).round();
    Ok((n as usize).max(1))
}

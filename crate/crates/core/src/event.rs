//! The atomic stream element and the sensor it comes from.

use crate::error::{Error, Result};

/// Direction of the brightness change that fired an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    #[inline]
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    /// Polarity of a signed quantity; zero maps to `Positive`.
    #[inline]
    pub fn of(value: f64) -> Self {
        if value < 0.0 {
            Polarity::Negative
        } else {
            Polarity::Positive
        }
    }
}

/// A single sensor output: timestamp in seconds, pixel column/row, polarity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub t: f64,
    pub x: u16,
    pub y: u16,
    pub polarity: Polarity,
}

impl Event {
    #[inline]
    pub fn new(t: f64, x: u16, y: u16, polarity: Polarity) -> Self {
        Self { t, x, y, polarity }
    }

    pub fn with_polarity(self, polarity: Polarity) -> Self {
        Self { polarity, ..self }
    }
}

/// Pixel dimensions of the event sensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SensorGeometry {
    width: u16,
    height: u16,
}

impl SensorGeometry {
    /// DAVIS240: 240x180.
    pub const DAVIS240: SensorGeometry = SensorGeometry {
        width: 240,
        height: 180,
    };
    /// DAVIS346: 346x260.
    pub const DAVIS346: SensorGeometry = SensorGeometry {
        width: 346,
        height: 260,
    };

    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 || width > u16::MAX as u32 || height > u16::MAX as u32 {
            return Err(Error::InvalidGeometry { width, height });
        }
        Ok(Self {
            width: width as u16,
            height: height as u16,
        })
    }

    #[inline]
    pub fn width(&self) -> u16 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u16 {
        self.height
    }

    #[inline]
    pub fn area(&self) -> usize {
        self.width as usize * self.height as usize
    }

    #[inline]
    pub fn contains(&self, x: u32, y: u32) -> bool {
        x < self.width as u32 && y < self.height as u32
    }

    /// Row-major pixel index, or an error when the event lies off-sensor.
    #[inline]
    pub fn index_of(&self, event: &Event) -> Result<usize> {
        if event.x < self.width && event.y < self.height {
            Ok(event.y as usize * self.width as usize + event.x as usize)
        } else {
            Err(Error::OutOfBounds {
                x: event.x as u32,
                y: event.y as u32,
                width: self.width,
                height: self.height,
            })
        }
    }
}

impl std::str::FromStr for SensorGeometry {
    type Err = Error;

    /// Parses `WxH`, e.g. `240x180`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("geometry '{s}' is not of the form WxH"));
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let w: u32 = w.trim().parse().map_err(|_| bad())?;
        let h: u32 = h.trim().parse().map_err(|_| bad())?;
        SensorGeometry::new(w, h)
    }
}

impl std::fmt::Display for SensorGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Checks the stream-level invariants: in-bounds coordinates and
/// non-decreasing timestamps.
pub fn validate_stream(events: &[Event], geometry: SensorGeometry) -> Result<()> {
    let mut previous = f64::NEG_INFINITY;
    for ev in events {
        geometry.index_of(ev)?;
        if ev.t < previous {
            return Err(Error::NonMonotonic {
                previous,
                current: ev.t,
            });
        }
        previous = ev.t;
    }
    Ok(())
}

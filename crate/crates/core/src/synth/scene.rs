use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::event::SensorGeometry;

/// Log-brightness field sampled on the sensor grid. Off-grid positions are
/// bilinearly interpolated; positions beyond the border take the nearest
/// border sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticScene {
    geometry: SensorGeometry,
    samples: Vec<f64>,
}

impl SyntheticScene {
    pub fn from_samples(geometry: SensorGeometry, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != geometry.area() {
            return Err(Error::InvalidSynth(format!(
                "scene has {} samples, geometry {geometry} needs {}",
                samples.len(),
                geometry.area()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSynth(
                "scene contains non-finite samples".into(),
            ));
        }
        Ok(Self { geometry, samples })
    }

    fn from_fn(geometry: SensorGeometry, f: impl Fn(usize, usize) -> f64) -> Self {
        let w = geometry.width() as usize;
        let samples = (0..geometry.area()).map(|i| f(i % w, i / w)).collect();
        Self { geometry, samples }
    }

    pub fn constant(geometry: SensorGeometry, level: f64) -> Self {
        Self::from_fn(geometry, |_, _| level)
    }

    /// A single vertical edge: columns `< column` hold `left`, the rest `right`.
    pub fn step_edge(geometry: SensorGeometry, column: usize, left: f64, right: f64) -> Self {
        Self::from_fn(geometry, |x, _| if x < column { left } else { right })
    }

    /// Two rising vertical edges of equal height `step` but different
    /// sharpness: a hard step at `sharp_column` and a linear ramp
    /// `blur_width` pixels wide starting at `blurred_column`.
    pub fn bars(
        geometry: SensorGeometry,
        sharp_column: usize,
        blurred_column: usize,
        blur_width: usize,
        low: f64,
        step: f64,
    ) -> Self {
        let blur = blur_width.max(1) as f64;
        Self::from_fn(geometry, |x, _| {
            let sharp = if x >= sharp_column { step } else { 0.0 };
            let ramp = ((x as f64 - blurred_column as f64 + 1.0) / blur).clamp(0.0, 1.0) * step;
            low + sharp + ramp
        })
    }

    pub fn checker(geometry: SensorGeometry, square: usize, low: f64, high: f64) -> Self {
        let sq = square.max(1);
        Self::from_fn(geometry, |x, y| {
            if (x / sq + y / sq).is_multiple_of(2) {
                low
            } else {
                high
            }
        })
    }

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    fn at(&self, x: isize, y: isize) -> f64 {
        let w = self.geometry.width() as isize;
        let h = self.geometry.height() as isize;
        let x = x.clamp(0, w - 1) as usize;
        let y = y.clamp(0, h - 1) as usize;
        self.samples[y * w as usize + x]
    }

    /// Bilinear sample at continuous position `(u, v)`.
    #[inline]
    pub fn sample(&self, u: f64, v: f64) -> f64 {
        let x0 = u.floor();
        let y0 = v.floor();
        let fx = u - x0;
        let fy = v - y0;
        let (x0, y0) = (x0 as isize, y0 as isize);
        let top = self.at(x0, y0) * (1.0 - fx) + self.at(x0 + 1, y0) * fx;
        if fy == 0.0 {
            return top;
        }
        let bottom = self.at(x0, y0 + 1) * (1.0 - fx) + self.at(x0 + 1, y0 + 1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Central-difference brightness gradient at an integer pixel.
    pub fn gradient(&self, x: usize, y: usize) -> (f64, f64) {
        let (x, y) = (x as isize, y as isize);
        (
            (self.at(x + 1, y) - self.at(x - 1, y)) / 2.0,
            (self.at(x, y + 1) - self.at(x, y - 1)) / 2.0,
        )
    }
}

/// Built-in scene families exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SceneKind {
    StepEdge,
    Bars,
    Checker,
}

impl FromStr for SceneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "step-edge" => Ok(SceneKind::StepEdge),
            "bars" => Ok(SceneKind::Bars),
            "checker" => Ok(SceneKind::Checker),
            other => Err(Error::InvalidSynth(format!(
                "unknown scene '{other}', expected step-edge|bars|checker"
            ))),
        }
    }
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SceneKind::StepEdge => "step-edge",
            SceneKind::Bars => "bars",
            SceneKind::Checker => "checker",
        })
    }
}

/// Parameters for a built-in scene.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SceneSpec {
    pub kind: SceneKind,
    /// Log-brightness height of each edge.
    pub edge_height: f64,
    /// Edge column for step-edge, sharp-edge column for bars, square size
    /// for checker.
    pub position: usize,
}

impl SceneSpec {
    pub fn build(&self, geometry: SensorGeometry) -> SyntheticScene {
        let w = geometry.width() as usize;
        match self.kind {
            // Bright on the left; moving right brightens the swept pixels.
            SceneKind::StepEdge => {
                SyntheticScene::step_edge(geometry, self.position, self.edge_height, 0.0)
            }
            SceneKind::Bars => {
                let blurred = (self.position + w / 4).min(w.saturating_sub(1));
                SyntheticScene::bars(geometry, self.position, blurred, 6, 0.0, self.edge_height)
            }
            SceneKind::Checker => {
                SyntheticScene::checker(geometry, self.position, 0.0, self.edge_height)
            }
        }
    }
}

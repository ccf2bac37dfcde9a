use crate::error::{Error, Result};
use crate::event::{Event, Polarity};

use super::scene::SyntheticScene;

/// Relative slack on threshold comparisons so that increments landing on an
/// exact multiple of the threshold still fire despite float rounding
/// (`0.6 / 0.2` is not exactly 3 in binary).
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

/// Constant image-plane velocity held for a duration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionSegment {
    /// Pixels per second, `[vx, vy]`.
    pub velocity: [f64; 2],
    /// Seconds.
    pub duration: f64,
}

/// Piecewise-constant planar scene velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionProfile {
    segments: Vec<MotionSegment>,
}

impl MotionProfile {
    pub fn new(segments: Vec<MotionSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSynth("motion profile has no segments".into()));
        }
        for s in &segments {
            if !(s.duration > 0.0 && s.duration.is_finite())
                || !s.velocity.iter().all(|v| v.is_finite())
            {
                return Err(Error::InvalidSynth(format!("invalid motion segment {s:?}")));
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(velocity: [f64; 2], duration: f64) -> Result<Self> {
        Self::new(vec![MotionSegment { velocity, duration }])
    }

    pub fn segments(&self) -> &[MotionSegment] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn max_speed(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.velocity[0].hypot(s.velocity[1]))
            .fold(0.0, f64::max)
    }

    /// Same path traversed `factor` times faster.
    pub fn sped_up(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.segments
                .iter()
                .map(|s| MotionSegment {
                    velocity: [s.velocity[0] * factor, s.velocity[1] * factor],
                    duration: s.duration / factor,
                })
                .collect(),
        )
    }

    /// Scene displacement accumulated by time `t`.
    pub fn displacement_at(&self, t: f64) -> [f64; 2] {
        let mut d = [0.0, 0.0];
        let mut start = 0.0;
        for s in &self.segments {
            if t <= start {
                break;
            }
            let dt = (t - start).min(s.duration);
            d[0] += s.velocity[0] * dt;
            d[1] += s.velocity[1] * dt;
            start += s.duration;
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensorModel {
    /// Log-intensity contrast threshold `C`.
    pub contrast_threshold: f64,
    /// Background activity, events per pixel per second.
    pub noise_rate: f64,
    pub seed: u64,
}

impl SensorModel {
    pub fn noiseless(contrast_threshold: f64) -> Self {
        Self {
            contrast_threshold,
            noise_rate: 0.0,
            seed: 0,
        }
    }
}

/// Events per pixel released by a monotone brightness change of `edge_height`.
pub fn expected_event_count(edge_height: f64, contrast_threshold: f64) -> u64 {
    if edge_height.is_nan()
        || edge_height <= 0.0
        || contrast_threshold.is_nan()
        || contrast_threshold <= 0.0
    {
        return 0;
    }
    ((edge_height / contrast_threshold) * (1.0 + THRESHOLD_TOLERANCE)).floor() as u64
}

/// Simulates the scene translating under `motion` and emits an event each
/// time a pixel's log brightness moves a full threshold away from its value
/// at the previous event. Timestamps are the sub-step times `i * time_step`.
pub fn generate_events(
    scene: &SyntheticScene,
    motion: &MotionProfile,
    sensor: &SensorModel,
    time_step: f64,
) -> Result<Vec<Event>> {
    let c = sensor.contrast_threshold;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidSynth(format!(
            "contrast threshold must be positive, got {c}"
        )));
    }
    if !(time_step > 0.0 && time_step.is_finite()) {
        return Err(Error::InvalidSynth(format!(
            "time step must be positive, got {time_step}"
        )));
    }
    if motion.max_speed() * time_step >= 0.5 {
        return Err(Error::InvalidSynth(format!(
            "time step {time_step}s moves the scene {:.3} px per step, must stay below 0.5 px",
            motion.max_speed() * time_step
        )));
    }

    let geometry = scene.geometry();
    let w = geometry.width() as usize;
    let trigger = c * (1.0 - THRESHOLD_TOLERANCE);
    let reference = scene.samples().to_vec();
    let mut quanta = vec![0i64; geometry.area()];
    let mut events = Vec::new();

    let duration = motion.duration();
    let steps = (duration / time_step).ceil() as u64;
    for i in 1..=steps {
        let t = (i as f64 * time_step).min(duration);
        let [dx, dy] = motion.displacement_at(t);
        for (idx, q) in quanta.iter_mut().enumerate() {
            let (x, y) = (idx % w, idx / w);
            let now = scene.sample(x as f64 - dx, y as f64 - dy);
            loop {
                let residual = now - (reference[idx] + *q as f64 * c);
                let polarity = if residual >= trigger {
                    *q += 1;
                    Polarity::Positive
                } else if residual <= -trigger {
                    *q -= 1;
                    Polarity::Negative
                } else {
                    break;
                };
                events.push(Event::new(t, x as u16, y as u16, polarity));
            }
        }
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::SensorGeometry;

    fn g(w: u32, h: u32) -> SensorGeometry {
        SensorGeometry::new(w, h).unwrap()
    }

    #[test]
    fn expected_count_examples() {
        assert_eq!(expected_event_count(1.0, 0.2), 5);
        assert_eq!(expected_event_count(0.19, 0.2), 0);
        assert_eq!(expected_event_count(0.2, 0.2), 1);
        assert_eq!(expected_event_count(0.6, 0.2), 3);
        assert_eq!(expected_event_count(0.0, 0.2), 0);
    }

    #[test]
    fn constant_scene_is_silent() {
        let scene = SyntheticScene::constant(g(8, 8), 0.7);
        let motion = MotionProfile::constant([40.0, -25.0], 0.5).unwrap();
        let evs = generate_events(&scene, &motion, &SensorModel::noiseless(0.1), 0.001).unwrap();
        assert!(evs.is_empty());
    }

    #[test]
    fn rejects_coarse_time_step() {
        let scene = SyntheticScene::constant(g(4, 4), 0.0);
        let motion = MotionProfile::constant([100.0, 0.0], 0.1).unwrap();
        assert!(generate_events(&scene, &motion, &SensorModel::noiseless(0.2), 0.005).is_err());
        assert!(generate_events(&scene, &motion, &SensorModel::noiseless(0.0), 0.001).is_err());
    }

    #[test]
    fn displacement_is_piecewise_linear() {
        let m = MotionProfile::new(vec![
            MotionSegment {
                velocity: [10.0, 0.0],
                duration: 1.0,
            },
            MotionSegment {
                velocity: [-5.0, 2.0],
                duration: 2.0,
            },
        ])
        .unwrap();
        assert_eq!(m.duration(), 3.0);
        assert_eq!(m.displacement_at(0.5), [5.0, 0.0]);
        assert_eq!(m.displacement_at(2.0), [5.0, 2.0]);
        assert_eq!(m.displacement_at(10.0), [0.0, 4.0]);
    }

    #[test]
    fn same_inputs_same_stream() {
        let scene = SyntheticScene::checker(g(16, 12), 4, 0.0, 0.5);
        let motion = MotionProfile::constant([30.0, 20.0], 0.3).unwrap();
        let s = SensorModel::noiseless(0.15);
        let a = generate_events(&scene, &motion, &s, 0.002).unwrap();
        let b = generate_events(&scene, &motion, &s, 0.002).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}

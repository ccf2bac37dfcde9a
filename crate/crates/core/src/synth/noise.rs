//! Background activity: a homogeneous Poisson process on every pixel with
//! independent, uniformly random polarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::event::{Event, Polarity, SensorGeometry};

use super::generate::SensorModel;

/// Noise events over `[start, end)`, sorted by time. The superposition of
/// `area` independent Poisson processes is drawn as one Poisson total with
/// uniform pixels and times.
pub fn noise_events(
    geometry: SensorGeometry,
    rate: f64,
    seed: u64,
    start: f64,
    end: f64,
) -> Vec<Event> {
    let span = end - start;
    if rate.is_nan() || rate <= 0.0 || span.is_nan() || span <= 0.0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = rate * span * geometry.area() as f64;
    let count = Poisson::new(mean)
        .map(|p| p.sample(&mut rng) as usize)
        .unwrap_or(0);
    let mut events: Vec<Event> = (0..count)
        .map(|_| {
            let t = start + rng.random::<f64>() * span;
            let x = rng.random_range(0..geometry.width());
            let y = rng.random_range(0..geometry.height());
            let p = if rng.random::<bool>() {
                Polarity::Positive
            } else {
                Polarity::Negative
            };
            Event::new(t.min(end.next_down()), x, y, p)
        })
        .collect();
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    events
}

/// Merges two time-ordered streams; on equal timestamps `a` goes first.
pub fn merge_streams(a: &[Event], b: &[Event]) -> Vec<Event> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if b[j].t < a[i].t {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Superimposes noise at `sensor.noise_rate` over `[0, duration)`.
pub fn add_noise(
    stream: &[Event],
    geometry: SensorGeometry,
    sensor: &SensorModel,
    duration: f64,
) -> Vec<Event> {
    add_noise_between(stream, geometry, sensor, 0.0, duration)
}

pub fn add_noise_between(
    stream: &[Event],
    geometry: SensorGeometry,
    sensor: &SensorModel,
    start: f64,
    end: f64,
) -> Vec<Event> {
    let noise = noise_events(geometry, sensor.noise_rate, sensor.seed, start, end);
    if noise.is_empty() {
        return stream.to_vec();
    }
    merge_streams(stream, &noise)
}

//! Inputs shared by the criterion benchmarks.

use evframe::synth::{generate_events, MotionProfile, SensorModel, SyntheticScene};
use evframe::{Event, SensorGeometry};

/// A checkerboard drifting diagonally across a DAVIS240 sensor.
pub fn checker_stream(duration: f64) -> (SensorGeometry, Vec<Event>) {
    let g = SensorGeometry::DAVIS240;
    let scene = SyntheticScene::checker(g, 12, 0.0, 0.6);
    let motion = MotionProfile::constant([60.0, 40.0], duration).expect("valid motion");
    let events =
        generate_events(&scene, &motion, &SensorModel::noiseless(0.2), 2e-3).expect("valid synth");
    (g, events)
}

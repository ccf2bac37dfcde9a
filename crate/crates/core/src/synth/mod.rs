//! Ground-truth event streams from a contrast-threshold sensor model.
//!
//! A pixel fires whenever its log brightness has moved by the contrast
//! threshold `C` since its previous event; the polarity is the direction of
//! the move. Scenes are log-brightness images translated across the sensor,
//! so every event is caused by a brightness gradient moving over a pixel.

mod generate;
mod noise;
mod scene;

pub use generate::{
    expected_event_count, generate_events, MotionProfile, MotionSegment, SensorModel,
    THRESHOLD_TOLERANCE,
};
pub use noise::{add_noise, add_noise_between, merge_streams, noise_events};
pub use scene::{SceneKind, SceneSpec, SyntheticScene};

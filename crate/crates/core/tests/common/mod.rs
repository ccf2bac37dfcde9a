#![allow(dead_code)]

use evframe::{Event, Polarity, SensorGeometry};
use proptest::prelude::*;

pub fn geometry() -> SensorGeometry {
    SensorGeometry::new(8, 6).unwrap()
}

/// Time-ordered events on the 8x6 test sensor. Timestamps advance on a
/// millisecond lattice with frequent repeats so ties are exercised.
pub fn stream(max_len: usize) -> impl Strategy<Value = Vec<Event>> {
    proptest::collection::vec((0u32..4, 0u16..8, 0u16..6, any::<bool>()), 1..max_len).prop_map(
        |raw| {
            let mut tick = 0u32;
            raw.into_iter()
                .map(|(step, x, y, positive)| {
                    tick += step;
                    let p = if positive {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    };
                    Event::new(tick as f64 * 1e-3, x, y, p)
                })
                .collect()
        },
    )
}

use evframe::synth::{
    add_noise, expected_event_count, generate_events, MotionProfile, MotionSegment, SensorModel,
    SyntheticScene,
};
use evframe::{Event, Polarity, SensorGeometry};
use proptest::prelude::*;

fn geometry() -> SensorGeometry {
    SensorGeometry::new(40, 4).unwrap()
}

fn per_pixel(events: &[Event], g: SensorGeometry) -> Vec<usize> {
    let mut counts = vec![0; g.area()];
    for e in events {
        counts[g.index_of(e).unwrap()] += 1;
    }
    counts
}

#[test]
fn step_edge_fires_three_events_per_crossed_pixel() {
    let g = geometry();
    let scene = SyntheticScene::step_edge(g, 5, 0.6, 0.0);
    let motion = MotionProfile::constant([50.0, 0.0], 0.4).unwrap();
    let sensor = SensorModel::noiseless(0.2);
    let expected = expected_event_count(0.6, 0.2) as usize;
    assert_eq!(expected, 3);
    for ts in [2e-3, 1e-3, 5e-4] {
        let events = generate_events(&scene, &motion, &sensor, ts).unwrap();
        let counts = per_pixel(&events, g);
        // The edge sweeps 20 columns starting at column 5.
        for y in 0..4 {
            for x in 0..40 {
                let want = if (5..25).contains(&x) { expected } else { 0 };
                assert_eq!(counts[y * 40 + x], want, "pixel ({x},{y}) at step {ts}");
            }
        }
        assert!(events.iter().all(|e| e.polarity == Polarity::Positive));
    }
}

#[test]
fn noise_is_seeded() {
    let g = geometry();
    let sensor = SensorModel {
        contrast_threshold: 0.2,
        noise_rate: 5.0,
        seed: 9,
    };
    let a = add_noise(&[], g, &sensor, 1.0);
    let b = add_noise(&[], g, &sensor, 1.0);
    assert_eq!(a, b);
    let c = add_noise(&[], g, &SensorModel { seed: 10, ..sensor }, 1.0);
    assert_ne!(a, c);
}

fn profiles() -> impl Strategy<Value = MotionProfile> {
    proptest::collection::vec(((-60.0f64..60.0), (-20.0f64..20.0), (0.05f64..0.3)), 1..3).prop_map(
        |segs| {
            MotionProfile::new(
                segs.into_iter()
                    .map(|(vx, vy, d)| MotionSegment {
                        velocity: [vx, vy],
                        duration: d,
                    })
                    .collect(),
            )
            .unwrap()
        },
    )
}

fn random_scene() -> impl Strategy<Value = SyntheticScene> {
    proptest::collection::vec(0.0f64..1.0, 40 * 4)
        .prop_map(|s| SyntheticScene::from_samples(geometry(), s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn faster_motion_compresses_time(scene in random_scene(), motion in profiles()) {
        let sensor = SensorModel::noiseless(0.15);
        let slow = generate_events(&scene, &motion, &sensor, 2e-3).unwrap();
        let fast = generate_events(&scene, &motion.sped_up(2.0).unwrap(), &sensor, 1e-3).unwrap();
        prop_assert_eq!(slow.len(), fast.len());
        for (s, f) in slow.iter().zip(&fast) {
            prop_assert_eq!((s.x, s.y, s.polarity), (f.x, f.y, f.polarity));
            prop_assert!((s.t / 2.0 - f.t).abs() < 1e-12);
        }
    }

    #[test]
    fn net_polarity_telescopes(scene in random_scene(), motion in profiles()) {
        let c = 0.15;
        let g = geometry();
        let events = generate_events(&scene, &motion, &SensorModel::noiseless(c), 1e-3).unwrap();
        let mut net = vec![0i64; g.area()];
        for e in &events {
            net[g.index_of(e).unwrap()] += e.polarity.sign() as i64;
        }
        let [dx, dy] = motion.displacement_at(motion.duration());
        for y in 0..4u16 {
            for x in 0..40u16 {
                let before = scene.sample(x as f64, y as f64);
                let after = scene.sample(x as f64 - dx, y as f64 - dy);
                let residual = (after - before) - net[y as usize * 40 + x as usize] as f64 * c;
                prop_assert!(residual.abs() < c * (1.0 + 1e-6), "pixel ({}, {}) residual {}", x, y, residual);
            }
        }
    }

    #[test]
    fn refining_the_step_keeps_edge_counts(speed in 10.0f64..120.0, duration in 0.1f64..0.3) {
        let g = geometry();
        let scene = SyntheticScene::step_edge(g, 3, 0.6, 0.0);
        let motion = MotionProfile::constant([speed, 0.0], duration).unwrap();
        let sensor = SensorModel::noiseless(0.2);
        let coarse = generate_events(&scene, &motion, &sensor, 2e-3).unwrap();
        let fine = generate_events(&scene, &motion, &sensor, 1e-3).unwrap();
        prop_assert_eq!(per_pixel(&coarse, g), per_pixel(&fine, g));
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{ensure, Result};
use evframe::io::write_events;
use evframe::synth::{
    add_noise, generate_events, MotionProfile, MotionSegment, SceneKind, SceneSpec, SensorModel,
};
use evframe::SensorGeometry;

#[derive(clap::Args)]
pub struct Args {
    /// step-edge | bars | checker
    #[arg(long, default_value = "step-edge")]
    scene: SceneKind,
    /// Log-brightness height of each edge.
    #[arg(long, default_value_t = 0.6)]
    height: f64,
    /// Edge column (step-edge, bars) or square size (checker).
    #[arg(long)]
    position: Option<usize>,
    /// Contrast threshold.
    #[arg(long, default_value_t = 0.2)]
    threshold: f64,
    /// Horizontal speed in pixels per second.
    #[arg(long, default_value_t = 100.0)]
    speed: f64,
    /// Vertical speed in pixels per second.
    #[arg(long, default_value_t = 0.0)]
    vertical_speed: f64,
    /// Seconds of motion.
    #[arg(long, default_value_t = 1.0)]
    duration: f64,
    /// Retrace the path at the same speed for another `duration`.
    #[arg(long)]
    reverse: bool,
    /// Seconds without motion appended at the end (noise only).
    #[arg(long, default_value_t = 0.0)]
    still: f64,
    #[arg(long, default_value = "240x180")]
    geometry: SensorGeometry,
    /// Background events per pixel per second.
    #[arg(long, default_value_t = 0.0)]
    noise_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simulation step in seconds.
    #[arg(long, default_value_t = 1e-3)]
    time_step: f64,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn motion(args: &Args) -> Result<MotionProfile> {
    let v = [args.speed, args.vertical_speed];
    let mut segments = vec![MotionSegment {
        velocity: v,
        duration: args.duration,
    }];
    if args.reverse {
        segments.push(MotionSegment {
            velocity: [-v[0], -v[1]],
            duration: args.duration,
        });
    }
    if args.still > 0.0 {
        segments.push(MotionSegment {
            velocity: [0.0, 0.0],
            duration: args.still,
        });
    }
    Ok(MotionProfile::new(segments)?)
}

pub fn run(args: Args) -> Result<()> {
    ensure!(args.noise_rate >= 0.0, "noise rate must be non-negative");
    let default_position = match args.scene {
        SceneKind::Checker => 10,
        _ => args.geometry.width() as usize / 8,
    };
    let spec = SceneSpec {
        kind: args.scene,
        edge_height: args.height,
        position: args.position.unwrap_or(default_position),
    };
    let scene = spec.build(args.geometry);
    let motion = motion(&args)?;
    let sensor = SensorModel {
        contrast_threshold: args.threshold,
        noise_rate: args.noise_rate,
        seed: args.seed,
    };
    let clean = generate_events(&scene, &motion, &sensor, args.time_step)?;
    let events = add_noise(&clean, args.geometry, &sensor, motion.duration());
    log::info!(
        "{} events ({} from noise)",
        events.len(),
        events.len() - clean.len()
    );

    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_events(&mut out, &events)?;
    out.flush()?;
    Ok(())
}

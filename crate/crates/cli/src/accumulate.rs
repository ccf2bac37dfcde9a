use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use evframe::io::{
    frame_file_name, write_index_header, write_index_row, write_pgm, EventReader, FrameIndexEntry,
};
use evframe::presets::preset;
use evframe::{
    window_size_for, AccumulatorConfig, BitDepth, Decay, FramePipeline, PipelineStats,
    PolarityMode, Published, SensorGeometry, SliceMethod,
};
use log::info;

const BATCH: usize = 8192;

#[derive(clap::Args)]
pub struct Args {
    /// Event file, one `t x y p` record per line; `-` reads stdin.
    #[arg(long, short, default_value = "-")]
    input: PathBuf,
    /// Output directory for frames and `index.csv`.
    #[arg(long, short)]
    out: PathBuf,
    /// Sensor size as WIDTHxHEIGHT.
    #[arg(long)]
    geometry: SensorGeometry,
    /// Start from a named preset; explicit flags override it.
    #[arg(long)]
    preset: Option<String>,
    /// number | time | time-number
    #[arg(long)]
    slice: Option<SliceMethod>,
    /// Events per slice.
    #[arg(long, conflicts_with = "events_per_pixel")]
    window_size: Option<usize>,
    /// Window size as events per pixel, scaled by the sensor area.
    #[arg(long)]
    events_per_pixel: Option<f64>,
    /// Publication period in seconds.
    #[arg(long)]
    interval: Option<f64>,
    /// Per-event increment in (0, 1].
    #[arg(long)]
    contribution: Option<f64>,
    /// rectified | signed
    #[arg(long)]
    polarity: Option<PolarityMode>,
    /// step | linear[:RATE] | exp[:TAU]
    #[arg(long)]
    decay: Option<Decay>,
    /// Hold the previous frame when an interval has fewer events; 0 disables.
    #[arg(long)]
    no_motion_threshold: Option<usize>,
    /// Publication clock origin; defaults to the first event time.
    #[arg(long)]
    start_time: Option<f64>,
    /// 8 or 16.
    #[arg(long, default_value_t = 8)]
    bit_depth: u32,
}

fn override_field<T: PartialEq + std::fmt::Debug>(
    name: &str,
    field: &mut T,
    value: Option<T>,
    from_preset: bool,
) {
    if let Some(v) = value {
        if from_preset && *field != v {
            info!("overriding preset {name}: {:?} -> {:?}", field, v);
        }
        *field = v;
    }
}

fn build_config(args: &Args) -> Result<AccumulatorConfig> {
    let from_preset = args.preset.is_some();
    let mut cfg = match &args.preset {
        Some(name) => preset(name)?,
        None => AccumulatorConfig::default(),
    };
    let window = match args.events_per_pixel {
        Some(d) => Some(window_size_for(d, args.geometry)?),
        None => args.window_size,
    };
    override_field(
        "slice method",
        &mut cfg.slice_method,
        args.slice,
        from_preset,
    );
    override_field("window size", &mut cfg.window_size, window, from_preset);
    override_field("interval", &mut cfg.interval, args.interval, from_preset);
    override_field(
        "contribution",
        &mut cfg.contribution,
        args.contribution,
        from_preset,
    );
    override_field(
        "polarity",
        &mut cfg.polarity_mode,
        args.polarity,
        from_preset,
    );
    override_field("decay", &mut cfg.decay, args.decay, from_preset);
    override_field(
        "no-motion threshold",
        &mut cfg.no_motion_threshold,
        args.no_motion_threshold,
        from_preset,
    );
    override_field(
        "start time",
        &mut cfg.start_time,
        args.start_time.map(Some),
        from_preset,
    );
    cfg.validate()?;
    Ok(cfg)
}

struct FrameSink {
    dir: PathBuf,
    index: BufWriter<File>,
    bit_depth: BitDepth,
    written: usize,
}

impl FrameSink {
    fn create(dir: &Path, bit_depth: BitDepth) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut index = BufWriter::new(File::create(dir.join("index.csv"))?);
        write_index_header(&mut index)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            index,
            bit_depth,
            written: 0,
        })
    }

    fn write(&mut self, published: &[Published]) -> Result<()> {
        for p in published {
            let filename = frame_file_name(self.written);
            write_pgm(&p.frame.quantize(self.bit_depth), self.dir.join(&filename))?;
            let entry = FrameIndexEntry {
                stamp: p.frame.stamp,
                filename,
                held: p.frame.held,
            };
            write_index_row(&mut self.index, &entry)?;
            self.written += 1;
        }
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.index.flush()?;
        Ok(())
    }
}

fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin().lock())));
    }
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Box::new(BufReader::with_capacity(1 << 16, file)))
}

fn print_stats(stats: &PipelineStats) {
    println!("events: {}", stats.events);
    println!("frames: {}", stats.frames);
    println!("held_frames: {}", stats.held_frames);
    println!("partial_frames: {}", stats.partial_frames);
    println!(
        "mean_events_per_slice: {:.1}",
        stats.mean_events_per_slice()
    );
    println!(
        "mean_frame_build_ms: {:.4}",
        stats.mean_build_time().as_secs_f64() * 1e3
    );
    println!("throughput_events_per_s: {:.0}", stats.throughput());
}

pub fn run(args: Args) -> Result<()> {
    let cfg = build_config(&args)?;
    let bit_depth = BitDepth::from_bits(args.bit_depth)?;
    info!("accumulating with {cfg:?}");
    let mut pipeline = FramePipeline::new(cfg, args.geometry)?;
    let mut sink = FrameSink::create(&args.out, bit_depth)?;
    let mut reader = EventReader::new(open_input(&args.input)?, args.geometry);
    let mut batch = Vec::with_capacity(BATCH);
    let mut published = Vec::new();
    loop {
        batch.clear();
        for ev in reader.by_ref().take(BATCH) {
            batch.push(ev.with_context(|| format!("reading {}", args.input.display()))?);
        }
        if batch.is_empty() {
            break;
        }
        pipeline.push_batch(&batch, &mut published)?;
        sink.write(&published)?;
        published.clear();
    }
    pipeline.finish(&mut published)?;
    sink.write(&published)?;
    sink.finish()?;
    print_stats(pipeline.stats());
    Ok(())
}

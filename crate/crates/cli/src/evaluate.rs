use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use evframe::eval::{
    contribution_sweep, contribution_sweep_csv, contribution_sweep_stream, polarity_flip_report,
    scaled_windows, side_by_side, speed_invariance_report, window_sweep, window_sweep_csv,
    window_sweep_stream, ReversalSetup, SpeedSetup, CONTRIBUTION_SWEEP_WINDOW, SWEEP_CONTRIBUTIONS,
};
use evframe::io::write_pgm;
use evframe::{
    run_pipeline, AccumulatorConfig, BitDepth, EventFrame, Published, SensorGeometry, SliceMethod,
};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Speed,
    Reversal,
    Window,
    Contribution,
    All,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum, default_value = "all")]
    experiment: Experiment,
    /// Directory for CSV reports and triptychs.
    #[arg(long, short)]
    out: PathBuf,
    /// Also write side-by-side PGM comparisons.
    #[arg(long)]
    triptych: bool,
    #[arg(long, default_value_t = 8)]
    bit_depth: u32,
}

struct Ctx<'a> {
    out: &'a Path,
    triptych: bool,
    bit_depth: BitDepth,
}

impl Ctx<'_> {
    fn csv(&self, name: &str, body: &str) -> Result<()> {
        let path = self.out.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    fn panels(&self, name: &str, frames: &[&EventFrame]) -> Result<()> {
        if !self.triptych || frames.is_empty() {
            return Ok(());
        }
        if let Some(raster) = side_by_side(frames, self.bit_depth, 2) {
            let path = self.out.join(name);
            write_pgm(&raster, &path)?;
            println!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn speed(ctx: &Ctx) -> Result<()> {
    let report = speed_invariance_report(&SpeedSetup::step_edge())?;
    ctx.csv("speed_invariance.csv", &report.summary_csv())?;
    ctx.csv("slice_counts.csv", &report.slice_counts_csv())?;
    for method in [SliceMethod::ByTime, SliceMethod::ByTimeAndNumber] {
        let (Some(slow), Some(fast)) = (report.run(method, 1.0), report.run(method, 2.0)) else {
            continue;
        };
        let k = fast.published.len() / 2;
        if let (Some(f), Some(s)) = (fast.published.get(k), slow.published.get(2 * k + 1)) {
            ctx.panels(&format!("speed_{method}.pgm"), &[&s.frame, &f.frame])?;
        }
    }
    Ok(())
}

fn reversal(ctx: &Ctx) -> Result<()> {
    let report = polarity_flip_report(&ReversalSetup::step_edge())?;
    ctx.csv("reversal.csv", &report.to_csv())?;
    if let Some(pair) = report.pairs.last() {
        let find = |frames: &[Published], t: f64| {
            frames
                .iter()
                .find(|p| (p.frame.stamp - t).abs() < 1e-9)
                .map(|p| p.frame.clone())
        };
        let frames: Vec<EventFrame> = [
            find(&report.rectified, pair.before_stamp),
            find(&report.rectified, pair.after_stamp),
            find(&report.signed, pair.before_stamp),
            find(&report.signed, pair.after_stamp),
        ]
        .into_iter()
        .flatten()
        .collect();
        ctx.panels("reversal.pgm", &frames.iter().collect::<Vec<_>>())?;
    }
    Ok(())
}

fn middle_frames<T: Copy>(
    events: &[evframe::Event],
    geometry: SensorGeometry,
    values: &[T],
    configure: impl Fn(T) -> AccumulatorConfig,
) -> Result<Vec<EventFrame>> {
    values
        .iter()
        .map(|&v| {
            let out = run_pipeline(events, &configure(v), geometry)?;
            Ok(out[out.len() / 2].frame.clone())
        })
        .collect()
}

fn window(ctx: &Ctx) -> Result<()> {
    let (g, events) = window_sweep_stream()?;
    let windows = scaled_windows(g)?;
    let base = AccumulatorConfig::default();
    ctx.csv(
        "window_sweep.csv",
        &window_sweep_csv(&window_sweep(&events, g, &base, &windows)?),
    )?;
    if ctx.triptych {
        let frames = middle_frames(&events, g, &windows, |n| AccumulatorConfig {
            window_size: n,
            ..base.clone()
        })?;
        ctx.panels("window_sweep.pgm", &frames.iter().collect::<Vec<_>>())?;
    }
    Ok(())
}

fn contribution(ctx: &Ctx) -> Result<()> {
    let (g, events) = contribution_sweep_stream()?;
    let base = AccumulatorConfig {
        window_size: CONTRIBUTION_SWEEP_WINDOW,
        ..Default::default()
    };
    let rows = contribution_sweep(&events, g, &base, &SWEEP_CONTRIBUTIONS, ctx.bit_depth)?;
    ctx.csv("contribution_sweep.csv", &contribution_sweep_csv(&rows))?;
    if ctx.triptych {
        let frames = middle_frames(&events, g, &SWEEP_CONTRIBUTIONS, |c| AccumulatorConfig {
            contribution: c,
            ..base.clone()
        })?;
        ctx.panels("contribution_sweep.pgm", &frames.iter().collect::<Vec<_>>())?;
    }
    Ok(())
}

pub fn run(args: Args) -> Result<()> {
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let ctx = Ctx {
        out: &args.out,
        triptych: args.triptych,
        bit_depth: BitDepth::from_bits(args.bit_depth)?,
    };
    let all = args.experiment == Experiment::All;
    if all || args.experiment == Experiment::Speed {
        speed(&ctx)?;
    }
    if all || args.experiment == Experiment::Reversal {
        reversal(&ctx)?;
    }
    if all || args.experiment == Experiment::Window {
        window(&ctx)?;
    }
    if all || args.experiment == Experiment::Contribution {
        contribution(&ctx)?;
    }
    Ok(())
}

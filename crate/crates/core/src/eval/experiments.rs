use std::fmt::Write as _;

use crate::config::{AccumulatorConfig, Decay, PolarityMode, SliceMethod};
use crate::error::{Error, Result};
use crate::event::{Event, SensorGeometry};
use crate::frame::{neutral_value, BitDepth, EventFrame};
use crate::pipeline::{run_pipeline, Published};
use crate::synth::{
    generate_events, MotionProfile, MotionSegment, SceneKind, SceneSpec, SensorModel,
    SyntheticScene,
};

use super::metrics::{distinct_levels, fill_ratio, ncc, saturation_fraction};

fn base_config(
    method: SliceMethod,
    window_size: usize,
    interval: f64,
    contribution: f64,
) -> AccumulatorConfig {
    AccumulatorConfig {
        slice_method: method,
        window_size,
        interval,
        contribution,
        polarity_mode: PolarityMode::Rectified,
        decay: Decay::Step,
        no_motion_threshold: 0,
        start_time: Some(0.0),
    }
}

/// NCC scores between aligned frames of two runs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairScore {
    pub slow: f64,
    pub fast: f64,
    pub scores: Vec<f64>,
    /// Aligned pairs skipped because a frame was constant.
    pub degenerate: usize,
}

impl PairScore {
    pub fn mean(&self) -> Option<f64> {
        (!self.scores.is_empty())
            .then(|| self.scores.iter().sum::<f64>() / self.scores.len() as f64)
    }

    pub fn min(&self) -> Option<f64> {
        self.scores.iter().copied().reduce(f64::min)
    }
}

/// Cross-speed similarity for one slicing method.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityReport {
    pub method: SliceMethod,
    pub pairs: Vec<PairScore>,
}

impl SimilarityReport {
    /// Mean over every scored frame pair.
    pub fn mean(&self) -> Option<f64> {
        let n: usize = self.pairs.iter().map(|p| p.scores.len()).sum();
        let sum: f64 = self.pairs.iter().flat_map(|p| &p.scores).sum();
        (n > 0).then(|| sum / n as f64)
    }

    pub fn min(&self) -> Option<f64> {
        self.pairs
            .iter()
            .filter_map(PairScore::min)
            .reduce(f64::min)
    }

    pub fn compared(&self) -> usize {
        self.pairs.iter().map(|p| p.scores.len()).sum()
    }

    pub fn degenerate(&self) -> usize {
        self.pairs.iter().map(|p| p.degenerate).sum()
    }
}

/// Frames of one method at one speed factor.
#[derive(Clone, Debug)]
pub struct SpeedRun {
    pub method: SliceMethod,
    pub speed: f64,
    pub published: Vec<Published>,
}

#[derive(Clone, Debug)]
pub struct SpeedSetup {
    pub scene: SyntheticScene,
    /// Motion at speed factor 1.
    pub base_motion: MotionProfile,
    pub contrast_threshold: f64,
    /// Simulation step at speed factor 1; divided by the factor at other speeds.
    pub base_time_step: f64,
    pub interval: f64,
    pub window_size: usize,
    pub contribution: f64,
    pub speed_factors: Vec<f64>,
}

impl SpeedSetup {
    /// A 128x32 step edge crossing 100 columns at 100 px/s, compared with
    /// the same motion at twice the speed. The window holds six edge
    /// columns' worth of events.
    pub fn step_edge() -> Self {
        let geometry = SensorGeometry::new(128, 32).expect("valid geometry");
        Self {
            scene: SyntheticScene::step_edge(geometry, 8, 0.6, 0.0),
            base_motion: MotionProfile::constant([100.0, 0.0], 1.0).expect("valid motion"),
            contrast_threshold: 0.2,
            base_time_step: 1e-3,
            interval: 0.02,
            window_size: 32 * 3 * 6,
            contribution: 0.2,
            speed_factors: vec![1.0, 2.0],
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpeedReport {
    pub by_time: SimilarityReport,
    pub by_time_and_number: SimilarityReport,
    pub runs: Vec<SpeedRun>,
}

impl SpeedReport {
    pub fn run(&self, method: SliceMethod, speed: f64) -> Option<&SpeedRun> {
        self.runs
            .iter()
            .find(|r| r.method == method && r.speed == speed)
    }

    /// `method,slow,fast,compared,degenerate,mean_ncc,min_ncc`
    pub fn summary_csv(&self) -> String {
        let mut s = String::from("method,slow,fast,compared,degenerate,mean_ncc,min_ncc\n");
        for report in [&self.by_time, &self.by_time_and_number] {
            for p in &report.pairs {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    report.method,
                    p.slow,
                    p.fast,
                    p.scores.len(),
                    p.degenerate,
                    fmt_opt(p.mean()),
                    fmt_opt(p.min())
                );
            }
        }
        s
    }

    /// Per-frame slice sizes: `method,speed,frame,stamp,slice_events,partial`.
    pub fn slice_counts_csv(&self) -> String {
        let mut s = String::from("method,speed,frame,stamp,slice_events,partial\n");
        for run in &self.runs {
            for (k, p) in run.published.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{:.9},{},{}",
                    run.method, run.speed, k, p.frame.stamp, p.slice_events, p.partial as u8
                );
            }
        }
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn ratio_index(k: usize, ratio: f64) -> Option<usize> {
    let scaled = k as f64 * ratio;
    let rounded = scaled.round();
    ((scaled - rounded).abs() < 1e-9 && rounded >= 1.0).then_some(rounded as usize)
}

/// Frame `k` of the faster run is paired with frame `k * fast / slow` of the
/// slower one; with a shared interval and start both cover the same scene
/// displacement at their stamps.
fn score_pair(slow: &SpeedRun, fast: &SpeedRun) -> PairScore {
    let ratio = fast.speed / slow.speed;
    let mut out = PairScore {
        slow: slow.speed,
        fast: fast.speed,
        ..Default::default()
    };
    for (i, f) in fast.published.iter().enumerate() {
        let Some(j) = ratio_index(i + 1, ratio) else {
            continue;
        };
        let Some(s) = slow.published.get(j - 1) else {
            break;
        };
        match ncc(&s.frame, &f.frame) {
            Ok(v) => out.scores.push(v),
            Err(Error::Degenerate) => out.degenerate += 1,
            Err(_) => unreachable!("runs share a geometry"),
        }
    }
    out
}

pub fn speed_invariance_report(setup: &SpeedSetup) -> Result<SpeedReport> {
    if setup.speed_factors.len() < 2 {
        return Err(Error::InvalidConfig(
            "speed invariance needs at least two speeds".into(),
        ));
    }
    if setup
        .speed_factors
        .iter()
        .any(|&f| !(f > 0.0 && f.is_finite()))
    {
        return Err(Error::InvalidConfig(
            "speed factors must be positive".into(),
        ));
    }
    let geometry = setup.scene.geometry();
    let sensor = SensorModel::noiseless(setup.contrast_threshold);
    let methods = [SliceMethod::ByTime, SliceMethod::ByTimeAndNumber];
    let mut runs = Vec::new();
    for &speed in &setup.speed_factors {
        let motion = setup.base_motion.sped_up(speed)?;
        let events = generate_events(&setup.scene, &motion, &sensor, setup.base_time_step / speed)?;
        for method in methods {
            let cfg = base_config(
                method,
                setup.window_size,
                setup.interval,
                setup.contribution,
            );
            runs.push(SpeedRun {
                method,
                speed,
                published: run_pipeline(&events, &cfg, geometry)?,
            });
        }
    }
    let mut reports = methods.map(|method| SimilarityReport {
        method,
        pairs: Vec::new(),
    });
    for (a, &sa) in setup.speed_factors.iter().enumerate() {
        for &sb in &setup.speed_factors[a + 1..] {
            let (slow, fast) = if sa <= sb { (sa, sb) } else { (sb, sa) };
            for report in reports.iter_mut() {
                let find = |s: f64| {
                    runs.iter()
                        .find(|r| r.method == report.method && r.speed == s)
                        .unwrap()
                };
                report.pairs.push(score_pair(find(slow), find(fast)));
            }
        }
    }
    let [by_time, by_time_and_number] = reports;
    Ok(SpeedReport {
        by_time,
        by_time_and_number,
        runs,
    })
}

/// Window sizes of 2000, 10000 and 30000 events on a DAVIS240, scaled to
/// the area of `geometry`.
pub fn scaled_windows(geometry: SensorGeometry) -> Result<Vec<usize>> {
    let davis_area = SensorGeometry::DAVIS240.area() as f64;
    [2_000.0, 10_000.0, 30_000.0]
        .iter()
        .map(|n| crate::config::window_size_for(n / davis_area, geometry))
        .collect()
}

/// A 120x90 checkerboard drifting diagonally for 1.5 s.
pub fn window_sweep_stream() -> Result<(SensorGeometry, Vec<Event>)> {
    let g = SensorGeometry::new(120, 90)?;
    let scene = SyntheticScene::checker(g, 10, 0.0, 0.6);
    let motion = MotionProfile::constant([60.0, 40.0], 1.5)?;
    Ok((
        g,
        generate_events(&scene, &motion, &SensorModel::noiseless(0.2), 2e-3)?,
    ))
}

/// A sharp and a blurred edge of equal height crossing a 128x32 sensor.
pub fn contribution_sweep_stream() -> Result<(SensorGeometry, Vec<Event>)> {
    let g = SensorGeometry::new(128, 32)?;
    let scene = SceneSpec {
        kind: SceneKind::Bars,
        edge_height: 0.6,
        position: 20,
    }
    .build(g);
    let motion = MotionProfile::constant([100.0, 0.0], 0.6)?;
    Ok((
        g,
        generate_events(&scene, &motion, &SensorModel::noiseless(0.2), 1e-3)?,
    ))
}

/// Window used with [`contribution_sweep_stream`]: sixteen edge columns.
pub const CONTRIBUTION_SWEEP_WINDOW: usize = 32 * 3 * 16;

/// Contributions compared by the level sweep.
pub const SWEEP_CONTRIBUTIONS: [f64; 5] = [0.1, 0.2, 0.33, 0.5, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct WindowSweepRow {
    pub window_size: usize,
    pub frames: usize,
    pub mean_fill: f64,
    pub mean_saturation: f64,
}

/// Fill and saturation as the window grows. Averages run over the stamps at
/// which even the largest window is full, so every row sees the same frames.
pub fn window_sweep(
    events: &[Event],
    geometry: SensorGeometry,
    base: &AccumulatorConfig,
    windows: &[usize],
) -> Result<Vec<WindowSweepRow>> {
    let Some(&largest) = windows.iter().max() else {
        return Ok(Vec::new());
    };
    let run = |n: usize| {
        run_pipeline(
            events,
            &AccumulatorConfig {
                window_size: n,
                ..base.clone()
            },
            geometry,
        )
    };
    let reference = run(largest)?;
    let keep: Vec<bool> = reference.iter().map(|p| !p.partial).collect();
    windows
        .iter()
        .map(|&n| {
            let published = if n == largest {
                reference.clone()
            } else {
                run(n)?
            };
            let kept: Vec<&EventFrame> = published
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(p, _)| &p.frame)
                .collect();
            let count = kept.len().max(1) as f64;
            Ok(WindowSweepRow {
                window_size: n,
                frames: kept.len(),
                mean_fill: kept.iter().map(|f| fill_ratio(f)).sum::<f64>() / count,
                mean_saturation: kept.iter().map(|f| saturation_fraction(f)).sum::<f64>() / count,
            })
        })
        .collect()
}

pub fn window_sweep_csv(rows: &[WindowSweepRow]) -> String {
    let mut s = String::from("window_size,frames,mean_fill,mean_saturation\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.6},{:.6}",
            r.window_size, r.frames, r.mean_fill, r.mean_saturation
        );
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContributionSweepRow {
    pub contribution: f64,
    pub max_levels: usize,
    pub mean_levels: f64,
    /// Per-frame level counts, in publication order.
    pub levels: Vec<usize>,
}

/// Distinct quantized levels per frame as the per-event contribution varies.
pub fn contribution_sweep(
    events: &[Event],
    geometry: SensorGeometry,
    base: &AccumulatorConfig,
    contributions: &[f64],
    bit_depth: BitDepth,
) -> Result<Vec<ContributionSweepRow>> {
    contributions
        .iter()
        .map(|&c| {
            let cfg = AccumulatorConfig {
                contribution: c,
                ..base.clone()
            };
            let levels: Vec<usize> = run_pipeline(events, &cfg, geometry)?
                .iter()
                .map(|p| distinct_levels(&p.frame, bit_depth))
                .collect();
            let mean = levels.iter().sum::<usize>() as f64 / levels.len().max(1) as f64;
            Ok(ContributionSweepRow {
                contribution: c,
                max_levels: levels.iter().copied().max().unwrap_or(0),
                mean_levels: mean,
                levels,
            })
        })
        .collect()
}

pub fn contribution_sweep_csv(rows: &[ContributionSweepRow]) -> String {
    let mut s = String::from("contribution,frames,max_levels,mean_levels\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.6}",
            r.contribution,
            r.levels.len(),
            r.max_levels,
            r.mean_levels
        );
    }
    s
}

#[derive(Clone, Debug)]
pub struct ReversalSetup {
    pub geometry: SensorGeometry,
    pub edge_column: usize,
    pub edge_height: f64,
    pub contrast_threshold: f64,
    /// Pixels per second, first rightwards then leftwards.
    pub speed: f64,
    /// Duration of each direction.
    pub leg_duration: f64,
    pub time_step: f64,
    pub interval: f64,
    pub window_size: usize,
    pub contribution: f64,
}

impl ReversalSetup {
    /// 96x24 step edge, 40 px out and back at 100 px/s. The window spans
    /// eight edge columns, 0.08 s of motion.
    pub fn step_edge() -> Self {
        Self {
            geometry: SensorGeometry::new(96, 24).expect("valid geometry"),
            edge_column: 16,
            edge_height: 0.6,
            contrast_threshold: 0.2,
            speed: 100.0,
            leg_duration: 0.4,
            time_step: 1e-3,
            interval: 0.02,
            window_size: 24 * 3 * 8,
            contribution: 0.2,
        }
    }

    pub fn events(&self) -> Result<Vec<Event>> {
        let scene =
            SyntheticScene::step_edge(self.geometry, self.edge_column, self.edge_height, 0.0);
        let motion = MotionProfile::new(vec![
            MotionSegment {
                velocity: [self.speed, 0.0],
                duration: self.leg_duration,
            },
            MotionSegment {
                velocity: [-self.speed, 0.0],
                duration: self.leg_duration,
            },
        ])?;
        generate_events(
            &scene,
            &motion,
            &SensorModel::noiseless(self.contrast_threshold),
            self.time_step,
        )
    }

    /// Time for the edge to sweep across one full window.
    fn window_sweep_time(&self) -> f64 {
        let per_column = self.geometry.height() as f64
            * crate::synth::expected_event_count(self.edge_height, self.contrast_threshold) as f64;
        self.window_size as f64 / per_column / self.speed
    }
}

/// One before/after frame pair around the direction reversal.
#[derive(Clone, Debug, PartialEq)]
pub struct ReversalPair {
    pub before_stamp: f64,
    pub after_stamp: f64,
    /// Mean of non-neutral pixels minus 0.5 in signed mode.
    pub signed_before: f64,
    pub signed_after: f64,
    /// Rectified NCC; `None` when a frame is constant.
    pub rectified_ncc: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ReversalReport {
    pub pairs: Vec<ReversalPair>,
    pub signed: Vec<Published>,
    pub rectified: Vec<Published>,
}

impl ReversalReport {
    /// Pairs whose signed means sit on opposite sides of 0.5.
    pub fn sign_flips(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.signed_before * p.signed_after < 0.0)
            .count()
    }

    pub fn mean_ncc(&self) -> Option<f64> {
        let s: Vec<f64> = self.pairs.iter().filter_map(|p| p.rectified_ncc).collect();
        (!s.is_empty()).then(|| s.iter().sum::<f64>() / s.len() as f64)
    }

    pub fn min_ncc(&self) -> Option<f64> {
        self.pairs
            .iter()
            .filter_map(|p| p.rectified_ncc)
            .reduce(f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut s =
            String::from("before_stamp,after_stamp,signed_before,signed_after,rectified_ncc\n");
        for p in &self.pairs {
            let _ = writeln!(
                s,
                "{:.9},{:.9},{:.6},{:.6},{}",
                p.before_stamp,
                p.after_stamp,
                p.signed_before,
                p.signed_after,
                fmt_opt(p.rectified_ncc)
            );
        }
        s
    }
}

/// Mean of non-neutral pixels relative to the signed neutral level.
pub fn signed_edge_mean(frame: &EventFrame) -> f64 {
    let neutral = neutral_value(PolarityMode::Signed);
    let edge: Vec<f64> = frame
        .pixels
        .iter()
        .copied()
        .filter(|&v| v != neutral)
        .collect();
    if edge.is_empty() {
        0.0
    } else {
        edge.iter().sum::<f64>() / edge.len() as f64 - neutral
    }
}

/// Pairs a full frame `tau` before the reversal with the frame `tau` after
/// it plus one window sweep, when the returning edge has re-crossed the same
/// columns. Stamps sit half an interval off the reversal instant so no event
/// lands exactly on a stamp.
pub fn polarity_flip_report(setup: &ReversalSetup) -> Result<ReversalReport> {
    let events = setup.events()?;
    let mut cfg = base_config(
        SliceMethod::ByTimeAndNumber,
        setup.window_size,
        setup.interval,
        setup.contribution,
    );
    cfg.start_time = Some(setup.interval / 2.0);
    let rectified = run_pipeline(&events, &cfg, setup.geometry)?;
    cfg.polarity_mode = PolarityMode::Signed;
    let signed = run_pipeline(&events, &cfg, setup.geometry)?;

    let reversal = setup.leg_duration;
    let sweep = setup.window_sweep_time();
    let mut pairs = Vec::new();
    for (i, before) in rectified.iter().enumerate() {
        let tb = before.frame.stamp;
        if before.partial || tb >= reversal {
            continue;
        }
        let target = 2.0 * reversal - tb + sweep;
        let Some(j) = rectified
            .iter()
            .position(|p| (p.frame.stamp - target).abs() < setup.interval / 4.0)
        else {
            continue;
        };
        pairs.push(ReversalPair {
            before_stamp: tb,
            after_stamp: rectified[j].frame.stamp,
            signed_before: signed_edge_mean(&signed[i].frame),
            signed_after: signed_edge_mean(&signed[j].frame),
            rectified_ncc: ncc(&before.frame, &rectified[j].frame).ok(),
        });
    }
    Ok(ReversalReport {
        pairs,
        signed,
        rectified,
    })
}

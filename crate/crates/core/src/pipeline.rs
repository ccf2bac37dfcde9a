//! Slicer and accumulator wired together, with timing statistics.

use std::time::{Duration, Instant};

use crate::accumulator::Accumulator;
use crate::config::AccumulatorConfig;
use crate::error::Result;
use crate::event::{Event, SensorGeometry};
use crate::frame::EventFrame;
use crate::slicer::{Slice, Slicer};

/// A frame together with what went into it.
#[derive(Clone, Debug, PartialEq)]
pub struct Published {
    pub frame: EventFrame,
    pub slice_events: usize,
    pub interval_events: usize,
    pub partial: bool,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineStats {
    pub events: u64,
    pub frames: u64,
    pub held_frames: u64,
    pub partial_frames: u64,
    pub slice_events: u64,
    /// Time spent building frames from slices.
    pub build_time: Duration,
    /// Time spent in slicing and accumulation together.
    pub busy_time: Duration,
}

impl PipelineStats {
    pub fn mean_events_per_slice(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.slice_events as f64 / self.frames as f64
        }
    }

    pub fn mean_build_time(&self) -> Duration {
        if self.frames == 0 {
            Duration::ZERO
        } else {
            self.build_time / self.frames as u32
        }
    }

    /// Events per second through slicer and accumulator.
    pub fn throughput(&self) -> f64 {
        let secs = self.busy_time.as_secs_f64();
        if secs > 0.0 {
            self.events as f64 / secs
        } else {
            f64::INFINITY
        }
    }
}

pub struct FramePipeline {
    slicer: Slicer,
    accumulator: Accumulator,
    geometry: SensorGeometry,
    pending: Vec<Slice>,
    stats: PipelineStats,
}

impl FramePipeline {
    pub fn new(config: AccumulatorConfig, geometry: SensorGeometry) -> Result<Self> {
        Ok(Self {
            slicer: Slicer::from_config(&config)?,
            accumulator: Accumulator::new(config, geometry)?,
            geometry,
            pending: Vec::new(),
            stats: PipelineStats::default(),
        })
    }

    pub fn config(&self) -> &AccumulatorConfig {
        self.accumulator.config()
    }

    pub fn stats(&self) -> &PipelineStats {
        &self.stats
    }

    /// Feeds a batch of time-ordered events, appending any frames that
    /// became final.
    pub fn push_batch(&mut self, events: &[Event], out: &mut Vec<Published>) -> Result<()> {
        let start = Instant::now();
        for ev in events {
            self.geometry.index_of(ev)?;
            self.slicer.push(*ev, &mut self.pending)?;
            if !self.pending.is_empty() {
                self.drain(out)?;
            }
        }
        self.stats.events += events.len() as u64;
        self.stats.busy_time += start.elapsed();
        Ok(())
    }

    /// End of stream: publishes every stamp up to the last event.
    pub fn finish(&mut self, out: &mut Vec<Published>) -> Result<()> {
        let start = Instant::now();
        self.slicer.finish(&mut self.pending);
        self.drain(out)?;
        self.stats.busy_time += start.elapsed();
        Ok(())
    }

    fn drain(&mut self, out: &mut Vec<Published>) -> Result<()> {
        for slice in self.pending.drain(..) {
            let t = Instant::now();
            let frame = self.accumulator.process(&slice)?;
            self.stats.build_time += t.elapsed();
            self.stats.frames += 1;
            self.stats.held_frames += frame.held as u64;
            self.stats.partial_frames += slice.partial as u64;
            self.stats.slice_events += slice.len() as u64;
            out.push(Published {
                frame,
                slice_events: slice.len(),
                interval_events: slice.interval_event_count,
                partial: slice.partial,
            });
        }
        Ok(())
    }
}

/// Runs a complete in-memory stream through the pipeline.
pub fn run_pipeline(
    events: &[Event],
    config: &AccumulatorConfig,
    geometry: SensorGeometry,
) -> Result<Vec<Published>> {
    let mut pipeline = FramePipeline::new(config.clone(), geometry)?;
    let mut out = Vec::new();
    pipeline.push_batch(events, &mut out)?;
    pipeline.finish(&mut out)?;
    Ok(out)
}

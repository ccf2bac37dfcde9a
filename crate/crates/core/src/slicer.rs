//! Spatio-temporal windows over the event stream.
//!
//! All slicers are push-driven state machines: events go in in timestamp
//! order, slices come out as soon as they are final. A publication time
//! `t_k` becomes final once an event strictly later than `t_k` arrives (so
//! bursts sharing the timestamp `t_k` are all counted), or when the caller
//! declares the stream complete through some time with [`Slicer::advance_to`].
//!
//! Time-based methods publish at `t_k = t0 + k * interval`, `k >= 1`, where
//! the stamp is always computed from `k` directly so it never drifts.

use std::collections::VecDeque;

use crate::config::{AccumulatorConfig, SliceMethod};
use crate::error::{Error, Result};
use crate::event::Event;

/// A window of events selected for one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub events: Vec<Event>,
    /// Stream index of `events[0]`; lets stateful consumers skip events
    /// they already saw in an overlapping previous slice.
    pub first_index: u64,
    pub publish_stamp: f64,
    /// Events that arrived in `(t_{k-1}, t_k]`; the first interval also
    /// absorbs anything at or before `t0`.
    pub interval_event_count: usize,
    /// Fewer than `N` events were available.
    pub partial: bool,
}

impl Slice {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn end_index(&self) -> u64 {
        self.first_index + self.events.len() as u64
    }
}

/// True when an interval carried fewer events than `threshold`.
/// A zero threshold disables detection.
#[inline]
pub fn detect_no_motion(interval_event_count: usize, threshold: usize) -> bool {
    threshold > 0 && interval_event_count < threshold
}

#[derive(Clone, Debug)]
struct Clock {
    t0: Option<f64>,
    interval: f64,
    k: u64,
}

impl Clock {
    fn new(interval: f64, t0: Option<f64>) -> Self {
        Self { t0, interval, k: 1 }
    }

    #[inline]
    fn next_stamp(&self) -> Option<f64> {
        self.t0.map(|t0| t0 + self.k as f64 * self.interval)
    }

    #[inline]
    fn anchor(&mut self, t: f64) {
        if self.t0.is_none() {
            self.t0 = Some(t);
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Order {
    last_t: Option<f64>,
    published: Option<f64>,
    seen: u64,
}

impl Order {
    fn check(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::NonMonotonic {
                previous: self.last_t.unwrap_or(0.0),
                current: t,
            });
        }
        if let Some(prev) = self.last_t {
            if t < prev {
                return Err(Error::NonMonotonic {
                    previous: prev,
                    current: t,
                });
            }
        }
        if let Some(p) = self.published {
            if t <= p {
                return Err(Error::NonMonotonic {
                    previous: p,
                    current: t,
                });
            }
        }
        Ok(())
    }
}

/// Fixed event-count slices; publication stamp is the last event's time.
#[derive(Clone, Debug)]
pub struct NumberSlicer {
    window: usize,
    buffer: Vec<Event>,
    order: Order,
}

impl NumberSlicer {
    pub fn new(window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidConfig(
                "window size must be at least 1".into(),
            ));
        }
        Ok(Self {
            window,
            buffer: Vec::with_capacity(window),
            order: Order::default(),
        })
    }

    pub fn push(&mut self, event: Event, out: &mut Vec<Slice>) -> Result<()> {
        self.order.check(event.t)?;
        self.order.last_t = Some(event.t);
        self.order.seen += 1;
        self.buffer.push(event);
        if self.buffer.len() == self.window {
            let events = std::mem::replace(&mut self.buffer, Vec::with_capacity(self.window));
            out.push(Slice {
                first_index: self.order.seen - self.window as u64,
                publish_stamp: event.t,
                interval_event_count: self.window,
                partial: false,
                events,
            });
        }
        Ok(())
    }

    /// Events waiting for the window to fill.
    pub fn pending(&self) -> &[Event] {
        &self.buffer
    }
}

/// Fixed-interval slices over `[t_{k-1}, t_k)`.
#[derive(Clone, Debug)]
pub struct TimeSlicer {
    clock: Clock,
    bucket: Vec<Event>,
    /// Events stamped exactly `t_k`; they belong to the next slice.
    boundary: Vec<Event>,
    interval_count: usize,
    emitted: u64,
    order: Order,
}

impl TimeSlicer {
    pub fn new(interval: f64, t0: Option<f64>) -> Result<Self> {
        check_interval(interval)?;
        Ok(Self {
            clock: Clock::new(interval, t0),
            bucket: Vec::new(),
            boundary: Vec::new(),
            interval_count: 0,
            emitted: 0,
            order: Order::default(),
        })
    }

    pub fn push(&mut self, event: Event, out: &mut Vec<Slice>) -> Result<()> {
        self.order.check(event.t)?;
        self.clock.anchor(event.t);
        while let Some(stamp) = self.clock.next_stamp().filter(|&s| event.t > s) {
            self.publish(stamp, out);
        }
        let stamp = self.clock.next_stamp().expect("clock anchored");
        if event.t < stamp {
            self.bucket.push(event);
        } else {
            self.boundary.push(event);
        }
        self.interval_count += 1;
        self.order.last_t = Some(event.t);
        self.order.seen += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, now: f64, out: &mut Vec<Slice>) {
        while let Some(stamp) = self.clock.next_stamp().filter(|&s| s <= now) {
            self.publish(stamp, out);
        }
    }

    fn publish(&mut self, stamp: f64, out: &mut Vec<Slice>) {
        let mut events = std::mem::take(&mut self.bucket);
        self.bucket.append(&mut self.boundary);
        let first_index = self.emitted;
        self.emitted += events.len() as u64;
        events.shrink_to_fit();
        out.push(Slice {
            events,
            first_index,
            publish_stamp: stamp,
            interval_event_count: std::mem::take(&mut self.interval_count),
            partial: false,
        });
        self.order.published = Some(stamp);
        self.clock.k += 1;
    }
}

/// Periodic publication of the last `N` events strictly before each `t_k`.
#[derive(Clone, Debug)]
pub struct TimeAndNumberSlicer {
    clock: Clock,
    window: usize,
    ring: VecDeque<Event>,
    /// Trailing events sharing the newest timestamp.
    tail_run: usize,
    interval_count: usize,
    order: Order,
}

impl TimeAndNumberSlicer {
    pub fn new(interval: f64, window: usize, t0: Option<f64>) -> Result<Self> {
        check_interval(interval)?;
        if window == 0 {
            return Err(Error::InvalidConfig(
                "window size must be at least 1".into(),
            ));
        }
        Ok(Self {
            clock: Clock::new(interval, t0),
            window,
            ring: VecDeque::with_capacity(window + 1),
            tail_run: 0,
            interval_count: 0,
            order: Order::default(),
        })
    }

    #[inline]
    pub fn push(&mut self, event: Event, out: &mut Vec<Slice>) -> Result<()> {
        self.order.check(event.t)?;
        self.clock.anchor(event.t);
        while let Some(stamp) = self.clock.next_stamp().filter(|&s| event.t > s) {
            self.publish(stamp, out);
        }
        if self.order.last_t == Some(event.t) {
            self.tail_run += 1;
        } else {
            self.tail_run = 1;
        }
        self.ring.push_back(event);
        while self.ring.len() > self.window + self.tail_run {
            self.ring.pop_front();
        }
        self.interval_count += 1;
        self.order.last_t = Some(event.t);
        self.order.seen += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, now: f64, out: &mut Vec<Slice>) {
        while let Some(stamp) = self.clock.next_stamp().filter(|&s| s <= now) {
            self.publish(stamp, out);
        }
    }

    fn publish(&mut self, stamp: f64, out: &mut Vec<Slice>) {
        let excluded = self.ring.iter().rev().take_while(|e| e.t >= stamp).count();
        let available = self.ring.len() - excluded;
        let take = available.min(self.window);
        let start = available - take;
        let events: Vec<Event> = self.ring.range(start..available).copied().collect();
        let ring_first = self.order.seen - self.ring.len() as u64;
        out.push(Slice {
            events,
            first_index: ring_first + start as u64,
            publish_stamp: stamp,
            interval_event_count: std::mem::take(&mut self.interval_count),
            partial: take < self.window,
        });
        self.order.published = Some(stamp);
        self.clock.k += 1;
    }
}

fn check_interval(interval: f64) -> Result<()> {
    if interval > 0.0 && interval.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "interval must be positive, got {interval}"
        )))
    }
}

/// Any of the three slice methods behind one interface.
#[derive(Clone, Debug)]
pub enum Slicer {
    Number(NumberSlicer),
    Time(TimeSlicer),
    TimeAndNumber(TimeAndNumberSlicer),
}

impl Slicer {
    pub fn from_config(config: &AccumulatorConfig) -> Result<Self> {
        config.validate()?;
        Ok(match config.slice_method {
            SliceMethod::ByNumber => Slicer::Number(NumberSlicer::new(config.window_size)?),
            SliceMethod::ByTime => {
                Slicer::Time(TimeSlicer::new(config.interval, config.start_time)?)
            }
            SliceMethod::ByTimeAndNumber => Slicer::TimeAndNumber(TimeAndNumberSlicer::new(
                config.interval,
                config.window_size,
                config.start_time,
            )?),
        })
    }

    #[inline]
    pub fn push(&mut self, event: Event, out: &mut Vec<Slice>) -> Result<()> {
        match self {
            Slicer::Number(s) => s.push(event, out),
            Slicer::Time(s) => s.push(event, out),
            Slicer::TimeAndNumber(s) => s.push(event, out),
        }
    }

    /// Declares that no event with `t <= now` is still to come and publishes
    /// every stamp up to and including `now`. No-op for count slicing.
    pub fn advance_to(&mut self, now: f64, out: &mut Vec<Slice>) {
        match self {
            Slicer::Number(_) => {}
            Slicer::Time(s) => s.advance_to(now, out),
            Slicer::TimeAndNumber(s) => s.advance_to(now, out),
        }
    }

    /// End of stream: publish every stamp up to the last event seen.
    pub fn finish(&mut self, out: &mut Vec<Slice>) {
        if let Some(last) = self.last_timestamp() {
            self.advance_to(last, out);
        }
    }

    pub fn last_timestamp(&self) -> Option<f64> {
        match self {
            Slicer::Number(s) => s.order.last_t,
            Slicer::Time(s) => s.order.last_t,
            Slicer::TimeAndNumber(s) => s.order.last_t,
        }
    }

    pub fn events_seen(&self) -> u64 {
        match self {
            Slicer::Number(s) => s.order.seen,
            Slicer::Time(s) => s.order.seen,
            Slicer::TimeAndNumber(s) => s.order.seen,
        }
    }
}

/// Splits a whole stream into `N`-event slices. Returns the slices and the
/// trailing remainder that did not fill a window.
pub fn slice_by_number(events: &[Event], window: usize) -> Result<(Vec<Slice>, Vec<Event>)> {
    let mut slicer = NumberSlicer::new(window)?;
    let mut out = Vec::with_capacity(events.len() / window);
    for &ev in events {
        slicer.push(ev, &mut out)?;
    }
    Ok((out, slicer.pending().to_vec()))
}

pub fn slice_by_time(events: &[Event], interval: f64, t0: Option<f64>) -> Result<Vec<Slice>> {
    let mut slicer = Slicer::Time(TimeSlicer::new(interval, t0)?);
    run(&mut slicer, events)
}

pub fn slice_by_time_and_number(
    events: &[Event],
    interval: f64,
    window: usize,
    t0: Option<f64>,
) -> Result<Vec<Slice>> {
    let mut slicer = Slicer::TimeAndNumber(TimeAndNumberSlicer::new(interval, window, t0)?);
    run(&mut slicer, events)
}

fn run(slicer: &mut Slicer, events: &[Event]) -> Result<Vec<Slice>> {
    let mut out = Vec::new();
    for &ev in events {
        slicer.push(ev, &mut out)?;
    }
    slicer.finish(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Polarity;

    fn at(t: f64) -> Event {
        Event::new(t, 0, 0, Polarity::Positive)
    }

    /// t = 0.01 .. 0.10 in steps of 0.01.
    fn hundredths() -> Vec<Event> {
        (1..=10).map(|i| at(i as f64 / 100.0)).collect()
    }

    fn times(slice: &Slice) -> Vec<f64> {
        slice.events.iter().map(|e| e.t).collect()
    }

    #[test]
    fn by_number_exact_division() {
        let (slices, pending) = slice_by_number(&hundredths(), 5).unwrap();
        assert_eq!(slices.len(), 2);
        assert!(pending.is_empty());
        assert_eq!(slices[0].publish_stamp, 0.05);
        assert_eq!(slices[1].publish_stamp, 0.10);
        assert_eq!(slices[1].first_index, 5);
    }

    #[test]
    fn by_number_withholds_remainder() {
        let evs: Vec<Event> = (1..=12).map(|i| at(i as f64)).collect();
        let (slices, pending) = slice_by_number(&evs, 5).unwrap();
        assert_eq!(slices.len(), 2);
        assert_eq!(pending.len(), 2);
        assert!(slices.iter().all(|s| s.len() == 5 && !s.partial));
        assert!(slice_by_number(&[], 5).unwrap().0.is_empty());
    }

    #[test]
    fn by_time_half_open_intervals() {
        let slices = slice_by_time(&hundredths(), 0.05, Some(0.0)).unwrap();
        assert_eq!(slices.len(), 2);
        assert_eq!(times(&slices[0]), vec![0.01, 0.02, 0.03, 0.04]);
        assert_eq!(times(&slices[1]), vec![0.05, 0.06, 0.07, 0.08, 0.09]);
        assert_eq!(slices[0].publish_stamp, 0.05);
        assert_eq!(slices[1].publish_stamp, 0.10);
        // (0, 0.05] and (0.05, 0.10]
        assert_eq!(slices[0].interval_event_count, 5);
        assert_eq!(slices[1].interval_event_count, 5);
    }

    #[test]
    fn by_time_empty_intervals() {
        let evs = [at(0.0), at(0.35)];
        let slices = slice_by_time(&evs, 0.1, None).unwrap();
        assert_eq!(slices.len(), 3);
        assert_eq!(slices[0].len(), 1);
        assert!(slices[1].is_empty());
        assert!(slices[2].is_empty());
    }

    #[test]
    fn by_time_and_number_window_definition() {
        let slices = slice_by_time_and_number(&hundredths(), 0.05, 3, Some(0.0)).unwrap();
        assert_eq!(slices.len(), 2);
        assert_eq!(times(&slices[0]), vec![0.02, 0.03, 0.04]);
        assert_eq!(times(&slices[1]), vec![0.07, 0.08, 0.09]);
        assert!(!slices[0].partial && !slices[1].partial);
        assert_eq!(slices[0].first_index, 1);
        assert_eq!(slices[1].first_index, 6);
    }

    #[test]
    fn by_time_and_number_partial_at_start() {
        let slices = slice_by_time_and_number(&hundredths(), 0.05, 50, Some(0.0)).unwrap();
        assert!(slices[0].partial);
        assert_eq!(slices[0].len(), 4);
        assert_eq!(slices[1].len(), 9);
    }

    #[test]
    fn burst_at_publish_stamp_rolls_forward() {
        // Five events share t = 0.1 exactly; the window must reach back past them.
        let mut evs: Vec<Event> = (1..=9).map(|i| at(i as f64 / 100.0)).collect();
        evs.extend(std::iter::repeat_n(at(0.1), 5));
        evs.push(at(0.15));
        let slices = slice_by_time_and_number(&evs, 0.1, 4, Some(0.0)).unwrap();
        assert_eq!(times(&slices[0]), vec![0.06, 0.07, 0.08, 0.09]);
        assert_eq!(slices[0].interval_event_count, 14);
    }

    #[test]
    fn slices_overlap_at_low_rate() {
        let evs: Vec<Event> = (1..=20).map(|i| at(i as f64 * 0.01)).collect();
        let slices = slice_by_time_and_number(&evs, 0.02, 5, Some(0.0)).unwrap();
        let a = &slices[4];
        let b = &slices[5];
        assert!(b.first_index < a.end_index());
    }

    #[test]
    fn rejects_out_of_order() {
        let evs = [at(0.2), at(0.1)];
        assert!(matches!(
            slice_by_time_and_number(&evs, 0.1, 3, None),
            Err(Error::NonMonotonic { .. })
        ));
        assert!(slice_by_number(&evs, 1).is_err());
    }

    #[test]
    fn late_event_after_advance_is_rejected() {
        let mut s = Slicer::TimeAndNumber(TimeAndNumberSlicer::new(0.1, 2, Some(0.0)).unwrap());
        let mut out = Vec::new();
        s.push(at(0.05), &mut out).unwrap();
        s.advance_to(0.2, &mut out);
        assert_eq!(out.len(), 2);
        assert!(s.push(at(0.15), &mut out).is_err());
        assert!(s.push(at(0.25), &mut out).is_ok());
    }

    #[test]
    fn no_motion_detection() {
        assert!(detect_no_motion(150, 200));
        assert!(!detect_no_motion(200, 200));
        assert!(!detect_no_motion(0, 0));
        assert!(!detect_no_motion(10_000, 0));
    }
}

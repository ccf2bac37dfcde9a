//! Plain-text event streams, one `t x y p` record per line with `p` in {0, 1}.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, ParseErrorKind, Result};
use crate::event::{Event, Polarity, SensorGeometry};

fn parse_err(line: u64, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

/// Parses one record. `line` is only used for error reporting.
pub fn parse_event_line(text: &str, line: u64) -> Result<Event> {
    let mut fields = text.split_ascii_whitespace();
    let (Some(t), Some(x), Some(y), Some(p), None) = (
        fields.next(),
        fields.next(),
        fields.next(),
        fields.next(),
        fields.next(),
    ) else {
        return Err(parse_err(
            line,
            ParseErrorKind::FieldCount(text.split_ascii_whitespace().count()),
        ));
    };

    let malformed = |field: &'static str, token: &str| {
        parse_err(
            line,
            ParseErrorKind::MalformedField {
                field,
                token: token.to_string(),
            },
        )
    };
    let t_val: f64 = t.parse().map_err(|_| malformed("timestamp", t))?;
    if !t_val.is_finite() {
        return Err(malformed("timestamp", t));
    }
    if t_val < 0.0 {
        return Err(parse_err(line, ParseErrorKind::NegativeTimestamp(t_val)));
    }
    let x_val: u32 = x.parse().map_err(|_| malformed("x", x))?;
    let y_val: u32 = y.parse().map_err(|_| malformed("y", y))?;
    let polarity = match p {
        "1" => Polarity::Positive,
        "0" => Polarity::Negative,
        other => {
            return Err(parse_err(
                line,
                ParseErrorKind::InvalidPolarity(other.to_string()),
            ))
        }
    };
    if x_val > u16::MAX as u32 || y_val > u16::MAX as u32 {
        return Err(parse_err(
            line,
            ParseErrorKind::OutOfBounds { x: x_val, y: y_val },
        ));
    }
    Ok(Event::new(t_val, x_val as u16, y_val as u16, polarity))
}

/// Streaming reader that validates ordering and bounds as it goes.
/// Blank lines and `#` comments are skipped.
pub struct EventReader<R> {
    reader: R,
    geometry: SensorGeometry,
    buf: String,
    line: u64,
    last_t: Option<f64>,
    failed: bool,
}

impl<R: BufRead> EventReader<R> {
    pub fn new(reader: R, geometry: SensorGeometry) -> Self {
        Self {
            reader,
            geometry,
            buf: String::with_capacity(64),
            line: 0,
            last_t: None,
            failed: false,
        }
    }

    pub fn line(&self) -> u64 {
        self.line
    }

    fn next_event(&mut self) -> Result<Option<Event>> {
        loop {
            self.buf.clear();
            if self.reader.read_line(&mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line += 1;
            let text = self.buf.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let ev = parse_event_line(text, self.line)?;
            if !self.geometry.contains(ev.x as u32, ev.y as u32) {
                return Err(parse_err(
                    self.line,
                    ParseErrorKind::OutOfBounds {
                        x: ev.x as u32,
                        y: ev.y as u32,
                    },
                ));
            }
            if let Some(previous) = self.last_t {
                if ev.t < previous {
                    return Err(parse_err(
                        self.line,
                        ParseErrorKind::NonMonotonic {
                            previous,
                            current: ev.t,
                        },
                    ));
                }
            }
            self.last_t = Some(ev.t);
            return Ok(Some(ev));
        }
    }
}

impl<R: BufRead> Iterator for EventReader<R> {
    type Item = Result<Event>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.next_event() {
            Ok(ev) => ev.map(Ok),
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Opens `path` for streaming; events are produced lazily.
pub fn read_stream(
    path: impl AsRef<Path>,
    geometry: SensorGeometry,
) -> Result<EventReader<BufReader<File>>> {
    let file = File::open(path)?;
    Ok(EventReader::new(
        BufReader::with_capacity(1 << 16, file),
        geometry,
    ))
}

pub fn read_all(path: impl AsRef<Path>, geometry: SensorGeometry) -> Result<Vec<Event>> {
    read_stream(path, geometry)?.collect()
}

/// Writes one record. Timestamps use the shortest representation that
/// parses back to the same value.
#[inline]
pub fn write_event<W: Write>(w: &mut W, ev: &Event) -> std::io::Result<()> {
    let p = match ev.polarity {
        Polarity::Positive => 1,
        Polarity::Negative => 0,
    };
    writeln!(w, "{} {} {} {}", ev.t, ev.x, ev.y, p)
}

pub fn write_events<W: Write>(w: &mut W, events: &[Event]) -> std::io::Result<()> {
    for ev in events {
        write_event(w, ev)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> SensorGeometry {
        SensorGeometry::DAVIS240
    }

    #[test]
    fn parses_dataset_lines() {
        let ev = parse_event_line("0.123456 120 90 1", 1).unwrap();
        assert_eq!(ev, Event::new(0.123456, 120, 90, Polarity::Positive));
        let ev = parse_event_line("0.500000 0 0 0", 2).unwrap();
        assert_eq!(ev, Event::new(0.5, 0, 0, Polarity::Negative));
    }

    #[test]
    fn rejects_bad_lines_with_line_numbers() {
        let err = parse_event_line("0.1 10 10 7", 17).unwrap_err();
        match err {
            Error::Parse {
                line: 17,
                kind: ParseErrorKind::InvalidPolarity(p),
            } => assert_eq!(p, "7"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_event_line("-0.1 1 1 1", 3),
            Err(Error::Parse {
                line: 3,
                kind: ParseErrorKind::NegativeTimestamp(_)
            })
        ));
        assert!(matches!(
            parse_event_line("0.1 a 1 1", 4),
            Err(Error::Parse {
                kind: ParseErrorKind::MalformedField { field: "x", .. },
                ..
            })
        ));
        assert!(matches!(
            parse_event_line("0.1 1 1", 5),
            Err(Error::Parse {
                kind: ParseErrorKind::FieldCount(3),
                ..
            })
        ));
        assert!(parse_event_line("0.1 1 1 1 9", 6).is_err());
        assert!(parse_event_line("nan 1 1 1", 7).is_err());
    }

    #[test]
    fn reader_checks_order_and_bounds() {
        let ok = "0.1 1 2 1\n\n# comment\n0.2 3 4 0\n0.2 5 6 1\n";
        let evs: Vec<Event> = EventReader::new(ok.as_bytes(), g())
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(evs.len(), 3);

        let reversed = "0.2 1 1 1\n0.1 1 1 1\n";
        let err = EventReader::new(reversed.as_bytes(), g())
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        match err {
            Error::Parse {
                line: 2,
                kind: ParseErrorKind::NonMonotonic { previous, current },
            } => {
                assert_eq!((previous, current), (0.2, 0.1));
            }
            other => panic!("unexpected {other:?}"),
        }

        let wide = "0.1 240 0 1\n";
        assert!(matches!(
            EventReader::new(wide.as_bytes(), g()).next().unwrap(),
            Err(Error::Parse {
                line: 1,
                kind: ParseErrorKind::OutOfBounds { x: 240, y: 0 }
            })
        ));
    }

    #[test]
    fn reader_stops_after_error() {
        let text = "0.1 1 1 3\n0.2 1 1 1\n";
        let mut r = EventReader::new(text.as_bytes(), g());
        assert!(r.next().unwrap().is_err());
        assert!(r.next().is_none());
    }

    #[test]
    fn write_then_parse_preserves_values() {
        let evs = vec![
            Event::new(0.123456, 120, 90, Polarity::Positive),
            Event::new(1.0 / 3.0, 0, 179, Polarity::Negative),
            Event::new(7.0, 239, 0, Polarity::Positive),
        ];
        let mut buf = Vec::new();
        write_events(&mut buf, &evs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("0.123456 120 90 1\n"));
        let back: Vec<Event> = EventReader::new(buf.as_slice(), g())
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(back, evs);
    }
}

use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sensor geometry {width}x{height}: both sides must be at least 1")]
    InvalidGeometry { width: u32, height: u32 },

    #[error("unsupported bit depth {0}, expected 8 or 16")]
    UnsupportedBitDepth(u32),

    #[error("invalid accumulator configuration: {0}")]
    InvalidConfig(String),

    #[error("event density must be positive and finite, got {0}")]
    NonPositiveDensity(f64),

    #[error("event at ({x}, {y}) lies outside the {width}x{height} sensor")]
    OutOfBounds {
        x: u32,
        y: u32,
        width: u16,
        height: u16,
    },

    #[error("timestamp {current} precedes {previous}")]
    NonMonotonic { previous: f64, current: f64 },

    #[error("decay interval must be non-negative, got {0}")]
    NegativeInterval(f64),

    #[error("no-motion hold requested before any frame was published")]
    NoPreviousFrame,

    #[error("line {line}: {kind}")]
    Parse { line: u64, kind: ParseErrorKind },

    #[error("frame geometries differ: {a_width}x{a_height} vs {b_width}x{b_height}")]
    GeometryMismatch {
        a_width: u16,
        a_height: u16,
        b_width: u16,
        b_height: u16,
    },

    #[error("degenerate frame: zero intensity variance")]
    Degenerate,

    #[error("unknown preset '{name}', available: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("invalid synthetic setup: {0}")]
    InvalidSynth(String),

    #[error("malformed PGM: {0}")]
    MalformedPgm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    /// Wrong number of whitespace separated fields.
    FieldCount(usize),
    MalformedField {
        field: &'static str,
        token: String,
    },
    NegativeTimestamp(f64),
    InvalidPolarity(String),
    NonMonotonic {
        previous: f64,
        current: f64,
    },
    OutOfBounds {
        x: u32,
        y: u32,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::FieldCount(n) => write!(f, "expected 4 fields \"t x y p\", found {n}"),
            ParseErrorKind::MalformedField { field, token } => {
                write!(f, "malformed {field} field '{token}'")
            }
            ParseErrorKind::NegativeTimestamp(t) => write!(f, "negative timestamp {t}"),
            ParseErrorKind::InvalidPolarity(p) => {
                write!(f, "invalid polarity '{p}', expected 0 or 1")
            }
            ParseErrorKind::NonMonotonic { previous, current } => {
                write!(
                    f,
                    "timestamp {current} precedes previous timestamp {previous}"
                )
            }
            ParseErrorKind::OutOfBounds { x, y } => {
                write!(f, "coordinate ({x}, {y}) outside sensor geometry")
            }
        }
    }
}

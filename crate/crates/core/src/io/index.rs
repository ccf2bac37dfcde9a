//! CSV index of published frames: `stamp,filename,held`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, ParseErrorKind, Result};

pub const INDEX_HEADER: &str = "stamp,filename,held";

#[derive(Clone, Debug, PartialEq)]
pub struct FrameIndexEntry {
    pub stamp: f64,
    pub filename: String,
    pub held: bool,
}

/// File name of the `n`-th published frame.
pub fn frame_file_name(n: usize) -> String {
    format!("frame_{n:06}.pgm")
}

pub fn write_index_header<W: Write>(w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{INDEX_HEADER}")
}

pub fn write_index_row<W: Write>(w: &mut W, entry: &FrameIndexEntry) -> std::io::Result<()> {
    writeln!(
        w,
        "{:.9},{},{}",
        entry.stamp, entry.filename, entry.held as u8
    )
}

pub fn write_frame_index(entries: &[FrameIndexEntry], path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_index_header(&mut w)?;
    for e in entries {
        write_index_row(&mut w, e)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_frame_index(path: impl AsRef<Path>) -> Result<Vec<FrameIndexEntry>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i as u64 + 1;
        if i == 0 {
            if line.trim() != INDEX_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    kind: ParseErrorKind::MalformedField {
                        field: "header",
                        token: line,
                    },
                });
            }
            continue;
        }
        let bad = |field: &'static str, token: &str| Error::Parse {
            line: line_no,
            kind: ParseErrorKind::MalformedField {
                field,
                token: token.to_string(),
            },
        };
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                kind: ParseErrorKind::FieldCount(cols.len()),
            });
        }
        let stamp = cols[0].parse().map_err(|_| bad("stamp", cols[0]))?;
        let held = match cols[2] {
            "0" => false,
            "1" => true,
            other => return Err(bad("held", other)),
        };
        out.push(FrameIndexEntry {
            stamp,
            filename: cols[1].to_string(),
            held,
        });
    }
    Ok(out)
}

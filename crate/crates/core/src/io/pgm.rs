//! Binary PGM (`P5`) frames.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::frame::{BitDepth, Raster};

/// Serializes a raster: `P5\n<w> <h>\n<maxval>\n` followed by row-major
/// samples, one byte each at 8 bits, two bytes big-endian at 16 bits.
pub fn encode_pgm(raster: &Raster) -> Vec<u8> {
    let header = format!(
        "P5\n{} {}\n{}\n",
        raster.width,
        raster.height,
        raster.bit_depth.max_value()
    );
    let bytes_per = if raster.bit_depth == BitDepth::Eight {
        1
    } else {
        2
    };
    let mut out = Vec::with_capacity(header.len() + raster.data.len() * bytes_per);
    out.extend_from_slice(header.as_bytes());
    match raster.bit_depth {
        BitDepth::Eight => out.extend(raster.data.iter().map(|&v| v as u8)),
        BitDepth::Sixteen => {
            for &v in &raster.data {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
    }
    out
}

pub fn write_pgm(raster: &Raster, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&encode_pgm(raster))?;
    w.flush()?;
    Ok(())
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::MalformedPgm("truncated header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<u32> {
    std::str::from_utf8(next_token(bytes, pos)?)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::MalformedPgm(format!("bad {what}")))
}

/// Parses a `P5` image with maxval 255 or 65535. Comments are not supported.
pub fn decode_pgm(bytes: &[u8]) -> Result<Raster> {
    let bad = |m: &str| Error::MalformedPgm(m.to_string());
    let mut pos = 0;
    if next_token(bytes, &mut pos)? != b"P5" {
        return Err(bad("missing P5 magic"));
    }
    let width = header_number(bytes, &mut pos, "width")?;
    let height = header_number(bytes, &mut pos, "height")?;
    let maxval = header_number(bytes, &mut pos, "maxval")?;
    // Exactly one whitespace byte separates the header from the samples.
    let data_start = pos + 1;
    let bit_depth = match maxval {
        255 => BitDepth::Eight,
        65535 => BitDepth::Sixteen,
        _ => return Err(bad("maxval must be 255 or 65535")),
    };
    if width == 0 || height == 0 || width > u16::MAX as u32 || height > u16::MAX as u32 {
        return Err(bad("bad dimensions"));
    }
    let n = width as usize * height as usize;
    let payload = bytes
        .get(data_start..)
        .ok_or_else(|| bad("missing payload"))?;
    let data: Vec<u16> = match bit_depth {
        BitDepth::Eight if payload.len() == n => payload.iter().map(|&b| b as u16).collect(),
        BitDepth::Sixteen if payload.len() == 2 * n => payload
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect(),
        _ => return Err(bad("payload length does not match header")),
    };
    Ok(Raster {
        width: width as u16,
        height: height as u16,
        bit_depth,
        data,
    })
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Raster> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    decode_pgm(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_two_by_two() {
        let r = Raster {
            width: 2,
            height: 2,
            bit_depth: BitDepth::Eight,
            data: vec![0, 255, 128, 0],
        };
        let bytes = encode_pgm(&r);
        let mut expected = b"P5\n2 2\n255\n".to_vec();
        expected.extend_from_slice(&[0, 255, 128, 0]);
        assert_eq!(bytes, expected);
        assert_eq!(decode_pgm(&bytes).unwrap(), r);
    }

    #[test]
    fn sixteen_bit_is_big_endian() {
        let r = Raster {
            width: 2,
            height: 1,
            bit_depth: BitDepth::Sixteen,
            data: vec![0x0102, 65535],
        };
        let bytes = encode_pgm(&r);
        assert!(bytes.starts_with(b"P5\n2 1\n65535\n"));
        assert_eq!(&bytes[bytes.len() - 4..], &[0x01, 0x02, 0xff, 0xff]);
        assert_eq!(decode_pgm(&bytes).unwrap(), r);
    }

    #[test]
    fn rejects_truncated_payload() {
        assert!(decode_pgm(b"P5\n2 2\n255\n\x00\x01").is_err());
        assert!(decode_pgm(b"P2\n1 1\n255\n0").is_err());
    }
}

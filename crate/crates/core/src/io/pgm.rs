//! Netpbm graymaps: P2 (ASCII) and P5 (binary), maxval up to 65535.

use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::signals::GrayImage;

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes, path)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<(usize, &str)> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            (
                start,
                std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("\u{fffd}"),
            )
        })
    }

    fn number(&mut self, what: &str, path: &Path) -> Result<u32> {
        let at = self.pos;
        let (start, tok) = self
            .token()
            .ok_or_else(|| Error::parse(path, at, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| Error::parse(path, start, format!("bad {what} '{tok}'")))
    }
}

/// Parses PGM bytes; `path` only labels errors.
pub fn parse_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => {
            let shown = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
            return Err(Error::parse(path, 0, format!("unknown magic '{shown}', expected P2 or P5")));
        }
    };
    cur.pos = 2;
    let width = cur.number("width", path)? as usize;
    let height = cur.number("height", path)? as usize;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval", path)?;
    if width == 0 || height == 0 {
        return Err(Error::parse(path, maxval_at, "zero image dimension"));
    }
    if !(1..=65535).contains(&maxval) {
        return Err(Error::parse(path, maxval_at, format!("maxval {maxval} outside 1..=65535")));
    }

    let count = width * height;
    let mut raw = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = cur.pos + 1;
        let sample = if maxval > 255 { 2 } else { 1 };
        let needed = count * sample;
        let end = start + needed;
        if end > bytes.len() {
            return Err(Error::parse(
                path,
                bytes.len(),
                format!("truncated raster: need {needed} bytes from offset {start}"),
            ));
        }
        let data = &bytes[start..end];
        if sample == 1 {
            raw.extend(data.iter().map(|&b| u32::from(b)));
        } else {
            raw.extend(data.chunks_exact(2).map(|c| u32::from(u16::from_be_bytes([c[0], c[1]]))));
        }
    } else {
        for _ in 0..count {
            let at = cur.pos;
            let v = cur.number("pixel", path).map_err(|e| match e {
                Error::Parse { message, .. } if message == "missing pixel" => {
                    Error::parse(path, at, "truncated raster")
                }
                other => other,
            })?;
            raw.push(v);
        }
    }

    let mut px = RealMatrix::zeros(height, width);
    for (i, v) in raw.into_iter().enumerate() {
        if v > maxval {
            return Err(Error::parse(path, 0, format!("sample {v} exceeds maxval {maxval}")));
        }
        px[(i / width, i % width)] = f64::from(v) / f64::from(maxval);
    }
    GrayImage::new(px)
}

/// Quantizes to 8 bits (`round(255·v)`) and writes P5.
pub fn write_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_pgm(image)).map_err(|e| Error::io(path, e))
}

pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.cols(), image.rows()).into_bytes();
    out.extend(
        image
            .pixels()
            .as_slice()
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    out
}

/// Grid of arbitrary non-negative values scaled so its maximum maps to white.
pub fn normalized_preview(values: &RealMatrix) -> GrayImage {
    let peak = values.as_slice().iter().cloned().fold(0.0, f64::max);
    let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    let data = values
        .as_slice()
        .iter()
        .map(|v| (v * scale).clamp(0.0, 1.0))
        .collect();
    GrayImage::new(RealMatrix::from_row_major(values.rows(), values.cols(), data))
        .expect("values clamped into range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(bytes: &[u8]) -> Result<GrayImage> {
        parse_pgm(bytes, Path::new("mem.pgm"))
    }

    #[test]
    fn binary_two_by_two() {
        let img = parse(b"P5\n2 2\n255\n\x00\xff\xff\x00").unwrap();
        assert_eq!(
            img.pixels(),
            &RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
        );
    }

    #[test]
    fn ascii_with_comment() {
        let img = parse(b"P2\n# made by hand\n3 1\n4\n0 2 4\n").unwrap();
        assert_eq!(img.pixels(), &RealMatrix::from_rows(&[vec![0.0, 0.5, 1.0]]));
    }

    #[test]
    fn sixteen_bit_binary() {
        let img = parse(b"P5 1 2 65535\n\xff\xff\x00\x00").unwrap();
        assert_eq!(img.pixels(), &RealMatrix::from_rows(&[vec![1.0], vec![0.0]]));
    }

    #[test]
    fn malformed_inputs() {
        match parse(b"P9\n1 1\n255\n\x00") {
            Err(Error::Parse { offset: 0, message, .. }) => assert!(message.contains("P9")),
            other => panic!("unexpected {other:?}"),
        }
        match parse(b"P5\n4 4\n255\n\x00\x01") {
            Err(Error::Parse { offset, message, .. }) => {
                assert_eq!(offset, 13);
                assert!(message.contains("truncated"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(b"P2 2 1 255 7"), Err(Error::Parse { offset: 12, .. })));
        assert!(parse(b"P2 1 1 0 0").is_err());
        assert!(parse(b"P2 1 1 3 9").is_err());
        assert!(parse(b"P2 x 1 3 9").is_err());
    }

    #[test]
    fn eight_bit_round_trip() {
        let data: Vec<f64> = (0..=255u32).map(|k| f64::from(k) / 255.0).collect();
        let img = GrayImage::new(RealMatrix::from_row_major(16, 16, data)).unwrap();
        let back = parse(&encode_pgm(&img)).unwrap();
        assert_eq!(back, img);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ramp.pgm");
        write_pgm(&img, &path).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), img);
    }

    #[test]
    fn preview_scales_to_peak() {
        let g = normalized_preview(&RealMatrix::from_rows(&[vec![0.0, 2.0], vec![1.0, 4.0]]));
        assert_eq!(g.pixels().as_slice(), &[0.0, 0.5, 0.25, 1.0]);
    }
}

//! PGM (Netpbm P2/P5) reader and writer.
//!
//! Reading accepts ASCII (P2) and binary (P5) grayscale files with maxval up
//! to 65535; 16-bit binary samples are big-endian per the format. Writing
//! emits P5 with maxval 255 or 65535 according to the buffer depth, so a
//! read-write-read cycle preserves samples exactly.

use std::fs;
use std::path::Path;

use super::{Depth, ImageBuffer};
use crate::error::{Error, Result};

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let bytes = fs::read(path)?;
    read_pgm_bytes(&bytes)
}

pub fn write_pgm(path: impl AsRef<Path>, buf: &ImageBuffer) -> Result<()> {
    fs::write(path, write_pgm_bytes(buf))?;
    Ok(())
}

pub fn read_pgm_bytes(bytes: &[u8]) -> Result<ImageBuffer> {
    let mut p = Parser { bytes, pos: 0 };
    let magic = p.take(2, "magic number")?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        _ => {
            return Err(Error::Parse {
                offset: 0,
                detail: format!(
                    "unsupported magic {:?}, expected P2 or P5",
                    String::from_utf8_lossy(magic)
                ),
            })
        }
    };

    let cols = p.header_number("width")?;
    let rows = p.header_number("height")?;
    let maxval = p.header_number("maxval")?;
    if cols == 0 || rows == 0 {
        return Err(p.error(format!("image dimensions must be positive, got {cols}x{rows}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(p.error(format!("maxval must be in 1..=65535, got {maxval}")));
    }

    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| p.error("image dimensions overflow".to_string()))?;

    let samples = if binary {
        p.skip_single_whitespace()?;
        let wide = maxval > 255;
        let needed = if wide { count * 2 } else { count };
        let data = p.take(needed, "raster data")?;
        if wide {
            data.chunks_exact(2)
                .map(|pair| u16::from_be_bytes([pair[0], pair[1]]))
                .collect()
        } else {
            data.iter().map(|&b| b as u16).collect()
        }
    } else {
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            samples.push(p.header_number("sample")? as u16);
        }
        samples
    };

    if let Some(idx) = samples.iter().position(|&s| s as usize > maxval) {
        return Err(p.error(format!(
            "sample {} at index {idx} exceeds maxval {maxval}",
            samples[idx]
        )));
    }

    ImageBuffer::new(rows, cols, Depth::for_maxval(maxval as u16), samples)
}

pub fn write_pgm_bytes(buf: &ImageBuffer) -> Vec<u8> {
    let maxval = buf.depth().max_value();
    let mut out = format!("P5\n{} {}\n{}\n", buf.cols(), buf.rows(), maxval).into_bytes();
    match buf.depth() {
        Depth::Eight => out.extend(buf.samples().iter().map(|&s| s as u8)),
        Depth::Sixteen => {
            for &s in buf.samples() {
                out.extend_from_slice(&s.to_be_bytes());
            }
        }
    }
    out
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, detail: String) -> Error {
        Error::Parse {
            offset: self.pos,
            detail,
        }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(self.error(format!(
                "truncated file: wanted {n} bytes of {what}, {} left",
                self.bytes.len() - self.pos
            )));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    /// Skips whitespace and `#` comments (to end of line).
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    /// Reads a decimal number preceded by arbitrary whitespace/comments.
    fn header_number(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(format!("expected a decimal {what}")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are utf8");
        text.parse::<usize>()
            .map_err(|_| self.error(format!("{what} out of range: {text}")))
    }

    /// After the maxval of a binary file exactly one whitespace byte
    /// separates header from raster.
    fn skip_single_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error("expected single whitespace before raster data".to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ascii_fixture() {
        let buf = read_pgm_bytes(b"P2 2 2 255 0 64 128 255").unwrap();
        assert_eq!((buf.rows(), buf.cols()), (2, 2));
        assert_eq!(buf.depth(), Depth::Eight);
        assert_eq!(buf.samples(), &[0, 64, 128, 255]);
    }

    #[test]
    fn parses_comments_in_header() {
        let text = b"P2\n# a comment\n2 1\n# another\n255\n7 9\n";
        let buf = read_pgm_bytes(text).unwrap();
        assert_eq!(buf.samples(), &[7, 9]);
    }

    #[test]
    fn rejects_unknown_magic() {
        let err = read_pgm_bytes(b"P7\n1 1\n255\n\x00").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_truncated_binary_payload() {
        let err = read_pgm_bytes(b"P5\n2 2\n255\nab").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn rejects_oversized_maxval_and_samples() {
        assert!(read_pgm_bytes(b"P2 1 1 70000 1").is_err());
        assert!(read_pgm_bytes(b"P2 1 1 100 101").is_err());
        assert!(read_pgm_bytes(b"P2 0 1 255").is_err());
    }

    #[test]
    fn binary_round_trip_8bit() {
        let buf = ImageBuffer::new(2, 3, Depth::Eight, vec![0, 1, 2, 253, 254, 255]).unwrap();
        let bytes = write_pgm_bytes(&buf);
        assert_eq!(read_pgm_bytes(&bytes).unwrap(), buf);
    }

    #[test]
    fn binary_round_trip_16bit() {
        let buf =
            ImageBuffer::new(2, 2, Depth::Sixteen, vec![0, 256, 65535, 40000]).unwrap();
        let bytes = write_pgm_bytes(&buf);
        assert_eq!(read_pgm_bytes(&bytes).unwrap(), buf);
    }

    #[test]
    fn binary_16bit_is_big_endian() {
        let buf = ImageBuffer::new(1, 1, Depth::Sixteen, vec![0x0102]).unwrap();
        let bytes = write_pgm_bytes(&buf);
        assert_eq!(&bytes[bytes.len() - 2..], &[0x01, 0x02]);
    }

    #[test]
    fn ascii_16bit_reads() {
        let buf = read_pgm_bytes(b"P2 2 1 65535 0 54321").unwrap();
        assert_eq!(buf.depth(), Depth::Sixteen);
        assert_eq!(buf.samples(), &[0, 54321]);
    }
}

//! Raw matrix dump: a small self-describing binary container used where
//! 8-bit image export would destroy precision (band dumps, reconstruction
//! checks).
//!
//! Layout, all little-endian: 8 magic bytes `MSVDMAT1`, u64 row count,
//! u64 column count, then rows*cols f64 values row-major.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const MAGIC: &[u8; 8] = b"MSVDMAT1";

pub fn matrix_dump_bytes(m: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + 8 * m.rows() * m.cols());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for &x in m.as_slice() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn matrix_from_dump_bytes(bytes: &[u8]) -> Result<Matrix> {
    if bytes.len() < 24 {
        return Err(Error::Parse {
            offset: bytes.len(),
            detail: "truncated header".to_string(),
        });
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::Parse {
            offset: 0,
            detail: "bad magic, not a matrix dump".to_string(),
        });
    }
    let rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    let count = rows.checked_mul(cols).ok_or(Error::Parse {
        offset: 8,
        detail: "dimension overflow".to_string(),
    })?;
    let expected = 24 + 8 * count;
    if bytes.len() != expected {
        return Err(Error::Parse {
            offset: bytes.len().min(expected),
            detail: format!(
                "payload is {} bytes, expected {expected} for {rows}x{cols}",
                bytes.len()
            ),
        });
    }
    let data = bytes[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Matrix::new(rows, cols, data)
}

pub fn write_matrix_dump(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    fs::write(path, matrix_dump_bytes(m))?;
    Ok(())
}

pub fn read_matrix_dump(path: impl AsRef<Path>) -> Result<Matrix> {
    let bytes = fs::read(path)?;
    matrix_from_dump_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bytes_round_trip_bit_exact() {
        let m = Matrix::new(2, 3, vec![0.0, -1.5, 1e-300, 3.7e12, -0.0, f64::MIN_POSITIVE])
            .unwrap();
        let back = matrix_from_dump_bytes(&matrix_dump_bytes(&m)).unwrap();
        assert_eq!(back.shape(), (2, 3));
        for (a, b) in back.as_slice().iter().zip(m.as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_bad_magic_and_sizes() {
        assert!(matrix_from_dump_bytes(b"short").is_err());
        let mut bytes = matrix_dump_bytes(&Matrix::zeros(2, 2));
        bytes[0] = b'X';
        assert!(matrix_from_dump_bytes(&bytes).is_err());
        let mut truncated = matrix_dump_bytes(&Matrix::zeros(2, 2));
        truncated.pop();
        assert!(matrix_from_dump_bytes(&truncated).is_err());
        let mut padded = matrix_dump_bytes(&Matrix::zeros(2, 2));
        padded.push(0);
        assert!(matrix_from_dump_bytes(&padded).is_err());
    }
}

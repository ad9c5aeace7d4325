//! Image and dataset I/O: PGM images, raw matrix dumps, dataset manifests.

mod dump;
mod manifest;
mod pgm;

pub use dump::{matrix_dump_bytes, matrix_from_dump_bytes, read_matrix_dump, write_matrix_dump};
pub use manifest::{load_manifest, DatasetManifest, ManifestEntry};
pub use pgm::{read_pgm, read_pgm_bytes, write_pgm, write_pgm_bytes};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::BinaryMask;

/// Sample depth of a grayscale image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Eight,
    Sixteen,
}

impl Depth {
    pub fn max_value(self) -> u16 {
        match self {
            Depth::Eight => 255,
            Depth::Sixteen => 65535,
        }
    }

    /// Smallest depth able to hold `maxval`.
    pub fn for_maxval(maxval: u16) -> Depth {
        if maxval <= 255 {
            Depth::Eight
        } else {
            Depth::Sixteen
        }
    }
}

/// Grayscale raster of unsigned samples, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    rows: usize,
    cols: usize,
    depth: Depth,
    samples: Vec<u16>,
}

impl ImageBuffer {
    pub fn new(rows: usize, cols: usize, depth: Depth, samples: Vec<u16>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dimension(format!(
                "image dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if samples.len() != rows * cols {
            return Err(Error::dimension(format!(
                "sample count {} does not match {rows}x{cols}",
                samples.len()
            )));
        }
        let max = depth.max_value();
        if let Some(bad) = samples.iter().position(|&s| s > max) {
            return Err(Error::range(format!(
                "sample {} at index {bad} exceeds depth maximum {max}",
                samples[bad]
            )));
        }
        Ok(Self {
            rows,
            cols,
            depth,
            samples,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn samples(&self) -> &[u16] {
        &self.samples
    }
}

/// Samples as doubles, unscaled.
pub fn to_matrix(buf: &ImageBuffer) -> Matrix {
    Matrix::from_parts(
        buf.rows,
        buf.cols,
        buf.samples.iter().map(|&s| s as f64).collect(),
    )
}

/// Quantizes a matrix to image samples: round half away from zero, then
/// clamp to the depth range.
pub fn from_matrix(m: &Matrix, depth: Depth) -> ImageBuffer {
    let max = depth.max_value() as f64;
    let samples = m
        .as_slice()
        .iter()
        .map(|&x| x.round().clamp(0.0, max) as u16)
        .collect();
    ImageBuffer {
        rows: m.rows(),
        cols: m.cols(),
        depth,
        samples,
    }
}

/// Reads an image as a segmentation mask: samples strictly above half the
/// depth maximum (127 on 8-bit) are positive.
pub fn to_mask(buf: &ImageBuffer) -> BinaryMask {
    let threshold = buf.depth.max_value() / 2;
    let bits = buf.samples.iter().map(|&s| s > threshold).collect();
    BinaryMask::new(buf.rows, buf.cols, bits).expect("buffer shape is valid")
}

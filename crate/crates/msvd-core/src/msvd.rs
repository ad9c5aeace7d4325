//! Multiresolution SVD (MSVD) forward and inverse image transform.
//!
//! One analysis level regroups the image into 2x2 blocks (one block per
//! column of a `4 x m` matrix), computes the data-adaptive left singular
//! basis `u` of that matrix, and projects: `t = u^T * a1`. The four rows of
//! `t`, reshaped to the half-size grid, are the LL/LH/HL/HH sub-bands in
//! descending singular-value order. Unlike a fixed wavelet filter bank the
//! transform matrix depends on the data, so `u` must travel with the bands
//! for the inverse to exist. Multi-level decomposition recurses on LL.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::left_basis_from_gram;

/// Orthonormality slack accepted when validating a stored transform matrix.
/// Freshly computed bases deviate by ~1e-15; anything above this means the
/// pyramid was corrupted or hand-built wrong.
const U_VALIDATION_TOL: f64 = 1e-8;

/// The four half-resolution sub-bands of one analysis level.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBands {
    pub ll: Matrix,
    pub lh: Matrix,
    pub hl: Matrix,
    pub hh: Matrix,
}

/// Detail bands plus the transform matrix for one pyramid level.
#[derive(Debug, Clone, PartialEq)]
pub struct PyramidLevel {
    pub lh: Matrix,
    pub hl: Matrix,
    pub hh: Matrix,
    /// 4x4 orthonormal analysis basis of this level.
    pub u: Matrix,
}

/// Multi-level MSVD decomposition: detail bands finest-first, the deepest
/// approximation band, and the original image shape.
#[derive(Debug, Clone, PartialEq)]
pub struct MsvdPyramid {
    pub levels: Vec<PyramidLevel>,
    pub top_ll: Matrix,
    pub original_shape: (usize, usize),
}

impl MsvdPyramid {
    /// Builds a pyramid from parts, validating every structural invariant.
    pub fn new(
        levels: Vec<PyramidLevel>,
        top_ll: Matrix,
        original_shape: (usize, usize),
    ) -> Result<Self> {
        let pyramid = Self {
            levels,
            top_ll,
            original_shape,
        };
        pyramid.validate()?;
        Ok(pyramid)
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Checks shapes and transform orthonormality.
    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = self.original_shape;
        if self.levels.is_empty() {
            return Err(Error::validation("pyramid has no levels"));
        }
        let depth = self.levels.len() as u32;
        if rows == 0 || cols == 0 || rows % (1 << depth) != 0 || cols % (1 << depth) != 0 {
            return Err(Error::validation(format!(
                "shape {rows}x{cols} is not divisible by 2^{depth}"
            )));
        }
        for (i, level) in self.levels.iter().enumerate() {
            let expect = (rows >> (i + 1), cols >> (i + 1));
            for (name, band) in [("lh", &level.lh), ("hl", &level.hl), ("hh", &level.hh)] {
                if band.shape() != expect {
                    return Err(Error::validation(format!(
                        "level {i} band {name} has shape {:?}, expected {:?}",
                        band.shape(),
                        expect
                    )));
                }
            }
            validate_transform(&level.u).map_err(|e| {
                Error::validation(format!("level {i} transform invalid: {e}"))
            })?;
        }
        let deepest = (rows >> depth, cols >> depth);
        if self.top_ll.shape() != deepest {
            return Err(Error::validation(format!(
                "top LL has shape {:?}, expected {:?}",
                self.top_ll.shape(),
                deepest
            )));
        }
        Ok(())
    }
}

fn validate_transform(u: &Matrix) -> Result<()> {
    if u.shape() != (4, 4) {
        return Err(Error::validation(format!(
            "transform must be 4x4, got {:?}",
            u.shape()
        )));
    }
    let gram = u.transpose().multiply(u)?;
    let dev = crate::matrix::max_abs_diff(&gram, &Matrix::identity(4));
    if dev > U_VALIDATION_TOL {
        return Err(Error::validation(format!(
            "transform is not orthonormal (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

/// One forward analysis level. Returns the four sub-bands and the 4x4
/// transform matrix needed to invert them.
pub fn analyze_level(img: &Matrix) -> Result<(SubBands, Matrix)> {
    let a1 = img.block_to_columns()?;
    let u = left_basis_from_gram(&a1)?;
    let t = u.transpose().multiply(&a1)?;
    let half_rows = img.rows() / 2;
    let half_cols = img.cols() / 2;
    let band = |r: usize| Matrix::new(half_rows, half_cols, t.row(r).to_vec());
    let bands = SubBands {
        ll: band(0)?,
        lh: band(1)?,
        hl: band(2)?,
        hh: band(3)?,
    };
    Ok((bands, u))
}

/// Exact inverse of [`analyze_level`] given its outputs.
pub fn synthesize_level(
    bands: &SubBands,
    u: &Matrix,
    out_rows: usize,
    out_cols: usize,
) -> Result<Matrix> {
    validate_transform(u)?;
    if out_rows == 0 || out_cols == 0 || out_rows % 2 != 0 || out_cols % 2 != 0 {
        return Err(Error::validation(format!(
            "output shape must be even and positive, got {out_rows}x{out_cols}"
        )));
    }
    let expect = (out_rows / 2, out_cols / 2);
    for (name, band) in [
        ("ll", &bands.ll),
        ("lh", &bands.lh),
        ("hl", &bands.hl),
        ("hh", &bands.hh),
    ] {
        if band.shape() != expect {
            return Err(Error::validation(format!(
                "band {name} has shape {:?}, expected {:?}",
                band.shape(),
                expect
            )));
        }
    }
    let m = expect.0 * expect.1;
    let mut t1 = vec![0.0; 4 * m];
    t1[..m].copy_from_slice(bands.ll.as_slice());
    t1[m..2 * m].copy_from_slice(bands.lh.as_slice());
    t1[2 * m..3 * m].copy_from_slice(bands.hl.as_slice());
    t1[3 * m..].copy_from_slice(bands.hh.as_slice());
    let t1 = Matrix::new(4, m, t1)?;
    let a2 = u.multiply(&t1)?;
    a2.columns_to_block(out_rows, out_cols)
}

/// Max number of analysis levels an image shape supports.
pub fn max_levels(rows: usize, cols: usize) -> usize {
    (rows.trailing_zeros().min(cols.trailing_zeros())) as usize
}

/// Multi-level decomposition; level i+1 analyzes level i's LL band.
pub fn decompose(img: &Matrix, levels: usize) -> Result<MsvdPyramid> {
    if levels == 0 {
        return Err(Error::range("level count must be at least 1"));
    }
    let (rows, cols) = img.shape();
    let feasible = max_levels(rows, cols);
    if levels > feasible {
        return Err(Error::dimension(format!(
            "{rows}x{cols} image supports at most {feasible} levels, requested {levels}"
        )));
    }
    let mut pyramid_levels = Vec::with_capacity(levels);
    let mut current = img.clone();
    for _ in 0..levels {
        let (bands, u) = analyze_level(&current)?;
        pyramid_levels.push(PyramidLevel {
            lh: bands.lh,
            hl: bands.hl,
            hh: bands.hh,
            u,
        });
        current = bands.ll;
    }
    Ok(MsvdPyramid {
        levels: pyramid_levels,
        top_ll: current,
        original_shape: (rows, cols),
    })
}

/// Inverse of [`decompose`]: synthesizes from the deepest level outward.
pub fn reconstruct(pyramid: &MsvdPyramid) -> Result<Matrix> {
    pyramid.validate()?;
    let (rows, cols) = pyramid.original_shape;
    let mut current = pyramid.top_ll.clone();
    for (i, level) in pyramid.levels.iter().enumerate().rev() {
        let out_rows = rows >> i;
        let out_cols = cols >> i;
        let bands = SubBands {
            ll: current,
            lh: level.lh.clone(),
            hl: level.hl.clone(),
            hh: level.hh.clone(),
        };
        current = synthesize_level(&bands, &level.u, out_rows, out_cols)?;
    }
    Ok(current)
}

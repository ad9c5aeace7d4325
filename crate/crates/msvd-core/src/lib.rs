//! Multiresolution SVD image denoising toolkit.
//!
//! The crate bundles a from-scratch SVD kernel, rank-k truncation, the
//! multiresolution SVD (MSVD) forward/inverse image transform with
//! detail-band thresholding, segmentation and image-quality metrics, and
//! PGM-based image I/O. The `msvd` binary wires everything into a batch CLI.

pub mod denoise;
pub mod error;
pub mod io;
pub mod lowrank;
pub mod matrix;
pub mod metrics;
pub mod msvd;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use svd::SvdFactors;

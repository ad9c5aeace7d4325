//! Noise simulation, noise-level estimation, detail-band shrinkage, and the
//! end-to-end denoising pipelines.

use crate::error::{Error, Result};
use crate::lowrank::truncate_image;
use crate::matrix::Matrix;
use crate::msvd::{decompose, reconstruct};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shrinkage applied to detail coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkMode {
    /// `sign(x) * max(|x| - lambda, 0)`.
    Soft,
    /// `x` if `|x| > lambda`, else 0.
    Hard,
}

/// How the shrinkage threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRule {
    /// A fixed non-negative threshold.
    Explicit(f64),
    /// Universal threshold `lambda = sigma_hat * sqrt(2 ln N)` with
    /// `sigma_hat` estimated from the finest HH band and `N` the pixel
    /// count of the input image.
    Universal,
}

/// Shrinkage mode plus threshold rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    pub mode: ShrinkMode,
    pub rule: ThresholdRule,
}

impl ThresholdSpec {
    pub fn new(mode: ShrinkMode, rule: ThresholdRule) -> Result<Self> {
        if let ThresholdRule::Explicit(lambda) = rule {
            if !lambda.is_finite() || lambda < 0.0 {
                return Err(Error::range(format!(
                    "explicit threshold must be finite and non-negative, got {lambda}"
                )));
            }
        }
        Ok(Self { mode, rule })
    }
}

/// Additive Gaussian noise parameters: standard deviation on the 0-255
/// intensity scale and the generator seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::range(format!(
                "noise sigma must be finite and non-negative, got {sigma}"
            )));
        }
        Ok(Self { sigma, seed })
    }
}

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation `spec.sigma`.
///
/// The generator is pinned: a ChaCha8 stream keyed by `spec.seed`, mapped
/// through the Box-Muller transform, consuming exactly two 64-bit draws per
/// pixel in row-major order. The same seed reproduces the output bit for
/// bit.
pub fn add_gaussian_noise(img: &Matrix, spec: &NoiseSpec) -> Matrix {
    if spec.sigma == 0.0 {
        return img.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    img.map(|x| x + spec.sigma * standard_normal(&mut rng))
}

/// One standard-normal draw via Box-Muller.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // 53-bit uniforms; u1 shifted into (0, 1] so the log is finite.
    let scale = 1.0 / (1u64 << 53) as f64;
    let u1 = 1.0 - (rng.next_u64() >> 11) as f64 * scale;
    let u2 = (rng.next_u64() >> 11) as f64 * scale;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Robust noise-level estimate from a detail band:
/// `median(|entries|) / 0.6745`, the MAD estimator for Gaussian noise.
pub fn estimate_sigma(hh: &Matrix) -> f64 {
    let mut magnitudes: Vec<f64> = hh.as_slice().iter().map(|x| x.abs()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = magnitudes.len();
    let median = if n % 2 == 1 {
        magnitudes[n / 2]
    } else {
        0.5 * (magnitudes[n / 2 - 1] + magnitudes[n / 2])
    };
    median / 0.6745
}

/// Entry-wise shrinkage. `lambda` must be non-negative.
pub fn shrink(band: &Matrix, lambda: f64, mode: ShrinkMode) -> Matrix {
    debug_assert!(lambda >= 0.0);
    match mode {
        ShrinkMode::Soft => band.map(|x| x.signum() * (x.abs() - lambda).max(0.0)),
        ShrinkMode::Hard => band.map(|x| if x.abs() > lambda { x } else { 0.0 }),
    }
}

fn zeroed_count(band: &Matrix, lambda: f64) -> usize {
    band.as_slice().iter().filter(|x| x.abs() <= lambda).count()
}

/// Zeroed-entry tallies for one level's detail bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandZeroCounts {
    pub lh: usize,
    pub hl: usize,
    pub hh: usize,
}

/// What a denoising run did: the noise estimate, the threshold applied at
/// each level, and how many coefficients each detail band lost.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseReport {
    pub levels: usize,
    pub sigma_hat: f64,
    pub lambda_per_level: Vec<f64>,
    pub zeroed_per_level: Vec<BandZeroCounts>,
}

/// MSVD denoising: decompose, shrink every detail band at every level (the
/// approximation band is never touched), reconstruct.
///
/// Under the universal rule the threshold is computed once from the finest
/// HH band and reused at every level.
pub fn denoise_msvd(
    img: &Matrix,
    levels: usize,
    spec: &ThresholdSpec,
) -> Result<(Matrix, DenoiseReport)> {
    let mut pyramid = decompose(img, levels)?;
    let sigma_hat = estimate_sigma(&pyramid.levels[0].hh);
    let lambda = match spec.rule {
        ThresholdRule::Explicit(l) => l,
        ThresholdRule::Universal => {
            let n = (img.rows() * img.cols()) as f64;
            sigma_hat * (2.0 * n.ln()).sqrt()
        }
    };

    let mut zeroed = Vec::with_capacity(levels);
    for level in &mut pyramid.levels {
        zeroed.push(BandZeroCounts {
            lh: zeroed_count(&level.lh, lambda),
            hl: zeroed_count(&level.hl, lambda),
            hh: zeroed_count(&level.hh, lambda),
        });
        level.lh = shrink(&level.lh, lambda, spec.mode);
        level.hl = shrink(&level.hl, lambda, spec.mode);
        level.hh = shrink(&level.hh, lambda, spec.mode);
    }

    let out = reconstruct(&pyramid)?;
    let report = DenoiseReport {
        levels,
        sigma_hat,
        lambda_per_level: vec![lambda; levels],
        zeroed_per_level: zeroed,
    };
    Ok((out, report))
}

/// Rank-k denoising: keep the k strongest singular triplets of the image.
pub fn denoise_lowrank(img: &Matrix, k: usize) -> Result<Matrix> {
    Ok(truncate_image(img, k)?.0)
}

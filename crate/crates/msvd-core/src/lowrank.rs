//! Rank-k truncation of an SVD: keep the k largest singular triplets,
//! the Frobenius-optimal low-rank approximation.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::{svd, SvdFactors};

/// Energy bookkeeping for a rank-k truncation.
///
/// `kept_energy + dropped_energy` equals the total squared Frobenius norm,
/// and `frobenius_error = sqrt(dropped_energy)` is the exact approximation
/// error of the truncated reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub k: usize,
    pub kept_energy: f64,
    pub dropped_energy: f64,
    pub frobenius_error: f64,
}

/// Sums the first k singular triplets `s_i * u_i * v_i^T`.
///
/// `k = 0` yields the zero matrix; `k > min(M, N)` is a range error.
pub fn truncate(factors: &SvdFactors, k: usize) -> Result<(Matrix, TruncationReport)> {
    let limit = factors.s.len();
    if k > limit {
        return Err(Error::range(format!(
            "rank {k} exceeds the {limit} available singular values"
        )));
    }
    let m = factors.u.rows();
    let n = factors.v.rows();
    let mut data = vec![0.0; m * n];
    for r in 0..k {
        let s = factors.s[r];
        if s == 0.0 {
            continue;
        }
        for i in 0..m {
            let scaled = s * factors.u.get(i, r);
            for j in 0..n {
                data[i * n + j] += scaled * factors.v.get(j, r);
            }
        }
    }
    let approx = Matrix::new(m, n, data)?;

    let kept_energy: f64 = factors.s[..k].iter().map(|s| s * s).sum();
    let dropped_energy: f64 = factors.s[k..].iter().map(|s| s * s).sum();
    let report = TruncationReport {
        k,
        kept_energy,
        dropped_energy,
        frobenius_error: dropped_energy.sqrt(),
    };
    Ok((approx, report))
}

/// Factors `img` and truncates to rank k in one step.
///
/// Output values are left unquantized; clamping to a pixel range happens
/// only at image export.
pub fn truncate_image(img: &Matrix, k: usize) -> Result<(Matrix, TruncationReport)> {
    let factors = svd(img)?;
    truncate(&factors, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seeded_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-100.0..100.0))
    }

    #[test]
    fn full_rank_truncation_reconstructs() {
        let a = seeded_matrix(12, 9, 1);
        let (approx, report) = truncate_image(&a, 9).unwrap();
        assert!(max_abs_diff(&approx, &a) <= 1e-9);
        assert!(report.frobenius_error <= 1e-9);
    }

    #[test]
    fn rank_one_input_is_exact_at_k1() {
        // Outer product: a single triplet carries everything.
        let a = Matrix::from_fn(8, 6, |i, j| (i as f64 + 1.0) * (j as f64 - 2.5));
        let (approx, report) = truncate_image(&a, 1).unwrap();
        assert!(max_abs_diff(&approx, &a) <= 1e-9);
        assert!(report.dropped_energy <= 1e-12 * report.kept_energy);
    }

    #[test]
    fn k_zero_gives_zero_matrix() {
        let a = seeded_matrix(5, 5, 2);
        let (approx, report) = truncate_image(&a, 0).unwrap();
        assert_eq!(approx, Matrix::zeros(5, 5));
        assert_eq!(report.kept_energy, 0.0);
        assert!((report.frobenius_error - a.frobenius_norm()).abs() <= 1e-8 * a.frobenius_norm());
    }

    #[test]
    fn k_above_min_dimension_is_range_error() {
        let a = seeded_matrix(4, 6, 3);
        assert!(matches!(truncate_image(&a, 5), Err(Error::Range(_))));
    }

    #[test]
    fn eckart_young_error_matches_direct_residual() {
        // Oracle: the Frobenius norm of A - A_k computed entry by entry.
        let a = seeded_matrix(32, 32, 4);
        let factors = svd(&a).unwrap();
        let scale = a.frobenius_norm();
        for k in 0..=32 {
            let (approx, report) = truncate(&factors, k).unwrap();
            let residual = Matrix::from_fn(32, 32, |i, j| a.get(i, j) - approx.get(i, j));
            let direct = residual.frobenius_norm();
            assert!(
                (direct - report.frobenius_error).abs() <= 1e-10 * scale,
                "k={k}: direct {direct} vs reported {}",
                report.frobenius_error
            );
        }
    }

    #[test]
    fn energy_split_is_consistent() {
        let a = seeded_matrix(20, 14, 5);
        let factors = svd(&a).unwrap();
        let total: f64 = factors.s.iter().map(|s| s * s).sum();
        for k in [0, 1, 7, 14] {
            let (_, report) = truncate(&factors, k).unwrap();
            let sum = report.kept_energy + report.dropped_energy;
            assert!((sum - total).abs() <= 1e-8 * total.max(1.0));
        }
    }

    #[test]
    fn error_is_non_increasing_in_k() {
        let a = seeded_matrix(16, 16, 6);
        let mut previous = f64::INFINITY;
        for k in 0..=16 {
            let (_, report) = truncate_image(&a, k).unwrap();
            assert!(report.frobenius_error <= previous + 1e-12);
            previous = report.frobenius_error;
        }
    }

    #[test]
    fn constant_image_is_rank_one() {
        let a = Matrix::from_fn(10, 10, |_, _| 42.0);
        let (approx, _) = truncate_image(&a, 1).unwrap();
        assert!(max_abs_diff(&approx, &a) <= 1e-9);
    }
}

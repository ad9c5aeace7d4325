//! Segmentation metrics (binary accuracy, IoU, Dice) over pixel masks, plus
//! MSE/PSNR for denoising quality.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Per-pixel boolean mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dimension(format!(
                "mask dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if bits.len() != rows * cols {
            return Err(Error::dimension(format!(
                "bit count {} does not match shape {rows}x{cols}",
                bits.len()
            )));
        }
        Ok(Self { rows, cols, bits })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.bits[row * self.cols + col]
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Pixel tallies comparing a predicted mask against ground truth; the four
/// counts always sum to the pixel total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_positive: u64,
    pub true_negative: u64,
    pub false_positive: u64,
    pub false_negative: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.true_positive + self.true_negative + self.false_positive + self.false_negative
    }
}

/// Pixel-wise confusion tally; a set bit counts as positive.
pub fn confusion(pred: &BinaryMask, gt: &BinaryMask) -> Result<ConfusionCounts> {
    if pred.shape() != gt.shape() {
        return Err(Error::dimension(format!(
            "mask shapes differ: {:?} vs {:?}",
            pred.shape(),
            gt.shape()
        )));
    }
    let mut counts = ConfusionCounts {
        true_positive: 0,
        true_negative: 0,
        false_positive: 0,
        false_negative: 0,
    };
    for (&p, &g) in pred.bits.iter().zip(&gt.bits) {
        match (p, g) {
            (true, true) => counts.true_positive += 1,
            (false, false) => counts.true_negative += 1,
            (true, false) => counts.false_positive += 1,
            (false, true) => counts.false_negative += 1,
        }
    }
    Ok(counts)
}

/// `(TP + TN) / (TP + TN + FP + FN)`.
pub fn binary_accuracy(counts: &ConfusionCounts) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::UndefinedMetric("binary accuracy of empty masks"));
    }
    Ok((counts.true_positive + counts.true_negative) as f64 / total as f64)
}

/// Intersection over union. Two empty masks agree perfectly: 1.0.
pub fn iou(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    let c = confusion(pred, gt)?;
    let union = c.true_positive + c.false_positive + c.false_negative;
    if union == 0 {
        return Ok(1.0);
    }
    Ok(c.true_positive as f64 / union as f64)
}

/// Dice coefficient `2|P and G| / (|P| + |G|)`. Two empty masks give 1.0.
pub fn dice(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    let c = confusion(pred, gt)?;
    let denom = 2 * c.true_positive + c.false_positive + c.false_negative;
    if denom == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * c.true_positive as f64 / denom as f64)
}

/// Mean squared entry difference.
pub fn mse(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dimension(format!(
            "shapes differ: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = (a.rows() * a.cols()) as f64;
    let sum: f64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n)
}

/// Peak signal-to-noise ratio in dB. Identical inputs yield the infinity
/// sentinel rather than an error.
pub fn psnr(a: &Matrix, b: &Matrix, peak: f64) -> Result<f64> {
    let err = mse(a, b)?;
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / err).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask(rows: usize, cols: usize, set: &[(usize, usize)]) -> BinaryMask {
        let mut bits = vec![false; rows * cols];
        for &(r, c) in set {
            bits[r * cols + c] = true;
        }
        BinaryMask::new(rows, cols, bits).unwrap()
    }

    fn full(rows: usize, cols: usize) -> BinaryMask {
        BinaryMask::new(rows, cols, vec![true; rows * cols]).unwrap()
    }

    fn empty(rows: usize, cols: usize) -> BinaryMask {
        BinaryMask::new(rows, cols, vec![false; rows * cols]).unwrap()
    }

    #[test]
    fn confusion_all_set() {
        let c = confusion(&full(4, 4), &full(4, 4)).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                true_positive: 16,
                true_negative: 0,
                false_positive: 0,
                false_negative: 0
            }
        );
    }

    #[test]
    fn confusion_complement_has_no_agreement() {
        let gt = mask(2, 2, &[(0, 0), (1, 1)]);
        let pred = mask(2, 2, &[(0, 1), (1, 0)]);
        let c = confusion(&pred, &gt).unwrap();
        assert_eq!(c.true_positive, 0);
        assert_eq!(c.true_negative, 0);
        assert_eq!(c.total(), 4);
    }

    /// Hand-enumerated 4x4 case: gt has 3 set pixels, pred has 2 with one
    /// overlapping. Counts (tp, fp, fn, tn) = (1, 1, 2, 12).
    fn enumerated_pair() -> (BinaryMask, BinaryMask) {
        let gt = mask(4, 4, &[(0, 0), (0, 1), (1, 0)]);
        let pred = mask(4, 4, &[(0, 0), (3, 3)]);
        (pred, gt)
    }

    #[test]
    fn confusion_hand_enumeration() {
        let (pred, gt) = enumerated_pair();
        let c = confusion(&pred, &gt).unwrap();
        assert_eq!(c.true_positive, 1);
        assert_eq!(c.false_positive, 1);
        assert_eq!(c.false_negative, 2);
        assert_eq!(c.true_negative, 12);
        assert_eq!(c.total(), 16);
    }

    #[test]
    fn accuracy_hand_values() {
        let (pred, gt) = enumerated_pair();
        let c = confusion(&pred, &gt).unwrap();
        assert_eq!(binary_accuracy(&c).unwrap(), 13.0 / 16.0);
        let perfect = confusion(&full(4, 4), &full(4, 4)).unwrap();
        assert_eq!(binary_accuracy(&perfect).unwrap(), 1.0);
        let gt2 = mask(2, 2, &[(0, 0), (1, 1)]);
        let pred2 = mask(2, 2, &[(0, 1), (1, 0)]);
        assert_eq!(binary_accuracy(&confusion(&pred2, &gt2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn iou_hand_values() {
        let (pred, gt) = enumerated_pair();
        assert_eq!(iou(&pred, &gt).unwrap(), 0.25);
        assert_eq!(iou(&full(3, 3), &full(3, 3)).unwrap(), 1.0);
        let a = mask(2, 2, &[(0, 0)]);
        let b = mask(2, 2, &[(1, 1)]);
        assert_eq!(iou(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn dice_hand_values() {
        let (pred, gt) = enumerated_pair();
        assert_eq!(dice(&pred, &gt).unwrap(), 0.4);
        assert_eq!(dice(&full(3, 3), &full(3, 3)).unwrap(), 1.0);
        let a = mask(2, 2, &[(0, 0)]);
        let b = mask(2, 2, &[(1, 1)]);
        assert_eq!(dice(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn empty_masks_agree_by_convention() {
        assert_eq!(iou(&empty(3, 3), &empty(3, 3)).unwrap(), 1.0);
        assert_eq!(dice(&empty(3, 3), &empty(3, 3)).unwrap(), 1.0);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(confusion(&empty(2, 2), &empty(2, 3)).is_err());
        assert!(iou(&empty(2, 2), &empty(3, 2)).is_err());
        assert!(mse(&Matrix::zeros(2, 2), &Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn mse_psnr_hand_values() {
        let a = Matrix::zeros(4, 4);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        assert_eq!(psnr(&a, &a, 255.0).unwrap(), f64::INFINITY);

        let b = Matrix::from_fn(4, 4, |_, _| 255.0);
        assert_eq!(psnr(&a, &b, 255.0).unwrap(), 0.0);

        let x = Matrix::new(1, 1, vec![0.0]).unwrap();
        let y = Matrix::new(1, 1, vec![10.0]).unwrap();
        assert_eq!(mse(&x, &y).unwrap(), 100.0);
    }

    fn random_mask(rows: usize, cols: usize, seed: u64, density: f64) -> BinaryMask {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let bits = (0..rows * cols).map(|_| rng.random::<f64>() < density).collect();
        BinaryMask::new(rows, cols, bits).unwrap()
    }

    proptest! {
        #[test]
        fn dice_iou_identity(seed in 0u64..500, density_a in 0.0f64..1.0, density_b in 0.0f64..1.0) {
            let p = random_mask(8, 8, seed, density_a);
            let g = random_mask(8, 8, seed.wrapping_add(1), density_b);
            let i = iou(&p, &g).unwrap();
            let d = dice(&p, &g).unwrap();
            prop_assert!((d - 2.0 * i / (1.0 + i)).abs() <= 1e-12);
            prop_assert!(i <= d + 1e-15);
            prop_assert!((0.0..=1.0).contains(&i) && (0.0..=1.0).contains(&d));
        }

        #[test]
        fn metrics_are_symmetric(seed in 0u64..500) {
            let p = random_mask(6, 6, seed, 0.4);
            let g = random_mask(6, 6, seed.wrapping_add(9000), 0.6);
            prop_assert_eq!(iou(&p, &g).unwrap(), iou(&g, &p).unwrap());
            prop_assert_eq!(dice(&p, &g).unwrap(), dice(&g, &p).unwrap());
            let acc_pg = binary_accuracy(&confusion(&p, &g).unwrap()).unwrap();
            let acc_gp = binary_accuracy(&confusion(&g, &p).unwrap()).unwrap();
            prop_assert_eq!(acc_pg, acc_gp);
        }

        #[test]
        fn confusion_sums_to_pixel_total(seed in 0u64..500) {
            let p = random_mask(5, 7, seed, 0.5);
            let g = random_mask(5, 7, seed.wrapping_add(31), 0.5);
            prop_assert_eq!(confusion(&p, &g).unwrap().total(), 35);
        }
    }
}

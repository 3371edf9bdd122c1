//! Numerical building blocks shared by the transforms: deterministic
//! reductions, FFT plans, the chirp-z transform and float formatting.

mod czt;
mod fft;
mod format;

pub use czt::{czt, Czt};
pub use fft::{fft_forward, fft_inverse, fft_len, linear_convolve};
pub use format::{fmt_sig, round_sig, to_json};

use num_complex::Complex64;
use rayon::prelude::*;

/// Leaf size below which sums are accumulated sequentially.
const LEAF: usize = 64;

/// Pairwise (cascade) summation with a split tree that depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Complex counterpart of [`pairwise_sum`].
pub fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Parallel pairwise summation. The tree matches [`pairwise_sum`] above the
/// parallel cutoff, so the result is independent of the thread count.
pub fn par_pairwise_sum(xs: &[f64]) -> f64 {
    const CUTOFF: usize = 1 << 14;
    if xs.len() <= CUTOFF {
        return pairwise_sum(xs);
    }
    let mid = xs.len() / 2;
    let (l, r) = rayon::join(|| par_pairwise_sum(&xs[..mid]), || par_pairwise_sum(&xs[mid..]));
    l + r
}

/// Maps `f` over indices in parallel and reduces the terms pairwise.
pub fn par_map_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let terms: Vec<f64> = (0..n).into_par_iter().map(f).collect();
    par_pairwise_sum(&terms)
}

/// `sinc(x) = sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `e^{2πi t}` with the argument reduced modulo one first.
pub fn cis2pi(t: f64) -> Complex64 {
    let r = t - t.round();
    let th = std::f64::consts::TAU * r;
    Complex64::new(th.cos(), th.sin())
}

/// Relative l2 distance `‖a − b‖ / ‖b‖` (absolute when `b` vanishes).
pub fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let num: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).collect();
    let den: Vec<f64> = b.iter().map(|y| y.norm_sqr()).collect();
    let (num, den) = (pairwise_sum(&num), pairwise_sum(&den));
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Largest modulus in a slice.
pub fn max_abs(xs: &[Complex64]) -> f64 {
    xs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_and_parallel() {
        let xs: Vec<f64> = (0..100_000).map(|i| ((i * 7919) % 1013) as f64 * 1e-3).collect();
        let naive: f64 = xs.iter().sum();
        let pw = pairwise_sum(&xs);
        assert!((pw - naive).abs() < 1e-8 * naive);
        assert_eq!(pw.to_bits(), par_pairwise_sum(&xs).to_bits());
    }

    #[test]
    fn cis_reduces_large_arguments() {
        let z = cis2pi(1e6 + 0.25);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn sinc_small_argument() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(1e-9) - 1.0).abs() < 1e-15);
        assert!((sinc(std::f64::consts::PI)).abs() < 1e-15);
    }
}

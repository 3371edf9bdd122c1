use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward DFT `X_k = Σ x_n e^{−2πi nk/N}` (unnormalized).
pub fn fft_forward(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// In-place inverse DFT `x_n = Σ X_k e^{2πi nk/N}` (unnormalized).
pub fn fft_inverse(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

/// Smallest length `≥ n` of the form `2^i 3^j`.
pub fn fft_len(n: usize) -> usize {
    let mut best = n.next_power_of_two();
    let mut p3 = 1usize;
    while p3 < best {
        let mut m = p3;
        while m < n {
            m *= 2;
        }
        best = best.min(m);
        p3 *= 3;
    }
    best
}

/// Full linear convolution `c_m = Σ_i a_i b_{m−i}` of length `a.len() + b.len() − 1`.
pub fn linear_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let l = fft_len(n);
    let mut fa = vec![Complex64::new(0.0, 0.0); l];
    let mut fb = fa.clone();
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    fft_forward(&mut fa);
    fft_forward(&mut fb);
    let s = 1.0 / l as f64;
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y * s;
    }
    fft_inverse(&mut fa);
    fa.truncate(n);
    fa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_lengths() {
        assert_eq!(fft_len(12287), 12288);
        assert_eq!(fft_len(1000), 1024);
        assert_eq!(fft_len(17), 18);
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let a: Vec<Complex64> = (0..13).map(|i| Complex64::new(i as f64, 1.0 - i as f64 * 0.3)).collect();
        let b: Vec<Complex64> = (0..7).map(|i| Complex64::new((i * i) as f64 * 0.1, -0.5)).collect();
        let c = linear_convolve(&a, &b);
        for (m, cm) in c.iter().enumerate() {
            let mut d = Complex64::new(0.0, 0.0);
            for (i, ai) in a.iter().enumerate() {
                if m >= i && m - i < b.len() {
                    d += ai * b[m - i];
                }
            }
            assert!((cm - d).norm() < 1e-11);
        }
    }
}

use super::fft::{fft_forward, fft_inverse, fft_len};
use super::cis2pi;
use num_complex::Complex64;

/// Precomputed chirp-z transform `X_k = Σ_{n<N} x_n e^{2πi β n k}` for `k < M`,
/// evaluated through Bluestein's identity `nk = (n² + k² − (k−n)²)/2`.
#[derive(Debug, Clone)]
pub struct Czt {
    n: usize,
    m: usize,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    filter: Vec<Complex64>,
}

/// `e^{πi β j²}` with `β j²` reduced exactly enough for large `j`.
fn chirp(beta: f64, j: i64) -> Complex64 {
    let j2 = (j * j) as f64;
    cis2pi(0.5 * beta * j2)
}

impl Czt {
    pub fn new(n: usize, m: usize, beta: f64) -> Self {
        let l = fft_len(n + m - 1);
        let pre = (0..n as i64).map(|j| chirp(beta, j)).collect();
        let post = (0..m as i64).map(|j| chirp(beta, j)).collect();
        let mut filter = vec![Complex64::new(0.0, 0.0); l];
        for j in 0..m {
            filter[j] = chirp(beta, j as i64).conj();
        }
        for j in 1..n {
            filter[l - j] = chirp(beta, j as i64).conj();
        }
        fft_forward(&mut filter);
        let s = 1.0 / l as f64;
        filter.iter_mut().for_each(|z| *z *= s);
        Czt { n, m, pre, post, filter }
    }

    pub fn input_len(&self) -> usize {
        self.n
    }

    pub fn output_len(&self) -> usize {
        self.m
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "chirp-z input length");
        let l = self.filter.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); l];
        for (b, (xi, c)) in buf.iter_mut().zip(x.iter().zip(&self.pre)) {
            *b = xi * c;
        }
        fft_forward(&mut buf);
        for (b, f) in buf.iter_mut().zip(&self.filter) {
            *b *= f;
        }
        fft_inverse(&mut buf);
        buf.truncate(self.m);
        for (b, c) in buf.iter_mut().zip(&self.post) {
            *b *= c;
        }
        buf
    }
}

/// One-shot chirp-z transform; see [`Czt`].
pub fn czt(x: &[Complex64], beta: f64, m: usize) -> Vec<Complex64> {
    Czt::new(x.len(), m, beta).apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let x: Vec<Complex64> = (0..37).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64).cos())).collect();
        for &beta in &[0.013, -0.31, 1.0 / 37.0, 2.7e-4] {
            let y = czt(&x, beta, 50);
            for (k, yk) in y.iter().enumerate() {
                let d: Complex64 = x.iter().enumerate().map(|(n, xn)| xn * cis2pi(beta * (n * k) as f64)).sum();
                assert!((yk - d).norm() < 1e-10, "beta {beta} k {k}");
            }
        }
    }

    #[test]
    fn reduces_to_dft() {
        let n = 16;
        let x: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let y = czt(&x, -1.0 / n as f64, n);
        let mut z = x.clone();
        fft_forward(&mut z);
        for (a, b) in y.iter().zip(&z) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

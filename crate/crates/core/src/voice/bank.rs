use crate::atom::{cross_ift, Atom};
use crate::numeric::{fft_forward, fft_inverse, fft_len};
use crate::signal::{Axis, Band};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::OnceLock;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-scale lag kernels on a uniform axis of `n` points with spacing `db`,
/// stored as transforms ready for linear FFT convolution.
///
/// Analysis: `V(b_k, a) = Δb Σ_i v_i D_a(b_k − x_i)` with
/// `D_a(x) = √a ∫_{|ξ|≤ν} conj(û(aξ)) e^{2πiξx} dξ`, the exact voice of the
/// band-limited interpolant of the samples. Synthesis uses
/// `E_a(x) = √a ∫_{|ξ|≤ν} û(aξ) e^{2πiξx} dξ`.
pub(crate) struct ScaleBank {
    n: usize,
    db: f64,
    len: usize,
    atom: Atom,
    scales: Vec<f64>,
    analysis: Vec<Option<Vec<Complex64>>>,
    synthesis: OnceLock<Vec<Option<Vec<Complex64>>>>,
}

impl ScaleBank {
    pub(crate) fn new(atom: &Atom, n: usize, db: f64, scales: &[f64]) -> Self {
        let len = fft_len(3 * n - 2);
        let mut bank = ScaleBank {
            n,
            db,
            len,
            atom: atom.clone(),
            scales: scales.to_vec(),
            analysis: Vec::new(),
            synthesis: OnceLock::new(),
        };
        bank.analysis = bank.kernels(true);
        bank
    }

    fn band(&self) -> Band {
        let nyq = 0.5 / self.db;
        Band { lo: -nyq, hi: nyq }
    }

    fn kernels(&self, conj: bool) -> Vec<Option<Vec<Complex64>>> {
        let lags = Axis { x0: -((self.n - 1) as f64) * self.db, dx: self.db, n: 2 * self.n - 1 };
        let ind = Atom::indicator(self.band());
        self.scales
            .par_iter()
            .map(|&a| {
                let d = cross_ift(&ind, &self.atom, a, None, lags, conj);
                if d.iter().all(|z| *z == ZERO) {
                    return None;
                }
                let mut buf = vec![ZERO; self.len];
                let s = a.sqrt() * self.db / self.len as f64;
                for (b, z) in buf.iter_mut().zip(d) {
                    *b = z * s;
                }
                fft_forward(&mut buf);
                Some(buf)
            })
            .collect()
    }

    fn padded_fft(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.len];
        buf[..v.len()].copy_from_slice(v);
        fft_forward(&mut buf);
        buf
    }

    /// Voice slices, one per scale, each of length `n`.
    pub(crate) fn analyze(&self, v: &[Complex64]) -> Vec<Vec<Complex64>> {
        assert_eq!(v.len(), self.n, "signal length");
        let vh = self.padded_fft(v);
        self.analysis
            .par_iter()
            .map(|k| match k {
                None => vec![ZERO; self.n],
                Some(k) => {
                    let mut buf: Vec<Complex64> = vh.iter().zip(k).map(|(x, y)| x * y).collect();
                    fft_inverse(&mut buf);
                    buf[self.n - 1..2 * self.n - 1].to_vec()
                }
            })
            .collect()
    }

    /// `Σ_a c_a Δb Σ_k f_a(b_k) E_a(x_i − b_k)` for per-scale slices `f_a`.
    pub(crate) fn synthesize(&self, slices: &[Vec<Complex64>], weights: &[f64]) -> Vec<Complex64> {
        let syn = self.synthesis.get_or_init(|| self.kernels(false));
        let terms: Vec<Vec<Complex64>> = slices
            .par_iter()
            .zip(syn.par_iter())
            .zip(weights.par_iter())
            .filter_map(|((f, k), &w)| {
                let k = k.as_ref()?;
                if f.iter().all(|z| *z == ZERO) {
                    return None;
                }
                let fh = self.padded_fft(f);
                Some(fh.iter().zip(k).map(|(x, y)| x * y * w).collect())
            })
            .collect();
        let mut acc = vec![ZERO; self.len];
        for t in &terms {
            for (a, x) in acc.iter_mut().zip(t) {
                *a += x;
            }
        }
        fft_inverse(&mut acc);
        acc[self.n - 1..2 * self.n - 1].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::cis2pi;

    #[test]
    fn analysis_matches_direct_sum() {
        let atom = Atom::log_bump(0.25, 0.5).unwrap();
        let (n, db) = (32, 0.5);
        let bank = ScaleBank::new(&atom, n, db, &[0.7, 1.3]);
        let v: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64 * 0.3).sin(), (i as f64 * 0.11).cos())).collect();
        let out = bank.analyze(&v);
        let lags = Axis { x0: -((n - 1) as f64) * db, dx: db, n: 2 * n - 1 };
        let band = Band { lo: -1.0, hi: 1.0 };
        for (s, &a) in [0.7, 1.3].iter().enumerate() {
            let d = cross_ift(&Atom::indicator(band), &atom, a, None, lags, true);
            for k in 0..n {
                let mut want = Complex64::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    want += vi * d[k + n - 1 - i] * (db * a.sqrt());
                }
                assert!((out[s][k] - want).norm() < 1e-12, "scale {a} node {k}");
            }
        }
    }

    #[test]
    fn synthesis_of_single_node_is_shifted_atom() {
        let atom = Atom::shannon();
        let (n, db) = (16, 0.5);
        let bank = ScaleBank::new(&atom, n, db, &[1.0]);
        let mut f = vec![ZERO; n];
        f[5] = Complex64::new(2.0, 0.0);
        let s = bank.synthesize(&[f], &[1.0]);
        // Δb · 2 · u(x_i − b_5), u band-limited Shannon wavelet.
        for (i, z) in s.iter().enumerate() {
            let x = (i as f64 - 5.0) * db;
            let u = crate::numeric::sinc(std::f64::consts::PI * x) - 0.5 * crate::numeric::sinc(0.5 * std::f64::consts::PI * x);
            assert!((z - Complex64::new(db * 2.0 * u, 0.0)).norm() < 1e-12);
        }
        let _ = cis2pi(0.0);
    }
}

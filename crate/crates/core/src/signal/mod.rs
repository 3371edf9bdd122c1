//! Sampled signals on `ℝ` and on `ℝ × S¹`, the unitary Fourier pair,
//! band-limiting, the mollifier family and the canonical atoms (sinc kernel,
//! Shannon wavelet).

mod fourier;
mod io;
mod mollifier;
mod polar;

pub use fourier::{bandlimit_project, fourier, inv_fourier, SpectralProfile};
pub use io::{read_binary, read_csv, write_binary, write_csv};
pub use mollifier::{Bump, Mollifier};
pub use polar::{theta_modes, RawPolar, Signal2D};

use crate::error::{Error, Result};
use crate::grid::GroupGrid;
use crate::numeric::{pairwise_sum, sinc};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Uniform sample positions `x_k = x0 + k·dx`, `k < n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(Error::config(format!("axis spacing {dx} must be positive")));
        }
        Ok(Axis { x0, dx, n })
    }

    /// Symmetric axis `[−h, h)` with `n` points.
    pub fn centered(halfwidth: f64, n: usize) -> Self {
        Axis { x0: -halfwidth, dx: 2.0 * halfwidth / n as f64, n }
    }

    /// The b-axis of a grid.
    pub fn of_grid(grid: &GroupGrid) -> Self {
        Axis { x0: grid.b_nodes()[0], dx: grid.db(), n: grid.n_b() }
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    pub fn nyquist(&self) -> f64 {
        0.5 / self.dx
    }

    pub fn same_as(&self, other: &Axis) -> bool {
        self.n == other.n
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
            && (self.x0 - other.x0).abs() <= 1e-9 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|k| self.x(k))
    }
}

/// A closed frequency interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::config(format!("band [{lo}, {hi}] must satisfy lo < hi")));
        }
        Ok(Band { lo, hi })
    }

    /// `[−ω, ω]`.
    pub fn symmetric(omega: f64) -> Result<Self> {
        Band::new(-omega, omega)
    }

    /// `χ_Ω(ξ)` with half weight at the endpoints (to a relative `1e-12`).
    pub fn indicator(&self, xi: f64) -> f64 {
        let tol = 1e-12 * (self.hi - self.lo).max(xi.abs());
        if (xi - self.lo).abs() <= tol || (xi - self.hi).abs() <= tol {
            0.5
        } else if xi > self.lo && xi < self.hi {
            1.0
        } else {
            0.0
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Samples on a uniform axis of power-of-two length, with optional band metadata.
#[derive(Debug, Clone)]
pub struct Signal1D {
    axis: Axis,
    samples: Vec<Complex64>,
    band: Option<Band>,
}

impl Signal1D {
    pub fn new(axis: Axis, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != axis.n {
            return Err(Error::config(format!("{} samples for an axis of {} points", samples.len(), axis.n)));
        }
        if !axis.n.is_power_of_two() {
            return Err(Error::config(format!("signal length {} is not a power of two", axis.n)));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain("non-finite signal sample"));
        }
        Ok(Signal1D { axis, samples, band: None })
    }

    pub fn from_fn(axis: Axis, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = axis.points().map(f).collect();
        Signal1D::new(axis, samples)
    }

    pub fn zeros(axis: Axis) -> Result<Self> {
        Signal1D::new(axis, vec![Complex64::new(0.0, 0.0); axis.n])
    }

    /// Attaches band metadata after checking that the spectral mass outside
    /// `band` is below `1e-9` of the total.
    pub fn with_band(self, band: Band) -> Result<Self> {
        let spec = fourier(&self);
        let total: f64 = pairwise_sum(&spec.values().iter().map(|z| z.norm_sqr()).collect::<Vec<_>>());
        let outside: Vec<f64> = spec
            .frequencies()
            .zip(spec.values())
            .map(|(xi, z)| (1.0 - band.indicator(xi)).max(0.0) * z.norm_sqr())
            .collect();
        let outside = pairwise_sum(&outside);
        if total > 0.0 && outside > 1e-9 * total {
            return Err(Error::domain(format!(
                "spectral mass outside [{}, {}] is {:.3e} of the total",
                band.lo,
                band.hi,
                outside / total
            )));
        }
        Ok(Signal1D { band: Some(band), ..self })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn band(&self) -> Option<Band> {
        self.band
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Signal1D {
        Signal1D { axis: self.axis, samples: self.samples.iter().map(|&z| f(z)).collect(), band: self.band }
    }

    pub fn scale(&self, c: Complex64) -> Signal1D {
        self.map(|z| z * c)
    }

    pub fn zip_with(&self, other: &Signal1D, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Signal1D> {
        if !self.axis.same_as(&other.axis) {
            return Err(Error::config("signals are sampled on different axes"));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Ok(Signal1D { axis: self.axis, samples, band: None })
    }

    pub fn sub(&self, other: &Signal1D) -> Result<Signal1D> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `(Δx Σ |f|^p)^{1/p}`, or the maximum for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        let t: Vec<f64> = self.samples.iter().map(|z| z.norm().powf(p)).collect();
        (self.axis.dx * pairwise_sum(&t)).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    /// `‖self − other‖₂ / ‖other‖₂`.
    pub fn rel_diff(&self, other: &Signal1D) -> Result<f64> {
        let d = self.sub(other)?.l2_norm();
        let n = other.l2_norm();
        Ok(if n == 0.0 { d } else { d / n })
    }

    /// Zero-extends to the next power of two on the same origin and spacing.
    pub(crate) fn from_raw_padded(x0: f64, dx: f64, mut samples: Vec<Complex64>) -> Result<Self> {
        let n = samples.len().next_power_of_two().max(1);
        samples.resize(n, Complex64::new(0.0, 0.0));
        Signal1D::new(Axis::new(x0, dx, n)?, samples)
    }
}

/// Samples of `K(b) = 2ω sinc(2ωπb)`, the inverse transform of `χ_{[−ω,ω]}`.
pub fn sinc_kernel(omega: f64, axis: Axis) -> Result<Signal1D> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("band half-width ω = {omega} must be positive")));
    }
    Signal1D::from_fn(axis, |b| Complex64::new(2.0 * omega * sinc(2.0 * omega * PI * b), 0.0))
}

/// Samples of the real Shannon wavelet `u(x) = sinc(πx) − ½ sinc(πx/2)`,
/// whose transform is `χ_{[1/4,1/2]}(|ξ|)`.
pub fn shannon_wavelet(axis: Axis) -> Result<Signal1D> {
    if axis.nyquist() < 0.5 {
        return Err(Error::domain(format!("axis Nyquist {} is below 1/2", axis.nyquist())));
    }
    Signal1D::from_fn(axis, |x| Complex64::new(sinc(PI * x) - 0.5 * sinc(0.5 * PI * x), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_kernel_value_at_zero_and_zeros() {
        let axis = Axis::centered(64.0, 512);
        let k = sinc_kernel(0.5, axis).unwrap();
        let i0 = 256;
        assert_eq!(axis.x(i0), 0.0);
        assert_eq!(k.samples()[i0].re, 1.0);
        // Zeros at b = k/(2ω) = k.
        for j in [1usize, 2, 5, 30] {
            assert!(k.samples()[i0 + 4 * j].norm() < 1e-15);
        }
        let k = sinc_kernel(0.25, axis).unwrap();
        assert_eq!(k.samples()[i0].re, 0.5);
    }

    #[test]
    fn shannon_wavelet_is_real_even_and_matches_product_form() {
        let axis = Axis::centered(32.0, 256);
        let u = shannon_wavelet(axis).unwrap();
        for (k, z) in u.samples().iter().enumerate().skip(1) {
            let x = axis.x(k);
            assert_eq!(z.im, 0.0);
            assert!((z.re - u.samples()[256 - k].re).abs() < 1e-15);
            let alt = 0.5 * sinc(PI * x / 4.0) * (3.0 * PI * x / 4.0).cos();
            assert!((z.re - alt).abs() < 1e-12, "x = {x}");
        }
        assert!(shannon_wavelet(Axis::centered(32.0, 16)).is_err());
    }

    #[test]
    fn band_indicator_half_weights() {
        let b = Band::new(-0.25, 0.25).unwrap();
        assert_eq!(b.indicator(0.25), 0.5);
        assert_eq!(b.indicator(0.0), 1.0);
        assert_eq!(b.indicator(0.3), 0.0);
    }

    #[test]
    fn length_must_be_power_of_two() {
        assert!(Signal1D::zeros(Axis::centered(1.0, 12)).is_err());
    }
}

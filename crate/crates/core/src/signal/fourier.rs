use super::{Axis, Band, Signal1D};
use crate::error::{Error, Result};
use crate::numeric::{cis2pi, fft_forward, fft_inverse};
use num_complex::Complex64;

/// Values on the uniform frequency grid `ξ_j = xi0 + j·dxi`. `origin` is the
/// first sample position of the signal the profile came from.
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    xi0: f64,
    dxi: f64,
    values: Vec<Complex64>,
    origin: f64,
}

impl SpectralProfile {
    pub fn new(xi0: f64, dxi: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dxi > 0.0) || values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain("spectral profile needs positive spacing and finite values"));
        }
        let origin = -0.5 / dxi;
        Ok(SpectralProfile { xi0, dxi, values, origin })
    }

    /// Samples `f` on `ξ_j = xi0 + j·dxi`, `j < n`.
    pub fn from_fn(xi0: f64, dxi: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        SpectralProfile::new(xi0, dxi, (0..n).map(|j| f(xi0 + j as f64 * dxi)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |j| self.xi0 + j as f64 * self.dxi)
    }

    /// Smallest interval containing every nonzero entry.
    pub fn support(&self) -> Option<Band> {
        let first = self.values.iter().position(|z| z.norm() > 0.0)?;
        let last = self.values.iter().rposition(|z| z.norm() > 0.0)?;
        Some(Band { lo: self.xi0 + first as f64 * self.dxi, hi: self.xi0 + last as f64 * self.dxi })
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> SpectralProfile {
        let values = self.frequencies().zip(&self.values).map(|(xi, &z)| f(xi, z)).collect();
        SpectralProfile { values, ..*self }
    }

    /// `∫ |g|² dξ` by the rectangle rule.
    pub fn l2_norm(&self) -> f64 {
        (self.dxi * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }
}

/// Unitary transform `f̂(ξ) = ∫ f(x) e^{−2πiξx} dx` on the FFT frequency grid
/// `ξ_j = (j − N/2)/(NΔx)`.
pub fn fourier(f: &Signal1D) -> SpectralProfile {
    let ax = f.axis();
    let n = ax.n;
    let dxi = 1.0 / (n as f64 * ax.dx);
    let mut buf: Vec<Complex64> =
        f.samples().iter().enumerate().map(|(k, z)| if k % 2 == 0 { *z } else { -*z }).collect();
    fft_forward(&mut buf);
    let xi0 = -(n as f64 / 2.0) * dxi;
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, z)| z * ax.dx * cis2pi(-(xi0 + j as f64 * dxi) * ax.x0))
        .collect();
    SpectralProfile { xi0, dxi, values, origin: ax.x0 }
}

/// Inverse of [`fourier`], returning samples on the original axis.
pub fn inv_fourier(spec: &SpectralProfile) -> Result<Signal1D> {
    let n = spec.len();
    if !n.is_power_of_two() {
        return Err(Error::config(format!("spectral profile length {n} is not a power of two")));
    }
    let expected_xi0 = -(n as f64 / 2.0) * spec.dxi;
    if (spec.xi0 - expected_xi0).abs() > 1e-9 * spec.dxi {
        return Err(Error::config("spectral profile is not on an FFT frequency grid"));
    }
    let dx = 1.0 / (n as f64 * spec.dxi);
    let x0 = spec.origin;
    let mut buf: Vec<Complex64> = spec
        .values
        .iter()
        .enumerate()
        .map(|(j, z)| z * cis2pi((spec.xi0 + j as f64 * spec.dxi) * x0))
        .collect();
    fft_inverse(&mut buf);
    let samples = buf
        .into_iter()
        .enumerate()
        .map(|(k, z)| if k % 2 == 0 { z * spec.dxi } else { -z * spec.dxi })
        .collect();
    Signal1D::new(Axis::new(x0, dx, n)?, samples)
}

/// Orthogonal projection onto signals with spectrum in `band`.
pub fn bandlimit_project(f: &Signal1D, band: Band) -> Result<Signal1D> {
    let nyq = f.axis().nyquist();
    let tol = 1e-12 * nyq;
    if band.lo < -nyq - tol || band.hi > nyq + tol {
        return Err(Error::domain(format!(
            "band [{}, {}] exceeds the Nyquist band [−{nyq}, {nyq}]",
            band.lo, band.hi
        )));
    }
    let spec = fourier(f).map(|xi, z| z * band.indicator(xi));
    let mut out = inv_fourier(&spec)?;
    out.band = Some(band);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn impulse_has_flat_spectrum() {
        let ax = Axis::centered(8.0, 64);
        let mut s = vec![Complex64::new(0.0, 0.0); 64];
        s[32] = Complex64::new(1.0 / ax.dx, 0.0);
        let f = Signal1D::new(ax, s).unwrap();
        assert!(fourier(&f).values().iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gaussian_is_self_dual() {
        let ax = Axis::centered(8.0, 256);
        let f = Signal1D::from_fn(ax, |x| Complex64::new((-PI * x * x).exp(), 0.0)).unwrap();
        let spec = fourier(&f);
        for (xi, z) in spec.frequencies().zip(spec.values()) {
            assert!((z - (-PI * xi * xi).exp()).norm() < 1e-9, "ξ = {xi}");
        }
    }

    #[test]
    fn shifted_origin_phase() {
        let ax = Axis::new(-3.0, 0.125, 128).unwrap();
        let f = Signal1D::from_fn(ax, |x| Complex64::new((-PI * (x - 2.0).powi(2)).exp(), 0.0)).unwrap();
        let spec = fourier(&f);
        for (xi, z) in spec.frequencies().zip(spec.values()) {
            let want = cis2pi(-2.0 * xi) * (-PI * xi * xi).exp();
            assert!((z - want).norm() < 1e-9);
        }
        let back = inv_fourier(&spec).unwrap();
        assert!(back.axis().same_as(&ax));
        assert!(back.rel_diff(&f).unwrap() < 1e-13);
    }

    #[test]
    fn projection_rejects_bands_beyond_nyquist() {
        let f = Signal1D::zeros(Axis::centered(8.0, 16)).unwrap();
        assert!(matches!(bandlimit_project(&f, Band::new(-2.0, 2.0).unwrap()), Err(Error::Domain(_))));
    }
}

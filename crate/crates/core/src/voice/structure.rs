use crate::error::{Error, Result};
use crate::numeric::{fft_forward, fft_inverse, pairwise_sum};
use crate::signal::Axis;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Samples on a square grid, `values[i·n + j] = f(x_i, x_j)` with both
/// coordinates on the same axis.
#[derive(Debug, Clone)]
pub struct Plane {
    axis: Axis,
    values: Vec<Complex64>,
}

impl Plane {
    pub fn new(axis: Axis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != axis.n * axis.n {
            return Err(Error::config(format!("{} values for a {}×{} plane", values.len(), axis.n, axis.n)));
        }
        Ok(Plane { axis, values })
    }

    pub fn from_fn(axis: Axis, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        let n = axis.n;
        let values = (0..n * n).into_par_iter().map(|i| f(axis.x(i / n), axis.x(i % n))).collect();
        Plane { axis, values }
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn l2_norm(&self) -> f64 {
        let t: Vec<f64> = self.values.iter().map(|z| z.norm_sqr()).collect();
        (pairwise_sum(&t) * self.axis.dx * self.axis.dx).sqrt()
    }

    pub fn rel_diff(&self, other: &Plane) -> Result<f64> {
        if !self.axis.same_as(&other.axis) {
            return Err(Error::config("planes are sampled on different axes"));
        }
        let d: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).collect();
        let n = other.l2_norm();
        let d = (pairwise_sum(&d) * self.axis.dx * self.axis.dx).sqrt();
        Ok(if n == 0.0 { d } else { d / n })
    }

    /// Cubic-convolution interpolant at `(x, y)`; zero outside the sampled square.
    fn interpolate(&self, x: f64, y: f64) -> Complex64 {
        let n = self.axis.n as isize;
        let u = (x - self.axis.x0) / self.axis.dx;
        let w = (y - self.axis.x0) / self.axis.dx;
        if u < 0.0 || w < 0.0 || u > (n - 1) as f64 || w > (n - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let (i0, j0) = (u.floor() as isize, w.floor() as isize);
        let mut s = Complex64::new(0.0, 0.0);
        for di in -1..=2 {
            let i = i0 + di;
            if i < 0 || i >= n {
                continue;
            }
            let ki = keys(u - i as f64);
            for dj in -1..=2 {
                let j = j0 + dj;
                if j < 0 || j >= n {
                    continue;
                }
                s += self.values[(i * n + j) as usize] * (ki * keys(w - j as f64));
            }
        }
        s
    }
}

/// Keys cubic convolution kernel (`a = −1/2`).
fn keys(t: f64) -> f64 {
    let t = t.abs();
    if t < 1.0 {
        (1.5 * t - 2.5) * t * t + 1.0
    } else if t < 2.0 {
        ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0
    } else {
        0.0
    }
}

/// A function of `(ξ, θ) ∈ ℝ₊ × S¹` on midpoint nodes `ξ_k = (k + ½)Δξ` and
/// angles `θ_j = 2πj/n_θ`; `values[k·n_θ + j]`. The norm uses `dξ dθ/2π`.
#[derive(Debug, Clone)]
pub struct PolarSpectrum {
    dxi: f64,
    n_xi: usize,
    n_theta: usize,
    values: Vec<Complex64>,
}

impl PolarSpectrum {
    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.dxi
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_theta as f64
    }

    pub fn n_xi(&self) -> usize {
        self.n_xi
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn get(&self, k: usize, j: usize) -> Complex64 {
        self.values[k * self.n_theta + j]
    }

    pub fn l2_norm(&self) -> f64 {
        let t: Vec<f64> = self.values.iter().map(|z| z.norm_sqr()).collect();
        (pairwise_sum(&t) * self.dxi / self.n_theta as f64).sqrt()
    }

    /// Cubic Lagrange interpolant in `√ξ`, along which rays through the origin
    /// are smooth, and periodic cubic convolution in `θ`.
    fn interpolate(&self, xi: f64, theta: f64) -> Complex64 {
        let u = xi / self.dxi - 0.5;
        if u > self.n_xi as f64 - 0.5 || self.n_xi < 4 {
            return Complex64::new(0.0, 0.0);
        }
        let rho = xi.sqrt();
        let start = (u.floor() as isize - 1).clamp(0, self.n_xi as isize - 4) as usize;
        let nodes: Vec<f64> = (start..start + 4).map(|k| self.xi(k).sqrt()).collect();
        let lagrange = |i: usize| -> f64 {
            (0..4).filter(|&m| m != i).map(|m| (rho - nodes[m]) / (nodes[i] - nodes[m])).product()
        };
        let w = theta.rem_euclid(TAU) / TAU * self.n_theta as f64;
        let j0 = w.floor() as isize;
        let nt = self.n_theta as isize;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            let wk = lagrange(i);
            let k = (start + i) as isize;
            for dj in -1..=2 {
                let j = j0 + dj;
                s += self.values[(k * nt + j.rem_euclid(nt)) as usize] * (wk * keys(w - j as f64));
            }
        }
        s
    }
}

/// `Ψv(ξ,θ) = π^{1/2} v(√ξ cos θ, √ξ sin θ)` on `0 < ξ ≤ R²`, `R` the half-width
/// of the plane, with `v` read by cubic interpolation.
pub fn polar_unitary(v: &Plane, n_xi: usize, n_theta: usize) -> Result<PolarSpectrum> {
    if n_xi == 0 || n_theta < 4 {
        return Err(Error::config("polar grid needs n_ξ ≥ 1 and n_θ ≥ 4"));
    }
    let r = (-v.axis.x0).min(v.axis.x0 + (v.axis.n - 1) as f64 * v.axis.dx);
    if !(r > 0.0) {
        return Err(Error::domain("the plane must contain a disc around the origin"));
    }
    let dxi = r * r / n_xi as f64;
    let s = PI.sqrt();
    let values = (0..n_xi * n_theta)
        .into_par_iter()
        .map(|i| {
            let (k, j) = (i / n_theta, i % n_theta);
            let rho = ((k as f64 + 0.5) * dxi).sqrt();
            let th = TAU * j as f64 / n_theta as f64;
            v.interpolate(rho * th.cos(), rho * th.sin()) * s
        })
        .collect();
    Ok(PolarSpectrum { dxi, n_xi, n_theta, values })
}

/// `v(ζ) = π^{−1/2} Ψ(|ζ|², arg ζ)` on the plane `axis`.
pub fn polar_unitary_inverse(psi: &PolarSpectrum, axis: Axis) -> Plane {
    let s = 1.0 / PI.sqrt();
    Plane::from_fn(axis, |x, y| psi.interpolate(x * x + y * y, y.atan2(x)) * s)
}

fn signed_freq(k: usize, n: usize, dx: f64) -> f64 {
    let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
    kk / (n as f64 * dx)
}

fn fft2(buf: &mut [Complex64], n: usize, inverse: bool) {
    let run = |row: &mut [Complex64]| if inverse { fft_inverse(row) } else { fft_forward(row) };
    buf.par_chunks_mut(n).for_each(run);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = buf[i * n + j];
        }
        run(&mut col);
        for i in 0..n {
            buf[i * n + j] = col[i];
        }
    }
}

/// Applies the spectral multiplier `m(|ξ|²)` on the DFT grid of the plane.
fn spectral_multiply(f: &Plane, m: impl Fn(f64) -> Complex64) -> Plane {
    let n = f.axis.n;
    let mut buf = f.values.clone();
    fft2(&mut buf, n, false);
    for i in 0..n {
        let xi = signed_freq(i, n, f.axis.dx);
        for j in 0..n {
            let eta = signed_freq(j, n, f.axis.dx);
            buf[i * n + j] *= m(xi * xi + eta * eta);
        }
    }
    fft2(&mut buf, n, true);
    let s = 1.0 / (n * n) as f64;
    buf.iter_mut().for_each(|z| *z *= s);
    Plane { axis: f.axis, values: buf }
}

/// `μ̂_b f = F⁻¹(e^{−2πib|ξ|²} f̂)`, periodic on the sampled square.
pub fn schrodinger_flow(f: &Plane, b: f64) -> Plane {
    if b == 0.0 {
        return f.clone();
    }
    spectral_multiply(f, |r2| Complex64::from_polar(1.0, -TAU * b * r2))
}

/// `‖(2πi ∂_b + Δ) μ̂_b f‖ / ‖f‖` with a centred difference of step `h` in `b`
/// and the Laplacian applied spectrally.
pub fn schrodinger_flow_residual(f: &Plane, b: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("difference step {h} must be positive")));
    }
    let plus = schrodinger_flow(f, b + h);
    let minus = schrodinger_flow(f, b - h);
    let mid = schrodinger_flow(f, b);
    let lap = spectral_multiply(&mid, |r2| Complex64::new(-4.0 * PI * PI * r2, 0.0));
    let i2pi = Complex64::new(0.0, TAU);
    let values: Vec<Complex64> = plus
        .values
        .iter()
        .zip(&minus.values)
        .zip(&lap.values)
        .map(|((p, m), l)| i2pi * (p - m) / (2.0 * h) + l)
        .collect();
    let r = Plane { axis: f.axis, values }.l2_norm();
    let nf = f.l2_norm();
    Ok(if nf == 0.0 { r } else { r / nf })
}

/// Phase error of `μ̂_b f` at the spectral peak of `f` against the closed form
/// `e^{−2πib|ξ₀|²}`: `|ratio − e^{−2πib|ξ₀|²}|` with `ratio = (μ̂_b f)^(ξ₀)/f̂(ξ₀)`.
pub fn spectral_phase_error(f: &Plane, b: f64) -> f64 {
    let n = f.axis.n;
    let mut fh = f.values.clone();
    fft2(&mut fh, n, false);
    let mut gh = schrodinger_flow(f, b).values;
    fft2(&mut gh, n, false);
    let peak = (0..n * n).max_by(|&i, &j| fh[i].norm().total_cmp(&fh[j].norm())).unwrap_or(0);
    let xi = signed_freq(peak / n, n, f.axis.dx);
    let eta = signed_freq(peak % n, n, f.axis.dx);
    let want = Complex64::from_polar(1.0, -TAU * b * (xi * xi + eta * eta));
    (gh[peak] / fh[peak] - want).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss_plane() -> Plane {
        Plane::from_fn(Axis::centered(4.0, 256), |x, y| Complex64::new((-PI * (x * x + y * y)).exp(), 0.0))
    }

    #[test]
    fn radial_gaussian_image() {
        let v = gauss_plane();
        let psi = polar_unitary(&v, 4000, 32).unwrap();
        for k in (0..4000).step_by(371) {
            let want = PI.sqrt() * (-PI * psi.xi(k)).exp();
            for j in [0, 5, 17] {
                assert!((psi.get(k, j).re - want).abs() < 1e-4, "ξ = {}", psi.xi(k));
            }
        }
        assert!((psi.l2_norm() / v.l2_norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn round_trip_of_off_centre_packet() {
        let v = Plane::from_fn(Axis::centered(4.0, 256), |x, y| {
            let r2 = (x - 0.7).powi(2) + (y + 0.3).powi(2);
            Complex64::from_polar((-PI * r2).exp(), 2.0 * x)
        });
        let psi = polar_unitary(&v, 4096, 512).unwrap();
        assert!((psi.l2_norm() / v.l2_norm() - 1.0).abs() < 1e-3);
        let back = polar_unitary_inverse(&psi, v.axis());
        assert!(back.rel_diff(&v).unwrap() < 1e-3, "{}", back.rel_diff(&v).unwrap());
    }

    #[test]
    fn rotation_is_theta_shift() {
        // Odd point count: the axis is symmetric, so quarter turns map nodes to nodes.
        let axis = Axis { x0: -4.0, dx: 1.0 / 16.0, n: 129 };
        let f = |x: f64, y: f64| Complex64::new((-PI * ((x - 1.0).powi(2) + 2.0 * y * y)).exp(), x * y);
        let rotated = Plane::from_fn(axis, |x, y| f(y, -x));
        let p0 = polar_unitary(&Plane::from_fn(axis, f), 64, 16).unwrap();
        let p1 = polar_unitary(&rotated, 64, 16).unwrap();
        for k in 0..64 {
            for j in 0..16 {
                assert!((p1.get(k, (j + 4) % 16) - p0.get(k, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn flow_residual_and_phase() {
        let f = Plane::from_fn(Axis::centered(8.0, 128), |x, y| Complex64::new((-PI * (x * x + y * y)).exp(), 0.0));
        assert_eq!(schrodinger_flow(&f, 0.0).values(), f.values());
        let r = schrodinger_flow_residual(&f, 0.1, 1e-3).unwrap();
        assert!(r < 1e-4, "{r}");
        let packet = Plane::from_fn(Axis::centered(32.0, 256), |x, y| {
            Complex64::from_polar((-(x * x + y * y) / 200.0).exp(), TAU * (0.5 * x + 0.25 * y))
        });
        assert!(spectral_phase_error(&packet, 0.3) < 1e-6);
    }
}

use super::{Axis, Signal1D};
use crate::error::{Error, Result};
use crate::numeric::{cis2pi, pairwise_sum};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// A signal on `ℝ × S¹` stored by angular Fourier coefficients
/// `v(x,θ) = Σ_n v_n(x) e^{inθ}`. Modes may use different axes.
#[derive(Debug, Clone, Default)]
pub struct Signal2D {
    modes: BTreeMap<i32, Signal1D>,
    radius: usize,
    truncation_error: f64,
}

impl Signal2D {
    pub fn new(modes: BTreeMap<i32, Signal1D>) -> Self {
        let radius = modes.keys().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
        Signal2D { modes, radius, truncation_error: 0.0 }
    }

    pub fn modes(&self) -> &BTreeMap<i32, Signal1D> {
        &self.modes
    }

    pub fn mode(&self, n: i32) -> Option<&Signal1D> {
        self.modes.get(&n)
    }

    /// Largest `|n|` kept.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Energy `Σ_{|n|>N_θ} ‖v_n‖²` dropped when built from raw samples.
    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    /// `‖v‖² = Σ_n ‖v_n‖²`.
    pub fn l2_norm(&self) -> f64 {
        let t: Vec<f64> = self.modes.values().map(|m| m.l2_norm().powi(2)).collect();
        pairwise_sum(&t).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Signal2D {
        Signal2D { modes: self.modes.iter().map(|(&n, m)| (n, m.scale(c))).collect(), ..*self }
    }

    /// `‖self − other‖ / ‖other‖` over the union of modes.
    pub fn rel_diff(&self, other: &Signal2D) -> Result<f64> {
        let mut num = Vec::new();
        for n in self.modes.keys().chain(other.modes.keys().filter(|n| !self.modes.contains_key(n))) {
            let d = match (self.modes.get(n), other.modes.get(n)) {
                (Some(a), Some(b)) => a.sub(b)?.l2_norm(),
                (Some(a), None) => a.l2_norm(),
                (None, Some(b)) => b.l2_norm(),
                (None, None) => 0.0,
            };
            num.push(d * d);
        }
        let den = other.l2_norm();
        let num = pairwise_sum(&num).sqrt();
        Ok(if den == 0.0 { num } else { num / den })
    }

    /// Resums the modes on `n_theta` uniform angles; all modes must share one axis.
    pub fn resum(&self, n_theta: usize) -> Result<RawPolar> {
        let mut it = self.modes.values();
        let axis = it.next().map(|m| m.axis()).ok_or_else(|| Error::config("no modes to resum"))?;
        if it.any(|m| !m.axis().same_as(&axis)) {
            return Err(Error::config("modes live on different axes"));
        }
        let thetas: Vec<f64> = (0..n_theta).map(|j| j as f64 * TAU / n_theta as f64).collect();
        let mut values = vec![Complex64::new(0.0, 0.0); axis.n * n_theta];
        for (&n, m) in &self.modes {
            for (k, v) in m.samples().iter().enumerate() {
                for j in 0..n_theta {
                    let ph = (n as i64 * j as i64).rem_euclid(n_theta as i64) as f64 / n_theta as f64;
                    values[k * n_theta + j] += v * cis2pi(ph);
                }
            }
        }
        RawPolar::new(axis, thetas, values)
    }
}

/// Samples `v(x_k, θ_j)` stored row-major in `k`.
#[derive(Debug, Clone)]
pub struct RawPolar {
    axis: Axis,
    thetas: Vec<f64>,
    values: Vec<Complex64>,
}

impl RawPolar {
    pub fn new(axis: Axis, thetas: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != axis.n * thetas.len() {
            return Err(Error::config("raw sample count does not match the (x, θ) grid"));
        }
        Ok(RawPolar { axis, thetas, values })
    }

    pub fn from_fn(axis: Axis, n_theta: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let thetas: Vec<f64> = (0..n_theta).map(|j| j as f64 * TAU / n_theta as f64).collect();
        let values = axis.points().flat_map(|x| thetas.iter().map(move |&t| (x, t))).map(|(x, t)| f(x, t)).collect();
        RawPolar::new(axis, thetas, values)
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn get(&self, k: usize, j: usize) -> Complex64 {
        self.values[k * self.thetas.len() + j]
    }

    /// `(Σ_k Σ_j |v|² Δx / n_θ)^{1/2}`, the grid norm against `dx dθ/2π`.
    pub fn l2_norm(&self) -> f64 {
        let t: Vec<f64> = self.values.iter().map(|z| z.norm_sqr()).collect();
        (pairwise_sum(&t) * self.axis.dx / self.thetas.len() as f64).sqrt()
    }
}

/// Angular Fourier coefficients `v_n(x) = n_θ⁻¹ Σ_j v(x, θ_j) e^{−inθ_j}` for
/// `n ∈ [−n_θ/2, n_θ/2)`, optionally truncated to `|n| ≤ radius` with the
/// dropped energy reported.
pub fn theta_modes(raw: &RawPolar, radius: Option<usize>) -> Result<Signal2D> {
    let nt = raw.thetas.len();
    if nt < 2 {
        return Err(Error::config("angle grid needs at least two nodes"));
    }
    let step = TAU / nt as f64;
    if raw.thetas.iter().enumerate().any(|(j, &t)| (t - raw.thetas[0] - j as f64 * step).abs() > 1e-9) {
        return Err(Error::config("angle grid is not uniform"));
    }
    let t0 = raw.thetas[0];
    let half = (nt / 2) as i32;
    let mut modes = BTreeMap::new();
    let mut dropped = Vec::new();
    for n in -half..(nt as i32 - half) {
        let samples: Vec<Complex64> = (0..raw.axis.n)
            .map(|k| {
                let s: Complex64 = (0..nt)
                    .map(|j| {
                        let ph = (n as i64 * j as i64).rem_euclid(nt as i64) as f64 / nt as f64;
                        raw.get(k, j) * cis2pi(-ph)
                    })
                    .sum();
                s * cis2pi(-(n as f64) * t0 / TAU) / nt as f64
            })
            .collect();
        let m = Signal1D::new(raw.axis, samples)?;
        if radius.is_some_and(|r| n.unsigned_abs() as usize > r) {
            dropped.push(m.l2_norm().powi(2));
        } else {
            modes.insert(n, m);
        }
    }
    let mut out = Signal2D::new(modes);
    out.truncation_error = pairwise_sum(&dropped);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: f64) -> Complex64 {
        Complex64::new((-x * x).exp(), 0.3 * x * (-x * x).exp())
    }

    #[test]
    fn angle_independent_input_has_only_mode_zero() {
        let raw = RawPolar::from_fn(Axis::centered(4.0, 32), 8, |x, _| g(x)).unwrap();
        let s = theta_modes(&raw, None).unwrap();
        for (&n, m) in s.modes() {
            if n == 0 {
                assert!(m.samples().iter().zip(raw.axis().points()).all(|(z, x)| (z - g(x)).norm() < 1e-14));
            } else {
                assert!(m.l2_norm() < 1e-14, "mode {n}");
            }
        }
    }

    #[test]
    fn single_character_lands_in_its_mode() {
        let raw = RawPolar::from_fn(Axis::centered(4.0, 32), 16, |x, t| g(x) * Complex64::new(0.0, 3.0 * t).exp())
            .unwrap();
        let s = theta_modes(&raw, None).unwrap();
        let m3 = s.mode(3).unwrap();
        assert!(m3.samples().iter().zip(raw.axis().points()).all(|(z, x)| (z - g(x)).norm() < 1e-13));
        assert!((s.l2_norm() - raw.l2_norm()).abs() < 1e-10 * raw.l2_norm());
        let back = s.resum(16).unwrap();
        for k in 0..32 {
            for j in 0..16 {
                assert!((back.get(k, j) - raw.get(k, j)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn truncation_reports_dropped_energy() {
        let raw = RawPolar::from_fn(Axis::centered(4.0, 32), 16, |x, t| g(x) * Complex64::new(0.0, 5.0 * t).exp())
            .unwrap();
        let s = theta_modes(&raw, Some(2)).unwrap();
        assert_eq!(s.radius(), 2);
        let e = raw.l2_norm().powi(2);
        assert!((s.truncation_error() - e).abs() < 1e-12 * e);
    }

    #[test]
    fn non_uniform_angles_rejected() {
        let raw = RawPolar::new(Axis::centered(1.0, 2), vec![0.0, 1.0, 3.0], vec![Complex64::new(0.0, 0.0); 6]).unwrap();
        assert!(matches!(theta_modes(&raw, None), Err(Error::Config(_))));
    }
}

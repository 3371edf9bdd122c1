//! Quadrature grids realizing the left Haar measure, sampled fields on them,
//! weighted `L^p` norms and windowed integrability profiles.

mod field;
mod norms;
mod resample;

pub use field::{ModeField, VoiceField};
pub use norms::{
    cauchy_increment, lp_norm, lp_norm_inverted, window_profile, window_profile_weighted, write_profile_csv, Exponent, ProfileRow,
    Verdict, CAUCHY_TOL,
};
pub use resample::{bl_resample, check, left_translate, right_translate};
pub(crate) use resample::scale_stencil;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Box and resolution of a grid. For the line only the b-axis fields are used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridParams {
    pub b_halfwidth: f64,
    pub n_b: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub n_a: usize,
    pub n_phi: usize,
}

impl Default for GridParams {
    /// `Δb = 1/2` on `[−1024, 1024)`, 64 scales from `1/4` with 16 per octave
    /// (so `a = 1` and every octave ratio are nodes), 32 angles.
    fn default() -> Self {
        GridParams {
            b_halfwidth: 1024.0,
            n_b: 4096,
            a_min: 0.25,
            a_max: 0.25 * 2f64.powf(63.0 / 16.0),
            n_a: 64,
            n_phi: 32,
        }
    }
}

impl GridParams {
    /// Scale grid with `per_octave` nodes per doubling starting at `a_min`.
    pub fn with_octaves(mut self, a_min: f64, n_a: usize, per_octave: usize) -> Self {
        self.a_min = a_min;
        self.n_a = n_a;
        self.a_max = a_min * 2f64.powf((n_a - 1) as f64 / per_octave as f64);
        self
    }

    pub fn with_b(mut self, b_halfwidth: f64, n_b: usize) -> Self {
        self.b_halfwidth = b_halfwidth;
        self.n_b = n_b;
        self
    }

    fn validate(&self, kind: GroupKind) -> Result<()> {
        if !(self.b_halfwidth > 0.0 && self.b_halfwidth.is_finite()) {
            return Err(Error::config(format!("grid.b_halfwidth = {} must be positive", self.b_halfwidth)));
        }
        let min_b = if kind == GroupKind::Line { 2 } else { 8 };
        if self.n_b < min_b || self.n_b % 2 != 0 {
            return Err(Error::config(format!("grid.n_b = {} must be even and ≥ {min_b}", self.n_b)));
        }
        if kind != GroupKind::Line {
            if self.n_a < 2 {
                return Err(Error::config(format!("grid.n_a = {} must be ≥ 2", self.n_a)));
            }
            if !(self.a_min > 0.0 && self.a_min < self.a_max && self.a_max.is_finite()) {
                return Err(Error::config(format!(
                    "grid scale range [{}, {}] must satisfy 0 < a_min < a_max",
                    self.a_min, self.a_max
                )));
            }
        }
        if kind == GroupKind::AffineCircle && self.n_phi < 2 {
            return Err(Error::config(format!("grid.n_phi = {} must be ≥ 2", self.n_phi)));
        }
        Ok(())
    }
}

/// Discretized group: uniform `b`, geometric `a`, uniform `φ`, with
/// quadrature weights `Δb · (Δ log a) c_k / a_k · 1/n_φ` (trapezoid in `log a`).
#[derive(Debug, Clone)]
pub struct GroupGrid {
    kind: GroupKind,
    params: GridParams,
    b: Vec<f64>,
    a: Vec<f64>,
    phi: Vec<f64>,
    db: f64,
    dlog: f64,
    a_weight: Vec<f64>,
}

impl PartialEq for GroupGrid {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.params == other.params
    }
}

/// Builds the grid for `kind`; layout is b-major, then a, then φ.
pub fn build_grid(kind: GroupKind, params: GridParams) -> Result<GroupGrid> {
    params.validate(kind)?;
    let db = 2.0 * params.b_halfwidth / params.n_b as f64;
    let b = (0..params.n_b).map(|k| -params.b_halfwidth + k as f64 * db).collect();
    let (a, dlog, a_weight) = if kind == GroupKind::Line {
        (vec![1.0], 0.0, vec![1.0])
    } else {
        let n = params.n_a;
        let dlog = (params.a_max / params.a_min).ln() / (n - 1) as f64;
        let a: Vec<f64> = (0..n).map(|k| params.a_min * (k as f64 * dlog).exp()).collect();
        let w = a
            .iter()
            .enumerate()
            .map(|(k, ak)| {
                let c = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                c * dlog / ak
            })
            .collect();
        (a, dlog, w)
    };
    let phi = if kind == GroupKind::AffineCircle {
        (0..params.n_phi).map(|j| j as f64 * TAU / params.n_phi as f64).collect()
    } else {
        vec![0.0]
    };
    Ok(GroupGrid { kind, params, b, a, phi, db, dlog, a_weight })
}

impl GroupGrid {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn params(&self) -> &GridParams {
        &self.params
    }

    pub fn b_nodes(&self) -> &[f64] {
        &self.b
    }

    pub fn a_nodes(&self) -> &[f64] {
        &self.a
    }

    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi
    }

    pub fn n_b(&self) -> usize {
        self.b.len()
    }

    pub fn n_a(&self) -> usize {
        self.a.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    pub fn len(&self) -> usize {
        self.n_b() * self.n_a() * self.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn db(&self) -> f64 {
        self.db
    }

    /// Spacing of the scale nodes in `log a`.
    pub fn dlog(&self) -> f64 {
        self.dlog
    }

    /// Nyquist frequency `1/(2Δb)` of the b-axis.
    pub fn nyquist(&self) -> f64 {
        0.5 / self.db
    }

    /// Trapezoid weights in `log a` divided by `a`, i.e. the `da/a²` factor.
    pub fn scale_weights(&self) -> &[f64] {
        &self.a_weight
    }

    pub fn phi_weight(&self) -> f64 {
        1.0 / self.n_phi() as f64
    }

    pub fn index(&self, ib: usize, ia: usize, ip: usize) -> usize {
        (ib * self.n_a() + ia) * self.n_phi() + ip
    }

    /// Inverse of [`GroupGrid::index`].
    pub fn coords(&self, i: usize) -> (usize, usize, usize) {
        let ip = i % self.n_phi();
        let r = i / self.n_phi();
        (r / self.n_a(), r % self.n_a(), ip)
    }

    pub fn node(&self, i: usize) -> GroupElement {
        let (ib, ia, ip) = self.coords(i);
        match self.kind {
            GroupKind::Line => GroupElement::line(self.b[ib]),
            GroupKind::Affine => GroupElement::affine(self.b[ib], self.a[ia]).expect("positive scale"),
            GroupKind::AffineCircle => {
                GroupElement::affine_circle(self.b[ib], self.a[ia], self.phi[ip]).expect("positive scale")
            }
        }
    }

    pub fn quad_weight(&self, i: usize) -> f64 {
        let (_, ia, _) = self.coords(i);
        self.db * self.a_weight[ia] * self.phi_weight()
    }

    /// All quadrature weights in node order.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.quad_weight(i)).collect()
    }

    /// Closed-form Haar mass of the grid box `[−h, h) × [a_min, a_max] × S¹`.
    pub fn box_mass(&self) -> f64 {
        let bw = 2.0 * self.params.b_halfwidth;
        match self.kind {
            GroupKind::Line => bw,
            _ => bw * (1.0 / self.params.a_min - 1.0 / self.params.a_max),
        }
    }

    /// Fractional position of scale `a` on the node axis (`0` at `a_min`).
    pub fn log_position(&self, a: f64) -> f64 {
        (a / self.params.a_min).ln() / self.dlog
    }

    /// Node index of `a` if it coincides with a scale node to `1e-9` in log.
    pub fn scale_index(&self, a: f64) -> Option<usize> {
        let u = self.log_position(a);
        let k = u.round();
        ((u - k).abs() < 1e-9 && k >= 0.0 && (k as usize) < self.n_a()).then_some(k as usize)
    }

    /// The same box with the angle axis removed.
    pub fn affine_part(&self) -> GroupGrid {
        if self.kind == GroupKind::AffineCircle {
            build_grid(GroupKind::Affine, self.params).expect("validated params")
        } else {
            self.clone()
        }
    }

    /// The same grid with the b-axis stretched by `factor` (step and box).
    pub fn dilate_b(&self, factor: f64) -> GroupGrid {
        let mut p = self.params;
        p.b_halfwidth *= factor;
        build_grid(self.kind, p).expect("validated params")
    }

    /// True if the b-axis is `x0 + k dx`, `k < n`, up to rounding.
    pub fn b_axis_matches(&self, x0: f64, dx: f64, n: usize) -> bool {
        n == self.n_b() && (dx - self.db).abs() <= 1e-12 * self.db && (x0 - self.b[0]).abs() <= 1e-9 * self.db
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(h: f64, nb: usize, amin: f64, amax: f64, na: usize, nphi: usize) -> GridParams {
        GridParams { b_halfwidth: h, n_b: nb, a_min: amin, a_max: amax, n_a: na, n_phi: nphi }
    }

    #[test]
    fn line_uniform_rule() {
        let g = build_grid(GroupKind::Line, p(1.0, 4, 1.0, 2.0, 2, 2)).unwrap();
        assert_eq!(g.b_nodes(), [-1.0, -0.5, 0.0, 0.5]);
        assert!(g.weights().iter().all(|&w| w == 0.5));
        assert!(build_grid(GroupKind::Line, p(1.0, 3, 1.0, 2.0, 2, 2)).is_err());
        assert!(build_grid(GroupKind::Affine, p(1.0, 4, 0.5, 2.0, 2, 2)).is_err());
    }

    #[test]
    fn affine_needs_two_scales() {
        let e = build_grid(GroupKind::Affine, p(1.0, 8, 0.5, 2.0, 1, 2)).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn layout_is_b_major() {
        let g = build_grid(GroupKind::AffineCircle, p(1.0, 8, 0.5, 2.0, 3, 4)).unwrap();
        assert_eq!(g.coords(g.index(5, 2, 3)), (5, 2, 3));
        assert_eq!(g.index(0, 0, 1), 1);
        assert_eq!(g.index(0, 1, 0), 4);
        assert_eq!(g.index(1, 0, 0), 12);
        let x = g.node(g.index(2, 1, 3));
        assert_eq!(x.b(), g.b_nodes()[2]);
        assert_eq!(x.a(), g.a_nodes()[1]);
        assert_eq!(x.phi(), g.phi_nodes()[3]);
    }

    #[test]
    fn default_grid_has_octave_nodes() {
        let g = build_grid(GroupKind::Affine, GridParams::default()).unwrap();
        assert_eq!(g.scale_index(1.0), Some(32));
        assert_eq!(g.scale_index(0.5), Some(16));
        assert_eq!(g.scale_index(2.0), Some(48));
        assert!((g.nyquist() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn box_mass_matches_log_trapezoid_relation() {
        // Trapezoid in log a of a^{-1} over the box equals the closed form
        // times (Δ/2) coth(Δ/2).
        let g = build_grid(GroupKind::AffineCircle, p(3.0, 16, 0.5, 2.0, 9, 4)).unwrap();
        let s: f64 = g.weights().iter().sum();
        let d = g.dlog();
        let factor = 0.5 * d / (0.5 * d).tanh();
        assert!((s / (g.box_mass() * factor) - 1.0).abs() < 1e-12);
        assert!((g.box_mass() - 2.0 * 3.0 * 1.5).abs() < 1e-12);
    }
}

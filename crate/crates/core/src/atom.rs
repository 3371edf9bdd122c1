//! Analyzing vectors described by analytic spectra `û`, and inverse Fourier
//! integrals of their products evaluated at uniformly spaced points.
//!
//! A spectrum is a sum of disjoint pieces, each a fixed shape on an interval,
//! modified by a gain, a time shift `τ` (factor `e^{−2πiτξ}`) and a dilation
//! `d` (`û(ξ) ↦ û(ξ/d)`, i.e. `u(x) ↦ d·u(dx)`).

use crate::error::{Error, Result};
use crate::numeric::{cis2pi, Czt};
use crate::signal::{Axis, Band, Signal1D, SpectralProfile};
use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// Profile of a spectral piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "shape")]
pub enum Shape {
    /// Indicator, half weight at the endpoints.
    Flat,
    /// `exp(−1/(1−s²))` with `s` affine in `log|ξ|` across the piece.
    LogBump,
    /// `ξ^k e^{−cξ}` for `ξ ≥ 0`.
    Cauchy { order: u32, width: f64 },
}

/// One shape on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub shape: Shape,
}

fn bump_raw(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

fn gl() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(200).expect("nonzero")))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

impl Piece {
    fn new(lo: f64, hi: f64, shape: Shape) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::config(format!("spectral piece [{lo}, {hi}] is empty")));
        }
        if shape == Shape::LogBump && !(lo > 0.0 || hi < 0.0) {
            return Err(Error::config("log-bump pieces must not contain ξ = 0"));
        }
        Ok(Piece { lo, hi, shape })
    }

    /// Log-centre and log-halfwidth of a log-bump piece.
    fn log_frame(&self) -> (f64, f64) {
        let (l0, l1) = (self.lo.abs().ln(), self.hi.abs().ln());
        (0.5 * (l0 + l1), 0.5 * (l1 - l0).abs())
    }

    pub fn eval(&self, xi: f64) -> f64 {
        if xi < self.lo || xi > self.hi {
            return 0.0;
        }
        match self.shape {
            Shape::Flat => {
                let tol = 1e-12 * (self.hi - self.lo);
                if (xi - self.lo).abs() <= tol || (xi - self.hi).abs() <= tol {
                    0.5
                } else {
                    1.0
                }
            }
            Shape::LogBump => {
                let (m, h) = self.log_frame();
                bump_raw((xi.abs().ln() - m) / h)
            }
            Shape::Cauchy { order, width } => {
                if xi <= 0.0 {
                    0.0
                } else {
                    xi.powi(order as i32) * (-width * xi).exp()
                }
            }
        }
    }

    /// Like [`Piece::eval`] but with the interior limit at the endpoints, for
    /// integrands already restricted to the piece.
    fn eval_inside(&self, xi: f64) -> f64 {
        match self.shape {
            Shape::Flat => 1.0,
            _ => self.eval(xi.clamp(self.lo, self.hi)),
        }
    }

    fn is_flat(&self) -> bool {
        self.shape == Shape::Flat
    }

    /// `∫ |piece|² dξ/|ξ|`, invariant under dilation.
    fn calderon(&self) -> f64 {
        match self.shape {
            Shape::Flat => {
                if self.lo > 0.0 || self.hi < 0.0 {
                    (self.hi.abs().ln() - self.lo.abs().ln()).abs()
                } else {
                    f64::INFINITY
                }
            }
            Shape::LogBump => {
                let (_, h) = self.log_frame();
                h * gl().integrate(-1.0, 1.0, |s| bump_raw(s).powi(2))
            }
            Shape::Cauchy { order, width } => {
                if order == 0 {
                    f64::INFINITY
                } else {
                    factorial(2 * order - 1) / (2.0 * width).powi(2 * order as i32)
                }
            }
        }
    }

    /// `∫ |piece|² dξ`.
    fn energy(&self) -> f64 {
        match self.shape {
            Shape::Flat => self.hi - self.lo,
            Shape::LogBump => {
                let (m, h) = self.log_frame();
                h * gl().integrate(-1.0, 1.0, |s| bump_raw(s).powi(2) * (m + h * s).exp())
            }
            Shape::Cauchy { order, width } => factorial(2 * order) / (2.0 * width).powi(2 * order as i32 + 1),
        }
    }
}

/// An analytic spectrum `û(ξ) = g · e^{−2πiτξ} · Σ_p piece_p(ξ/d)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pieces: Vec<Piece>,
    gain: f64,
    shift: f64,
    dilation: f64,
}

impl Atom {
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        pieces.sort_by(|p, q| p.lo.total_cmp(&q.lo));
        if pieces.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::config("spectral pieces overlap"));
        }
        Ok(Atom { pieces, gain: 1.0, shift: 0.0, dilation: 1.0 })
    }

    /// `û = χ_Ω`; with `Ω = [−ω, ω]` this is the sinc kernel `2ω sinc(2ωπx)`.
    pub fn indicator(band: Band) -> Self {
        Atom::new(vec![Piece { lo: band.lo, hi: band.hi, shape: Shape::Flat }]).expect("single piece")
    }

    /// Real Shannon wavelet, `û = χ_{[1/4,1/2]}(|ξ|)` (not normalized).
    pub fn shannon() -> Self {
        Atom::new(vec![
            Piece { lo: -0.5, hi: -0.25, shape: Shape::Flat },
            Piece { lo: 0.25, hi: 0.5, shape: Shape::Flat },
        ])
        .expect("disjoint pieces")
    }

    /// Smooth even wavelet supported in `lo ≤ |ξ| ≤ hi` (not normalized).
    pub fn log_bump(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 < lo && lo < hi) {
            return Err(Error::config(format!("log-bump band [{lo}, {hi}] must satisfy 0 < lo < hi")));
        }
        Atom::new(vec![Piece::new(-hi, -lo, Shape::LogBump)?, Piece::new(lo, hi, Shape::LogBump)?])
    }

    /// Cauchy wavelet `û(ξ) = ξ^k e^{−cξ}` on `ξ > 0`, `u(x) = k!/(c − 2πix)^{k+1}`.
    pub fn cauchy(order: u32, width: f64) -> Result<Self> {
        if order == 0 || !(width > 0.0) {
            return Err(Error::config("Cauchy wavelet needs order ≥ 1 and positive width"));
        }
        // Beyond this the spectrum is below 1e-18 of its peak.
        let peak = order as f64 / width;
        let mut hi = peak;
        let top = Piece { lo: 0.0, hi: f64::INFINITY, shape: Shape::Cauchy { order, width } }.eval(peak);
        let p = Piece { lo: 0.0, hi: f64::INFINITY, shape: Shape::Cauchy { order, width } };
        while p.eval(hi) > 1e-18 * top {
            hi *= 1.25;
        }
        Atom::new(vec![Piece::new(0.0, hi, Shape::Cauchy { order, width })?])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn dilation(&self) -> f64 {
        self.dilation
    }

    pub fn scaled(&self, c: f64) -> Self {
        Atom { gain: self.gain * c, ..self.clone() }
    }

    /// `u(x) ↦ u(x − τ)`.
    pub fn shifted(&self, tau: f64) -> Self {
        Atom { shift: self.shift + tau, ..self.clone() }
    }

    /// `û(ξ) ↦ û(ξ/d)`.
    pub fn dilated(&self, d: f64) -> Self {
        Atom { dilation: self.dilation * d, shift: self.shift / d, ..self.clone() }
    }

    /// Restriction of the spectrum to `ξ ≥ 0`.
    pub fn positive_part(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .filter(|p| p.hi > 0.0)
            .map(|p| Piece { lo: p.lo.max(0.0), ..*p })
            .collect();
        Atom { pieces, ..self.clone() }
    }

    /// `û(ξ)`.
    pub fn spectrum(&self, xi: f64) -> Complex64 {
        let s: f64 = self.pieces.iter().map(|p| p.eval(xi / self.dilation)).sum();
        cis2pi(-self.shift * xi) * (self.gain * s)
    }

    /// Frequency intervals carrying the spectrum.
    pub fn support(&self) -> Vec<(f64, f64)> {
        self.pieces.iter().map(|p| (self.dilation * p.lo, self.dilation * p.hi)).collect()
    }

    /// One-sided Calderón constants `(∫_{ξ<0}, ∫_{ξ>0}) |û|² dξ/|ξ|`.
    pub fn calderon_sides(&self) -> (f64, f64) {
        let g2 = self.gain * self.gain;
        let mut neg = 0.0;
        let mut pos = 0.0;
        for p in &self.pieces {
            if p.hi <= 0.0 {
                neg += g2 * p.calderon();
            } else if p.lo >= 0.0 {
                pos += g2 * p.calderon();
            } else {
                neg += g2 * Piece { hi: 0.0, ..*p }.calderon();
                pos += g2 * Piece { lo: 0.0, ..*p }.calderon();
            }
        }
        (neg, pos)
    }

    /// `‖u‖² = ∫ |û|² dξ`.
    pub fn energy(&self) -> f64 {
        let s: f64 = self.pieces.iter().map(Piece::energy).sum();
        self.gain * self.gain * self.dilation * s
    }

    /// Samples of `û` on a uniform frequency grid.
    pub fn profile(&self, xi0: f64, dxi: f64, n: usize) -> Result<SpectralProfile> {
        SpectralProfile::from_fn(xi0, dxi, n, |xi| self.spectrum(xi))
    }

    /// `u(x_k) = ∫ û(ξ) e^{2πiξx_k} dξ`, restricted to `|ξ| ≤` the axis Nyquist.
    pub fn sample(&self, axis: Axis) -> Result<Signal1D> {
        let band = Band { lo: -axis.nyquist(), hi: axis.nyquist() };
        Signal1D::new(axis, cross_ift(&Atom::indicator(band), self, 1.0, None, axis, false))
    }
}

/// Inverse transform of a product spectrum at `x_k = axis.x(k)`:
/// `∫ v̂(ξ) · conj(û(aξ)) e^{2πiξx_k} dξ`, with `ξ` optionally restricted to `band`.
/// When `conj_u` is false the second factor is `û(aξ)` instead.
pub fn cross_ift(v: &Atom, u: &Atom, a: f64, band: Option<Band>, axis: Axis, conj_u: bool) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); axis.n];
    // e^{−2πiτ_v ξ} times e^{±2πiτ_u aξ} shifts the evaluation points.
    let sign = if conj_u { 1.0 } else { -1.0 };
    let shift = -v.shift + sign * a * u.shift;
    let gain = v.gain * u.gain;
    for p in &v.pieces {
        for q in &u.pieces {
            let mut c = (v.dilation * p.lo).max(u.dilation * q.lo / a);
            let mut e = (v.dilation * p.hi).min(u.dilation * q.hi / a);
            if let Some(b) = band {
                c = c.max(b.lo);
                e = e.min(b.hi);
            }
            if !(c < e) {
                continue;
            }
            let ax = Axis { x0: axis.x0 + shift, ..axis };
            let (vd, ud) = (v.dilation, u.dilation);
            let term: Vec<Complex64> = if p.is_flat() && q.is_flat() {
                flat_ift(c, e, ax)
            } else {
                smooth_ift(c, e, ax, |xi| p.eval_inside(xi / vd) * q.eval_inside(a * xi / ud))
            };
            for (o, t) in out.iter_mut().zip(term) {
                *o += t * gain;
            }
        }
    }
    out
}

/// `∫_c^e e^{2πiξx} dξ = e^{πi(c+e)x} (e−c) sinc(π(e−c)x)`.
fn flat_ift(c: f64, e: f64, axis: Axis) -> Vec<Complex64> {
    let w = e - c;
    axis.points()
        .map(|x| cis2pi(0.5 * (c + e) * x) * (w * crate::numeric::sinc(std::f64::consts::PI * w * x)))
        .collect()
}

/// Trapezoid rule on `[c, e]` evaluated at all points by one chirp-z transform,
/// plus the two leading Euler-Maclaurin endpoint terms of the full oscillatory
/// integrand. The node spacing keeps the aliasing period at least eight times
/// the largest evaluation point.
fn smooth_ift(c: f64, e: f64, axis: Axis, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
    let xmax = axis.x0.abs().max((axis.x0 + (axis.n.max(1) - 1) as f64 * axis.dx).abs()).max(axis.dx);
    let target = 1.0 / (8.0 * xmax);
    let q = (((e - c) / target).ceil() as usize).max(256);
    let d = (e - c) / q as f64;
    let fv: Vec<f64> = (0..=q).map(|j| f(c + j as f64 * d)).collect();
    let y: Vec<Complex64> = fv
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let w = if j == 0 || j == q { 0.5 } else { 1.0 };
            cis2pi(j as f64 * d * axis.x0) * (w * v)
        })
        .collect();
    let vals = Czt::new(q + 1, axis.n, d * axis.dx).apply(&y);
    // One-sided fourth-order derivative estimates at the ends.
    let one_sided = |f: [f64; 5]| (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * d);
    let df_c = one_sided([fv[0], fv[1], fv[2], fv[3], fv[4]]);
    let df_e = -one_sided([fv[q], fv[q - 1], fv[q - 2], fv[q - 3], fv[q - 4]]);
    let second = |f: [f64; 4]| (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (d * d);
    let ddf_c = second([fv[0], fv[1], fv[2], fv[3]]);
    let ddf_e = second([fv[q], fv[q - 1], fv[q - 2], fv[q - 3]]);
    let tpi = 2.0 * std::f64::consts::PI;
    vals.into_iter()
        .enumerate()
        .map(|(k, z)| {
            let x = axis.x(k);
            let w = Complex64::new(0.0, tpi * x);
            // First and third derivatives of f(ξ)e^{2πiξx}, the latter without f'''.
            let g1 = |f: f64, df: f64| w * f + df;
            let g3 = |f: f64, df: f64, ddf: f64| w * w * w * f + w * w * (3.0 * df) + w * (3.0 * ddf);
            let (pe, pc) = (cis2pi(e * x), cis2pi(c * x));
            let d1 = g1(fv[q], df_e) * pe - g1(fv[0], df_c) * pc;
            let d3 = g3(fv[q], df_e, ddf_e) * pe - g3(fv[0], df_c, ddf_c) * pc;
            z * d * pc - d1 * (d * d / 12.0) + d3 * (d.powi(4) / 720.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::sinc;
    use std::f64::consts::PI;

    #[test]
    fn shannon_samples_match_time_formula() {
        let axis = Axis::centered(64.0, 512);
        let u = Atom::shannon().sample(axis).unwrap();
        for (x, z) in axis.points().zip(u.samples()) {
            let want = sinc(PI * x) - 0.5 * sinc(0.5 * PI * x);
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn cauchy_samples_match_closed_form() {
        let axis = Axis::centered(16.0, 256);
        let (k, c) = (3, 2.0 * PI);
        let u = Atom::cauchy(k, c).unwrap().dilated(0.5).shifted(1.5);
        let s = u.sample(axis).unwrap();
        for (x, z) in axis.points().zip(s.samples()) {
            // d·u0(d(x − τ)) with u0(x) = k!/(c − 2πix)^{k+1}.
            let y = 0.5 * (x - 1.5);
            let want = 0.5 * 6.0 / Complex64::new(c, -2.0 * PI * y).powi(4);
            assert!((z - want).norm() < 1e-9, "x = {x}: {z} vs {want}");
        }
    }

    #[test]
    fn smooth_product_matches_direct_quadrature() {
        let u = Atom::log_bump(0.25, 0.5).unwrap();
        let axis = Axis::new(-3.0, 0.7, 9).unwrap();
        let a = 1.3;
        let got = cross_ift(&u, &u, a, None, axis, true);
        let rule = GaussLegendre::new(NonZeroUsize::new(400).unwrap());
        for (k, x) in axis.points().enumerate() {
            let f = |xi: f64| u.spectrum(xi) * u.spectrum(a * xi).conj() * cis2pi(xi * x);
            let re = rule.integrate(0.25 / a, 0.5, |t| f(t).re) + rule.integrate(-0.5, -0.25 / a, |t| f(t).re);
            let im = rule.integrate(0.25 / a, 0.5, |t| f(t).im) + rule.integrate(-0.5, -0.25 / a, |t| f(t).im);
            assert!((got[k] - Complex64::new(re, im)).norm() < 1e-10, "x = {x}: {} vs {}", got[k], Complex64::new(re, im));
        }
    }

    #[test]
    fn truncated_product_far_from_origin() {
        // A log-bump cut off mid-support by a flat band: the integrand jumps at ξ = 0.4.
        let u = Atom::log_bump(0.25, 0.5).unwrap();
        let band = Band { lo: -0.4, hi: 0.4 };
        let axis = Axis::new(-2048.0, 511.75, 9).unwrap();
        let got = cross_ift(&Atom::indicator(band), &u, 1.0, None, axis, true);
        let rule = GaussLegendre::new(NonZeroUsize::new(64).unwrap());
        for (k, x) in axis.points().enumerate() {
            let mut want = Complex64::new(0.0, 0.0);
            for (lo, hi) in [(-0.4, -0.25), (0.25, 0.4)] {
                // Panels short compared to the oscillation period.
                let m = 4000;
                let h = (hi - lo) / m as f64;
                for j in 0..m {
                    let (s, t) = (lo + j as f64 * h, lo + (j + 1) as f64 * h);
                    let f = |xi: f64| u.spectrum(xi).conj() * cis2pi(xi * x);
                    want += Complex64::new(rule.integrate(s, t, |v| f(v).re), rule.integrate(s, t, |v| f(v).im));
                }
            }
            assert!((got[k] - want).norm() < 1e-8, "x = {x}: {} vs {want}", got[k]);
        }
    }

    #[test]
    fn calderon_constants() {
        let (n, p) = Atom::shannon().calderon_sides();
        assert!((n - 2f64.ln()).abs() < 1e-15 && (p - 2f64.ln()).abs() < 1e-15);
        let (n, p) = Atom::shannon().dilated(3.7).calderon_sides();
        assert!((p - 2f64.ln()).abs() < 1e-15 && (n - 2f64.ln()).abs() < 1e-15);
        let (n, p) = Atom::cauchy(2, 1.0).unwrap().calderon_sides();
        assert_eq!(n, 0.0);
        assert!((p - 6.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn energy_and_dilation() {
        let s = Atom::shannon();
        assert!((s.energy() - 0.5).abs() < 1e-15);
        assert!((s.dilated(0.25).energy() - 0.125).abs() < 1e-15);
        let c = Atom::cauchy(1, 1.0).unwrap();
        // ∫ ξ² e^{−2ξ} = 2/8.
        assert!((c.energy() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn positive_part_drops_negative_frequencies() {
        let p = Atom::indicator(Band::symmetric(0.5).unwrap()).positive_part();
        assert_eq!(p.support(), vec![(0.0, 0.5)]);
        assert_eq!(Atom::shannon().positive_part().support(), vec![(0.25, 0.5)]);
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let f = Shape::Flat;
        assert!(Atom::new(vec![Piece { lo: 0.0, hi: 1.0, shape: f }, Piece { lo: 0.5, hi: 2.0, shape: f }]).is_err());
    }
}

//! Group convolution `f∗g(x) = ∫ f(y) g(y⁻¹x) dy` on the line, the affine
//! group and the affine group times the circle, together with the
//! convolution-algebra identities and Young inequalities.

mod suite;

pub use suite::{algebra_check, young_bound, young_suite, ConvReport, IdentityCheck, InequalityCheck};

use crate::error::{Error, Result};
use crate::grid::{GroupGrid, ModeField, VoiceField};
use crate::group::GroupKind;
use crate::numeric::{cis2pi, fft_forward, fft_inverse, linear_convolve, Czt};
use crate::signal::Signal1D;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Linear (non-circular) convolution `Δx Σ_m f_m g_{k−m}` of two signals on
/// the same spacing. The result starts at `x0_f + x0_g` and is zero-extended
/// to a power of two.
pub fn convolve_line(f: &Signal1D, g: &Signal1D) -> Result<Signal1D> {
    let (af, ag) = (f.axis(), g.axis());
    if (af.dx - ag.dx).abs() > 1e-12 * af.dx {
        return Err(Error::config(format!("sample spacings differ: {} vs {}", af.dx, ag.dx)));
    }
    let c: Vec<Complex64> = linear_convolve(f.samples(), g.samples()).into_iter().map(|z| z * af.dx).collect();
    Signal1D::from_raw_padded(af.x0 + ag.x0, af.dx, c)
}

/// Convolution of two fields on the same grid, restricted to the grid box.
/// Values outside the box count as zero. Angle grids are handled through
/// their θ-modes.
pub fn convolve(f: &VoiceField, g: &VoiceField) -> Result<VoiceField> {
    f.ensure_same_grid(g)?;
    match f.grid().kind() {
        GroupKind::Line => Ok(convolve_line_field(f, g)),
        GroupKind::Affine => convolve_affine(f, g),
        GroupKind::AffineCircle => {
            let grid = f.grid_arc().clone();
            let fm = ModeField::from_nodes(f)?;
            let gm = ModeField::from_nodes(g)?;
            convolve_affine_circle(&fm, &gm)?.to_nodes(grid)
        }
    }
}

/// `(F∗G)(b_k) = Δb Σ_m F(b_m) G(b_k − b_m)` with `G` read at lattice lags.
fn convolve_line_field(f: &VoiceField, g: &VoiceField) -> VoiceField {
    let grid = f.grid_arc().clone();
    let n = grid.n_b();
    let db = grid.db();
    let full = linear_convolve(f.values(), g.values());
    // Node j of G sits at lag (j − n/2)Δb, so lag (k − m)Δb is node k − m + n/2.
    let vals = (0..n).map(|k| full[k + n / 2] * db).collect();
    VoiceField::new(grid, vals).expect("finite convolution")
}

/// `(F∗G)(b,a) = ∫∫ F(β,α) G((b−β)/α, a/α) dβ dα/α²` on an affine grid.
///
/// For each source scale `α_j` the b-integral is a spectral product of the
/// zero-padded slice `F(·,α_j)` with the transform `α Ĝ(αξ)` of the dilated,
/// band-limited interpolant of the slice `G(·, a/α_j)`; the slice index is
/// snapped to the scale grid by log-linear interpolation. The α-integral uses
/// the grid's log-trapezoid weights.
pub fn convolve_affine(f: &VoiceField, g: &VoiceField) -> Result<VoiceField> {
    f.ensure_same_grid(g)?;
    if f.grid().kind() != GroupKind::Affine {
        return Err(Error::config(format!("affine convolution on a {:?} grid", f.grid().kind())));
    }
    Ok(affine_batch(&[(f, Complex64::new(1.0, 0.0))], g).remove(0))
}

/// `c·(F∗G_F)` for every `(F, c)`, where `G_F` has the samples of `g` on the
/// grid of `F`. Each grid is a b-dilation of the grid of `g`; the engine is
/// linear in `Δb`, so the dilated spectra of `g` are computed once for all `F`.
fn affine_batch(fs: &[(&VoiceField, Complex64)], g: &VoiceField) -> Vec<VoiceField> {
    let grid = g.grid_arc().clone();
    let engine = AffineEngine::new(&grid);
    let n = grid.n_b();
    let na = grid.n_a();
    let fh: Vec<Vec<Option<Vec<Complex64>>>> = fs
        .iter()
        .map(|(f, _)| {
            (0..na)
                .into_par_iter()
                .map(|j| (!f.slice_is_zero(j, 0)).then(|| engine.padded_fft(&f.slice(j, 0))))
                .collect()
        })
        .collect();
    let gs: Vec<Option<Vec<Complex64>>> =
        (0..na).map(|s| (!g.slice_is_zero(s, 0)).then(|| g.slice(s, 0))).collect();
    let czt: Vec<Option<Czt>> = (0..na)
        .into_par_iter()
        .map(|j| fh.iter().any(|f| f[j].is_some()).then(|| Czt::new(n, engine.m, -grid.a_nodes()[j] / engine.m as f64)))
        .collect();
    let factors: Vec<Complex64> = fs.iter().map(|(f, c)| c * (f.grid().db() / grid.db() / engine.m as f64)).collect();
    let slices: Vec<Vec<Vec<Complex64>>> = (0..na)
        .into_par_iter()
        .map(|q| {
            let mut acc = vec![vec![ZERO; engine.m]; fs.len()];
            let mut any = vec![false; fs.len()];
            for j in 0..na {
                let Some(cz) = &czt[j] else { continue };
                let alpha = grid.a_nodes()[j];
                let wj = grid.scale_weights()[j];
                for (s, c) in crate::grid::scale_stencil(grid.log_position(grid.a_nodes()[q] / alpha), na) {
                    let Some(gsl) = &gs[s] else { continue };
                    let h = engine.dilated_spectrum(cz, gsl, alpha);
                    for (k, f) in fh.iter().enumerate() {
                        let Some(fj) = &f[j] else { continue };
                        for ((a, x), y) in acc[k].iter_mut().zip(fj).zip(&h) {
                            *a += x * y * (wj * c);
                        }
                        any[k] = true;
                    }
                }
            }
            acc.into_iter()
                .zip(any)
                .zip(&factors)
                .map(|((mut a, any), &s)| {
                    if !any {
                        return vec![ZERO; n];
                    }
                    fft_inverse(&mut a);
                    a.truncate(n);
                    a.iter_mut().for_each(|z| *z *= s);
                    a
                })
                .collect()
        })
        .collect();
    fs.iter()
        .enumerate()
        .map(|(k, (f, _))| {
            let mut out = VoiceField::zeros(f.grid_arc().clone());
            for (q, s) in slices.iter().enumerate() {
                out.set_slice(q, 0, &s[k]);
            }
            out
        })
        .collect()
}

/// `c` with `g = c·h` up to rounding, for fields on b-dilations of one grid.
fn proportional(g: &VoiceField, h: &VoiceField) -> Option<Complex64> {
    let (gg, hg) = (g.grid(), h.grid());
    if gg.a_nodes() != hg.a_nodes() || gg.n_b() != hg.n_b() {
        return None;
    }
    let (i, hm) = h.values().iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    if hm.norm() == 0.0 {
        return None;
    }
    let c = g.values()[i] / hm;
    let scale = g.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    g.values().iter().zip(h.values()).all(|(x, y)| (x - c * y).norm() <= 1e-13 * scale).then_some(c)
}

/// Shared quantities of the affine engine.
pub(crate) struct AffineEngine {
    n: usize,
    /// Padded length `2N`.
    pub(crate) m: usize,
    db: f64,
    nyq: f64,
}

impl AffineEngine {
    pub(crate) fn new(grid: &GroupGrid) -> Self {
        AffineEngine { n: grid.n_b(), m: 2 * grid.n_b(), db: grid.db(), nyq: grid.nyquist() }
    }

    fn padded_fft(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.m];
        buf[..x.len()].copy_from_slice(x);
        fft_forward(&mut buf);
        buf
    }

    /// Band cut of the interpolant at `|η| = Nyquist`, half weight on the edge.
    pub(crate) fn cut(&self, eta: f64) -> f64 {
        let r = eta.abs() / self.nyq;
        if r < 1.0 - 1e-12 {
            1.0
        } else if r <= 1.0 + 1e-12 {
            0.5
        } else {
            0.0
        }
    }

    /// `H_q = α Ĝ(α ξ_q)` in FFT order, `ξ_q = q/(MΔb)`, where
    /// `Ĝ(η) = Δb Σ_m G_m e^{−2πiη t_m}` with `t_m = (m − N/2)Δb`.
    fn dilated_spectrum(&self, cz: &Czt, g: &[Complex64], alpha: f64) -> Vec<Complex64> {
        let (n, m) = (self.n, self.m);
        // Output index k' of the chirp-z transform is frequency index k = k' − M/2.
        let x: Vec<Complex64> = g.iter().enumerate().map(|(j, z)| z * cis2pi(0.5 * alpha * j as f64)).collect();
        let spec = cz.apply(&x);
        let mut h = vec![ZERO; m];
        let half = (m / 2) as i64;
        for (kp, z) in spec.into_iter().enumerate() {
            let k = kp as i64 - half;
            let eta = alpha * k as f64 / (m as f64 * self.db);
            let c = self.cut(eta);
            if c == 0.0 {
                continue;
            }
            let phase = cis2pi(alpha * k as f64 * (n / 2) as f64 / m as f64);
            h[k.rem_euclid(m as i64) as usize] = z * phase * (alpha * self.db * c);
        }
        h
    }
}

/// Per-mode affine convolution `(F∗G)_n = F_n ∗ G_n`. Modes present in only
/// one operand contribute nothing; a shared mode on different grids is an error.
pub fn convolve_affine_circle(f: &ModeField, g: &ModeField) -> Result<ModeField> {
    let shared: Vec<(i32, &VoiceField, &VoiceField)> =
        f.modes().iter().filter_map(|(n, fm)| g.mode(*n).map(|gm| (*n, fm, gm))).collect();
    for (n, fm, gm) in &shared {
        if fm.grid() != gm.grid() {
            return Err(Error::config(format!("mode {n} lives on different grids in the two operands")));
        }
    }
    // Modes whose right operands agree up to a factor share one engine pass.
    let mut groups: Vec<(&VoiceField, Vec<(i32, &VoiceField, Complex64)>)> = Vec::new();
    for (n, fm, gm) in shared {
        match groups.iter_mut().find_map(|(rep, members)| proportional(gm, rep).map(|c| (members, c))) {
            Some((members, c)) => members.push((n, fm, c)),
            None => groups.push((gm, vec![(n, fm, Complex64::new(1.0, 0.0))])),
        }
    }
    let mut out = Vec::new();
    for (g, members) in groups {
        let fs: Vec<(&VoiceField, Complex64)> = members.iter().map(|&(_, f, c)| (f, c)).collect();
        out.extend(members.iter().map(|m| m.0).zip(affine_batch(&fs, g)));
    }
    ModeField::new(out.into_iter().collect::<BTreeMap<_, _>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridParams};
    use crate::signal::Axis;
    use std::sync::Arc;

    #[test]
    fn box_functions_convolve_to_triangle() {
        let axis = Axis::new(-2.0, 0.125, 64).unwrap();
        let boxf = Signal1D::from_fn(axis, |x| Complex64::new(if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let c = convolve_line(&boxf, &boxf).unwrap();
        let ax = c.axis();
        assert_eq!(ax.x0, -4.0);
        for (k, z) in c.samples().iter().enumerate() {
            // Direct sum Δx Σ_m χ(x_m) χ(x_k − x_m) on the lattice.
            let x = ax.x(k);
            let mut d = 0.0;
            for m in 0..64 {
                let y = axis.x(m);
                let inside = |t: f64| (0.0..1.0).contains(&t);
                if inside(y) && inside(x - y) {
                    d += 0.125;
                }
            }
            assert!((z.re - d).abs() < 1e-12, "x = {x}");
        }
        let peak = c.samples().iter().map(|z| z.re).fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_is_identity_on_line() {
        let axis = Axis::new(-4.0, 0.5, 16).unwrap();
        let f = Signal1D::from_fn(axis, |x| Complex64::new(x.cos(), x)).unwrap();
        let delta = Signal1D::from_fn(Axis::new(0.0, 0.5, 2).unwrap(), |x| {
            Complex64::new(if x == 0.0 { 2.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let c = convolve_line(&f, &delta).unwrap();
        for k in 0..16 {
            assert!((c.samples()[k] - f.samples()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn spacing_mismatch_rejected() {
        let a = Signal1D::zeros(Axis::new(0.0, 0.5, 4).unwrap()).unwrap();
        let b = Signal1D::zeros(Axis::new(0.0, 0.25, 4).unwrap()).unwrap();
        assert!(convolve_line(&a, &b).is_err());
    }

    #[test]
    fn disjoint_modes_give_zero() {
        let g = Arc::new(build_grid(GroupKind::Affine, GridParams::default().with_b(4.0, 16).with_octaves(0.5, 5, 2)).unwrap());
        let one = VoiceField::new(g.clone(), vec![Complex64::new(1.0, 0.0); g.len()]).unwrap();
        let f = ModeField::new([(1, one.clone())].into()).unwrap();
        let h = ModeField::new([(2, one)].into()).unwrap();
        let c = convolve_affine_circle(&f, &h).unwrap();
        assert_eq!(c.l2_norm(), 0.0);
    }

    #[test]
    fn mismatched_mode_grids_rejected() {
        let p = GridParams::default().with_b(4.0, 16).with_octaves(0.5, 5, 2);
        let g1 = Arc::new(build_grid(GroupKind::Affine, p).unwrap());
        let g2 = Arc::new(g1.dilate_b(2.0));
        let f = ModeField::new([(0, VoiceField::zeros(g1))].into()).unwrap();
        let h = ModeField::new([(0, VoiceField::zeros(g2))].into()).unwrap();
        assert!(convolve_affine_circle(&f, &h).is_err());
    }
}

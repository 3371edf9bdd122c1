//! Slow reference implementations used as test oracles: direct-sum group
//! convolutions with the same discretization as the fast engine, and direct
//! quadrature of Schrödingerlet inner products from closed-form atoms.

use crate::atom::{Atom, Shape};
use crate::error::{Error, Result};
use crate::grid::{scale_stencil, GroupGrid, ModeField, VoiceField};
use crate::group::GroupKind;
use crate::numeric::{cis2pi, pairwise_sum_c};
use crate::voice::SchrodingerletAtom;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Direct-sum convolution on any grid; `O(N²)` per scale pair.
pub fn brute_convolve(f: &VoiceField, g: &VoiceField) -> Result<VoiceField> {
    f.ensure_same_grid(g)?;
    match f.grid().kind() {
        GroupKind::Line => Ok(brute_line(f, g)),
        GroupKind::Affine => Ok(brute_affine(f, g)),
        GroupKind::AffineCircle => brute_circle(f, g),
    }
}

fn brute_line(f: &VoiceField, g: &VoiceField) -> VoiceField {
    let grid = f.grid_arc().clone();
    let n = grid.n_b() as isize;
    let db = grid.db();
    let (fv, gv) = (f.values(), g.values());
    let vals = (0..n)
        .map(|k| {
            let terms: Vec<Complex64> = (0..n)
                .filter_map(|m| {
                    let j = k - m + n / 2;
                    (0..n).contains(&j).then(|| fv[m as usize] * gv[j as usize])
                })
                .collect();
            pairwise_sum_c(&terms) * db
        })
        .collect();
    VoiceField::new(grid, vals).expect("finite sums")
}

/// `h(l) = (1/M) Σ_{k=−M/2}^{M/2−1} α Ĝ(αk/(MΔb)) cut e^{2πikl/M}` for
/// `l ∈ (−N, N)`, with `Ĝ(η) = Δb Σ_m G_m e^{−2πiη t_m}` evaluated directly.
fn lag_filter(g: &[Complex64], alpha: f64, db: f64, nyq: f64) -> Vec<Complex64> {
    let n = g.len() as i64;
    let m = 2 * n;
    let spec: Vec<Complex64> = (-m / 2..m / 2)
        .map(|k| {
            let eta = alpha * k as f64 / (m as f64 * db);
            let r = eta.abs() / nyq;
            let cut = if r < 1.0 - 1e-12 {
                1.0
            } else if r <= 1.0 + 1e-12 {
                0.5
            } else {
                return ZERO;
            };
            let terms: Vec<Complex64> = g
                .iter()
                .enumerate()
                .map(|(j, z)| z * cis2pi(-eta * (j as i64 - n / 2) as f64 * db))
                .collect();
            pairwise_sum_c(&terms) * (db * alpha * cut)
        })
        .collect();
    (-(n - 1)..n)
        .map(|l| {
            let terms: Vec<Complex64> =
                spec.iter().enumerate().map(|(i, z)| z * cis2pi(((i as i64 - m / 2) * l) as f64 / m as f64)).collect();
            pairwise_sum_c(&terms) / m as f64
        })
        .collect()
}

fn brute_affine(f: &VoiceField, g: &VoiceField) -> VoiceField {
    let grid = f.grid_arc().clone();
    let (n, na) = (grid.n_b(), grid.n_a());
    let slices: Vec<Vec<Complex64>> = (0..na)
        .into_par_iter()
        .map(|q| {
            let mut out = vec![ZERO; n];
            for j in 0..na {
                if f.slice_is_zero(j, 0) {
                    continue;
                }
                let alpha = grid.a_nodes()[j];
                let fj = f.slice(j, 0);
                for (s, c) in scale_stencil(grid.log_position(grid.a_nodes()[q] / alpha), na) {
                    if g.slice_is_zero(s, 0) {
                        continue;
                    }
                    let h = lag_filter(&g.slice(s, 0), alpha, grid.db(), grid.nyquist());
                    let w = grid.scale_weights()[j] * c;
                    for (k, o) in out.iter_mut().enumerate() {
                        let terms: Vec<Complex64> = fj.iter().enumerate().map(|(m, z)| z * h[k + n - 1 - m]).collect();
                        *o += pairwise_sum_c(&terms) * w;
                    }
                }
            }
            out
        })
        .collect();
    let mut res = VoiceField::zeros(grid);
    for (q, s) in slices.iter().enumerate() {
        res.set_slice(q, 0, s);
    }
    res
}

/// `(F∗G)(b,a,φ) = (1/n_φ) Σ_ψ (F(·,·,ψ) ∗ G(·,·,φ−ψ))(b,a)`.
fn brute_circle(f: &VoiceField, g: &VoiceField) -> Result<VoiceField> {
    let grid = f.grid_arc().clone();
    let base = Arc::new(grid.affine_part());
    let np = grid.n_phi();
    let part = |field: &VoiceField, ip: usize| -> VoiceField {
        let mut v = VoiceField::zeros(base.clone());
        for ia in 0..grid.n_a() {
            v.set_slice(ia, 0, &field.slice(ia, ip));
        }
        v
    };
    let mut out = VoiceField::zeros(grid.clone());
    for ip in 0..np {
        let mut acc = VoiceField::zeros(base.clone());
        for ipsi in 0..np {
            let c = brute_affine(&part(f, ipsi), &part(g, (ip + np - ipsi) % np));
            acc = acc.add(&c)?;
        }
        for ia in 0..grid.n_a() {
            let s: Vec<Complex64> = acc.slice(ia, 0).iter().map(|z| z / np as f64).collect();
            out.set_slice(ia, ip, &s);
        }
    }
    Ok(out)
}

/// Brute-force counterpart of [`crate::convolution::convolve_affine_circle`].
pub fn brute_convolve_modes(f: &ModeField, g: &ModeField) -> Result<ModeField> {
    let mut out = std::collections::BTreeMap::new();
    for (n, fm) in f.modes() {
        if let Some(gm) = g.mode(*n) {
            out.insert(*n, brute_convolve(fm, gm)?);
        }
    }
    ModeField::new(out)
}

/// `u(x)` of a single-piece Cauchy atom: `gain · d · k!/(c − 2πi d(x − τ))^{k+1}`.
pub fn cauchy_time(atom: &Atom, x: f64) -> Result<Complex64> {
    let [p] = atom.pieces() else {
        return Err(Error::domain("closed-form time values need a single Cauchy piece"));
    };
    let Shape::Cauchy { order, width } = p.shape else {
        return Err(Error::domain("closed-form time values need a Cauchy piece"));
    };
    let d = atom.dilation();
    let y = d * (x - atom.shift());
    let fact: f64 = (1..=order).map(f64::from).product();
    Ok(atom.gain() * d * fact / Complex64::new(width, -std::f64::consts::TAU * y).powi(order as i32 + 1))
}

/// Quadrature settings for [`direct_schrodingerlet_voice`].
#[derive(Debug, Clone, Copy)]
pub struct DirectRule {
    pub halfwidth: f64,
    pub step: f64,
    pub n_theta: usize,
}

impl Default for DirectRule {
    fn default() -> Self {
        DirectRule { halfwidth: 400.0, step: 0.025, n_theta: 16 }
    }
}

/// `⟨v, π(b,a,φ)u⟩ = ∫∫ v(x,θ) conj(a^{−1/2} u((x−b)/a, θ−φ)) dx dθ/2π` at every
/// node of an angle grid, with `v(x,θ) = Σ_n v_n(x) e^{inθ}` assembled from
/// closed-form Cauchy modes and both integrals done by the trapezoid rule.
pub fn direct_schrodingerlet_voice(
    v: &SchrodingerletAtom,
    u: &SchrodingerletAtom,
    grid: Arc<GroupGrid>,
    rule: DirectRule,
) -> Result<VoiceField> {
    if grid.kind() != GroupKind::AffineCircle {
        return Err(Error::config("direct voices are evaluated on an affine-circle grid"));
    }
    let nx = (2.0 * rule.halfwidth / rule.step).round() as usize + 1;
    let xs: Vec<f64> = (0..nx).map(|i| -rule.halfwidth + i as f64 * rule.step).collect();
    let nt = rule.n_theta;
    let thetas: Vec<f64> = (0..nt).map(|j| j as f64 / nt as f64).collect();
    let v_modes: Vec<(i32, &Atom)> = v.modes().map(|(n, _, a)| (n, a)).collect();
    let u_modes: Vec<(i32, &Atom)> = u.modes().map(|(n, _, a)| (n, a)).collect();
    for (_, a) in v_modes.iter().chain(&u_modes) {
        cauchy_time(a, 0.0)?;
    }
    // v(x_i, θ_j)
    let vx: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            let vals: Vec<(i32, Complex64)> =
                v_modes.iter().map(|(n, a)| (*n, cauchy_time(a, x).expect("checked"))).collect();
            thetas.iter().map(|t| vals.iter().map(|(n, z)| z * cis2pi(*n as f64 * t)).sum()).collect()
        })
        .collect();
    let (nb, na, np) = (grid.n_b(), grid.n_a(), grid.n_phi());
    let values: Vec<Vec<Complex64>> = (0..nb * na)
        .into_par_iter()
        .map(|idx| {
            let (ib, ia) = (idx / na, idx % na);
            let (b, a) = (grid.b_nodes()[ib], grid.a_nodes()[ia]);
            let s = a.sqrt().recip();
            // Σ_i v(x_i, θ_j) conj(u_n((x_i − b)/a)) per (n, θ_j).
            let mut acc = vec![vec![ZERO; nt]; u_modes.len()];
            for (i, &x) in xs.iter().enumerate() {
                for (m, (_, un)) in u_modes.iter().enumerate() {
                    let w = cauchy_time(un, (x - b) / a).expect("checked").conj() * s;
                    for j in 0..nt {
                        acc[m][j] += vx[i][j] * w;
                    }
                }
            }
            (0..np)
                .map(|ip| {
                    let phi = ip as f64 / np as f64;
                    let mut total = ZERO;
                    for (m, (n, _)) in u_modes.iter().enumerate() {
                        for (j, t) in thetas.iter().enumerate() {
                            total += acc[m][j] * cis2pi(-(*n as f64) * (t - phi));
                        }
                    }
                    total * (rule.step / nt as f64)
                })
                .collect()
        })
        .collect();
    let mut out = vec![ZERO; grid.len()];
    for (idx, per_phi) in values.into_iter().enumerate() {
        let (ib, ia) = (idx / na, idx % na);
        for (ip, z) in per_phi.into_iter().enumerate() {
            out[grid.index(ib, ia, ip)] = z;
        }
    }
    VoiceField::new(grid, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::convolve;
    use crate::grid::{build_grid, GridParams};

    fn field(grid: &Arc<GroupGrid>, seed: f64) -> VoiceField {
        let vals = (0..grid.len())
            .map(|i| {
                let x = grid.node(i);
                Complex64::new((-(x.b() - seed).powi(2) / 4.0).exp() * x.a(), (seed * x.b()).sin() * (-x.b() * x.b() / 8.0).exp())
            })
            .collect();
        VoiceField::new(grid.clone(), vals).unwrap()
    }

    #[test]
    fn engine_matches_direct_sums() {
        let p = GridParams::default().with_b(4.0, 16).with_octaves(0.5, 5, 2);
        for kind in [GroupKind::Line, GroupKind::Affine] {
            let g = Arc::new(build_grid(kind, p).unwrap());
            let (f, h) = (field(&g, 0.3), field(&g, -1.1));
            let d = convolve(&f, &h).unwrap().rel_diff(&brute_convolve(&f, &h).unwrap()).unwrap();
            assert!(d < 1e-10, "{kind:?}: {d}");
        }
    }

    #[test]
    fn cauchy_closed_form_matches_sampling() {
        let u = Atom::cauchy(2, 3.0).unwrap().dilated(0.7).shifted(-0.4).scaled(1.3);
        let axis = crate::signal::Axis::centered(8.0, 256);
        let s = u.sample(axis).unwrap();
        for (x, z) in axis.points().zip(s.samples()) {
            assert!((cauchy_time(&u, x).unwrap() - z).norm() < 1e-8);
        }
        assert!(cauchy_time(&Atom::shannon(), 0.0).is_err());
    }
}

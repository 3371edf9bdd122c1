use super::VoiceField;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};
use crate::numeric::{cis2pi, Czt};
use num_complex::Complex64;
use rayon::prelude::*;

/// Oversampling of the frequency quadrature used for band-limited evaluation.
const OVERSAMPLE: usize = 8;

/// Evaluates the band-limited interpolant of samples `f_m` at `t_m = t0 + m·dt`
/// on the points `y_k = y0 + k·dy`. Points outside the sampled box give zero.
pub fn bl_resample(f: &[Complex64], t0: f64, dt: f64, y0: f64, dy: f64, n_out: usize) -> Vec<Complex64> {
    let n = f.len();
    let zero = Complex64::new(0.0, 0.0);
    if n == 0 || n_out == 0 {
        return vec![zero; n_out];
    }
    let lo = t0 - 0.5 * dt;
    let hi = t0 + (n as f64 - 0.5) * dt;
    let inside = |k: usize| {
        let y = y0 + k as f64 * dy;
        y >= lo - 1e-12 * dt && y <= hi + 1e-12 * dt
    };
    if let Some(out) = lattice_shift(f, t0, dt, y0, dy, n_out) {
        return out.into_iter().enumerate().map(|(k, z)| if inside(k) { z } else { zero }).collect();
    }
    let nyq = 0.5 / dt;
    let m = OVERSAMPLE * n;
    let dxi = 2.0 * nyq / m as f64;
    // Spectrum at ξ_q = −nyq + q dξ, q = 0..=m.
    let x: Vec<Complex64> = f.iter().enumerate().map(|(j, z)| if j % 2 == 0 { *z } else { -*z }).collect();
    let spec = Czt::new(n, m + 1, -1.0 / m as f64).apply(&x);
    let pre = cis2pi(nyq * t0);
    let g: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(q, s)| {
            let w = if q == 0 || q == m { 0.5 } else { 1.0 };
            let qd = q as f64 * dxi;
            s * pre * cis2pi(-qd * t0) * cis2pi(qd * y0) * (w * dt)
        })
        .collect();
    let vals = Czt::new(m + 1, n_out, dxi * dy).apply(&g);
    vals.into_iter()
        .enumerate()
        .map(|(k, v)| if inside(k) { v * dxi * cis2pi(-nyq * (y0 + k as f64 * dy)) } else { zero })
        .collect()
}

/// Exact index shift when the target points lie on the sample lattice.
fn lattice_shift(f: &[Complex64], t0: f64, dt: f64, y0: f64, dy: f64, n_out: usize) -> Option<Vec<Complex64>> {
    let dir = if (dy - dt).abs() <= 1e-12 * dt {
        1i64
    } else if (dy + dt).abs() <= 1e-12 * dt {
        -1
    } else {
        return None;
    };
    let u = (y0 - t0) / dt;
    let s = u.round();
    if (u - s).abs() > 1e-9 {
        return None;
    }
    let s = s as i64;
    let n = f.len() as i64;
    Some(
        (0..n_out as i64)
            .map(|k| {
                let j = s + dir * k;
                if (0..n).contains(&j) {
                    f[j as usize]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    )
}

/// Target description for one output slice: source scale and b-points `p + kδ`.
struct SliceMap {
    scale: f64,
    start: f64,
    step: f64,
    phi_index: usize,
}

fn resample_field(field: &VoiceField, map: impl Fn(usize, usize) -> SliceMap + Sync) -> VoiceField {
    let grid = field.grid();
    let (nb, na, np) = (grid.n_b(), grid.n_a(), grid.n_phi());
    let t0 = grid.b_nodes()[0];
    let db = grid.db();
    let slices: Vec<(usize, usize, Vec<Complex64>)> = (0..na * np)
        .into_par_iter()
        .map(|s| {
            let (ia, ip) = (s / np, s % np);
            let m = map(ia, ip);
            let mut out = vec![Complex64::new(0.0, 0.0); nb];
            let parts: Vec<(usize, f64)> = if grid.kind() == GroupKind::Line {
                vec![(0, 1.0)]
            } else {
                scale_stencil(grid.log_position(m.scale), na)
            };
            for (src, w) in parts {
                let col = field.slice(src, m.phi_index);
                if col.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                    continue;
                }
                let vals = bl_resample(&col, t0, db, m.start, m.step, nb);
                for (o, v) in out.iter_mut().zip(vals) {
                    *o += v * w;
                }
            }
            (ia, ip, out)
        })
        .collect();
    let mut res = VoiceField::zeros(field.grid_arc().clone());
    for (ia, ip, s) in slices {
        res.set_slice(ia, ip, &s);
    }
    res
}

/// Log-linear interpolation stencil for a fractional scale position; slices
/// beyond the grid count as zero.
pub(crate) fn scale_stencil(u: f64, na: usize) -> Vec<(usize, f64)> {
    let k = u.round();
    if (u - k).abs() < 1e-9 {
        return if k >= 0.0 && (k as usize) < na { vec![(k as usize, 1.0)] } else { vec![] };
    }
    let k0 = u.floor();
    let frac = u - k0;
    let mut out = Vec::with_capacity(2);
    if k0 >= 0.0 && (k0 as usize) < na {
        out.push((k0 as usize, 1.0 - frac));
    }
    let k1 = k0 + 1.0;
    if k1 >= 0.0 && (k1 as usize) < na {
        out.push((k1 as usize, frac));
    }
    out
}

fn phi_shift(field: &VoiceField, phi: f64) -> Result<isize> {
    let np = field.grid().n_phi();
    let u = phi * np as f64 / std::f64::consts::TAU;
    let s = u.round();
    if (u - s).abs() > 1e-9 {
        return Err(Error::domain(format!("angle {phi} is not a grid angle")));
    }
    Ok(s as isize)
}

fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// `(λ(x)F)(y) = F(x⁻¹y)`.
pub fn left_translate(field: &VoiceField, x: &GroupElement) -> Result<VoiceField> {
    let grid = field.grid();
    let (b0, a0) = (x.b(), x.a());
    let sp = phi_shift(field, x.phi())?;
    let np = grid.n_phi();
    let t0 = grid.b_nodes()[0];
    let db = grid.db();
    Ok(resample_field(field, |ia, ip| SliceMap {
        scale: grid.a_nodes()[ia] / a0,
        start: (t0 - b0) / a0,
        step: db / a0,
        phi_index: wrap(ip as isize - sp, np),
    }))
}

/// `(ρ(x)F)(y) = F(yx)`.
pub fn right_translate(field: &VoiceField, x: &GroupElement) -> Result<VoiceField> {
    let grid = field.grid();
    let (b0, a0) = (x.b(), x.a());
    let sp = phi_shift(field, x.phi())?;
    let np = grid.n_phi();
    let t0 = grid.b_nodes()[0];
    let db = grid.db();
    Ok(resample_field(field, |ia, ip| {
        let a = grid.a_nodes()[ia];
        SliceMap { scale: a * a0, start: t0 + a * b0, step: db, phi_index: wrap(ip as isize + sp, np) }
    }))
}

/// `F̌(y) = F(y⁻¹)`.
pub fn check(field: &VoiceField) -> VoiceField {
    let grid = field.grid();
    let np = grid.n_phi();
    let t0 = grid.b_nodes()[0];
    let db = grid.db();
    resample_field(field, |ia, ip| {
        let a = grid.a_nodes()[ia];
        SliceMap { scale: 1.0 / a, start: -t0 / a, step: -db / a, phi_index: wrap(-(ip as isize), np) }
    })
}

use super::VoiceField;
use crate::error::{Error, Result};
use crate::group::Weight;
use crate::numeric::{fmt_sig, par_map_sum};
use serde::Serialize;
use std::fmt;
use std::io::Write;

/// Relative increment separating convergent from divergent window profiles.
pub const CAUCHY_TOL: f64 = 1e-2;

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::domain(format!("exponent p = {p} must satisfy p ≥ 1")))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn recip(&self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

fn weighted_norm(field: &VoiceField, p: Exponent, density: impl Fn(usize) -> f64 + Sync) -> f64 {
    let n = field.values().len();
    match p {
        Exponent::Infinity => field.values().iter().enumerate().map(|(i, z)| z.norm() * density(i)).fold(0.0, f64::max),
        Exponent::Finite(p) => {
            let grid = field.grid();
            let v = field.values();
            let s = par_map_sum(n, |i| (v[i].norm() * density(i)).powf(p) * grid.quad_weight(i));
            s.powf(1.0 / p)
        }
    }
}

/// `‖w f‖_p = (Σ |w f|^p · quad_weight)^{1/p}`; the maximum of `|w f|` for `p = ∞`.
pub fn lp_norm(field: &VoiceField, p: Exponent, w: &Weight) -> f64 {
    let grid = field.grid();
    if w.is_one() {
        weighted_norm(field, p, |_| 1.0)
    } else {
        weighted_norm(field, p, |i| w.eval(&grid.node(i)))
    }
}

/// `‖f̌‖_p` with `f̌(x) = f(x⁻¹)`, computed on the nodes of `f` through
/// `∫ |f(x⁻¹)|^p dx = ∫ |f(x)|^p Δ(x⁻¹) dx`.
pub fn lp_norm_inverted(field: &VoiceField, p: Exponent) -> f64 {
    let grid = field.grid();
    match p {
        Exponent::Infinity => weighted_norm(field, p, |_| 1.0),
        Exponent::Finite(pf) => {
            let kind = grid.kind();
            weighted_norm(field, p, |i| (1.0 / kind.modular(&grid.node(i))).powf(1.0 / pf))
        }
    }
}

/// One row of a windowed integrability profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub halfwidth: f64,
    pub p: f64,
    pub partial_norm: f64,
}

/// Partial `L^p` norms restricted to `|b| ≤ halfwidth` for increasing windows.
pub fn window_profile(field: &VoiceField, p: Exponent, windows: &[f64]) -> Result<Vec<ProfileRow>> {
    window_profile_weighted(field, p, &Weight::one(), windows)
}

/// [`window_profile`] of `w f`.
pub fn window_profile_weighted(
    field: &VoiceField,
    p: Exponent,
    w: &Weight,
    windows: &[f64],
) -> Result<Vec<ProfileRow>> {
    if windows.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("profile windows must be strictly increasing"));
    }
    let grid = field.grid();
    let dens: Vec<f64> =
        (0..grid.len()).map(|i| if w.is_one() { 1.0 } else { w.eval(&grid.node(i)) }).collect();
    Ok(windows
        .iter()
        .map(|&h| {
            let inside = |i: usize| if grid.node(i).b().abs() <= h { dens[i] } else { 0.0 };
            ProfileRow { halfwidth: h, p: p.value(), partial_norm: weighted_norm(field, p, inside) }
        })
        .collect())
}

/// Relative increment `(P_last − P_prev)/P_last` of the last two windows.
pub fn cauchy_increment(rows: &[ProfileRow]) -> f64 {
    match rows {
        [.., prev, last] if last.partial_norm > 0.0 => (last.partial_norm - prev.partial_norm) / last.partial_norm,
        _ => 0.0,
    }
}

/// Outcome of the windowed Cauchy test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
}

impl Verdict {
    pub fn from_increment(inc: f64, tol: f64) -> Self {
        if inc > tol {
            Verdict::Divergent
        } else {
            Verdict::Convergent
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
        }
    }
}

/// Writes `halfwidth,p,partial_norm`.
pub fn write_profile_csv<W: Write>(rows: &[ProfileRow], mut w: W) -> Result<()> {
    writeln!(w, "halfwidth,p,partial_norm")?;
    for r in rows {
        writeln!(w, "{},{},{}", fmt_sig(r.halfwidth), fmt_sig(r.p), fmt_sig(r.partial_norm))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridParams, GroupGrid};
    use crate::group::GroupKind;
    use num_complex::Complex64;
    use std::sync::Arc;

    fn unit_mass_line() -> Arc<GroupGrid> {
        Arc::new(build_grid(GroupKind::Line, GridParams::default().with_b(0.5, 64)).unwrap())
    }

    #[test]
    fn constant_field_on_unit_mass_grid() {
        let g = unit_mass_line();
        let f = VoiceField::new(g.clone(), vec![Complex64::new(0.0, 3.0); g.len()]).unwrap();
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            let n = lp_norm(&f, Exponent::new(p).unwrap(), &Weight::one());
            assert!((n - 3.0).abs() < 1e-12, "p = {p}: {n}");
        }
    }

    #[test]
    fn exponent_below_one_rejected() {
        assert!(matches!(Exponent::new(0.5), Err(Error::Domain(_))));
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
    }

    #[test]
    fn sinc_kernel_has_unit_l2_norm() {
        let g = Arc::new(build_grid(GroupKind::Line, GridParams::default()).unwrap());
        let vals = g.b_nodes().iter().map(|&b| Complex64::new(crate::numeric::sinc(std::f64::consts::PI * b), 0.0)).collect();
        let f = VoiceField::new(g, vals).unwrap();
        let n = lp_norm(&f, Exponent::Finite(2.0), &Weight::one());
        assert!((n - 1.0).abs() < 1e-3, "{n}");
    }

    #[test]
    fn zero_field_profile() {
        let f = VoiceField::zeros(unit_mass_line());
        let rows = window_profile(&f, Exponent::Finite(1.0), &[0.1, 0.2, 0.4]).unwrap();
        assert!(rows.iter().all(|r| r.partial_norm == 0.0));
        assert_eq!(cauchy_increment(&rows), 0.0);
    }

    #[test]
    fn profile_csv_header() {
        let rows = [ProfileRow { halfwidth: 10.0, p: 1.5, partial_norm: 1.0 / 3.0 }];
        let mut buf = Vec::new();
        write_profile_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "halfwidth,p,partial_norm\n10,1.5,0.333333333333\n");
    }

    #[test]
    fn inverted_norm_uses_modular_function() {
        let g = Arc::new(
            build_grid(GroupKind::Affine, GridParams::default().with_b(4.0, 16).with_octaves(0.5, 5, 2)).unwrap(),
        );
        let f = VoiceField::new(g.clone(), vec![Complex64::new(1.0, 0.0); g.len()]).unwrap();
        // Σ a · quad_weight = Δb Σ c_k Δ for the constant field.
        let want: f64 = g.scale_weights().iter().zip(g.a_nodes()).map(|(w, a)| w * a).sum::<f64>() * 8.0;
        assert!((lp_norm_inverted(&f, Exponent::Finite(1.0)) - want).abs() < 1e-12);
    }
}

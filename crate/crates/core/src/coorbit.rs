//! Reproducing-space membership, coorbit norms and kernel integrability.

use crate::error::{Error, Result};
use crate::grid::{
    bl_resample, cauchy_increment, lp_norm, window_profile_weighted, Exponent, GroupGrid, ModeField, ProfileRow,
    Verdict, VoiceField, CAUCHY_TOL,
};
use crate::group::Weight;
use crate::numeric::fmt_sig;
use crate::voice::{Analyzer, Representation, Signal, Voice};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

/// Default residual below which a field counts as a member of `M^p`.
pub const MEMBERSHIP_TOL: f64 = 1e-2;

/// Largest window halfwidth used by [`integrability_profile`].
pub const PROFILE_MAX_WINDOW: f64 = 1e3;

/// `(F ∗ K, ‖F ∗ K − F‖ / ‖F‖)`.
pub fn reproduce(f: &Voice, k: &Voice) -> Result<(Voice, f64)> {
    let fk = f.convolve(k)?;
    let r = fk.rel_diff(f)?;
    Ok((fk, r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoorbitReport {
    pub p: f64,
    pub weight_id: String,
    pub coorbit_norm: f64,
    pub residual: f64,
    /// `‖v‖_{L^p(ℝ)}` for translation representations with the unit weight.
    pub comparison: Option<f64>,
}

impl CoorbitReport {
    pub fn is_member(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Evaluates a voice at the nodes of the analyzer grid. Schrödingerlet modes
/// are resampled from their dilated grids onto the base box and summed
/// against `e^{inφ}`.
pub fn voice_on_nodes(f: &Voice, an: &Analyzer) -> Result<VoiceField> {
    match f {
        Voice::Field(field) => Ok(field.clone()),
        Voice::Modes(m) => {
            let grid = an.grid();
            let base = Arc::new(grid.affine_part());
            let modes = m
                .modes()
                .par_iter()
                .map(|(&n, field)| resample_b(field, &base).map(|r| (n, r)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            ModeField::new(modes)?.to_nodes(grid.clone())
        }
    }
}

fn resample_b(field: &VoiceField, target: &Arc<GroupGrid>) -> Result<VoiceField> {
    let src = field.grid();
    if src.a_nodes() != target.a_nodes() {
        return Err(Error::config("mode grid and base grid have different scales"));
    }
    let (t0, dt) = (src.b_nodes()[0], src.db());
    let (y0, dy) = (target.b_nodes()[0], target.db());
    VoiceField::from_slices(target.clone(), |ia, _| bl_resample(&field.slice(ia, 0), t0, dt, y0, dy, target.n_b()))
}

/// Coorbit norm `‖Vv‖_{p,w}` with the membership residual of `Vv` under the kernel `k`.
pub fn coorbit_report(v: &Signal, an: &Analyzer, k: &Voice, p: f64, w: &Weight) -> Result<CoorbitReport> {
    Ok(coorbit_reports(v, an, k, &[p], w)?.remove(0))
}

/// [`coorbit_report`] for several exponents, sharing the voice and its residual.
fn coorbit_reports(v: &Signal, an: &Analyzer, k: &Voice, ps: &[f64], w: &Weight) -> Result<Vec<CoorbitReport>> {
    let exps = ps.iter().map(|&p| Exponent::new(p)).collect::<Result<Vec<_>>>()?;
    let vv = an.voice(v)?;
    let residual = if vv.l2_norm() == 0.0 { 0.0 } else { reproduce(&vv, k)?.1 };
    let nodes = voice_on_nodes(&vv, an)?;
    let line = match (an.representation(), v) {
        (Representation::Translation { .. }, Signal::Line(s)) if w.is_one() => Some(s),
        _ => None,
    };
    Ok(ps
        .iter()
        .zip(exps)
        .map(|(&p, exp)| CoorbitReport {
            p,
            weight_id: w.id().to_string(),
            coorbit_norm: lp_norm(&nodes, exp, w),
            residual,
            comparison: line.map(|s| s.lp_norm(p)),
        })
        .collect())
}

/// [`coorbit_report`] with the kernel of the analyzer.
pub fn coorbit_norm(v: &Signal, an: &Analyzer, p: f64, w: &Weight) -> Result<CoorbitReport> {
    Exponent::new(p)?;
    coorbit_report(v, an, &an.kernel()?, p, w)
}

/// One row of a batch of coorbit reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchRow {
    pub signal_id: usize,
    pub p: f64,
    pub coorbit_norm: f64,
    pub residual: f64,
    pub verdict: &'static str,
}

/// Reports for every signal and exponent, ordered by signal then exponent.
pub fn coorbit_batch(signals: &[Signal], an: &Analyzer, ps: &[f64], w: &Weight, tol: f64) -> Result<Vec<BatchRow>> {
    for &p in ps {
        Exponent::new(p)?;
    }
    let k = an.kernel()?;
    let rows = signals
        .par_iter()
        .enumerate()
        .map(|(id, v)| {
            Ok(coorbit_reports(v, an, &k, ps, w)?
                .into_iter()
                .map(|r| BatchRow {
                    signal_id: id,
                    p: r.p,
                    coorbit_norm: r.coorbit_norm,
                    residual: r.residual,
                    verdict: if r.is_member(tol) { "member" } else { "non_member" },
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Writes `signal_id,p,coorbit_norm,residual,verdict`.
pub fn write_batch_csv<W: Write>(rows: &[BatchRow], mut w: W) -> Result<()> {
    writeln!(w, "signal_id,p,coorbit_norm,residual,verdict")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.signal_id, fmt_sig(r.p), fmt_sig(r.coorbit_norm), fmt_sig(r.residual), r.verdict)?;
    }
    Ok(())
}

/// Windowed integrability of a field for one exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrabilityRow {
    pub p: f64,
    pub increment: f64,
    pub partial_norm: f64,
    pub verdict: Verdict,
    /// Set when the weighted profile diverges while the unweighted one
    /// converges, so the verdict reflects the growth of `w` over the box.
    pub weight_growth: bool,
    pub windows: Vec<ProfileRow>,
}

/// Dyadic halfwidths `max/2^k` down to about 1/64 of `max`, increasing.
pub fn dyadic_windows(max: f64) -> Vec<f64> {
    (0..7).rev().map(|k| max / f64::powi(2.0, k)).collect()
}

/// Cauchy verdicts of the windowed partial norms of `w·k` for each exponent.
/// Windows are dyadic up to the smaller of the box halfwidth and
/// [`PROFILE_MAX_WINDOW`].
pub fn integrability_profile(k: &VoiceField, ps: &[f64], w: &Weight) -> Result<Vec<IntegrabilityRow>> {
    integrability_profile_with(k, ps, w, CAUCHY_TOL)
}

/// [`integrability_profile`] with the verdict threshold `tol`.
pub fn integrability_profile_with(k: &VoiceField, ps: &[f64], w: &Weight, tol: f64) -> Result<Vec<IntegrabilityRow>> {
    let windows = dyadic_windows(k.grid().params().b_halfwidth.min(PROFILE_MAX_WINDOW));
    let unit = Weight::one();
    ps.iter()
        .map(|&p| {
            let exp = Exponent::new(p)?;
            let rows = window_profile_weighted(k, exp, w, &windows)?;
            let increment = cauchy_increment(&rows);
            let verdict = Verdict::from_increment(increment, tol);
            let weight_growth = !w.is_one()
                && verdict == Verdict::Divergent
                && Verdict::from_increment(cauchy_increment(&window_profile_weighted(k, exp, &unit, &windows)?), tol)
                    == Verdict::Convergent;
            Ok(IntegrabilityRow {
                p,
                increment,
                partial_norm: rows.last().map_or(0.0, |r| r.partial_norm),
                verdict,
                weight_growth,
                windows: rows,
            })
        })
        .collect()
}

/// Writes `p,increment,partial_norm,verdict`.
pub fn write_profile_table<W: Write>(rows: &[IntegrabilityRow], mut w: W) -> Result<()> {
    writeln!(w, "p,increment,partial_norm,verdict")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", fmt_sig(r.p), fmt_sig(r.increment), fmt_sig(r.partial_norm), r.verdict.as_str())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridParams};
    use crate::group::GroupKind;
    use crate::signal::Signal1D;
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn line() -> Analyzer {
        let g = Arc::new(build_grid(GroupKind::Line, GridParams::default().with_b(128.0, 512)).unwrap());
        Analyzer::new(&Representation::sinc(0.5).unwrap(), g).unwrap()
    }

    fn packet(an: &Analyzer, c: f64) -> Signal {
        Signal::Line(
            Signal1D::from_fn(an.axis(), |x| {
                Complex64::from_polar((-(x - c).powi(2) / 50.0).exp(), TAU * 0.25 * x)
            })
            .unwrap(),
        )
    }

    #[test]
    fn zero_signal_has_zero_norm() {
        let an = line();
        let z = Signal::Line(Signal1D::zeros(an.axis()).unwrap());
        let r = coorbit_norm(&z, &an, 2.0, &Weight::one()).unwrap();
        assert_eq!(r.coorbit_norm, 0.0);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn homogeneity() {
        let an = line();
        let v = packet(&an, 3.0);
        let c = Complex64::new(-1.5, 2.0);
        let w = Weight::poly(1.0);
        let a = coorbit_norm(&v, &an, 1.5, &w).unwrap().coorbit_norm;
        let b = coorbit_norm(&v.scale(c), &an, 1.5, &w).unwrap().coorbit_norm;
        assert!((b - c.norm() * a).abs() <= 1e-13 * b);
    }

    #[test]
    fn exponent_below_one_is_domain_error() {
        let an = line();
        assert!(matches!(coorbit_norm(&packet(&an, 0.0), &an, 0.5, &Weight::one()), Err(Error::Domain(_))));
    }

    #[test]
    fn batch_rows_are_ordered() {
        let an = line();
        let sigs = [packet(&an, 0.0), packet(&an, 10.0)];
        let rows = coorbit_batch(&sigs, &an, &[2.0, 1.5], &Weight::one(), MEMBERSHIP_TOL).unwrap();
        let keys: Vec<(usize, f64)> = rows.iter().map(|r| (r.signal_id, r.p)).collect();
        assert_eq!(keys, [(0, 2.0), (0, 1.5), (1, 2.0), (1, 1.5)]);
        let mut buf = Vec::new();
        write_batch_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("signal_id,p,coorbit_norm,residual,verdict\n0,2,"));
    }

    #[test]
    fn compact_field_is_convergent() {
        let g = Arc::new(build_grid(GroupKind::Affine, GridParams::default().with_b(64.0, 256).with_octaves(0.5, 8, 4)).unwrap());
        let f = VoiceField::from_slices(g.clone(), |_, _| {
            g.b_nodes().iter().map(|&b| Complex64::new(if b.abs() < 1.5 { 1.0 } else { 0.0 }, 0.0)).collect()
        })
        .unwrap();
        let rows = integrability_profile(&f, &[1.0, 2.0], &Weight::one()).unwrap();
        assert!(rows.iter().all(|r| r.verdict == Verdict::Convergent && r.increment == 0.0));
    }

    #[test]
    fn fast_weight_is_flagged() {
        let g = Arc::new(build_grid(GroupKind::Affine, GridParams::default().with_b(64.0, 256).with_octaves(0.5, 8, 4)).unwrap());
        // |b|^{-2} tail: convergent at p = 1, divergent once weighted by (1+|b|)^2.
        let f = VoiceField::from_slices(g.clone(), |_, _| {
            g.b_nodes().iter().map(|&b| Complex64::new(1.0 / (1.0 + b * b), 0.0)).collect()
        })
        .unwrap();
        let plain = integrability_profile(&f, &[1.0], &Weight::one()).unwrap();
        let heavy = integrability_profile(&f, &[1.0], &Weight::poly(2.0)).unwrap();
        assert!(!plain[0].weight_growth && plain[0].verdict == Verdict::Convergent);
        assert!(heavy[0].weight_growth && heavy[0].verdict == Verdict::Divergent);
    }
}

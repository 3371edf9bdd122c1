use super::Representation;
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::signal::{Axis, Signal1D, Signal2D, SpectralProfile};
use serde::Serialize;
use std::collections::BTreeMap;

/// `∫_{ξ>0} |û(ξ)|² dξ/ξ` from samples, integrating `1/ξ` exactly against the
/// piecewise-linear interpolant of `|û|²` between nodes. Samples at `ξ < 0`
/// are ignored; mass reaching `ξ = 0` makes the integral diverge and yields `+∞`.
///
/// Smooth profiles converge at second order in `Δξ`. Jumps cost `O(Δξ)`;
/// piecewise-flat atoms should use [`Atom::calderon_sides`].
pub fn calderon(profile: &SpectralProfile) -> f64 {
    let xs: Vec<f64> = profile.frequencies().collect();
    let ys: Vec<f64> = profile.values().iter().map(|z| z.norm_sqr()).collect();
    let tol = 1e-12 * profile.dxi();
    let mut total = 0.0;
    for j in 0..xs.len().saturating_sub(1) {
        let (x0, x1, y0, y1) = (xs[j], xs[j + 1], ys[j], ys[j + 1]);
        if x1 <= tol || (y0 == 0.0 && y1 == 0.0) {
            continue;
        }
        if x0 < -tol {
            // The cell straddles zero; only its positive half counts.
            let y_at_0 = y0 + (y1 - y0) * (-x0) / (x1 - x0);
            if y_at_0 > 0.0 {
                return f64::INFINITY;
            }
            // Linear from 0 at the origin: ∫_0^{x1} (y1 ξ/x1) dξ/ξ = y1.
            total += y1;
            continue;
        }
        let slope = (y1 - y0) / (x1 - x0);
        if x0 <= tol {
            if y0 > 0.0 {
                return f64::INFINITY;
            }
            total += slope * x1;
        } else {
            let intercept = y0 - slope * x0;
            total += intercept * (x1 / x0).ln() + slope * (x1 - x0);
        }
    }
    total
}

/// Mode dilations `a_n` of a Schrödingerlet atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Decay {
    /// `a_n = ratio^{|n|}`.
    Geometric { ratio: f64 },
    Explicit { values: BTreeMap<i32, f64> },
}

impl Default for Decay {
    fn default() -> Self {
        Decay::Geometric { ratio: 0.5 }
    }
}

impl Decay {
    /// `(n, a_n)` for `|n| ≤ radius`.
    pub fn coefficients(&self, radius: usize) -> Result<Vec<(i32, f64)>> {
        let r = radius as i32;
        let out: Vec<(i32, f64)> = match self {
            Decay::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::config(format!("decay ratio {ratio} must lie in (0, 1) for Σ a_n to converge")));
                }
                (-r..=r).map(|n| (n, ratio.powi(n.abs()))).collect()
            }
            Decay::Explicit { values } => {
                if let Some((n, a)) = values.iter().find(|(_, a)| !(a.is_finite() && **a > 0.0)) {
                    return Err(Error::config(format!("decay a_{n} = {a} must be positive and finite")));
                }
                values.iter().filter(|(n, _)| n.abs() <= r).map(|(n, a)| (*n, *a)).collect()
            }
        };
        if out.is_empty() {
            return Err(Error::config("decay selects no modes"));
        }
        Ok(out)
    }

    /// `Σ_n a_n^α` over `|n| ≤ radius`.
    pub fn power_sum(&self, radius: usize, alpha: f64) -> Result<f64> {
        Ok(self.coefficients(radius)?.iter().map(|(_, a)| a.powf(alpha)).sum())
    }
}

/// Modes `û_n(ξ) = û_0(ξ/a_n)` restricted to `ξ > 0`.
#[derive(Debug, Clone)]
pub struct SchrodingerletAtom {
    base: Atom,
    modes: BTreeMap<i32, (f64, Atom)>,
}

/// Builds the dilated mode family from the positive-frequency part of `u0`.
pub fn build_schrodingerlet_atom(u0: &Atom, decay: &Decay, radius: usize) -> Result<SchrodingerletAtom> {
    let base = u0.positive_part();
    if base.energy() == 0.0 {
        return Err(Error::Inadmissible("base atom has no positive-frequency content".into()));
    }
    let modes = decay.coefficients(radius)?.into_iter().map(|(n, a)| (n, (a, base.dilated(a)))).collect();
    Ok(SchrodingerletAtom { base, modes })
}

impl SchrodingerletAtom {
    pub fn base(&self) -> &Atom {
        &self.base
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, f64, &Atom)> {
        self.modes.iter().map(|(n, (a, u))| (*n, *a, u))
    }

    pub fn mode(&self, n: i32) -> Option<(f64, &Atom)> {
        self.modes.get(&n).map(|(a, u)| (*a, u))
    }

    pub fn radius(&self) -> usize {
        self.modes.keys().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// `Σ_n a_n ‖u_0‖²`, the squared norm of the assembled vector.
    pub fn norm_squared(&self) -> f64 {
        self.modes.values().map(|(a, _)| a).sum::<f64>() * self.base.energy()
    }

    pub fn scaled(&self, c: f64) -> Self {
        SchrodingerletAtom {
            base: self.base.scaled(c),
            modes: self.modes.iter().map(|(n, (a, u))| (*n, (*a, u.scaled(c)))).collect(),
        }
    }

    /// Mode samples, mode `n` on [`mode_axis`]`(base_axis, a_n)`.
    pub fn sample(&self, base_axis: Axis) -> Result<Signal2D> {
        let modes = self
            .modes
            .iter()
            .map(|(n, (a, u))| Ok((*n, u.sample(mode_axis(base_axis, *a))?)))
            .collect::<Result<BTreeMap<i32, Signal1D>>>()?;
        Ok(Signal2D::new(modes))
    }
}

/// The axis carrying mode `n`: positions and spacing of `axis` divided by `a_n`.
pub fn mode_axis(axis: Axis, a_n: f64) -> Axis {
    Axis { x0: axis.x0 / a_n, dx: axis.dx / a_n, n: axis.n }
}

/// One Calderón constant in an [`AdmissibilityReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeConstant {
    pub mode: String,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub representation: &'static str,
    pub constants: Vec<ModeConstant>,
    /// `max ||û| − 1|` over the band interior (translations only).
    pub band_residual: Option<f64>,
    pub normalization: f64,
    pub admissible: bool,
}

const ADMISSIBLE_TOL: f64 = 1e-6;
const MODULUS_TOL: f64 = 1e-9;

/// Rescales the analyzing vector so the Calderón condition holds, or checks
/// unimodularity on the band for translations.
pub fn normalize_admissible(rep: &Representation) -> Result<(Representation, AdmissibilityReport)> {
    match rep {
        Representation::Translation { band, atom } => {
            // Endpoints carry half weight by convention and are skipped.
            let n = 4096;
            let step = band.width() / n as f64;
            let resid =
                (1..n).map(|k| (atom.spectrum(band.lo + k as f64 * step).norm() - 1.0).abs()).fold(0.0, f64::max);
            if resid >= MODULUS_TOL {
                return Err(Error::Inadmissible(format!(
                    "||û| − 1| reaches {resid:.3e} on the band; translation atoms cannot be rescaled"
                )));
            }
            let report = AdmissibilityReport {
                representation: "translation",
                constants: Vec::new(),
                band_residual: Some(resid),
                normalization: 1.0,
                admissible: true,
            };
            Ok((rep.clone(), report))
        }
        Representation::Wavelet { atom } => {
            let (neg, pos) = atom.calderon_sides();
            if neg == 0.0 || pos == 0.0 {
                return Err(Error::Inadmissible(format!(
                    "one-sided Calderón constants ({neg:.6}, {pos:.6}): both half-lines need mass"
                )));
            }
            if !(neg.is_finite() && pos.is_finite()) {
                return Err(Error::Inadmissible("Calderón integral diverges at ξ = 0".into()));
            }
            let c = 0.5 * (neg + pos);
            let factor = 1.0 / c.sqrt();
            let constants = vec![
                ModeConstant { mode: "negative".into(), before: neg, after: neg / c },
                ModeConstant { mode: "positive".into(), before: pos, after: pos / c },
            ];
            let admissible = constants.iter().all(|m| (m.after - 1.0).abs() < ADMISSIBLE_TOL);
            let report =
                AdmissibilityReport { representation: "wavelet", constants, band_residual: None, normalization: factor, admissible };
            Ok((Representation::Wavelet { atom: atom.scaled(factor) }, report))
        }
        Representation::Schrodingerlet(s) => {
            let (_, c) = s.base().calderon_sides();
            if c == 0.0 {
                return Err(Error::Inadmissible("base mode has zero Calderón constant".into()));
            }
            if !c.is_finite() {
                return Err(Error::Inadmissible("Calderón integral diverges at ξ = 0".into()));
            }
            let factor = 1.0 / c.sqrt();
            let scaled = s.scaled(factor);
            let constants: Vec<ModeConstant> = s
                .modes()
                .zip(scaled.modes())
                .map(|((n, _, u), (_, _, v))| ModeConstant {
                    mode: n.to_string(),
                    before: u.calderon_sides().1,
                    after: v.calderon_sides().1,
                })
                .collect();
            let admissible = constants.iter().all(|m| (m.after - 1.0).abs() < ADMISSIBLE_TOL);
            let report =
                AdmissibilityReport { representation: "schrodingerlet", constants, band_residual: None, normalization: factor, admissible };
            Ok((Representation::Schrodingerlet(scaled), report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Band;
    use num_complex::Complex64;

    #[test]
    fn sampled_rule_on_smooth_profile() {
        let u = Atom::log_bump(0.25, 0.5).unwrap();
        let want = u.calderon_sides().1;
        let p = u.profile(0.0, 1e-4, 6000).unwrap();
        assert!((calderon(&p) - want).abs() < 1e-9, "{} vs {want}", calderon(&p));
        let p = u.dilated(3.0).profile(0.0, 3e-4, 6000).unwrap();
        assert!((calderon(&p) - want).abs() < 1e-9);
    }

    #[test]
    fn sampled_rule_on_indicator_converges() {
        let ind = Atom::indicator(Band::new(0.25, 0.5).unwrap());
        let e1 = (calderon(&ind.profile(0.0, 1e-3, 800).unwrap()) - 2f64.ln()).abs();
        let e2 = (calderon(&ind.profile(0.0, 5e-4, 1600).unwrap()) - 2f64.ln()).abs();
        assert!(e1 < 1e-2 && e2 < 0.6 * e1, "{e1} {e2}");
    }

    #[test]
    fn zero_and_divergent_profiles() {
        let z = SpectralProfile::from_fn(0.0, 0.1, 10, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(calderon(&z), 0.0);
        let one = SpectralProfile::from_fn(0.0, 0.1, 10, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(calderon(&one).is_infinite());
        let sym = SpectralProfile::from_fn(-0.5, 0.1, 10, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(calderon(&sym).is_infinite());
    }

    #[test]
    fn shannon_normalization() {
        let (rep, report) = normalize_admissible(&Representation::Wavelet { atom: Atom::shannon() }).unwrap();
        assert!((report.constants[1].before - 2f64.ln()).abs() < 1e-12);
        assert!((report.normalization - 1.0 / 2f64.ln().sqrt()).abs() < 1e-12);
        assert!(report.admissible);
        let (_, again) = normalize_admissible(&rep).unwrap();
        assert!((again.normalization - 1.0).abs() < 1e-12);
    }

    #[test]
    fn translation_modulus_violation() {
        let band = Band::symmetric(0.5).unwrap();
        let rep = Representation::Translation { band, atom: Atom::indicator(band).scaled(0.5) };
        assert!(matches!(normalize_admissible(&rep), Err(Error::Inadmissible(_))));
        let rep = Representation::Translation { band, atom: Atom::indicator(band).shifted(0.3) };
        let (_, r) = normalize_admissible(&rep).unwrap();
        assert!(r.admissible && r.band_residual.unwrap() < 1e-12);
    }

    #[test]
    fn analytic_wavelet_is_one_sided() {
        let rep = Representation::Wavelet { atom: Atom::cauchy(2, 1.0).unwrap() };
        assert!(matches!(normalize_admissible(&rep), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn default_decay_sums() {
        let d = Decay::default();
        for alpha in [0.25, 0.5, 1.0] {
            let s = d.power_sum(16, alpha).unwrap();
            let r: f64 = 0.5f64.powf(alpha);
            let want = 1.0 + 2.0 * r * (1.0 - r.powi(16)) / (1.0 - r);
            assert!((s - want).abs() < 1e-12);
        }
        // The untruncated series gives 3 + 2√2 ≈ 5.8284; |n| ≤ 16 drops a 2^{−8} tail.
        let tail = (3.0 + 2.0 * 2f64.sqrt()) - d.power_sum(16, 0.5).unwrap();
        assert!((tail - 2.0 * 0.5f64.powf(8.5) / (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
        assert!(Decay::Geometric { ratio: 1.0 }.coefficients(4).is_err());
    }

    #[test]
    fn modes_inherit_normalization() {
        let s = build_schrodingerlet_atom(&Atom::shannon(), &Decay::default(), 16).unwrap();
        let (rep, report) = normalize_admissible(&Representation::Schrodingerlet(s)).unwrap();
        assert_eq!(report.constants.len(), 33);
        assert!(report.constants.iter().all(|m| (m.after - 1.0).abs() < 1e-9));
        let Representation::Schrodingerlet(s) = rep else { unreachable!() };
        let (a, u) = s.mode(-3).unwrap();
        assert_eq!(a, 0.125);
        assert_eq!(u.spectrum(-0.01).norm(), 0.0);
        let want = (3.0 - 2.0 * 0.5f64.powi(16)) * s.base().energy();
        assert!((s.norm_squared() - want).abs() < 1e-12);
    }
}

use super::convolve;
use crate::error::{Error, Result};
use crate::grid::{check, left_translate, lp_norm, lp_norm_inverted, right_translate, Exponent, VoiceField};
use crate::group::{GroupElement, GroupKind, Weight};
use crate::numeric::to_json;
use num_complex::Complex64;
use serde::Serialize;

/// One certified inequality `lhs ≤ rhs`; `slack = (rhs − lhs)/rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    /// `‖ǧ‖_q`, which differs from `‖g‖_q` on non-unimodular groups.
    pub norm_g_check: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// Relative residual of one identity, or the reason it was not evaluated.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: Option<f64>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvReport {
    pub group: GroupKind,
    pub inequalities: Vec<InequalityCheck>,
    pub identities: Vec<IdentityCheck>,
}

impl ConvReport {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    /// Smallest slack over the inequalities (`+∞` if there are none).
    pub fn min_slack(&self) -> f64 {
        self.inequalities.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min)
    }

    /// Largest evaluated identity residual (`0` if there are none).
    pub fn max_residual(&self) -> f64 {
        self.identities.iter().filter_map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Right side of Young's inequality on a possibly non-unimodular group,
/// `‖f‖_p ‖g‖_q^{q/r} ‖ǧ‖_q^{1−q/r}`, reducing to `‖f‖_p ‖ǧ‖_q` for `r = ∞`.
pub fn young_bound(norm_f: f64, norm_g: f64, norm_g_check: f64, q: Exponent, r: Exponent) -> f64 {
    match (q, r) {
        (_, Exponent::Infinity) => norm_f * norm_g_check,
        (Exponent::Infinity, _) => norm_f * norm_g,
        (Exponent::Finite(q), Exponent::Finite(r)) => {
            let t = q / r;
            norm_f * norm_g.powf(t) * norm_g_check.powf(1.0 - t)
        }
    }
}

/// Exponent `r` with `1/p + 1/q = 1 + 1/r`.
fn young_exponent(p: Exponent, q: Exponent) -> Result<Exponent> {
    let s = p.recip() + q.recip();
    if s < 1.0 - 1e-12 {
        return Err(Error::domain(format!("1/p + 1/q = {s} < 1 for p = {p}, q = {q}")));
    }
    let inv_r = (s - 1.0).max(0.0);
    Ok(if inv_r < 1e-12 { Exponent::Infinity } else { Exponent::Finite(1.0 / inv_r) })
}

/// Young's inequality `‖f∗g‖_r ≤ ‖f‖_p ‖g‖_q^{q/r} ‖ǧ‖_q^{1−q/r}` on the grid of `f`.
pub fn young_suite(f: &VoiceField, g: &VoiceField, p: f64, q: f64) -> Result<ConvReport> {
    let (pe, qe) = (Exponent::new(p)?, Exponent::new(q)?);
    let re = young_exponent(pe, qe)?;
    let conv = convolve(f, g)?;
    let one = Weight::one();
    let norm_f = lp_norm(f, pe, &one);
    let norm_g = lp_norm(g, qe, &one);
    let norm_g_check = lp_norm_inverted(g, qe);
    let lhs = lp_norm(&conv, re, &one);
    let rhs = young_bound(norm_f, norm_g, norm_g_check, qe, re);
    let name = if pe == Exponent::Finite(1.0) && re == qe {
        "young_l1"
    } else if re == Exponent::Infinity {
        "young_sup"
    } else {
        "young_general"
    };
    let slack = if rhs > 0.0 { (rhs - lhs) / rhs } else { -lhs };
    Ok(ConvReport {
        group: f.grid().kind(),
        inequalities: vec![InequalityCheck {
            name: name.into(),
            p: pe.value(),
            q: qe.value(),
            r: re.value(),
            norm_f,
            norm_g,
            norm_g_check,
            lhs,
            rhs,
            slack,
        }],
        identities: Vec::new(),
    })
}

fn identity(name: &str, got: &VoiceField, want: &VoiceField) -> Result<IdentityCheck> {
    Ok(IdentityCheck { name: name.into(), residual: Some(got.rel_diff(want)?), skipped: None })
}

/// Residuals of the convolution-algebra identities for `f, g, h` and a
/// translation `x`:
///
/// * `(f∗g)ˇ = ǧ∗f̌`
/// * `λ(x)f ∗ g = λ(x)(f∗g)`
/// * `ρ(x)f ∗ g = Δ(x⁻¹) f ∗ λ(x⁻¹)g`
/// * `f ∗ ρ(x)g = ρ(x)(f∗g)`
/// * `f∗(g∗h) = (f∗g)∗h`, only when `|f|∗|g|` and `(|f|∗|g|)∗|h|` are finite on the grid.
pub fn algebra_check(f: &VoiceField, g: &VoiceField, h: &VoiceField, x: &GroupElement) -> Result<ConvReport> {
    let kind = f.grid().kind();
    let fg = convolve(f, g)?;
    let mut ids = Vec::new();

    ids.push(identity("check_reverses_order", &check(&fg), &convolve(&check(g), &check(f))?)?);

    let lhs = convolve(&left_translate(f, x)?, g)?;
    ids.push(identity("left_translation", &lhs, &left_translate(&fg, x)?)?);

    let xinv = kind.inverse(x)?;
    let lhs = convolve(&right_translate(f, x)?, g)?;
    let rhs = convolve(f, &left_translate(g, &xinv)?)?.scale(Complex64::new(kind.modular(&xinv), 0.0));
    ids.push(identity("right_translation_moves_across", &lhs, &rhs)?);

    let lhs = convolve(f, &right_translate(g, x)?)?;
    ids.push(identity("right_translation", &lhs, &right_translate(&fg, x)?)?);

    let abs = |v: &VoiceField| v.map(|z| Complex64::new(z.norm(), 0.0));
    let m1 = convolve(&abs(f), &abs(g))?;
    let m2 = convolve(&m1, &abs(h))?;
    let finite = |v: &VoiceField| v.values().iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if finite(&m1) && finite(&m2) {
        let lhs = convolve(f, &convolve(g, h)?)?;
        ids.push(identity("associativity", &lhs, &convolve(&fg, h)?)?);
    } else {
        ids.push(IdentityCheck {
            name: "associativity".into(),
            residual: None,
            skipped: Some("|f|∗|g| or (|f|∗|g|)∗|h| is not finite on the grid".into()),
        });
    }
    Ok(ConvReport { group: kind, inequalities: Vec::new(), identities: ids })
}

//! Group laws, Haar densities, modular functions and weights for the line
//! `ℝ`, the affine group `ℝ ⋊ ℝ₊` and its circle extension `(ℝ ⋊ ℝ₊) × S¹`.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

/// The three concrete groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Line,
    Affine,
    AffineCircle,
}

/// A group element in `(b, a, φ)` coordinates. Unused coordinates sit at
/// the identity (`a = 1`, `φ = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    b: f64,
    a: f64,
    phi: f64,
}

fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn check_scale(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("scale a = {a} must be positive and finite")))
    }
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { b: 0.0, a: 1.0, phi: 0.0 };

    pub fn line(b: f64) -> Self {
        GroupElement { b, a: 1.0, phi: 0.0 }
    }

    pub fn affine(b: f64, a: f64) -> Result<Self> {
        check_scale(a)?;
        Ok(GroupElement { b, a, phi: 0.0 })
    }

    pub fn affine_circle(b: f64, a: f64, phi: f64) -> Result<Self> {
        check_scale(a)?;
        Ok(GroupElement { b, a, phi: reduce_angle(phi) })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.b, self.a, self.phi)
    }
}

impl GroupKind {
    fn validate(&self, g: &GroupElement) -> Result<()> {
        match self {
            GroupKind::Line => Ok(()),
            _ => check_scale(g.a),
        }
    }

    /// Group law `(b,a,φ)(b′,a′,φ′) = (b + a b′, a a′, φ + φ′ mod 2π)`.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(match self {
            GroupKind::Line => GroupElement::line(g.b + h.b),
            GroupKind::Affine => GroupElement { b: g.b + g.a * h.b, a: g.a * h.a, phi: 0.0 },
            GroupKind::AffineCircle => GroupElement {
                b: g.b + g.a * h.b,
                a: g.a * h.a,
                phi: reduce_angle(g.phi + h.phi),
            },
        })
    }

    /// `(b,a,φ)⁻¹ = (−b/a, 1/a, −φ mod 2π)`.
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.validate(g)?;
        Ok(match self {
            GroupKind::Line => GroupElement::line(-g.b),
            GroupKind::Affine => GroupElement { b: -g.b / g.a, a: 1.0 / g.a, phi: 0.0 },
            GroupKind::AffineCircle => GroupElement {
                b: -g.b / g.a,
                a: 1.0 / g.a,
                phi: reduce_angle(-g.phi),
            },
        })
    }

    /// Modular function: `1` on the line, `1/a` on the affine kinds.
    pub fn modular(&self, g: &GroupElement) -> f64 {
        match self {
            GroupKind::Line => 1.0,
            _ => 1.0 / g.a,
        }
    }

    /// Left Haar density in `(b, a, φ)` coordinates, against `db da dφ/2π`.
    pub fn haar_density(&self, g: &GroupElement) -> f64 {
        match self {
            GroupKind::Line => 1.0,
            _ => 1.0 / (g.a * g.a),
        }
    }
}

/// Sample-based certificates for the weight conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightCertificates {
    pub submultiplicative: bool,
    pub symmetric: bool,
    pub bounded_below_by_one: bool,
    pub positive_infimum: bool,
}

type WeightFn = dyn Fn(&GroupElement) -> f64 + Send + Sync;

/// A positive function on the group, optionally carrying certificates.
#[derive(Clone)]
pub struct Weight {
    id: String,
    eval: Arc<WeightFn>,
    certificates: Option<WeightCertificates>,
    witness: Option<Arc<SampleSet>>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight").field("id", &self.id).field("certificates", &self.certificates).finish()
    }
}

impl Weight {
    pub fn new(id: impl Into<String>, f: impl Fn(&GroupElement) -> f64 + Send + Sync + 'static) -> Self {
        Weight { id: id.into(), eval: Arc::new(f), certificates: None, witness: None }
    }

    /// The constant weight `w ≡ 1`.
    pub fn one() -> Self {
        Weight::new("one", |_| 1.0)
    }

    /// `(1 + |b|)^s · max(a, 1/a)^s`.
    pub fn poly(s: f64) -> Self {
        Weight::new(format!("poly:{s}"), move |g| ((1.0 + g.b.abs()) * g.a.max(1.0 / g.a)).powf(s))
    }

    /// Parses a preset name: `one` or `poly:s`.
    pub fn preset(name: &str) -> Result<Self> {
        if name == "one" {
            return Ok(Weight::one());
        }
        if let Some(s) = name.strip_prefix("poly:") {
            let s: f64 = s
                .parse()
                .map_err(|_| Error::config(format!("weight: cannot parse exponent in {name:?}")))?;
            if !s.is_finite() || s < 0.0 {
                return Err(Error::config(format!("weight: exponent in {name:?} must be finite and ≥ 0")));
            }
            return Ok(Weight::poly(s));
        }
        Err(Error::config(format!("weight: unknown preset {name:?} (expected \"one\" or \"poly:s\")")))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, g: &GroupElement) -> f64 {
        (self.eval)(g)
    }

    pub fn certificates(&self) -> Option<WeightCertificates> {
        self.certificates
    }

    pub fn witness(&self) -> Option<&SampleSet> {
        self.witness.as_deref()
    }

    pub fn is_one(&self) -> bool {
        self.id == "one"
    }
}

/// Pairs of group elements used to test weight conditions.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub pairs: Vec<(GroupElement, GroupElement)>,
}

impl SampleSet {
    /// Uniform samples with `|b| ≤ b_max`, `log a` uniform in `[−log a_max, log a_max]`
    /// and `φ` uniform on the circle.
    pub fn random(kind: GroupKind, n: usize, b_max: f64, a_max: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let la = a_max.ln();
        let draw = |rng: &mut ChaCha8Rng| {
            let b = rng.random_range(-b_max..=b_max);
            match kind {
                GroupKind::Line => GroupElement::line(b),
                GroupKind::Affine => GroupElement { b, a: rng.random_range(-la..=la).exp(), phi: 0.0 },
                GroupKind::AffineCircle => GroupElement {
                    b,
                    a: rng.random_range(-la..=la).exp(),
                    phi: rng.random_range(0.0..TAU),
                },
            }
        };
        let pairs = (0..n).map(|_| (draw(&mut rng), draw(&mut rng))).collect();
        SampleSet { pairs }
    }
}

/// Fills the weight certificates from exhaustive checks on the sample pairs.
pub fn validate_weight(kind: GroupKind, w: Weight, samples: SampleSet) -> Result<Weight> {
    if samples.pairs.len() < 1000 {
        return Err(Error::config(format!(
            "weight validation needs at least 1000 sample pairs, got {}",
            samples.pairs.len()
        )));
    }
    let check = |g: &GroupElement| -> Result<f64> {
        let v = w.eval(g);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidWeight(format!("{} evaluates to {v} at {g}", w.id)))
        }
    };
    let mut cert = WeightCertificates {
        submultiplicative: true,
        symmetric: true,
        bounded_below_by_one: true,
        positive_infimum: true,
    };
    let mut min_w = f64::INFINITY;
    for (x, y) in &samples.pairs {
        let wx = check(x)?;
        let wy = check(y)?;
        let wxy = check(&kind.compose(x, y)?)?;
        let wxi = check(&kind.inverse(x)?)?;
        if wxy > wx * wy * (1.0 + 1e-10) {
            cert.submultiplicative = false;
        }
        if (wx - wxi).abs() > 1e-10 * wx {
            cert.symmetric = false;
        }
        min_w = min_w.min(wx).min(wy);
    }
    cert.bounded_below_by_one = min_w >= 1.0 - 1e-12;
    cert.positive_infimum = min_w >= 1e-9;
    Ok(Weight { certificates: Some(cert), witness: Some(Arc::new(samples)), ..w })
}

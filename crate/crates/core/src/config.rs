//! JSON run configuration of the command-line front end.

use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::grid::{build_grid, GridParams, GroupGrid};
use crate::group::Weight;
use crate::voice::{build_schrodingerlet_atom, Decay, Representation};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Kernel,
    Admissible,
    Voice,
    Reproduce,
    Norms,
    Coorbit,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    /// Translations with the sinc atom `χ_[−ω,ω]`.
    Translation,
    /// Wavelets with the normalized smooth bump on `1/4 ≤ |ξ| ≤ 1/2`.
    #[default]
    Wavelet,
    /// Wavelets with the normalized Shannon atom.
    Shannon,
    /// Schrödingerlets built from the positive part of the bump.
    Schrodingerlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomParams {
    /// Half-width of the translation band `Ω = [−ω, ω]`.
    pub omega: f64,
    /// Geometric ratio of the Schrödingerlet dilations `a_n = ratio^{|n|}`.
    pub decay: f64,
    /// Schrödingerlet modes `|n| ≤ radius`.
    pub radius: usize,
}

impl Default for AtomParams {
    fn default() -> Self {
        AtomParams { omega: 0.5, decay: 0.5, radius: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Residual below which a voice counts as reproduced by the kernel.
    pub membership: f64,
    /// Relative increment separating divergent window profiles.
    pub cauchy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { membership: crate::coorbit::MEMBERSHIP_TOL, cauchy: crate::grid::CAUCHY_TOL }
    }
}

fn default_ps() -> Vec<f64> {
    vec![1.0, 1.5, 2.0, 3.0]
}

fn default_weight() -> String {
    "one".into()
}

fn default_signals() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub rep: RepKind,
    #[serde(default)]
    pub grid: GridParams,
    /// Line grid of the translation representation in `selftest`; the
    /// suite default when absent.
    #[serde(default)]
    pub line_grid: Option<GridParams>,
    #[serde(default)]
    pub atom: AtomParams,
    #[serde(default = "default_ps")]
    pub ps: Vec<f64>,
    #[serde(default = "default_weight")]
    pub weight: String,
    /// Signal CSV (`x,real,imag`) for `voice` and `coorbit`; seeded packets when absent.
    #[serde(default)]
    pub input: Option<PathBuf>,
    /// Number of seeded signals for `reproduce` and `coorbit`.
    #[serde(default = "default_signals")]
    pub signals: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        serde_json::from_value(serde_json::json!({ "command": command })).expect("defaults deserialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(s).map_err(|e| Error::Config(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    /// Checks every field that can be checked without running the command.
    pub fn validate(&self) -> Result<()> {
        for (i, &p) in self.ps.iter().enumerate() {
            if !(p >= 1.0) {
                return Err(Error::Config(format!("ps[{i}] = {p}: exponents must satisfy p ≥ 1")));
            }
        }
        if !(self.atom.omega > 0.0 && self.atom.omega.is_finite()) {
            return Err(Error::Config(format!("atom.omega = {} must be positive", self.atom.omega)));
        }
        if !(self.atom.decay > 0.0 && self.atom.decay < 1.0) {
            return Err(Error::Config(format!("atom.decay = {} must lie in (0, 1)", self.atom.decay)));
        }
        let t = self.tolerances;
        if !(t.membership > 0.0 && t.cauchy > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.signals == 0 {
            return Err(Error::Config("signals must be at least 1".into()));
        }
        Weight::preset(&self.weight)?;
        build_grid(self.rep_group(), self.grid).map_err(|e| Error::Config(format!("grid: {e}")))?;
        if let Some(g) = self.line_grid {
            build_grid(crate::group::GroupKind::Line, g).map_err(|e| Error::Config(format!("line_grid: {e}")))?;
        }
        Ok(())
    }

    fn rep_group(&self) -> crate::group::GroupKind {
        use crate::group::GroupKind;
        match self.rep {
            RepKind::Translation => GroupKind::Line,
            RepKind::Wavelet | RepKind::Shannon => GroupKind::Affine,
            RepKind::Schrodingerlet => GroupKind::AffineCircle,
        }
    }

    pub fn representation(&self) -> Result<Representation> {
        Ok(match self.rep {
            RepKind::Translation => Representation::sinc(self.atom.omega)?,
            RepKind::Wavelet => Representation::bump(),
            RepKind::Shannon => Representation::shannon(),
            RepKind::Schrodingerlet => Representation::schrodingerlet(
                &Atom::log_bump(0.25, 0.5)?,
                &Decay::Geometric { ratio: self.atom.decay },
                self.atom.radius,
            )?,
        })
    }

    /// The representation before normalization of the atom.
    pub fn raw_representation(&self) -> Result<Representation> {
        Ok(match self.rep {
            RepKind::Translation => Representation::sinc(self.atom.omega)?,
            RepKind::Wavelet => Representation::Wavelet { atom: Atom::log_bump(0.25, 0.5)? },
            RepKind::Shannon => Representation::Wavelet { atom: Atom::shannon() },
            RepKind::Schrodingerlet => Representation::Schrodingerlet(build_schrodingerlet_atom(
                &Atom::log_bump(0.25, 0.5)?,
                &Decay::Geometric { ratio: self.atom.decay },
                self.atom.radius,
            )?),
        })
    }

    pub fn build_grid(&self) -> Result<Arc<GroupGrid>> {
        Ok(Arc::new(build_grid(self.rep_group(), self.grid)?))
    }

    pub fn weight(&self) -> Result<Weight> {
        Weight::preset(&self.weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = RunConfig::from_json(r#"{"command": "norms"}"#).unwrap();
        assert_eq!(c.seed, 0);
        assert_eq!(c.rep, RepKind::Wavelet);
        assert_eq!(c.grid, GridParams::default());
        assert_eq!(c.ps, [1.0, 1.5, 2.0, 3.0]);
        assert_eq!(c, RunConfig::new(Command::Norms));
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = RunConfig::from_json(r#"{"command": "kernel", "colour": 1}"#).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        let e = RunConfig::from_json(r#"{"command": "kernel", "grid": {"nb": 8}}"#).unwrap_err();
        assert!(e.to_string().contains("nb"), "{e}");
    }

    #[test]
    fn exponent_below_one_names_field() {
        let e = RunConfig::from_json(r#"{"command": "norms", "ps": [2, 0.5]}"#).unwrap_err();
        assert!(e.to_string().contains("ps[1]"), "{e}");
    }

    #[test]
    fn bad_weight_and_grid() {
        assert!(RunConfig::from_json(r#"{"command": "coorbit", "weight": "exp:1"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"command": "kernel", "grid": {"n_b": 1}}"#).is_err());
    }
}

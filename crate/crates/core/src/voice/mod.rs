//! The three representations (translations, wavelets, Schrödingerlets), their
//! voice transforms, reproducing kernels, admissibility, synthesis `π(f)u`,
//! the change of analyzing vector, and the polar unitary and Schrödinger flow
//! of the circle extension.
//!
//! Sampled signals are treated as band-limited interpolants: the voice at a
//! node is the exact inner product of that interpolant with `π(x)u`, restricted
//! to frequencies below the grid Nyquist. Analyzing vectors are [`Atom`]s, so
//! kernels and voices of one atom against another are computed from spectra.
//!
//! Schrödingerlet mode `n` is stored on the base affine grid with its b-axis
//! stretched by `1/a_n` (see [`mode_axis`]); signal modes must be sampled on
//! the matching axis. On that layout every mode reduces to the base wavelet
//! problem on the sample vectors.

mod admissible;
mod bank;
mod structure;

pub use admissible::{
    build_schrodingerlet_atom, calderon, mode_axis, normalize_admissible, AdmissibilityReport, Decay, ModeConstant,
    SchrodingerletAtom,
};
pub use structure::{
    polar_unitary, polar_unitary_inverse, schrodinger_flow, schrodinger_flow_residual, spectral_phase_error, Plane,
    PolarSpectrum,
};

use crate::atom::{cross_ift, Atom};
use crate::convolution::{convolve, convolve_affine_circle};
use crate::error::{Error, Result};
use crate::grid::{check, GroupGrid, ModeField, VoiceField};
use crate::group::GroupKind;
use crate::numeric::cis2pi;
use crate::signal::{Axis, Band, Signal1D, Signal2D};
use bank::ScaleBank;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A reproducing representation together with its analyzing vector.
#[derive(Debug, Clone)]
pub enum Representation {
    /// `π(b)v(x) = v(x − b)` on signals band-limited to `band`.
    Translation { band: Band, atom: Atom },
    /// `π(b,a)v(x) = a^{−1/2} v((x − b)/a)`.
    Wavelet { atom: Atom },
    /// `π(b,a,φ)v(x,θ) = a^{−1/2} v((x − b)/a, θ − φ)` on positive frequencies.
    Schrodingerlet(SchrodingerletAtom),
}

impl Representation {
    /// Translations with the sinc kernel `û = χ_{[−ω,ω]}`.
    pub fn sinc(omega: f64) -> Result<Self> {
        let band = Band::symmetric(omega)?;
        Ok(Representation::Translation { band, atom: Atom::indicator(band) })
    }

    /// Normalized Shannon wavelet.
    pub fn shannon() -> Self {
        Self::normalized(Representation::Wavelet { atom: Atom::shannon() })
    }

    /// Normalized smooth wavelet supported in `1/4 ≤ |ξ| ≤ 1/2`.
    pub fn bump() -> Self {
        Self::normalized(Representation::Wavelet { atom: Atom::log_bump(0.25, 0.5).expect("valid band") })
    }

    /// Normalized Schrödingerlet built on the positive part of `u0`.
    pub fn schrodingerlet(u0: &Atom, decay: &Decay, radius: usize) -> Result<Self> {
        let s = build_schrodingerlet_atom(u0, decay, radius)?;
        Ok(normalize_admissible(&Representation::Schrodingerlet(s))?.0)
    }

    fn normalized(rep: Representation) -> Self {
        normalize_admissible(&rep).expect("admissible by construction").0
    }

    pub fn group(&self) -> GroupKind {
        match self {
            Representation::Translation { .. } => GroupKind::Line,
            Representation::Wavelet { .. } => GroupKind::Affine,
            Representation::Schrodingerlet(_) => GroupKind::AffineCircle,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Representation::Translation { .. } => "translation",
            Representation::Wavelet { .. } => "wavelet",
            Representation::Schrodingerlet(_) => "schrodingerlet",
        }
    }

    fn base_atom(&self) -> &Atom {
        match self {
            Representation::Translation { atom, .. } | Representation::Wavelet { atom } => atom,
            Representation::Schrodingerlet(s) => s.base(),
        }
    }
}

/// A signal on `ℝ`, or on `ℝ × S¹` by θ-modes.
#[derive(Debug, Clone)]
pub enum Signal {
    Line(Signal1D),
    Polar(Signal2D),
}

impl Signal {
    pub fn l2_norm(&self) -> f64 {
        match self {
            Signal::Line(s) => s.l2_norm(),
            Signal::Polar(s) => s.l2_norm(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        match self {
            Signal::Line(s) => Signal::Line(s.scale(c)),
            Signal::Polar(s) => Signal::Polar(s.scale(c)),
        }
    }

    /// `‖self − other‖/‖other‖`.
    pub fn rel_diff(&self, other: &Signal) -> Result<f64> {
        match (self, other) {
            (Signal::Line(a), Signal::Line(b)) => a.rel_diff(b),
            (Signal::Polar(a), Signal::Polar(b)) => a.rel_diff(b),
            _ => Err(Error::domain("cannot compare a line signal with a polar signal")),
        }
    }

    pub fn as_line(&self) -> Option<&Signal1D> {
        match self {
            Signal::Line(s) => Some(s),
            Signal::Polar(_) => None,
        }
    }
}

/// A function on the group: sampled on a grid, or by θ-modes for the circle extension.
#[derive(Debug, Clone)]
pub enum Voice {
    Field(VoiceField),
    Modes(ModeField),
}

impl Voice {
    pub fn l2_norm(&self) -> f64 {
        match self {
            Voice::Field(f) => f.l2_norm(),
            Voice::Modes(m) => m.l2_norm(),
        }
    }

    pub fn rel_diff(&self, other: &Voice) -> Result<f64> {
        match (self, other) {
            (Voice::Field(a), Voice::Field(b)) => a.rel_diff(b),
            (Voice::Modes(a), Voice::Modes(b)) => a.rel_diff(b),
            _ => Err(Error::config("cannot compare a sampled field with a mode field")),
        }
    }

    /// `self ∗ other`.
    pub fn convolve(&self, other: &Voice) -> Result<Voice> {
        match (self, other) {
            (Voice::Field(a), Voice::Field(b)) => Ok(Voice::Field(convolve(a, b)?)),
            (Voice::Modes(a), Voice::Modes(b)) => Ok(Voice::Modes(convolve_affine_circle(a, b)?)),
            _ => Err(Error::config("cannot convolve a sampled field with a mode field")),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Copy) -> Voice {
        match self {
            Voice::Field(v) => Voice::Field(v.map(f)),
            Voice::Modes(m) => Voice::Modes(
                ModeField::new(m.modes().iter().map(|(n, v)| (*n, v.map(f))).collect()).expect("affine modes"),
            ),
        }
    }

    pub fn as_field(&self) -> Option<&VoiceField> {
        match self {
            Voice::Field(f) => Some(f),
            Voice::Modes(_) => None,
        }
    }

    pub fn as_modes(&self) -> Option<&ModeField> {
        match self {
            Voice::Modes(m) => Some(m),
            Voice::Field(_) => None,
        }
    }

    /// The per-mode (or single) fields.
    pub fn parts(&self) -> Vec<&VoiceField> {
        match self {
            Voice::Field(f) => vec![f],
            Voice::Modes(m) => m.modes().values().collect(),
        }
    }
}

/// A representation bound to a grid, with the per-scale analysis and synthesis
/// kernels prepared once.
pub struct Analyzer {
    rep: Representation,
    grid: Arc<GroupGrid>,
    base: Arc<GroupGrid>,
    bank: ScaleBank,
    mode_grids: BTreeMap<i32, Arc<GroupGrid>>,
}

impl Analyzer {
    pub fn new(rep: &Representation, grid: Arc<GroupGrid>) -> Result<Self> {
        if grid.kind() != rep.group() {
            return Err(Error::config(format!(
                "a {} representation needs a {:?} grid, got {:?}",
                rep.name(),
                rep.group(),
                grid.kind()
            )));
        }
        let base = Arc::new(grid.affine_part());
        let fmin = 1.0 / (grid.n_b() as f64 * grid.db());
        match rep {
            Representation::Translation { band, .. } => {
                if band.lo < -grid.nyquist() || band.hi > grid.nyquist() {
                    return Err(Error::domain(format!(
                        "band [{}, {}] exceeds the grid Nyquist {}",
                        band.lo,
                        band.hi,
                        grid.nyquist()
                    )));
                }
            }
            _ => {
                if let Some((lo, hi)) = rep.base_atom().support().into_iter().find(|&(lo, hi)| lo < fmin && hi > -fmin) {
                    return Err(Error::Inadmissible(format!(
                        "spectral support [{lo}, {hi}] reaches below the grid's lowest frequency {fmin}"
                    )));
                }
            }
        }
        let scales: Vec<f64> = match rep {
            Representation::Translation { .. } => vec![1.0],
            _ => grid.a_nodes().to_vec(),
        };
        let bank = ScaleBank::new(rep.base_atom(), grid.n_b(), grid.db(), &scales);
        let mode_grids = match rep {
            Representation::Schrodingerlet(s) => s.modes().map(|(n, a, _)| (n, Arc::new(base.dilate_b(1.0 / a)))).collect(),
            _ => BTreeMap::new(),
        };
        Ok(Analyzer { rep: rep.clone(), grid, base, bank, mode_grids })
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn grid(&self) -> &Arc<GroupGrid> {
        &self.grid
    }

    /// Grid carrying mode `n` of a Schrödingerlet voice.
    pub fn mode_grid(&self, n: i32) -> Option<&Arc<GroupGrid>> {
        self.mode_grids.get(&n)
    }

    /// Signal axis expected by [`Analyzer::voice`] (the base axis for Schrödingerlets).
    pub fn axis(&self) -> Axis {
        Axis::of_grid(&self.grid)
    }

    /// Axis carrying signal mode `n`.
    pub fn signal_mode_axis(&self, n: i32) -> Option<Axis> {
        match &self.rep {
            Representation::Schrodingerlet(s) => s.mode(n).map(|(a, _)| mode_axis(self.axis(), a)),
            _ => None,
        }
    }

    fn field_from_slices(grid: &Arc<GroupGrid>, slices: Vec<Vec<Complex64>>) -> VoiceField {
        let mut f = VoiceField::zeros(grid.clone());
        for (ia, s) in slices.iter().enumerate() {
            f.set_slice(ia, 0, s);
        }
        f
    }

    fn check_axis(got: Axis, want: Axis, what: &str) -> Result<()> {
        if got.same_as(&want) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} is sampled at {} + k·{} ({} points); expected {} + k·{} ({} points)",
                got.x0, got.dx, got.n, want.x0, want.dx, want.n
            )))
        }
    }

    /// `Vv(x) = ⟨v, π(x)u⟩` on the grid nodes.
    pub fn voice(&self, v: &Signal) -> Result<Voice> {
        match (&self.rep, v) {
            (Representation::Schrodingerlet(s), Signal::Polar(v)) => {
                let mut modes = BTreeMap::new();
                for (&n, vn) in v.modes() {
                    let Some((a, _)) = s.mode(n) else { continue };
                    Self::check_axis(vn.axis(), mode_axis(self.axis(), a), &format!("signal mode {n}"))?;
                    let grid = &self.mode_grids[&n];
                    modes.insert(n, Self::field_from_slices(grid, self.bank.analyze(vn.samples())));
                }
                Ok(Voice::Modes(ModeField::new(modes)?))
            }
            (Representation::Schrodingerlet(_), Signal::Line(_)) => {
                Err(Error::domain("Schrödingerlet voices need a signal given by θ-modes"))
            }
            (_, Signal::Line(v)) => {
                Self::check_axis(v.axis(), self.axis(), "signal")?;
                Ok(Voice::Field(Self::field_from_slices(&self.grid, self.bank.analyze(v.samples()))))
            }
            (_, Signal::Polar(_)) => Err(Error::domain(format!("a {} voice needs a signal on the line", self.rep.name()))),
        }
    }

    /// `√a ∫_{|ξ|≤ν} v̂(ξ) conj(û(aξ)) e^{2πiξb} dξ` on every scale of `grid`.
    fn atom_field(grid: &Arc<GroupGrid>, v: &Atom, u: &Atom) -> VoiceField {
        let nyq = grid.nyquist();
        let band = Band { lo: -nyq, hi: nyq };
        let axis = Axis::of_grid(grid);
        let slices: Vec<Vec<Complex64>> = grid
            .a_nodes()
            .par_iter()
            .map(|&a| cross_ift(v, u, a, Some(band), axis, true).into_iter().map(|z| z * a.sqrt()).collect())
            .collect();
        Self::field_from_slices(grid, slices)
    }

    /// `V_u ũ` for the analyzing vector `ũ` of another representation of the same group.
    pub fn voice_of(&self, other: &Representation) -> Result<Voice> {
        match (&self.rep, other) {
            (Representation::Schrodingerlet(u), Representation::Schrodingerlet(v)) => {
                // With a common dilation a_n the mode-n samples are a_n times the base ones.
                let base = Self::atom_field(&self.base, v.base(), u.base());
                let modes = self
                    .mode_grids
                    .par_iter()
                    .filter_map(|(&n, grid)| {
                        let (av, vn) = v.mode(n)?;
                        let (au, un) = u.mode(n)?;
                        let field = if av == au {
                            VoiceField::new(grid.clone(), base.values().iter().map(|z| z * au).collect()).ok()?
                        } else {
                            Self::atom_field(grid, vn, un)
                        };
                        Some((n, field))
                    })
                    .collect();
                Ok(Voice::Modes(ModeField::new(modes)?))
            }
            (Representation::Translation { .. }, Representation::Translation { atom: v, .. })
            | (Representation::Wavelet { .. }, Representation::Wavelet { atom: v }) => {
                Ok(Voice::Field(Self::atom_field(&self.grid, v, self.rep.base_atom())))
            }
            _ => Err(Error::domain(format!("cannot analyze a {} vector with a {} representation", other.name(), self.rep.name()))),
        }
    }

    /// `K(x) = ⟨u, π(x)u⟩`.
    pub fn kernel(&self) -> Result<Voice> {
        self.voice_of(&self.rep)
    }

    /// `π(f)u = ∫ f(x) π(x)u dx`, band-limited to the grid Nyquist and sampled
    /// on the grid axis (per-mode axes for Schrödingerlets).
    pub fn synthesize(&self, f: &Voice) -> Result<Signal> {
        let weights: Vec<f64> = match self.rep {
            Representation::Translation { .. } => vec![1.0],
            _ => self.base.scale_weights().to_vec(),
        };
        let run = |field: &VoiceField| -> Vec<Complex64> {
            let slices: Vec<Vec<Complex64>> = (0..field.grid().n_a()).map(|ia| field.slice(ia, 0)).collect();
            self.bank.synthesize(&slices, &weights)
        };
        match (&self.rep, f) {
            (Representation::Schrodingerlet(s), Voice::Modes(m)) => {
                let mut modes = BTreeMap::new();
                for (&n, fn_) in m.modes() {
                    let Some(grid) = self.mode_grids.get(&n) else { continue };
                    if fn_.grid() != grid.as_ref() {
                        return Err(Error::config(format!("field mode {n} is not on the mode grid")));
                    }
                    let (a, _) = s.mode(n).expect("mode grid implies mode");
                    modes.insert(n, Signal1D::new(mode_axis(self.axis(), a), run(fn_))?);
                }
                Ok(Signal::Polar(Signal2D::new(modes)))
            }
            (Representation::Schrodingerlet(_), Voice::Field(_)) => {
                Err(Error::config("Schrödingerlet synthesis needs a mode field"))
            }
            (_, Voice::Field(field)) => {
                if field.grid() != self.grid.as_ref() {
                    return Err(Error::config("field is not on the analyzer grid"));
                }
                Ok(Signal::Line(Signal1D::new(self.axis(), run(field))?))
            }
            (_, Voice::Modes(_)) => Err(Error::config("mode fields only synthesize Schrödingerlets")),
        }
    }
}

/// One-shot [`Analyzer::voice`].
pub fn voice(v: &Signal, rep: &Representation, grid: Arc<GroupGrid>) -> Result<Voice> {
    Analyzer::new(rep, grid)?.voice(v)
}

/// One-shot [`Analyzer::kernel`].
pub fn kernel(rep: &Representation, grid: Arc<GroupGrid>) -> Result<Voice> {
    Analyzer::new(rep, grid)?.kernel()
}

/// One-shot [`Analyzer::synthesize`].
pub fn synthesize(f: &Voice, rep: &Representation, grid: Arc<GroupGrid>) -> Result<Signal> {
    Analyzer::new(rep, grid)?.synthesize(f)
}

/// `‖V_ũ v − V_u v ∗ F‖ / ‖V_ũ v‖` with the filter `F = (conj V_u ũ)ˇ`.
///
/// `(conj V_u ũ)(y⁻¹) = ⟨π(y)u, ũ⟩ = V_ũ u(y)`, so the filter is evaluated from
/// the spectra rather than resampled at inverted nodes.
pub fn vector_change(v: &Signal, u: &Analyzer, ut: &Analyzer) -> Result<f64> {
    if u.grid() != ut.grid() {
        return Err(Error::config("both representations must share a grid"));
    }
    let lhs = ut.voice(v)?;
    let filter = ut.voice_of(u.representation())?;
    let rhs = u.voice(v)?.convolve(&filter)?;
    rhs.rel_diff(&lhs)
}

/// `max |conj K(x) − K(x⁻¹)|` over nodes whose inverse lies inside the box
/// with a margin of `margin` in b, the inverse read by band-limited
/// interpolation. Schrödingerlet kernels are checked per mode.
pub fn symmetry_residual(k: &Voice, margin: f64) -> f64 {
    k.parts().iter().map(|f| field_symmetry(f, margin)).fold(0.0, f64::max)
}

fn field_symmetry(k: &VoiceField, margin: f64) -> f64 {
    let grid = k.grid();
    let inv = check(k);
    let h = grid.params().b_halfwidth;
    let (lo, hi) = (grid.a_nodes()[0], grid.a_nodes()[grid.n_a() - 1]);
    (0..grid.len())
        .filter(|&i| {
            let x = grid.node(i);
            let a = x.a();
            (1.0 / a) >= lo * (1.0 - 1e-12) && (1.0 / a) <= hi * (1.0 + 1e-12) && (x.b() / a).abs() <= h - margin
        })
        .map(|i| (k.values()[i].conj() - inv.values()[i]).norm())
        .fold(0.0, f64::max)
}

/// Evaluates the Schrödingerlet series `Σ_n V^w_n v_n(b,a) e^{inφ}` at the
/// nodes of an angle grid, with each mode voice computed from the spectra
/// without a band limit.
pub fn schrodingerlet_series(v: &SchrodingerletAtom, u: &SchrodingerletAtom, grid: Arc<GroupGrid>) -> Result<VoiceField> {
    if grid.kind() != GroupKind::AffineCircle {
        return Err(Error::config("the series is evaluated on an affine-circle grid"));
    }
    let axis = Axis::of_grid(&grid);
    let mut out = VoiceField::zeros(grid.clone());
    let np = grid.n_phi();
    for (n, _, vn) in v.modes() {
        let Some((_, un)) = u.mode(n) else { continue };
        for (ia, &a) in grid.a_nodes().iter().enumerate() {
            let vals = cross_ift(vn, un, a, None, axis, true);
            for ip in 0..np {
                let e = cis2pi((n as i64 * ip as i64).rem_euclid(np as i64) as f64 / np as f64) * a.sqrt();
                let mut s = out.slice(ia, ip);
                for (o, z) in s.iter_mut().zip(&vals) {
                    *o += z * e;
                }
                out.set_slice(ia, ip, &s);
            }
        }
    }
    Ok(out)
}

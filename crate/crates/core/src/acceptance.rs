//! The acceptance criteria as executable checks on seeded corpora.
//!
//! Every criterion returns a [`CriterionResult`] holding its individual
//! checks; a criterion passes when all of its checks do. Grids, analyzers
//! and kernels are built once per [`Suite`] and shared between criteria.

use crate::atom::{cross_ift, Atom};
use crate::convolution::{algebra_check, convolve, young_suite};
use crate::coorbit::{coorbit_report, integrability_profile, reproduce};
use crate::error::Result;
use crate::grid::{bl_resample, build_grid, lp_norm, Exponent, GridParams, GroupGrid, ModeField, VoiceField};
use crate::group::{GroupElement, GroupKind, Weight};
use crate::numeric::{fmt_sig, sinc, to_json};
use crate::reference::{brute_convolve, direct_schrodingerlet_voice, DirectRule};
use crate::signal::{Axis, Band, Mollifier};
use crate::testkit;
use crate::voice::{
    build_schrodingerlet_atom, calderon, normalize_admissible, polar_unitary, schrodinger_flow_residual,
    schrodingerlet_series, spectral_phase_error, vector_change, Analyzer, Decay, Plane, Representation,
    SchrodingerletAtom, Signal, Voice,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Number of criteria.
pub const CRITERIA: u32 = 13;

/// How a measured value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    fn holds(self, value: f64, tol: f64) -> bool {
        match self {
            Relation::Below => value < tol,
            Relation::Above => value > tol,
            Relation::AtLeast => value >= tol,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::Above => ">",
            Relation::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, tolerance: f64) -> Self {
        let pass = relation.holds(value, tolerance);
        Check { name: name.into(), value, relation, tolerance, pass }
    }

    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check::new(name, value, Relation::Below, tol)
    }

    pub fn above(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check::new(name, value, Relation::Above, tol)
    }

    pub fn at_least(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Check::new(name, value, Relation::AtLeast, floor)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} {} {}",
            if self.pass { "ok  " } else { "FAIL" },
            self.name,
            fmt_sig(self.value),
            self.relation.symbol(),
            fmt_sig(self.tolerance)
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    fn new(id: u32, checks: Vec<Check>) -> Self {
        CriterionResult { id, name: criterion_name(id), pass: checks.iter().all(|c| c.pass), checks }
    }

    /// The check furthest from its tolerance on the failing side, or the
    /// tightest passing one.
    pub fn worst(&self) -> Option<&Check> {
        let margin = |c: &Check| {
            let d = match c.relation {
                Relation::Below => (c.tolerance - c.value) / c.tolerance.abs().max(f64::MIN_POSITIVE),
                _ => (c.value - c.tolerance) / c.tolerance.abs().max(1.0),
            };
            if d.is_nan() {
                f64::NEG_INFINITY
            } else {
                d
            }
        };
        self.checks.iter().min_by(|a, b| margin(a).total_cmp(&margin(b)))
    }

    /// `PASS 1 isometry (60 checks; worst: …)`.
    pub fn summary_line(&self) -> String {
        let worst = self.worst().map(|c| format!("; worst {c}")).unwrap_or_default();
        format!(
            "{} {:>2} {} ({} checks{})",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks.len(),
            worst
        )
    }
}

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "isometry",
        2 => "reproducing formula",
        3 => "synthesis inversion",
        4 => "kernel identities",
        5 => "integrability phenomenon",
        6 => "calderon arithmetic",
        7 => "schrodingerlet structure",
        8 => "paley-wiener coorbit identification",
        9 => "convolution appendix suite",
        10 => "change of admissible vector",
        11 => "mollifier family",
        12 => "schrodinger flow",
        13 => "determinism",
        _ => "unknown",
    }
}

/// Corpus sizes and grids of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteParams {
    pub seed: u64,
    /// Grid of the affine and affine-circle representations.
    pub grid: GridParams,
    /// Grid of the translation representation, long enough for the sinc tails.
    pub line_grid: GridParams,
    pub radius: usize,
    pub isometry_signals: usize,
    pub reproduce_signals: usize,
    pub synthesis_fields: usize,
    /// Modes `|n| ≤` this carry noise in the Schrödingerlet synthesis fields.
    pub field_radius: usize,
    pub coorbit_signals: usize,
    pub young_pairs: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 0,
            grid: GridParams::default(),
            line_grid: GridParams::default().with_b(65536.0, 262_144),
            radius: 16,
            isometry_signals: 20,
            reproduce_signals: 3,
            synthesis_fields: 10,
            field_radius: 4,
            coorbit_signals: 10,
            young_pairs: 100,
        }
    }
}

/// Shared state of one run of the criteria.
pub struct Suite {
    params: SuiteParams,
    translation: Analyzer,
    wavelet: Analyzer,
    schrodingerlet: Analyzer,
    kernels: [OnceLock<Voice>; 3],
    series_kernel: OnceLock<VoiceField>,
}

fn grid(kind: GroupKind, p: GridParams) -> Result<Arc<GroupGrid>> {
    Ok(Arc::new(build_grid(kind, p)?))
}

fn schrodingerlet_atom_of(rep: &Representation) -> &SchrodingerletAtom {
    match rep {
        Representation::Schrodingerlet(s) => s,
        _ => unreachable!("schrodingerlet analyzer"),
    }
}

impl Suite {
    pub fn new(params: SuiteParams) -> Result<Self> {
        let p = params.grid;
        let translation = Analyzer::new(&Representation::sinc(0.5)?, grid(GroupKind::Line, params.line_grid)?)?;
        let wavelet = Analyzer::new(&Representation::bump(), grid(GroupKind::Affine, p)?)?;
        let srep = Representation::schrodingerlet(&Atom::log_bump(0.25, 0.5)?, &Decay::default(), params.radius)?;
        let schrodingerlet = Analyzer::new(&srep, grid(GroupKind::AffineCircle, p)?)?;
        Ok(Suite {
            params,
            translation,
            wavelet,
            schrodingerlet,
            kernels: Default::default(),
            series_kernel: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &SuiteParams {
        &self.params
    }

    fn analyzers(&self) -> [(&'static str, &Analyzer); 3] {
        [("translation", &self.translation), ("wavelet", &self.wavelet), ("schrodingerlet", &self.schrodingerlet)]
    }

    fn kernel(&self, i: usize) -> Result<&Voice> {
        if let Some(k) = self.kernels[i].get() {
            return Ok(k);
        }
        let k = self.analyzers()[i].1.kernel()?;
        Ok(self.kernels[i].get_or_init(|| k))
    }

    /// The Schrödingerlet kernel at the nodes of the angle grid, from the series.
    fn series_kernel(&self) -> Result<&VoiceField> {
        if let Some(k) = self.series_kernel.get() {
            return Ok(k);
        }
        let s = schrodingerlet_atom_of(self.schrodingerlet.representation());
        let k = schrodingerlet_series(s, s, self.schrodingerlet.grid().clone())?;
        Ok(self.series_kernel.get_or_init(|| k))
    }

    /// Seeded signals of each representation.
    fn signals(&self, i: usize, count: usize) -> Result<Vec<Signal>> {
        let seed = self.params.seed;
        Ok(match i {
            0 => testkit::translation_corpus(seed, self.translation.axis(), count)?.into_iter().map(Signal::Line).collect(),
            1 => testkit::wavelet_corpus(seed, self.wavelet.axis(), count)?.into_iter().map(Signal::Line).collect(),
            _ => testkit::schrodingerlet_corpus(seed, &self.schrodingerlet, self.params.radius as i32, count)?
                .into_iter()
                .map(Signal::Polar)
                .collect(),
        })
    }

    pub fn run(&self, id: u32) -> Result<CriterionResult> {
        let checks = match id {
            1 => self.isometry()?,
            2 => self.reproducing()?,
            3 => self.synthesis()?,
            4 => self.kernel_identities()?,
            5 => self.integrability()?,
            6 => self.calderon_arithmetic()?,
            7 => self.schrodingerlet_structure()?,
            8 => self.paley_wiener()?,
            9 => self.appendix()?,
            10 => self.vector_change()?,
            11 => mollifier_family()?,
            12 => schrodinger_flow()?,
            13 => self.determinism()?,
            _ => return Err(crate::Error::Config(format!("no acceptance criterion {id}"))),
        };
        Ok(CriterionResult::new(id, checks))
    }

    pub fn run_all(&self) -> Result<Vec<CriterionResult>> {
        (1..=CRITERIA).map(|id| self.run(id)).collect()
    }

    fn isometry(&self) -> Result<Vec<Check>> {
        let tols = [1e-6, 1e-3, 1e-3];
        let mut out = Vec::new();
        for (i, (name, an)) in self.analyzers().into_iter().enumerate() {
            let worst = self
                .signals(i, self.params.isometry_signals)?
                .iter()
                .map(|v| Ok((an.voice(v)?.l2_norm() / v.l2_norm() - 1.0).abs()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            out.push(Check::below(format!("{name} |‖Vv‖/‖v‖ − 1|"), worst, tols[i]));
        }
        Ok(out)
    }

    fn reproducing(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (i, (name, an)) in self.analyzers().into_iter().enumerate() {
            let k = self.kernel(i)?;
            let mut worst: f64 = 0.0;
            for v in self.signals(i, self.params.reproduce_signals)? {
                worst = worst.max(reproduce(&an.voice(&v)?, k)?.1);
            }
            out.push(Check::below(format!("{name} ‖Vv∗K − Vv‖/‖Vv‖"), worst, 1e-3));
            out.push(Check::below(format!("{name} ‖K∗K − K‖/‖K‖"), reproduce(k, k)?.1, 1e-3));
        }
        Ok(out)
    }

    fn synthesis(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let seed = self.params.seed;
        for (i, (name, an)) in self.analyzers().into_iter().enumerate() {
            let mut worst: f64 = 0.0;
            for v in self.signals(i, self.params.reproduce_signals)? {
                worst = worst.max(an.synthesize(&an.voice(&v)?)?.rel_diff(&v)?);
            }
            out.push(Check::below(format!("{name} ‖π(Vv)u − v‖/‖v‖"), worst, 1e-3));
            let n = self.params.synthesis_fields;
            let fields: Vec<Voice> = if i == 2 {
                testkit::mode_field_corpus(seed, an, self.params.field_radius as i32, n)?.into_iter().map(Voice::Modes).collect()
            } else {
                testkit::field_corpus(seed, an.grid(), n)?.into_iter().map(Voice::Field).collect()
            };
            let k = self.kernel(i)?;
            let mut worst: f64 = 0.0;
            for f in &fields {
                let fk = f.convolve(k)?;
                worst = worst.max(an.voice(&an.synthesize(f)?)?.rel_diff(&fk)?);
            }
            out.push(Check::below(format!("{name} ‖Vπ(f)u − f∗K‖/‖f∗K‖"), worst, 1e-3));
        }
        Ok(out)
    }

    fn kernel_identities(&self) -> Result<Vec<Check>> {
        let line = self.translation.grid();
        let k = self.kernel(0)?.as_field().expect("line kernel");
        let sinc_err = line
            .b_nodes()
            .iter()
            .zip(k.values())
            .map(|(&b, z)| (z - Complex64::new(sinc(PI * b), 0.0)).norm())
            .fold(0.0, f64::max);

        let affine = self.wavelet.grid().clone();
        let raw = Analyzer::new(&Representation::Wavelet { atom: Atom::shannon() }, affine.clone())?.kernel()?;
        let raw = raw.as_field().expect("affine kernel");
        let (mut spec_err, mut outside): (f64, f64) = (0.0, 0.0);
        for (ia, &a) in affine.a_nodes().iter().enumerate() {
            let slice = raw.slice(ia, 0);
            let (lo, hi) = (0.25f64.max(0.25 / a), 0.5f64.min(0.5 / a));
            for (&b, z) in affine.b_nodes().iter().zip(&slice) {
                // Inverse transform of a^{1/2} χ_[lo,hi](|β|).
                let want = if hi <= lo {
                    0.0
                } else if b == 0.0 {
                    2.0 * a.sqrt() * (hi - lo)
                } else {
                    a.sqrt() * ((2.0 * PI * hi * b).sin() - (2.0 * PI * lo * b).sin()) / (PI * b)
                };
                spec_err = spec_err.max((z - want).norm());
            }
            if a <= 0.5 * (1.0 + 1e-12) || a >= 2.0 * (1.0 - 1e-12) {
                let normalized = self.shannon_kernel()?;
                outside = outside.max(normalized.slice(ia, 0).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        Ok(vec![
            Check::below("sinc kernel vs 2ω sinc(2ωπb)", sinc_err, 1e-9),
            Check::below("shannon per-scale spectrum a^{1/2}χ", spec_err, 1e-6),
            Check::below("shannon |K(b,a)| for a ∉ (1/2,2)", outside, 1e-9),
        ])
    }

    fn shannon_kernel(&self) -> Result<VoiceField> {
        let k = Analyzer::new(&Representation::shannon(), self.wavelet.grid().clone())?.kernel()?;
        Ok(k.as_field().expect("affine kernel").clone())
    }

    fn integrability(&self) -> Result<Vec<Check>> {
        let sinc_k = self.kernel(0)?.as_field().expect("line kernel").clone();
        let kernels = [("sinc", &sinc_k), ("shannon", &self.shannon_kernel()?), ("schrodingerlet", self.series_kernel()?)];
        let mut out = Vec::new();
        for (name, k) in kernels {
            for row in integrability_profile(k, &[1.0, 1.5, 2.0, 3.0], &Weight::one())? {
                let label = format!("{name} p={} relative increment", row.p);
                out.push(if row.p == 1.0 { Check::above(label, row.increment, 1e-2) } else { Check::below(label, row.increment, 1e-3) });
            }
        }
        Ok(out)
    }

    fn calderon_arithmetic(&self) -> Result<Vec<Check>> {
        let shannon = Atom::shannon();
        let c = shannon.calderon_sides().1;
        let mut out = vec![Check::below("shannon constant − ln 2", (c - LN_2).abs(), 1e-9)];
        let mut drift: f64 = 0.0;
        for s in [0.5, 2.0, 3.7] {
            drift = drift.max((shannon.dilated(s).calderon_sides().1 - c).abs());
        }
        out.push(Check::below("shannon dilation invariance", drift, 1e-9));
        // The sampled rule on a smooth profile, dilated by 2 on a grid scaled with it.
        let bump = Atom::log_bump(0.25, 0.5)?;
        let n = 200_000;
        let p1 = bump.profile(0.2, 0.35 / n as f64, n)?;
        let p2 = bump.dilated(2.0).profile(0.4, 0.7 / n as f64, n)?;
        out.push(Check::below("sampled bump dilation invariance", (calderon(&p1) - calderon(&p2)).abs(), 1e-9));
        let raw = Representation::Schrodingerlet(build_schrodingerlet_atom(&bump, &Decay::default(), self.params.radius)?);
        let (_, report) = normalize_admissible(&raw)?;
        let worst = report.constants.iter().map(|m| (m.after - 1.0).abs()).fold(0.0, f64::max);
        out.push(Check::below("schrodingerlet post-normalization |c_n − 1|", worst, 1e-6));
        Ok(out)
    }

    fn schrodingerlet_structure(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        // Series against brute-force inner products on a 64×8×8 grid.
        let small = grid(GroupKind::AffineCircle, GridParams { n_phi: 8, ..GridParams::default().with_b(16.0, 64).with_octaves(0.5, 8, 4) })?;
        let u = build_schrodingerlet_atom(&Atom::cauchy(3, 4.0)?, &Decay::default(), 2)?;
        let v = build_schrodingerlet_atom(&Atom::cauchy(2, 3.0)?.shifted(1.0), &Decay::default(), 2)?;
        let series = schrodingerlet_series(&v, &u, small.clone())?;
        let direct = direct_schrodingerlet_voice(&v, &u, small, DirectRule { halfwidth: 150.0, step: 0.05, n_theta: 8 })?;
        let scale = direct.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let err = series.values().iter().zip(direct.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        out.push(Check::below("series vs direct inner products (relative max)", err / scale, 1e-6));

        // K_n(b,a) = a_n K_0(a_n b, a): K_n from the atom u_n on the base nodes,
        // K_0 from the analyzer kernel read between its nodes.
        let an = &self.schrodingerlet;
        let s = schrodingerlet_atom_of(an.representation());
        let k0 = self.kernel(2)?.as_modes().expect("mode kernel").mode(0).expect("mode 0").clone();
        let base = k0.grid_arc().clone();
        let axis = Axis::of_grid(&base);
        let worst = s
            .modes()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(_, an_, un)| {
                let mut err: f64 = 0.0;
                let mut peak: f64 = 0.0;
                for (ia, &a) in base.a_nodes().iter().enumerate() {
                    let kn: Vec<Complex64> = cross_ift(un, un, a, None, axis, true).into_iter().map(|z| z * a.sqrt()).collect();
                    let k0s = bl_resample(&k0.slice(ia, 0), axis.x0, axis.dx, an_ * axis.x0, an_ * axis.dx, axis.n);
                    for (x, y) in kn.iter().zip(&k0s) {
                        err = err.max((x - y * an_).norm());
                        peak = peak.max(x.norm());
                    }
                }
                if peak > 0.0 {
                    err / peak
                } else {
                    err
                }
            })
            .reduce(|| 0.0, f64::max);
        out.push(Check::below("K_n(b,a) vs a_n K_0(a_n b, a) (relative max)", worst, 1e-3));

        // ‖K‖_p ≤ ‖K_0‖_p Σ a_n^{1−1/p}.
        let k = self.series_kernel()?;
        let mode0 = ModeField::new([(0, k0.clone())].into())?.to_nodes(an.grid().clone())?;
        let decay = Decay::default();
        for p in [1.5, 2.0, 3.0] {
            let e = Exponent::new(p)?;
            let lhs = lp_norm(k, e, &Weight::one());
            let rhs = lp_norm(&mode0, e, &Weight::one()) * decay.power_sum(self.params.radius, 1.0 - 1.0 / p)?;
            out.push(Check::at_least(format!("p={p} slack of ‖K‖_p ≤ ‖K_0‖_p Σ a_n^(1−1/p)"), (rhs - lhs) / rhs, 0.0));
        }
        Ok(out)
    }

    fn paley_wiener(&self) -> Result<Vec<Check>> {
        let an = &self.translation;
        let k = self.kernel(0)?;
        let mut out = Vec::new();
        for p in [1.5, 2.0, 4.0] {
            let mut worst: f64 = 0.0;
            for v in self.signals(0, self.params.coorbit_signals)? {
                let r = coorbit_report(&v, an, k, p, &Weight::one())?;
                let f = r.comparison.expect("translation comparison");
                worst = worst.max((r.coorbit_norm - f).abs() / f);
            }
            out.push(Check::below(format!("p={p} |coorbit − ‖f‖_p|/‖f‖_p"), worst, 1e-3));
        }
        Ok(out)
    }

    fn appendix(&self) -> Result<Vec<Check>> {
        let seed = self.params.seed;
        let line = grid(GroupKind::Line, GridParams::default().with_b(32.0, 256))?;
        let affine = grid(GroupKind::Affine, GridParams::default().with_b(16.0, 64).with_octaves(0.25, 16, 4))?;
        let mut out = Vec::new();

        let sets = [(1.0, 2.0), (1.0, 1.0), (4.0 / 3.0, 4.0 / 3.0), (1.5, 1.25), (2.0, 2.0)];
        for (g, gname) in [(&line, "line"), (&affine, "affine")] {
            let mut r = testkit::rng(seed, 6);
            let (h, lo, hi) = (g.params().b_halfwidth, g.a_nodes()[0], g.a_nodes()[g.n_a() - 1]);
            for (p, q) in sets {
                let mut worst = f64::INFINITY;
                for _ in 0..self.params.young_pairs {
                    let f = testkit::noise_field(&mut r, g, h / 2.0, lo, hi)?;
                    let gg = testkit::noise_field(&mut r, g, h / 2.0, lo, hi)?;
                    worst = worst.min(young_suite(&f, &gg, p, q)?.min_slack());
                }
                out.push(Check::at_least(format!("{gname} young p={} q={} min slack", fmt_sig(p), fmt_sig(q)), worst, -1e-9));
            }
        }

        let (line_ids, affine_ids) = (algebra_fields(&line)?, algebra_fields(&affine)?);
        let x_line = GroupElement::line(1.5);
        let x_affine = GroupElement::affine(1.5, 2f64.powf(0.5))?;
        for (name, (f, g, h), x, tol) in [("line", line_ids, x_line, 1e-6), ("affine", affine_ids, x_affine, 1e-3)] {
            let rep = algebra_check(&f, &g, &h, &x)?;
            for id in rep.identities {
                out.push(match id.residual {
                    Some(r) => Check::below(format!("{name} {}", id.name), r, tol),
                    None => Check::below(format!("{name} {} (skipped)", id.name), f64::NAN, tol),
                });
            }
        }

        let small = [
            grid(GroupKind::Line, GridParams::default().with_b(64.0, 2048))?,
            grid(GroupKind::Affine, GridParams::default().with_b(16.0, 64).with_octaves(0.25, 32, 8))?,
            grid(GroupKind::AffineCircle, GridParams { n_phi: 8, ..GridParams::default().with_b(8.0, 32).with_octaves(0.5, 8, 4) })?,
        ];
        let mut r = testkit::rng(seed, 7);
        for g in small {
            let (h, lo, hi) = (g.params().b_halfwidth, g.a_nodes()[0], g.a_nodes()[g.n_a() - 1]);
            let f = testkit::noise_field(&mut r, &g, h, lo, hi)?;
            let gg = testkit::noise_field(&mut r, &g, h, lo, hi)?;
            let d = convolve(&f, &gg)?.rel_diff(&brute_convolve(&f, &gg)?)?;
            out.push(Check::below(format!("{:?} engine vs brute force ({} nodes)", g.kind(), g.len()), d, 1e-8));
        }
        Ok(out)
    }

    fn vector_change(&self) -> Result<Vec<Check>> {
        let band = Band::symmetric(0.5)?;
        let shifted = Representation::Translation { band, atom: Atom::indicator(band).shifted(0.7) };
        let ut = Analyzer::new(&shifted, self.translation.grid().clone())?;
        let shannon = Analyzer::new(&Representation::shannon(), self.wavelet.grid().clone())?;
        let mut out = Vec::new();
        for (i, name, u, ut) in [(0, "translation", &self.translation, &ut), (1, "wavelet shannon→bump", &shannon, &self.wavelet)] {
            let mut worst: f64 = 0.0;
            for v in self.signals(i, self.params.reproduce_signals)? {
                worst = worst.max(vector_change(&v, u, ut)?);
            }
            out.push(Check::below(format!("{name} residual"), worst, 1e-2));
        }
        Ok(out)
    }

    fn determinism(&self) -> Result<Vec<Check>> {
        let first = pool(1)?.install(|| self.artifacts())?;
        let second = pool(2)?.install(|| self.artifacts())?;
        let same = first.len() == second.len() && first.iter().zip(&second).all(|(a, b)| a == b);
        Ok(vec![Check::below("artifacts differing between 1- and 2-thread runs", if same { 0.0 } else { 1.0 }, 0.5)])
    }

    /// A representative artifact set: voices, kernels and coorbit tables.
    pub fn artifacts(&self) -> Result<Vec<Vec<u8>>> {
        let mut out = Vec::new();
        for (i, (_, an)) in self.analyzers().into_iter().enumerate().take(2) {
            let v = &self.signals(i, 1)?[0];
            let mut buf = Vec::new();
            an.voice(v)?.as_field().expect("line or affine voice").write_csv(&mut buf)?;
            out.push(buf);
            let rows = crate::coorbit::coorbit_batch(&self.signals(i, 2)?, an, &[1.5, 2.0], &Weight::one(), 1e-2)?;
            let mut buf = Vec::new();
            crate::coorbit::write_batch_csv(&rows, &mut buf)?;
            out.push(buf);
        }
        let rows = integrability_profile(&self.shannon_kernel()?, &[1.0, 2.0], &Weight::one())?;
        let mut buf = Vec::new();
        crate::coorbit::write_profile_table(&rows, &mut buf)?;
        out.push(buf);
        out.push(to_json(&schrodinger_flow()?)?.into_bytes());
        Ok(out)
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::Config(format!("thread pool: {e}")))
}

/// Smooth fields concentrated well inside the box for the algebra identities.
fn algebra_fields(g: &Arc<GroupGrid>) -> Result<(VoiceField, VoiceField, VoiceField)> {
    let (lo, hi) = (g.a_nodes()[0].ln(), g.a_nodes()[g.n_a() - 1].ln());
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let h = g.params().b_halfwidth;
    let make = |c: f64, w: f64, f: f64| {
        VoiceField::new(
            g.clone(),
            (0..g.len())
                .map(|i| {
                    let x = g.node(i);
                    let s = if g.kind() == GroupKind::Line { 0.0 } else { (x.a().ln() - mid) / (0.35 * half) };
                    let t = (x.b() - c * h) / (w * h);
                    Complex64::from_polar((-0.5 * (t * t + s * s * 4.0)).exp(), f * x.b())
                })
                .collect(),
        )
    };
    Ok((make(-0.1, 0.08, 0.3)?, make(0.05, 0.06, -0.2)?, make(0.0, 0.07, 0.1)?))
}

/// Sandwich, `L¹` convergence rate and derivative bound of the mollifiers.
fn mollifier_family() -> Result<Vec<Check>> {
    let omega = 0.5;
    let (xi0, n) = (-1.0, 200_001);
    let dxi = 2.0 / (n - 1) as f64;
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let mut sandwich: f64 = 0.0;
    let mut deriv: f64 = f64::INFINITY;
    for eps in [0.1, 0.05, 0.025, 0.0125] {
        let m = Mollifier::new(eps, omega)?;
        let mut dmax: f64 = 0.0;
        for j in 0..n {
            let xi = xi0 + j as f64 * dxi;
            let g = m.eval(xi);
            let lo = if xi.abs() <= omega - eps { 1.0 } else { 0.0 };
            let hi = if xi.abs() < omega + eps { 1.0 } else { 0.0 };
            sandwich = sandwich.max(lo - g).max(g - hi);
            dmax = dmax.max(m.derivative(xi).abs());
        }
        deriv = deriv.min((m.derivative_bound() - dmax) / m.derivative_bound());
        errors.push(m.l1_error(xi0, dxi, n));
    }
    out.push(Check::below("sandwich violation", sandwich, f64::MIN_POSITIVE));
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        out.push(Check::below(format!("L¹ error ratio {} / 2 off by factor", fmt_sig(ratio)), (ratio / 2.0).max(2.0 / ratio), 4.0));
    }
    out.push(Check::at_least("derivative bound slack", deriv, 0.0));
    Ok(out)
}

fn schrodinger_flow() -> Result<Vec<Check>> {
    let gauss = Plane::from_fn(Axis::centered(8.0, 128), |x, y| Complex64::new((-PI * (x * x + y * y)).exp(), 0.0));
    let packet = Plane::from_fn(Axis::centered(32.0, 256), |x, y| {
        Complex64::from_polar((-(x * x + y * y) / 200.0).exp(), 2.0 * PI * (0.5 * x + 0.25 * y))
    });
    let psi = polar_unitary(&gauss, 4000, 32)?;
    Ok(vec![
        Check::below("PDE residual, gaussian b=0.1 h=1e-3", schrodinger_flow_residual(&gauss, 0.1, 1e-3)?, 1e-4),
        Check::below("phase at spectral peak", spectral_phase_error(&packet, 0.3), 1e-6),
        Check::below("polar unitary |‖Ψv‖/‖v‖ − 1|", (psi.l2_norm() / gauss.l2_norm() - 1.0).abs(), 1e-3),
    ])
}

/// Signals used by the CLI `voice` command when no input file is given.
pub fn demo_signal(seed: u64, an: &Analyzer) -> Result<Signal> {
    Ok(match an.representation() {
        Representation::Translation { .. } => Signal::Line(testkit::translation_corpus(seed, an.axis(), 1)?.remove(0)),
        Representation::Wavelet { .. } => Signal::Line(testkit::wavelet_corpus(seed, an.axis(), 1)?.remove(0)),
        Representation::Schrodingerlet(s) => {
            Signal::Polar(testkit::schrodingerlet_corpus(seed, an, s.radius() as i32, 1)?.remove(0))
        }
    })
}

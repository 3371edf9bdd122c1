//! Execution of a [`RunConfig`]: one command, its CSV/JSON artifacts and an exit code.

use crate::acceptance::{demo_signal, CriterionResult, Suite, SuiteParams};
use crate::config::{Command, RunConfig};
use crate::coorbit::{
    coorbit_batch, integrability_profile_with, reproduce, write_batch_csv, write_profile_table, BatchRow,
    IntegrabilityRow,
};
use crate::error::Result;
use crate::grid::VoiceField;
use crate::numeric::to_json;
use crate::signal;
use crate::testkit;
use crate::voice::{normalize_admissible, schrodingerlet_series, symmetry_residual, Analyzer, Representation, Signal, Voice};
use serde::Serialize;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Invalid configuration or an operation rejected its inputs.
    Invalid,
    /// At least one acceptance criterion failed.
    AcceptanceFailure,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Invalid => 1,
            Status::AcceptanceFailure => 2,
        }
    }
}

/// What a run produced, with one human-readable line per result.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

struct Out {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Out {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Out { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        f(&mut w)?;
        w.flush()?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let s = to_json(value)?;
        self.write(name, |w| Ok(writeln!(w, "{s}")?))
    }

    fn field(&mut self, name: &str, f: &VoiceField) -> Result<()> {
        self.write(name, |w| f.write_csv(w))
    }

    fn voice(&mut self, stem: &str, v: &Voice) -> Result<()> {
        match v {
            Voice::Field(f) => self.field(&format!("{stem}.csv"), f),
            Voice::Modes(m) => {
                for (n, f) in m.modes() {
                    self.field(&format!("{stem}_mode_{n}.csv"), f)?;
                }
                Ok(())
            }
        }
    }
}

fn analyzer(c: &RunConfig) -> Result<Analyzer> {
    Analyzer::new(&c.representation()?, c.build_grid()?)
}

/// The input signal of the config, or `count` seeded signals.
fn signals(c: &RunConfig, an: &Analyzer, count: usize) -> Result<Vec<Signal>> {
    if let Some(path) = &c.input {
        let s = signal::read_csv(File::open(path)?)?;
        return Ok(vec![Signal::Line(s)]);
    }
    Ok(match an.representation() {
        Representation::Translation { .. } => {
            testkit::translation_corpus(c.seed, an.axis(), count)?.into_iter().map(Signal::Line).collect()
        }
        Representation::Wavelet { .. } => {
            testkit::wavelet_corpus(c.seed, an.axis(), count)?.into_iter().map(Signal::Line).collect()
        }
        Representation::Schrodingerlet(s) => testkit::schrodingerlet_corpus(c.seed, an, s.radius() as i32, count)?
            .into_iter()
            .map(Signal::Polar)
            .collect(),
    })
}

/// The kernel as a single field: the affine kernel, or the Schrödingerlet
/// kernel summed over modes at the nodes of the angle grid.
fn kernel_field(an: &Analyzer) -> Result<VoiceField> {
    match an.representation() {
        Representation::Schrodingerlet(s) => schrodingerlet_series(s, s, an.grid().clone()),
        _ => Ok(an.kernel()?.as_field().expect("line or affine kernel").clone()),
    }
}

#[derive(Serialize)]
struct KernelSummary {
    representation: &'static str,
    symmetry_residual: f64,
    symmetry_margin: f64,
    mode_norms: Vec<(i32, f64)>,
}

#[derive(Serialize)]
struct ReproduceSummary {
    representation: &'static str,
    residuals: Vec<f64>,
    max_residual: f64,
    tolerance: f64,
    members: usize,
}

#[derive(Serialize)]
struct CoorbitSummary<'a> {
    representation: &'static str,
    weight: &'a str,
    tolerance: f64,
    rows: &'a [BatchRow],
}

#[derive(Serialize)]
struct NormsSummary<'a> {
    representation: &'static str,
    weight: &'a str,
    tolerance: f64,
    rows: &'a [IntegrabilityRow],
}

#[derive(Serialize)]
struct SelftestSummary<'a> {
    params: SuiteParams,
    pass: bool,
    criteria: &'a [CriterionResult],
}

/// Runs the command of `c`, writing artifacts into `out`.
pub fn run(c: &RunConfig, out: &Path) -> Result<Outcome> {
    c.validate()?;
    let mut o = Out::new(out)?;
    let mut lines = Vec::new();
    let mut status = Status::Success;
    match c.command {
        Command::Kernel => {
            let an = analyzer(c)?;
            let k = an.kernel()?;
            let margin = an.grid().params().b_halfwidth / 2.0;
            let residual = symmetry_residual(&k, margin);
            let mode_norms = match &k {
                Voice::Field(_) => Vec::new(),
                Voice::Modes(m) => m.modes().iter().map(|(&n, f)| (n, f.l2_norm())).collect(),
            };
            match &k {
                Voice::Field(f) => o.field("kernel.csv", f)?,
                Voice::Modes(m) => o.field("kernel_mode_0.csv", &m.modes()[&0])?,
            }
            lines.push(format!("symmetry residual {residual:.3e}"));
            o.json(
                "kernel.json",
                &KernelSummary {
                    representation: an.representation().name(),
                    symmetry_residual: residual,
                    symmetry_margin: margin,
                    mode_norms,
                },
            )?;
        }
        Command::Admissible => {
            let (_, report) = normalize_admissible(&c.raw_representation()?)?;
            lines.push(format!("admissible: {}, normalization {:.6e}", report.admissible, report.normalization));
            o.json("admissible.json", &report)?;
        }
        Command::Voice => {
            let an = analyzer(c)?;
            let v = match &c.input {
                Some(_) => signals(c, &an, 1)?.remove(0),
                None => demo_signal(c.seed, &an)?,
            };
            let vv = an.voice(&v)?;
            lines.push(format!("voice L² norm {:.6e}, signal L² norm {:.6e}", vv.l2_norm(), v.l2_norm()));
            o.voice("voice", &vv)?;
        }
        Command::Reproduce => {
            let an = analyzer(c)?;
            let k = an.kernel()?;
            let residuals = signals(c, &an, c.signals)?
                .iter()
                .map(|v| reproduce(&an.voice(v)?, &k).map(|(_, r)| r))
                .collect::<Result<Vec<_>>>()?;
            let tol = c.tolerances.membership;
            let max_residual = residuals.iter().copied().fold(0.0, f64::max);
            let members = residuals.iter().filter(|&&r| r < tol).count();
            lines.push(format!("max residual {max_residual:.3e}, {members}/{} below {tol:e}", residuals.len()));
            o.json(
                "reproduce.json",
                &ReproduceSummary { representation: an.representation().name(), residuals, max_residual, tolerance: tol, members },
            )?;
        }
        Command::Norms => {
            let an = analyzer(c)?;
            let w = c.weight()?;
            let rows = integrability_profile_with(&kernel_field(&an)?, &c.ps, &w, c.tolerances.cauchy)?;
            for r in &rows {
                let flag = if r.weight_growth { " (weight grows faster than the kernel decays)" } else { "" };
                lines.push(format!("p={} increment {:.3e} {}{flag}", r.p, r.increment, r.verdict.as_str()));
            }
            o.write("norms.csv", |f| write_profile_table(&rows, f))?;
            o.json(
                "norms.json",
                &NormsSummary { representation: an.representation().name(), weight: w.id(), tolerance: c.tolerances.cauchy, rows: &rows },
            )?;
        }
        Command::Coorbit => {
            let an = analyzer(c)?;
            let w = c.weight()?;
            let tol = c.tolerances.membership;
            let rows = coorbit_batch(&signals(c, &an, c.signals)?, &an, &c.ps, &w, tol)?;
            let members = rows.iter().filter(|r| r.verdict == "member").count();
            lines.push(format!("{members}/{} rows reproduced within {tol:e}", rows.len()));
            o.write("coorbit.csv", |f| write_batch_csv(&rows, f))?;
            o.json(
                "coorbit.json",
                &CoorbitSummary { representation: an.representation().name(), weight: w.id(), tolerance: tol, rows: &rows },
            )?;
        }
        Command::Selftest => {
            let defaults = SuiteParams::default();
            let params = SuiteParams {
                seed: c.seed,
                grid: c.grid,
                line_grid: c.line_grid.unwrap_or(defaults.line_grid),
                radius: c.atom.radius,
                ..defaults
            };
            let suite = Suite::new(params)?;
            let results = suite.run_all()?;
            lines.extend(results.iter().map(|r| r.summary_line()));
            let pass = results.iter().all(|r| r.pass);
            if !pass {
                status = Status::AcceptanceFailure;
            }
            o.json("selftest.json", &SelftestSummary { params, pass, criteria: &results })?;
        }
    }
    Ok(Outcome { status, files: o.files, lines })
}


use super::GroupGrid;
use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::numeric::{cis2pi, fmt_sig, pairwise_sum};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

/// Complex values on the nodes of a [`GroupGrid`], in grid node order.
#[derive(Debug, Clone)]
pub struct VoiceField {
    grid: Arc<GroupGrid>,
    values: Vec<Complex64>,
}

impl VoiceField {
    pub fn new(grid: Arc<GroupGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::config(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::domain(format!("non-finite field value at node {i}")));
        }
        Ok(VoiceField { grid, values })
    }

    pub fn zeros(grid: Arc<GroupGrid>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        VoiceField { grid, values }
    }

    /// Builds a field from per-slice b-profiles, `f(ia, ip)` returning `n_b` values.
    pub fn from_slices(grid: Arc<GroupGrid>, f: impl Fn(usize, usize) -> Vec<Complex64>) -> Result<Self> {
        let mut out = VoiceField::zeros(grid.clone());
        for ia in 0..grid.n_a() {
            for ip in 0..grid.n_phi() {
                out.set_slice(ia, ip, &f(ia, ip));
            }
        }
        VoiceField::new(grid, out.values)
    }

    pub fn grid(&self) -> &GroupGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<GroupGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, ib: usize, ia: usize, ip: usize) -> Complex64 {
        self.values[self.grid.index(ib, ia, ip)]
    }

    /// Values along the b-axis at fixed scale and angle.
    pub fn slice(&self, ia: usize, ip: usize) -> Vec<Complex64> {
        (0..self.grid.n_b()).map(|ib| self.get(ib, ia, ip)).collect()
    }

    pub fn set_slice(&mut self, ia: usize, ip: usize, s: &[Complex64]) {
        assert_eq!(s.len(), self.grid.n_b(), "slice length");
        for (ib, v) in s.iter().enumerate() {
            let i = self.grid.index(ib, ia, ip);
            self.values[i] = *v;
        }
    }

    pub fn slice_is_zero(&self, ia: usize, ip: usize) -> bool {
        (0..self.grid.n_b()).all(|ib| self.get(ib, ia, ip) == Complex64::new(0.0, 0.0))
    }

    pub fn ensure_same_grid(&self, other: &VoiceField) -> Result<()> {
        if *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::config("operands live on different grids"))
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> VoiceField {
        VoiceField { grid: self.grid.clone(), values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, c: Complex64) -> VoiceField {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> VoiceField {
        self.map(|z| z.conj())
    }

    pub fn zip_with(&self, other: &VoiceField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<VoiceField> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(VoiceField { grid: self.grid.clone(), values })
    }

    pub fn sub(&self, other: &VoiceField) -> Result<VoiceField> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn add(&self, other: &VoiceField) -> Result<VoiceField> {
        self.zip_with(other, |x, y| x + y)
    }

    /// Unweighted `L²` norm with the Haar quadrature.
    pub fn l2_norm(&self) -> f64 {
        let terms: Vec<f64> =
            self.values.iter().enumerate().map(|(i, z)| z.norm_sqr() * self.grid.quad_weight(i)).collect();
        pairwise_sum(&terms).sqrt()
    }

    /// `‖self − other‖₂ / ‖other‖₂`.
    pub fn rel_diff(&self, other: &VoiceField) -> Result<f64> {
        let d = self.sub(other)?.l2_norm();
        let n = other.l2_norm();
        Ok(if n == 0.0 { d } else { d / n })
    }

    /// Writes `b,a,phi,real,imag`, dropping the axes the group does not have.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let kind = self.grid.kind();
        let header = match kind {
            GroupKind::Line => "b,real,imag",
            GroupKind::Affine => "b,a,real,imag",
            GroupKind::AffineCircle => "b,a,phi,real,imag",
        };
        writeln!(w, "{header}")?;
        for (i, z) in self.values.iter().enumerate() {
            let x = self.grid.node(i);
            match kind {
                GroupKind::Line => writeln!(w, "{},{},{}", fmt_sig(x.b()), fmt_sig(z.re), fmt_sig(z.im))?,
                GroupKind::Affine => {
                    writeln!(w, "{},{},{},{}", fmt_sig(x.b()), fmt_sig(x.a()), fmt_sig(z.re), fmt_sig(z.im))?
                }
                GroupKind::AffineCircle => writeln!(
                    w,
                    "{},{},{},{},{}",
                    fmt_sig(x.b()),
                    fmt_sig(x.a()),
                    fmt_sig(x.phi()),
                    fmt_sig(z.re),
                    fmt_sig(z.im)
                )?,
            }
        }
        Ok(())
    }
}

/// A field on `(ℝ ⋊ ℝ₊) × S¹` stored by angular Fourier modes: `F(b,a,φ) = Σ_n F_n(b,a) e^{inφ}`.
/// Each mode is an affine field; modes may use differently stretched b-axes.
#[derive(Debug, Clone, Default)]
pub struct ModeField {
    modes: BTreeMap<i32, VoiceField>,
}

impl ModeField {
    pub fn new(modes: BTreeMap<i32, VoiceField>) -> Result<Self> {
        if let Some((n, _)) = modes.iter().find(|(_, f)| f.grid().kind() != GroupKind::Affine) {
            return Err(Error::config(format!("mode {n} is not an affine field")));
        }
        Ok(ModeField { modes })
    }

    pub fn modes(&self) -> &BTreeMap<i32, VoiceField> {
        &self.modes
    }

    pub fn mode(&self, n: i32) -> Option<&VoiceField> {
        self.modes.get(&n)
    }

    /// `L²` norm via Parseval across modes.
    pub fn l2_norm(&self) -> f64 {
        let terms: Vec<f64> = self.modes.values().map(|f| f.l2_norm().powi(2)).collect();
        pairwise_sum(&terms).sqrt()
    }

    pub fn sub(&self, other: &ModeField) -> Result<ModeField> {
        let mut out = BTreeMap::new();
        for n in self.modes.keys().chain(other.modes.keys()) {
            let d = match (self.modes.get(n), other.modes.get(n)) {
                (Some(f), Some(g)) => f.sub(g)?,
                (Some(f), None) => f.clone(),
                (None, Some(g)) => g.scale(Complex64::new(-1.0, 0.0)),
                (None, None) => unreachable!(),
            };
            out.insert(*n, d);
        }
        Ok(ModeField { modes: out })
    }

    pub fn rel_diff(&self, other: &ModeField) -> Result<f64> {
        let d = self.sub(other)?.l2_norm();
        let n = other.l2_norm();
        Ok(if n == 0.0 { d } else { d / n })
    }

    /// Angular modes `F_n = (1/n_φ) Σ_j F(·,·,φ_j) e^{−inφ_j}` of a field on an
    /// angle grid, for `n ∈ [−n_φ/2, n_φ/2)`; all-zero modes are dropped.
    pub fn from_nodes(field: &VoiceField) -> Result<ModeField> {
        let grid = field.grid();
        if grid.kind() != GroupKind::AffineCircle {
            return Err(Error::config("angular modes need an affine-circle grid"));
        }
        let base = Arc::new(grid.affine_part());
        let np = grid.n_phi() as i64;
        let mut modes = BTreeMap::new();
        for n in -np / 2..np - np / 2 {
            let mut vals = vec![Complex64::new(0.0, 0.0); base.len()];
            for ib in 0..grid.n_b() {
                for ia in 0..grid.n_a() {
                    let s: Vec<Complex64> = (0..np)
                        .map(|j| field.get(ib, ia, j as usize) * cis2pi(-((n * j).rem_euclid(np)) as f64 / np as f64))
                        .collect();
                    vals[base.index(ib, ia, 0)] = crate::numeric::pairwise_sum_c(&s) / np as f64;
                }
            }
            if vals.iter().any(|z| z.norm() > 0.0) {
                modes.insert(n as i32, VoiceField::new(base.clone(), vals)?);
            }
        }
        Ok(ModeField { modes })
    }

    /// Evaluates `Σ_n F_n e^{inφ}` on the nodes of an angle grid whose affine
    /// part every mode shares.
    pub fn to_nodes(&self, grid: Arc<GroupGrid>) -> Result<VoiceField> {
        if grid.kind() != GroupKind::AffineCircle {
            return Err(Error::config("mode synthesis needs an affine-circle grid"));
        }
        let base = grid.affine_part();
        if let Some((n, _)) = self.modes.iter().find(|(_, f)| *f.grid() != base) {
            return Err(Error::config(format!("mode {n} does not live on the grid's affine part")));
        }
        let np = grid.n_phi();
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for ib in 0..grid.n_b() {
            for ia in 0..grid.n_a() {
                for ip in 0..np {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (&n, f) in &self.modes {
                        s += f.get(ib, ia, 0) * cis2pi((n as i64 * ip as i64).rem_euclid(np as i64) as f64 / np as f64);
                    }
                    values[grid.index(ib, ia, ip)] = s;
                }
            }
        }
        VoiceField::new(grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridParams};

    fn small(kind: GroupKind) -> Arc<GroupGrid> {
        let p = GridParams { b_halfwidth: 2.0, n_b: 8, a_min: 0.5, a_max: 2.0, n_a: 3, n_phi: 4 };
        Arc::new(build_grid(kind, p).unwrap())
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = small(GroupKind::Affine);
        let mut v = vec![Complex64::new(1.0, 0.0); g.len()];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(VoiceField::new(g, v).is_err());
    }

    #[test]
    fn slices_round_trip() {
        let g = small(GroupKind::AffineCircle);
        let f = VoiceField::from_slices(g.clone(), |ia, ip| {
            (0..8).map(|ib| Complex64::new(ib as f64, (10 * ia + ip) as f64)).collect()
        })
        .unwrap();
        assert_eq!(f.get(5, 2, 1), Complex64::new(5.0, 21.0));
        assert_eq!(f.slice(1, 3)[7], Complex64::new(7.0, 13.0));
    }

    #[test]
    fn csv_omits_absent_axes() {
        let f = VoiceField::zeros(small(GroupKind::Line));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("b,real,imag\n-2,0,0\n"));
    }

    #[test]
    fn single_mode_nodes_carry_the_character() {
        let circ = small(GroupKind::AffineCircle);
        let aff = Arc::new(circ.affine_part());
        let one = VoiceField::from_slices(aff, |_, _| vec![Complex64::new(1.0, 0.0); 8]).unwrap();
        let mf = ModeField::new([(1, one)].into_iter().collect()).unwrap();
        let nodes = mf.to_nodes(circ.clone()).unwrap();
        for ip in 0..4 {
            let want = cis2pi(ip as f64 / 4.0);
            assert!((nodes.get(3, 1, ip) - want).norm() < 1e-15);
        }
        // Parseval across modes versus quadrature over the angle nodes.
        assert!((nodes.l2_norm() - mf.l2_norm()).abs() < 1e-12);
    }
}

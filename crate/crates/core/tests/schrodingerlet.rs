use coorbit::atom::Atom;
use coorbit::grid::{build_grid, GridParams};
use coorbit::group::GroupKind;
use coorbit::reference::{direct_schrodingerlet_voice, DirectRule};
use coorbit::voice::{build_schrodingerlet_atom, schrodingerlet_series, Decay};
use std::sync::Arc;

#[test]
fn series_matches_direct_inner_products() {
    let p = GridParams { n_phi: 8, ..GridParams::default().with_b(16.0, 64).with_octaves(0.5, 8, 4) };
    let grid = Arc::new(build_grid(GroupKind::AffineCircle, p).unwrap());
    let u = build_schrodingerlet_atom(&Atom::cauchy(3, 4.0).unwrap(), &Decay::default(), 2).unwrap();
    let v = build_schrodingerlet_atom(&Atom::cauchy(2, 3.0).unwrap().shifted(1.0), &Decay::default(), 2).unwrap();
    let series = schrodingerlet_series(&v, &u, grid.clone()).unwrap();
    let rule = DirectRule { halfwidth: 150.0, step: 0.05, n_theta: 8 };
    let direct = direct_schrodingerlet_voice(&v, &u, grid, rule).unwrap();
    let scale = direct.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let err = series.values().iter().zip(direct.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err / scale < 1e-6, "{err} vs {scale}");
}

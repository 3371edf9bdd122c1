use coorbit::atom::Atom;
use coorbit::config::RunConfig;
use coorbit::convolution::convolve;
use coorbit::grid::{build_grid, GridParams};
use coorbit::group::{GroupElement, GroupKind};
use coorbit::reference::brute_convolve;
use coorbit::testkit;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

fn close(g: &GroupElement, h: &GroupElement) -> bool {
    let tol = 1e-12 * (1.0 + g.b().abs().max(h.b().abs()));
    (g.b() - h.b()).abs() <= tol && (g.a() - h.a()).abs() <= 1e-12 * g.a() && angle_gap(g.phi(), h.phi()) <= 1e-12
}

fn element() -> impl Strategy<Value = GroupElement> {
    (-50.0..50.0f64, -3.0..3.0f64, 0.0..TAU).prop_map(|(b, la, phi)| GroupElement::affine_circle(b, la.exp(), phi).unwrap())
}

fn project(kind: GroupKind, g: &GroupElement) -> GroupElement {
    match kind {
        GroupKind::Line => GroupElement::line(g.b()),
        GroupKind::Affine => GroupElement::affine(g.b(), g.a()).unwrap(),
        GroupKind::AffineCircle => *g,
    }
}

/// `π(b,a)u` as an atom: spectrum `√a e^{−2πibξ} û(aξ)`.
fn act(g: &GroupElement, u: &Atom) -> Atom {
    u.dilated(1.0 / g.a()).shifted(g.b()).scaled(g.a().sqrt())
}

/// `exp(−b²/2σ² − (ln a)²/2τ²)`.
fn gauss(x: &GroupElement) -> f64 {
    let (sigma, tau) = (4.0, 0.2);
    (-x.b().powi(2) / (2.0 * sigma * sigma) - x.a().ln().powi(2) / (2.0 * tau * tau)).exp()
}

proptest! {
    #[test]
    fn composition_is_associative(g in element(), h in element(), k in element()) {
        for kind in [GroupKind::Line, GroupKind::Affine, GroupKind::AffineCircle] {
            let (g, h, k) = (project(kind, &g), project(kind, &h), project(kind, &k));
            let left = kind.compose(&kind.compose(&g, &h).unwrap(), &k).unwrap();
            let right = kind.compose(&g, &kind.compose(&h, &k).unwrap()).unwrap();
            prop_assert!(close(&left, &right), "{kind:?}: {left:?} vs {right:?}");
        }
    }

    #[test]
    fn inverse_cancels(g in element()) {
        for kind in [GroupKind::Line, GroupKind::Affine, GroupKind::AffineCircle] {
            let g = project(kind, &g);
            let inv = kind.inverse(&g).unwrap();
            prop_assert!(close(&kind.compose(&g, &inv).unwrap(), &GroupElement::IDENTITY));
            prop_assert!(close(&kind.compose(&inv, &g).unwrap(), &GroupElement::IDENTITY));
        }
    }

    #[test]
    fn representation_is_a_homomorphism(g in element(), h in element()) {
        let kind = GroupKind::Affine;
        let (g, h) = (project(kind, &g), project(kind, &h));
        let gh = kind.compose(&g, &h).unwrap();
        let u = Atom::cauchy(2, 1.5).unwrap().shifted(0.3);
        let lhs = act(&g, &act(&h, &u));
        let rhs = act(&gh, &u);
        for k in 0..200 {
            let xi = 0.01 + k as f64 * 0.05;
            let (l, r) = (lhs.spectrum(xi), rhs.spectrum(xi));
            prop_assert!((l - r).norm() <= 1e-9 * (1.0 + r.norm()), "ξ={xi}: {l} vs {r}");
        }
    }

    #[test]
    fn quadrature_is_left_invariant(b0 in -5.0..5.0f64, la0 in -0.2..0.2f64) {
        let kind = GroupKind::Affine;
        let grid = build_grid(kind, GridParams::default().with_b(64.0, 512)).unwrap();
        let g0 = GroupElement::affine(b0, la0.exp()).unwrap();
        let sum = |f: &dyn Fn(&GroupElement) -> f64| (0..grid.len()).map(|i| f(&grid.node(i)) * grid.quad_weight(i)).sum::<f64>();
        let plain = sum(&gauss);
        let moved = sum(&|x| gauss(&kind.compose(&g0, x).unwrap()));
        // ∫∫ e^{−b²/2σ²} e^{−(ln a)²/2τ²} db da/a² = 2π στ e^{τ²/2}
        let exact = 2.0 * PI * 4.0 * 0.2 * (0.02f64).exp();
        prop_assert!((plain - exact).abs() <= 1e-8 * exact, "{plain} vs {exact}");
        prop_assert!((moved - exact).abs() <= 1e-6 * exact, "{moved} vs {exact}");
    }

    #[test]
    fn config_names_bad_exponent(good in proptest::collection::vec(1.0..10.0f64, 0..4), bad in -5.0..0.999f64) {
        let mut ps = good.clone();
        ps.push(bad);
        let json = serde_json::json!({ "command": "norms", "ps": ps }).to_string();
        let e = RunConfig::from_json(&json).unwrap_err().to_string();
        let field = format!("ps[{}]", good.len());
        prop_assert!(e.contains(&field), "{e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_matches_brute_force(
        seed in any::<u64>(),
        kind in prop_oneof![Just(GroupKind::Line), Just(GroupKind::Affine), Just(GroupKind::AffineCircle)],
        log_nb in 4u32..7,
        n_a in 2usize..6,
        per_octave in prop_oneof![Just(2usize), Just(4)],
        n_phi in prop_oneof![Just(2usize), Just(4)],
    ) {
        let n_b = 1usize << log_nb;
        let params = GridParams { n_phi, ..GridParams::default().with_b(n_b as f64 / 4.0, n_b).with_octaves(0.5, n_a, per_octave) };
        let g = Arc::new(build_grid(kind, params).unwrap());
        let (h, lo, hi) = (g.params().b_halfwidth, g.a_nodes()[0], g.a_nodes()[g.n_a() - 1]);
        let mut r = testkit::rng(seed, 9);
        let f = testkit::noise_field(&mut r, &g, h, lo, hi).unwrap();
        let k = testkit::noise_field(&mut r, &g, h, lo, hi).unwrap();
        let d = convolve(&f, &k).unwrap().rel_diff(&brute_convolve(&f, &k).unwrap()).unwrap();
        prop_assert!(d < 1e-9, "{kind:?} {n_b}×{n_a}×{n_phi}: {d}");
    }
}

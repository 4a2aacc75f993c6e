mod common;

use common::*;
use proptest::prelude::*;
use toeplitz_dyn::symbol::{CircleRelation, Containment};
use toeplitz_dyn::{LaurentSymbol, TridiagonalSymbol, C64};

fn direct_eval(sym: &LaurentSymbol, theta: f64) -> C64 {
    sym.terms()
        .map(|(n, a)| a * C64::new((n as f64 * theta).cos(), (n as f64 * theta).sin()))
        .sum()
}

/// Roots of `c z² + (b - w) z + a = 0`.
fn quadratic_roots(tri: &TridiagonalSymbol, w: C64) -> [C64; 2] {
    let (qa, qb, qc) = (tri.c, tri.b - w, tri.a);
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eval_matches_definition(sym in symbol(4), theta in 0.0..std::f64::consts::TAU) {
        let diff = (sym.eval(theta) - direct_eval(&sym, theta)).norm();
        prop_assert!(diff <= 16.0 * f64::EPSILON * sym.l1_norm().max(1.0), "diff {diff}");
        let on_circle = sym.eval_at(C64::from_polar(1.0, theta));
        prop_assert!((on_circle - sym.eval(theta)).norm() <= 1e-12 * sym.l1_norm().max(1.0));
    }

    #[test]
    fn conjugation_is_an_involution(sym in symbol(4), theta in 0.0..std::f64::consts::TAU) {
        prop_assert_eq!(sym.conjugate().conjugate(), sym.clone());
        let diff = (sym.conjugate().eval(theta) - sym.eval(theta).conj()).norm();
        prop_assert!(diff <= 1e-12 * sym.l1_norm().max(1.0));
        prop_assert_eq!(sym.conjugate().anti_degree(), sym.degree());
    }

    #[test]
    fn json_round_trip(sym in symbol(5)) {
        let text = serde_json::to_string(&sym).unwrap();
        let back: LaurentSymbol = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, sym);
    }

    #[test]
    fn curve_lies_on_its_ellipse(tri in admissible_tri(), theta in 0.0..std::f64::consts::TAU) {
        let geom = tri.ellipse().unwrap();
        let g = geom.level(tri.eval(theta));
        prop_assert!((g - 1.0).abs() < 1e-9, "level {g}");
        prop_assert_eq!(tri.ellipse_contains(tri.eval(theta), 1e-9).unwrap(), Containment::OnCurve);
    }

    #[test]
    fn annulus_image_is_inside(tri in admissible_tri(), s in 0.01..0.99f64, t in 0.0..std::f64::consts::TAU) {
        let outer = tri.a.norm() / tri.c.norm();
        let z0 = C64::from_polar(outer.powf(s), t);
        let g = tri.ellipse().unwrap().level(tri.eval_at(z0));
        prop_assert!(g < 1.0, "level {g}");
    }

    #[test]
    fn annulus_solve_matches_quadratic_roots(
        tri in admissible_tri(),
        s in 0.02..0.98f64,
        t in 0.0..std::f64::consts::TAU,
    ) {
        let outer = tri.a.norm() / tri.c.norm();
        let z0 = C64::from_polar(outer.powf(s), t);
        let w = tri.eval_at(z0);
        prop_assume!(tri.ellipse().unwrap().level(w) < 1.0 - 1e-6);
        let z = tri.annulus_param_solve(w).unwrap().point();
        let scale = tri.scale();
        prop_assert!((tri.eval_at(z) - w).norm() <= 1e-9 * scale, "F(z) - w = {}", (tri.eval_at(z) - w).norm());
        prop_assert!(z.norm() > 1.0 && z.norm() <= outer.sqrt() * (1.0 + 1e-9));
        let roots = quadratic_roots(&tri, w);
        let nearest = roots.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!(nearest <= 1e-6 * z.norm(), "distance to roots {nearest}");
    }

    #[test]
    fn circle_relation_matches_level_samples(tri in admissible_tri()) {
        let geom = tri.ellipse().unwrap();
        let sampled_min = (0..20_000)
            .map(|k| geom.level(C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 20_000.0)))
            .fold(f64::INFINITY, f64::min);
        match tri.ellipse_intersects_unit_circle(1e-9).unwrap() {
            CircleRelation::Intersects => prop_assert!(sampled_min < 1.0 + 1e-6),
            CircleRelation::Disjoint => prop_assert!(sampled_min > 1.0 - 1e-6),
            CircleRelation::Tangent { .. } => prop_assert!((sampled_min - 1.0).abs() < 1e-3),
        }
        let (_, m) = tri.circle_level_minimum().unwrap();
        prop_assert!(m <= sampled_min + 1e-12);
    }
}

#[test]
fn sup_norm_and_min_modulus_bracket_samples() {
    let sym = LaurentSymbol::new([(-2, c(0.3, 0.1)), (0, c(1.0, 0.0)), (3, c(0.0, 0.7))]);
    let samples: Vec<f64> = sym
        .curve_samples(100_000)
        .iter()
        .map(|w| w.norm())
        .collect();
    let hi = samples.iter().cloned().fold(0.0, f64::max);
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup = sym.sup_norm(4096);
    let (_, inf) = sym.min_modulus(4096);
    assert!(sup >= hi - 1e-12 && sup <= hi + 1e-6);
    assert!(inf <= lo + 1e-12 && inf >= lo - 1e-6);
}

mod common;

use common::*;
use proptest::prelude::*;
use toeplitz_dyn::spectral::{
    classify_point, components, fredholm_index, kernel_dims, spectrum_grid, winding_number,
    BoundingBox, CurveWinding, PointClass,
};
use toeplitz_dyn::{LaurentSymbol, C64};

fn curve_distance(sym: &LaurentSymbol, lambda: C64) -> f64 {
    sym.curve_samples(20_000)
        .iter()
        .map(|w| (w - lambda).norm())
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn winding_matches_fine_partition(sym in symbol(4), lambda in complex(4.0)) {
        prop_assume!(curve_distance(&sym, lambda) > 1e-2 * sym.l1_norm());
        let w = winding_number(&sym, lambda).unwrap();
        prop_assert_eq!(w.value, brute_winding(&sym, lambda, 200_000));
        prop_assert!(w.min_curve_distance > 0.0);
    }

    #[test]
    fn screened_winding_agrees_with_certified_walk(sym in symbol(5), lambda in complex(4.0)) {
        let curve = CurveWinding::with_base(&sym, 32);
        match curve.winding(lambda) {
            Ok(w) => prop_assert_eq!(curve.screened_winding(lambda).unwrap(), w.value),
            Err(_) => prop_assert!(curve.screened_winding(lambda).is_err()),
        }
    }

    #[test]
    fn winding_is_translation_invariant(sym in symbol(3), lambda in complex(3.0), shift in complex(5.0)) {
        prop_assume!(curve_distance(&sym, lambda) > 1e-3 * sym.l1_norm());
        let moved = LaurentSymbol::new(sym.terms().chain([(0, shift)]));
        let a = winding_number(&sym, lambda).unwrap().value;
        let b = winding_number(&moved, lambda + shift).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn coburn_and_index(sym in symbol(3), lambda in complex(3.0)) {
        prop_assume!(curve_distance(&sym, lambda) > 1e-3 * sym.l1_norm());
        let (ker, coker) = kernel_dims(&sym, lambda).unwrap();
        prop_assert!(ker == 0 || coker == 0);
        let index = fredholm_index(&sym, lambda).unwrap();
        prop_assert_eq!(index, ker as i64 - coker as i64);
        prop_assert_eq!(classify_point(&sym, lambda).in_spectrum(), index != 0);
    }

    #[test]
    fn tridiagonal_winding_follows_the_ellipse(tri in admissible_tri(), w in complex(6.0), swap in any::<bool>()) {
        let tri = if swap {
            toeplitz_dyn::TridiagonalSymbol::new(tri.c, tri.b, tri.a)
        } else {
            tri
        };
        let w = tri.b + w;
        let g = tri.ellipse().unwrap().level(w);
        prop_assume!((g - 1.0).abs() > 1e-6);
        let value = winding_number(&tri.to_laurent(), w).unwrap().value;
        let inside_sign = if tri.c.norm() > tri.a.norm() { 1 } else { -1 };
        prop_assert_eq!(value, if g < 1.0 { inside_sign } else { 0 });
    }
}

#[test]
fn monomial_windings() {
    for k in -3..=3 {
        let sym = LaurentSymbol::monomial(k, c(1.0, 0.0));
        let result = winding_number(&sym, c(0.0, 0.0));
        if k == 0 {
            assert_eq!(result.unwrap().value, 0);
        } else {
            assert_eq!(result.unwrap().value, k as i64);
        }
    }
}

#[test]
fn grid_cells_agree_with_pointwise_classification() {
    let sym = LaurentSymbol::new([(-2, c(1.0, 0.2)), (0, c(0.3, 0.0)), (1, c(0.7, 0.0))]);
    let bounds = BoundingBox::around_curve(&sym, 0.1);
    let grid = spectrum_grid(&sym, bounds, 40, 32).unwrap();
    for iy in 0..32 {
        for ix in 0..40 {
            assert_eq!(grid.cell(ix, iy), classify_point(&sym, grid.center(ix, iy)));
        }
    }
    let report = components(&grid);
    let total: usize = report.components.iter().map(|c| c.cell_count).sum();
    let spectral = grid
        .cells
        .iter()
        .filter(|c| matches!(c, PointClass::Spectrum { .. }))
        .count();
    assert_eq!(total, spectral);
    for comp in &report.components {
        assert_eq!(
            classify_point(&sym, comp.representative).winding(),
            comp.winding
        );
    }
}

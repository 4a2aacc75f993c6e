mod common;

use common::*;
use proptest::prelude::*;
use toeplitz_dyn::dynamics::{
    gs_witness, hyponormal_growth_check, orbit, EigenComponent, GrowthPattern,
};
use toeplitz_dyn::eigensystem::{antianalytic_eigen, residual, tridiagonal_eigenvector};
use toeplitz_dyn::{CoeffVector, LaurentSymbol, TridiagonalSymbol, TruncatedToeplitz, C64};

fn annulus_point(tri: &TridiagonalSymbol, s: f64, t: f64) -> C64 {
    C64::from_polar((tri.a.norm() / tri.c.norm()).powf(s), t)
}

fn log_ratio(values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (i as f64, v.ln()))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (num / den).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigenvector_satisfies_recurrence_and_decays(
        tri in admissible_tri(),
        s in 0.02..0.98f64,
        t in 0.0..std::f64::consts::TAU,
    ) {
        let z0 = annulus_point(&tri, s, t);
        let pair = tridiagonal_eigenvector(&tri, z0, 256).unwrap();
        let f = pair.vector.as_slice();
        let shifted = tri.b - pair.eigenvalue;
        for k in 0..255 {
            let prev = if k == 0 { C64::new(0.0, 0.0) } else { f[k - 1] };
            let terms = [tri.a * f[k + 1], shifted * f[k], tri.c * prev];
            let size = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let sum: C64 = terms.iter().sum();
            prop_assert!(sum.norm() <= 1e-12 * size.max(f64::MIN_POSITIVE), "k = {k}");
        }
        let t_op = TruncatedToeplitz::new(tri.to_laurent(), 256).unwrap();
        prop_assert!(residual(&t_op, &pair).unwrap() <= 1e-9);

        let partner = tri.a / (tri.c * z0);
        let rho = z0.norm().min(partner.norm());
        let gap = (z0 - partner).norm();
        prop_assume!(gap > 1e-6);
        for (k, v) in f.iter().enumerate().step_by(16) {
            let bound = 2.0 / gap * rho.powi(-(k as i32 + 1));
            prop_assert!(v.norm() <= bound * (1.0 + 1e-9), "k = {k}");
        }
    }

    #[test]
    fn witness_is_exact_and_decays(w_small in 0.05..0.45f64, w_large in 0.55..0.95f64, lam in 1.1..3.0f64) {
        let n = 512;
        let sym = LaurentSymbol::monomial(-1, C64::new(lam, 0.0));
        let t = TruncatedToeplitz::new(sym.clone(), n).unwrap();
        let mk = |w: f64| {
            let p = antianalytic_eigen(&sym, C64::new(w, 0.0), n).unwrap();
            EigenComponent::new(p.eigenvalue, p.vector, C64::new(1.0, 0.0))
        };
        let small = mk(w_small);
        let large = mk(w_large);
        prop_assume!(small.eigenvalue.norm() < 0.95 && large.eigenvalue.norm() > 1.05);
        let report = gs_witness(&t, std::slice::from_ref(&small), std::slice::from_ref(&large), 30).unwrap();
        prop_assert!(report.exactness <= 1e-10);
        let approach: Vec<f64> = report.steps[4..]
            .iter()
            .map(|s| s.approach)
            .take_while(|&a| a > 1e-9)
            .collect();
        let u: Vec<f64> = report.steps[4..].iter().map(|s| s.norm_u_n).collect();
        prop_assume!(approach.len() >= 4);
        prop_assert!((log_ratio(&approach) / small.eigenvalue.norm() - 1.0).abs() <= 1e-3);
        prop_assert!((log_ratio(&u) - 1.0 / large.eigenvalue.norm()).abs() <= 1e-6);
    }

    #[test]
    fn contractive_orbits_do_not_grow(sym in symbol(3), start in 0usize..16) {
        let sup = sym.sup_norm(4096);
        let scaled = LaurentSymbol::new(sym.terms().map(|(k, a)| (k, a / sup)));
        let t = TruncatedToeplitz::new(scaled, 64).unwrap();
        let trace = orbit(&t, &CoeffVector::basis(64, start), 20).unwrap();
        for (k, pair) in trace.norms.windows(2).enumerate() {
            if trace.margins[k + 1] > 0 {
                prop_assert!(pair[1] <= pair[0] * (1.0 + 1e-9), "step {k}");
            }
        }
    }

    #[test]
    fn hyponormal_inequality_on_random_vectors(
        a in complex(2.0),
        b in complex(2.0),
        c in modulus_range(0.1, 3.0),
        coeffs in prop::collection::vec(complex(1.0), 1..20),
    ) {
        prop_assume!(c.norm() >= a.norm());
        let mut x = coeffs;
        x.resize(64, C64::new(0.0, 0.0));
        let report = hyponormal_growth_check(&TridiagonalSymbol::new(a, b, c), &CoeffVector::from_vec(x), 12).unwrap();
        prop_assert!(report.inequality_holds, "worst ratio {}", report.worst_ratio);
        prop_assert_ne!(report.pattern, GrowthPattern::Irregular);
    }
}

#[test]
fn rolewicz_growth_is_exact() {
    for lam in [1.5, 2.0, 3.0] {
        let t =
            TruncatedToeplitz::new(LaurentSymbol::monomial(-1, C64::new(lam, 0.0)), 32).unwrap();
        let m = 7;
        let trace = orbit(&t, &CoeffVector::basis(32, m), 10).unwrap();
        for (k, norm) in trace.norms.iter().enumerate() {
            let expected = if k <= m { lam.powi(k as i32) } else { 0.0 };
            assert_eq!(*norm, expected, "k = {k}");
        }
    }
}

#[test]
fn orbit_snapshots_replay() {
    let sym = LaurentSymbol::new([(-1, c(0.7, 0.2)), (0, c(0.1, 0.0)), (2, c(0.0, 0.4))]);
    let t = TruncatedToeplitz::new(sym, 40).unwrap();
    let x = CoeffVector::basis(40, 3);
    let trace = toeplitz_dyn::dynamics::orbit_with_snapshots(&t, &x, 9, 3).unwrap();
    let mut current = x;
    for k in 0..=9 {
        if let Some(snap) = trace.snapshots.get(&k) {
            assert_eq!(snap, &current);
        }
        assert_eq!(trace.norms[k], current.norm());
        current = t.apply(&current).unwrap();
    }
}

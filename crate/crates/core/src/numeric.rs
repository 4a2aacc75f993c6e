//! Small one-dimensional minimisers shared by the symbol and classifier code.

use std::f64::consts::TAU;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > x_tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Global minimum of a smooth `2π`-periodic function: uniform grid of `grid`
/// samples, then golden-section refinement inside the bracket of every
/// strict grid-local minimum. Returns `(θ, f(θ))` with `θ ∈ [0, 2π)`.
pub(crate) fn minimize_periodic<F: Fn(f64) -> f64>(f: &F, grid: usize, x_tol: f64) -> (f64, f64) {
    let grid = grid.max(3);
    let h = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|k| f(k as f64 * h)).collect();
    let mut best = (0.0, values[0]);
    for (k, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (k as f64 * h, v);
        }
    }
    for k in 0..grid {
        let prev = values[(k + grid - 1) % grid];
        let next = values[(k + 1) % grid];
        let v = values[k];
        let is_local_min = v <= prev && v <= next && (v < prev || v < next);
        if !is_local_min {
            continue;
        }
        let centre = k as f64 * h;
        let (x, fx) = golden_section_min(f, centre - h, centre + h, x_tol);
        if fx < best.1 {
            best = (x.rem_euclid(TAU), fx);
        }
    }
    best
}

/// Global maximum counterpart of [`minimize_periodic`].
pub(crate) fn maximize_periodic<F: Fn(f64) -> f64>(f: &F, grid: usize, x_tol: f64) -> (f64, f64) {
    let (x, v) = minimize_periodic(&|t| -f(t), grid, x_tol);
    (x, -v)
}

#![allow(dead_code)]

use proptest::prelude::*;
use toeplitz_dyn::{LaurentSymbol, TridiagonalSymbol, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn complex(max_modulus: f64) -> impl Strategy<Value = C64> {
    (0.0..max_modulus, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

pub fn modulus_range(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo..hi, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

/// Non-zero symbol supported in `[-band, band]`.
pub fn symbol(band: i32) -> impl Strategy<Value = LaurentSymbol> {
    prop::collection::vec((-band..=band, complex(3.0)), 1..6)
        .prop_map(LaurentSymbol::new)
        .prop_filter("non-zero", |s| !s.is_zero())
}

/// `(a, b, c)` with `|a| > |c| > 0`, moduli in `[0.1, 5]`.
pub fn admissible_tri() -> impl Strategy<Value = TridiagonalSymbol> {
    (
        modulus_range(0.1, 5.0),
        complex(3.0),
        modulus_range(0.1, 5.0),
    )
        .prop_filter("|a| > |c| with a gap", |(a, _, c)| {
            a.norm() > 1.05 * c.norm()
        })
        .prop_map(|(a, b, c)| TridiagonalSymbol::new(a, b, c))
}

/// Dense `n × n` finite section built entry by entry from the coefficients.
pub fn dense(sym: &LaurentSymbol, n: usize) -> Vec<Vec<C64>> {
    (0..n)
        .map(|j| (0..n).map(|k| sym.coeff(j as i32 - k as i32)).collect())
        .collect()
}

pub fn dense_apply(m: &[Vec<C64>], x: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Winding number by summing principal argument increments over a very
/// fine uniform partition.
pub fn brute_winding(sym: &LaurentSymbol, lambda: C64, steps: usize) -> i64 {
    let mut total = 0.0;
    let mut prev = sym.eval(0.0) - lambda;
    for k in 1..=steps {
        let t = std::f64::consts::TAU * k as f64 / steps as f64;
        let cur = sym.eval(t) - lambda;
        total += (cur / prev).arg();
        prev = cur;
    }
    (total / std::f64::consts::TAU).round() as i64
}

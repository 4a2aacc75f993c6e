//! Closed-form eigenvectors of anti-analytic and tridiagonal Toeplitz
//! operators, and their residuals against finite sections.

use serde::Serialize;

use crate::operator::{kernel_vector, CoeffVector, TruncatedToeplitz};
use crate::symbol::{LaurentSymbol, TridiagonalSymbol};
use crate::{Error, Result, C64};

/// Relative distance `|z0² - a/c| / |a/c|` below which the two poles of the
/// tridiagonal eigenvector are treated as one.
pub const DOUBLE_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EigenParam {
    /// Reproducing kernel `k_λ`.
    Kernel { lambda: C64 },
    /// `1/((z - z0)(z - a/(c z0)))`.
    Annulus { z0: C64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub eigenvalue: C64,
    pub vector: CoeffVector,
    pub param: EigenParam,
    pub residual: Option<f64>,
}

impl EigenPair {
    /// Fills `residual` against `t` and returns it.
    pub fn verify(&mut self, t: &TruncatedToeplitz) -> Result<f64> {
        let r = residual(t, self)?;
        self.residual = Some(r);
        Ok(r)
    }
}

/// `T_F k_λ = conj(φ(λ)) k_λ` for `F = conj(φ)` with `φ` analytic.
pub fn antianalytic_eigen(sym: &LaurentSymbol, lambda: C64, n: usize) -> Result<EigenPair> {
    if !sym.is_anti_analytic() {
        return Err(Error::Precondition(
            "kernel eigenvectors need an anti-analytic symbol".into(),
        ));
    }
    let vector = kernel_vector(lambda, n)?;
    let phi = sym.conjugate();
    Ok(EigenPair {
        eigenvalue: phi.eval_at(lambda).conj(),
        vector,
        param: EigenParam::Kernel { lambda },
        residual: None,
    })
}

/// Taylor coefficients of `1/((z - z0)(z - a/(c z0)))`, an eigenvector of
/// `T_F` for `F = a/z + b + cz` with eigenvalue `F(z0)`.
pub fn tridiagonal_eigenvector(tri: &TridiagonalSymbol, z0: C64, n: usize) -> Result<EigenPair> {
    let (ma, mc) = (tri.a.norm(), tri.c.norm());
    if !(ma > mc && mc > 0.0) {
        return Err(Error::Precondition(format!(
            "tridiagonal eigenvectors need |a| > |c| > 0 (|a| = {ma}, |c| = {mc})"
        )));
    }
    let outer = ma / mc;
    let r = z0.norm();
    if !(r > 1.0 && r < outer) {
        return Err(Error::OutOfAnnulus { z0, outer });
    }
    let ratio = tri.a / tri.c;
    let mut entries = Vec::with_capacity(n);
    if (z0 * z0 - ratio).norm() <= DOUBLE_ROOT_TOL * ratio.norm() {
        // 1/(z - z0)² = Σ (k+1) z^k / z0^{k+2}
        let inv = 1.0 / z0;
        let mut power = inv * inv;
        for k in 0..n {
            entries.push((k as f64 + 1.0) * power);
            power *= inv;
        }
    } else {
        let partner = ratio / z0;
        let scale = 1.0 / (z0 - partner);
        let (p, q) = (1.0 / z0, 1.0 / partner);
        let (mut pk, mut qk) = (p, q);
        for _ in 0..n {
            entries.push(scale * (qk - pk));
            pk *= p;
            qk *= q;
        }
    }
    Ok(EigenPair {
        eigenvalue: tri.eval_at(z0),
        vector: CoeffVector::from_vec(entries),
        param: EigenParam::Annulus { z0 },
        residual: None,
    })
}

/// `‖((T - μ)v)|rows 0..n-M‖ / ‖v‖`, where `M` is the number of
/// super-diagonals: only the last `M` rows of a finite section lose terms.
pub fn interior_residual(t: &TruncatedToeplitz, eigenvalue: C64, v: &CoeffVector) -> Result<f64> {
    let tv = t.apply(v)?;
    let keep = t.dim().saturating_sub(t.bandwidth().0);
    let num: f64 = (0..keep)
        .map(|j| (tv[j] - eigenvalue * v[j]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den = v.norm();
    if den == 0.0 {
        return Err(Error::Precondition("eigenvector is zero".into()));
    }
    Ok(num / den)
}

/// Interior residual of `pair` for tridiagonal or anti-analytic sections.
pub fn residual(t: &TruncatedToeplitz, pair: &EigenPair) -> Result<f64> {
    let (m, n) = t.bandwidth();
    if !((m <= 1 && n <= 1) || n == 0) {
        return Err(Error::Precondition(format!(
            "residual is defined for tridiagonal or anti-analytic bands, got ({m}, {n})"
        )));
    }
    interior_residual(t, pair.eigenvalue, &pair.vector)
}

/// Canonical `z0` with `F(z0) = μ` and `1 < |z0| ≤ sqrt|a/c|`.
pub fn inverse_eigen_param(tri: &TridiagonalSymbol, mu: C64) -> Result<C64> {
    Ok(tri.annulus_param_solve(mu)?.point())
}

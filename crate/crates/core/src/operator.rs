//! Finite sections of Toeplitz operators and Hardy-space numerics.
//!
//! A vector of length `n` holds the first `n` Taylor coefficients of some
//! `f ∈ H²`. [`TruncatedToeplitz`] is the compression `P_n T_F P_n`, applied
//! matrix-free along the band of the symbol.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::ops::{Index, IndexMut};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::symbol::{LaurentSymbol, TridiagonalSymbol};
use crate::{Error, Result, C64};

/// Seed of the start vector used by [`operator_norm_estimate`].
pub const NORM_SEED: u64 = 42;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Truncated Taylor coefficient vector of an element of `H²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVector(Vec<C64>);

impl CoeffVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); n])
    }

    /// Canonical basis vector `e_k` of length `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_vec(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Index of the last non-zero entry.
    pub fn support_top(&self) -> Option<usize> {
        self.0.iter().rposition(|c| *c != C64::new(0.0, 0.0))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    /// `self += alpha · x`.
    pub fn axpy(&mut self, alpha: C64, x: &CoeffVector) -> Result<()> {
        check_len(self.len(), x.len())?;
        for (y, xi) in self.0.iter_mut().zip(&x.0) {
            *y += alpha * xi;
        }
        Ok(())
    }

    pub fn sub(&self, other: &CoeffVector) -> Result<CoeffVector> {
        let mut out = self.clone();
        out.axpy(C64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    /// Rows `index,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,re,im")?;
        for (k, c) in self.0.iter().enumerate() {
            writeln!(out, "{k},{},{}", c.re, c.im)?;
        }
        Ok(())
    }
}

impl Index<usize> for CoeffVector {
    type Output = C64;

    fn index(&self, k: usize) -> &C64 {
        &self.0[k]
    }
}

impl IndexMut<usize> for CoeffVector {
    fn index_mut(&mut self, k: usize) -> &mut C64 {
        &mut self.0[k]
    }
}

/// Finitely supported Fourier coefficients of an element of `L²(T)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BilateralCoeffVector(pub BTreeMap<i64, C64>);

impl BilateralCoeffVector {
    pub fn new<I: IntoIterator<Item = (i64, C64)>>(entries: I) -> Self {
        Self(entries.into_iter().collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Dense `H²` vector of length `n` from the non-negative modes.
    pub fn to_coeff_vector(&self, n: usize) -> CoeffVector {
        let mut v = CoeffVector::zeros(n);
        for (&k, &c) in self.0.range(0..n as i64) {
            v[k as usize] = c;
        }
        v
    }
}

/// Riesz projection `P₊`: keeps the non-negative Fourier modes.
pub fn riesz_project(x: &BilateralCoeffVector) -> BilateralCoeffVector {
    BilateralCoeffVector(x.0.range(0..).map(|(k, c)| (*k, *c)).collect())
}

/// `⟨f, g⟩ = Σ f_k conj(g_k)`.
pub fn inner_product(f: &CoeffVector, g: &CoeffVector) -> Result<C64> {
    check_len(f.len(), g.len())?;
    Ok(f.iter().zip(g.iter()).map(|(a, b)| a * b.conj()).sum())
}

/// Truncated reproducing kernel `k_λ`, coefficients `conj(λ)^k`.
pub fn kernel_vector(lambda: C64, n: usize) -> Result<CoeffVector> {
    if lambda.norm() >= 1.0 {
        return Err(Error::OutsideDisc { point: lambda });
    }
    let step = lambda.conj();
    let mut entries = Vec::with_capacity(n);
    let mut power = C64::new(1.0, 0.0);
    for _ in 0..n {
        entries.push(power);
        power *= step;
    }
    Ok(CoeffVector(entries))
}

/// Harmonic extension of the symbol into the disc:
/// `Σ_{n≥0} a_n λⁿ + Σ_{n<0} a_n conj(λ)^{|n|}`.
pub fn poisson_transform(sym: &LaurentSymbol, lambda: C64) -> Result<C64> {
    if lambda.norm() >= 1.0 {
        return Err(Error::OutsideDisc { point: lambda });
    }
    Ok(sym
        .terms()
        .map(|(n, a)| {
            if n >= 0 {
                a * lambda.powi(n)
            } else {
                a * lambda.conj().powi(-n)
            }
        })
        .sum())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// The `n × n` section of `T_F`, with entries `(j, k) ↦ a_{j-k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedToeplitz {
    dim: usize,
    symbol: LaurentSymbol,
}

impl TruncatedToeplitz {
    pub fn new(symbol: LaurentSymbol, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition(
                "operator dimension must be at least 1".into(),
            ));
        }
        Ok(Self { dim, symbol })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbol(&self) -> &LaurentSymbol {
        &self.symbol
    }

    /// `(M, N)`: number of super- and sub-diagonals.
    pub fn bandwidth(&self) -> (usize, usize) {
        (self.symbol.anti_degree(), self.symbol.degree())
    }

    pub fn entry(&self, j: usize, k: usize) -> C64 {
        let d = j as i64 - k as i64;
        if d < i32::MIN as i64 || d > i32::MAX as i64 {
            return C64::new(0.0, 0.0);
        }
        self.symbol.coeff(d as i32)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            symbol: self.symbol.conjugate(),
        }
    }

    /// `y_j = Σ_k a_{j-k} x_k`, `O(n · bandwidth)`.
    pub fn apply(&self, x: &CoeffVector) -> Result<CoeffVector> {
        check_len(self.dim, x.len())?;
        Ok(banded_apply(&self.symbol, x))
    }

    pub fn apply_adjoint(&self, x: &CoeffVector) -> Result<CoeffVector> {
        check_len(self.dim, x.len())?;
        Ok(banded_apply(&self.symbol.conjugate(), x))
    }
}

fn banded_apply(symbol: &LaurentSymbol, x: &CoeffVector) -> CoeffVector {
    let n = x.len() as i64;
    let mut y = CoeffVector::zeros(x.len());
    for (d, a) in symbol.terms() {
        let d = d as i64;
        let (lo, hi) = (d.max(0), n.min(n + d));
        for j in lo..hi {
            y.0[j as usize] += a * x.0[(j - d) as usize];
        }
    }
    y
}

/// `‖T‖` by power iteration on `T*T` from a seeded random start.
///
/// Stops once the Rayleigh quotient changes by at most `tol` (relative)
/// between consecutive iterations. The Rayleigh quotient never exceeds the
/// top eigenvalue, so the estimate approaches `‖T_n‖` from below.
pub fn operator_norm_estimate(t: &TruncatedToeplitz, tol: f64, max_iter: usize) -> Result<f64> {
    operator_norm_estimate_seeded(t, tol, max_iter, NORM_SEED)
}

pub fn operator_norm_estimate_seeded(
    t: &TruncatedToeplitz,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<C64> = (0..t.dim())
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let mut v = CoeffVector(start);
    let n0 = v.norm();
    v = v.scaled(C64::new(1.0 / n0, 0.0));

    let adjoint = t.adjoint();
    let mut previous = f64::NEG_INFINITY;
    for _ in 0..max_iter {
        let w = banded_apply(adjoint.symbol(), &banded_apply(t.symbol(), &v));
        let rayleigh = inner_product(&w, &v)?.re;
        let w_norm = w.norm();
        if w_norm == 0.0 {
            return Ok(0.0);
        }
        if (rayleigh - previous).abs() <= tol * rayleigh {
            return Ok(rayleigh.max(0.0).sqrt());
        }
        previous = rayleigh;
        v = w.scaled(C64::new(1.0 / w_norm, 0.0));
    }
    Err(Error::NoConvergence {
        what: "power iteration",
        iterations: max_iter,
        estimate: previous.max(0.0).sqrt(),
    })
}

/// `‖(T*T - TT*)x - (|c|² - |a|²)(I - SS*)x‖` for a tridiagonal section.
///
/// `x` must vanish at index `n - 1`; beyond that the finite section no
/// longer reproduces the commutator of the infinite operator.
pub fn commutator_defect(tri: &TridiagonalSymbol, n: usize, x: &CoeffVector) -> Result<f64> {
    check_len(n, x.len())?;
    if n < 2 {
        return Err(Error::Precondition("commutator needs n >= 2".into()));
    }
    if let Some(top) = x.support_top() {
        if top > n - 2 {
            return Err(Error::SupportOverflow { top, limit: n - 2 });
        }
    }
    let t = TruncatedToeplitz::new(tri.to_laurent(), n)?;
    let tt = t.apply_adjoint(&t.apply(x)?)?;
    let ttc = t.apply(&t.apply_adjoint(x)?)?;
    let mut defect = tt.sub(&ttc)?;
    let weight = tri.c.norm_sqr() - tri.a.norm_sqr();
    // (I - SS*) keeps only the constant term.
    defect[0] -= weight * x[0];
    Ok(defect.norm())
}

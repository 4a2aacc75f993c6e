//! Trigonometric-polynomial symbols and the ellipse geometry of tridiagonal
//! symbols `F(z) = a/z + b + cz`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::numeric::{maximize_periodic, minimize_periodic};
use crate::{Error, Result, C64};

/// Default width of the tolerance band around strict inequalities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coarse grid used when minimising the ellipse level function on the circle.
pub const CIRCLE_GRID: usize = 4096;

pub(crate) const THETA_TOL: f64 = 1e-12;

/// A symbol with finitely many non-zero Fourier coefficients,
/// `F(e^{iθ}) = Σ a_n e^{inθ}` for `n ∈ [-M, N]`.
///
/// The representation is trimmed: unless the symbol is zero, the extreme
/// stored coefficients are non-zero. Zero means exactly `0.0`; there is no
/// tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SymbolRepr", try_from = "SymbolRepr")]
pub struct LaurentSymbol {
    lowest: i32,
    coeffs: Vec<C64>,
}

impl LaurentSymbol {
    /// Builds a symbol from `(index, coefficient)` pairs. Repeated indices are
    /// summed.
    pub fn new<I: IntoIterator<Item = (i32, C64)>>(terms: I) -> Self {
        let terms: Vec<(i32, C64)> = terms.into_iter().collect();
        let (Some(lo), Some(hi)) = (
            terms.iter().map(|t| t.0).min(),
            terms.iter().map(|t| t.0).max(),
        ) else {
            return Self::zero();
        };
        let mut coeffs = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (n, a) in terms {
            coeffs[(n - lo) as usize] += a;
        }
        Self::trimmed(lo, coeffs)
    }

    fn trimmed(mut lowest: i32, mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        let lead = coeffs
            .iter()
            .take_while(|c| **c == C64::new(0.0, 0.0))
            .count();
        coeffs.drain(..lead);
        lowest += lead as i32;
        if coeffs.is_empty() {
            lowest = 0;
        }
        Self { lowest, coeffs }
    }

    pub fn zero() -> Self {
        Self {
            lowest: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(value: C64) -> Self {
        Self::new([(0, value)])
    }

    pub fn monomial(n: i32, value: C64) -> Self {
        Self::new([(n, value)])
    }

    pub fn coeff(&self, n: i32) -> C64 {
        let idx = n - self.lowest;
        if idx < 0 {
            return C64::new(0.0, 0.0);
        }
        self.coeffs
            .get(idx as usize)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// Non-zero `(n, a_n)` pairs in increasing order of `n`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C64::new(0.0, 0.0))
            .map(move |(j, c)| (self.lowest + j as i32, *c))
    }

    /// Smallest stored index (0 for the zero symbol).
    pub fn lowest_index(&self) -> i32 {
        self.lowest
    }

    /// Largest stored index (0 for the zero symbol).
    pub fn highest_index(&self) -> i32 {
        if self.coeffs.is_empty() {
            0
        } else {
            self.lowest + self.coeffs.len() as i32 - 1
        }
    }

    /// `M`: the number of sub-zero frequencies spanned (`max(0, -lowest)`).
    pub fn anti_degree(&self) -> usize {
        (-self.lowest).max(0) as usize
    }

    /// `N`: the highest positive frequency (`max(0, highest)`).
    pub fn degree(&self) -> usize {
        self.highest_index().max(0) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_analytic(&self) -> bool {
        self.anti_degree() == 0
    }

    pub fn is_anti_analytic(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_constant(&self) -> bool {
        self.is_analytic() && self.is_anti_analytic()
    }

    /// `F(e^{iθ})` by direct Fourier summation.
    pub fn eval(&self, theta: f64) -> C64 {
        self.terms().fold(C64::new(0.0, 0.0), |acc, (n, a)| {
            acc + a * C64::from_polar(1.0, n as f64 * theta)
        })
    }

    /// The Laurent polynomial `Σ a_n zⁿ` at a non-zero complex point.
    pub fn eval_at(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc * z.powi(self.lowest)
    }

    /// Symbol of the adjoint operator: coefficient `n` becomes `conj(a_{-n})`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.terms().map(|(n, a)| (-n, a.conj())))
    }

    /// `F - λ`.
    pub fn shifted(&self, lambda: C64) -> Self {
        Self::new(self.terms().chain([(0, -lambda)]))
    }

    /// `Σ |a_n|`, an upper bound for `‖F‖∞`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Bernstein bound `Σ |n a_n|` for `|dF/dθ|`.
    pub fn derivative_bound(&self) -> f64 {
        self.terms().map(|(n, a)| (n as f64).abs() * a.norm()).sum()
    }

    /// `max_θ |F(e^{iθ})|` from a uniform grid with golden-section refinement
    /// of every grid-local maximum. `grid_size` is clamped to at least 16.
    pub fn sup_norm(&self, grid_size: usize) -> f64 {
        if self.is_constant() {
            return self.coeff(0).norm();
        }
        maximize_periodic(&|t| self.eval(t).norm(), grid_size.max(16), THETA_TOL).1
    }

    /// `(θ*, min_θ |F(e^{iθ})|)`.
    pub fn min_modulus(&self, grid_size: usize) -> (f64, f64) {
        if self.is_constant() {
            return (0.0, self.coeff(0).norm());
        }
        minimize_periodic(&|t| self.eval(t).norm(), grid_size.max(16), THETA_TOL)
    }

    /// `F(e^{2πik/count})` for `k = 0..count`.
    pub fn curve_samples(&self, count: usize) -> Vec<C64> {
        (0..count)
            .map(|k| self.eval(TAU * k as f64 / count as f64))
            .collect()
    }

    /// Axis-aligned bounding box `(re_min, re_max, im_min, im_max)` of the
    /// sampled curve.
    pub fn curve_bounds(&self, samples: usize) -> (f64, f64, f64, f64) {
        self.curve_samples(samples.max(16)).iter().fold(
            (
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
            ),
            |(x0, x1, y0, y1), w| (x0.min(w.re), x1.max(w.re), y0.min(w.im), y1.max(w.im)),
        )
    }

    /// `Some` when the support is contained in `{-1, 0, 1}`.
    pub fn as_tridiagonal(&self) -> Option<TridiagonalSymbol> {
        if self.lowest_index() < -1 || self.highest_index() > 1 {
            return None;
        }
        Some(TridiagonalSymbol::new(
            self.coeff(-1),
            self.coeff(0),
            self.coeff(1),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    coeffs: Vec<CoeffEntry>,
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    n: i32,
    re: f64,
    im: f64,
}

impl From<LaurentSymbol> for SymbolRepr {
    fn from(sym: LaurentSymbol) -> Self {
        SymbolRepr {
            coeffs: sym
                .terms()
                .map(|(n, a)| CoeffEntry {
                    n,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<SymbolRepr> for LaurentSymbol {
    type Error = Error;

    fn try_from(repr: SymbolRepr) -> Result<Self> {
        if let Some(bad) = repr
            .coeffs
            .iter()
            .find(|e| !e.re.is_finite() || !e.im.is_finite())
        {
            return Err(Error::InvalidSymbol(format!(
                "coefficient {} is not finite",
                bad.n
            )));
        }
        Ok(LaurentSymbol::new(
            repr.coeffs.into_iter().map(|e| (e.n, C64::new(e.re, e.im))),
        ))
    }
}

/// `F(e^{iθ}) = a e^{-iθ} + b + c e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalSymbol {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

/// Geometry of the curve `F(T)` for a tridiagonal symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseGeometry {
    pub center: C64,
    /// Direction of the major axis, `(arg a + arg c) / 2`.
    pub rotation: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub foci: [C64; 2],
}

impl EllipseGeometry {
    /// Normalised quadratic form: `< 1` inside, `= 1` on the curve.
    pub fn level(&self, w: C64) -> f64 {
        let u = (w - self.center) * C64::from_polar(1.0, -self.rotation);
        (u.re / self.semi_major).powi(2) + (u.im / self.semi_minor).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Containment {
    Inside,
    OnCurve,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CircleRelation {
    Intersects,
    Disjoint,
    /// The minimum of the level function on `T` is within the tolerance band
    /// of 1; `theta` is the minimising angle.
    Tangent {
        theta: f64,
    },
}

/// Solution `z = r0 e^{iθ}` of `F(z) = w` on the inner branch of the annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusParam {
    pub r0: f64,
    pub theta: f64,
}

impl AnnulusParam {
    pub fn point(&self) -> C64 {
        C64::from_polar(self.r0, self.theta)
    }
}

impl TridiagonalSymbol {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        Self { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Self::new(C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0))
    }

    pub fn to_laurent(&self) -> LaurentSymbol {
        LaurentSymbol::new([(-1, self.a), (0, self.b), (1, self.c)])
    }

    pub fn eval(&self, theta: f64) -> C64 {
        self.a * C64::from_polar(1.0, -theta) + self.b + self.c * C64::from_polar(1.0, theta)
    }

    /// `a/z + b + cz` at a non-zero complex point.
    pub fn eval_at(&self, z: C64) -> C64 {
        self.a / z + self.b + self.c * z
    }

    /// `|a| + |b| + |c|`.
    pub fn scale(&self) -> f64 {
        self.a.norm() + self.b.norm() + self.c.norm()
    }

    /// Arguments `(α, γ)` of `a` and `c`; a zero coefficient borrows the
    /// argument of the other one.
    fn phases(&self) -> (f64, f64) {
        let alpha = if self.a.norm() > 0.0 {
            self.a.arg()
        } else {
            self.c.arg()
        };
        let gamma = if self.c.norm() > 0.0 {
            self.c.arg()
        } else {
            alpha
        };
        (alpha, gamma)
    }

    pub fn ellipse(&self) -> Result<EllipseGeometry> {
        let (ma, mc) = (self.a.norm(), self.c.norm());
        let gap = (ma - mc).abs();
        if gap <= 1e-12 * (ma + mc) || ma + mc == 0.0 {
            return Err(Error::DegenerateEllipse { gap });
        }
        let (alpha, gamma) = self.phases();
        let rotation = 0.5 * (alpha + gamma);
        let focal = 2.0 * (ma * mc).sqrt();
        let axis = C64::from_polar(1.0, rotation);
        Ok(EllipseGeometry {
            center: self.b,
            rotation,
            semi_major: ma + mc,
            semi_minor: gap,
            foci: [self.b - axis * focal, self.b + axis * focal],
        })
    }

    pub fn ellipse_contains(&self, w: C64, tol: f64) -> Result<Containment> {
        let g = self.ellipse()?.level(w);
        Ok(if g < 1.0 - tol {
            Containment::Inside
        } else if (g - 1.0).abs() <= tol {
            Containment::OnCurve
        } else {
            Containment::Outside
        })
    }

    /// `(θ*, m)` with `m = min_θ g(e^{iθ})`, the smallest level of the unit
    /// circle with respect to the ellipse.
    pub fn circle_level_minimum(&self) -> Result<(f64, f64)> {
        let geom = self.ellipse()?;
        Ok(minimize_periodic(
            &|t| geom.level(C64::from_polar(1.0, t)),
            CIRCLE_GRID,
            THETA_TOL,
        ))
    }

    /// Whether the open interior of the ellipse `F(T)` meets the unit circle.
    pub fn ellipse_intersects_unit_circle(&self, tol: f64) -> Result<CircleRelation> {
        let (theta, m) = self.circle_level_minimum()?;
        Ok(if m < 1.0 - tol {
            CircleRelation::Intersects
        } else if m > 1.0 + tol {
            CircleRelation::Disjoint
        } else {
            CircleRelation::Tangent { theta }
        })
    }

    /// Solves `F(r0 e^{iθ}) = w` for `w` inside the ellipse with
    /// `1 < r0 ≤ sqrt|a/c|`.
    ///
    /// Works in the frame where `b = 0` and `a > c > 0`: the level function
    /// `φ₁(r) = x²/(a/r + cr)² + y²/(cr - a/r)²` is increasing on
    /// `(1, sqrt(a/c))` with `φ₁(1) = g(w) < 1`, so its crossing of 1 is found
    /// by bisection and the angle is read off the two coordinate equations.
    /// Points on the focal segment are reached exactly at `r0 = sqrt(a/c)`,
    /// where both `±θ` solve; the one with the smaller angle in `[0, 2π)` is
    /// returned.
    pub fn annulus_param_solve(&self, w: C64) -> Result<AnnulusParam> {
        let (ma, mc) = (self.a.norm(), self.c.norm());
        if !(ma > mc && mc > 0.0) {
            return Err(Error::Precondition(format!(
                "annulus parametrisation needs |a| > |c| > 0 (|a| = {ma}, |c| = {mc})"
            )));
        }
        let geom = self.ellipse()?;
        let level = geom.level(w);
        if self.ellipse_contains(w, DEFAULT_TOL)? != Containment::Inside {
            return Err(Error::NotInInterior { point: w, level });
        }

        let (alpha, gamma) = self.phases();
        let shift = 0.5 * (gamma - alpha);
        let u = (w - self.b) * C64::from_polar(1.0, -geom.rotation);
        let (x, y) = (u.re, u.im);
        let top = (ma / mc).sqrt();
        let focal = 2.0 * (ma * mc).sqrt();

        let candidates: Vec<(f64, f64)> = if y == 0.0 && x.abs() <= focal {
            let t = (x / focal).clamp(-1.0, 1.0).acos();
            vec![(top, t), (top, -t)]
        } else {
            let phi1 = |r: f64| {
                let p = ma / r + mc * r;
                let q = mc * r - ma / r;
                let y_term = if y == 0.0 { 0.0 } else { (y / q).powi(2) };
                (x / p).powi(2) + y_term
            };
            let (mut lo, mut hi) = (1.0_f64, top);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if phi1(mid) < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            let cos_t = x / (ma / r + mc * r);
            let sin_t = if y == 0.0 { 0.0 } else { y / (mc * r - ma / r) };
            vec![(r, sin_t.atan2(cos_t))]
        };

        let (r0, theta) = candidates
            .into_iter()
            .map(|(r, t)| (r, (t - shift).rem_euclid(TAU)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("at least one candidate");

        let limit = 1e-10 * self.scale();
        let mut z = C64::from_polar(r0, theta);
        let mut err = (self.eval_at(z) - w).norm();
        for _ in 0..8 {
            if err <= limit {
                break;
            }
            let slope = self.c - self.a / (z * z);
            if slope.norm() == 0.0 {
                break;
            }
            let next = z - (self.eval_at(z) - w) / slope;
            let next_err = (self.eval_at(next) - w).norm();
            if next_err >= err {
                break;
            }
            z = next;
            err = next_err;
        }
        if err > limit {
            return Err(Error::NoConvergence {
                what: "annulus parameter bisection",
                iterations: 200,
                estimate: err,
            });
        }
        Ok(AnnulusParam {
            r0: z.norm(),
            theta: z.arg().rem_euclid(TAU),
        })
    }
}

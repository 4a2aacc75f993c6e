//! Hypercyclicity decisions for analytic, anti-analytic and tridiagonal
//! symbols, and independent obstruction checks that apply to any symbol.
//!
//! Every strict inequality of the underlying theorems is evaluated with a
//! tolerance band; a quantity that lands inside the band yields
//! [`VerdictStatus::Indeterminate`] instead of a guess.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::numeric::{golden_section_min, minimize_periodic};
use crate::spectral::{
    components, spectrum_grid, winding_number, BoundingBox, CurveWinding, DEFAULT_MARGIN,
};
use crate::symbol::{CircleRelation, LaurentSymbol, TridiagonalSymbol, CIRCLE_GRID, THETA_TOL};
use crate::C64;

/// Number of half-plane directions scanned by [`obstruction_expansion`].
pub const EXPANSION_GRID: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyOptions {
    /// Width of the band around every strict threshold.
    pub tol: f64,
    /// Probe resolution per axis for [`obstruction_adjoint_eigen`].
    pub probe_grid: usize,
    /// Raster resolution per axis for [`diagnostic_components`].
    pub component_grid: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            probe_grid: 64,
            component_grid: 128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    Hypercyclic,
    NotHypercyclic,
    Indeterminate,
    Unsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    Analytic,
    AntiAnalytic,
    Tridiagonal,
    DiagnosticsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReasonCode {
    /// `|c| ≥ |a|`: the operator is hyponormal.
    Hyponormal,
    /// A half-plane `Re(e^{iθ₀}w) ≥ 1` contains the symbol curve.
    Separation,
    /// The adjoint has an eigenvalue.
    AdjointEigen,
    /// `‖T‖ ≤ 1`.
    Contraction,
    /// The spectrum misses the unit circle.
    SpectrumMissesCircle,
    /// Anti-analytic criterion `φ(D) ∩ T ≠ ∅` with `φ` non-constant.
    GsCondition,
    /// Tridiagonal criterion `|a| > |c|` and `E ∩ T ≠ ∅`.
    ShkarinEllipse,
    /// Scalar operator.
    Constant,
    /// A spectral component does not meet the unit circle.
    ComponentMissesCircle,
}

impl ReasonCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReasonCode::Hyponormal => "HYPONORMAL",
            ReasonCode::Separation => "SEPARATION",
            ReasonCode::AdjointEigen => "ADJOINT_EIGEN",
            ReasonCode::Contraction => "CONTRACTION",
            ReasonCode::SpectrumMissesCircle => "SPECTRUM_MISSES_CIRCLE",
            ReasonCode::GsCondition => "GS_CONDITION",
            ReasonCode::ShkarinEllipse => "SHKARIN_ELLIPSE",
            ReasonCode::Constant => "CONSTANT",
            ReasonCode::ComponentMissesCircle => "COMPONENT_MISSES_CIRCLE",
        }
    }

    /// Codes that, when present as a necessary condition, rule out
    /// hypercyclicity.
    pub fn is_obstruction(&self) -> bool {
        matches!(
            self,
            ReasonCode::Hyponormal
                | ReasonCode::Separation
                | ReasonCode::AdjointEigen
                | ReasonCode::Contraction
                | ReasonCode::SpectrumMissesCircle
                | ReasonCode::Constant
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonKind {
    /// A necessary condition for hypercyclicity fails.
    Necessary,
    /// A sufficient condition for hypercyclicity holds.
    Sufficient,
    /// Informational only.
    Diagnostic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Evidence {
    Real(f64),
    Integer(i64),
    Complex(C64),
    Text(String),
}

impl From<f64> for Evidence {
    fn from(v: f64) -> Self {
        Evidence::Real(v)
    }
}

impl From<i64> for Evidence {
    fn from(v: i64) -> Self {
        Evidence::Integer(v)
    }
}

impl From<usize> for Evidence {
    fn from(v: usize) -> Self {
        Evidence::Integer(v as i64)
    }
}

impl From<C64> for Evidence {
    fn from(v: C64) -> Self {
        Evidence::Complex(v)
    }
}

impl From<&str> for Evidence {
    fn from(v: &str) -> Self {
        Evidence::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reason {
    pub code: ReasonCode,
    pub kind: ReasonKind,
    pub evidence: BTreeMap<String, Evidence>,
}

impl Reason {
    pub fn new(code: ReasonCode, kind: ReasonKind) -> Self {
        Self {
            code,
            kind,
            evidence: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Evidence>) -> Self {
        self.evidence.insert(key.to_owned(), value.into());
        self
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.evidence.get(key)? {
            Evidence::Real(v) => Some(*v),
            Evidence::Integer(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn complex(&self, key: &str) -> Option<C64> {
        match self.evidence.get(key)? {
            Evidence::Complex(v) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub route: Route,
    pub reasons: Vec<Reason>,
    pub tolerances: ClassifyOptions,
}

impl Verdict {
    fn new(status: VerdictStatus, route: Route, opts: &ClassifyOptions) -> Self {
        Self {
            status,
            route,
            reasons: Vec::new(),
            tolerances: *opts,
        }
    }

    fn push(mut self, reason: Reason) -> Self {
        self.reasons.push(reason);
        self
    }

    pub fn reason(&self, code: ReasonCode) -> Option<&Reason> {
        self.reasons.iter().find(|r| r.code == code)
    }

    pub fn has_obstruction(&self) -> bool {
        self.reasons
            .iter()
            .any(|r| r.kind == ReasonKind::Necessary && r.code.is_obstruction())
    }
}

/// Routes `sym` by its support and applies the matching decision procedure.
pub fn classify(sym: &LaurentSymbol, opts: &ClassifyOptions) -> Verdict {
    if sym.degree() == 0 {
        return classify_antianalytic_with(sym, opts);
    }
    if sym.anti_degree() == 0 {
        return classify_analytic_with(sym, opts);
    }
    if let Some(tri) = sym.as_tridiagonal() {
        return classify_tridiagonal(&tri, opts);
    }
    let mut verdict = Verdict::new(VerdictStatus::Unsupported, Route::DiagnosticsOnly, opts);
    verdict.reasons.extend(obstructions(sym, opts));
    verdict
        .reasons
        .extend(diagnostic_components(sym, opts.component_grid));
    verdict
}

/// Runs the four obstruction checks and returns those that fire.
pub fn obstructions(sym: &LaurentSymbol, opts: &ClassifyOptions) -> Vec<Reason> {
    [
        obstruction_contraction(sym, opts.tol),
        obstruction_expansion(sym, opts.tol),
        obstruction_adjoint_eigen(sym, opts.probe_grid),
        obstruction_spectral_circle(sym),
    ]
    .into_iter()
    .flatten()
    .collect()
}

/// Analytic symbols: `T_φ* k_0 = conj(φ(0)) k_0`, so the adjoint always has
/// an eigenvalue.
pub fn classify_analytic(sym: &LaurentSymbol) -> Verdict {
    classify_analytic_with(sym, &ClassifyOptions::default())
}

fn classify_analytic_with(sym: &LaurentSymbol, opts: &ClassifyOptions) -> Verdict {
    Verdict::new(VerdictStatus::NotHypercyclic, Route::Analytic, opts).push(
        Reason::new(ReasonCode::AdjointEigen, ReasonKind::Necessary)
            .with("lambda", C64::new(0.0, 0.0))
            .with("eigenvalue", sym.coeff(0).conj()),
    )
}

/// Anti-analytic symbols `F = conj(φ)`: hypercyclic iff `φ` is non-constant
/// and `φ(D)` meets the unit circle.
pub fn classify_antianalytic(sym: &LaurentSymbol) -> Verdict {
    classify_antianalytic_with(sym, &ClassifyOptions::default())
}

fn classify_antianalytic_with(sym: &LaurentSymbol, opts: &ClassifyOptions) -> Verdict {
    let route = Route::AntiAnalytic;
    let tol = opts.tol;
    if sym.is_constant() {
        return Verdict::new(VerdictStatus::NotHypercyclic, route, opts).push(
            Reason::new(ReasonCode::Constant, ReasonKind::Necessary).with("value", sym.coeff(0)),
        );
    }
    let phi = sym.conjugate();
    let sup = phi.sup_norm(CIRCLE_GRID);
    let inf = match winding_number(&phi, C64::new(0.0, 0.0)) {
        Ok(w) if w.value >= 1 => 0.0,
        Ok(_) => phi.min_modulus(CIRCLE_GRID).1,
        Err(_) => {
            return Verdict::new(VerdictStatus::Indeterminate, route, opts).push(
                Reason::new(ReasonCode::GsCondition, ReasonKind::Diagnostic)
                    .with("sup_modulus", sup)
                    .with("note", "phi has a zero on the unit circle"),
            );
        }
    };
    let gs = |kind| {
        Reason::new(ReasonCode::GsCondition, kind)
            .with("sup_modulus", sup)
            .with("inf_modulus", inf)
    };
    if inf < 1.0 - tol && sup > 1.0 + tol {
        return Verdict::new(VerdictStatus::Hypercyclic, route, opts)
            .push(gs(ReasonKind::Sufficient));
    }
    if sup < 1.0 - tol {
        return Verdict::new(VerdictStatus::NotHypercyclic, route, opts)
            .push(Reason::new(ReasonCode::Contraction, ReasonKind::Necessary).with("sup_norm", sup))
            .push(gs(ReasonKind::Necessary));
    }
    if inf > 1.0 + tol {
        return Verdict::new(VerdictStatus::NotHypercyclic, route, opts)
            .push(gs(ReasonKind::Necessary));
    }
    Verdict::new(VerdictStatus::Indeterminate, route, opts).push(gs(ReasonKind::Diagnostic))
}

/// Symbols `a/z + b + cz`; zero `a` or `c` is rerouted to the analytic or
/// anti-analytic procedure.
pub fn classify_tridiagonal(tri: &TridiagonalSymbol, opts: &ClassifyOptions) -> Verdict {
    let sym = tri.to_laurent();
    if tri.c.norm() == 0.0 {
        return classify_antianalytic_with(&sym, opts);
    }
    if tri.a.norm() == 0.0 {
        return classify_analytic_with(&sym, opts);
    }
    let route = Route::Tridiagonal;
    let (ma, mc) = (tri.a.norm(), tri.c.norm());
    if ma <= mc {
        let mut verdict = Verdict::new(VerdictStatus::NotHypercyclic, route, opts).push(
            Reason::new(ReasonCode::Hyponormal, ReasonKind::Necessary)
                .with("abs_a", ma)
                .with("abs_c", mc),
        );
        if ma == mc {
            verdict.reasons[0].evidence.insert(
                "note".into(),
                "valid on H2; the winding argument does not cover |a| = |c|".into(),
            );
        } else if let Ok(w) = winding_number(&sym, tri.b) {
            verdict = verdict.push(
                Reason::new(ReasonCode::AdjointEigen, ReasonKind::Necessary)
                    .with("lambda", tri.b)
                    .with("winding", w.value),
            );
        }
        return verdict;
    }
    let (theta, level) = match tri.circle_level_minimum() {
        Ok(found) => found,
        Err(_) => {
            return Verdict::new(VerdictStatus::Indeterminate, route, opts).push(
                Reason::new(ReasonCode::ShkarinEllipse, ReasonKind::Diagnostic)
                    .with("abs_a", ma)
                    .with("abs_c", mc)
                    .with("note", "ellipse is numerically degenerate"),
            );
        }
    };
    let ellipse = |kind| {
        Reason::new(ReasonCode::ShkarinEllipse, kind)
            .with("level_min", level)
            .with("theta", theta)
    };
    match tri
        .ellipse_intersects_unit_circle(opts.tol)
        .unwrap_or(CircleRelation::Tangent { theta })
    {
        CircleRelation::Intersects => Verdict::new(VerdictStatus::Hypercyclic, route, opts)
            .push(ellipse(ReasonKind::Sufficient)),
        CircleRelation::Tangent { .. } => Verdict::new(VerdictStatus::Indeterminate, route, opts)
            .push(ellipse(ReasonKind::Diagnostic)),
        CircleRelation::Disjoint => {
            let witness = obstruction_contraction(&sym, opts.tol)
                .or_else(|| obstruction_expansion(&sym, opts.tol));
            match witness {
                Some(reason) => Verdict::new(VerdictStatus::NotHypercyclic, route, opts)
                    .push(reason)
                    .push(ellipse(ReasonKind::Necessary)),
                None => Verdict::new(VerdictStatus::Indeterminate, route, opts)
                    .push(ellipse(ReasonKind::Diagnostic)),
            }
        }
    }
}

/// Fires when `‖F‖∞ ≤ 1 + tol`, i.e. `T_F` is a contraction.
pub fn obstruction_contraction(sym: &LaurentSymbol, tol: f64) -> Option<Reason> {
    let sup = sym.sup_norm(CIRCLE_GRID);
    (sup <= 1.0 + tol)
        .then(|| Reason::new(ReasonCode::Contraction, ReasonKind::Necessary).with("sup_norm", sup))
}

/// Fires with a direction `θ₀` when `Re(e^{iθ₀}F(e^{iθ})) ≥ 1 - tol` for all
/// `θ`, which makes `T_F` expansive after a rotation.
pub fn obstruction_expansion(sym: &LaurentSymbol, tol: f64) -> Option<Reason> {
    let (theta0, margin) = best_half_plane(sym);
    (margin >= 1.0 - tol).then(|| {
        Reason::new(ReasonCode::Separation, ReasonKind::Necessary)
            .with("theta0", theta0)
            .with("min_real_part", margin)
    })
}

/// `(θ₀, max_θ₀ min_θ Re(e^{iθ₀}F(e^{iθ})))`.
fn best_half_plane(sym: &LaurentSymbol) -> (f64, f64) {
    let samples = sym.curve_samples(EXPANSION_GRID);
    let h = TAU / EXPANSION_GRID as f64;
    let coarse = |t0: f64| {
        let dir = C64::from_polar(1.0, t0);
        samples
            .iter()
            .map(|w| (dir * w).re)
            .fold(f64::INFINITY, f64::min)
    };
    let (k_best, _) = (0..EXPANSION_GRID).map(|k| (k, coarse(k as f64 * h))).fold(
        (0, f64::NEG_INFINITY),
        |best, cur| if cur.1 > best.1 { cur } else { best },
    );
    let inner_grid = (16 * sym.anti_degree().max(sym.degree())).max(256);
    let exact = |t0: f64| {
        let dir = C64::from_polar(1.0, t0);
        minimize_periodic(&|t| (dir * sym.eval(t)).re, inner_grid, THETA_TOL).1
    };
    let centre = k_best as f64 * h;
    let (t0, neg) = golden_section_min(&|t| -exact(t), centre - h, centre + h, 1e-10);
    let at_grid = exact(centre);
    if at_grid >= -neg {
        (centre, at_grid)
    } else {
        (t0.rem_euclid(TAU), -neg)
    }
}

/// Fires with the first probe `λ` at which `w_F(λ) > 0`, making `λ̄` an
/// eigenvalue of the adjoint. The mean value `a_0` is probed first, then the
/// centres of a `probe_grid × probe_grid` raster over the curve's bounding
/// box.
pub fn obstruction_adjoint_eigen(sym: &LaurentSymbol, probe_grid: usize) -> Option<Reason> {
    if sym.is_constant() {
        return None;
    }
    let curve = CurveWinding::new(sym);
    let bounds = BoundingBox::around_curve(sym, 0.0);
    let n = probe_grid.max(1);
    let dx = (bounds.re_max - bounds.re_min) / n as f64;
    let dy = (bounds.im_max - bounds.im_min) / n as f64;
    let probes = std::iter::once(sym.coeff(0)).chain((0..n * n).map(|idx| {
        let (ix, iy) = (idx % n, idx / n);
        C64::new(
            bounds.re_min + (ix as f64 + 0.5) * dx,
            bounds.im_min + (iy as f64 + 0.5) * dy,
        )
    }));
    probes
        .filter_map(|lambda| match curve.screened_winding(lambda) {
            Ok(w) if w > 0 => Some((lambda, w)),
            _ => None,
        })
        .next()
        .map(|(lambda, w)| {
            Reason::new(ReasonCode::AdjointEigen, ReasonKind::Necessary)
                .with("lambda", lambda)
                .with("winding", w)
        })
}

/// Fires when none of `CIRCLE_GRID` equally spaced points of the unit circle
/// lies on the curve or inside a region of non-zero winding.
pub fn obstruction_spectral_circle(sym: &LaurentSymbol) -> Option<Reason> {
    let curve = CurveWinding::new(sym);
    let hit = (0..CIRCLE_GRID).into_par_iter().any(|k| {
        let z = C64::from_polar(1.0, TAU * k as f64 / CIRCLE_GRID as f64);
        curve.classify(z).in_spectrum()
    });
    (!hit).then(|| {
        Reason::new(ReasonCode::SpectrumMissesCircle, ReasonKind::Necessary)
            .with("samples", CIRCLE_GRID)
    })
}

/// One warning per spectral component (on a `grid × grid` raster) that does
/// not reach the unit circle. Never decisive on its own.
pub fn diagnostic_components(sym: &LaurentSymbol, grid: usize) -> Vec<Reason> {
    if sym.is_constant() {
        return Vec::new();
    }
    let bounds = BoundingBox::around_curve(sym, DEFAULT_MARGIN);
    let Ok(raster) = spectrum_grid(sym, bounds, grid.max(8), grid.max(8)) else {
        return Vec::new();
    };
    components(&raster)
        .components
        .into_iter()
        .filter(|c| !c.intersects_unit_circle)
        .map(|c| {
            Reason::new(ReasonCode::ComponentMissesCircle, ReasonKind::Diagnostic)
                .with("component", c.id)
                .with("cell_count", c.cell_count)
                .with("winding", c.winding)
                .with("representative", c.representative)
        })
        .collect()
}

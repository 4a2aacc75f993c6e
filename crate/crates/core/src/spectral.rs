//! Winding numbers of symbol curves and the spectra they determine.
//!
//! For a continuous symbol, `σ(T_F)` is the curve `F(T)` together with every
//! point about which the curve has non-zero winding number. The Fredholm
//! index of `T_F - λ` is `-w_F(λ)`.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::symbol::LaurentSymbol;
use crate::{Error, Result, C64};

/// Initial number of `θ` samples before adaptive refinement.
pub const BASE_SAMPLES: usize = 256;
/// On-curve guard `δ = GUARD_SCALE · Σ|a_n|`.
pub const GUARD_SCALE: f64 = 1e-8;
/// Relative padding added around the curve's bounding box.
pub const DEFAULT_MARGIN: f64 = 0.1;

const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingResult {
    pub value: i64,
    /// Smallest `|F(e^{iθ}) - λ|` over all evaluated samples.
    pub min_curve_distance: f64,
    /// Deepest bisection level used.
    pub refinement_levels: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PointClass {
    OnCurve,
    Spectrum { winding: i64 },
    Resolvent,
}

impl PointClass {
    pub fn label(&self) -> &'static str {
        match self {
            PointClass::OnCurve => "on_curve",
            PointClass::Spectrum { .. } => "spectrum",
            PointClass::Resolvent => "resolvent",
        }
    }

    pub fn winding(&self) -> i64 {
        match self {
            PointClass::Spectrum { winding } => *winding,
            _ => 0,
        }
    }

    /// `OnCurve` or `Spectrum`.
    pub fn in_spectrum(&self) -> bool {
        !matches!(self, PointClass::Resolvent)
    }
}

/// Pre-sampled symbol curve; answers winding queries for many points.
#[derive(Debug, Clone)]
pub struct CurveWinding {
    symbol: LaurentSymbol,
    samples: Vec<C64>,
    derivative_bound: f64,
    guard: f64,
}

impl CurveWinding {
    pub fn new(symbol: &LaurentSymbol) -> Self {
        Self::with_base(symbol, BASE_SAMPLES)
    }

    pub fn with_base(symbol: &LaurentSymbol, base: usize) -> Self {
        let base = base.max(4);
        Self {
            samples: symbol.curve_samples(base),
            derivative_bound: symbol.derivative_bound(),
            guard: GUARD_SCALE * symbol.l1_norm(),
            symbol: symbol.clone(),
        }
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    /// Sums argument increments of `F(e^{iθ}) - λ` over a partition refined
    /// until every increment is below `π/2` and the Bernstein bound keeps
    /// each arc inside a disc that excludes `λ`.
    pub fn winding(&self, lambda: C64) -> Result<WindingResult> {
        let base = self.samples.len();
        let h = TAU / base as f64;
        let mut walk = Walk {
            curve: self,
            lambda,
            total: 0.0,
            min_distance: f64::INFINITY,
            levels: 0,
        };
        let first = Node::new(self.samples[0] - lambda);
        let mut prev = first;
        for k in 0..base {
            let next = if k + 1 == base {
                first
            } else {
                Node::new(self.samples[k + 1] - lambda)
            };
            walk.segment(k as f64 * h, prev, (k + 1) as f64 * h, next, 0)?;
            prev = next;
        }
        let turns = walk.total / TAU;
        let value = turns.round();
        let residual = (turns - value).abs();
        if residual > 0.01 {
            return Err(Error::NonIntegerWinding { residual });
        }
        Ok(WindingResult {
            value: value as i64,
            min_curve_distance: walk.min_distance,
            refinement_levels: walk.levels,
        })
    }

    /// Winding number about `λ`, taken from the crossing count of the sample
    /// polygon when every sample is farther than `‖F'‖∞ · h` from `λ` (each
    /// arc and its chord then share a disc that excludes `λ`), and from
    /// [`CurveWinding::winding`] otherwise.
    pub fn screened_winding(&self, lambda: C64) -> Result<i64> {
        let base = self.samples.len();
        let reach = 1.01 * self.derivative_bound * TAU / base as f64 + self.guard;
        let reach_sqr = reach * reach;
        let mut count = 0i64;
        let mut v0 = self.samples[base - 1] - lambda;
        for s in &self.samples {
            let v1 = s - lambda;
            if v1.norm_sqr() <= reach_sqr {
                return self.winding(lambda).map(|w| w.value);
            }
            let cross = v0.re * v1.im - v0.im * v1.re;
            if v0.im <= 0.0 && v1.im > 0.0 && cross > 0.0 {
                count += 1;
            } else if v1.im <= 0.0 && v0.im > 0.0 && cross < 0.0 {
                count -= 1;
            }
            v0 = v1;
        }
        Ok(count)
    }

    pub fn classify(&self, lambda: C64) -> PointClass {
        match self.screened_winding(lambda) {
            Ok(w) if w != 0 => PointClass::Spectrum { winding: w },
            Ok(_) => PointClass::Resolvent,
            Err(_) => PointClass::OnCurve,
        }
    }
}

#[derive(Clone, Copy)]
struct Node {
    v: C64,
    distance: f64,
}

impl Node {
    fn new(v: C64) -> Self {
        Self {
            v,
            distance: v.norm_sqr().sqrt(),
        }
    }
}

struct Walk<'a> {
    curve: &'a CurveWinding,
    lambda: C64,
    total: f64,
    min_distance: f64,
    levels: u32,
}

impl Walk<'_> {
    fn segment(&mut self, t0: f64, n0: Node, t1: f64, n1: Node, depth: u32) -> Result<()> {
        let near = n0.distance.min(n1.distance);
        self.min_distance = self.min_distance.min(near);
        self.levels = self.levels.max(depth);
        if near <= self.curve.guard {
            return Err(self.on_curve());
        }
        let (v0, v1) = (n0.v, n1.v);
        let dot = v0.re * v1.re + v0.im * v1.im;
        let reach = self.curve.derivative_bound * (t1 - t0);
        if dot > 0.0 && reach < 0.5 * near {
            let cross = v0.re * v1.im - v0.im * v1.re;
            self.total += cross.atan2(dot);
            return Ok(());
        }
        if depth >= MAX_DEPTH {
            return Err(self.on_curve());
        }
        let tm = 0.5 * (t0 + t1);
        let nm = Node::new(self.curve.symbol.eval(tm) - self.lambda);
        self.segment(t0, n0, tm, nm, depth + 1)?;
        self.segment(tm, nm, t1, n1, depth + 1)
    }

    fn on_curve(&self) -> Error {
        Error::OnCurve {
            point: self.lambda,
            distance: self.min_distance,
            guard: self.curve.guard,
        }
    }
}

/// `w_F(λ)`, the winding number of `F(T)` about `λ`.
pub fn winding_number(sym: &LaurentSymbol, lambda: C64) -> Result<WindingResult> {
    CurveWinding::new(sym).winding(lambda)
}

pub fn classify_point(sym: &LaurentSymbol, lambda: C64) -> PointClass {
    CurveWinding::new(sym).classify(lambda)
}

/// Index of `T_F - λ`, i.e. `-w_F(λ)`.
pub fn fredholm_index(sym: &LaurentSymbol, lambda: C64) -> Result<i64> {
    Ok(-winding_number(sym, lambda)?.value)
}

/// `(dim ker(T_F - λ), dim ker(T_F - λ)*)`. At most one is non-zero.
pub fn kernel_dims(sym: &LaurentSymbol, lambda: C64) -> Result<(u64, u64)> {
    let w = winding_number(sym, lambda)?.value;
    Ok(((-w).max(0) as u64, w.max(0) as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BoundingBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// Box around the sampled curve, padded by `margin` times its larger side.
    pub fn around_curve(sym: &LaurentSymbol, margin: f64) -> Self {
        let (x0, x1, y0, y1) = sym.curve_bounds(4096);
        let extent = (x1 - x0).max(y1 - y0);
        let pad = if extent > 0.0 { margin * extent } else { 1.0 };
        Self::new(x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    }
}

/// Raster of [`PointClass`] over a box, row-major from `im_min` upwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumGrid {
    pub bounds: BoundingBox,
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<PointClass>,
}

impl SpectrumGrid {
    pub fn cell_size(&self) -> (f64, f64) {
        (
            (self.bounds.re_max - self.bounds.re_min) / self.nx as f64,
            (self.bounds.im_max - self.bounds.im_min) / self.ny as f64,
        )
    }

    pub fn center(&self, ix: usize, iy: usize) -> C64 {
        let (dx, dy) = self.cell_size();
        C64::new(
            self.bounds.re_min + (ix as f64 + 0.5) * dx,
            self.bounds.im_min + (iy as f64 + 0.5) * dy,
        )
    }

    pub fn cell(&self, ix: usize, iy: usize) -> PointClass {
        self.cells[iy * self.nx + ix]
    }

    /// Rows `x,y,class,winding`, one per cell centre.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,class,winding")?;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let p = self.center(ix, iy);
                let cell = self.cell(ix, iy);
                writeln!(out, "{},{},{},{}", p.re, p.im, cell.label(), cell.winding())?;
            }
        }
        Ok(())
    }
}

/// Classifies every cell centre. Rows are processed in parallel; the result
/// does not depend on scheduling.
pub fn spectrum_grid(
    sym: &LaurentSymbol,
    bounds: BoundingBox,
    nx: usize,
    ny: usize,
) -> Result<SpectrumGrid> {
    if nx < 8 || ny < 8 {
        return Err(Error::Precondition(format!(
            "spectrum grid needs at least 8x8 cells, got {nx}x{ny}"
        )));
    }
    let curve = CurveWinding::new(sym);
    let mut grid = SpectrumGrid {
        bounds,
        nx,
        ny,
        cells: Vec::new(),
    };
    let rows: Vec<Vec<PointClass>> = (0..ny)
        .into_par_iter()
        .map(|iy| {
            (0..nx)
                .map(|ix| curve.classify(grid.center(ix, iy)))
                .collect()
        })
        .collect();
    grid.cells = rows.into_iter().flatten().collect();
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub id: usize,
    pub cell_count: usize,
    pub winding: i64,
    pub intersects_unit_circle: bool,
    /// Centre of the first cell reached in row-major scan order.
    pub representative: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    /// Grid resolution the circle-intersection flags were computed at.
    pub nx: usize,
    pub ny: usize,
}

/// 4-connected components of the `Spectrum` cells; neighbours are joined only
/// when their winding numbers agree.
pub fn components(grid: &SpectrumGrid) -> ComponentReport {
    let (nx, ny) = (grid.nx, grid.ny);
    let (dx, dy) = grid.cell_size();
    let mut label = vec![usize::MAX; nx * ny];
    let mut found = Vec::new();
    let mut queue = VecDeque::new();

    for start in 0..nx * ny {
        let PointClass::Spectrum { winding } = grid.cells[start] else {
            continue;
        };
        if label[start] != usize::MAX {
            continue;
        }
        let id = found.len();
        let mut count = 0;
        let mut touches = false;
        label[start] = id;
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            count += 1;
            let (ix, iy) = (idx % nx, idx / nx);
            let x0 = grid.bounds.re_min + ix as f64 * dx;
            let y0 = grid.bounds.im_min + iy as f64 * dy;
            touches |= square_meets_unit_circle(x0, x0 + dx, y0, y0 + dy);
            let mut visit = |j: usize| {
                if label[j] == usize::MAX && grid.cells[j] == (PointClass::Spectrum { winding }) {
                    label[j] = id;
                    queue.push_back(j);
                }
            };
            if ix > 0 {
                visit(idx - 1);
            }
            if ix + 1 < nx {
                visit(idx + 1);
            }
            if iy > 0 {
                visit(idx - nx);
            }
            if iy + 1 < ny {
                visit(idx + nx);
            }
        }
        found.push(Component {
            id,
            cell_count: count,
            winding,
            intersects_unit_circle: touches,
            representative: grid.center(start % nx, start / nx),
        });
    }
    ComponentReport {
        components: found,
        nx,
        ny,
    }
}

fn square_meets_unit_circle(x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
    let nearest_x = 0.0_f64.clamp(x0, x1);
    let nearest_y = 0.0_f64.clamp(y0, y1);
    let near = nearest_x.hypot(nearest_y);
    let far = x0.abs().max(x1.abs()).hypot(y0.abs().max(y1.abs()));
    near <= 1.0 && far >= 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::TridiagonalSymbol;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn z() -> LaurentSymbol {
        LaurentSymbol::monomial(1, c(1.0, 0.0))
    }

    fn ellipse() -> LaurentSymbol {
        TridiagonalSymbol::real(2.0, 0.0, 0.5).to_laurent()
    }

    /// Fixed-step argument accumulation, independent of the adaptive walk.
    fn brute_winding(sym: &LaurentSymbol, lambda: C64, steps: usize) -> f64 {
        let mut prev = sym.eval(0.0) - lambda;
        let mut total = 0.0;
        for k in 1..=steps {
            let v = sym.eval(TAU * k as f64 / steps as f64) - lambda;
            total += (v / prev).arg();
            prev = v;
        }
        total / TAU
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_number(&z(), c(0.0, 0.0)).unwrap().value, 1);
        let inv = LaurentSymbol::monomial(-1, c(1.0, 0.0));
        assert_eq!(winding_number(&inv, c(0.0, 0.0)).unwrap().value, -1);
        let w = winding_number(&ellipse(), c(0.0, 0.0)).unwrap();
        assert_eq!(w.value, -1);
        assert!((brute_winding(&ellipse(), c(0.0, 0.0), 1_000_000) + 1.0).abs() < 1e-9);
        assert!((w.min_curve_distance - 1.5).abs() < 1e-3);
    }

    #[test]
    fn winding_refines_near_curve() {
        let near = c(0.0, 1.0 - 1e-6);
        let w = winding_number(&z(), near).unwrap();
        assert_eq!(w.value, 1);
        assert!(w.refinement_levels > 0);
        assert!(matches!(
            winding_number(&z(), c(1.0, 0.0)),
            Err(Error::OnCurve { .. })
        ));
    }

    #[test]
    fn point_classes() {
        assert_eq!(
            classify_point(&z(), c(0.5, 0.0)),
            PointClass::Spectrum { winding: 1 }
        );
        assert_eq!(classify_point(&z(), c(2.0, 0.0)), PointClass::Resolvent);
        assert_eq!(classify_point(&ellipse(), c(2.5, 0.0)), PointClass::OnCurve);
    }

    #[test]
    fn indices_and_kernels() {
        assert_eq!(fredholm_index(&z(), c(0.0, 0.0)).unwrap(), -1);
        assert_eq!(fredholm_index(&ellipse(), c(0.3, 0.2)).unwrap(), 1);
        assert_eq!(
            fredholm_index(&LaurentSymbol::constant(c(3.0, 0.0)), c(0.0, 0.0)).unwrap(),
            0
        );
        assert_eq!(kernel_dims(&z(), c(0.5, 0.0)).unwrap(), (0, 1));
        assert_eq!(kernel_dims(&ellipse(), c(0.0, 0.0)).unwrap(), (1, 0));
        assert_eq!(kernel_dims(&z(), c(2.0, 0.0)).unwrap(), (0, 0));
        assert!(kernel_dims(&ellipse(), c(2.5, 0.0)).is_err());
    }

    #[test]
    fn zero_symbol_is_a_point_curve() {
        let zero = LaurentSymbol::zero();
        assert_eq!(classify_point(&zero, c(0.0, 0.0)), PointClass::OnCurve);
        assert_eq!(classify_point(&zero, c(0.1, 0.0)), PointClass::Resolvent);
    }

    #[test]
    fn monomial_windings() {
        for k in -3..=3 {
            let sym = if k == 0 {
                LaurentSymbol::constant(c(1.0, 0.0))
            } else {
                LaurentSymbol::monomial(k, c(1.0, 0.0))
            };
            assert_eq!(winding_number(&sym, c(0.0, 0.0)).unwrap().value, k as i64);
        }
    }

    #[test]
    fn disc_portrait() {
        let grid = spectrum_grid(&z(), BoundingBox::new(-2.0, 2.0, -2.0, 2.0), 64, 64).unwrap();
        for iy in 0..64 {
            for ix in 0..64 {
                let p = grid.center(ix, iy);
                let expected = if p.norm() < 1.0 {
                    PointClass::Spectrum { winding: 1 }
                } else {
                    PointClass::Resolvent
                };
                assert_eq!(grid.cell(ix, iy), expected, "cell at {p}");
            }
        }
        let report = components(&grid);
        assert_eq!(report.components.len(), 1);
        let comp = &report.components[0];
        assert_eq!(comp.winding, 1);
        assert!(comp.intersects_unit_circle);
    }

    #[test]
    fn ellipse_portrait_matches_containment() {
        let tri = TridiagonalSymbol::real(2.0, 0.0, 0.5);
        let sym = tri.to_laurent();
        let grid = spectrum_grid(
            &sym,
            BoundingBox::around_curve(&sym, DEFAULT_MARGIN),
            48,
            40,
        )
        .unwrap();
        let geom = tri.ellipse().unwrap();
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let g = geom.level(grid.center(ix, iy));
                let expected = if g < 1.0 { -1 } else { 0 };
                assert_eq!(grid.cell(ix, iy).winding(), expected);
            }
        }
    }

    #[test]
    fn off_circle_component() {
        let sym = TridiagonalSymbol::real(2.0, 10.0, 0.5).to_laurent();
        let grid = spectrum_grid(
            &sym,
            BoundingBox::around_curve(&sym, DEFAULT_MARGIN),
            64,
            64,
        )
        .unwrap();
        let report = components(&grid);
        assert_eq!(report.components.len(), 1);
        let comp = &report.components[0];
        assert!(!comp.intersects_unit_circle);
        assert_eq!(comp.winding, -1);
        assert!((comp.representative - c(10.0, 0.0)).norm() < 2.5);
    }

    #[test]
    fn resolvent_only_box_has_no_components() {
        let grid = spectrum_grid(&z(), BoundingBox::new(3.0, 4.0, 3.0, 4.0), 8, 8).unwrap();
        assert!(components(&grid).components.is_empty());
        assert!(spectrum_grid(&z(), BoundingBox::new(3.0, 4.0, 3.0, 4.0), 4, 8).is_err());
    }

    #[test]
    fn constant_symbol_grid() {
        let zero = LaurentSymbol::zero();
        let grid = spectrum_grid(
            &zero,
            BoundingBox::around_curve(&zero, DEFAULT_MARGIN),
            8,
            8,
        )
        .unwrap();
        assert!(grid
            .cells
            .iter()
            .all(|p| !matches!(p, PointClass::Spectrum { .. })));
        assert!(components(&grid).components.is_empty());
    }

    #[test]
    fn components_split_by_winding() {
        // Two adjacent cells with different windings stay separate.
        let mut cells = vec![PointClass::Resolvent; 64];
        cells[0] = PointClass::Spectrum { winding: 1 };
        cells[1] = PointClass::Spectrum { winding: 2 };
        let grid = SpectrumGrid {
            bounds: BoundingBox::new(-1.0, 1.0, -1.0, 1.0),
            nx: 8,
            ny: 8,
            cells,
        };
        let report = components(&grid);
        assert_eq!(report.components.len(), 2);
    }

    #[test]
    fn csv_header_and_rows() {
        let grid = spectrum_grid(&z(), BoundingBox::new(-2.0, 2.0, -2.0, 2.0), 8, 8).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,class,winding");
        assert_eq!(lines.len(), 65);
        assert_eq!(lines[1], "-1.75,-1.75,resolvent,0");
        assert!(text.contains("-0.25,-0.25,spectrum,1"));
    }
}

//! Orbits of finite sections, transitivity witnesses built from eigenvectors
//! with eigenvalues on both sides of the unit circle, and the growth pattern
//! of hyponormal tridiagonal operators.

use std::collections::BTreeMap;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{classify_tridiagonal, ClassifyOptions, VerdictStatus};
use crate::eigensystem::{interior_residual, tridiagonal_eigenvector};
use crate::operator::{CoeffVector, TruncatedToeplitz};
use crate::symbol::TridiagonalSymbol;
use crate::{Error, Result, C64};

/// Largest interior eigen-residual accepted by [`gs_witness`].
pub const WITNESS_RESIDUAL_LIMIT: f64 = 1e-9;
/// Gram condition number above which [`transitivity_demo`] regularises.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;
/// Relative slack of the hyponormal inequality.
pub const HYPONORMAL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTrace {
    /// `‖T^k x‖` for `k = 0..=steps`.
    pub norms: Vec<f64>,
    pub snapshots: BTreeMap<usize, CoeffVector>,
    /// Guaranteed distance of the support of `T^k x` from the last index,
    /// for each `k`; negative once the band may have reached the edge.
    pub margins: Vec<i64>,
    /// Margin after the final step.
    pub support_margin: i64,
    /// First step whose margin is `≤ 0`, after which the finite section may
    /// differ from the infinite operator.
    pub boundary_step: Option<usize>,
}

impl OrbitTrace {
    pub fn contaminated(&self) -> bool {
        self.boundary_step.is_some()
    }

    /// CSV with header `step,norm,margin`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "step,norm,margin")?;
        for (k, (n, m)) in self.norms.iter().zip(&self.margins).enumerate() {
            writeln!(out, "{k},{n:e},{m}")?;
        }
        Ok(())
    }
}

/// `x, Tx, …, T^steps x` without snapshots.
pub fn orbit(t: &TruncatedToeplitz, x: &CoeffVector, steps: usize) -> Result<OrbitTrace> {
    orbit_with_snapshots(t, x, steps, 0)
}

/// Like [`orbit`], storing `T^k x` whenever `k` is a multiple of `every`
/// (never when `every == 0`).
pub fn orbit_with_snapshots(
    t: &TruncatedToeplitz,
    x: &CoeffVector,
    steps: usize,
    every: usize,
) -> Result<OrbitTrace> {
    if x.len() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: x.len(),
        });
    }
    let (m, n) = t.bandwidth();
    let growth = m.max(n) as i64;
    let last = t.dim() as i64 - 1;
    let top = x.support_top().map_or(-1, |k| k as i64);
    let margins: Vec<i64> = (0..=steps as i64)
        .map(|k| {
            if top < 0 {
                last
            } else {
                last - (top + k * growth)
            }
        })
        .collect();

    let mut norms = Vec::with_capacity(steps + 1);
    let mut snapshots = BTreeMap::new();
    let mut current = x.clone();
    for k in 0..=steps {
        norms.push(current.norm());
        if every > 0 && k % every == 0 {
            snapshots.insert(k, current.clone());
        }
        if k < steps {
            current = t.apply(&current)?;
        }
    }
    Ok(OrbitTrace {
        norms,
        snapshots,
        support_margin: margins[steps],
        boundary_step: margins.iter().position(|&m| m <= 0),
        margins,
    })
}

/// An eigenvector `vector` with eigenvalue `eigenvalue`, entering a witness
/// with coefficient `weight`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenComponent {
    pub eigenvalue: C64,
    pub vector: CoeffVector,
    pub weight: C64,
}

impl EigenComponent {
    pub fn new(eigenvalue: C64, vector: CoeffVector, weight: C64) -> Self {
        Self {
            eigenvalue,
            vector,
            weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessStep {
    pub n: usize,
    pub norm_tn_x: f64,
    pub norm_u_n: f64,
    /// `‖T^n(x + u_n) - y‖`.
    pub approach: f64,
}

impl WitnessStep {
    /// `max(‖u_n‖, ‖T^n(x + u_n) - y‖)`: how far `x + u_n` is from being a
    /// point near `x` whose `n`-th iterate is near `y`.
    pub fn transitivity_error(&self) -> f64 {
        self.norm_u_n.max(self.approach)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub n: usize,
    pub norm_tn_x: f64,
    pub norm_u_n: f64,
    pub approach: f64,
    /// `‖T^n u_n - y‖ / ‖y‖` (absolute when `y = 0`).
    pub exactness: f64,
    /// Rows for `n' = 1..=n`.
    pub steps: Vec<WitnessStep>,
}

impl WitnessReport {
    /// CSV with header `n,norm_tn_x,norm_u_n,approach`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,norm_tn_x,norm_u_n,approach")?;
        for s in &self.steps {
            writeln!(
                out,
                "{},{:e},{:e},{:e}",
                s.n, s.norm_tn_x, s.norm_u_n, s.approach
            )?;
        }
        Ok(())
    }
}

/// Powers `T^j v` for `j = 0..=n`.
fn chain(t: &TruncatedToeplitz, v: &CoeffVector, n: usize) -> Result<Vec<CoeffVector>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(v.clone());
    for j in 0..n {
        let next = t.apply(&out[j])?;
        out.push(next);
    }
    Ok(out)
}

fn combine(dim: usize, terms: impl Iterator<Item = (C64, CoeffVector)>) -> Result<CoeffVector> {
    let mut acc = CoeffVector::zeros(dim);
    for (w, v) in terms {
        acc.axpy(w, &v)?;
    }
    Ok(acc)
}

fn check_component(t: &TruncatedToeplitz, comp: &EigenComponent) -> Result<()> {
    if comp.vector.len() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: comp.vector.len(),
        });
    }
    let r = interior_residual(t, comp.eigenvalue, &comp.vector)?;
    if r > WITNESS_RESIDUAL_LIMIT {
        return Err(Error::EigenResidualTooLarge {
            residual: r,
            limit: WITNESS_RESIDUAL_LIMIT,
        });
    }
    Ok(())
}

/// Euclidean norm of the first `window` entries.
fn window_norm(v: &CoeffVector, window: usize) -> f64 {
    v.as_slice()[..window.min(v.len())]
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Precomputed witness ingredients: `T^j x`, and `T^j y_k` per large pair.
/// Norms are taken over the first `window` coordinates.
struct WitnessRun<'a> {
    large: &'a [EigenComponent],
    x_chain: Vec<CoeffVector>,
    y_chains: Vec<Vec<CoeffVector>>,
    y: CoeffVector,
    dim: usize,
    window: usize,
}

impl<'a> WitnessRun<'a> {
    fn new(
        t: &TruncatedToeplitz,
        small: &[EigenComponent],
        large: &'a [EigenComponent],
        n: usize,
        window: usize,
    ) -> Result<Self> {
        for comp in small {
            if comp.eigenvalue.norm() >= 1.0 {
                return Err(Error::SpectralGapViolation {
                    eigenvalue: comp.eigenvalue,
                });
            }
        }
        for comp in large {
            if comp.eigenvalue.norm() <= 1.0 {
                return Err(Error::SpectralGapViolation {
                    eigenvalue: comp.eigenvalue,
                });
            }
        }
        for comp in small.iter().chain(large) {
            check_component(t, comp)?;
        }
        let dim = t.dim();
        let x = combine(dim, small.iter().map(|c| (c.weight, c.vector.clone())))?;
        let y = combine(dim, large.iter().map(|c| (c.weight, c.vector.clone())))?;
        let x_chain = chain(t, &x, n)?;
        let y_chains = large
            .iter()
            .map(|c| chain(t, &c.vector, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            large,
            x_chain,
            y_chains,
            y,
            dim,
            window,
        })
    }

    fn scales(&self, j: usize) -> impl Iterator<Item = C64> + '_ {
        self.large
            .iter()
            .map(move |c| c.weight * c.eigenvalue.powi(-(j as i32)))
    }

    /// `u_j = Σ b_k μ_k^{-j} y_k`.
    fn u(&self, j: usize) -> Result<CoeffVector> {
        combine(
            self.dim,
            self.scales(j)
                .zip(self.large)
                .map(|(s, c)| (s, c.vector.clone())),
        )
    }

    /// `T^j u_j`, assembled from the stored chains.
    fn tj_u(&self, j: usize) -> Result<CoeffVector> {
        combine(
            self.dim,
            self.scales(j)
                .zip(&self.y_chains)
                .map(|(s, ch)| (s, ch[j].clone())),
        )
    }

    /// `T^j(x + u_j)`.
    fn image(&self, j: usize) -> Result<CoeffVector> {
        let mut out = self.tj_u(j)?;
        out.axpy(C64::new(1.0, 0.0), &self.x_chain[j])?;
        Ok(out)
    }

    fn step(&self, j: usize) -> Result<WitnessStep> {
        Ok(WitnessStep {
            n: j,
            norm_tn_x: window_norm(&self.x_chain[j], self.window),
            norm_u_n: window_norm(&self.u(j)?, self.window),
            approach: window_norm(&self.image(j)?.sub(&self.y)?, self.window),
        })
    }

    fn report(&self, n: usize) -> Result<WitnessReport> {
        let last = self.step(n)?;
        let miss = window_norm(&self.tj_u(n)?.sub(&self.y)?, self.window);
        let y_norm = window_norm(&self.y, self.window);
        let steps = (1..=n).map(|j| self.step(j)).collect::<Result<Vec<_>>>()?;
        Ok(WitnessReport {
            n,
            norm_tn_x: last.norm_tn_x,
            norm_u_n: last.norm_u_n,
            approach: last.approach,
            exactness: if y_norm > 0.0 { miss / y_norm } else { miss },
            steps,
        })
    }
}

/// Builds `x = Σ a_k x_k`, `y = Σ b_k y_k` and `u_n = Σ b_k μ_k^{-n} y_k`
/// from eigenvectors with `|λ_k| < 1 < |μ_k|`, and reports how closely
/// `T^n(x + u_n)` reaches `y`.
pub fn gs_witness(
    t: &TruncatedToeplitz,
    small: &[EigenComponent],
    large: &[EigenComponent],
    n: usize,
) -> Result<WitnessReport> {
    WitnessRun::new(t, small, large, n, t.dim())?.report(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemoOptions {
    /// Target accuracy for the projections and the witness.
    pub eps: f64,
    /// Number of eigenvectors sampled on each side of the unit circle.
    pub samples: usize,
    /// Largest `n` tried for the witness.
    pub max_steps: usize,
    pub seed: u64,
    /// Band of the hypercyclicity check on the symbol.
    pub tol: f64,
    /// Sampled eigenvalues satisfy `|μ| < 1 - margin` or `|μ| > 1 + margin`.
    pub margin: f64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        Self {
            eps: 1e-3,
            samples: 12,
            max_steps: 60,
            seed: 42,
            tol: 1e-9,
            margin: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub weights: Vec<C64>,
    pub error: f64,
    pub condition: f64,
    pub regularized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitivityReport {
    /// Parameters `z0` whose eigenvalues lie inside the unit disc.
    pub small_params: Vec<C64>,
    /// Parameters `z0` whose eigenvalues lie outside the closed disc.
    pub large_params: Vec<C64>,
    /// Length of the eigenvectors and of the finite section that is iterated.
    pub working_dim: usize,
    /// Number of leading coordinates over which norms are measured; the
    /// truncation edge cannot reach them within `max_steps` applications.
    pub window: usize,
    pub x_projection: Projection,
    pub y_projection: Projection,
    /// `‖T^n(x̃ + u_n) - y_target‖` for `n = 1..=max_steps`.
    pub target_approach: Vec<f64>,
    /// First `n` with `‖u_n‖`, `‖T^n x̃‖` within `eps` and the target
    /// approach within `2 eps`, or else the `n` minimising the target
    /// approach.
    pub chosen_n: usize,
    pub achieved: bool,
    pub witness: WitnessReport,
}

/// Draws eigenvalues uniformly from the bounding box of the ellipse, keeps
/// those inside the ellipse that `accept`, and pulls them back to canonical
/// parameters `z0` with `1 < |z0| ≤ sqrt|a/c|`.
fn sample_params(
    tri: &TridiagonalSymbol,
    rng: &mut ChaCha8Rng,
    samples: usize,
    accept: impl Fn(f64) -> bool,
) -> Result<Vec<C64>> {
    const MAX_ATTEMPTS: usize = 1_000_000;
    let geom = tri.ellipse()?;
    let (cos, sin) = (geom.rotation.cos().abs(), geom.rotation.sin().abs());
    let half_w = geom.semi_major * cos + geom.semi_minor * sin;
    let half_h = geom.semi_major * sin + geom.semi_minor * cos;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..MAX_ATTEMPTS {
        if out.len() == samples {
            break;
        }
        let mu = geom.center
            + C64::new(
                rng.random_range(-half_w..=half_w),
                rng.random_range(-half_h..=half_h),
            );
        if !accept(mu.norm()) {
            continue;
        }
        if let Ok(param) = tri.annulus_param_solve(mu) {
            out.push(param.point());
        }
    }
    if out.len() == samples {
        return Ok(out);
    }
    Err(Error::Precondition(format!(
        "found only {} of {samples} admissible eigenvalues",
        out.len()
    )))
}

/// Smallest `L` with `r^{-L} ≤ 1e-16`, capped at `cap`.
fn decay_length(r: f64, cap: usize) -> usize {
    let needed = (16.0 * std::f64::consts::LN_10 / r.ln()).ceil();
    if needed.is_finite() && needed < cap as f64 {
        needed as usize
    } else {
        cap
    }
}

fn padded(v: &CoeffVector, len: usize) -> CoeffVector {
    let mut out = v.clone().into_inner();
    out.resize(len, C64::new(0.0, 0.0));
    CoeffVector::from_vec(out)
}

/// Least-squares coefficients of `target` in the span of `basis` via the
/// Gram matrix, regularised when its condition number exceeds
/// [`GRAM_CONDITION_LIMIT`] and `regularize` is set.
pub fn project_onto(
    basis: &[CoeffVector],
    target: &CoeffVector,
    regularize: bool,
) -> Result<Projection> {
    let k = basis.len();
    for v in basis {
        if v.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: v.len(),
            });
        }
    }
    let dot = |f: &CoeffVector, g: &CoeffVector| -> C64 {
        f.iter().zip(g.iter()).map(|(a, b)| a * b.conj()).sum()
    };
    let gram = DMatrix::from_fn(k, k, |i, j| dot(&basis[j], &basis[i]));
    let rhs = DVector::from_fn(k, |i, _| dot(target, &basis[i]));
    let sv = gram.clone().singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
        (hi.max(s), lo.min(s))
    });
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let regularized = condition > GRAM_CONDITION_LIMIT;
    if regularized && !regularize {
        return Err(Error::ProjectionIllConditioned {
            condition,
            limit: GRAM_CONDITION_LIMIT,
        });
    }
    let system = if regularized {
        let shift = 1e-12 * gram.trace().re;
        &gram + DMatrix::<C64>::identity(k, k) * C64::new(shift, 0.0)
    } else {
        gram
    };
    let weights = system
        .lu()
        .solve(&rhs)
        .ok_or(Error::ProjectionIllConditioned {
            condition,
            limit: GRAM_CONDITION_LIMIT,
        })?;
    let weights: Vec<C64> = weights.iter().copied().collect();
    let mut fitted = CoeffVector::zeros(target.len());
    for (w, v) in weights.iter().zip(basis) {
        fitted.axpy(*w, v)?;
    }
    Ok(Projection {
        error: target.sub(&fitted)?.norm(),
        weights,
        condition,
        regularized,
    })
}

/// Approximates `x_target` and `y_target` by eigenvectors with eigenvalues
/// inside and outside the unit disc, then runs the witness construction on
/// the approximations and measures the approach to `y_target` itself.
///
/// The eigenvectors are generated on a working dimension long enough for
/// their tails to be negligible and for the truncation edge to stay outside
/// the measured window for `max_steps` applications, so the reported norms
/// are those of the infinite-dimensional operator.
pub fn transitivity_demo(
    tri: &TridiagonalSymbol,
    x_target: &CoeffVector,
    y_target: &CoeffVector,
    opts: &DemoOptions,
) -> Result<TransitivityReport> {
    let verdict = classify_tridiagonal(
        tri,
        &ClassifyOptions {
            tol: opts.tol,
            ..ClassifyOptions::default()
        },
    );
    if verdict.status != VerdictStatus::Hypercyclic || tri.c.norm() == 0.0 {
        return Err(Error::Precondition(format!(
            "transitivity demo needs a hypercyclic tridiagonal symbol with c != 0, got {:?}",
            verdict.status
        )));
    }
    let dim = x_target.len();
    if y_target.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: y_target.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let margin = opts.margin.max(opts.tol);
    let small_params = sample_params(tri, &mut rng, opts.samples, |m| m < 1.0 - margin)?;
    let large_params = sample_params(tri, &mut rng, opts.samples, |m| m > 1.0 + margin)?;

    let r_min = small_params
        .iter()
        .chain(&large_params)
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    let window = dim + decay_length(r_min, 16 * dim.max(64));
    let working_dim = window + opts.max_steps + 1;
    let t = TruncatedToeplitz::new(tri.to_laurent(), working_dim)?;
    let x_long = padded(x_target, working_dim);
    let y_long = padded(y_target, working_dim);

    let eigen = |params: &[C64]| -> Result<Vec<(C64, CoeffVector)>> {
        params
            .iter()
            .map(|&z0| {
                tridiagonal_eigenvector(tri, z0, working_dim).map(|p| (p.eigenvalue, p.vector))
            })
            .collect()
    };
    let small_eig = eigen(&small_params)?;
    let large_eig = eigen(&large_params)?;
    let basis =
        |pairs: &[(C64, CoeffVector)]| pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>();
    let x_projection = project_onto(&basis(&small_eig), &x_long, true)?;
    let y_projection = project_onto(&basis(&large_eig), &y_long, true)?;

    let components = |pairs: Vec<(C64, CoeffVector)>, weights: &[C64]| -> Vec<EigenComponent> {
        pairs
            .into_iter()
            .zip(weights)
            .map(|((mu, v), &w)| EigenComponent::new(mu, v, w))
            .collect()
    };
    let small = components(small_eig, &x_projection.weights);
    let large = components(large_eig, &y_projection.weights);
    let run = WitnessRun::new(&t, &small, &large, opts.max_steps, window)?;

    let mut target_approach = Vec::with_capacity(opts.max_steps);
    let mut chosen = None;
    for j in 1..=opts.max_steps {
        let step = run.step(j)?;
        let approach = window_norm(&run.image(j)?.sub(&y_long)?, window);
        target_approach.push(approach);
        if chosen.is_none()
            && step.norm_u_n <= opts.eps
            && step.norm_tn_x <= opts.eps
            && approach <= 2.0 * opts.eps
        {
            chosen = Some(j);
        }
    }
    let achieved =
        chosen.is_some() && x_projection.error <= opts.eps && y_projection.error <= opts.eps;
    let chosen_n = chosen.unwrap_or_else(|| {
        target_approach
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, &a)| if a < best.1 { (i, a) } else { best },
            )
            .0
            + 1
    });
    let chosen_n = chosen_n.min(opts.max_steps);
    Ok(TransitivityReport {
        small_params,
        large_params,
        working_dim,
        window,
        x_projection,
        y_projection,
        target_approach,
        chosen_n,
        achieved,
        witness: run.report(chosen_n)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthPattern {
    NonIncreasing,
    /// Strictly increasing from `step` on.
    IncreasingFrom {
        step: usize,
    },
    /// Neither of the two shapes a hyponormal orbit must have.
    Irregular,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyponormalReport {
    pub norms: Vec<f64>,
    pub inequality_holds: bool,
    /// `max_k ‖T^{k+1}x‖² / (‖T^{k+2}x‖ ‖T^k x‖)`.
    pub worst_ratio: f64,
    pub pattern: GrowthPattern,
}

/// Checks `‖T^{k+1}x‖² ≤ ‖T^{k+2}x‖ ‖T^k x‖` for `k ≤ steps - 2` on a
/// tridiagonal symbol with `|c| ≥ |a|`, and the resulting growth dichotomy.
pub fn hyponormal_growth_check(
    tri: &TridiagonalSymbol,
    x: &CoeffVector,
    steps: usize,
) -> Result<HyponormalReport> {
    if tri.c.norm() < tri.a.norm() {
        return Err(Error::Precondition(format!(
            "hyponormal check needs |c| >= |a| (|a| = {}, |c| = {})",
            tri.a.norm(),
            tri.c.norm()
        )));
    }
    let dim = x.len();
    if let Some(top) = x.support_top() {
        if top + steps + 2 > dim {
            return Err(Error::SupportOverflow {
                top: top + steps + 2,
                limit: dim,
            });
        }
    }
    let t = TruncatedToeplitz::new(tri.to_laurent(), dim)?;
    let norms = orbit(&t, x, steps)?.norms;
    let mut worst_ratio: f64 = 0.0;
    let mut inequality_holds = true;
    for k in 0..steps.saturating_sub(1) {
        let lhs = norms[k + 1] * norms[k + 1];
        let rhs = norms[k + 2] * norms[k];
        if lhs > rhs * (1.0 + HYPONORMAL_SLACK) {
            inequality_holds = false;
        }
        if rhs > 0.0 {
            worst_ratio = worst_ratio.max(lhs / rhs);
        } else if lhs > 0.0 {
            worst_ratio = f64::INFINITY;
        }
    }
    Ok(HyponormalReport {
        pattern: growth_pattern(&norms),
        norms,
        inequality_holds,
        worst_ratio,
    })
}

fn growth_pattern(norms: &[f64]) -> GrowthPattern {
    let rises = |k: usize| norms[k + 1] > norms[k] * (1.0 + HYPONORMAL_SLACK);
    let Some(first) = (0..norms.len().saturating_sub(1)).find(|&k| rises(k)) else {
        return GrowthPattern::NonIncreasing;
    };
    if (first..norms.len() - 1).all(rises) {
        GrowthPattern::IncreasingFrom { step: first }
    } else {
        GrowthPattern::Irregular
    }
}

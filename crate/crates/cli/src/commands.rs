//! One function per subcommand. Each returns the primary output and the
//! process exit code.

use std::fs::File;
use std::io::BufWriter;

use serde::Serialize;
use toeplitz_dyn::classifier::{ClassifyOptions, Verdict, VerdictStatus};
use toeplitz_dyn::dynamics::{
    gs_witness, orbit_with_snapshots, transitivity_demo, DemoOptions, EigenComponent, OrbitTrace,
    TransitivityReport, WitnessReport,
};
use toeplitz_dyn::eigensystem::{
    antianalytic_eigen, inverse_eigen_param, residual, tridiagonal_eigenvector, EigenPair,
    EigenParam,
};
use toeplitz_dyn::operator::operator_norm_estimate;
use toeplitz_dyn::spectral::{
    components, fredholm_index, spectrum_grid, winding_number, BoundingBox, ComponentReport,
    PointClass,
};
use toeplitz_dyn::symbol::{AnnulusParam, CircleRelation, Containment, CIRCLE_GRID};
use toeplitz_dyn::{
    classify, EllipseGeometry, LaurentSymbol, TridiagonalSymbol, TruncatedToeplitz, C64,
};

use crate::args::{
    ClassifyArgs, Common, EigenArgs, EllipseArgs, Format, NormArgs, OrbitArgs, PointArgs,
    SpectrumArgs, WitnessArgs,
};
use crate::error::CliError;
use crate::input::{parse_complex, parse_symbol, parse_vector};

pub const DEFAULT_ORBIT_STEPS: usize = 20;
pub const DEFAULT_WITNESS_STEPS: usize = 40;
pub const DEFAULT_DEMO_STEPS: usize = 60;

pub struct Outcome {
    pub body: String,
    pub exit: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, exit: 0 }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("outputs serialize");
    text.push('\n');
    text
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn symbol(common: &Common) -> Result<LaurentSymbol, CliError> {
    parse_symbol(common.tri.as_deref(), common.coeffs.as_deref())
}

fn tridiagonal(common: &Common) -> Result<TridiagonalSymbol, CliError> {
    symbol(common)?
        .as_tridiagonal()
        .ok_or_else(|| CliError::usage("this command needs a tridiagonal symbol"))
}

fn section(sym: &LaurentSymbol, dim: usize) -> Result<TruncatedToeplitz, CliError> {
    if dim == 0 {
        return Err(CliError::usage("--dim must be positive"));
    }
    Ok(TruncatedToeplitz::new(sym.clone(), dim)?)
}

pub fn exit_code(status: VerdictStatus) -> i32 {
    match status {
        VerdictStatus::Hypercyclic => 0,
        VerdictStatus::NotHypercyclic => 1,
        VerdictStatus::Indeterminate => 2,
        VerdictStatus::Unsupported => 3,
    }
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let sym = symbol(common)?;
    if common.grid < 8 {
        return Err(CliError::usage("--grid must be at least 8"));
    }
    let opts = ClassifyOptions {
        tol: common.tol,
        probe_grid: args.probe_grid.max(1),
        component_grid: common.grid,
    };
    let verdict: Verdict = classify(&sym, &opts);
    log::info!("classify: {:?} via {:?}", verdict.status, verdict.route);
    let body = match common.format {
        Format::Json => to_json(&verdict),
        Format::Csv => {
            let codes: Vec<&str> = verdict.reasons.iter().map(|r| r.code.as_str()).collect();
            format!(
                "status,route,reasons\n{:?},{:?},{}\n",
                verdict.status,
                verdict.route,
                codes.join(";")
            )
        }
    };
    Ok(Outcome {
        body,
        exit: exit_code(verdict.status),
    })
}

#[derive(Serialize)]
struct CellCounts {
    spectrum: usize,
    on_curve: usize,
    resolvent: usize,
}

#[derive(Serialize)]
struct SpectrumOutput {
    bounds: BoundingBox,
    counts: CellCounts,
    #[serde(flatten)]
    report: ComponentReport,
    /// Ids of components that do not meet the unit circle.
    off_circle: Vec<usize>,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let sym = symbol(common)?;
    if !(args.margin >= 0.0 && args.margin.is_finite()) {
        return Err(CliError::usage("--margin must be a non-negative number"));
    }
    let bounds = BoundingBox::around_curve(&sym, args.margin);
    let grid = spectrum_grid(&sym, bounds, common.grid, common.grid)?;
    if common.format == Format::Csv {
        return Ok(Outcome::ok(csv_string(|buf| grid.write_csv(buf))?));
    }
    if let Some(path) = &args.csv {
        grid.write_csv(BufWriter::new(File::create(path)?))?;
    }
    let mut counts = CellCounts {
        spectrum: 0,
        on_curve: 0,
        resolvent: 0,
    };
    for cell in &grid.cells {
        match cell {
            PointClass::Spectrum { .. } => counts.spectrum += 1,
            PointClass::OnCurve => counts.on_curve += 1,
            PointClass::Resolvent => counts.resolvent += 1,
        }
    }
    let report = components(&grid);
    let off_circle = report
        .components
        .iter()
        .filter(|c| !c.intersects_unit_circle)
        .map(|c| c.id)
        .collect();
    Ok(Outcome::ok(to_json(&SpectrumOutput {
        bounds,
        counts,
        report,
        off_circle,
    })))
}

#[derive(Serialize)]
struct WindingOutput {
    lambda: C64,
    winding: i64,
    fredholm_index: i64,
    min_curve_distance: f64,
    refinement_levels: u32,
}

pub fn cmd_winding(args: &PointArgs) -> Result<Outcome, CliError> {
    let sym = symbol(&args.common)?;
    let lambda = parse_complex(&args.lambda)?;
    let w = winding_number(&sym, lambda)?;
    let out = WindingOutput {
        lambda,
        winding: w.value,
        fredholm_index: fredholm_index(&sym, lambda)?,
        min_curve_distance: w.min_curve_distance,
        refinement_levels: w.refinement_levels,
    };
    Ok(Outcome::ok(match args.common.format {
        Format::Json => to_json(&out),
        Format::Csv => format!(
            "lambda_re,lambda_im,winding,fredholm_index,min_curve_distance,refinement_levels\n{},{},{},{},{:e},{}\n",
            lambda.re, lambda.im, out.winding, out.fredholm_index, out.min_curve_distance, out.refinement_levels
        ),
    }))
}

#[derive(Serialize)]
struct EigenOutput {
    eigenvalue: C64,
    param: EigenParam,
    dim: usize,
    residual: f64,
    norm: f64,
    /// Leading coefficients of the eigenvector.
    coefficients: Vec<C64>,
}

pub fn cmd_eigen(args: &EigenArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let sym = symbol(common)?;
    let t = section(&sym, common.dim)?;
    let pair: EigenPair = if let Some(lambda) = &args.lambda {
        antianalytic_eigen(&sym, parse_complex(lambda)?, common.dim)?
    } else {
        let tri = tridiagonal(common)?;
        let z0 = match (&args.z0, &args.mu) {
            (Some(z0), _) => parse_complex(z0)?,
            (None, Some(mu)) => inverse_eigen_param(&tri, parse_complex(mu)?)?,
            (None, None) => return Err(CliError::usage("one of --z0, --lambda, --mu is required")),
        };
        tridiagonal_eigenvector(&tri, z0, common.dim)?
    };
    let r = residual(&t, &pair)?;
    if common.format == Format::Csv {
        return Ok(Outcome::ok(csv_string(|buf| pair.vector.write_csv(buf))?));
    }
    let head = if args.head == 0 {
        common.dim
    } else {
        args.head.min(common.dim)
    };
    Ok(Outcome::ok(to_json(&EigenOutput {
        eigenvalue: pair.eigenvalue,
        param: pair.param,
        dim: common.dim,
        residual: r,
        norm: pair.vector.norm(),
        coefficients: pair.vector.as_slice()[..head].to_vec(),
    })))
}

#[derive(Serialize)]
struct OrbitOutput {
    dim: usize,
    steps: usize,
    contaminated: bool,
    #[serde(flatten)]
    trace: OrbitTrace,
}

pub fn cmd_orbit(args: &OrbitArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let sym = symbol(common)?;
    let t = section(&sym, common.dim)?;
    let x = parse_vector(&args.x, common.dim)?;
    let steps = common.steps.unwrap_or(DEFAULT_ORBIT_STEPS);
    let trace = orbit_with_snapshots(&t, &x, steps, args.every)?;
    if trace.contaminated() {
        log::warn!(
            "orbit reaches the truncation edge at step {}",
            trace.boundary_step.unwrap_or_default()
        );
    }
    Ok(Outcome::ok(match common.format {
        Format::Json => to_json(&OrbitOutput {
            dim: common.dim,
            steps,
            contaminated: trace.contaminated(),
            trace,
        }),
        Format::Csv => csv_string(|buf| trace.write_csv(buf))?,
    }))
}

#[derive(Serialize)]
struct EigenSummary {
    param: C64,
    eigenvalue: C64,
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum WitnessOutput {
    Eigen {
        small: Vec<EigenSummary>,
        large: Vec<EigenSummary>,
        report: WitnessReport,
    },
    Demo {
        report: TransitivityReport,
    },
}

fn eigen_components(
    sym: &LaurentSymbol,
    params: &[String],
    dim: usize,
) -> Result<(Vec<EigenComponent>, Vec<EigenSummary>), CliError> {
    let mut comps = Vec::with_capacity(params.len());
    let mut summary = Vec::with_capacity(params.len());
    for text in params {
        let p = parse_complex(text)?;
        let pair = if sym.is_anti_analytic() {
            antianalytic_eigen(sym, p, dim)?
        } else if let Some(tri) = sym.as_tridiagonal() {
            tridiagonal_eigenvector(&tri, p, dim)?
        } else {
            return Err(CliError::usage(
                "eigen parameters need an anti-analytic or tridiagonal symbol",
            ));
        };
        summary.push(EigenSummary {
            param: p,
            eigenvalue: pair.eigenvalue,
        });
        comps.push(EigenComponent::new(
            pair.eigenvalue,
            pair.vector,
            C64::new(1.0, 0.0),
        ));
    }
    Ok((comps, summary))
}

pub fn cmd_witness(args: &WitnessArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let sym = symbol(common)?;
    let (csv, out) = if !args.small.is_empty() {
        let t = section(&sym, common.dim)?;
        let (small, small_summary) = eigen_components(&sym, &args.small, common.dim)?;
        let (large, large_summary) = eigen_components(&sym, &args.large, common.dim)?;
        let n = common.steps.unwrap_or(DEFAULT_WITNESS_STEPS);
        let report = gs_witness(&t, &small, &large, n)?;
        let csv = csv_string(|buf| report.write_csv(buf))?;
        (
            csv,
            WitnessOutput::Eigen {
                small: small_summary,
                large: large_summary,
                report,
            },
        )
    } else {
        let tri = tridiagonal(common)?;
        let opts = DemoOptions {
            eps: args.eps,
            samples: args.samples,
            max_steps: common.steps.unwrap_or(DEFAULT_DEMO_STEPS),
            seed: common.seed,
            tol: common.tol,
            margin: args.margin,
        };
        let x = parse_vector(&args.x, common.dim)?;
        let y = parse_vector(&args.y, common.dim)?;
        let report = transitivity_demo(&tri, &x, &y, &opts)?;
        let csv = csv_string(|buf| report.witness.write_csv(buf))?;
        (csv, WitnessOutput::Demo { report })
    };
    Ok(Outcome::ok(match common.format {
        Format::Json => to_json(&out),
        Format::Csv => csv,
    }))
}

#[derive(Serialize)]
struct NormOutput {
    dim: usize,
    estimate: f64,
    sup_norm: f64,
    tol: f64,
    max_iter: usize,
}

pub fn cmd_norm(args: &NormArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let sym = symbol(common)?;
    let t = section(&sym, common.dim)?;
    let out = NormOutput {
        dim: common.dim,
        estimate: operator_norm_estimate(&t, common.tol, args.max_iter)?,
        sup_norm: sym.sup_norm(CIRCLE_GRID),
        tol: common.tol,
        max_iter: args.max_iter,
    };
    Ok(Outcome::ok(match common.format {
        Format::Json => to_json(&out),
        Format::Csv => format!(
            "dim,estimate,sup_norm\n{},{},{}\n",
            out.dim, out.estimate, out.sup_norm
        ),
    }))
}

#[derive(Serialize)]
struct PointLocation {
    lambda: C64,
    containment: Containment,
    /// Canonical parameter `z0` with `F(z0) = λ`, for interior points.
    annulus_param: Option<AnnulusParam>,
}

#[derive(Serialize)]
struct EllipseOutput {
    symbol: TridiagonalSymbol,
    geometry: EllipseGeometry,
    circle_min_theta: f64,
    circle_min_level: f64,
    relation: CircleRelation,
    point: Option<PointLocation>,
}

pub fn cmd_ellipse(args: &EllipseArgs) -> Result<Outcome, CliError> {
    let common = &args.common;
    let tri = tridiagonal(common)?;
    let geometry = tri.ellipse()?;
    if common.format == Format::Csv {
        let n = common.grid.max(8);
        let mut body = String::from("theta,x,y\n");
        for k in 0..n {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let w = tri.eval(theta);
            body.push_str(&format!("{theta},{},{}\n", w.re, w.im));
        }
        return Ok(Outcome::ok(body));
    }
    let (circle_min_theta, circle_min_level) = tri.circle_level_minimum()?;
    let point = match &args.lambda {
        None => None,
        Some(text) => {
            let lambda = parse_complex(text)?;
            let containment = tri.ellipse_contains(lambda, common.tol)?;
            let annulus_param = match containment {
                Containment::Inside => tri.annulus_param_solve(lambda).ok(),
                _ => None,
            };
            Some(PointLocation {
                lambda,
                containment,
                annulus_param,
            })
        }
    };
    Ok(Outcome::ok(to_json(&EllipseOutput {
        symbol: tri,
        geometry,
        circle_min_theta,
        circle_min_level,
        relation: tri.ellipse_intersects_unit_circle(common.tol)?,
        point,
    })))
}

/// Checks shared by every command that takes a finite section.
pub fn validate(common: &Common) -> Result<(), CliError> {
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Err(CliError::usage("--tol must be a positive number"));
    }
    Ok(())
}

//! Numerical toolkit for the linear dynamics of Toeplitz operators on the
//! Hardy space `H²`.
//!
//! Symbols are trigonometric polynomials ([`LaurentSymbol`]); their Toeplitz
//! operators are represented by banded finite sections ([`TruncatedToeplitz`])
//! acting on Taylor coefficient vectors. On top of that the crate provides
//!
//! * winding numbers, Fredholm indices and rasterised spectra ([`spectral`]),
//! * hypercyclicity decisions for analytic, anti-analytic and tridiagonal
//!   symbols, with independent obstruction checks ([`classifier`]),
//! * closed-form eigenvectors and their finite-section residuals
//!   ([`eigensystem`]),
//! * orbits, Godefroy–Shapiro transitivity witnesses and hyponormal growth
//!   checks ([`dynamics`]).

pub mod classifier;
pub mod dynamics;
pub mod eigensystem;
mod error;
mod numeric;
pub mod operator;
pub mod spectral;
pub mod symbol;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use classifier::{classify, ClassifyOptions, Verdict, VerdictStatus};
pub use operator::{BilateralCoeffVector, CoeffVector, TruncatedToeplitz};
pub use symbol::{EllipseGeometry, LaurentSymbol, TridiagonalSymbol};

//! Self-contained numeric substrate: fractional-order Bessel functions,
//! adaptive Simpson quadrature, and scan-then-bisection root finding.
//!
//! Everything here is a pure function of its inputs — same inputs, same
//! bits — so the routines are safe to call from any number of threads.

mod bessel;
mod quad;
mod roots;

pub use bessel::bessel_j;
pub use quad::{integrate, integrate_with_initial_panels, Quadrature};
pub use roots::first_positive_root;

use thiserror::Error;

/// Errors from the numeric substrate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    /// Input outside the routine's domain (negative argument, NaN, bad bracket).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iteration budget ran out before the requested tolerance was met.
    #[error("did not converge: {0}")]
    NonConvergence(String),
    /// No sign change was found while scanning for a root bracket.
    #[error("no sign change: {0}")]
    NoSignChange(String),
}

/// Convergence control for quadrature and root finding.
///
/// At least one of `absolute`/`relative` must be strictly positive, and
/// `max_refinements` must be at least 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute error target (same units as the result).
    pub absolute: f64,
    /// Relative error target (dimensionless).
    pub relative: f64,
    /// Maximum number of interval refinements (bisection depth).
    pub max_refinements: u32,
}

impl Tolerance {
    /// Build a tolerance, rejecting non-finite or all-zero targets.
    pub fn new(absolute: f64, relative: f64, max_refinements: u32) -> Result<Self, NumericsError> {
        let tol = Tolerance { absolute, relative, max_refinements };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !self.absolute.is_finite() || self.absolute < 0.0 {
            return Err(NumericsError::Domain(format!(
                "tolerance.absolute must be finite and >= 0, got {}",
                self.absolute
            )));
        }
        if !self.relative.is_finite() || self.relative < 0.0 {
            return Err(NumericsError::Domain(format!(
                "tolerance.relative must be finite and >= 0, got {}",
                self.relative
            )));
        }
        if self.absolute == 0.0 && self.relative == 0.0 {
            return Err(NumericsError::Domain(
                "at least one of tolerance.absolute / tolerance.relative must be > 0".into(),
            ));
        }
        if self.max_refinements < 1 {
            return Err(NumericsError::Domain("tolerance.max_refinements must be >= 1".into()));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    /// Default used throughout the model chain: 1e-9 absolute, 1e-9
    /// relative, 30 refinements.
    fn default() -> Self {
        Tolerance { absolute: 1e-9, relative: 1e-9, max_refinements: 30 }
    }
}

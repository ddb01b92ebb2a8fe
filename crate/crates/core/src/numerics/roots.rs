//! Smallest-positive-root finding by scan-then-bisection.

use super::{NumericsError, Tolerance};

/// Number of equal scan steps over (0, bracket_hint]. Roots closer
/// together than `bracket_hint / SCAN_STEPS` may be skipped.
const SCAN_STEPS: usize = 1024;

/// Find the smallest positive root of `f` in `(0, bracket_hint]`.
///
/// The interval is scanned left to right in `SCAN_STEPS` equal steps until
/// a sign change is bracketed, then the bracket is bisected until its
/// width is below `max(tol.absolute, tol.relative·|midpoint|)`. The value
/// of `f` at 0 is never consulted, so functions that vanish at the origin
/// (such as `J_v` for v > 0) are handled correctly.
pub fn first_positive_root<F>(
    f: F,
    bracket_hint: f64,
    tol: &Tolerance,
) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    tol.validate()?;
    if !bracket_hint.is_finite() || bracket_hint <= 0.0 {
        return Err(NumericsError::Domain(format!(
            "bracket_hint must be finite and > 0, got {bracket_hint}"
        )));
    }

    let eval = |x: f64| -> Result<f64, NumericsError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::Domain(format!("function is not finite at x = {x}")))
        }
    };

    let step = bracket_hint / SCAN_STEPS as f64;
    let mut lo = step;
    let mut flo = eval(lo)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    let mut bracket = None;
    for i in 2..=SCAN_STEPS {
        let hi = if i == SCAN_STEPS { bracket_hint } else { step * i as f64 };
        let fhi = eval(hi)?;
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() != fhi.signum() {
            bracket = Some((lo, flo, hi));
            break;
        }
        lo = hi;
        flo = fhi;
    }
    let (mut lo, mut flo, mut hi) = bracket.ok_or_else(|| {
        NumericsError::NoSignChange(format!("no sign change found in (0, {bracket_hint}]"))
    })?;

    // Interval halves every pass, so ~1100 passes reach subnormal widths;
    // the cap only guards against a degenerate tolerance.
    for _ in 0..4096 {
        let mid = 0.5 * (lo + hi);
        let target = tol.absolute.max(tol.relative * mid.abs());
        if hi - lo <= target || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fmid = eval(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Err(NumericsError::NonConvergence("bisection failed to reach tolerance".into()))
}

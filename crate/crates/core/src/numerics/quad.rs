//! Adaptive composite Simpson quadrature.
//!
//! The interval is split into a fixed number of initial panels; each panel
//! is refined by bisection with the classic Richardson acceptance test
//! `|S2 - S1| <= 15·eps`, where the panel's error budget `eps` is its
//! length-proportional share of the global target. Accepted panels
//! contribute the extrapolated value `S2 + (S2 - S1)/15` and an error
//! estimate of `|S2 - S1|/15`. Evaluation order is fixed, so the result is
//! a pure function of the inputs.

use super::{NumericsError, Tolerance};

/// Result of a quadrature: the value and the accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
}

const DEFAULT_INITIAL_PANELS: usize = 8;

/// Integrate `f` over `[a, b]` to the requested tolerance.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Quadrature, NumericsError>
where
    F: Fn(f64) -> f64,
{
    integrate_with_initial_panels(f, a, b, tol, DEFAULT_INITIAL_PANELS)
}

/// Same as [`integrate`] but with an explicit initial panel count
/// (useful for convergence studies; halving the panel width should move
/// the result by less than the reported error estimate).
pub fn integrate_with_initial_panels<F>(
    f: F,
    a: f64,
    b: f64,
    tol: &Tolerance,
    initial_panels: usize,
) -> Result<Quadrature, NumericsError>
where
    F: Fn(f64) -> f64,
{
    tol.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::Domain(format!("bounds must be finite, got [{a}, {b}]")));
    }
    if a > b {
        return Err(NumericsError::Domain(format!("lower bound {a} exceeds upper bound {b}")));
    }
    if initial_panels == 0 {
        return Err(NumericsError::Domain("initial_panels must be >= 1".into()));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error_estimate: 0.0 });
    }

    let eval = |x: f64| -> Result<f64, NumericsError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::Domain(format!("integrand is not finite at x = {x}")))
        }
    };

    // Crude whole-interval estimate to anchor the relative tolerance.
    let width = b - a;
    let n = initial_panels;
    let mut knots = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = if i == n { b } else { a + width * (i as f64 / n as f64) };
        knots.push((x, eval(x)?));
    }
    let mut panels = Vec::with_capacity(n);
    let mut rough = 0.0;
    for w in knots.windows(2) {
        let (xl, fl) = w[0];
        let (xr, fr) = w[1];
        let xm = 0.5 * (xl + xr);
        let fm = eval(xm)?;
        let s = simpson(xl, xr, fl, fm, fr);
        rough += s;
        panels.push((xl, fl, xm, fm, xr, fr, s));
    }
    let eps_total = tol.absolute.max(tol.relative * rough.abs());

    let mut value = 0.0;
    let mut err = 0.0;
    for (xl, fl, xm, fm, xr, fr, s) in panels {
        let eps = eps_total * ((xr - xl) / width);
        let q = refine(&eval, xl, fl, xm, fm, xr, fr, s, eps, tol.max_refinements)?;
        value += q.value;
        err += q.error_estimate;
    }
    Ok(Quadrature { value, error_estimate: err })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<E>(
    eval: &E,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth_left: u32,
) -> Result<Quadrature, NumericsError>
where
    E: Fn(f64) -> Result<f64, NumericsError>,
{
    let ml = 0.5 * (a + m);
    let mr = 0.5 * (m + b);
    let fml = eval(ml)?;
    let fmr = eval(mr)?;
    let left = simpson(a, m, fa, fml, fm);
    let right = simpson(m, b, fm, fmr, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps || m <= a || b <= m {
        // Richardson extrapolation; the m <= a / b <= m guards stop at the
        // resolution limit of f64 midpoints.
        return Ok(Quadrature {
            value: left + right + delta / 15.0,
            error_estimate: delta.abs() / 15.0,
        });
    }
    if depth_left == 0 {
        return Err(NumericsError::NonConvergence(format!(
            "quadrature exhausted max_refinements on [{a}, {b}] (|S2-S1| = {:.3e}, budget {:.3e})",
            delta.abs(),
            15.0 * eps
        )));
    }
    let l = refine(eval, a, fa, ml, fml, m, fm, left, 0.5 * eps, depth_left - 1)?;
    let r = refine(eval, m, fm, mr, fmr, b, fb, right, 0.5 * eps, depth_left - 1)?;
    Ok(Quadrature { value: l.value + r.value, error_estimate: l.error_estimate + r.error_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn default_tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn linear_integrand_is_exact() {
        let q = integrate(|x| x, 0.0, 1.0, &default_tol()).unwrap();
        assert_abs_diff_eq!(q.value, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn sine_over_half_period() {
        let q = integrate(|x| x.sin(), 0.0, PI, &default_tol()).unwrap();
        assert_abs_diff_eq!(q.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_interval_is_zero() {
        let q = integrate(|x| x.exp(), 3.0, 3.0, &default_tol()).unwrap();
        assert_eq!(q.value, 0.0);
        assert_eq!(q.error_estimate, 0.0);
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, &default_tol()),
            Err(NumericsError::Domain(_))
        ));
    }

    #[test]
    fn non_finite_integrand_rejected() {
        assert!(matches!(
            integrate(|x| 1.0 / x, 0.0, 1.0, &default_tol()),
            Err(NumericsError::Domain(_))
        ));
    }

    #[test]
    fn refinement_budget_exhaustion_reported() {
        let tight = Tolerance { absolute: 1e-15, relative: 0.0, max_refinements: 1 };
        let r = integrate(|x| (40.0 * x).sin().exp(), 0.0, 3.0, &tight);
        assert!(matches!(r, Err(NumericsError::NonConvergence(_))));
    }

    #[test]
    fn deterministic_across_calls() {
        let a = integrate(|x| (x * x).sin(), 0.0, 4.0, &default_tol()).unwrap();
        let b = integrate(|x| (x * x).sin(), 0.0, 4.0, &default_tol()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn halving_initial_panel_width_moves_result_less_than_estimate() {
        for f in [
            (|x: f64| x.sin()) as fn(f64) -> f64,
            |x| (0.7 * x).exp(),
            |x| 1.0 / (1.0 + x * x),
        ] {
            let coarse = integrate_with_initial_panels(f, 0.0, PI, &default_tol(), 8).unwrap();
            let fine = integrate_with_initial_panels(f, 0.0, PI, &default_tol(), 16).unwrap();
            assert!(
                (coarse.value - fine.value).abs() <= coarse.error_estimate.max(1e-15),
                "delta {} vs estimate {}",
                (coarse.value - fine.value).abs(),
                coarse.error_estimate
            );
        }
    }
}

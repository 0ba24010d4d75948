//! Brute-force check of the closed-form swap equations: integrate a curve's
//! marginal price with adaptive Simpson quadrature and compare the area to the
//! swap output.
//!
//! The oracle only ever sees the `price_at_x` / `inverse_price_at_y`
//! callbacks of a curve. It never calls a swap formula.

use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::params::{rel_diff, FormTag, PoolState, ValidatedSpec};

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 60;
/// Largest relative deviation at which a comparison passes.
pub const ORACLE_REL_TOL: f64 = 1e-8;

/// Subintervals whose Simpson refinement changes by less than this many
/// ulps of the local estimate are accepted even if the absolute target is
/// below round-off.
const ROUNDOFF_ULPS: f64 = 64.0;

/// Description of a single integral of a marginal-price function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralSpec {
    /// Which form's price function is integrated.
    pub integrand: FormTag,
    pub lower: f64,
    pub upper: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl IntegralSpec {
    pub fn new(integrand: FormTag, lower: f64, upper: f64) -> Self {
        IntegralSpec {
            integrand,
            lower,
            upper,
            abs_tol: DEFAULT_ABS_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the Richardson error estimates of accepted subintervals.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` (either orientation).
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !(abs_tol > 0.0) {
        return Err(CurveError::domain("abs_tol", "must be positive"));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(CurveError::domain(
            "lower",
            "integration bounds must be finite",
        ));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        let q = adaptive_simpson(f, b, a, abs_tol, max_depth)?;
        return Ok(Quadrature {
            value: -q.value,
            ..q
        });
    }

    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let root = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
    };
    let mut evaluations = 3;
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut worst = 0.0f64;
    let mut stack = vec![(root, abs_tol, 0u32)];

    while let Some((p, eps, depth)) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let (flm, frm) = (f(lm), f(rm));
        evaluations += 2;
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        let refined = left + right + delta / 15.0;
        if !refined.is_finite() {
            return Err(CurveError::domain(
                "integrand",
                "non-finite value inside the interval",
            ));
        }

        let roundoff = ROUNDOFF_ULPS * f64::EPSILON * (left.abs() + right.abs());
        let unsplittable = lm <= p.a || rm >= p.b;
        if delta.abs() <= 15.0 * eps || delta.abs() <= roundoff || unsplittable {
            value += refined;
            error_estimate += delta.abs() / 15.0;
            continue;
        }
        if depth >= max_depth {
            worst = worst.max(delta.abs() / 15.0);
            return Err(CurveError::ConvergenceFailure {
                max_depth,
                estimate: worst,
            });
        }
        let half = 0.5 * eps;
        stack.push((
            Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            },
            half,
            depth + 1,
        ));
        stack.push((
            Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            },
            half,
            depth + 1,
        ));
    }

    Ok(Quadrature {
        value,
        error_estimate,
        evaluations,
    })
}

fn check_range(spec: &ValidatedSpec, coordinate: &'static str, from: f64, to: f64) -> Result<()> {
    let g = spec.geometry();
    let limit = if coordinate == "x" { g.x_int } else { g.y_int };
    let unbounded = !limit.is_finite();
    for v in [from, to] {
        let ok = v.is_finite()
            && if unbounded {
                v > 0.0
            } else {
                v >= 0.0 && v <= limit * (1.0 + 1e-12)
            };
        if !ok {
            return Err(CurveError::BoundsExceeded {
                coordinate,
                value: v,
                limit,
            });
        }
    }
    Ok(())
}

/// `dy` for moving the pool's x balance from `x_from` to `x_to`, as the
/// integral of `dy/dx` over `[x_from, x_to]`.
pub fn integrate_price_curve(
    spec: &ValidatedSpec,
    x_from: f64,
    x_to: f64,
    tol: f64,
) -> Result<f64> {
    integrate(
        &IntegralSpec {
            integrand: spec.form(),
            lower: x_from,
            upper: x_to,
            abs_tol: tol,
            max_depth: DEFAULT_MAX_DEPTH,
        },
        spec,
    )
    .map(|q| q.value)
}

/// `dx` for moving the pool's y balance from `y_from` to `y_to`: the same
/// quadrature with the axes swapped.
pub fn integrate_inverse_price_curve(
    spec: &ValidatedSpec,
    y_from: f64,
    y_to: f64,
    tol: f64,
) -> Result<f64> {
    check_range(spec, "y", y_from, y_to)?;
    let curve = spec.curve();
    adaptive_simpson(
        |y| curve.inverse_price_at_y(y),
        y_from,
        y_to,
        tol,
        DEFAULT_MAX_DEPTH,
    )
    .map(|q| q.value)
}

/// Run an [`IntegralSpec`] against the curve whose form it names.
pub fn integrate(integral: &IntegralSpec, spec: &ValidatedSpec) -> Result<Quadrature> {
    if integral.integrand != spec.form() {
        return Err(CurveError::domain(
            "integrand",
            format!(
                "integrand {} does not match curve form {}",
                integral.integrand,
                spec.form()
            ),
        ));
    }
    check_range(spec, "x", integral.lower, integral.upper)?;
    let curve = spec.curve();
    adaptive_simpson(
        |x| curve.price_at_x(x),
        integral.lower,
        integral.upper,
        integral.abs_tol,
        integral.max_depth,
    )
}

/// Closed form against quadrature for one trade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub closed_form_dy: f64,
    pub quadrature_dy: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn new(closed_form_dy: f64, quadrature_dy: f64) -> Self {
        let abs_deviation = (closed_form_dy - quadrature_dy).abs();
        let rel_deviation = rel_diff(closed_form_dy, quadrature_dy);
        ComparisonReport {
            closed_form_dy,
            quadrature_dy,
            abs_deviation,
            rel_deviation,
            pass: rel_deviation <= ORACLE_REL_TOL,
        }
    }
}

/// Swap `dx` into `state` with the closed form and with quadrature, and
/// report how far apart they are. `rel_tol` is the quadrature's target
/// relative to the size of the integral, which is first estimated with a
/// fixed 64-panel composite Simpson rule.
pub fn oracle_compare(
    spec: &ValidatedSpec,
    state: PoolState,
    dx: f64,
    rel_tol: f64,
) -> Result<ComparisonReport> {
    let closed = spec.curve().swap_given_dx(state, dx)?;
    let (from, to) = (state.x, state.x + dx);
    check_range(spec, "x", from, to)?;
    let curve = spec.curve();
    let coarse = composite_simpson(|x| curve.price_at_x(x), from, to, 64);
    let abs_tol = (rel_tol * coarse.abs()).max(f64::MIN_POSITIVE);
    let quad = integrate_price_curve(spec, from, to, abs_tol)?;
    Ok(ComparisonReport::new(closed.dy, quad))
}

fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == panels { b } else { lo + h };
            simpson(lo, hi, f(lo), f(0.5 * (lo + hi)), f(hi))
        })
        .sum()
}

//! Exact translation between parameterizations, and the three natural
//! invariants that read the concentration constant `c` off any on-curve state.
//!
//! Every pair of bounded forms has its own conversion rather than routing
//! through a hub, so composing translations exercises independent formulas.

use serde::{Deserialize, Serialize};

use crate::carbon::CarbonRealCurve;
use crate::error::{CurveError, Result};
use crate::natural::NaturalCurve;
use crate::params::{
    approx_eq, validate, Anchor, BancorV2Params, CarbonParams, Curve, CurveGeometry, CurveSpec,
    FormTag, NaturalParams, PoolState, UniswapV3Params, ValidatedSpec, DEFAULT_REL_TOL,
};
use crate::uniswap::UniV3RealCurve;

/// Outcome of a translation: how far the target's geometry strays from the
/// source's, field by field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub source: FormTag,
    pub target: FormTag,
    pub max_relative_deviation: f64,
}

/// Translate `spec` into the `target` parameterization.
pub fn translate(spec: &ValidatedSpec, target: FormTag) -> Result<ValidatedSpec> {
    translate_with_report(spec, target).map(|(out, _)| out)
}

pub fn translate_with_report(
    spec: &ValidatedSpec,
    target: FormTag,
) -> Result<(ValidatedSpec, TranslationReport)> {
    let source = spec.form();
    if source == target {
        let report = TranslationReport {
            source,
            target,
            max_relative_deviation: 0.0,
        };
        return Ok((spec.clone(), report));
    }
    if source == FormTag::Reference {
        return Err(CurveError::domain(
            "form",
            format!("a reference curve has no price bounds and cannot be expressed as {target}"),
        ));
    }
    if target == FormTag::Reference {
        return Err(CurveError::domain(
            "form",
            format!(
                "{source} describes a bounded curve; the reference form cannot carry its bounds"
            ),
        ));
    }

    let out = validate(convert(spec.concrete(), target))?;
    let deviation = spec.geometry().max_rel_deviation(&out.geometry());
    if !(deviation <= DEFAULT_REL_TOL) {
        return Err(CurveError::domain(
            "form",
            format!("translation to {target} lost precision (relative deviation {deviation:e})"),
        ));
    }
    let report = TranslationReport {
        source,
        target,
        max_relative_deviation: deviation,
    };
    Ok((out, report))
}

fn convert(curve: &Curve, target: FormTag) -> CurveSpec {
    match curve {
        Curve::BancorV2(c) => from_bancor(c.params(), target),
        Curve::UniswapV3(c) => from_uniswap(c, target),
        Curve::Carbon(c) => from_carbon(c, target),
        Curve::Natural(c) => from_natural(c, target),
        Curve::Reference(_) => unreachable!("reference sources are rejected before conversion"),
    }
}

fn from_bancor(p: BancorV2Params, target: FormTag) -> CurveSpec {
    let BancorV2Params {
        x0,
        y0,
        amplification: a,
    } = p;
    let am1 = a - 1.0;
    let r = a / am1;
    let p0 = y0 / x0;
    match target {
        FormTag::UniswapV3 => CurveSpec::UniswapV3(UniswapV3Params {
            liquidity: a * x0.sqrt() * y0.sqrt(),
            p_high: r * r * p0,
            p_low: p0 / (r * r),
        }),
        FormTag::Carbon => {
            // sqrt(p_high) - sqrt(p_low) = sqrt(p0) (r - 1/r), with r - 1 = 1 / (A - 1)
            let width = (r + 1.0) / (am1 * r);
            CurveSpec::Carbon(CarbonParams {
                a: p0.sqrt() * width,
                b: p0.sqrt() / r,
                z: y0 * (2.0 * a - 1.0) / am1,
            })
        }
        FormTag::Natural => CurveSpec::Natural(NaturalParams {
            anchor: Anchor::Asymptotes {
                x_asym: -x0 * am1,
                y_asym: -y0 * am1,
            },
            c: r * r,
        }),
        FormTag::BancorV2 | FormTag::Reference => unreachable!(),
    }
}

fn from_uniswap(curve: &UniV3RealCurve, target: FormTag) -> CurveSpec {
    let UniswapV3Params {
        liquidity: l,
        p_high,
        p_low,
    } = curve.params();
    let (sh, sl) = (p_high.sqrt(), p_low.sqrt());
    match target {
        FormTag::BancorV2 => {
            let (x0, y0) = curve.center();
            CurveSpec::BancorV2(BancorV2Params {
                x0,
                y0,
                amplification: curve.amplification(),
            })
        }
        FormTag::Carbon => {
            let a = (p_high - p_low) / (sh + sl);
            CurveSpec::Carbon(CarbonParams { a, b: sl, z: l * a })
        }
        FormTag::Natural => CurveSpec::Natural(NaturalParams {
            anchor: Anchor::Asymptotes {
                x_asym: -l / sh,
                y_asym: -l * sl,
            },
            c: sh / sl,
        }),
        FormTag::UniswapV3 | FormTag::Reference => unreachable!(),
    }
}

fn from_carbon(curve: &CarbonRealCurve, target: FormTag) -> CurveSpec {
    let CarbonParams { a, b, z } = curve.params();
    match target {
        FormTag::BancorV2 => {
            let r = curve.center_and_reference();
            CurveSpec::BancorV2(BancorV2Params {
                x0: r.x0,
                y0: r.y0,
                amplification: r.amplification,
            })
        }
        FormTag::UniswapV3 => CurveSpec::UniswapV3(UniswapV3Params {
            liquidity: z / a,
            p_high: (a + b) * (a + b),
            p_low: b * b,
        }),
        FormTag::Natural => CurveSpec::Natural(NaturalParams {
            anchor: Anchor::Asymptotes {
                x_asym: -z / (a * (a + b)),
                y_asym: -b * z / a,
            },
            c: (a + b) / b,
        }),
        FormTag::Carbon | FormTag::Reference => unreachable!(),
    }
}

fn from_natural(curve: &NaturalCurve, target: FormTag) -> CurveSpec {
    let c = curve.params().c;
    let (x_asym, y_asym) = curve.asymptotes();
    let root = c.sqrt();
    let p0 = y_asym / x_asym;
    match target {
        FormTag::BancorV2 => {
            let (x0, y0) = curve.center();
            CurveSpec::BancorV2(BancorV2Params {
                x0,
                y0,
                amplification: amplification_from_c(c),
            })
        }
        FormTag::UniswapV3 => CurveSpec::UniswapV3(UniswapV3Params {
            liquidity: root * (-x_asym).sqrt() * (-y_asym).sqrt(),
            p_high: p0 * c,
            p_low: p0 / c,
        }),
        FormTag::Carbon => CurveSpec::Carbon(CarbonParams {
            a: p0.sqrt() * (c - 1.0) / root,
            b: p0.sqrt() / root,
            z: -y_asym * (c - 1.0),
        }),
        FormTag::Natural | FormTag::Reference => unreachable!(),
    }
}

/// Bancor amplification recovered from the concentration constant alone,
/// `A = sqrt(c) / (sqrt(c) - 1)`.
pub fn amplification_from_c(c: f64) -> f64 {
    let root = c.sqrt();
    root * (root + 1.0) / (c - 1.0)
}

/// `2A - 1 = (sqrt(c) + 1) / (sqrt(c) - 1)`.
pub fn intercept_ratio_from_c(c: f64) -> f64 {
    let root = c.sqrt();
    (root + 1.0) * (root + 1.0) / (c - 1.0)
}

/// `c` read through the geometric center:
/// `(x - x0)^2 (y - y0)^2 / (x y - x0 y0)^2`.
pub fn natural_invariant_center(state: PoolState, x0: f64, y0: f64) -> Result<f64> {
    let (dx, dy) = (state.x - x0, state.y - y0);
    let num = dx * dy;
    // x y - x0 y0 without forming the two large products
    let den = dx * state.y + x0 * dy;
    if den == 0.0 || (dx == 0.0 && dy == 0.0) {
        return Err(CurveError::Indeterminate("geometric center"));
    }
    let ratio = num / den;
    Ok(ratio * ratio)
}

/// `c` read through the intercepts: `(x_int - x)(y_int - y) / (x y)`.
pub fn natural_invariant_intercepts(state: PoolState, x_int: f64, y_int: f64) -> Result<f64> {
    if state.x == 0.0 || state.y == 0.0 {
        return Err(CurveError::Indeterminate("intercept"));
    }
    Ok((x_int - state.x) * (y_int - state.y) / (state.x * state.y))
}

/// `c` read through the asymptotes: `(x - x_asym)(y - y_asym) / (x_asym y_asym)`.
/// Defined everywhere on the curve.
pub fn natural_invariant_asymptotes(state: PoolState, x_asym: f64, y_asym: f64) -> Result<f64> {
    if !(x_asym < 0.0) {
        return Err(CurveError::domain("x_asym", "must be negative"));
    }
    if !(y_asym < 0.0) {
        return Err(CurveError::domain("y_asym", "must be negative"));
    }
    Ok((state.x - x_asym) * (state.y - y_asym) / (x_asym * y_asym))
}

/// Values of the three natural invariants at a state; `None` where a form is
/// indeterminate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalReadings {
    pub center: Option<f64>,
    pub intercepts: Option<f64>,
    pub asymptotes: f64,
}

/// Geometric center `(x0, y0)` of a bounded curve, `-asym * (sqrt(c) - 1)`.
pub fn center_of(geometry: &CurveGeometry) -> (f64, f64) {
    let gap = (geometry.c - 1.0) / (geometry.c.sqrt() + 1.0);
    (-geometry.x_asym * gap, -geometry.y_asym * gap)
}

pub fn natural_readings(state: PoolState, geometry: &CurveGeometry) -> Result<NaturalReadings> {
    let (x0, y0) = center_of(geometry);
    let center = match natural_invariant_center(state, x0, y0) {
        Ok(v) => Some(v),
        Err(CurveError::Indeterminate(_)) => None,
        Err(e) => return Err(e),
    };
    let intercepts = match natural_invariant_intercepts(state, geometry.x_int, geometry.y_int) {
        Ok(v) => Some(v),
        Err(CurveError::Indeterminate(_)) => None,
        Err(e) => return Err(e),
    };
    let asymptotes = natural_invariant_asymptotes(state, geometry.x_asym, geometry.y_asym)?;
    Ok(NaturalReadings {
        center,
        intercepts,
        asymptotes,
    })
}

/// All determinate natural invariants at `state` equal `geometry.c` to 1e-9.
pub fn equality_of_three(state: PoolState, geometry: &CurveGeometry) -> bool {
    let Ok(r) = natural_readings(state, geometry) else {
        return false;
    };
    [r.center, r.intercepts, Some(r.asymptotes)]
        .into_iter()
        .flatten()
        .all(|v| approx_eq(v, geometry.c, DEFAULT_REL_TOL))
}

#![allow(dead_code)]

use cl_curves::{validate, BancorV2Params, CurveSpec, FormTag, PoolState, ValidatedSpec};
use proptest::prelude::*;

pub fn bancor(x0: f64, y0: f64, a: f64) -> ValidatedSpec {
    validate(CurveSpec::BancorV2(BancorV2Params {
        x0,
        y0,
        amplification: a,
    }))
    .unwrap()
}

pub fn worked() -> ValidatedSpec {
    bancor(100.0, 100.0, 2.0)
}

/// Bancor curves with `x0, y0` log-uniform in `[1e-3, 1e9]` and `A` in `(1.01, 100)`.
pub fn arb_bancor() -> impl Strategy<Value = ValidatedSpec> {
    (-3.0f64..9.0, -3.0f64..9.0, 1.01f64..100.0)
        .prop_map(|(lx, ly, a)| bancor(10f64.powf(lx), 10f64.powf(ly), a))
}

/// A curve in every bounded form, all describing the same real curve.
pub fn all_forms(spec: &ValidatedSpec) -> Vec<ValidatedSpec> {
    FormTag::BOUNDED
        .iter()
        .map(|&f| cl_curves::rosetta::translate(spec, f).unwrap())
        .collect()
}

/// The on-curve state at fraction `t` of the x range.
pub fn state_at(spec: &ValidatedSpec, t: f64) -> PoolState {
    let x = t * spec.geometry().x_int;
    PoolState {
        x,
        y: spec.curve().y_at_x(x).max(0.0),
    }
}

//! Parameter types for every curve form, the tagged [`CurveSpec`] that
//! carries them, and validation into a [`ValidatedSpec`].
//!
//! All arithmetic is `f64`. Equality between derived quantities is always a
//! relative comparison; see [`rel_diff`] and [`approx_eq`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bancor::BancorRealCurve;
use crate::carbon::CarbonRealCurve;
use crate::curve::BondingCurve;
use crate::error::{CurveError, Result};
use crate::natural::NaturalCurve;
use crate::reference::ReferenceCurve;
use crate::uniswap::UniV3RealCurve;

/// Default relative tolerance for on-curve checks and cross-form agreement.
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Absolute floor used by [`approx_eq`] when both sides are near zero.
pub const ABS_FLOOR: f64 = 1e-12;

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() / scale
}

/// `a` and `b` agree to `rel`, or are both within [`ABS_FLOOR`] of each other.
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= ABS_FLOOR || rel_diff(a, b) <= rel
}

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(CurveError::domain(field, "must be finite"));
    }
    if value <= 0.0 {
        return Err(CurveError::domain(field, "must be positive"));
    }
    Ok(value)
}

pub(crate) fn require_negative(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(CurveError::domain(field, "must be finite"));
    }
    if value >= 0.0 {
        return Err(CurveError::domain(field, "must be negative"));
    }
    Ok(value)
}

/// The unshifted reference hyperbola `x * y = x0 * y0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceParams {
    pub x0: f64,
    pub y0: f64,
}

/// Bancor v2 amplified curve: geometric center `(x0, y0)` and amplification `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BancorV2Params {
    pub x0: f64,
    pub y0: f64,
    #[serde(rename = "A")]
    pub amplification: f64,
}

/// Uniswap v3 position: liquidity `L` over the price range `[p_low, p_high]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniswapV3Params {
    #[serde(rename = "L")]
    pub liquidity: f64,
    pub p_high: f64,
    pub p_low: f64,
}

/// Carbon DeFi order: `a = sqrt(p_high) - sqrt(p_low)`, `b = sqrt(p_low)`,
/// and `z` the y-intercept (capacity in token y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarbonParams {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

/// The point a natural parameterization is pinned to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Anchor {
    Center { x0: f64, y0: f64 },
    Intercepts { x_int: f64, y_int: f64 },
    Asymptotes { x_asym: f64, y_asym: f64 },
}

/// Concentration constant `c` plus one anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaturalParams {
    pub anchor: Anchor,
    pub c: f64,
}

/// Which parameterization a spec uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    Reference,
    BancorV2,
    UniswapV3,
    Carbon,
    Natural,
}

impl FormTag {
    pub const ALL: [FormTag; 5] = [
        FormTag::Reference,
        FormTag::BancorV2,
        FormTag::UniswapV3,
        FormTag::Carbon,
        FormTag::Natural,
    ];

    /// Forms that describe a bounded (concentrated) real curve.
    pub const BOUNDED: [FormTag; 4] = [
        FormTag::BancorV2,
        FormTag::UniswapV3,
        FormTag::Carbon,
        FormTag::Natural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormTag::Reference => "reference",
            FormTag::BancorV2 => "bancor_v2",
            FormTag::UniswapV3 => "uniswap_v3",
            FormTag::Carbon => "carbon",
            FormTag::Natural => "natural",
        }
    }

    pub fn is_bounded(self) -> bool {
        self != FormTag::Reference
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormTag {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self> {
        FormTag::ALL
            .into_iter()
            .find(|tag| tag.as_str() == s)
            .ok_or_else(|| CurveError::domain("form", format!("unknown form {s:?}")))
    }
}

/// A curve in any of the supported parameterizations. This is the JSON
/// configuration format: `{"form": "bancor_v2", "x0": .., "y0": .., "A": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CurveSpec {
    Reference(ReferenceParams),
    BancorV2(BancorV2Params),
    UniswapV3(UniswapV3Params),
    Carbon(CarbonParams),
    Natural(NaturalParams),
}

impl CurveSpec {
    pub fn form(&self) -> FormTag {
        match self {
            CurveSpec::Reference(_) => FormTag::Reference,
            CurveSpec::BancorV2(_) => FormTag::BancorV2,
            CurveSpec::UniswapV3(_) => FormTag::UniswapV3,
            CurveSpec::Carbon(_) => FormTag::Carbon,
            CurveSpec::Natural(_) => FormTag::Natural,
        }
    }

    pub fn validate(self) -> Result<ValidatedSpec> {
        validate(self)
    }
}

/// Real token balances of a pool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolState {
    pub x: f64,
    pub y: f64,
}

impl PoolState {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        for (field, v) in [("x", x), ("y", y)] {
            if !v.is_finite() {
                return Err(CurveError::domain(field, "must be finite"));
            }
            if v < 0.0 {
                return Err(CurveError::domain(field, "must be nonnegative"));
            }
        }
        Ok(PoolState { x, y })
    }

    /// The state after applying `delta`. Round-off that would leave a balance
    /// a hair below zero after a full depletion is clamped to zero.
    pub fn after(self, delta: SwapDelta) -> PoolState {
        PoolState {
            x: (self.x + delta.dx).max(0.0),
            y: (self.y + delta.dy).max(0.0),
        }
    }
}

/// Signed trade amounts seen from the pool: positive means the pool receives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SwapDelta {
    pub dx: f64,
    pub dy: f64,
}

impl SwapDelta {
    pub const ZERO: SwapDelta = SwapDelta { dx: 0.0, dy: 0.0 };

    pub fn is_zero(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }

    /// Opposite signs, and one side is zero only when both are.
    pub fn has_opposite_signs(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        self.dx != 0.0 && self.dy != 0.0 && self.dx.signum() == -self.dy.signum()
    }
}

/// Constants derived from any curve, independent of its parameterization.
///
/// For the unshifted reference curve the intercepts, `p_high` and `c` are
/// infinite, `p_low` is zero and the asymptotes sit on the axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveGeometry {
    pub x_int: f64,
    pub y_int: f64,
    pub x_asym: f64,
    pub y_asym: f64,
    pub p_high: f64,
    pub p_low: f64,
    pub p0: f64,
    pub c: f64,
    pub phi: f64,
}

impl CurveGeometry {
    pub fn fields(&self) -> [(&'static str, f64); 9] {
        [
            ("x_int", self.x_int),
            ("y_int", self.y_int),
            ("x_asym", self.x_asym),
            ("y_asym", self.y_asym),
            ("p_high", self.p_high),
            ("p_low", self.p_low),
            ("p0", self.p0),
            ("c", self.c),
            ("phi", self.phi),
        ]
    }

    /// Largest relative deviation between corresponding fields.
    pub fn max_rel_deviation(&self, other: &CurveGeometry) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .map(|(&(_, a), &(_, b))| {
                if a == b || (a - b).abs() <= ABS_FLOOR {
                    0.0
                } else {
                    rel_diff(a, b)
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn is_bounded(&self) -> bool {
        self.x_int.is_finite() && self.y_int.is_finite()
    }
}

/// A validated curve of one of the concrete forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Reference(ReferenceCurve),
    BancorV2(BancorRealCurve),
    UniswapV3(UniV3RealCurve),
    Carbon(CarbonRealCurve),
    Natural(NaturalCurve),
}

impl Curve {
    pub fn as_dyn(&self) -> &dyn BondingCurve {
        match self {
            Curve::Reference(c) => c,
            Curve::BancorV2(c) => c,
            Curve::UniswapV3(c) => c,
            Curve::Carbon(c) => c,
            Curve::Natural(c) => c,
        }
    }
}

/// A spec whose invariants have been checked, with the derived curve cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSpec {
    spec: CurveSpec,
    curve: Curve,
}

impl ValidatedSpec {
    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn form(&self) -> FormTag {
        self.spec.form()
    }

    pub fn curve(&self) -> &dyn BondingCurve {
        self.curve.as_dyn()
    }

    pub fn concrete(&self) -> &Curve {
        &self.curve
    }

    pub fn geometry(&self) -> CurveGeometry {
        self.curve().geometry()
    }
}

/// Check every parameter invariant and build the concrete curve.
pub fn validate(spec: CurveSpec) -> Result<ValidatedSpec> {
    let curve = match spec {
        CurveSpec::Reference(p) => Curve::Reference(ReferenceCurve::new(p)?),
        CurveSpec::BancorV2(p) => Curve::BancorV2(BancorRealCurve::new(p)?),
        CurveSpec::UniswapV3(p) => Curve::UniswapV3(UniV3RealCurve::new(p)?),
        CurveSpec::Carbon(p) => Curve::Carbon(CarbonRealCurve::new(p)?),
        CurveSpec::Natural(p) => Curve::Natural(NaturalCurve::new(p)?),
    };
    Ok(ValidatedSpec { spec, curve })
}

/// Geometry of a validated spec.
pub fn geometry(spec: &ValidatedSpec) -> CurveGeometry {
    spec.geometry()
}

//! Two-token concentrated-liquidity bonding curves.
//!
//! One curve can be written in several equivalent parameterizations:
//!
//! * `reference`: the constant-product hyperbola `x * y = x0 * y0`;
//! * `bancor_v2`: center `(x0, y0)` and amplification `A`;
//! * `uniswap_v3`: liquidity `L` and the price range `[p_low, p_high]`;
//! * `carbon`: the `(a, b, z)` order parameters;
//! * `natural`: the concentration constant `c` and one anchor point.
//!
//! Every bounded form validates into a [`ValidatedSpec`] exposing the same
//! [`BondingCurve`] interface, [`rosetta::translate`] converts between forms,
//! [`hyper_trig`] maps states onto the unit hyperbola, and [`quadrature`]
//! re-derives swap outputs by integrating marginal prices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bancor;
pub mod carbon;
pub mod curve;
pub mod error;
pub mod hyper_trig;
pub mod natural;
pub mod params;
pub mod quadrature;
pub mod reference;
pub mod rosetta;
pub mod uniswap;

pub use curve::BondingCurve;
pub use error::{CurveError, Result};
pub use params::{
    approx_eq, geometry, rel_diff, validate, Anchor, BancorV2Params, CarbonParams, Curve,
    CurveGeometry, CurveSpec, FormTag, NaturalParams, PoolState, ReferenceParams, SwapDelta,
    UniswapV3Params, ValidatedSpec, DEFAULT_REL_TOL,
};

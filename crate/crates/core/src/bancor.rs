//! Bancor v2: the amplified virtual curve `x_v * y_v = A^2 * x0 * y0` and the
//! real curve it induces,
//!
//! ```text
//! (x + x0 (A - 1)) * (y + y0 (A - 1)) = A^2 x0 y0
//! ```
//!
//! The real curve is the virtual curve shifted so that its operating segment
//! meets both axes. Shifts `H = x0 (A - 1)`, `V = y0 (A - 1)` and the scale
//! `S = A^2 x0 y0` are computed once per curve.

use serde::{Deserialize, Serialize};

use crate::curve::{check_segment, require_amount, BondingCurve};
use crate::error::{CurveError, Result};
use crate::params::{
    require_positive, BancorV2Params, CurveGeometry, FormTag, PoolState, SwapDelta,
};

/// Extent of the virtual curve's tradeable segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualBounds {
    pub min_xv: f64,
    pub max_xv: f64,
    pub min_yv: f64,
    pub max_yv: f64,
}

/// Points on the reference curve where its marginal price equals the price
/// bounds of the concentrated curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceBounds {
    pub p_high: f64,
    pub p_low: f64,
    pub p0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BancorRealCurve {
    params: BancorV2Params,
    h: f64,
    v: f64,
    s: f64,
    geometry: CurveGeometry,
}

impl BancorRealCurve {
    pub fn new(params: BancorV2Params) -> Result<Self> {
        let BancorV2Params {
            x0,
            y0,
            amplification: a,
        } = params;
        require_positive("x0", x0)?;
        require_positive("y0", y0)?;
        if !a.is_finite() {
            return Err(CurveError::domain("A", "must be finite"));
        }
        if a <= 1.0 {
            return Err(CurveError::domain("A", "must exceed 1"));
        }
        let am1 = a - 1.0;
        let h = x0 * am1;
        let v = y0 * am1;
        let s = a * a * x0 * y0;
        if !(s.is_finite() && s > 0.0 && h > 0.0 && v > 0.0) {
            return Err(CurveError::domain(
                "A",
                "derived curve constants are not representable",
            ));
        }

        // A / (A - 1) is the square root of the capstone constant.
        let ratio = a / am1;
        let p0 = y0 / x0;
        let geometry = CurveGeometry {
            x_int: x0 * (2.0 * a - 1.0) / am1,
            y_int: y0 * (2.0 * a - 1.0) / am1,
            x_asym: -h,
            y_asym: -v,
            p_high: ratio * ratio * p0,
            p_low: p0 / (ratio * ratio),
            p0,
            c: ratio * ratio,
            phi: 2.0 * (1.0 / am1).ln_1p(),
        };
        Ok(BancorRealCurve {
            params,
            h,
            v,
            s,
            geometry,
        })
    }

    pub fn params(&self) -> BancorV2Params {
        self.params
    }

    /// `(H, V)`: the horizontal and vertical shift of the virtual curve.
    pub fn shifts(&self) -> (f64, f64) {
        (self.h, self.v)
    }

    /// `S = A^2 x0 y0`, the virtual curve's scaling constant.
    pub fn scale(&self) -> f64 {
        self.s
    }

    pub fn virtual_bounds(&self) -> VirtualBounds {
        let BancorV2Params {
            x0,
            y0,
            amplification: a,
        } = self.params;
        let am1 = a - 1.0;
        VirtualBounds {
            min_xv: x0 * am1,
            max_xv: a * a * x0 / am1,
            min_yv: y0 * am1,
            max_yv: a * a * y0 / am1,
        }
    }

    pub fn price_bounds(&self) -> PriceBounds {
        let BancorV2Params {
            x0,
            y0,
            amplification: a,
        } = self.params;
        let am1 = a - 1.0;
        PriceBounds {
            p_high: a * a / (am1 * am1) * y0 / x0,
            p_low: am1 * am1 / (a * a) * y0 / x0,
            p0: y0 / x0,
        }
    }

    pub fn reference_bound_points(&self) -> ReferenceBounds {
        let BancorV2Params {
            x0,
            y0,
            amplification: a,
        } = self.params;
        let am1 = a - 1.0;
        ReferenceBounds {
            min_x: x0 * am1 / a,
            max_x: a * x0 / am1,
            min_y: y0 * am1 / a,
            max_y: a * y0 / am1,
        }
    }

    /// The concentration constant `A^2 / (A - 1)^2`.
    pub fn capstone_constant(&self) -> f64 {
        let a = self.params.amplification;
        let r = a / (a - 1.0);
        r * r
    }

    /// The concentration constant computed four ways: from `A`, from
    /// `p_high / p0`, from `p0 / p_low`, and from `sqrt(p_high / p_low)`.
    pub fn capstone_forms(&self) -> [f64; 4] {
        let p = self.price_bounds();
        [
            self.capstone_constant(),
            p.p_high / p.p0,
            p.p0 / p.p_low,
            (p.p_high / p.p_low).sqrt(),
        ]
    }
}

impl BondingCurve for BancorRealCurve {
    fn form(&self) -> FormTag {
        FormTag::BancorV2
    }

    fn geometry(&self) -> CurveGeometry {
        self.geometry
    }

    fn invariant_residual(&self, state: PoolState) -> f64 {
        ((state.x + self.h) * (state.y + self.v) - self.s).abs() / self.s
    }

    fn y_at_x(&self, x: f64) -> f64 {
        // S / (x + H) - V, using S - V H = V x_int
        self.v * (self.geometry.x_int - x) / (x + self.h)
    }

    fn x_at_y(&self, y: f64) -> f64 {
        self.h * (self.geometry.y_int - y) / (y + self.v)
    }

    fn price_at_x(&self, x: f64) -> f64 {
        let xv = x + self.h;
        -self.s / (xv * xv)
    }

    fn inverse_price_at_y(&self, y: f64) -> f64 {
        let yv = y + self.v;
        -self.s / (yv * yv)
    }

    fn marginal_price(&self, state: PoolState) -> Result<f64> {
        Ok(-(state.y + self.v) / (state.x + self.h))
    }

    fn swap_given_dx(&self, state: PoolState, dx: f64) -> Result<SwapDelta> {
        require_amount("dx", dx)?;
        self.check_state(state)?;
        if dx == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("x", state.x + dx, self.geometry.x_int)?;
        let dy = -dx * (state.y + self.v) / (state.x + dx + self.h);
        Ok(SwapDelta { dx, dy })
    }

    fn swap_given_dy(&self, state: PoolState, dy: f64) -> Result<SwapDelta> {
        require_amount("dy", dy)?;
        self.check_state(state)?;
        if dy == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("y", state.y + dy, self.geometry.y_int)?;
        let dx = -dy * (state.x + self.h) / (state.y + dy + self.v);
        Ok(SwapDelta { dx, dy })
    }
}

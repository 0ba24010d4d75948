//! Carbon DeFi orders in the `(a, b, z)` parameterization, with
//! `a = sqrt(p_high) - sqrt(p_low)`, `b = sqrt(p_low)` and `z` the y-intercept:
//!
//! ```text
//! (x + z / (a (a + b))) * (y + b z / a) = z^2 / a^2
//! ```
//!
//! Carbon only ever holds the y side of an order; the curve itself is
//! symmetric and both coordinates are handled like in the other forms.

use serde::{Deserialize, Serialize};

use crate::bancor::{PriceBounds, ReferenceBounds, VirtualBounds};
use crate::curve::{check_segment, require_amount, BondingCurve};
use crate::error::Result;
use crate::params::{require_positive, CarbonParams, CurveGeometry, FormTag, PoolState, SwapDelta};

/// Reference curve recovered from an order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarbonReference {
    pub x0: f64,
    pub y0: f64,
    pub k: f64,
    #[serde(rename = "A")]
    pub amplification: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarbonRealCurve {
    params: CarbonParams,
    hx: f64,
    vy: f64,
    sc: f64,
    geometry: CurveGeometry,
}

impl CarbonRealCurve {
    pub fn new(params: CarbonParams) -> Result<Self> {
        let CarbonParams { a, b, z } = params;
        require_positive("a", a)?;
        require_positive("b", b)?;
        require_positive("z", z)?;
        let apb = a + b;
        let hx = z / (a * apb);
        let vy = b * z / a;
        let sc = (z / a) * (z / a);
        if !(hx.is_finite() && vy.is_finite() && sc.is_finite() && sc > 0.0) {
            return Err(crate::error::CurveError::domain(
                "z",
                "derived curve constants are not representable",
            ));
        }
        let geometry = CurveGeometry {
            x_int: z / (b * apb),
            y_int: z,
            x_asym: -hx,
            y_asym: -vy,
            p_high: apb * apb,
            p_low: b * b,
            p0: b * apb,
            c: apb / b,
            phi: (a / b).ln_1p(),
        };
        Ok(CarbonRealCurve {
            params,
            hx,
            vy,
            sc,
            geometry,
        })
    }

    pub fn params(&self) -> CarbonParams {
        self.params
    }

    pub fn shifts(&self) -> (f64, f64) {
        (self.hx, self.vy)
    }

    /// Scale of the virtual curve, `(z / a)^2`.
    pub fn virtual_scale(&self) -> f64 {
        self.sc
    }

    /// `(p_high, p_low, p0)` and the redundant `a (a + b) = p_high - p0`.
    pub fn price_identities(&self) -> (PriceBounds, f64) {
        let CarbonParams { a, b, .. } = self.params;
        let apb = a + b;
        (
            PriceBounds {
                p_high: apb * apb,
                p_low: b * b,
                p0: b * apb,
            },
            a * apb,
        )
    }

    pub fn virtual_bounds(&self) -> VirtualBounds {
        let CarbonParams { a, b, z } = self.params;
        VirtualBounds {
            min_xv: z / (a * (a + b)),
            max_xv: z / (a * b),
            min_yv: b * z / a,
            max_yv: z * (a + b) / a,
        }
    }

    /// `sqrt(b (a + b)) - b`, the recurring factor of the reference recovery,
    /// together with `sqrt(b (a + b))`.
    fn center_factors(&self) -> (f64, f64) {
        let CarbonParams { a, b, .. } = self.params;
        let root = (b * (a + b)).sqrt();
        (root, a * b / (root + b))
    }

    pub fn center_and_reference(&self) -> CarbonReference {
        let CarbonParams { a, b, z } = self.params;
        let (root, gap) = self.center_factors();
        let x0 = z * gap / (a * b * (a + b));
        let y0 = z * gap / a;
        CarbonReference {
            x0,
            y0,
            k: z * z * gap * gap / (a * a * b * (a + b)),
            amplification: root / gap,
        }
    }

    pub fn reference_bound_points(&self) -> ReferenceBounds {
        let CarbonParams { a, b, z } = self.params;
        let (root, gap) = self.center_factors();
        let shrink = gap / root;
        ReferenceBounds {
            min_x: z / (a * (a + b)) * shrink,
            max_x: z / (a * b) * shrink,
            min_y: b * z / a * shrink,
            max_y: z * (a + b) / a * shrink,
        }
    }
}

impl BondingCurve for CarbonRealCurve {
    fn form(&self) -> FormTag {
        FormTag::Carbon
    }

    fn geometry(&self) -> CurveGeometry {
        self.geometry
    }

    fn invariant_residual(&self, state: PoolState) -> f64 {
        ((state.x + self.hx) * (state.y + self.vy) - self.sc).abs() / self.sc
    }

    fn y_at_x(&self, x: f64) -> f64 {
        self.vy * (self.geometry.x_int - x) / (x + self.hx)
    }

    fn x_at_y(&self, y: f64) -> f64 {
        self.hx * (self.geometry.y_int - y) / (y + self.vy)
    }

    fn price_at_x(&self, x: f64) -> f64 {
        let CarbonParams { a, b, z } = self.params;
        let apb = a + b;
        let den = x * a * apb + z;
        -(z * apb) * (z * apb) / (den * den)
    }

    fn inverse_price_at_y(&self, y: f64) -> f64 {
        let CarbonParams { a, b, z } = self.params;
        let den = a * y + b * z;
        -(z * z) / (den * den)
    }

    fn marginal_price(&self, state: PoolState) -> Result<f64> {
        let CarbonParams { a, b, z } = self.params;
        let apb = a + b;
        Ok(-apb * (a * state.y + b * z) / (state.x * a * apb + z))
    }

    fn swap_given_dx(&self, state: PoolState, dx: f64) -> Result<SwapDelta> {
        require_amount("dx", dx)?;
        self.check_state(state)?;
        if dx == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("x", state.x + dx, self.geometry.x_int)?;
        let CarbonParams { a, b, z } = self.params;
        let apb = a + b;
        let num = dx * (a * state.y + b * z) * apb;
        let den = (state.x + dx) * a * apb + z;
        Ok(SwapDelta { dx, dy: -num / den })
    }

    fn swap_given_dy(&self, state: PoolState, dy: f64) -> Result<SwapDelta> {
        require_amount("dy", dy)?;
        self.check_state(state)?;
        if dy == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("y", state.y + dy, self.geometry.y_int)?;
        let CarbonParams { a, b, z } = self.params;
        let apb = a + b;
        let den = apb * (a * (state.y + dy) + b * z);
        Ok(SwapDelta {
            dx: -dy * (state.x * a * apb + z) / den,
            dy,
        })
    }
}

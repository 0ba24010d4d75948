//! Uniswap v3 positions in the `(L, p_high, p_low)` parameterization.
//!
//! The real curve is `(x + L / sqrt(p_high)) * (y + L * sqrt(p_low)) = L^2`.
//! No tick grid is involved: the bounds are arbitrary positive reals.

use crate::bancor::{ReferenceBounds, VirtualBounds};
use crate::curve::{check_segment, require_amount, BondingCurve};
use crate::error::{CurveError, Result};
use crate::params::{
    require_positive, CurveGeometry, FormTag, PoolState, SwapDelta, UniswapV3Params,
};

#[derive(Debug, Clone, PartialEq)]
pub struct UniV3RealCurve {
    params: UniswapV3Params,
    sqrt_high: f64,
    sqrt_low: f64,
    hx: f64,
    vy: f64,
    l2: f64,
    geometry: CurveGeometry,
}

/// `1 - (p_low / p_high)^(1/4)`, evaluated without cancellation.
fn one_minus_quartic_ratio(p_high: f64, p_low: f64) -> f64 {
    let q = (p_low / p_high).sqrt().sqrt();
    ((p_high - p_low) / p_high) / ((1.0 + q) * (1.0 + q * q))
}

impl UniV3RealCurve {
    pub fn new(params: UniswapV3Params) -> Result<Self> {
        let UniswapV3Params {
            liquidity: l,
            p_high,
            p_low,
        } = params;
        require_positive("L", l)?;
        require_positive("p_high", p_high)?;
        require_positive("p_low", p_low)?;
        if p_low >= p_high {
            return Err(CurveError::domain("p_low", "must be < p_high"));
        }
        let sqrt_high = p_high.sqrt();
        let sqrt_low = p_low.sqrt();
        let hx = l / sqrt_high;
        let vy = l * sqrt_low;
        let l2 = l * l;
        if !l2.is_finite() {
            return Err(CurveError::domain("L", "L^2 must be finite"));
        }
        // sqrt(p_high) - sqrt(p_low) without subtracting nearby roots
        let width = (p_high - p_low) / (sqrt_high + sqrt_low);
        let geometry = CurveGeometry {
            x_int: l * width / (sqrt_high * sqrt_low),
            y_int: l * width,
            x_asym: -hx,
            y_asym: -vy,
            p_high,
            p_low,
            p0: sqrt_high * sqrt_low,
            c: sqrt_high / sqrt_low,
            phi: 0.5 * ((p_high - p_low) / p_low).ln_1p(),
        };
        Ok(UniV3RealCurve {
            params,
            sqrt_high,
            sqrt_low,
            hx,
            vy,
            l2,
            geometry,
        })
    }

    pub fn params(&self) -> UniswapV3Params {
        self.params
    }

    pub fn shifts(&self) -> (f64, f64) {
        (self.hx, self.vy)
    }

    pub fn virtual_bounds(&self) -> VirtualBounds {
        let l = self.params.liquidity;
        VirtualBounds {
            min_xv: l / self.sqrt_high,
            max_xv: l / self.sqrt_low,
            min_yv: l * self.sqrt_low,
            max_yv: l * self.sqrt_high,
        }
    }

    /// Geometric center `(x0, y0)` of the reference curve behind the position.
    pub fn center(&self) -> (f64, f64) {
        let UniswapV3Params {
            liquidity: l,
            p_high,
            p_low,
        } = self.params;
        let quartic_mean = (self.sqrt_high * self.sqrt_low).sqrt();
        let shrink = one_minus_quartic_ratio(p_high, p_low);
        (l * shrink / quartic_mean, l * quartic_mean * shrink)
    }

    /// Reference-curve constant `k = L^2 (1 - (p_low / p_high)^(1/4))^2`.
    pub fn reference_scale(&self) -> f64 {
        let UniswapV3Params { p_high, p_low, .. } = self.params;
        let shrink = one_minus_quartic_ratio(p_high, p_low);
        self.l2 * shrink * shrink
    }

    pub fn reference_bound_points(&self) -> ReferenceBounds {
        let UniswapV3Params {
            liquidity: l,
            p_high,
            p_low,
        } = self.params;
        let shrink = one_minus_quartic_ratio(p_high, p_low);
        ReferenceBounds {
            min_x: l / self.sqrt_high * shrink,
            max_x: l / self.sqrt_low * shrink,
            min_y: l * self.sqrt_low * shrink,
            max_y: l * self.sqrt_high * shrink,
        }
    }

    /// Equivalent Bancor amplification `1 / (1 - (p_low / p_high)^(1/4))`.
    pub fn amplification(&self) -> f64 {
        let UniswapV3Params { p_high, p_low, .. } = self.params;
        1.0 / one_minus_quartic_ratio(p_high, p_low)
    }
}

impl BondingCurve for UniV3RealCurve {
    fn form(&self) -> FormTag {
        FormTag::UniswapV3
    }

    fn geometry(&self) -> CurveGeometry {
        self.geometry
    }

    fn invariant_residual(&self, state: PoolState) -> f64 {
        ((state.x + self.hx) * (state.y + self.vy) - self.l2).abs() / self.l2
    }

    fn y_at_x(&self, x: f64) -> f64 {
        self.vy * (self.geometry.x_int - x) / (x + self.hx)
    }

    fn x_at_y(&self, y: f64) -> f64 {
        self.hx * (self.geometry.y_int - y) / (y + self.vy)
    }

    fn price_at_x(&self, x: f64) -> f64 {
        let xv = x + self.params.liquidity / self.sqrt_high;
        -self.l2 / (xv * xv)
    }

    fn inverse_price_at_y(&self, y: f64) -> f64 {
        let yv = y + self.params.liquidity * self.sqrt_low;
        -self.l2 / (yv * yv)
    }

    fn marginal_price(&self, state: PoolState) -> Result<f64> {
        Ok(-(state.y + self.vy) / (state.x + self.hx))
    }

    fn swap_given_dx(&self, state: PoolState, dx: f64) -> Result<SwapDelta> {
        require_amount("dx", dx)?;
        self.check_state(state)?;
        if dx == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("x", state.x + dx, self.geometry.x_int)?;
        let dy = -dx * (state.y + self.vy) / (state.x + dx + self.hx);
        Ok(SwapDelta { dx, dy })
    }

    fn swap_given_dy(&self, state: PoolState, dy: f64) -> Result<SwapDelta> {
        require_amount("dy", dy)?;
        self.check_state(state)?;
        if dy == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("y", state.y + dy, self.geometry.y_int)?;
        let dx = -dy * (state.x + self.hx) / (state.y + dy + self.vy);
        Ok(SwapDelta { dx, dy })
    }
}

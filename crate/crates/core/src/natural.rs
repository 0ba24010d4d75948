//! The natural parameterization: concentration constant `c` plus one anchor.
//!
//! Internally every anchor is reduced to the asymptotes, where the curve reads
//! `(x - x_asym) * (y - y_asym) = c * x_asym * y_asym`.

use crate::curve::{check_segment, require_amount, BondingCurve};
use crate::error::{CurveError, Result};
use crate::params::{
    require_negative, require_positive, Anchor, CurveGeometry, FormTag, NaturalParams, PoolState,
    SwapDelta,
};

#[derive(Debug, Clone, PartialEq)]
pub struct NaturalCurve {
    params: NaturalParams,
    x_asym: f64,
    y_asym: f64,
    scale: f64,
    geometry: CurveGeometry,
}

impl NaturalCurve {
    pub fn new(params: NaturalParams) -> Result<Self> {
        let c = params.c;
        if !c.is_finite() {
            return Err(CurveError::domain("c", "must be finite"));
        }
        if c <= 1.0 {
            return Err(CurveError::domain("c", "must exceed 1"));
        }
        let root = c.sqrt();
        let (x_asym, y_asym) = match params.anchor {
            Anchor::Asymptotes { x_asym, y_asym } => (
                require_negative("x_asym", x_asym)?,
                require_negative("y_asym", y_asym)?,
            ),
            Anchor::Center { x0, y0 } => {
                require_positive("x0", x0)?;
                require_positive("y0", y0)?;
                // x_asym = -x0 / (sqrt(c) - 1)
                let inv = (root + 1.0) / (c - 1.0);
                (-x0 * inv, -y0 * inv)
            }
            Anchor::Intercepts { x_int, y_int } => {
                require_positive("x_int", x_int)?;
                require_positive("y_int", y_int)?;
                (-x_int / (c - 1.0), -y_int / (c - 1.0))
            }
        };
        let scale = c * x_asym * y_asym;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(CurveError::domain(
                "c",
                "derived curve constants are not representable",
            ));
        }
        let p0 = y_asym / x_asym;
        let geometry = CurveGeometry {
            x_int: -x_asym * (c - 1.0),
            y_int: -y_asym * (c - 1.0),
            x_asym,
            y_asym,
            p_high: p0 * c,
            p_low: p0 / c,
            p0,
            c,
            phi: (c - 1.0).ln_1p(),
        };
        Ok(NaturalCurve {
            params,
            x_asym,
            y_asym,
            scale,
            geometry,
        })
    }

    pub fn params(&self) -> NaturalParams {
        self.params
    }

    pub fn asymptotes(&self) -> (f64, f64) {
        (self.x_asym, self.y_asym)
    }

    /// Geometric center, `x0 = -x_asym (sqrt(c) - 1)`.
    pub fn center(&self) -> (f64, f64) {
        let c = self.params.c;
        let gap = (c - 1.0) / (c.sqrt() + 1.0);
        (-self.x_asym * gap, -self.y_asym * gap)
    }
}

impl BondingCurve for NaturalCurve {
    fn form(&self) -> FormTag {
        FormTag::Natural
    }

    fn geometry(&self) -> CurveGeometry {
        self.geometry
    }

    fn invariant_residual(&self, state: PoolState) -> f64 {
        ((state.x - self.x_asym) * (state.y - self.y_asym) - self.scale).abs() / self.scale
    }

    fn y_at_x(&self, x: f64) -> f64 {
        -self.y_asym * (self.geometry.x_int - x) / (x - self.x_asym)
    }

    fn x_at_y(&self, y: f64) -> f64 {
        -self.x_asym * (self.geometry.y_int - y) / (y - self.y_asym)
    }

    fn price_at_x(&self, x: f64) -> f64 {
        let xv = x - self.x_asym;
        -self.scale / (xv * xv)
    }

    fn inverse_price_at_y(&self, y: f64) -> f64 {
        let yv = y - self.y_asym;
        -self.scale / (yv * yv)
    }

    fn marginal_price(&self, state: PoolState) -> Result<f64> {
        Ok(-(state.y - self.y_asym) / (state.x - self.x_asym))
    }

    fn swap_given_dx(&self, state: PoolState, dx: f64) -> Result<SwapDelta> {
        require_amount("dx", dx)?;
        self.check_state(state)?;
        if dx == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("x", state.x + dx, self.geometry.x_int)?;
        let dy = -dx * (state.y - self.y_asym) / (state.x + dx - self.x_asym);
        Ok(SwapDelta { dx, dy })
    }

    fn swap_given_dy(&self, state: PoolState, dy: f64) -> Result<SwapDelta> {
        require_amount("dy", dy)?;
        self.check_state(state)?;
        if dy == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        check_segment("y", state.y + dy, self.geometry.y_int)?;
        let dx = -dy * (state.x - self.x_asym) / (state.y + dy - self.y_asym);
        Ok(SwapDelta { dx, dy })
    }
}

//! The unshifted constant-product curve `x * y = x0 * y0`.

use crate::curve::{require_amount, BondingCurve};
use crate::error::{CurveError, Result};
use crate::params::{
    approx_eq, require_positive, CurveGeometry, FormTag, PoolState, ReferenceParams, SwapDelta,
    DEFAULT_REL_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCurve {
    params: ReferenceParams,
    k: f64,
}

impl ReferenceCurve {
    pub fn new(params: ReferenceParams) -> Result<Self> {
        require_positive("x0", params.x0)?;
        require_positive("y0", params.y0)?;
        let k = params.x0 * params.y0;
        if !k.is_finite() || k <= 0.0 {
            return Err(CurveError::domain(
                "x0",
                "x0 * y0 must be finite and positive",
            ));
        }
        Ok(ReferenceCurve { params, k })
    }

    pub fn params(&self) -> ReferenceParams {
        self.params
    }

    /// Scaling constant `k = x0 * y0`.
    pub fn k(&self) -> f64 {
        self.k
    }
}

impl BondingCurve for ReferenceCurve {
    fn form(&self) -> FormTag {
        FormTag::Reference
    }

    fn geometry(&self) -> CurveGeometry {
        CurveGeometry {
            x_int: f64::INFINITY,
            y_int: f64::INFINITY,
            x_asym: 0.0,
            y_asym: 0.0,
            p_high: f64::INFINITY,
            p_low: 0.0,
            p0: self.params.y0 / self.params.x0,
            c: f64::INFINITY,
            phi: f64::INFINITY,
        }
    }

    fn invariant_residual(&self, state: PoolState) -> f64 {
        (state.x * state.y - self.k).abs() / self.k
    }

    fn y_at_x(&self, x: f64) -> f64 {
        self.k / x
    }

    fn x_at_y(&self, y: f64) -> f64 {
        self.k / y
    }

    fn price_at_x(&self, x: f64) -> f64 {
        -self.k / (x * x)
    }

    fn inverse_price_at_y(&self, y: f64) -> f64 {
        -self.k / (y * y)
    }

    fn marginal_price(&self, state: PoolState) -> Result<f64> {
        if state.x == 0.0 {
            return Err(CurveError::domain(
                "x",
                "marginal price is undefined at x = 0",
            ));
        }
        Ok(-state.y / state.x)
    }

    fn swap_given_dx(&self, state: PoolState, dx: f64) -> Result<SwapDelta> {
        require_amount("dx", dx)?;
        self.check_state(state)?;
        if dx == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        let new_x = state.x + dx;
        if new_x <= 0.0 {
            return Err(CurveError::InsufficientLiquidity {
                token: "x",
                requested: -dx,
                available: state.x,
            });
        }
        Ok(SwapDelta {
            dx,
            dy: -dx * state.y / new_x,
        })
    }

    fn swap_given_dy(&self, state: PoolState, dy: f64) -> Result<SwapDelta> {
        require_amount("dy", dy)?;
        self.check_state(state)?;
        if dy == 0.0 {
            return Ok(SwapDelta::ZERO);
        }
        let new_y = state.y + dy;
        if new_y <= 0.0 {
            return Err(CurveError::InsufficientLiquidity {
                token: "y",
                requested: -dy,
                available: state.y,
            });
        }
        Ok(SwapDelta {
            dx: -dy * state.x / new_y,
            dy,
        })
    }
}

/// Separated-variable check: `(y + dy) / y == x / (x + dx)` to 1e-9.
pub fn log_swap_identity_check(state: PoolState, delta: SwapDelta) -> bool {
    let y_ratio = (state.y + delta.dy) / state.y;
    let x_ratio = state.x / (state.x + delta.dx);
    y_ratio.is_finite() && x_ratio.is_finite() && approx_eq(y_ratio, x_ratio, DEFAULT_REL_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(x0: f64, y0: f64) -> ReferenceCurve {
        ReferenceCurve::new(ReferenceParams { x0, y0 }).unwrap()
    }

    fn st(x: f64, y: f64) -> PoolState {
        PoolState::new(x, y).unwrap()
    }

    #[test]
    fn exact_in_x_matches_worked_values() {
        let c = curve(100.0, 100.0);
        let d = c.swap_exact_in_x(st(100.0, 100.0), 100.0).unwrap();
        assert_eq!(d.dy, -50.0);
        let c = curve(200.0, 50.0);
        let d = c.swap_exact_in_x(st(200.0, 50.0), 200.0).unwrap();
        assert_eq!(d.dy, -25.0);
        let d = c.swap_exact_in_x(st(200.0, 50.0), 1e-12).unwrap();
        assert!(d.dy < 0.0 && d.dy.abs() < 1e-12);
    }

    #[test]
    fn exact_out_y_inverts_exact_in() {
        let c = curve(100.0, 100.0);
        let d = c.swap_exact_out_y(st(100.0, 100.0), -50.0).unwrap();
        assert_eq!(d.dx, 100.0);
        assert_eq!(
            c.swap_exact_out_y(st(100.0, 100.0), 0.0).unwrap(),
            SwapDelta::ZERO
        );
        let err = c.swap_exact_out_y(st(100.0, 100.0), -100.0).unwrap_err();
        assert_eq!(err.kind(), "InsufficientLiquidity");
        assert!(c.swap_exact_out_y(st(100.0, 100.0), 1.0).is_err());
    }

    #[test]
    fn marginal_prices() {
        let c = curve(100.0, 100.0);
        assert_eq!(c.marginal_price(st(100.0, 100.0)).unwrap(), -1.0);
        assert_eq!(c.marginal_price(st(200.0, 50.0)).unwrap(), -0.25);
        assert_eq!(c.marginal_price(st(50.0, 200.0)).unwrap(), -4.0);
        assert_eq!(c.price_at_x(200.0), -0.25);
        assert!(c.marginal_price(st(0.0, 100.0)).is_err());
    }

    #[test]
    fn effective_price_lies_between_marginals() {
        let c = curve(100.0, 100.0);
        let s = st(100.0, 100.0);
        let d = c.swap_exact_in_x(s, 100.0).unwrap();
        assert_eq!(c.effective_price(s, d).unwrap(), -0.5);
        let d = c.swap_exact_in_x(s, 300.0).unwrap();
        assert_eq!(c.effective_price(s, d).unwrap(), -0.25);
        let before = c.marginal_price(s).unwrap();
        let after = c.marginal_price(s.after(d)).unwrap();
        let eff = c.effective_price(s, d).unwrap();
        assert!(before < eff && eff < after);
        assert!(c.effective_price(s, SwapDelta::ZERO).is_err());

        let tiny = c.swap_exact_in_x(s, 1e-7).unwrap();
        assert!((c.effective_price(s, tiny).unwrap() - before).abs() < 1e-8);
    }

    #[test]
    fn log_identity() {
        let s = st(100.0, 100.0);
        assert!(log_swap_identity_check(
            s,
            SwapDelta {
                dx: 100.0,
                dy: -50.0
            }
        ));
        assert!(log_swap_identity_check(s, SwapDelta::ZERO));
        assert!(!log_swap_identity_check(
            s,
            SwapDelta {
                dx: 100.0,
                dy: -40.0
            }
        ));
    }

    #[test]
    fn off_curve_state_is_rejected() {
        let c = curve(100.0, 100.0);
        let err = c.swap_exact_in_x(st(100.0, 90.0), 1.0).unwrap_err();
        assert_eq!(err.kind(), "OffCurve");
    }

    #[test]
    fn negative_dx_depleting_x_is_an_error() {
        let c = curve(100.0, 100.0);
        assert!(c.swap_given_dx(st(100.0, 100.0), -100.0).is_err());
        let d = c.swap_given_dx(st(100.0, 100.0), -50.0).unwrap();
        assert_eq!(d.dy, 100.0);
    }
}

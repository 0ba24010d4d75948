//! The interface every parameterization implements.

use crate::error::{CurveError, Result};
use crate::params::{CurveGeometry, FormTag, PoolState, SwapDelta, DEFAULT_REL_TOL};

/// Slack allowed when a trade lands exactly on an intercept.
pub(crate) const EDGE_TOL: f64 = 1e-12;

/// A two-token bonding curve. Swaps never mutate state; they return the
/// [`SwapDelta`] and callers derive the new state with [`PoolState::after`].
pub trait BondingCurve {
    fn form(&self) -> FormTag;

    /// Derived constants, computed once at construction.
    fn geometry(&self) -> CurveGeometry;

    /// Invariant residual at `state`, relative to the curve's scale constant.
    fn invariant_residual(&self, state: PoolState) -> f64;

    /// `y` on the curve at `x`.
    fn y_at_x(&self, x: f64) -> f64;

    /// `x` on the curve at `y`.
    fn x_at_y(&self, y: f64) -> f64;

    /// `dy/dx` written as a function of `x` alone.
    fn price_at_x(&self, x: f64) -> f64;

    /// `dx/dy` written as a function of `y` alone.
    fn inverse_price_at_y(&self, y: f64) -> f64;

    /// `dy/dx` at a state, from both coordinates.
    fn marginal_price(&self, state: PoolState) -> Result<f64>;

    /// Trade that changes the pool's x balance by `dx` (either sign).
    ///
    /// Evaluated on the state's own virtual reserves, so the virtual product
    /// carries over unchanged even when `state` sits a rounding error off
    /// the curve.
    fn swap_given_dx(&self, state: PoolState, dx: f64) -> Result<SwapDelta>;

    /// Trade that changes the pool's y balance by `dy` (either sign).
    fn swap_given_dy(&self, state: PoolState, dy: f64) -> Result<SwapDelta>;

    /// Errors unless `state` satisfies the invariant to [`DEFAULT_REL_TOL`]
    /// and lies on the tradeable segment.
    fn check_state(&self, state: PoolState) -> Result<()> {
        let g = self.geometry();
        let residual = self.invariant_residual(state);
        let inside = state.x >= 0.0
            && state.y >= 0.0
            && state.x <= g.x_int * (1.0 + EDGE_TOL)
            && state.y <= g.y_int * (1.0 + EDGE_TOL);
        if residual.is_nan() || residual > DEFAULT_REL_TOL || !inside {
            return Err(CurveError::OffCurve {
                x: state.x,
                y: state.y,
                residual,
            });
        }
        Ok(())
    }

    /// Pool receives `dx >= 0` of token x.
    fn swap_exact_in_x(&self, state: PoolState, dx: f64) -> Result<SwapDelta> {
        if !(dx >= 0.0) || !dx.is_finite() {
            return Err(CurveError::domain(
                "dx",
                "must be a nonnegative finite amount",
            ));
        }
        self.swap_given_dx(state, dx)
    }

    /// Pool pays out `-dy` of token y (`dy <= 0`).
    fn swap_exact_out_y(&self, state: PoolState, dy: f64) -> Result<SwapDelta> {
        if !(dy <= 0.0) || !dy.is_finite() {
            return Err(CurveError::domain(
                "dy",
                "must be a nonpositive finite amount",
            ));
        }
        self.swap_given_dy(state, dy)
    }

    /// Realized rate `dy / dx` of a finite trade.
    fn effective_price(&self, _state: PoolState, delta: SwapDelta) -> Result<f64> {
        if delta.dx == 0.0 {
            return Err(CurveError::domain(
                "dx",
                "effective price needs a nonzero trade",
            ));
        }
        Ok(delta.dy / delta.dx)
    }
}

/// Bounds test shared by the shifted (bounded) curves: `target` must stay in
/// `[0, limit]` up to [`EDGE_TOL`].
pub(crate) fn check_segment(coordinate: &'static str, target: f64, limit: f64) -> Result<()> {
    let slack = limit * EDGE_TOL;
    if !target.is_finite() || target < -slack || target > limit + slack {
        return Err(CurveError::BoundsExceeded {
            coordinate,
            value: target,
            limit,
        });
    }
    Ok(())
}

pub(crate) fn require_amount(field: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(CurveError::domain(field, "must be finite"));
    }
    Ok(())
}

//! Hyperbolic view of the curves: rotate `x * y = k` by -45 degrees, rescale
//! it onto the unit hyperbola `t^2 - u^2 = 1`, and measure the hyperbolic
//! angle spanned by a price range.
//!
//! Angles are only ever read from the `u` coordinate (through arsinh). The
//! `t` coordinate (arcosh) cannot tell the two branches of a price range
//! apart.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, LN_2};

use serde::{Deserialize, Serialize};

use crate::error::{CurveError, Result};
use crate::params::{require_positive, CurveGeometry};

/// Clockwise rotation by `theta = -pi/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationTransform {
    pub theta: f64,
}

impl Default for RotationTransform {
    fn default() -> Self {
        RotationTransform { theta: -FRAC_PI_4 }
    }
}

impl RotationTransform {
    /// `[[cos, -sin], [sin, cos]]` at `theta`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [[c, -s], [s, c]]
    }

    pub fn determinant(&self) -> f64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, x: f64, y: f64) -> RotatedPoint {
        let m = self.matrix();
        RotatedPoint {
            t: m[0][0] * x + m[0][1] * y,
            u: m[1][0] * x + m[1][1] * y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatedPoint {
    pub t: f64,
    pub u: f64,
}

/// A point on `t_hat^2 - u_hat^2 = 1`, right branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitPoint {
    pub t_hat: f64,
    pub u_hat: f64,
}

impl UnitPoint {
    /// `t_hat^2 - u_hat^2 - 1`, factored to limit cancellation.
    pub fn residual(&self) -> f64 {
        (self.t_hat - self.u_hat) * (self.t_hat + self.u_hat) - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicAngle {
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigValues {
    pub sinh: f64,
    pub cosh: f64,
    pub tanh: f64,
    pub e_phi: f64,
}

/// `t = (x + y) / sqrt(2)`, `u = (y - x) / sqrt(2)`.
pub fn rotate(x: f64, y: f64) -> RotatedPoint {
    RotatedPoint {
        t: (x + y) * FRAC_1_SQRT_2,
        u: (y - x) * FRAC_1_SQRT_2,
    }
}

/// Rescale a rotated point of the curve `x * y = k` onto the unit hyperbola.
/// Points that do not land on it (to 1e-9, relative to `t_hat^2`) are
/// rejected.
pub fn normalize(p: RotatedPoint, k: f64) -> Result<UnitPoint> {
    require_positive("k", k)?;
    let scale = (2.0 * k).sqrt();
    let point = UnitPoint {
        t_hat: p.t / scale,
        u_hat: p.u / scale,
    };
    let residual = point.residual();
    if !(point.t_hat > 0.0) || !(residual.abs() <= 1e-9 * point.t_hat.powi(2).max(1.0)) {
        return Err(CurveError::OffUnitHyperbola {
            t_hat: point.t_hat,
            u_hat: point.u_hat,
            residual,
        });
    }
    Ok(point)
}

/// Scale-free map of a positive state to the unit hyperbola,
/// `t_hat = (x + y) / (2 sqrt(x y))`, `u_hat = (y - x) / (2 sqrt(x y))`.
pub fn unit_from_state(x: f64, y: f64) -> Result<UnitPoint> {
    require_positive("x", x)?;
    require_positive("y", y)?;
    let den = 2.0 * x.sqrt() * y.sqrt();
    Ok(UnitPoint {
        t_hat: ((x + y) / den).max(1.0),
        u_hat: (y - x) / den,
    })
}

/// `u_hat` at the point whose marginal price magnitude is `p`:
/// `(p - 1) / (2 sqrt(p))`.
pub fn u_hat_from_price(p: f64) -> Result<f64> {
    require_positive("p", p)?;
    Ok((p - 1.0) / (2.0 * p.sqrt()))
}

/// `t_hat` at price `p`: `(p + 1) / (2 sqrt(p))`.
pub fn t_hat_from_price(p: f64) -> Result<f64> {
    require_positive("p", p)?;
    Ok((p + 1.0) / (2.0 * p.sqrt()))
}

/// arsinh without the cancellation of `ln(x + sqrt(x^2 + 1))` near zero.
pub fn stable_asinh(x: f64) -> f64 {
    let ax = x.abs();
    let r = if ax > 1e8 {
        ax.ln() + LN_2
    } else {
        let x2 = ax * ax;
        (ax + x2 / (1.0 + (1.0 + x2).sqrt())).ln_1p()
    };
    r.copysign(x)
}

fn check_bounds(p_high: f64, p_low: f64) -> Result<()> {
    require_positive("p_high", p_high)?;
    require_positive("p_low", p_low)?;
    if p_low >= p_high {
        return Err(CurveError::domain("p_low", "must be < p_high"));
    }
    Ok(())
}

/// `phi = ln(sqrt(p_high / p_low))`.
pub fn hyperbolic_angle(p_high: f64, p_low: f64) -> Result<HyperbolicAngle> {
    check_bounds(p_high, p_low)?;
    Ok(HyperbolicAngle {
        phi: 0.5 * ((p_high - p_low) / p_low).ln_1p(),
    })
}

/// The angle computed as `arsinh(u_hat(p_high)) - arsinh(u_hat(p_low))`.
///
/// When both `u_hat` share a sign the difference is taken through
/// `arsinh(a) - arsinh(b) = arsinh((a^2 - b^2) / (a sqrt(1 + b^2) + b sqrt(1 + a^2)))`
/// with `a - b` expanded in the prices, which keeps narrow ranges accurate.
pub fn hyperbolic_angle_arsinh(p_high: f64, p_low: f64) -> Result<f64> {
    check_bounds(p_high, p_low)?;
    let a = u_hat_from_price(p_high)?;
    let b = u_hat_from_price(p_low)?;
    if a * b <= 0.0 {
        return Ok(stable_asinh(a) - stable_asinh(b));
    }
    let (sh, sl) = (p_high.sqrt(), p_low.sqrt());
    let root_gap = (p_high - p_low) / (sh + sl);
    let diff = 0.5 * root_gap * (1.0 + 1.0 / (sh * sl));
    let arg = diff * (a + b) / (a * (1.0 + b * b).sqrt() + b * (1.0 + a * a).sqrt());
    Ok(stable_asinh(arg))
}

/// Hyperbolic functions of `phi`, from the exponential.
pub fn trig_identities(phi: f64) -> TrigValues {
    let em1 = phi.exp_m1();
    let e = em1 + 1.0;
    // e - 1/e = em1 + em1 / e
    let sinh = 0.5 * (em1 + em1 / e);
    let cosh = 0.5 * (e + 1.0 / e);
    TrigValues {
        sinh,
        cosh,
        tanh: sinh / cosh,
        e_phi: e,
    }
}

/// Hyperbolic functions of the angle of `[p_low, p_high]`, from the prices.
pub fn trig_from_prices(p_high: f64, p_low: f64) -> Result<TrigValues> {
    check_bounds(p_high, p_low)?;
    let g = 2.0 * p_high.sqrt() * p_low.sqrt();
    Ok(TrigValues {
        sinh: (p_high - p_low) / g,
        cosh: (p_high + p_low) / g,
        tanh: (p_high - p_low) / (p_high + p_low),
        e_phi: p_high.sqrt() / p_low.sqrt(),
    })
}

/// Output of the `angle` command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub phi: f64,
    pub sinh: f64,
    pub cosh: f64,
    pub tanh: f64,
    pub c: f64,
}

pub fn angle_report(p_high: f64, p_low: f64) -> Result<AngleReport> {
    let HyperbolicAngle { phi } = hyperbolic_angle(p_high, p_low)?;
    let t = trig_from_prices(p_high, p_low)?;
    Ok(AngleReport {
        phi,
        sinh: t.sinh,
        cosh: t.cosh,
        tanh: t.tanh,
        c: t.e_phi,
    })
}

pub fn angle_report_for(geometry: &CurveGeometry) -> Result<AngleReport> {
    angle_report(geometry.p_high, geometry.p_low)
}

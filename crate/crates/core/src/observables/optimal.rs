use std::f64::consts::PI;

use super::transfer::transfer_model;
use crate::error::{Error, Result};
use crate::params::ReducedParams;

pub const BRACKET: (f64, f64) = (1e-4, 2.0);
const BISECTION_TOL: f64 = 1e-12;

/// r₁(G₁) − ξ − πκ/(2𝒢(G₁)); −∞ where the dynamics is overdamped.
pub fn optimal_coupling_residual(params: &ReducedParams, xi: f64, g1: f64) -> Result<f64> {
    let model = transfer_model(params, g1)?;
    if model.curly_g_sq <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(model.r[0] - xi - PI * model.kappa / (2.0 * model.curly_g_sq.sqrt()))
}

/// Coupling G₁ at which the mirror squeeze balances the input squeeze plus the
/// loss accumulated over one swap, found by bisection on [10⁻⁴, 2].
pub fn optimal_coupling(params: &ReducedParams, xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::InvalidParameter(format!("xi must be >= 0, got {xi}")));
    }
    let (mut lo, mut hi) = BRACKET;
    let f_lo = optimal_coupling_residual(params, xi, lo)?;
    let f_hi = optimal_coupling_residual(params, xi, hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoOptimum { f_lo, f_hi });
    }
    let rising = f_hi > f_lo;
    while hi - lo > BISECTION_TOL * hi {
        let mid = 0.5 * (lo + hi);
        let f = optimal_coupling_residual(params, xi, mid)?;
        if (f > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

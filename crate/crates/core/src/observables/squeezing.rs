use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_cov, evolve_cov_closed, CovarianceRoute, GaussianState, Mat8, X_C, Y_C};
use crate::error::{Error, Result};
use crate::frame::{build_effective, EffectiveModel, RWA_THRESHOLD};
use crate::params::ReducedParams;
use crate::steady_state::{steady_state_for_coupling, SteadyState};

/// Absolute tolerance on η_e for the golden-section peak refinement.
pub const PEAK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SqueezeCase {
    /// Only mirror 1 couples to the cavity (G₂ = 0).
    #[serde(rename = "i")]
    I,
    /// Both mirrors couple with G₂ = G₁.
    #[serde(rename = "ii")]
    II,
}

impl SqueezeCase {
    pub fn label(self) -> &'static str {
        match self {
            SqueezeCase::I => "i",
            SqueezeCase::II => "ii",
        }
    }

    /// The coupling that maximizes the transfer of mirror squeezing, η_e = G'₁ or √2·G'₁.
    pub fn matched_eta(self, gp1: f64) -> f64 {
        match self {
            SqueezeCase::I => gp1,
            SqueezeCase::II => std::f64::consts::SQRT_2 * gp1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezeReport {
    pub case: SqueezeCase,
    pub eta_e: f64,
    pub g1: f64,
    pub gp1: f64,
    pub r1: f64,
    pub t_s: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub d_yc: f64,
    pub rwa_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub eta_peak: f64,
    pub d_peak: f64,
    /// Grid point with the largest value before refinement.
    pub grid_eta: f64,
    pub grid_d: f64,
    pub gp1: f64,
}

/// −10·log₁₀(var/½)
pub fn squeezing_db(var: f64) -> f64 {
    -10.0 * (var / 0.5).log10()
}

/// Steady state and effective model for a squeezing case at atom coupling `eta_e`
/// and enhanced coupling `g1`.
pub fn case_model(params: &ReducedParams, case: SqueezeCase, eta_e: f64, g1: f64) -> Result<(SteadyState, EffectiveModel)> {
    let mut p = params.clone();
    p.eta_e = eta_e;
    p.g_single[1] = match case {
        SqueezeCase::I => 0.0,
        SqueezeCase::II => p.g_single[0],
    };
    let st = steady_state_for_coupling(&p, g1)?;
    let model = build_effective(&st, &p)?;
    Ok((st, model))
}

fn report(model: &EffectiveModel, case: SqueezeCase, g1: f64, t_s: f64, cov: &Mat8) -> SqueezeReport {
    let var_y = cov[(Y_C, Y_C)];
    SqueezeReport {
        case,
        eta_e: model.eta_e,
        g1,
        gp1: model.gp[0],
        r1: model.r[0],
        t_s,
        var_x: cov[(X_C, X_C)],
        var_y,
        d_yc: squeezing_db(var_y),
        rwa_ok: model.rwa_diagnostics(RWA_THRESHOLD).rwa_ok,
    }
}

/// Evolves the ground state under `model` to the swap time and reads off the
/// atomic quadrature variances.
pub fn atomic_squeezing_model(model: &EffectiveModel, case: SqueezeCase, g1: f64, route: CovarianceRoute) -> Result<SqueezeReport> {
    let t_s = model.swap_time()?;
    let cov = evolve_cov(&GaussianState::ground_state(model).cov, model, t_s, route)?;
    Ok(report(model, case, g1, t_s, &cov))
}

pub fn atomic_squeezing(params: &ReducedParams, case: SqueezeCase, eta_e: f64, g1: f64) -> Result<SqueezeReport> {
    atomic_squeezing_with(params, case, eta_e, g1, CovarianceRoute::Closed)
}

pub fn atomic_squeezing_with(
    params: &ReducedParams,
    case: SqueezeCase,
    eta_e: f64,
    g1: f64,
    route: CovarianceRoute,
) -> Result<SqueezeReport> {
    let (_, model) = case_model(params, case, eta_e, g1)?;
    atomic_squeezing_model(&model, case, g1, route)
}

/// Same protocol with κ = γ = 0, evaluated at the lossless swap time.
pub fn lossless_squeezing(model: &EffectiveModel, case: SqueezeCase, g1: f64) -> Result<SqueezeReport> {
    let model = model.lossless();
    let t_s = model.lossless_swap_time()?;
    let cov = evolve_cov_closed(&GaussianState::ground_state(&model).cov, &model, t_s)?;
    Ok(report(&model, case, g1, t_s, &cov))
}

/// Maximum of D_yc over η_e: coarse scan of `eta_grid`, then golden-section
/// refinement between the neighbours of the best grid point.
pub fn peak_squeezing(
    params: &ReducedParams,
    case: SqueezeCase,
    g1: f64,
    eta_grid: &[f64],
    route: CovarianceRoute,
) -> Result<PeakReport> {
    let values = eta_grid
        .iter()
        .map(|&e| squeeze_or_floor(params, case, e, g1, route))
        .collect::<Result<Vec<_>>>()?;
    refine_peak(params, case, g1, eta_grid, &values, route)
}

/// D_yc, with overdamped points mapped to −∞ so they never win a maximum.
pub fn squeeze_or_floor(params: &ReducedParams, case: SqueezeCase, eta: f64, g1: f64, route: CovarianceRoute) -> Result<f64> {
    match atomic_squeezing_with(params, case, eta, g1, route) {
        Ok(r) => Ok(r.d_yc),
        Err(Error::Overdamped { .. }) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Golden-section refinement of a peak already scanned on `eta_grid`.
pub fn refine_peak(
    params: &ReducedParams,
    case: SqueezeCase,
    g1: f64,
    eta_grid: &[f64],
    values: &[f64],
    route: CovarianceRoute,
) -> Result<PeakReport> {
    if eta_grid.len() < 3 || values.len() != eta_grid.len() {
        return Err(Error::InvalidParameter("peak search needs at least three grid points with values".into()));
    }
    let (k, &grid_d) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    if !grid_d.is_finite() {
        return Err(Error::Overdamped { curly_g_sq: f64::NAN });
    }
    let lo = eta_grid[k.saturating_sub(1)];
    let hi = eta_grid[(k + 1).min(eta_grid.len() - 1)];
    let (eta_peak, d_peak) = golden_max(|e| squeeze_or_floor(params, case, e, g1, route), lo, hi, PEAK_TOL)?;
    let (eta_peak, d_peak) = if d_peak >= grid_d { (eta_peak, d_peak) } else { (eta_grid[k], grid_d) };
    let (_, model) = case_model(params, case, eta_peak, g1)?;
    Ok(PeakReport {
        eta_peak,
        d_peak,
        grid_eta: eta_grid[k],
        grid_d,
        gp1: model.gp[0],
    })
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{reduce, SystemParams};
    use std::f64::consts::LN_10;

    fn defaults() -> ReducedParams {
        reduce(&SystemParams::paper_defaults()).unwrap()
    }

    #[test]
    fn decibel_definition() {
        assert_eq!(squeezing_db(0.5), 0.0);
        assert!((squeezing_db(0.25) - 10.0 * 2f64.log10()).abs() < 1e-14);
    }

    #[test]
    fn lossless_matched_couplings() {
        let p = defaults();
        for case in [SqueezeCase::I, SqueezeCase::II] {
            for g1 in [0.1, 0.3, 0.5] {
                let (_, m0) = case_model(&p, case, 0.0, g1).unwrap();
                let (_, m) = case_model(&p, case, case.matched_eta(m0.gp[0]), g1).unwrap();
                let rep = lossless_squeezing(&m, case, g1).unwrap();
                let r1 = m.r[0];
                assert!((rep.var_y - 0.5 * (-2.0 * r1).exp()).abs() < 1e-9);
                assert!((rep.var_x - 0.5 * (2.0 * r1).exp()).abs() < 1e-9);
                assert!((rep.d_yc - 20.0 / LN_10 * r1).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn no_optomechanics_no_squeezing() {
        let p = defaults();
        for eta in [0.01, 0.1, 0.3] {
            let rep = atomic_squeezing(&p, SqueezeCase::II, eta, 0.0).unwrap();
            assert!(rep.d_yc.abs() < 1e-9, "{rep:?}");
        }
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, y) = golden_max(|x| Ok(-(x - 0.3f64).powi(2) + 2.0), 0.0, 1.0, 1e-9).unwrap();
        // Location is resolvable only to about √ε near a smooth maximum.
        assert!((x - 0.3).abs() < 1e-6);
        assert!((y - 2.0).abs() < 1e-15);
    }
}

use serde::{Deserialize, Serialize};

use super::squeezing::{case_model, SqueezeCase};
use crate::dynamics::{evolve_cov_closed, integrate_lyapunov, lab_frame_diffusion, lab_frame_drift, lab_to_interaction, GaussianState, Mat8};
use crate::error::Result;
use crate::params::ReducedParams;

/// Lab-frame versus interaction-frame variances after one lossless swap time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameComparison {
    pub g1: f64,
    pub eta_e: f64,
    pub t: f64,
    /// Diagonal of the lab-frame covariance mapped into rotating Bogoliubov quadratures.
    pub lab: [f64; 8],
    pub rwa: [f64; 8],
    /// max_k |lab_k − rwa_k| / rwa_k
    pub max_rel_diff: f64,
}

/// Evolves the bare ground state with the full linearized drift (counter-rotating
/// terms kept) and with the beam-splitter model, both to t_s⁽⁰⁾ at the matched
/// atom coupling of `case`, and compares the diagonal variances.
pub fn compare_frames(params: &ReducedParams, case: SqueezeCase, g1: f64) -> Result<FrameComparison> {
    let (_, probe) = case_model(params, case, 0.0, g1)?;
    let eta = case.matched_eta(probe.gp[0]);
    let (steady, model) = case_model(params, case, eta, g1)?;
    let t = model.lossless_swap_time()?;

    let mut p = params.clone();
    p.eta_e = eta;
    if case == SqueezeCase::I {
        p.g_single[1] = 0.0;
    } else {
        p.g_single[1] = p.g_single[0];
    }
    let a = lab_frame_drift(&steady, &p);
    let n = lab_frame_diffusion(&p);
    let v_lab = integrate_lyapunov(&a, |_| n, &(Mat8::identity() * 0.5), t)?;
    let align = lab_to_interaction(model.r, [steady.delta_e, steady.delta, model.omega[0], model.omega[1]], t);
    let v_lab = align * v_lab * align.transpose();

    let v_rwa = evolve_cov_closed(&GaussianState::ground_state(&model).cov, &model, t)?;
    let lab: [f64; 8] = std::array::from_fn(|k| v_lab[(k, k)]);
    let rwa: [f64; 8] = std::array::from_fn(|k| v_rwa[(k, k)]);
    let max_rel_diff = lab.iter().zip(&rwa).map(|(l, r)| (l - r).abs() / r).fold(0.0, f64::max);
    Ok(FrameComparison {
        g1,
        eta_e: eta,
        t,
        lab,
        rwa,
        max_rel_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{reduce, SystemParams};

    #[test]
    fn weak_coupling_agrees() {
        let p = reduce(&SystemParams::paper_defaults()).unwrap();
        let c = compare_frames(&p, SqueezeCase::I, 1e-3).unwrap();
        assert!(c.max_rel_diff < 0.01, "{c:?}");
    }

    #[test]
    fn strong_coupling_without_duffing_disagrees() {
        let mut p = reduce(&SystemParams::paper_defaults()).unwrap();
        p.duffing = [0.0; 2];
        let c = compare_frames(&p, SqueezeCase::I, 0.5).unwrap();
        assert!(c.max_rel_diff > 0.1, "{c:?}");
    }
}

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fidelity::gaussian_fidelity;
use crate::dynamics::{evolve_cov, propagator_closed, CovarianceRoute, GaussianState};
use crate::error::Result;
use crate::frame::{build_effective, EffectiveModel, RWA_THRESHOLD};
use crate::params::ReducedParams;
use crate::steady_state::steady_state_for_coupling;

/// Quadratures in which input and output blocks are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferFrame {
    #[default]
    Bogoliubov,
    /// Bare mirror quadratures q = e^{−r}Q, p = e^{r}P.
    Bare,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub f: f64,
    pub n_h: f64,
    pub lambda_h: f64,
    pub t_s: f64,
    pub g1: f64,
    pub r1: f64,
    pub frame: TransferFrame,
    pub mean_in: [f64; 2],
    pub mean_fin: [f64; 2],
    /// Row-major 2×2 blocks.
    pub v_in: [[f64; 2]; 2],
    pub v_fin: [[f64; 2]; 2],
    pub rwa_ok: bool,
}

/// First moments and covariance of the Bogoliubov mode 1 when the bare mirror
/// holds the squeezed coherent state |ϱ, ξ⟩.
pub fn initial_squeezed_block(rho: Complex64, xi: f64, r1: f64) -> (Vector2<f64>, Matrix2<f64>) {
    let s2 = std::f64::consts::SQRT_2;
    let mean = Vector2::new(r1.exp() * s2 * rho.re, (-r1).exp() * s2 * rho.im);
    let d = 2.0 * (r1 - xi);
    (mean, Matrix2::new(0.5 * d.exp(), 0.0, 0.0, 0.5 * (-d).exp()))
}

/// Effective model of the transfer set-up: both mirrors coupled with G₂ = G₁.
pub fn transfer_model(params: &ReducedParams, g1: f64) -> Result<EffectiveModel> {
    let mut p = params.clone();
    p.g_single[1] = p.g_single[0];
    let st = steady_state_for_coupling(&p, g1)?;
    build_effective(&st, &p)
}

fn to_array(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

pub fn transfer_with_model(
    model: &EffectiveModel,
    rho: Complex64,
    xi: f64,
    g1: f64,
    frame: TransferFrame,
    route: CovarianceRoute,
) -> Result<TransferReport> {
    let t_s = model.swap_time()?;
    let mut state = GaussianState::ground_state(model);
    let (mean_in, v_in) = initial_squeezed_block(rho, xi, model.r[0]);
    state.mean.fixed_rows_mut::<2>(4).copy_from(&mean_in);
    state.cov.fixed_view_mut::<2, 2>(4, 4).copy_from(&v_in);

    let mean = propagator_closed(model, t_s)? * state.mean;
    let cov = evolve_cov(&state.cov, model, t_s, route)?;
    let mut mean_fin: Vector2<f64> = mean.fixed_rows::<2>(6).into_owned();
    let mut v_fin: Matrix2<f64> = cov.fixed_view::<2, 2>(6, 6).into_owned();
    let (mut mean_in, mut v_in) = (mean_in, v_in);
    if frame == TransferFrame::Bare {
        let s_in = Matrix2::new((-model.r[0]).exp(), 0.0, 0.0, model.r[0].exp());
        let s_fin = Matrix2::new((-model.r[1]).exp(), 0.0, 0.0, model.r[1].exp());
        mean_in = s_in * mean_in;
        v_in = s_in * v_in * s_in;
        mean_fin = s_fin * mean_fin;
        v_fin = s_fin * v_fin * s_fin;
    }
    let fid = gaussian_fidelity(&mean_in, &v_in, &mean_fin, &v_fin)?;
    Ok(TransferReport {
        f: fid.f,
        n_h: fid.n_h,
        lambda_h: fid.lambda_h,
        t_s,
        g1,
        r1: model.r[0],
        frame,
        mean_in: [mean_in[0], mean_in[1]],
        mean_fin: [mean_fin[0], mean_fin[1]],
        v_in: to_array(&v_in),
        v_fin: to_array(&v_fin),
        rwa_ok: model.rwa_diagnostics(RWA_THRESHOLD).rwa_ok,
    })
}

/// Transfer of |ϱ, ξ⟩ from mirror 1 to mirror 2 over one swap time, scored by
/// the single-mode Gaussian fidelity.
pub fn transfer_experiment(params: &ReducedParams, rho: Complex64, xi: f64, g1: f64, frame: TransferFrame) -> Result<TransferReport> {
    let model = transfer_model(params, g1)?;
    transfer_with_model(&model, rho, xi, g1, frame, CovarianceRoute::Closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{reduce, SystemParams};

    #[test]
    fn vacuum_block() {
        let (m, v) = initial_squeezed_block(Complex64::new(0.0, 0.0), 0.0, 0.0);
        assert_eq!(m, Vector2::zeros());
        assert_eq!(v, Matrix2::identity() * 0.5);
        let (_, v) = initial_squeezed_block(Complex64::new(0.3, 0.2), 0.41, 0.41);
        assert_eq!(v, Matrix2::identity() * 0.5);
    }

    #[test]
    fn squeezed_block_values() {
        let (m, v) = initial_squeezed_block(Complex64::new(1.0, 0.0), 0.5, 0.3);
        assert_eq!(m, Vector2::new(2f64.sqrt() * 0.3f64.exp(), 0.0));
        assert_eq!(v, Matrix2::new(0.5 * (-0.4f64).exp(), 0.0, 0.0, 0.5 * 0.4f64.exp()));
    }

    #[test]
    fn lossless_mechanical_swap_is_perfect() {
        let m = EffectiveModel::synthetic([0.12, 0.12], 0.0, 0.0, 0.0);
        for rho in [Complex64::new(1.0, 0.0), Complex64::new(-0.4, 2.2)] {
            let rep = transfer_with_model(&m, rho, 0.5, 0.12, TransferFrame::Bogoliubov, CovarianceRoute::Closed).unwrap();
            assert!((rep.f - 1.0).abs() < 1e-12, "{rep:?}");
        }
    }

    #[test]
    fn frame_choice_does_not_change_fidelity() {
        let mut p = reduce(&SystemParams::paper_defaults()).unwrap();
        p.eta_e = 0.005;
        let rho = Complex64::new(1.0, 0.0);
        let a = transfer_experiment(&p, rho, 0.5, 0.3, TransferFrame::Bogoliubov).unwrap();
        let b = transfer_experiment(&p, rho, 0.5, 0.3, TransferFrame::Bare).unwrap();
        assert!((a.f - b.f).abs() < 1e-12);
        assert!(a.f > 0.0 && a.f <= 1.0);
    }
}

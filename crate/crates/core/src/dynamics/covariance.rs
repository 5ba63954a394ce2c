use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::SVector;
use ode_solvers::dop_shared::{IntegrationError, OutputType};
use ode_solvers::{Dopri5, System};
use serde::{Deserialize, Serialize};

use super::{diffusion_n0, diffusion_total, drift_matrix, propagator_closed, Mat8};
use crate::error::{Error, Result};
use crate::frame::EffectiveModel;

/// Absolute per-entry tolerance between successive quadrature refinements.
pub const QUAD_TOL: f64 = 1e-10;
pub const QUAD_MAX_NODES: usize = 1 << 14;
pub const ODE_RTOL: f64 = 1e-10;
pub const ODE_ATOL: f64 = 1e-12;

const PANEL_ORDER: usize = 16;
const ODE_MAX_STEPS: u32 = 5_000_000;

fn panel_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

fn symmetrize(m: &Mat8) -> Mat8 {
    (m + m.transpose()) * 0.5
}

fn composite_gl(model: &EffectiveModel, t: f64, panels: usize, n0: &Mat8) -> Result<Mat8> {
    let h = t / panels as f64;
    let mut acc = Mat8::zeros();
    for p in 0..panels {
        let a = p as f64 * h;
        for &(x, w) in panel_rule() {
            let tau = a + 0.5 * h * (x + 1.0);
            let m = propagator_closed(model, tau)?;
            acc += (m * n0 * m.transpose()) * (0.5 * h * w);
        }
    }
    Ok(acc)
}

/// V(t) = M V₀ Mᵀ + ∫₀ᵗ M N₀ Mᵀ dτ with the closed-form propagator.
///
/// The integral uses composite Gauss–Legendre panels, doubling the node count
/// until two successive estimates agree to [`QUAD_TOL`] in every entry.
pub fn evolve_cov_closed(v0: &Mat8, model: &EffectiveModel, t: f64) -> Result<Mat8> {
    let m = propagator_closed(model, t)?;
    if t == 0.0 {
        return Ok(*v0);
    }
    let n0 = diffusion_n0(model);
    let rate = model.curly_g_sq.abs().sqrt() + model.chi1.abs();
    let mut panels = ((rate * t / 2.0).ceil() as usize).clamp(1, QUAD_MAX_NODES / PANEL_ORDER / 2);
    let mut prev = composite_gl(model, t, panels, &n0)?;
    loop {
        panels *= 2;
        let next = composite_gl(model, t, panels, &n0)?;
        let diff = (next - prev).amax();
        if diff < QUAD_TOL {
            return Ok(symmetrize(&(m * v0 * m.transpose() + next)));
        }
        if panels * PANEL_ORDER >= QUAD_MAX_NODES {
            return Err(Error::Quadrature {
                achieved: diff,
                nodes: panels * PANEL_ORDER,
            });
        }
        prev = next;
    }
}

/// Which propagation path produces the covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceRoute {
    /// Closed-form propagator with quadrature, N ≈ N₀.
    #[default]
    Closed,
    /// Direct Lyapunov integration, optionally with N_t.
    Ode { include_nt: bool },
}

pub fn evolve_cov(v0: &Mat8, model: &EffectiveModel, t: f64, route: CovarianceRoute) -> Result<Mat8> {
    match route {
        CovarianceRoute::Closed => evolve_cov_closed(v0, model, t),
        CovarianceRoute::Ode { include_nt } => evolve_cov_ode(v0, model, t, include_nt),
    }
}

type Flat = SVector<f64, 64>;

struct Lyapunov<F> {
    a: Mat8,
    noise: F,
}

impl<F: Fn(f64) -> Mat8> System<f64, Flat> for Lyapunov<F> {
    fn system(&self, t: f64, y: &Flat, dy: &mut Flat) {
        let v = Mat8::from_column_slice(y.as_slice());
        let d = self.a * v + v * self.a.transpose() + (self.noise)(t);
        dy.copy_from_slice(d.as_slice());
    }
}

/// Integrates dV/dt = A V + V Aᵀ + N(t) from 0 to `t` with an adaptive
/// Dormand–Prince 5(4) scheme.
pub fn integrate_lyapunov<F: Fn(f64) -> Mat8>(a: &Mat8, noise: F, v0: &Mat8, t: f64) -> Result<Mat8> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("propagation time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(*v0);
    }
    let sys = Lyapunov { a: *a, noise };
    let y0 = Flat::from_column_slice(v0.as_slice());
    let mut solver = Dopri5::from_param(
        sys,
        0.0,
        t,
        t,
        y0,
        ODE_RTOL,
        ODE_ATOL,
        0.9,
        0.04,
        0.2,
        10.0,
        t,
        0.0,
        ODE_MAX_STEPS,
        1000,
        OutputType::Sparse,
    );
    match solver.integrate() {
        Ok(_) => {}
        Err(IntegrationError::StepSizeUnderflow { x }) | Err(IntegrationError::StiffnessDetected { x }) => {
            return Err(Error::Stiffness { t: x, step: 0.0 });
        }
        Err(IntegrationError::MaxNumStepReached { x, .. }) => {
            return Err(Error::Stiffness { t: x, step: t / ODE_MAX_STEPS as f64 });
        }
    }
    let y = solver.y_out().last().expect("solver stores the final state");
    Ok(symmetrize(&Mat8::from_column_slice(y.as_slice())))
}

/// Independent covariance propagation by direct ODE integration, optionally
/// including the oscillating diffusion N_t.
pub fn evolve_cov_ode(v0: &Mat8, model: &EffectiveModel, t: f64, include_nt: bool) -> Result<Mat8> {
    let a = drift_matrix(model);
    integrate_lyapunov(&a, |s| diffusion_total(model, s, include_nt), v0, t)
}

use super::Mat8;
use crate::frame::EffectiveModel;

/// Drift matrix of the interaction-frame Langevin equations.
pub fn drift_matrix(model: &EffectiveModel) -> Mat8 {
    let (g1, g2, eta) = (model.gp[0], model.gp[1], model.eta_e);
    let mut a = Mat8::zeros();
    let damping = [model.gamma, model.gamma, model.kappa, model.kappa, model.gamma, model.gamma, model.gamma, model.gamma];
    for (i, d) in damping.into_iter().enumerate() {
        a[(i, i)] = -d;
    }
    a[(0, 3)] = eta;
    a[(1, 2)] = -eta;
    a[(2, 1)] = eta;
    a[(3, 0)] = -eta;

    a[(2, 5)] = -g1;
    a[(2, 7)] = g2;
    a[(3, 4)] = g1;
    a[(3, 6)] = -g2;

    a[(4, 3)] = -g1;
    a[(5, 2)] = g1;
    a[(6, 3)] = g2;
    a[(7, 2)] = -g2;
    a
}

/// Time-independent diffusion N₀.
pub fn diffusion_n0(model: &EffectiveModel) -> Mat8 {
    let g = model.gamma;
    let m1 = g * (1.0 + 2.0 * model.n_r[0]);
    let m2 = g * (1.0 + 2.0 * model.n_r[1]);
    Mat8::from_diagonal(&[g, g, model.kappa, model.kappa, m1, m1, m2, m2].into())
}

/// Oscillating part N_t of the diffusion, rotating at 2Ω₁.
pub fn diffusion_nt(model: &EffectiveModel, t: f64) -> Mat8 {
    let (s, c) = (2.0 * model.omega[0] * t).sin_cos();
    let strength = model.oscillating_noise();
    let mut n = Mat8::zeros();
    for (j, nj) in strength.into_iter().enumerate() {
        let k = 4 + 2 * j;
        n[(k, k)] = nj * c;
        n[(k, k + 1)] = nj * s;
        n[(k + 1, k)] = nj * s;
        n[(k + 1, k + 1)] = -nj * c;
    }
    n
}

pub fn diffusion_total(model: &EffectiveModel, t: f64, include_nt: bool) -> Mat8 {
    if include_nt {
        diffusion_n0(model) + diffusion_nt(model, t)
    } else {
        diffusion_n0(model)
    }
}

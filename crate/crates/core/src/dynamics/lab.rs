use super::Mat8;
use crate::params::ReducedParams;
use crate::steady_state::{Mirror, SteadyState};

/// Drift of the bare quadratures (δx_c, δy_c, δx_a, δy_a, δq₁, δp₁, δq₂, δp₂)
/// under the full linearized Hamiltonian, counter-rotating terms included.
pub fn lab_frame_drift(steady: &SteadyState, params: &ReducedParams) -> Mat8 {
    let mut a = Mat8::zeros();
    let damping = [
        params.gamma_e,
        params.gamma_e,
        params.kappa,
        params.kappa,
        params.gamma_m[0],
        params.gamma_m[0],
        params.gamma_m[1],
        params.gamma_m[1],
    ];
    for (i, d) in damping.into_iter().enumerate() {
        a[(i, i)] = -d;
    }
    let (de, d, eta) = (steady.delta_e, steady.delta, params.eta_e);
    a[(0, 1)] = de;
    a[(1, 0)] = -de;
    a[(2, 3)] = d;
    a[(3, 2)] = -d;
    a[(0, 3)] = eta;
    a[(1, 2)] = -eta;
    a[(2, 1)] = eta;
    a[(3, 0)] = -eta;
    for mirror in [Mirror::One, Mirror::Two] {
        let j = mirror.index();
        let k = 4 + 2 * j;
        let w = params.omega_m[j];
        let coupling = 2.0 * mirror.sign() * steady.g_enh[j];
        a[(k, k + 1)] = w;
        a[(k + 1, k)] = -(w + 4.0 * steady.lambda_enh[j]);
        a[(k + 1, 2)] = -coupling;
        a[(3, k)] = -coupling;
    }
    a
}

/// Bare-frame diffusion with thermal baths on the mirror quadratures.
pub fn lab_frame_diffusion(params: &ReducedParams) -> Mat8 {
    let m1 = params.gamma_m[0] * (1.0 + 2.0 * params.n_th(0));
    let m2 = params.gamma_m[1] * (1.0 + 2.0 * params.n_th(1));
    Mat8::from_diagonal(&[params.gamma_e, params.gamma_e, params.kappa, params.kappa, m1, m1, m2, m2].into())
}

/// Bare to Bogoliubov quadratures: Q_j = e^{r_j} q_j, P_j = e^{−r_j} p_j.
pub fn quadrature_scaling(r: [f64; 2]) -> Mat8 {
    Mat8::from_diagonal(&[1.0, 1.0, 1.0, 1.0, r[0].exp(), (-r[0]).exp(), r[1].exp(), (-r[1]).exp()].into())
}

/// Linear map taking lab-frame quadratures at time `t` to interaction-frame
/// Bogoliubov quadratures. Each mode is rotated by its own frequency
/// (`freqs` ordered atom, cavity, mirror 1, mirror 2).
pub fn lab_to_interaction(r: [f64; 2], freqs: [f64; 4], t: f64) -> Mat8 {
    let mut rot = Mat8::zeros();
    for (mode, f) in freqs.into_iter().enumerate() {
        let (s, c) = (f * t).sin_cos();
        let k = 2 * mode;
        rot[(k, k)] = c;
        rot[(k, k + 1)] = -s;
        rot[(k + 1, k)] = s;
        rot[(k + 1, k + 1)] = c;
    }
    rot * quadrature_scaling(r)
}

//! Bogoliubov-frame effective model.
//!
//! The quadratic Duffing terms are removed by the squeeze δB̃_j = μ_j δb_j + ν_j δb_j†
//! with μ = cosh r, ν = sinh r and r_j = ¼ ln(1 + 4Λ_j/ω_j). In that frame the mirror
//! frequencies are Ω_j = ω_j e^{2r_j}, the optomechanical couplings shrink to
//! G'_j = G_j e^{−r_j}, and the thermal bath seen by the Bogoliubov mode carries
//! n̄_{r,j} = (μ_j² + ν_j²) n̄_{th,j} + ν_j².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ReducedParams;
use crate::steady_state::{squeeze_parameter, SteadyState};

/// Default threshold on the RWA ratios.
pub const RWA_THRESHOLD: f64 = 0.1;

/// Relative tolerance when checking γ₁ = γ₂ = γ_e.
const DAMPING_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModel {
    pub r: [f64; 2],
    pub mu: [f64; 2],
    pub nu: [f64; 2],
    /// Bogoliubov frequencies Ω_j.
    pub omega: [f64; 2],
    /// Transformed couplings G'_j.
    pub gp: [f64; 2],
    /// Bare enhanced couplings G_j.
    pub g_enh: [f64; 2],
    pub n_th: [f64; 2],
    pub n_r: [f64; 2],
    pub eta_e: f64,
    pub kappa: f64,
    /// Common damping γ = γ₁ = γ₂ = γ_e.
    pub gamma: f64,
    pub chi1: f64,
    pub chi2: f64,
    /// 𝒢² = G'₁² + G'₂² + η_e² − χ₂²; negative in the overdamped regime.
    pub curly_g_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaDiagnostics {
    /// max_j G'_j / Ω₁
    pub coupling_ratio: f64,
    /// max_j γ μ_j ν_j (1 + 2n̄_{th,j}) / Ω₁
    pub noise_ratio: f64,
    pub threshold: f64,
    pub rwa_ok: bool,
}

pub fn build_effective(steady: &SteadyState, params: &ReducedParams) -> Result<EffectiveModel> {
    let gamma = params.gamma_m[0];
    for (name, g) in [("gamma_m2", params.gamma_m[1]), ("gamma_e", params.gamma_e)] {
        if (g - gamma).abs() > DAMPING_MATCH_TOL * gamma.abs().max(g.abs()) {
            return Err(Error::InvalidRegime(format!(
                "closed-form dynamics need a common damping rate; gamma_m1 = {gamma}, {name} = {g}"
            )));
        }
    }
    let mut r = [0.0; 2];
    let mut omega = [0.0; 2];
    for j in 0..2 {
        if steady.lambda_enh[j] < 0.0 {
            return Err(Error::InvalidRegime(format!("negative enhanced Duffing parameter {}", steady.lambda_enh[j])));
        }
        r[j] = squeeze_parameter(steady.lambda_enh[j], params.omega_m[j])?;
        omega[j] = params.omega_m[j] * (2.0 * r[j]).exp();
    }
    let n_th = [params.n_th(0), params.n_th(1)];
    let mut model = EffectiveModel {
        r,
        mu: r.map(f64::cosh),
        nu: r.map(f64::sinh),
        omega,
        gp: [steady.g_enh[0] * (-r[0]).exp(), steady.g_enh[1] * (-r[1]).exp()],
        g_enh: steady.g_enh,
        n_th,
        n_r: [0.0; 2],
        eta_e: params.eta_e,
        kappa: params.kappa,
        gamma,
        chi1: 0.0,
        chi2: 0.0,
        curly_g_sq: 0.0,
    };
    model.n_r = [model.bogoliubov_occupation(0), model.bogoliubov_occupation(1)];
    model.refresh_rates();
    Ok(model)
}

impl EffectiveModel {
    /// A model with no Duffing squeeze and zero temperature, specified directly
    /// by its rates. Useful for exercising the dynamics in isolation.
    pub fn synthetic(gp: [f64; 2], eta_e: f64, kappa: f64, gamma: f64) -> Self {
        let mut m = EffectiveModel {
            r: [0.0; 2],
            mu: [1.0; 2],
            nu: [0.0; 2],
            omega: [1.0; 2],
            gp,
            g_enh: gp,
            n_th: [0.0; 2],
            n_r: [0.0; 2],
            eta_e,
            kappa,
            gamma,
            chi1: 0.0,
            chi2: 0.0,
            curly_g_sq: 0.0,
        };
        m.refresh_rates();
        m
    }

    fn bogoliubov_occupation(&self, j: usize) -> f64 {
        (self.mu[j].powi(2) + self.nu[j].powi(2)) * self.n_th[j] + self.nu[j].powi(2)
    }

    fn refresh_rates(&mut self) {
        self.chi1 = 0.5 * (self.kappa + self.gamma);
        self.chi2 = 0.5 * (self.kappa - self.gamma);
        self.curly_g_sq = self.coupling_norm_sq() - self.chi2 * self.chi2;
    }

    /// Copy with different cavity and mechanical damping.
    pub fn with_damping(&self, kappa: f64, gamma: f64) -> Self {
        let mut m = self.clone();
        m.kappa = kappa;
        m.gamma = gamma;
        m.refresh_rates();
        m
    }

    /// κ = γ = 0.
    pub fn lossless(&self) -> Self {
        self.with_damping(0.0, 0.0)
    }

    pub fn with_couplings(&self, gp: [f64; 2], eta_e: f64) -> Self {
        let mut m = self.clone();
        m.gp = gp;
        m.eta_e = eta_e;
        m.refresh_rates();
        m
    }

    pub fn with_thermal_occupation(&self, n_th: [f64; 2]) -> Self {
        let mut m = self.clone();
        m.n_th = n_th;
        m.n_r = [m.bogoliubov_occupation(0), m.bogoliubov_occupation(1)];
        m
    }

    /// G'₁² + G'₂² + η_e²
    pub fn coupling_norm_sq(&self) -> f64 {
        self.gp[0] * self.gp[0] + self.gp[1] * self.gp[1] + self.eta_e * self.eta_e
    }

    /// 𝒢 as a complex number: real in the underdamped regime, imaginary when overdamped.
    pub fn curly_g(&self) -> Complex64 {
        Complex64::new(self.curly_g_sq, 0.0).sqrt()
    }

    /// t_s = π/𝒢.
    pub fn swap_time(&self) -> Result<f64> {
        if self.curly_g_sq > 0.0 {
            Ok(std::f64::consts::PI / self.curly_g_sq.sqrt())
        } else {
            Err(Error::Overdamped {
                curly_g_sq: self.curly_g_sq,
            })
        }
    }

    /// t_s⁽⁰⁾ = π/√(G'₁² + G'₂² + η_e²), the swap time without dissipation.
    pub fn lossless_swap_time(&self) -> Result<f64> {
        let norm = self.coupling_norm_sq();
        if norm > 0.0 {
            Ok(std::f64::consts::PI / norm.sqrt())
        } else {
            Err(Error::Overdamped { curly_g_sq: norm })
        }
    }

    /// Noise strengths 𝒩_j = γ sinh(2r_j)(1 + 2n̄_{th,j}) of the oscillating diffusion block.
    pub fn oscillating_noise(&self) -> [f64; 2] {
        [0, 1].map(|j| self.gamma * (2.0 * self.r[j]).sinh() * (1.0 + 2.0 * self.n_th[j]))
    }

    pub fn rwa_diagnostics(&self, threshold: f64) -> RwaDiagnostics {
        rwa_diagnostics(self, threshold)
    }
}

pub fn rwa_diagnostics(model: &EffectiveModel, threshold: f64) -> RwaDiagnostics {
    let omega1 = model.omega[0];
    let coupling_ratio = model.gp[0].abs().max(model.gp[1].abs()) / omega1;
    let noise_ratio = (0..2)
        .map(|j| model.gamma * model.mu[j] * model.nu[j] * (1.0 + 2.0 * model.n_th[j]))
        .fold(0.0, f64::max)
        / omega1;
    RwaDiagnostics {
        coupling_ratio,
        noise_ratio,
        threshold,
        rwa_ok: coupling_ratio < threshold && noise_ratio < threshold,
    }
}

pub fn swap_time(model: &EffectiveModel) -> Result<f64> {
    model.swap_time()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{reduce, SystemParams};
    use crate::steady_state::steady_state_for_coupling;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn model_at(g1: f64) -> EffectiveModel {
        let p = reduce(&SystemParams::paper_defaults()).unwrap();
        let st = steady_state_for_coupling(&p, g1).unwrap();
        build_effective(&st, &p).unwrap()
    }

    #[test]
    fn identity_transform_without_duffing() {
        let mut p = reduce(&SystemParams::paper_defaults()).unwrap();
        p.duffing = [0.0; 2];
        let st = steady_state_for_coupling(&p, 0.2).unwrap();
        let m = build_effective(&st, &p).unwrap();
        assert_eq!(m.r, [0.0, 0.0]);
        assert_eq!(m.mu, [1.0, 1.0]);
        assert_eq!(m.nu, [0.0, 0.0]);
        assert_eq!(m.omega, p.omega_m);
        assert_eq!(m.gp, m.g_enh);
        assert_eq!(m.n_r, m.n_th);
    }

    #[test]
    fn weak_duffing_squeeze() {
        // Λ/ω = 3e-4 at zero displacement; extended-precision reference ¼ ln(1.0012).
        let m = model_at(0.0);
        assert_relative_eq!(m.r[0], 2.998_201_438_705_242_9e-4, max_relative = 1e-13);
    }

    #[test]
    fn transfer_frequency_without_optomechanics() {
        let m = EffectiveModel::synthetic([0.0, 0.0], 0.3, 0.01, 1e-5);
        // √(η² − χ₂²) at 40 digits.
        assert_relative_eq!(m.curly_g().re, 0.299_958_413_742_638_66, max_relative = 1e-14);
    }

    #[test]
    fn frame_identities() {
        for g1 in [0.0, 0.05, 0.3, 0.8, 1.5] {
            let m = model_at(g1);
            for j in 0..2 {
                assert!((m.mu[j].powi(2) - m.nu[j].powi(2) - 1.0).abs() < 1e-12);
                assert!(m.r[j] >= 0.0);
                assert!(m.n_r[j] >= m.n_th[j]);
                if g1 > 0.0 {
                    let lhs = m.gp[j].powi(2) / m.omega[j];
                    let rhs = m.g_enh[j].powi(2) * (-4.0 * m.r[j]).exp();
                    assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn squeeze_grows_with_coupling() {
        let rs: Vec<f64> = (0..30).map(|k| model_at(0.05 * k as f64).r[0]).collect();
        assert!(rs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn unequal_damping_rejected() {
        let mut p = reduce(&SystemParams::paper_defaults()).unwrap();
        p.gamma_e *= 2.0;
        let st = steady_state_for_coupling(&p, 0.1).unwrap();
        assert!(matches!(build_effective(&st, &p), Err(Error::InvalidRegime(_))));
    }

    #[test]
    fn rwa_flags() {
        let m = EffectiveModel::synthetic([0.0, 0.0], 0.0, 0.01, 1e-5);
        let d = m.rwa_diagnostics(RWA_THRESHOLD);
        assert_eq!(d.coupling_ratio, 0.0);
        assert_eq!(d.noise_ratio, 0.0);
        assert!(d.rwa_ok);

        let mut p = reduce(&SystemParams::paper_defaults()).unwrap();
        p.duffing = [0.0; 2];
        p.input_power = 0.05;
        let st = crate::steady_state::solve_self_consistent(&p).unwrap();
        let d = build_effective(&st, &p).unwrap().rwa_diagnostics(RWA_THRESHOLD);
        assert!(d.coupling_ratio > 0.5, "{d:?}");
        assert!(!d.rwa_ok);
    }

    #[test]
    fn swap_times() {
        let m = EffectiveModel::synthetic([0.0, 0.0], 0.5, 0.0, 0.0);
        assert_relative_eq!(m.swap_time().unwrap(), 2.0 * PI, max_relative = 1e-15);
        let g = 0.07;
        let m = EffectiveModel::synthetic([g, g], 2f64.sqrt() * g, 0.0, 0.0);
        assert_relative_eq!(m.lossless_swap_time().unwrap(), PI / (2.0 * g), max_relative = 1e-15);
        let m = EffectiveModel::synthetic([g, 0.0], g, 0.0, 0.0);
        assert_relative_eq!(m.lossless_swap_time().unwrap(), PI / (2f64.sqrt() * g), max_relative = 1e-15);
    }

    #[test]
    fn overdamped_has_no_swap_time() {
        let m = EffectiveModel::synthetic([1e-3, 0.0], 1e-3, 0.01, 1e-5);
        assert!(matches!(m.swap_time(), Err(Error::Overdamped { .. })));
        assert!(m.curly_g().im > 0.0);
    }

    #[test]
    fn swap_time_diverges_at_critical_damping() {
        let chi2 = 0.5 * (0.01 - 1e-5);
        let mut prev = f64::INFINITY;
        for k in 1..10 {
            let eps = 10f64.powi(-k);
            let eta = (chi2 * chi2 + eps).sqrt();
            let m = EffectiveModel::synthetic([0.0, 0.0], eta, 0.01, 1e-5);
            let inv = 1.0 / m.swap_time().unwrap();
            assert!(inv < prev);
            prev = inv;
        }
        assert!(prev < 1e-4);
    }
}

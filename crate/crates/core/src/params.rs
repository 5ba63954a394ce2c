//! Physical inputs, constants and the reduced (ω₁-normalised) unit system.
//!
//! Everything downstream of [`reduce`] works with frequencies in units of the
//! first mechanical frequency ω₁ and times in units of 1/ω₁.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Reduced Planck constant (J s), CODATA 2018 exact value.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), CODATA 2018 exact value.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 299_792_458.0;

/// Quality factors below this trigger a warning; the noise model assumes ω/γ ≫ 1.
pub const MIN_QUALITY_FACTOR: f64 = 1e3;

/// How the cavity and atomic detunings are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", content = "detuning", rename_all = "kebab-case")]
pub enum DetuningRule {
    /// Δ = Δ_e = Ω₁, tracked self-consistently with the mirror displacement.
    #[default]
    Resonant,
    /// Δ = Δ_e held at the given value (rad/s in SI, units of ω₁ once reduced).
    Fixed(f64),
}

/// Raw physical inputs in SI units. Pairs are indexed by mirror (0 → mirror 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_m: [f64; 2],
    pub gamma_m: [f64; 2],
    pub duffing: [f64; 2],
    pub g_single: [f64; 2],
    pub kappa: f64,
    pub eta_e: f64,
    pub gamma_e: f64,
    pub temperature: [f64; 2],
    pub laser_wavelength: f64,
    pub input_power: f64,
    pub detuning_rule: DetuningRule,
}

impl SystemParams {
    /// The experimentally motivated parameter set used throughout the figures:
    /// ω₁ = ω₂ = 2π × 5 MHz, κ = π × 10⁵ s⁻¹, γ = 10⁻⁵ω₁, λ = 10⁻⁴ω₁,
    /// g = 6.07 × 10⁻⁴ω₁, η_e = 0.3ω₁, T = 25 mK, λ_L = 810 nm, P_in = 1 mW.
    ///
    /// λ₁ = 10⁻⁴ω₁ is an assumption for the power-sweep figure, where only λ₂ is quoted.
    pub fn paper_defaults() -> Self {
        let omega1 = 2.0 * PI * 5.0e6;
        Self {
            omega_m: [omega1, omega1],
            gamma_m: [1e-5 * omega1; 2],
            duffing: [1e-4 * omega1; 2],
            g_single: [6.07e-4 * omega1; 2],
            kappa: PI * 1e5,
            eta_e: 0.3 * omega1,
            gamma_e: 1e-5 * omega1,
            temperature: [0.025; 2],
            laser_wavelength: 810e-9,
            input_power: 1e-3,
            detuning_rule: DetuningRule::Resonant,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_m1", self.omega_m[0]),
            ("omega_m2", self.omega_m[1]),
            ("gamma_m1", self.gamma_m[0]),
            ("gamma_m2", self.gamma_m[1]),
            ("kappa", self.kappa),
            ("gamma_e", self.gamma_e),
            ("laser_wavelength", self.laser_wavelength),
        ];
        for (name, v) in positive {
            ensure_finite(name, v)?;
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        // g₂ = 0 is how a clamped second mirror is expressed.
        let non_negative = [
            ("duffing1", self.duffing[0]),
            ("duffing2", self.duffing[1]),
            ("g1", self.g_single[0]),
            ("g2", self.g_single[1]),
            ("eta_e", self.eta_e),
            ("input_power", self.input_power),
            ("temperature1", self.temperature[0]),
            ("temperature2", self.temperature[1]),
        ];
        for (name, v) in non_negative {
            ensure_finite(name, v)?;
            if v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        if let DetuningRule::Fixed(d) = self.detuning_rule {
            ensure_finite("detuning", d)?;
        }
        for j in 0..2 {
            let q = self.omega_m[j] / self.gamma_m[j];
            if q < MIN_QUALITY_FACTOR {
                log::warn!("mechanical quality factor Q{} = {q:.3e} is below {MIN_QUALITY_FACTOR:e}", j + 1);
            }
        }
        Ok(())
    }

    pub fn laser_frequency(&self) -> f64 {
        2.0 * PI * C_LIGHT / self.laser_wavelength
    }
}

/// Dimensionless parameter set: every rate divided by ω₁.
///
/// Temperatures stay in kelvin and the input power in watts; `omega1_si` keeps
/// the scale needed to go back to SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub omega1_si: f64,
    pub omega_m: [f64; 2],
    pub gamma_m: [f64; 2],
    pub duffing: [f64; 2],
    pub g_single: [f64; 2],
    pub kappa: f64,
    pub eta_e: f64,
    pub gamma_e: f64,
    pub temperature: [f64; 2],
    pub omega_l: f64,
    pub input_power: f64,
    pub detuning_rule: DetuningRule,
}

pub fn reduce(params: &SystemParams) -> Result<ReducedParams> {
    let w1 = params.omega_m[0];
    if !(w1 > 0.0) || !w1.is_finite() {
        return Err(Error::InvalidParameter(format!("omega_m1 must be > 0, got {w1}")));
    }
    params.validate()?;
    let pair = |p: [f64; 2]| [p[0] / w1, p[1] / w1];
    Ok(ReducedParams {
        omega1_si: w1,
        omega_m: pair(params.omega_m),
        gamma_m: pair(params.gamma_m),
        duffing: pair(params.duffing),
        g_single: pair(params.g_single),
        kappa: params.kappa / w1,
        eta_e: params.eta_e / w1,
        gamma_e: params.gamma_e / w1,
        temperature: params.temperature,
        omega_l: params.laser_frequency() / w1,
        input_power: params.input_power,
        detuning_rule: match params.detuning_rule {
            DetuningRule::Resonant => DetuningRule::Resonant,
            DetuningRule::Fixed(d) => DetuningRule::Fixed(d / w1),
        },
    })
}

impl ReducedParams {
    /// Inverse of [`reduce`].
    pub fn unreduce(&self) -> SystemParams {
        let w1 = self.omega1_si;
        let pair = |p: [f64; 2]| [p[0] * w1, p[1] * w1];
        SystemParams {
            omega_m: pair(self.omega_m),
            gamma_m: pair(self.gamma_m),
            duffing: pair(self.duffing),
            g_single: pair(self.g_single),
            kappa: self.kappa * w1,
            eta_e: self.eta_e * w1,
            gamma_e: self.gamma_e * w1,
            temperature: self.temperature,
            laser_wavelength: 2.0 * PI * C_LIGHT / (self.omega_l * w1),
            input_power: self.input_power,
            detuning_rule: match self.detuning_rule {
                DetuningRule::Resonant => DetuningRule::Resonant,
                DetuningRule::Fixed(d) => DetuningRule::Fixed(d * w1),
            },
        }
    }

    /// Drive amplitude |ε| in units of ω₁.
    pub fn drive(&self) -> Result<f64> {
        let w1 = self.omega1_si;
        Ok(drive_amplitude(self.input_power, self.kappa * w1, self.omega_l * w1)? / w1)
    }

    /// Input power (W) that produces a drive amplitude `eps` (units of ω₁).
    pub fn power_for_drive(&self, eps: f64) -> f64 {
        let w1 = self.omega1_si;
        let eps_si = eps * w1;
        eps_si * eps_si * HBAR * self.omega_l * w1 / (2.0 * self.kappa * w1)
    }

    /// Mean thermal phonon number of mirror `j` (0-based).
    pub fn n_th(&self, j: usize) -> f64 {
        thermal_occupation(self.omega_m[j] * self.omega1_si, self.temperature[j])
    }
}

/// |ε| = √(2κP_in/(ħω_L)), all in SI (rad/s, W).
pub fn drive_amplitude(power: f64, kappa: f64, omega_l: f64) -> Result<f64> {
    ensure_finite("input_power", power)?;
    if power < 0.0 {
        return Err(Error::InvalidParameter(format!("input power must be >= 0, got {power}")));
    }
    if !(kappa > 0.0) || !(omega_l > 0.0) {
        return Err(Error::InvalidParameter("kappa and omega_L must be > 0".into()));
    }
    Ok((2.0 * kappa * power / (HBAR * omega_l)).sqrt())
}

/// Bose–Einstein occupation [exp(ħω/k_BT) − 1]⁻¹; exactly zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * temperature);
    1.0 / x.exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kappa_is_one_hundredth_of_omega1() {
        let r = reduce(&SystemParams::paper_defaults()).unwrap();
        assert_relative_eq!(r.kappa, 0.01, max_relative = 1e-14);
        assert_eq!(r.omega_m[1], 1.0);
        assert_eq!(r.omega_m[0], 1.0);
    }

    #[test]
    fn laser_frequency_at_810nm() {
        // 2πc/λ_L evaluated at 50 digits with mpmath.
        let p = SystemParams::paper_defaults();
        assert_relative_eq!(p.laser_frequency(), 2.325_495_762_109_695_4e15, max_relative = 1e-15);
    }

    #[test]
    fn nonpositive_omega1_rejected() {
        let mut p = SystemParams::paper_defaults();
        p.omega_m[0] = 0.0;
        assert!(matches!(reduce(&p), Err(Error::InvalidParameter(_))));
        p.omega_m[0] = -1.0;
        assert!(reduce(&p).is_err());
    }

    #[test]
    fn round_trip_to_twelve_digits() {
        let p = SystemParams::paper_defaults();
        let back = reduce(&p).unwrap().unreduce();
        assert_relative_eq!(back.kappa, p.kappa, max_relative = 1e-12);
        assert_relative_eq!(back.laser_wavelength, p.laser_wavelength, max_relative = 1e-12);
        assert_relative_eq!(back.g_single[1], p.g_single[1], max_relative = 1e-12);
        assert_relative_eq!(back.eta_e, p.eta_e, max_relative = 1e-12);
    }

    #[test]
    fn drive_zero_and_scaling() {
        let w_l = 2.3e15;
        assert_eq!(drive_amplitude(0.0, 1e5, w_l).unwrap(), 0.0);
        let a = drive_amplitude(1e-3, 1e5, w_l).unwrap();
        let b = drive_amplitude(2e-3, 1e5, w_l).unwrap();
        assert_relative_eq!(b / a, 2f64.sqrt(), max_relative = 1e-15);
        assert!(matches!(drive_amplitude(-1e-3, 1e5, w_l), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn drive_at_one_milliwatt() {
        // mpmath, 50 digits: sqrt(2 * pi*1e5 * 1e-3 / (hbar * 2*pi*c/810e-9)).
        let p = SystemParams::paper_defaults();
        let eps = drive_amplitude(1e-3, p.kappa, p.laser_frequency()).unwrap();
        assert_relative_eq!(eps, 5.061_672_914_132_962_4e10, max_relative = 1e-13);
    }

    #[test]
    fn thermal_occupation_values() {
        assert_eq!(thermal_occupation(1e7, 0.0), 0.0);
        // ħω/k_BT = ln 2 forces n̄ = 1.
        let omega = 1e7;
        let t = HBAR * omega / (K_B * 2f64.ln());
        assert_relative_eq!(thermal_occupation(omega, t), 1.0, max_relative = 1e-14);
        // 2π × 5 MHz at 25 mK, mpmath reference.
        let n = thermal_occupation(2.0 * PI * 5e6, 0.025);
        assert_relative_eq!(n, 103.683_895_553_089_7, max_relative = 1e-13);
    }

    #[test]
    fn thermal_occupation_monotone() {
        let temps: Vec<f64> = (1..50).map(|i| i as f64 * 0.01).collect();
        for w in temps.windows(2) {
            assert!(thermal_occupation(3e7, w[1]) > thermal_occupation(3e7, w[0]));
        }
        for k in 1..50 {
            let a = thermal_occupation(1e6 * k as f64, 0.05);
            let b = thermal_occupation(1e6 * (k + 1) as f64, 0.05);
            assert!(b < a);
        }
    }
}

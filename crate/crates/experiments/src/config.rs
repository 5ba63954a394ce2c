//! Flat key = value configuration.
//!
//! Physical parameters are in SI units (rad/s, K, m, W). Grid keys for the figure
//! and sweep commands are dimensionless multiples of ω₁ unless the key name ends
//! in `temperature_*` (kelvin) or `power_*` (watts). Every key is optional.

use optomech_core::params::{DetuningRule, SystemParams};
use serde::{Deserialize, Serialize};

use crate::grid;
use crate::sweep::SweepSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub omega_m1: f64,
    pub omega_m2: f64,
    pub gamma_m1: f64,
    pub gamma_m2: f64,
    pub duffing1: f64,
    pub duffing2: f64,
    pub g1_single: f64,
    pub g2_single: f64,
    pub kappa: f64,
    pub eta_e: f64,
    pub gamma_e: f64,
    pub temperature1: f64,
    pub temperature2: f64,
    pub wavelength: f64,
    pub input_power: f64,
    /// "resonant" (Δ = Δ_e = Ω₁) or "fixed" (Δ = Δ_e = `detuning`).
    pub detuning_rule: String,
    pub detuning: f64,

    pub fig2_g1_single: Vec<f64>,
    pub fig2_power_min: f64,
    pub fig2_power_max: f64,
    pub fig2_points: usize,

    pub fig3_g1: Vec<f64>,
    pub fig3_eta_min: f64,
    pub fig3_eta_max: f64,
    pub fig3_eta_step: f64,

    pub fig4_g1: Vec<f64>,
    pub fig4_kappa_min: f64,
    pub fig4_kappa_max: f64,
    pub fig4_kappa_points: usize,
    pub fig4_temperature_min: f64,
    pub fig4_temperature_max: f64,
    pub fig4_temperature_points: usize,
    /// Peak search window around the matched coupling, as a relative half-width.
    pub fig4_eta_window: f64,
    pub fig4_eta_points: usize,

    pub fig5_eta_e: f64,
    pub fig5_g1_min: f64,
    pub fig5_g1_max: f64,
    pub fig5_g1_step: f64,
    /// Initial states as [Re ϱ, ξ] or [Re ϱ, Im ϱ, ξ].
    pub fig5_states: Vec<Vec<f64>>,

    pub fig6_g1: Vec<f64>,
    pub fig6_baseline_g1: f64,
    pub fig6_rho: f64,
    pub fig6_xi: f64,
    pub fig6_eta_e: f64,
    pub fig6_kappa_min: f64,
    pub fig6_kappa_max: f64,
    pub fig6_kappa_points: usize,
    pub fig6_eta_min: f64,
    pub fig6_eta_max: f64,
    pub fig6_eta_points: usize,
    pub fig6_temperature_min: f64,
    pub fig6_temperature_max: f64,
    pub fig6_temperature_points: usize,

    /// Axis specs "name = start:stop:step" or "name = v1, v2, ...".
    pub sweep_axes: Vec<String>,
    pub sweep_observables: Vec<String>,
    pub sweep_g1: f64,
    pub sweep_rho: f64,
    pub sweep_xi: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl Default for Config {
    fn default() -> Self {
        let p = SystemParams::paper_defaults();
        let (rule, detuning) = match p.detuning_rule {
            DetuningRule::Resonant => ("resonant".to_string(), 0.0),
            DetuningRule::Fixed(d) => ("fixed".to_string(), d),
        };
        Config {
            omega_m1: p.omega_m[0],
            omega_m2: p.omega_m[1],
            gamma_m1: p.gamma_m[0],
            gamma_m2: p.gamma_m[1],
            duffing1: p.duffing[0],
            duffing2: p.duffing[1],
            g1_single: p.g_single[0],
            g2_single: p.g_single[1],
            kappa: p.kappa,
            eta_e: p.eta_e,
            gamma_e: p.gamma_e,
            temperature1: p.temperature[0],
            temperature2: p.temperature[1],
            wavelength: p.laser_wavelength,
            input_power: p.input_power,
            detuning_rule: rule,
            detuning,

            fig2_g1_single: vec![1.92e-6, 1.36e-5, 1.36e-4, 6.07e-4],
            fig2_power_min: 1e-9,
            fig2_power_max: 1e-1,
            fig2_points: 200,

            fig3_g1: vec![0.3, 0.5],
            fig3_eta_min: 0.001,
            fig3_eta_max: 0.6,
            fig3_eta_step: 0.001,

            fig4_g1: vec![0.3, 0.5],
            fig4_kappa_min: 1e-3,
            fig4_kappa_max: 1e-1,
            fig4_kappa_points: 21,
            fig4_temperature_min: 1e-3,
            fig4_temperature_max: 0.5,
            fig4_temperature_points: 16,
            fig4_eta_window: 0.3,
            fig4_eta_points: 61,

            fig5_eta_e: 0.005,
            fig5_g1_min: 0.01,
            fig5_g1_max: 2.0,
            fig5_g1_step: 0.01,
            fig5_states: vec![vec![1.0, 0.25], vec![1.0, 0.5], vec![2.0, 0.5], vec![1.0, 1.0]],

            fig6_g1: vec![0.1, 0.3, 0.8],
            fig6_baseline_g1: 0.1,
            fig6_rho: 1.0,
            fig6_xi: 0.5,
            fig6_eta_e: 0.005,
            fig6_kappa_min: 1e-3,
            fig6_kappa_max: 0.1,
            fig6_kappa_points: 34,
            fig6_eta_min: 0.005,
            fig6_eta_max: 0.2,
            fig6_eta_points: 40,
            fig6_temperature_min: 1e-3,
            fig6_temperature_max: 0.5,
            fig6_temperature_points: 34,

            sweep_axes: Vec::new(),
            sweep_observables: vec!["d_yc_ii".into(), "fidelity".into()],
            sweep_g1: 0.3,
            sweep_rho: 1.0,
            sweep_xi: 0.5,
        }
    }
}

/// Initial state |ϱ, ξ⟩ of the transfer experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub rho_re: f64,
    pub rho_im: f64,
    pub xi: f64,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let cfg: Config = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn omega1(&self) -> f64 {
        self.omega_m1
    }

    pub fn system_params(&self) -> Result<SystemParams, ConfigError> {
        let detuning_rule = match self.detuning_rule.as_str() {
            "resonant" => DetuningRule::Resonant,
            "fixed" => DetuningRule::Fixed(self.detuning),
            other => return Err(ConfigError(format!("detuning_rule must be \"resonant\" or \"fixed\", got {other:?}"))),
        };
        let p = SystemParams {
            omega_m: [self.omega_m1, self.omega_m2],
            gamma_m: [self.gamma_m1, self.gamma_m2],
            duffing: [self.duffing1, self.duffing2],
            g_single: [self.g1_single, self.g2_single],
            kappa: self.kappa,
            eta_e: self.eta_e,
            gamma_e: self.gamma_e,
            temperature: [self.temperature1, self.temperature2],
            laser_wavelength: self.wavelength,
            input_power: self.input_power,
            detuning_rule,
        };
        p.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(p)
    }

    pub fn fig5_initial_states(&self) -> Result<Vec<InitialState>, ConfigError> {
        self.fig5_states
            .iter()
            .map(|s| match s[..] {
                [re, xi] => Ok(InitialState { rho_re: re, rho_im: 0.0, xi }),
                [re, im, xi] => Ok(InitialState { rho_re: re, rho_im: im, xi }),
                _ => Err(ConfigError(format!("fig5_states entries need 2 or 3 numbers, got {s:?}"))),
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.system_params()?;
        let check_range = |name: &str, lo: f64, hi: f64| {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                Err(ConfigError(format!("{name}: need finite min < max, got [{lo}, {hi}]")))
            } else {
                Ok(())
            }
        };
        let check_points = |name: &str, n: usize| {
            if n < 2 {
                Err(ConfigError(format!("{name} must be >= 2, got {n}")))
            } else {
                Ok(())
            }
        };
        let check_positive = |name: &str, v: f64| {
            if !(v > 0.0 && v.is_finite()) {
                Err(ConfigError(format!("{name} must be > 0, got {v}")))
            } else {
                Ok(())
            }
        };
        check_range("fig2_power", self.fig2_power_min, self.fig2_power_max)?;
        check_positive("fig2_power_min", self.fig2_power_min)?;
        check_points("fig2_points", self.fig2_points)?;
        check_range("fig3_eta", self.fig3_eta_min, self.fig3_eta_max)?;
        check_positive("fig3_eta_step", self.fig3_eta_step)?;
        check_range("fig4_kappa", self.fig4_kappa_min, self.fig4_kappa_max)?;
        check_positive("fig4_kappa_min", self.fig4_kappa_min)?;
        check_points("fig4_kappa_points", self.fig4_kappa_points)?;
        check_range("fig4_temperature", self.fig4_temperature_min, self.fig4_temperature_max)?;
        check_positive("fig4_temperature_min", self.fig4_temperature_min)?;
        check_points("fig4_temperature_points", self.fig4_temperature_points)?;
        if self.fig4_eta_points < 3 {
            return Err(ConfigError(format!("fig4_eta_points must be >= 3, got {}", self.fig4_eta_points)));
        }
        if !(self.fig4_eta_window > 0.0 && self.fig4_eta_window < 1.0) {
            return Err(ConfigError(format!("fig4_eta_window must lie in (0, 1), got {}", self.fig4_eta_window)));
        }
        check_range("fig5_g1", self.fig5_g1_min, self.fig5_g1_max)?;
        check_positive("fig5_g1_step", self.fig5_g1_step)?;
        self.fig5_initial_states()?;
        check_range("fig6_kappa", self.fig6_kappa_min, self.fig6_kappa_max)?;
        check_points("fig6_kappa_points", self.fig6_kappa_points)?;
        check_range("fig6_eta", self.fig6_eta_min, self.fig6_eta_max)?;
        check_points("fig6_eta_points", self.fig6_eta_points)?;
        check_range("fig6_temperature", self.fig6_temperature_min, self.fig6_temperature_max)?;
        check_points("fig6_temperature_points", self.fig6_temperature_points)?;
        for (name, list) in [("fig3_g1", &self.fig3_g1), ("fig4_g1", &self.fig4_g1), ("fig6_g1", &self.fig6_g1)] {
            if list.is_empty() || list.iter().any(|g| !(*g > 0.0)) {
                return Err(ConfigError(format!("{name} must be a non-empty list of positive couplings")));
            }
        }
        if self.fig2_g1_single.iter().any(|g| !(*g >= 0.0)) {
            return Err(ConfigError("fig2_g1_single entries must be >= 0".into()));
        }
        SweepSpec::from_config(self)?;
        Ok(())
    }

    pub fn fig2_powers(&self) -> Vec<f64> {
        let mut p = vec![0.0];
        p.extend(grid::logspace(self.fig2_power_min, self.fig2_power_max, self.fig2_points));
        p
    }

    pub fn fig3_etas(&self) -> Vec<f64> {
        grid::arange(self.fig3_eta_min, self.fig3_eta_max, self.fig3_eta_step)
    }

    pub fn fig5_g1s(&self) -> Vec<f64> {
        grid::arange(self.fig5_g1_min, self.fig5_g1_max, self.fig5_g1_step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn defaults_reproduce_reference_params() {
        let cfg = Config::default();
        assert_eq!(cfg.system_params().unwrap(), SystemParams::paper_defaults());
        assert!((cfg.kappa - PI * 1e5).abs() < 1e-9);
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = Config::parse("kapa = 1.0\n").unwrap_err();
        assert!(e.0.contains("kapa"), "{e}");
    }

    #[test]
    fn integer_literals_accepted_for_floats() {
        let cfg = Config::parse("input_power = 0\nfig2_points = 10\n").unwrap();
        assert_eq!(cfg.input_power, 0.0);
        assert_eq!(cfg.fig2_points, 10);
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(Config::parse("kappa = -1.0").is_err());
        assert!(Config::parse("detuning_rule = \"sideways\"").is_err());
        assert!(Config::parse("fig3_eta_min = 0.5\nfig3_eta_max = 0.1").is_err());
        assert!(Config::parse("fig5_states = [[1.0]]").is_err());
        assert!(Config::parse("sweep_observables = [\"entropy\"]").is_err());
    }

    #[test]
    fn grids() {
        let cfg = Config::default();
        let p = cfg.fig2_powers();
        assert_eq!(p.len(), 201);
        assert_eq!(p[0], 0.0);
        let e = cfg.fig3_etas();
        assert_eq!(e.len(), 600);
        assert_eq!(e[299], 0.3);
        let g = cfg.fig5_g1s();
        assert_eq!(g.len(), 200);
        assert!(g.contains(&0.1) && g.contains(&0.3) && g.contains(&0.8));
    }
}

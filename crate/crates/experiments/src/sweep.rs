//! Cartesian parameter sweeps declared in the config.

use serde::Serialize;

use crate::config::{Config, ConfigError};
use crate::grid;

/// Parameters a sweep axis may vary. Rates are in units of ω₁, temperature in kelvin.
pub const AXES: &[(&str, &str)] = &[
    ("g1", "omega1"),
    ("eta_e", "omega1"),
    ("kappa", "omega1"),
    ("gamma", "omega1"),
    ("duffing", "omega1"),
    ("temperature", "K"),
    ("xi", "-"),
    ("rho", "-"),
    ("g1_single", "omega1"),
];

pub const OBSERVABLES: &[(&str, &str, &str)] = &[
    ("d_yc_i", "dB", "atomic squeezing, mirror 2 fixed"),
    ("d_yc_ii", "dB", "atomic squeezing, both mirrors coupled"),
    ("var_y_i", "-", "var(y_c) at t_s, mirror 2 fixed"),
    ("var_y_ii", "-", "var(y_c) at t_s, both mirrors coupled"),
    ("fidelity", "-", "transfer fidelity of |rho, xi>"),
    ("n_h", "-", "heating parameter"),
    ("lambda_h", "-", "amplitude-decay parameter"),
    ("g1_opt", "omega1", "optimal coupling estimate for xi"),
    ("r1", "-", "Bogoliubov squeeze of mirror 1"),
    ("gp1", "omega1", "transformed coupling G'1"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    pub observables: Vec<String>,
}

fn parse_number(s: &str, spec: &str) -> Result<f64, ConfigError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("sweep axis {spec:?}: {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(ConfigError(format!("sweep axis {spec:?}: {s:?} is not finite")));
    }
    Ok(v)
}

/// Parses "name = start:stop:step" or "name = v1, v2, ...".
pub fn parse_axis(spec: &str) -> Result<Axis, ConfigError> {
    let (name, rhs) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("sweep axis {spec:?} must look like \"name = values\"")))?;
    let name = name.trim();
    if !AXES.iter().any(|(n, _)| *n == name) {
        let known: Vec<&str> = AXES.iter().map(|(n, _)| *n).collect();
        return Err(ConfigError(format!("unknown sweep axis {name:?} (known: {})", known.join(", "))));
    }
    let rhs = rhs.trim();
    let values = if rhs.contains(':') {
        let parts: Vec<&str> = rhs.split(':').collect();
        let [a, b, h] = parts[..] else {
            return Err(ConfigError(format!("sweep axis {spec:?}: range needs start:stop:step")));
        };
        let (a, b, h) = (parse_number(a, spec)?, parse_number(b, spec)?, parse_number(h, spec)?);
        if !(h > 0.0) || b < a {
            return Err(ConfigError(format!("sweep axis {spec:?}: need step > 0 and stop >= start")));
        }
        grid::arange(a, b, h)
    } else {
        rhs.split(',').map(|s| parse_number(s, spec)).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(ConfigError(format!("sweep axis {spec:?} has no values")));
    }
    Ok(Axis { name: name.to_string(), values })
}

impl SweepSpec {
    pub fn from_config(cfg: &Config) -> Result<SweepSpec, ConfigError> {
        let axes = cfg.sweep_axes.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.name == a.name) {
                return Err(ConfigError(format!("sweep axis {:?} declared twice", a.name)));
            }
        }
        if cfg.sweep_observables.is_empty() {
            return Err(ConfigError("sweep_observables must not be empty".into()));
        }
        for o in &cfg.sweep_observables {
            if !OBSERVABLES.iter().any(|(n, _, _)| n == o) {
                let known: Vec<&str> = OBSERVABLES.iter().map(|(n, _, _)| *n).collect();
                return Err(ConfigError(format!("unknown sweep observable {o:?} (known: {})", known.join(", "))));
            }
        }
        Ok(SweepSpec {
            axes,
            observables: cfg.sweep_observables.clone(),
        })
    }

    /// Every grid point, first axis outermost. An empty axis list yields one empty point.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for axis in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn wants(&self, name: &str) -> bool {
        self.observables.iter().any(|o| o == name)
    }
}

pub fn axis_unit(name: &str) -> &'static str {
    AXES.iter().find(|(n, _)| *n == name).map_or("-", |(_, u)| u)
}

pub fn observable_meta(name: &str) -> (&'static str, &'static str) {
    OBSERVABLES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map_or(("-", ""), |(_, u, d)| (u, d))
}

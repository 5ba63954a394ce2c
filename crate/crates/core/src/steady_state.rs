//! Mean-field operating point of the driven cavity.
//!
//! The intracavity amplitude α_s depends on the effective detuning Δ, which under
//! the resonant tuning rule equals the Bogoliubov frequency Ω₁. Ω₁ in turn depends
//! on the mirror displacement β₁ through the enhanced Duffing parameter, and β₁ on
//! α_s. [`solve_self_consistent`] closes this loop with a damped fixed-point
//! iteration.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::params::{DetuningRule, ReducedParams};

/// Convergence threshold on the maximum relative change between sweeps.
pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 1000;
/// Weight of the new β estimate in each damped update.
pub const DAMPING: f64 = 0.5;

/// Which mirror a quantity refers to. The radiation-pressure force carries the
/// sign (−1)^j, so mirror 1 is pushed to β > 0 and mirror 2 to β < 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mirror {
    One,
    Two,
}

impl Mirror {
    pub fn index(self) -> usize {
        match self {
            Mirror::One => 0,
            Mirror::Two => 1,
        }
    }

    /// (−1)^j
    pub fn sign(self) -> f64 {
        match self {
            Mirror::One => -1.0,
            Mirror::Two => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub alpha_s: f64,
    pub beta_s: [f64; 2],
    pub delta: f64,
    pub delta_e: f64,
    /// Enhanced couplings G_j = g_j α_s.
    pub g_enh: [f64; 2],
    /// Enhanced Duffing parameters Λ_j = 3λ_j(1 + 4β_j²).
    pub lambda_enh: [f64; 2],
    /// Input power realising this operating point (W).
    pub input_power: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Coefficients (a, b, s) of 16a·β³ + b·β + s = 0.
fn cubic_coefficients(lambda_ratio: f64, gamma_ratio: f64, g_ratio: f64, alpha_sq: f64, mirror: Mirror) -> (f64, f64, f64) {
    let a = 16.0 * lambda_ratio;
    let b = 1.0 + 12.0 * lambda_ratio + gamma_ratio * gamma_ratio;
    let s = mirror.sign() * g_ratio * alpha_sq;
    (a, b, s)
}

/// Residual of the mirror cubic relative to its largest term.
pub fn mirror_cubic_residual(lambda_ratio: f64, gamma_ratio: f64, g_ratio: f64, alpha_sq: f64, mirror: Mirror, beta: f64) -> f64 {
    let (a, b, s) = cubic_coefficients(lambda_ratio, gamma_ratio, g_ratio, alpha_sq, mirror);
    let terms = [a * beta.powi(3), b * beta, s];
    let scale = terms.iter().fold(f64::MIN_POSITIVE, |m, t| m.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale
}

/// Real root of 16(λ/ω)β³ + (1 + 12λ/ω + γ²/ω²)β + (−1)^j (g/ω)α_s² = 0.
///
/// For λ ≥ 0 the cubic is strictly increasing, so the root is unique. It is
/// taken from the hyperbolic form of the depressed-cubic solution (no
/// cancellation when the cubic term is small) and polished by one Newton step.
pub fn solve_mirror_cubic(lambda_ratio: f64, gamma_ratio: f64, g_ratio: f64, alpha_sq: f64, mirror: Mirror) -> Result<f64> {
    for (name, v) in [
        ("lambda_ratio", lambda_ratio),
        ("gamma_ratio", gamma_ratio),
        ("g_ratio", g_ratio),
        ("alpha_sq", alpha_sq),
    ] {
        ensure_finite(name, v)?;
    }
    if lambda_ratio < 0.0 {
        return Err(Error::InvalidParameter(format!("Duffing ratio must be >= 0, got {lambda_ratio}")));
    }
    let (a, b, s) = cubic_coefficients(lambda_ratio, gamma_ratio, g_ratio, alpha_sq, mirror);
    if s == 0.0 {
        return Ok(0.0);
    }
    if a == 0.0 {
        return Ok(-s / b);
    }
    // β³ + pβ + q = 0 with p > 0.
    let p = b / a;
    let q = s / a;
    let k = (p / 3.0).sqrt();
    let mut beta = -2.0 * k * ((1.5 * q / (p * k)).asinh() / 3.0).sinh();
    if !beta.is_finite() {
        beta = -s / b;
    }
    let f = a * beta.powi(3) + b * beta + s;
    let df = 3.0 * a * beta * beta + b;
    beta -= f / df;
    Ok(beta)
}

/// Eq. for α_s: |ε| / √((Δ − η²Δ_e/(Δ_e²+γ_e²))² + (κ + η²γ_e/(Δ_e²+γ_e²))²).
pub fn intracavity_amplitude(delta: f64, delta_e: f64, eta_e: f64, gamma_e: f64, kappa: f64, eps: f64) -> f64 {
    let den = delta_e * delta_e + gamma_e * gamma_e;
    let (shift, broaden) = if den > 0.0 {
        (eta_e * eta_e * delta_e / den, eta_e * eta_e * gamma_e / den)
    } else {
        (0.0, 0.0)
    };
    eps / (delta - shift).hypot(kappa + broaden)
}

/// Squeeze parameter r = ¼ ln(1 + 4Λ/ω).
pub(crate) fn squeeze_parameter(lambda_enh: f64, omega: f64) -> Result<f64> {
    let arg = 4.0 * lambda_enh / omega;
    if !(arg > -1.0) {
        return Err(Error::InvalidRegime(format!(
            "enhanced Duffing parameter {lambda_enh} below -omega/4 (omega = {omega})"
        )));
    }
    Ok(0.25 * arg.ln_1p())
}

fn enhanced_duffing(lambda: f64, beta: f64) -> f64 {
    3.0 * lambda * (1.0 + 4.0 * beta * beta)
}

/// Detuning Δ = Δ_e implied by the tuning rule at mirror-1 displacement `beta1`.
fn detuning_for(params: &ReducedParams, beta1: f64) -> Result<f64> {
    match params.detuning_rule {
        DetuningRule::Fixed(d) => Ok(d),
        DetuningRule::Resonant => {
            let w = params.omega_m[0];
            let r = squeeze_parameter(enhanced_duffing(params.duffing[0], beta1), w)?;
            Ok(w * (2.0 * r).exp())
        }
    }
}

fn mirror_displacement(params: &ReducedParams, alpha_sq: f64, mirror: Mirror) -> Result<f64> {
    let j = mirror.index();
    let w = params.omega_m[j];
    solve_mirror_cubic(
        params.duffing[j] / w,
        params.gamma_m[j] / w,
        params.g_single[j] / w,
        alpha_sq,
        mirror,
    )
}

fn assemble(params: &ReducedParams, alpha_s: f64, beta_s: [f64; 2], delta: f64, iterations: usize, residual: f64) -> SteadyState {
    let eps = alpha_s / intracavity_amplitude(delta, delta, params.eta_e, params.gamma_e, params.kappa, 1.0);
    SteadyState {
        alpha_s,
        beta_s,
        delta,
        delta_e: delta,
        g_enh: [params.g_single[0] * alpha_s, params.g_single[1] * alpha_s],
        lambda_enh: [
            enhanced_duffing(params.duffing[0], beta_s[0]),
            enhanced_duffing(params.duffing[1], beta_s[1]),
        ],
        input_power: params.power_for_drive(eps),
        iterations,
        residual,
    }
}

/// Damped fixed-point solution of the coupled steady-state equations at the
/// drive power stored in `params`.
pub fn solve_self_consistent(params: &ReducedParams) -> Result<SteadyState> {
    let eps = params.drive()?;
    if !(params.kappa > 0.0) {
        return Err(Error::InvalidParameter("kappa must be > 0 for the steady state".into()));
    }
    let mut beta = [0.0f64; 2];
    let mut last_change = f64::INFINITY;
    for sweep in 1..=MAX_SWEEPS {
        let delta = detuning_for(params, beta[0])?;
        let alpha = intracavity_amplitude(delta, delta, params.eta_e, params.gamma_e, params.kappa, eps);
        let alpha_sq = alpha * alpha;
        let target = [
            mirror_displacement(params, alpha_sq, Mirror::One)?,
            mirror_displacement(params, alpha_sq, Mirror::Two)?,
        ];
        let mut change = 0.0f64;
        for j in 0..2 {
            let scale = target[j].abs().max(beta[j].abs());
            if scale > 0.0 {
                change = change.max((target[j] - beta[j]).abs() / scale);
            }
        }
        last_change = change;
        if change < FIXED_POINT_TOL {
            // Final undamped pass so the returned point satisfies both equations.
            let delta = detuning_for(params, target[0])?;
            let alpha = intracavity_amplitude(delta, delta, params.eta_e, params.gamma_e, params.kappa, eps);
            let beta_final = [
                mirror_displacement(params, alpha * alpha, Mirror::One)?,
                mirror_displacement(params, alpha * alpha, Mirror::Two)?,
            ];
            let mut st = assemble(params, alpha, beta_final, delta, sweep, change);
            st.input_power = params.input_power;
            return Ok(st);
        }
        if sweep == 1 {
            // Undamped first step from the undisplaced guess.
            beta = target;
            continue;
        }
        for j in 0..2 {
            beta[j] = (1.0 - DAMPING) * beta[j] + DAMPING * target[j];
        }
    }
    Err(Error::Convergence {
        iterations: MAX_SWEEPS,
        residual: last_change,
    })
}

/// Operating point realising a prescribed enhanced coupling G₁ (units of ω₁).
///
/// α_s = G₁/g₁ fixes the mirror displacements, Λ_j and hence Δ = Ω₁ directly, so
/// the drive power is obtained in closed form instead of by iteration.
pub fn steady_state_for_coupling(params: &ReducedParams, g1: f64) -> Result<SteadyState> {
    ensure_finite("G1", g1)?;
    if g1 < 0.0 {
        return Err(Error::InvalidParameter(format!("G1 must be >= 0, got {g1}")));
    }
    let g_single = params.g_single[0];
    if g1 > 0.0 && !(g_single > 0.0) {
        return Err(Error::InvalidParameter("G1 > 0 requires g1 > 0".into()));
    }
    let alpha_s = if g1 == 0.0 { 0.0 } else { g1 / g_single };
    let alpha_sq = alpha_s * alpha_s;
    let beta = [
        mirror_displacement(params, alpha_sq, Mirror::One)?,
        mirror_displacement(params, alpha_sq, Mirror::Two)?,
    ];
    let delta = detuning_for(params, beta[0])?;
    Ok(assemble(params, alpha_s, beta, delta, 0, 0.0))
}

/// Residuals of both steady-state equations at `state`: (relative α_s mismatch,
/// relative cubic residuals of the two mirrors).
pub fn residuals(state: &SteadyState, params: &ReducedParams) -> Result<(f64, [f64; 2])> {
    let eps = {
        let mut p = params.clone();
        p.input_power = state.input_power;
        p.drive()?
    };
    let alpha = intracavity_amplitude(state.delta, state.delta_e, params.eta_e, params.gamma_e, params.kappa, eps);
    let scale = alpha.abs().max(state.alpha_s.abs());
    let alpha_res = if scale > 0.0 { (alpha - state.alpha_s).abs() / scale } else { 0.0 };
    let alpha_sq = state.alpha_s * state.alpha_s;
    let mut cubic = [0.0; 2];
    for (j, mirror) in [Mirror::One, Mirror::Two].into_iter().enumerate() {
        let w = params.omega_m[j];
        cubic[j] = mirror_cubic_residual(
            params.duffing[j] / w,
            params.gamma_m[j] / w,
            params.g_single[j] / w,
            alpha_sq,
            mirror,
            state.beta_s[j],
        );
    }
    Ok((alpha_res, cubic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{reduce, SystemParams};
    use approx::assert_relative_eq;

    fn defaults() -> ReducedParams {
        reduce(&SystemParams::paper_defaults()).unwrap()
    }

    /// Bisection on the monotone cubic, independent of the closed form.
    fn bisect_root(lr: f64, gr: f64, g: f64, a2: f64, m: Mirror) -> f64 {
        let (a, b, s) = (16.0 * lr, 1.0 + 12.0 * lr + gr * gr, m.sign() * g * a2);
        let f = |x: f64| a * x * x * x + b * x + s;
        let bound = -s / b;
        let (mut lo, mut hi) = if bound > 0.0 { (0.0, bound) } else { (bound, 0.0) };
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn zero_drive_gives_zero_displacement() {
        assert_eq!(solve_mirror_cubic(1e-4, 1e-5, 6e-4, 0.0, Mirror::One).unwrap(), 0.0);
    }

    #[test]
    fn linear_case() {
        let b1 = solve_mirror_cubic(0.0, 0.0, 2e-3, 500.0, Mirror::One).unwrap();
        assert_relative_eq!(b1, 1.0, max_relative = 1e-15);
        let b2 = solve_mirror_cubic(0.0, 0.0, 2e-3, 500.0, Mirror::Two).unwrap();
        assert_relative_eq!(b2, -1.0, max_relative = 1e-15);
    }

    #[test]
    fn cubic_matches_bisection() {
        let args = (1e-4, 1e-5, 6.07e-4, 1e6);
        let beta = solve_mirror_cubic(args.0, args.1, args.2, args.3, Mirror::One).unwrap();
        let oracle = bisect_root(args.0, args.1, args.2, args.3, Mirror::One);
        assert!(beta > 0.0);
        assert_relative_eq!(beta, oracle, max_relative = 1e-14);
        let beta2 = solve_mirror_cubic(args.0, args.1, args.2, args.3, Mirror::Two).unwrap();
        assert_relative_eq!(beta2, -beta, max_relative = 1e-15);
    }

    #[test]
    fn cubic_rejects_bad_input() {
        assert!(solve_mirror_cubic(f64::NAN, 0.0, 1.0, 1.0, Mirror::One).is_err());
        assert!(solve_mirror_cubic(-1e-3, 0.0, 1.0, 1.0, Mirror::One).is_err());
    }

    #[test]
    fn amplitude_limits() {
        assert_relative_eq!(intracavity_amplitude(0.0, 1.0, 0.0, 1e-5, 0.01, 3.0), 300.0, max_relative = 1e-14);
        assert_eq!(intracavity_amplitude(1.0, 1.0, 0.3, 1e-5, 0.01, 0.0), 0.0);
        // Hand arithmetic (mpmath, 30 digits) for Δ = Δ_e = 1, η = 0.3, γ_e = 1e-5, κ = 0.01, |ε| = 100.
        let a = intracavity_amplitude(1.0, 1.0, 0.3, 1e-5, 0.01, 100.0);
        assert_relative_eq!(a, 109.883_474_220_878_94, max_relative = 1e-14);
    }

    #[test]
    fn undriven_fixed_point() {
        let mut p = defaults();
        p.input_power = 0.0;
        let st = solve_self_consistent(&p).unwrap();
        assert_eq!(st.alpha_s, 0.0);
        assert_eq!(st.beta_s, [0.0, 0.0]);
        assert_eq!(st.g_enh, [0.0, 0.0]);
        assert_relative_eq!(st.lambda_enh[0], 3.0 * p.duffing[0]);
    }

    #[test]
    fn fixed_detuning_without_duffing_is_single_pass() {
        let mut p = defaults();
        p.duffing = [0.0, 0.0];
        p.detuning_rule = DetuningRule::Fixed(1.0);
        let st = solve_self_consistent(&p).unwrap();
        let alpha = intracavity_amplitude(1.0, 1.0, p.eta_e, p.gamma_e, p.kappa, p.drive().unwrap());
        assert_relative_eq!(st.alpha_s, alpha, max_relative = 1e-15);
        let lin = p.g_single[0] * alpha * alpha / (1.0 + p.gamma_m[0] * p.gamma_m[0]);
        assert_relative_eq!(st.beta_s[0], lin, max_relative = 1e-14);
        assert!(st.iterations <= 2);
    }

    #[test]
    fn residual_substitution() {
        let mut p = defaults();
        for power in [1e-7, 1e-5, 1e-3, 1e-2, 1e-1] {
            p.input_power = power;
            let st = solve_self_consistent(&p).unwrap();
            let (ra, rb) = residuals(&st, &p).unwrap();
            assert!(ra < 1e-10, "alpha residual {ra} at P = {power}");
            assert!(rb[0] < 1e-12 && rb[1] < 1e-12, "cubic residual {rb:?}");
            assert!(st.beta_s[0] > 0.0 && st.beta_s[1] < 0.0);
        }
    }

    #[test]
    fn monotone_in_power() {
        let mut p = defaults();
        let mut prev: Option<SteadyState> = None;
        for k in 0..40 {
            p.input_power = 1e-8 * 10f64.powf(k as f64 * 0.18);
            let st = solve_self_consistent(&p).unwrap();
            if let Some(q) = &prev {
                assert!(st.alpha_s >= q.alpha_s);
                assert!(st.beta_s[0].abs() >= q.beta_s[0].abs());
                assert!(st.beta_s[1].abs() >= q.beta_s[1].abs());
            }
            prev = Some(st);
        }
    }

    #[test]
    fn coupling_inversion_matches_forward_solve() {
        let p = defaults();
        for g1 in [0.05, 0.3, 0.8] {
            let st = steady_state_for_coupling(&p, g1).unwrap();
            assert_relative_eq!(st.g_enh[0], g1, max_relative = 1e-14);
            let mut q = p.clone();
            q.input_power = st.input_power;
            let fwd = solve_self_consistent(&q).unwrap();
            assert_relative_eq!(fwd.g_enh[0], g1, max_relative = 1e-10);
            assert_relative_eq!(fwd.delta, st.delta, max_relative = 1e-10);
        }
    }
}

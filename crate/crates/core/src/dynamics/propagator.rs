use super::Mat8;
use crate::error::{Error, Result};
use crate::frame::EffectiveModel;

/// |𝒢²t²| below which cos and sinc are summed as series.
const SERIES_THRESHOLD: f64 = 0.1;

/// e^{−χ₁t}·cos(𝒢t) and e^{−χ₁t}·sin(𝒢t)/𝒢, continued analytically to 𝒢² ≤ 0.
fn damped_trig(curly_g_sq: f64, chi1: f64, t: f64) -> (f64, f64) {
    let z = curly_g_sq * t * t;
    if z.abs() < SERIES_THRESHOLD {
        let mut c = 0.0;
        let mut s = 0.0;
        let mut term_c = 1.0;
        let mut term_s = 1.0;
        for k in 1..20 {
            c += term_c;
            s += term_s;
            let k = k as f64;
            term_c *= -z / ((2.0 * k - 1.0) * (2.0 * k));
            term_s *= -z / ((2.0 * k) * (2.0 * k + 1.0));
            if term_c.abs() < 1e-18 && term_s.abs() < 1e-18 {
                break;
            }
        }
        let e = (-chi1 * t).exp();
        (e * c, e * s * t)
    } else if z > 0.0 {
        let g = curly_g_sq.sqrt();
        let (sn, cs) = (g * t).sin_cos();
        let e = (-chi1 * t).exp();
        (e * cs, e * sn / g)
    } else {
        // Combine exponents so cosh/sinh never overflow on long runs.
        let k = (-curly_g_sq).sqrt();
        let up = ((k - chi1) * t).exp();
        let down = (-(k + chi1) * t).exp();
        (0.5 * (up + down), 0.5 * (up - down) / k)
    }
}

/// Closed-form propagator M(t) = exp(A t).
pub fn propagator_closed(model: &EffectiveModel, t: f64) -> Result<Mat8> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("propagation time must be >= 0, got {t}")));
    }
    let (g1, g2, eta) = (model.gp[0], model.gp[1], model.eta_e);
    let chi2 = model.chi2;
    let (ec, es) = damped_trig(model.curly_g_sq, model.chi1, t);
    let eg = (-model.gamma * t).exp();
    let bright = ec + chi2 * es;
    let r2 = model.coupling_norm_sq();

    let (m11, m15, m17, m55, m57, m77);
    if r2 == 0.0 {
        (m11, m15, m17, m55, m57, m77) = (eg, 0.0, 0.0, eg, 0.0, eg);
    } else {
        let mix = (bright - eg) / r2;
        m11 = (eg * (g1 * g1 + g2 * g2) + eta * eta * bright) / r2;
        m15 = -g1 * eta * mix;
        m17 = g2 * eta * mix;
        m55 = (eg * (eta * eta + g2 * g2) + g1 * g1 * bright) / r2;
        m57 = -g1 * g2 * mix;
        m77 = (eg * (eta * eta + g1 * g1) + g2 * g2 * bright) / r2;
    }
    let m14 = eta * es;
    let m33 = ec - chi2 * es;
    let m36 = -g1 * es;
    let m38 = g2 * es;

    #[rustfmt::skip]
    let m = Mat8::from_row_slice(&[
        m11,  0.0,  0.0,  m14,  m15,  0.0,  m17,  0.0,
        0.0,  m11, -m14,  0.0,  0.0,  m15,  0.0,  m17,
        0.0,  m14,  m33,  0.0,  0.0,  m36,  0.0,  m38,
       -m14,  0.0,  0.0,  m33, -m36,  0.0, -m38,  0.0,
        m15,  0.0,  0.0,  m36,  m55,  0.0,  m57,  0.0,
        0.0,  m15, -m36,  0.0,  0.0,  m55,  0.0,  m57,
        m17,  0.0,  0.0,  m38,  m57,  0.0,  m77,  0.0,
        0.0,  m17, -m38,  0.0,  0.0,  m57,  0.0,  m77,
    ]);
    Ok(m)
}

/// Matrix exponential by Padé scaling and squaring (nalgebra's implementation).
pub fn expm(a: &Mat8) -> Mat8 {
    a.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::drift_matrix;
    use std::f64::consts::PI;

    fn max_diff(a: &Mat8, b: &Mat8) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn identity_at_zero() {
        let m = EffectiveModel::synthetic([0.2, 0.1], 0.3, 0.01, 1e-5);
        assert_eq!(propagator_closed(&m, 0.0).unwrap(), Mat8::identity());
    }

    #[test]
    fn negative_time_rejected() {
        let m = EffectiveModel::synthetic([0.2, 0.1], 0.3, 0.01, 1e-5);
        assert!(propagator_closed(&m, -1.0).is_err());
    }

    #[test]
    fn cavity_negated_at_lossless_swap() {
        let m = EffectiveModel::synthetic([0.2, 0.1], 0.3, 0.0, 0.0);
        let ts = m.lossless_swap_time().unwrap();
        let p = propagator_closed(&m, ts).unwrap();
        assert!((p[(2, 2)] + 1.0).abs() < 1e-14);
        assert!((p[(3, 3)] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn matches_expm_in_all_regimes() {
        let cases = [
            EffectiveModel::synthetic([0.2, 0.1], 0.3, 0.01, 1e-5),
            EffectiveModel::synthetic([1e-3, 0.0], 1e-3, 0.01, 1e-5),
            EffectiveModel::synthetic([0.0, 0.0], 0.0, 0.01, 1e-5),
            EffectiveModel::synthetic([0.0, 0.0], 0.0, 0.0, 0.0),
            EffectiveModel::synthetic([0.05, 0.05], 0.0, 0.1, 0.1),
        ];
        for m in cases {
            let a = drift_matrix(&m);
            for t in [0.01, 0.5, 3.0, 17.0, 60.0] {
                let d = max_diff(&propagator_closed(&m, t).unwrap(), &expm(&(a * t)));
                assert!(d < 1e-11, "t={t} diff={d} model={m:?}");
            }
        }
    }

    #[test]
    fn near_critical_matches_expm() {
        let chi2 = 0.5 * (0.01 - 1e-5);
        for eps in [0.0f64, 1e-14, -1e-14, 1e-12, -1e-12, 1e-9] {
            let eta = (chi2 * chi2 + eps).sqrt();
            let m = EffectiveModel::synthetic([0.0, 0.0], eta, 0.01, 1e-5);
            let a = drift_matrix(&m);
            for t in [1.0, 40.0, 400.0] {
                let d = max_diff(&propagator_closed(&m, t).unwrap(), &expm(&(a * t)));
                assert!(d < 1e-10, "eps={eps} t={t} diff={d}");
            }
        }
    }

    #[test]
    fn mechanical_swap_without_atom() {
        let g = 0.1;
        let m = EffectiveModel::synthetic([g, g], 0.0, 0.0, 0.0);
        let p = propagator_closed(&m, PI / (2f64.sqrt() * g)).unwrap();
        assert!((p[(6, 4)] - 1.0).abs() < 1e-14);
        assert!((p[(7, 5)] - 1.0).abs() < 1e-14);
        assert!(p[(4, 4)].abs() < 1e-14);
    }
}

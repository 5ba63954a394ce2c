use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    pub f: f64,
    /// Heating parameter n̄_h = √det(V_i + V_f) − 1.
    pub n_h: f64,
    /// Amplitude-decay parameter λ_h.
    pub lambda_h: f64,
}

/// Uhlmann fidelity between two single-mode Gaussian states, written through
/// the heating and amplitude-decay parameters.
pub fn gaussian_fidelity(mean_i: &Vector2<f64>, v_i: &Matrix2<f64>, mean_f: &Vector2<f64>, v_f: &Matrix2<f64>) -> Result<Fidelity> {
    let s = v_i + v_f;
    let det = s.determinant();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::DegenerateCovariance(format!("det(V_i + V_f) = {det}")));
    }
    let root = det.sqrt();
    // √det(S)·S⁻¹ is the adjugate of S divided by √det(S).
    let adj = Matrix2::new(s[(1, 1)], -s[(0, 1)], -s[(1, 0)], s[(0, 0)]);
    let dx = mean_f - mean_i;
    let lambda_sq = (dx.transpose() * adj * dx)[(0, 0)] / root;
    let n_h = root - 1.0;
    let f = (-lambda_sq / (1.0 + n_h)).exp() / (1.0 + n_h);
    Ok(Fidelity {
        f,
        n_h,
        lambda_h: lambda_sq.max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identical_pure_states() {
        let v = Matrix2::new(1.3, 0.2, 0.2, (0.25 + 0.04) / 1.3);
        let m = Vector2::new(0.4, -1.0);
        let fid = gaussian_fidelity(&m, &v, &m, &v).unwrap();
        assert_relative_eq!(fid.f, 1.0, epsilon = 1e-14);
        assert!(fid.n_h.abs() < 1e-14);
        assert_eq!(fid.lambda_h, 0.0);
    }

    #[test]
    fn displaced_vacuum() {
        let v = Matrix2::identity() * 0.5;
        let d = 0.7;
        let fid = gaussian_fidelity(&Vector2::zeros(), &v, &Vector2::new(d, 0.0), &v).unwrap();
        assert_eq!(fid.n_h, 0.0);
        assert_relative_eq!(fid.lambda_h, d, max_relative = 1e-15);
        assert_relative_eq!(fid.f, (-d * d).exp(), max_relative = 1e-15);
    }

    #[test]
    fn orthogonally_squeezed() {
        let a: f64 = 1.7;
        let vi = Matrix2::new(a, 0.0, 0.0, 1.0 / (4.0 * a));
        let vf = Matrix2::new(1.0 / (4.0 * a), 0.0, 0.0, a);
        let fid = gaussian_fidelity(&Vector2::zeros(), &vi, &Vector2::zeros(), &vf).unwrap();
        assert_relative_eq!(fid.n_h, a + 1.0 / (4.0 * a) - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn singular_sum_rejected() {
        let z = Matrix2::zeros();
        assert!(gaussian_fidelity(&Vector2::zeros(), &z, &Vector2::zeros(), &z).is_err());
    }
}

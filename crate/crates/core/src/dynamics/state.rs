use nalgebra::{DMatrix, Dim, Matrix, RawStorage, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{evolve_cov_closed, propagator_closed, Mat8, Vec8};
use crate::error::{Error, Result};
use crate::frame::EffectiveModel;

pub const SYMMETRY_TOL: f64 = 1e-12;
/// Floor on the eigenvalues of V + (i/2)Ω.
pub const EIGEN_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    /// Bogoliubov quadratures in the frame rotating at the mode frequencies.
    InteractionRwa,
    /// Bare quadratures without the rotating-wave approximation.
    LabFull,
}

impl Frame {
    fn name(self) -> &'static str {
        match self {
            Frame::InteractionRwa => "interaction-rwa",
            Frame::LabFull => "lab-full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: Vec8,
    pub cov: Mat8,
    pub time: f64,
    pub frame: Frame,
}

impl GaussianState {
    pub fn vacuum(frame: Frame) -> Self {
        GaussianState {
            mean: Vec8::zeros(),
            cov: Mat8::identity() * 0.5,
            time: 0.0,
            frame,
        }
    }

    /// Every mode in its bare ground state, written in Bogoliubov quadratures:
    /// the mirror blocks are diag(e^{2r_j}, e^{−2r_j})/2.
    pub fn ground_state(model: &EffectiveModel) -> Self {
        let mut s = GaussianState::vacuum(Frame::InteractionRwa);
        for j in 0..2 {
            let k = 4 + 2 * j;
            s.cov[(k, k)] = 0.5 * (2.0 * model.r[j]).exp();
            s.cov[(k + 1, k + 1)] = 0.5 * (-2.0 * model.r[j]).exp();
        }
        s
    }

    /// Propagates by `dt` with the closed-form route.
    pub fn evolve(&self, model: &EffectiveModel, dt: f64) -> Result<GaussianState> {
        let mean = evolve_mean(self, model, dt)?;
        let cov = evolve_cov_closed(&self.cov, model, dt)?;
        Ok(GaussianState {
            mean,
            cov,
            time: self.time + dt,
            frame: self.frame,
        })
    }

    pub fn block(&self, mode: usize) -> (nalgebra::Vector2<f64>, nalgebra::Matrix2<f64>) {
        let k = 2 * mode;
        (
            self.mean.fixed_rows::<2>(k).into_owned(),
            self.cov.fixed_view::<2, 2>(k, k).into_owned(),
        )
    }
}

/// ⟨δU(t)⟩ = M(t)⟨δU(0)⟩.
pub fn evolve_mean(state: &GaussianState, model: &EffectiveModel, t: f64) -> Result<Vec8> {
    if state.frame != Frame::InteractionRwa {
        return Err(Error::FrameMismatch {
            expected: Frame::InteractionRwa.name(),
            found: state.frame.name(),
        });
    }
    Ok(propagator_closed(model, t)? * state.mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Physicality {
    /// max |V − Vᵀ|
    pub asymmetry: f64,
    /// Smallest eigenvalue of V + (i/2)Ω.
    pub min_eigenvalue: f64,
    /// det(2V); equals 1 for a pure state.
    pub purity_det: f64,
}

impl Physicality {
    pub fn is_physical(&self) -> bool {
        self.asymmetry <= SYMMETRY_TOL && self.min_eigenvalue >= EIGEN_FLOOR
    }
}

/// Symmetry and uncertainty-principle diagnostics for a covariance matrix of
/// any number of modes (dimension 2n, quadratures paired per mode).
pub fn physicality<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(v: &Matrix<f64, R, C, S>) -> Physicality {
    let dim = v.nrows();
    assert!(dim % 2 == 0 && v.ncols() == dim, "covariance must be square with even dimension");
    let v = DMatrix::from_iterator(dim, dim, v.iter().copied());
    let asymmetry = (&v - v.transpose()).amax();
    let sym = (&v + v.transpose()) * 0.5;
    // V + iW with W = Ω/2 antisymmetric; the real embedding [[V, −W], [W, V]] is
    // symmetric and carries each eigenvalue twice.
    let mut w = DMatrix::zeros(dim, dim);
    for k in (0..dim).step_by(2) {
        w[(k, k + 1)] = 0.5;
        w[(k + 1, k)] = -0.5;
    }
    let mut big = DMatrix::zeros(2 * dim, 2 * dim);
    big.view_mut((0, 0), (dim, dim)).copy_from(&sym);
    big.view_mut((dim, dim), (dim, dim)).copy_from(&sym);
    big.view_mut((0, dim), (dim, dim)).copy_from(&(-&w));
    big.view_mut((dim, 0), (dim, dim)).copy_from(&w);
    let eig = SymmetricEigen::new(big);
    let min_eigenvalue = eig.eigenvalues.min();
    Physicality {
        asymmetry,
        min_eigenvalue,
        purity_det: (sym * 2.0).determinant(),
    }
}

pub fn check_physical(v: &Mat8) -> Result<Physicality> {
    let p = physicality(v);
    if p.is_physical() {
        Ok(p)
    } else {
        Err(Error::DegenerateCovariance(format!(
            "unphysical covariance: asymmetry {:e}, min eigenvalue {:e}",
            p.asymmetry, p.min_eigenvalue
        )))
    }
}

//! Linear Gaussian dynamics of the eight quadratures.
//!
//! Index convention (0-based) follows the ordering
//! (δx_c, δy_c, δx_a, δy_a, δQ₁, δP₁, δQ₂, δP₂): atom, cavity, Bogoliubov mirror 1,
//! Bogoliubov mirror 2. Use [`paper_index`] to address entries with the 1-based
//! (row, col) labels of the closed-form tables.

use nalgebra::{SMatrix, SVector};

mod covariance;
mod drift;
mod lab;
pub mod matrix_io;
mod propagator;
mod state;

pub use covariance::{
    evolve_cov, evolve_cov_closed, evolve_cov_ode, integrate_lyapunov, CovarianceRoute, ODE_ATOL, ODE_RTOL, QUAD_MAX_NODES,
    QUAD_TOL,
};
pub use drift::{diffusion_n0, diffusion_nt, diffusion_total, drift_matrix};
pub use lab::{lab_frame_diffusion, lab_frame_drift, lab_to_interaction, quadrature_scaling};
pub use propagator::{expm, propagator_closed};
pub use state::{
    check_physical, evolve_mean, physicality, Frame, GaussianState, Physicality, EIGEN_FLOOR, SYMMETRY_TOL,
};

pub type Mat8 = SMatrix<f64, 8, 8>;
pub type Vec8 = SVector<f64, 8>;

pub const X_C: usize = 0;
pub const Y_C: usize = 1;
pub const X_A: usize = 2;
pub const Y_A: usize = 3;
pub const Q1: usize = 4;
pub const P1: usize = 5;
pub const Q2: usize = 6;
pub const P2: usize = 7;

/// Converts 1-based (row, col) labels to 0-based indices.
///
/// ```
/// use optomech_core::dynamics::{paper_index, Q1, Y_A};
/// assert_eq!(paper_index(5, 4), (Q1, Y_A));
/// ```
pub const fn paper_index(row: usize, col: usize) -> (usize, usize) {
    assert!(row >= 1 && row <= 8 && col >= 1 && col <= 8);
    (row - 1, col - 1)
}

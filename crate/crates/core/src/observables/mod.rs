//! Headline observables: atomic squeezing, Gaussian transfer fidelity and the
//! optimal-coupling estimate.

mod fidelity;
mod optimal;
mod rwa;
mod squeezing;
mod transfer;

pub use fidelity::{gaussian_fidelity, Fidelity};
pub use optimal::{optimal_coupling, optimal_coupling_residual};
pub use rwa::{compare_frames, FrameComparison};
pub use squeezing::{
    atomic_squeezing, atomic_squeezing_model, atomic_squeezing_with, case_model, lossless_squeezing, peak_squeezing,
    refine_peak, squeeze_or_floor, squeezing_db, PeakReport, SqueezeCase, SqueezeReport, PEAK_TOL,
};
pub use transfer::{initial_squeezed_block, transfer_experiment, transfer_model, transfer_with_model, TransferFrame, TransferReport};

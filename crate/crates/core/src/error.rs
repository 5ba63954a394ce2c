use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("steady state did not converge after {iterations} sweeps (last relative change {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    /// The lossy transfer frequency squared is not positive, so no swap time exists.
    #[error("overdamped transfer regime (curly G squared = {curly_g_sq:e}); no swap time")]
    Overdamped { curly_g_sq: f64 },

    #[error("quadrature did not reach tolerance (achieved {achieved:e} with {nodes} nodes)")]
    Quadrature { achieved: f64, nodes: usize },

    #[error("ODE step size underflow at t = {t} (h = {step:e})")]
    Stiffness { t: f64, step: f64 },

    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    #[error("no sign change of the optimality condition on the bracket (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoOptimum { f_lo: f64, f_hi: f64 },

    #[error("state is in the {found} frame, operation requires {expected}")]
    FrameMismatch {
        expected: &'static str,
        found: &'static str,
    },
}

impl Error {
    /// Short stable label, used to flag failed rows in tabular output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Convergence { .. } => "convergence",
            Error::InvalidRegime(_) => "invalid-regime",
            Error::Overdamped { .. } => "overdamped",
            Error::Quadrature { .. } => "quadrature",
            Error::Stiffness { .. } => "stiffness",
            Error::DegenerateCovariance(_) => "degenerate-covariance",
            Error::NoOptimum { .. } => "no-optimum",
            Error::FrameMismatch { .. } => "frame-mismatch",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {value}")))
    }
}

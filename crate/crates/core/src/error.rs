use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A walk eigenvalue other than the j = 0 one vanished, so the
    /// eigenvalue sums diverge.
    #[error("theta = {theta} is critical: walk eigenvalue j = {j} is {eigenvalue:e}")]
    CriticalTheta { theta: f64, j: usize, eigenvalue: f64 },

    #[error("secular function evaluated at E = {energy} on the pole {pole}")]
    PoleEvaluation { energy: f64, pole: f64 },

    #[error(
        "secular root not bracketed in ({lower}, {upper}): F-1 = {f_lower:e} at lower, {f_upper:e} at upper"
    )]
    Bracketing {
        lower: f64,
        upper: f64,
        f_lower: f64,
        f_upper: f64,
    },

    #[error("eigensolver failed on {dimension}x{dimension} matrix (max |entry| = {max_abs_entry:e}): {reason}")]
    Eigensolver {
        dimension: usize,
        max_abs_entry: f64,
        reason: String,
    },

    #[error("initial state is not normalized: |psi|^2 = {norm_sq}")]
    InvalidState { norm_sq: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CriticalTheta { .. }
                | Error::PoleEvaluation { .. }
                | Error::Bracketing { .. }
                | Error::Eigensolver { .. }
        )
    }
}

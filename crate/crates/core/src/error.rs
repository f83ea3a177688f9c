use thiserror::Error;

/// Errors produced by the solvers, oracles and I/O layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FaircutError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("no zero found within budget (best residual {best_residual:.3e})")]
    NoZeroFound {
        best_residual: f64,
        /// Best residual per labelling (join searches only).
        per_labelling: Vec<f64>,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("precision target not met (achieved {achieved:.3e})")]
    Precision { achieved: f64 },

    #[error("quantile inversion failed: {0}")]
    Quantile(String),

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("iteration did not converge (residual {residual:.3e})")]
    NonConvergence { residual: f64 },

    #[error("certificate failed: {reason} (delta {delta:.3e}, slack {slack:.3e})")]
    CertificateFailed { reason: String, delta: f64, slack: f64 },

    #[error("inadmissible counts ({})", .0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))]
    Inadmissible(Vec<u32>),

    #[error("point lies on a cutting hyperplane")]
    OnBoundary,

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, FaircutError>;

impl FaircutError {
    pub(crate) fn dim(expected: usize, got: usize) -> Self {
        FaircutError::Dimension { expected, got }
    }

    /// Solver-side failures (as opposed to bad input) map to exit code 2 in the CLI.
    pub fn is_search_failure(&self) -> bool {
        matches!(
            self,
            FaircutError::NoZeroFound { .. }
                | FaircutError::CertificateFailed { .. }
                | FaircutError::NonConvergence { .. }
                | FaircutError::Precision { .. }
        )
    }
}

use thiserror::Error;

/// Errors raised by grid construction, transforms, operators and experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TfError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported dimension d={0} (only d=1 is implemented)")]
    UnsupportedDimension(usize),
    #[error("sample array has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("shift {value} is not on the lattice with step {step}")]
    OffGrid { value: f64, step: f64 },
    #[error("misaligned lattice: {0}")]
    Misaligned(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("aliasing guard violated: {0}")]
    Aliasing(String),
    #[error("resolution guard violated: {0}")]
    Resolution(String),
    #[error("period too small: {0}")]
    PeriodTooSmall(String),
    #[error("truncation guard violated: {0}")]
    Truncation(String),
    #[error("lattice too sparse for reconstruction, frame deviation {residual:.3e}")]
    UnderspreadLattice { residual: f64 },
    #[error("phase-space grid is not square: {0}")]
    NonSquareGrid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("io error: {0}")]
    Io(String),
}

impl TfError {
    /// Whether this error comes from a grid/resolution guard of a constructor.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            TfError::Aliasing(_)
                | TfError::Resolution(_)
                | TfError::PeriodTooSmall(_)
                | TfError::Truncation(_)
                | TfError::Window(_)
        )
    }
}

impl From<std::io::Error> for TfError {
    fn from(e: std::io::Error) -> Self {
        TfError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TfError>;

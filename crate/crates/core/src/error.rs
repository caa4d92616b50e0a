use thiserror::Error;

/// Errors raised by the symbolic pipeline.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// that the command-line front end reports alongside the message.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("pole at evaluation point")]
    PoleAtPoint,
    #[error("substitution leaves the exponential-polynomial class: {0}")]
    NonAffineExponentSubstitution(String),
    #[error("antiderivative outside the supported class: {0}")]
    NonElementaryInClass(String),
    #[error("one-form is not closed: {0}")]
    NotClosed(String),
    #[error("basepoint lies on a pole: {0}")]
    BasepointOnPole(String),
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("eigenvalues cannot be grouped stably: {0}")]
    EigenvalueClusterAmbiguity(String),
    #[error("structure equations fail at level {level}: {detail}")]
    ResidualNonzero { level: usize, detail: String },
    #[error("transversality fails: det P vanishes identically")]
    DegenerateTransversality,
    #[error("Newton iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ChartMismatch(_) => "ChartMismatch",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::PoleAtPoint => "PoleAtPoint",
            Error::NonAffineExponentSubstitution(_) => "NonAffineExponentSubstitution",
            Error::NonElementaryInClass(_) => "NonElementaryInClass",
            Error::NotClosed(_) => "NotClosed",
            Error::BasepointOnPole(_) => "BasepointOnPole",
            Error::NotSolvable => "NotSolvable",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::EigenvalueClusterAmbiguity(_) => "EigenvalueClusterAmbiguity",
            Error::ResidualNonzero { .. } => "ResidualNonzero",
            Error::DegenerateTransversality => "DegenerateTransversality",
            Error::NonConvergence(_) => "NonConvergence",
            Error::Parse(_) => "ParseError",
            Error::Schema(_) => "SchemaError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

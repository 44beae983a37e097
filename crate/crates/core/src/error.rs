use thiserror::Error;

use crate::algebra::{AlgebraError, SpherePoint};
use crate::parser::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("S1 and S2 vanish simultaneously at {0}")]
    CommonZero(SpherePoint),
    #[error("the 1-form h dz is identically zero")]
    ZeroOneForm,
    #[error("metric is unbounded at {0}")]
    Unbounded(SpherePoint),
    #[error("metric degenerates at {0}")]
    Degenerate(SpherePoint),
    #[error("{0} is a puncture")]
    AtPuncture(SpherePoint),
    #[error("rotation parameters are not unitary (|a|^2+|b|^2 = {0})")]
    NonUnitary(f64),
    #[error("{form} has a pole at {point}, which is not a puncture")]
    MissingPuncture {
        point: SpherePoint,
        form: &'static str,
    },
    #[error("no normalizing rotation found after {0} attempts")]
    NormalizationFailed(usize),
    #[error("the Gauss map is constant")]
    ConstantGaussMap,
    #[error("quadrature did not reach tolerance within {0} evaluations")]
    QuadratureBudget(usize),
    #[error("g' vanishes at {0}")]
    CriticalPoint(SpherePoint),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("classification assertion failed: {0}")]
    AssertionFailed(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("mesh is empty after cutting singular vertices")]
    EmptyMesh,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Algebra(AlgebraError::NonzeroResidue { .. }) => "NonzeroResidue",
            Error::Algebra(AlgebraError::NoConvergence { .. }) => "NoConvergence",
            Error::Algebra(_) => "AlgebraError",
            Error::Parse(_) => "ParseError",
            Error::CommonZero(_) => "CommonZero",
            Error::ZeroOneForm => "ZeroOneForm",
            Error::Unbounded(_) => "Unbounded",
            Error::Degenerate(_) => "Degenerate",
            Error::AtPuncture(_) => "AtPuncture",
            Error::NonUnitary(_) => "NonUnitary",
            Error::MissingPuncture { .. } => "MissingPuncture",
            Error::NormalizationFailed(_) => "NormalizationFailed",
            Error::ConstantGaussMap => "ConstantGaussMap",
            Error::QuadratureBudget(_) => "QuadratureBudget",
            Error::CriticalPoint(_) => "CriticalPoint",
            Error::Precondition(_) => "Precondition",
            Error::AssertionFailed(_) => "AssertionFailed",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::EmptyMesh => "EmptyMesh",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

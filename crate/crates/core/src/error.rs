use thiserror::Error;

use crate::numth::Integer;

/// Failures of the mathematical primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not squarefree")]
    NotSquarefree(Integer),
    #[error("point is 2-torsion or trivial")]
    TorsionPoint,
    #[error("line is vertical; third intersection is at infinity")]
    VerticalLine,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("points lie on different curves")]
    CurveMismatch,
    #[error("height is undefined at infinity")]
    PointAtInfinity,
    #[error("slope is asymptotic; no second intersection")]
    AsymptoticSlope,
    #[error("resultant vanishes; the quadratics share a root")]
    DegeneratePair,
    #[error("arithmetic progression does not give a positive triangle")]
    MalformedAp,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

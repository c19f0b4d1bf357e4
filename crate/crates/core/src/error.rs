use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("metric is degenerate at {point:?} (|det| = {det:e})")]
    SingularMetric { det: f64, point: Vec<f64> },
    #[error("metric at {point:?} has {found} negative eigenvalues, signature declares {expected}")]
    Signature {
        expected: usize,
        found: usize,
        point: Vec<f64>,
    },
    #[error("metric is not symmetric at {point:?}: component ({i},{j}) differs from ({j},{i})")]
    Asymmetric { i: usize, j: usize, point: Vec<f64> },
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("coordinate `{0}` appears in both base and fiber")]
    NameCollision(String),
    #[error("warping function is not positive at {point:?} (value {value})")]
    NonPositiveWarp { value: f64, point: Vec<f64> },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no admissible sample points after {attempts} attempts")]
    NoAdmissibleSamples { attempts: usize },
}

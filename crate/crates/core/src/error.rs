use thiserror::Error;

use crate::maps::MapKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("|alpha|^2 + |beta|^2 = {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("entry ({row}, {col}) breaks the even-supermatrix grading")]
    NotEvenSupermatrix { row: usize, col: usize },
    #[error("unknown game parameter `{0}`")]
    UnknownParameter(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("probability is not even (odd part {odd_part:e})")]
    NotEven { odd_part: f64 },
    #[error("imaginary residue {residue:e} exceeds tolerance")]
    ImaginaryResidue { residue: f64 },
    #[error("trigonometric map needs a scale for party {party}, got rho = 0 with nonzero coefficient")]
    UndefinedTrigSubstitution { party: char },
    #[error("trigonometric map requires a TrigContext")]
    MissingTrigContext,
    #[error("outcome ({m}, {n}): {source}")]
    AtOutcome {
        m: usize,
        n: usize,
        #[source]
        source: Box<MapError>,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("non-finite game parameters")]
    NonFinite,
    #[error("setting ({i}, {j}): {source}")]
    Extraction {
        i: usize,
        j: usize,
        #[source]
        source: MapError,
    },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("no restart reached feasibility under map {map} (best violation {best_violation:e})")]
    InfeasibleEverywhere { map: MapKind, best_violation: f64 },
    #[error(transparent)]
    Game(#[from] GameError),
}

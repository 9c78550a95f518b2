use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate signal: standard deviation {std:.3e} is below 1e-12 (constant network response)")]
    DegenerateSignal { std: f64 },

    #[error("no cut-off: threshold {tau:.3e} is not reached; max |C'| on the tail is {max_slope:.3e} (spectrum too flat)")]
    NoCutoff { tau: f64, max_slope: f64 },

    #[error("sampling plan too large: {points} grid points exceed the budget of {budget}")]
    PlanTooLarge { points: u128, budget: u64 },

    #[error("region saturated: could not place {missing} of {requested} validation points after {attempts} rejection attempts")]
    RegionSaturated {
        requested: usize,
        missing: usize,
        attempts: usize,
    },

    #[error("training diverged: non-finite loss at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("mesh sign unreliable: the mesh is not watertight, signed distances are not well defined")]
    SignUnreliable,

    #[error("empty mesh: no vertices or faces")]
    EmptyMesh,

    #[error("non-triangular face in OBJ input at line {line}")]
    NonTriangularFace { line: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported dimension {0}: expected 1, 2, or 3")]
    UnsupportedDim(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

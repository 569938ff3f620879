use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("unsupported qubit count {0} (expected 1..=4)")]
    QubitCount(usize),

    #[error("gate uses qubit {0} as both control and target")]
    ControlIsTarget(usize),

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("amplitude count {len} is not 2^{n_qubits}")]
    Dimension { len: usize, n_qubits: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("partial trace needs a non-empty set of distinct kept qubits")]
    EmptyKeepSet,

    #[error("duplicate qubit {0} in kept set")]
    DuplicateQubit(usize),

    #[error("post-selecting qubit {qubit} on outcome {outcome} is impossible (p = {probability:e})")]
    ImpossibleBranch {
        qubit: usize,
        outcome: u8,
        probability: f64,
    },

    #[error("expectation value has imaginary part {0:e}")]
    ImaginaryExpectation(f64),

    #[error("distribution sums to {0}, not 1")]
    NotNormalizedDistribution(f64),

    #[error("probability {value} for {field} is outside [0, 1]")]
    Probability { field: String, value: f64 },

    #[error("noise model has no entry for {0}")]
    MissingNoise(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("ragged grid: row {row} has {len} cells, expected {expected}")]
    RaggedGrid {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("invalid value for `{field}`: {reason}")]
    Domain { field: String, reason: String },

    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Domain {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

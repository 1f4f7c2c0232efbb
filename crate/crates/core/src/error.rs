use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("gate targets must be distinct, got {0:?}")]
    RepeatedTarget(Vec<usize>),
    #[error("non-finite rotation angle {0}")]
    NonFiniteAngle(f64),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("register width {0} outside supported range 1..={max}", max = crate::qsim::MAX_QUBITS)]
    UnsupportedWidth(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),
    #[error("term is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid ansatz structure: {0}")]
    InvalidAnsatz(String),
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("encoding capacity {capacity} is smaller than {required} variables")]
    CapacityExceeded { capacity: usize, required: usize },
    #[error("estimator failure: {0}")]
    Estimator(String),
    #[error("too few samples: {got} < {min}")]
    TooFewSamples { got: usize, min: usize },
    #[error("degenerate normalization {0:e}")]
    DegenerateNormalization(f64),
    #[error("statistic undefined: {0}")]
    Statistic(String),
    #[error("transfer failed: {0}")]
    Transfer(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("layer {layer}, iteration {iteration}: {source}")]
    Run {
        layer: usize,
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

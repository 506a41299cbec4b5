use thiserror::Error;

/// Errors raised by network construction, simulation and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truth table length {0} is not a power of two")]
    TableLength(usize),

    #[error("node {node}: table expects {expected} inputs, got {got}")]
    InputArity {
        node: usize,
        expected: usize,
        got: usize,
    },

    #[error("node {node}: input {input} out of range for {n} nodes")]
    InputOutOfRange { node: usize, input: usize, n: usize },

    #[error("network must contain at least one node")]
    EmptyNetwork,

    #[error("invalid function weights: {0}")]
    InvalidWeights(String),

    #[error("node {node} has {count} effective inputs; K=1 analysis requires at most one")]
    NotFunctionalGraph { node: usize, count: usize },

    #[error("node {node} applies a Hadamard; classical simulation is undefined")]
    HadamardPresent { node: usize },

    #[error("no period found within {0} steps")]
    PeriodNotFound(usize),

    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("configuration length {got} does not match network ({expected} bits)")]
    ConfigLength { expected: usize, got: usize },

    #[error("{n} nodes exceeds the dense propagator cap of {max} nodes")]
    DimensionCap { n: usize, max: usize },

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("eigensolver did not converge")]
    EigenFailure,

    #[error("node {node} has {count} effective inputs; Pauli-frame propagation needs single-input gates")]
    UnsupportedGate { node: usize, count: usize },

    #[error("invalid ensemble configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

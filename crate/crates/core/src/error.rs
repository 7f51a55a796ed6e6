use thiserror::Error;

/// Errors produced by the library. Each variant names the module contract that
/// was violated so the CLI can forward the message unchanged.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("loop at node {0}: domain graphs must be loop-free")]
    Loop(usize),
    #[error("edge endpoint {endpoint} out of range for {nodes} nodes")]
    EndpointOutOfRange { endpoint: usize, nodes: usize },
    #[error("label {0} is not a positive integer")]
    BadLabel(u32),
    #[error("labeling is not injective: node {0} carries two labels")]
    NonInjectiveLabels(usize),
    #[error("label {label} refers to node {node} but the graph has {nodes} nodes")]
    LabelOutOfRange { label: u32, node: usize, nodes: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid weighted target: {0}")]
    InvalidTarget(String),
    #[error("assignment does not cover exactly the labeled nodes: {0}")]
    AssignmentMismatch(String),
    #[error("invalid flow spec: {0}")]
    InvalidFlowSpec(String),
    #[error("character sum {value} is not within 1e-9 of a rational with denominator <= {max_den}")]
    IrrationalWeight { value: f64, max_den: u64 },
    #[error("labels {0:?} are not a subset of the graph's labels")]
    NotSubset(Vec<u32>),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("parameter is not normalizable: f(K_1) = {0} is not positive")]
    NonNormalizable(String),
    #[error("parameter is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("degenerate spectrum: no simple-spectrum element after {0} attempts")]
    DegenerateSpectrum(usize),
    #[error("degenerate idempotent mass: f(q) = {0:e}")]
    DegenerateMass(f64),
    #[error("algebra error: {0}")]
    Algebra(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

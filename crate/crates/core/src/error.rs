use thiserror::Error;

/// Errors raised by the workbench.
///
/// Verdict-returning operations (validation, contextuality checks, extension)
/// report their outcome in the return value; only malformed input and
/// exceeded guardrails surface here.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph is disconnected: components {0:?}")]
    Disconnected(Vec<Vec<String>>),
    #[error("cannot collapse: {0}")]
    InvalidCollapse(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("triangle `{triangle}` has negative probability for outcome {outcome}")]
    NegativeProbability { triangle: String, outcome: String },
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("not a cone scenario")]
    NotACone,
    #[error("unsupported scenario shape: {0}")]
    UnsupportedShape(String),
    #[error("guardrail exceeded: {0}")]
    Guardrail(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

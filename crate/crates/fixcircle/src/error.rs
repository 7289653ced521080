use std::io;

/// Failure to load, validate or resolve a scenario.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("cannot read `{0}`: {1}")]
    Io(String, #[source] io::Error),
    #[error("no scenario file or bundled scenario named `{0}`")]
    NotFound(String),
    #[error("unknown catalog map `{0}`")]
    UnknownCatalogMap(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] fixcircle_core::Error),
}

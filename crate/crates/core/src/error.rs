use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("map line {line}: {msg}")]
    MapFormat { line: usize, msg: String },

    #[error("scenario line {line}: {msg}")]
    ScenarioFormat { line: usize, msg: String },

    #[error("policy table line {line}: {msg}")]
    PolicyFormat { line: usize, msg: String },

    #[error("paths file line {line}: {msg}")]
    PathsFormat { line: usize, msg: String },

    #[error("invalid instance: agent {agent}: {msg}")]
    InvalidAgent { agent: usize, msg: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("agent {agent} cannot reach its goal")]
    UnreachableGoal { agent: usize },

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("empty trace")]
    EmptyTrace,

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use std::path::PathBuf;

use thiserror::Error;

use crate::kernel::GapSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("genus {genus} exceeds the bound {bound}")]
    OutOfBound { genus: u32, bound: u32 },

    #[error("complement is not closed under addition: {x} + {y} = {} is a gap", x + y)]
    NotClosed { x: u32, y: u32 },

    #[error("invalid state: {0}")]
    Invalid(String),

    #[error("counter overflow at genus {genus}")]
    Overflow { genus: u32 },

    #[error("malformed gap set {text:?}: {reason}")]
    GapSetSyntax { text: String, reason: String },

    #[error("{}:{line}: {reason}", path.display())]
    Checkpoint {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("task {task} failed: {reason}")]
    Worker { task: GapSet, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

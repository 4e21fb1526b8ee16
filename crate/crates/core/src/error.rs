// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied parameters outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// The inputs are well-formed but the operation is undefined on them
    /// (e.g. a distance query between disconnected vertices).
    #[error("domain error: {0}")]
    Domain(String),

    /// A dense structure would exceed the configured memory budget.
    #[error("capacity exceeded: {what} needs {required} bytes, cap is {cap} bytes")]
    Capacity {
        what: &'static str,
        required: u64,
        cap: u64,
    },

    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

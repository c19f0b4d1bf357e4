//! Batch front end: scenario files in, deterministic reports out.
//!
//! Exit codes: `0` success, `1` a verification ran and failed, `2` the
//! scenario or an expression in it could not be used.

pub mod commands;
pub mod output;
pub mod scenario;

use thiserror::Error;
use warpcheck::expr::ParseError;

pub use commands::{run, Command, Options, Outcome};
pub use scenario::Scenario;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("{error}\n    {text}\n    {caret}")]
    Expression {
        text: String,
        caret: String,
        error: ParseError,
    },
    #[error(transparent)]
    Engine(#[from] warpcheck::Error),
}

impl CliError {
    /// Parser diagnostic with the offending source and a caret under the
    /// reported offset.
    pub fn expression(text: &str, error: ParseError) -> Self {
        let col = error
            .offset()
            .map(|o| {
                text.get(..o.min(text.len()))
                    .map_or(o, |s| s.chars().count())
            })
            .unwrap_or(0);
        CliError::Expression {
            text: text.to_string(),
            caret: format!("{}^", " ".repeat(col)),
            error,
        }
    }

    pub fn exit_code(&self) -> i32 {
        2
    }
}

//! Workspace scripts for the jet and ramification engine: lexer, parser,
//! executor and report rendering behind the `jetram` binary.

pub mod exec;
pub mod lexer;
pub mod parser;
pub mod report;

use std::sync::Arc;

use jetram_core::{PolyRing, Polynomial};

pub use exec::{execute, Flags};
pub use parser::{parse_script, ParseError, WorkspaceScript};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Engine(#[from] jetram_core::Error),
}

/// Parses a polynomial over `ring`, including engine-generated jet names.
pub fn parse_polynomial(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial, CliError> {
    let expr = parser::parse_poly_expr(text, ring.table().names())?;
    Ok(exec::eval(&expr.expr, ring)?)
}

/// Parses and executes a script.
pub fn run_script(text: &str, flags: &Flags) -> Result<Report, ParseError> {
    Ok(execute(&parse_script(text)?, flags))
}

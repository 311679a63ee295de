//! Text front end: expression and endomorphism parsers.

mod command;
mod endo;
mod parse;

pub use command::{run, Command, Outcome, RunOptions, VerifyTarget, EXIT_ERROR, EXIT_FAILED, EXIT_OK};
pub use endo::{label_matches, parse_endo, EndoError};
pub use parse::{parse_expr, parse_intpoly, SyntaxError, MAX_INPUT};

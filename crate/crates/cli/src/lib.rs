//! Command-line surface of the workbench: the expression parser, system files,
//! the verification oracle and JSON reports.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod parser;
pub mod report;
pub mod selftest;
pub mod sysfile;
pub mod verify;

pub use commands::{run_command, Outcome};
pub use error::{CliError, CliResult, ErrorCode};
pub use parser::parse_expression;
pub use sysfile::{load_system_file, parse_system_source, SystemFile};
pub use verify::{verify_invariant, Mode, Verdict};

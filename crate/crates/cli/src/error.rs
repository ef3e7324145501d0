use serde::Serialize;

/// Machine-readable error category, emitted as `error.code` in JSON output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    Usage,
    Io,
    Lex,
    Syntax,
    UndeclaredIdentifier,
    BadExponent,
    DivisionByZero,
    SystemFormat,
    Structural,
    Precondition,
    Indeterminacy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl CliError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            line: None,
            column: None,
        }
    }

    pub fn at(code: ErrorCode, message: impl Into<String>, line: usize, column: usize) -> Self {
        CliError {
            code,
            message: message.into(),
            line: Some(line),
            column: Some(column),
        }
    }

    /// Moves a position reported relative to an embedded snippet into file coordinates.
    /// `line`/`column` give where the snippet starts.
    pub fn relocate(mut self, line: usize, column: usize) -> Self {
        match (self.line, self.column) {
            (Some(1), Some(c)) => {
                self.line = Some(line);
                self.column = Some(column + c - 1);
            }
            (Some(l), c) => {
                self.line = Some(line + l - 1);
                self.column = c;
            }
            _ => {
                self.line = Some(line);
                self.column = Some(column);
            }
        }
        self
    }
}

impl From<ratdyn_core::Error> for CliError {
    fn from(e: ratdyn_core::Error) -> Self {
        use ratdyn_core::Error as E;
        let code = match &e {
            E::Structural(_) => ErrorCode::Structural,
            E::DivisionByZero => ErrorCode::DivisionByZero,
            E::Indeterminacy(_) => ErrorCode::Indeterminacy,
            E::Precondition(_) => ErrorCode::Precondition,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

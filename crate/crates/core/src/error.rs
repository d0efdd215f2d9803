use thiserror::Error;

use crate::dterm::PrimSym;

/// A syntax error in one of the Polish text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not unifiable")]
pub struct NotUnifiable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}:{line}: {source}")]
    ProofFile { path: String, line: usize, source: ParseError },
    #[error("no axiom assigned to primitive {0}")]
    MissingAxiom(PrimSym),
    #[error("shift applied to a formula with non-positional variable {0}")]
    PlainVariable(String),
    #[error("position {0} does not exist")]
    BadPosition(String),
    #[error("unknown step {0}")]
    UnknownStep(u32),
    #[error("most general theorem is undefined")]
    UndefinedMgt,
    #[error("{vars} variables exceed the tautology limit of {limit}")]
    TautologyLimit { vars: usize, limit: usize },
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("table was built for axiom {table} but used with {used}")]
    TableMismatch { table: String, used: String },
    #[error("invalid proof: {0}")]
    InvalidProof(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

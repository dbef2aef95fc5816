use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("{pos}: lexical error: {msg}")]
    Lex { pos: Pos, msg: String },
    #[error("{pos}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: unknown attribute key `{key}` (expected one of: {})", allowed.join(", "))]
    UnknownKey {
        pos: Pos,
        key: String,
        allowed: Vec<String>,
    },
    #[error("{pos}: `{name}` is already bound at line {first}")]
    Duplicate { pos: Pos, name: String, first: usize },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
    /// Failure while executing a statement.
    #[error("line {line}: {msg}")]
    Eval { line: usize, msg: String },
}

impl ScriptError {
    pub fn lex(pos: Pos, msg: impl Into<String>) -> ScriptError {
        ScriptError::Lex { pos, msg: msg.into() }
    }

    pub fn pos(&self) -> Option<Pos> {
        match self {
            ScriptError::Lex { pos, .. }
            | ScriptError::Syntax { pos, .. }
            | ScriptError::UnknownKey { pos, .. }
            | ScriptError::Duplicate { pos, .. }
            | ScriptError::Invalid { pos, .. } => Some(*pos),
            ScriptError::Eval { .. } => None,
        }
    }

    pub fn is_parse(&self) -> bool {
        !matches!(self, ScriptError::Eval { .. })
    }
}

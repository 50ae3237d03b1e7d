//! The `.quiver` text format: lexer, parser, validation and canonical rendering.

use std::fmt;

mod lexer;
mod parser;
mod spec;

pub use parser::{parse_module_spec, parse_spec, parse_spec_with, ParseOptions, CHECK_DIRECTIVES};
pub use spec::{
    Arrow, CheckDirective, Combination, IdealSpec, ModuleSpec, Path, QuiverSpec, Relation, RelationPolicy,
    MAX_MODULE_DIM, MAX_TRUNCATION,
};

/// One-based line and column. `0:0` marks specs assembled in code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(line: usize, col: usize) -> Pos {
        Pos { line, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecErrorKind {
    Syntax,
    Validation,
    Shape,
    FieldMismatch,
}

impl fmt::Display for SpecErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecErrorKind::Syntax => "syntax error",
            SpecErrorKind::Validation => "validation error",
            SpecErrorKind::Shape => "shape error",
            SpecErrorKind::FieldMismatch => "field mismatch",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub kind: SpecErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl SpecError {
    pub fn new(kind: SpecErrorKind, pos: Pos, message: impl Into<String>) -> SpecError {
        SpecError { kind, pos, message: message.into() }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.kind, self.message)
    }
}

impl std::error::Error for SpecError {}

#[cfg(test)]
mod tests;

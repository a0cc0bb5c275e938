//! Text formats.
//!
//! Every format is line oriented; `#` starts a comment. Parse errors carry a
//! 1-based line and column.

mod literal;
mod matroid_text;
mod morphism_text;
mod sheaf_text;

use thiserror::Error;

pub use literal::{format_literal, parse_idyll_name, parse_literal};
pub use matroid_text::{parse_candidate, parse_matroid, serialize_matroid};
pub use morphism_text::{format_vector, parse_morphism, serialize_morphism};
pub use sheaf_text::{parse_fan, parse_sheaf, serialize_fan, serialize_sheaf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate entry {what} on lines {first} and {second}")]
    Duplicate { what: String, first: usize, second: usize },
    #[error("{0}")]
    Semantic(String),
}

pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, msg: msg.into() }
}

/// A non-empty, comment-stripped line with its 1-based number.
pub(crate) struct Line<'a> {
    pub no: usize,
    pub text: &'a str,
    /// Byte offset of `text` within the raw line.
    pub offset: usize,
}

impl Line<'_> {
    /// 1-based column of a sub-slice of `text`.
    pub fn col_of(&self, part: &str) -> usize {
        let base = self.text.as_ptr() as usize;
        let p = part.as_ptr() as usize;
        self.offset + p.saturating_sub(base) + 1
    }

    pub fn err(&self, part: &str, msg: impl Into<String>) -> ParseError {
        syntax(self.no, self.col_of(part), msg)
    }
}

pub(crate) fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let offset = trimmed.as_ptr() as usize - raw.as_ptr() as usize;
        out.push(Line { no: i + 1, text: trimmed, offset });
    }
    out
}

/// Parses `{a,b,c}` (braces required, commas or spaces between labels).
pub(crate) fn parse_set<'a>(line: &Line<'a>, s: &'a str) -> Result<Vec<&'a str>, ParseError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| line.err(s, "expected a set in braces"))?;
    Ok(inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect())
}

pub(crate) fn format_set<S: AsRef<str>>(items: &[S]) -> String {
    let parts: Vec<&str> = items.iter().map(|s| s.as_ref()).collect();
    format!("{{{}}}", parts.join(","))
}

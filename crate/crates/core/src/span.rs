//! Source locations.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A half-open region of source text. Lines and columns are 1-based and
/// counted in characters; `end_col` is exclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Span {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Span { start_line, start_col, end_line, end_col }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        let (start_line, start_col) = (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let (end_line, end_col) = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        Span { start_line, start_col, end_line, end_col }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start() <= other.start() && other.end() <= self.end()
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start() < other.end() && other.start() < self.end()
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start_line == self.end_line {
            write!(f, "{}:{}-{}", self.start_line, self.start_col, self.end_col)
        } else {
            write!(f, "{}:{}-{}:{}", self.start_line, self.start_col, self.end_line, self.end_col)
        }
    }
}

/// Source text indexed by line, for recovering the text under a span.
#[derive(Clone, Debug)]
pub struct SourceText {
    text: String,
    line_starts: Vec<usize>,
}

impl SourceText {
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into();
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        SourceText { text, line_starts }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Text of a 1-based line without its terminator.
    pub fn line(&self, line: u32) -> Option<&str> {
        let idx = (line as usize).checked_sub(1)?;
        let start = *self.line_starts.get(idx)?;
        let end = self.line_starts.get(idx + 1).map_or(self.text.len(), |e| e - 1);
        Some(self.text[start..end].trim_end_matches('\r'))
    }

    pub fn line_count(&self) -> u32 {
        self.line_starts.len() as u32
    }

    fn offset(&self, line: u32, col: u32) -> Option<usize> {
        let start = *self.line_starts.get((line as usize).checked_sub(1)?)?;
        let line_text = self.line(line)?;
        let col = (col as usize).checked_sub(1)?;
        if col == line_text.chars().count() {
            return Some(start + line_text.len());
        }
        line_text.char_indices().nth(col).map(|(b, _)| start + b)
    }

    /// The exact text covered by `span`, if the span lies within the source.
    pub fn slice(&self, span: Span) -> Option<&str> {
        let from = self.offset(span.start_line, span.start_col)?;
        let to = self.offset(span.end_line, span.end_col)?;
        (from <= to).then(|| &self.text[from..to])
    }

    /// Text under `span` with runs of whitespace collapsed to single spaces.
    pub fn snippet(&self, span: Span) -> String {
        self.slice(span)
            .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
            .unwrap_or_default()
    }

    /// Whether the span lies within the text bounds.
    pub fn in_bounds(&self, span: Span) -> bool {
        self.slice(span).is_some()
    }
}

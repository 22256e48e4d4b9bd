//! Human-readable rendering of check results.

use crate::check::CheckResult;
use crate::diagnose::TypeErrorReport;
use crate::span::{SourceText, Span};
use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

/// How much of a report to show. Each mode adds to the previous one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Error statement, the two possible types and their locations.
    #[default]
    Basic,
    /// Adds the list of candidate expressions.
    Balanced,
    /// Adds the deduction steps of the default candidate.
    Advanced,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Mode::Basic),
            "balanced" => Ok(Mode::Balanced),
            "advanced" => Ok(Mode::Advanced),
            other => Err(format!("unknown mode `{other}` (expected basic, balanced or advanced)")),
        }
    }
}

const GROUP_COLORS: [&str; 2] = ["\x1b[34m", "\x1b[33m"];
const BOLD: &str = "\x1b[1m";
const RESET: &str = "\x1b[0m";

struct Painter {
    color: bool,
}

impl Painter {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("{code}{text}{RESET}")
        } else {
            text.to_string()
        }
    }
}

pub fn render(result: &CheckResult, source: &str, mode: Mode, color: bool) -> String {
    let src = SourceText::new(source);
    let p = Painter { color };
    let mut out = String::new();
    match result {
        CheckResult::Ok { binding_types } => {
            out.push_str("No type errors.\n");
            for t in binding_types {
                let _ = writeln!(out, "  {} :: {}", t.name, t.ty);
            }
        }
        CheckResult::TypeError { reports } => {
            for (i, report) in reports.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                render_report(&mut out, report, &src, mode, &p);
            }
        }
        CheckResult::ParseError { message, span } => problem(&mut out, "parse error", message, *span, &src, &p),
        CheckResult::LexError { message, span } => problem(&mut out, "lexical error", message, *span, &src, &p),
        CheckResult::UnboundName { message, span } => problem(&mut out, "scope error", message, *span, &src, &p),
    }
    out
}

fn problem(out: &mut String, what: &str, message: &str, span: Span, src: &SourceText, p: &Painter) {
    let _ = writeln!(out, "{} at {span}: {message}", p.paint(BOLD, what));
    excerpt(out, &[span], src, p, GROUP_COLORS[0]);
}

fn render_report(out: &mut String, report: &TypeErrorReport, src: &SourceText, mode: Mode, p: &Painter) {
    let _ = writeln!(out, "{} (in {})", p.paint(BOLD, &report.error_statement), report.group);
    let cand = &report.candidates[report.default_candidate];
    for (i, pt) in cand.possible_types.iter().enumerate() {
        let color = GROUP_COLORS[i % 2];
        let _ = writeln!(out, "\n  Possible type {}: {}", i + 1, p.paint(color, &pt.printed));
        excerpt(out, &pt.locations, src, p, color);
    }
    if !report.relevant_types.is_empty() {
        out.push_str("\n  Relevant types:\n");
        for t in &report.relevant_types {
            let _ = writeln!(out, "    {} :: {}", t.name, t.ty);
        }
    }
    if mode == Mode::Basic {
        return;
    }
    out.push_str("\n  Candidate expressions:\n");
    for (i, c) in report.candidates.iter().enumerate() {
        let marker = if i == report.default_candidate { '*' } else { ' ' };
        let types: Vec<&str> = c.possible_types.iter().map(|t| t.printed.as_str()).collect();
        let _ = writeln!(out, "  {marker} {} at {}: {}", c.name, c.span, types.join(" or "));
    }
    if mode == Mode::Balanced {
        return;
    }
    let _ = writeln!(out, "\n  Deduction steps for {}:", cand.name);
    for step in &cand.steps {
        let [l, r] = step.outlined;
        let _ = writeln!(out, "    {}. {} [{l} ~ {r}]", step.index, step.explanation);
        let _ = writeln!(out, "       types at this step: {} / {}", step.type_a, step.type_b);
    }
}

/// Each source line touched by `spans`, with the covered columns underlined.
/// A span running over several lines is underlined to the end of its first line.
fn excerpt(out: &mut String, spans: &[Span], src: &SourceText, p: &Painter, color: &str) {
    let mut lines: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for span in spans {
        let Some(line) = src.line(span.start_line) else { continue };
        let width = line.chars().count() as u32;
        let start = span.start_col.min(width + 1);
        let end = if span.end_line == span.start_line { span.end_col } else { width + 1 };
        lines.entry(span.start_line).or_default().push((start, end.max(start + 1)));
    }
    for (number, ranges) in lines {
        let line = src.line(number).unwrap_or_default();
        let last = ranges.iter().map(|r| r.1).max().unwrap_or(1);
        let marks: String = (1..last).map(|col| if ranges.iter().any(|&(s, e)| s <= col && col < e) { '^' } else { ' ' }).collect();
        let gutter = format!("{number:>4}");
        let _ = writeln!(out, "    {gutter} | {line}");
        let _ = writeln!(out, "    {} | {}", " ".repeat(gutter.len()), paint_marks(p, color, &marks));
    }
}

/// Colours only the carets so trailing blanks stay plain.
fn paint_marks(p: &Painter, color: &str, marks: &str) -> String {
    let mut out = String::new();
    let mut rest = marks;
    while let Some(start) = rest.find('^') {
        out.push_str(&rest[..start]);
        let run = rest[start..].find(' ').map_or(rest.len(), |n| start + n);
        out.push_str(&p.paint(color, &rest[start..run]));
        rest = &rest[run..];
    }
    out.push_str(rest);
    out
}

//! Lexing and parsing of the source language.

pub mod ast;
pub mod lexer;
mod parser;
pub mod pretty;

pub use ast::*;
pub use lexer::{tokenize, Token, TokenKind};

use crate::span::Span;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct LexError {
    pub message: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    /// Descriptions of the tokens that would have been accepted.
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("lexical error: {0}")]
    Lex(#[from] LexError),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => e.span,
            SyntaxError::Parse(e) => e.span,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            SyntaxError::Lex(e) => &e.message,
            SyntaxError::Parse(e) => &e.message,
        }
    }
}

/// Parses a token stream produced by [`tokenize`] into a program. Node ids
/// are assigned in preorder.
pub fn parse(tokens: &[Token], source: &str) -> Result<Program, ParseError> {
    let mut bindings = parser::Parser::new(tokens).program()?;
    parser::Numbering::new().bindings(&mut bindings);
    Ok(Program { bindings, source: source.to_string() })
}

/// Tokenizes and parses a whole program.
pub fn parse_program(source: &str) -> Result<Program, SyntaxError> {
    let tokens = tokenize(source)?;
    Ok(parse(&tokens, source)?)
}

/// Parses a standalone expression, numbering its nodes from zero.
pub fn parse_expr(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut expr = parser::Parser::new(&tokens).finish_expr()?;
    parser::Numbering::new().expr(&mut expr);
    Ok(expr)
}

/// Parses a standalone pattern.
pub fn parse_pattern(source: &str) -> Result<Pattern, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut pat = parser::Parser::new(&tokens).finish_pattern()?;
    parser::Numbering::new().pattern(&mut pat);
    Ok(pat)
}

//! Tokenizer with a simplified offside rule.
//!
//! Raw tokens are produced first; a second pass inserts virtual
//! [`TokenKind::BlockOpen`], [`TokenKind::BlockSep`] and
//! [`TokenKind::BlockClose`] tokens around `where`/`let` blocks and
//! [`TokenKind::DeclSep`] between top-level declarations (lines that start in
//! column 1).

use super::LexError;
use crate::span::Span;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Con(String),
    Int(i64),
    Char(char),
    Str(String),
    If,
    Then,
    Else,
    Let,
    In,
    Where,
    Equals,
    Bar,
    Backslash,
    Arrow,
    Comma,
    DotDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Underscore,
    /// Infix operator symbol such as `+`, `==` or `:`.
    Op(String),
    BlockOpen,
    BlockSep,
    BlockClose,
    DeclSep,
}

impl TokenKind {
    pub fn is_virtual(&self) -> bool {
        matches!(self, TokenKind::BlockOpen | TokenKind::BlockSep | TokenKind::BlockClose | TokenKind::DeclSep)
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Con(s) => write!(f, "constructor `{s}`"),
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Char(c) => write!(f, "character {c:?}"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::If => f.write_str("`if`"),
            TokenKind::Then => f.write_str("`then`"),
            TokenKind::Else => f.write_str("`else`"),
            TokenKind::Let => f.write_str("`let`"),
            TokenKind::In => f.write_str("`in`"),
            TokenKind::Where => f.write_str("`where`"),
            TokenKind::Equals => f.write_str("`=`"),
            TokenKind::Bar => f.write_str("`|`"),
            TokenKind::Backslash => f.write_str("`\\`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::DotDot => f.write_str("`..`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Underscore => f.write_str("`_`"),
            TokenKind::Op(op) => write!(f, "operator `{op}`"),
            TokenKind::BlockOpen => f.write_str("start of block"),
            TokenKind::BlockSep => f.write_str("new line in block"),
            TokenKind::BlockClose => f.write_str("end of block"),
            TokenKind::DeclSep => f.write_str("new declaration"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

const OPERATORS: &[&str] = &["==", "/=", "<=", ">=", "&&", "||", "++", "+", "-", "*", "/", "<", ">", ":"];

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

fn span_from(start: (u32, u32), cur: &Cursor<'_>) -> Span {
    Span::new(start.0, start.1, cur.line, cur.col)
}

fn is_symbol_char(c: char) -> bool {
    "+-*/=<>&|:.\\".contains(c)
}

fn lex_escape(cur: &mut Cursor<'_>, start: (u32, u32)) -> Result<char, LexError> {
    match cur.bump() {
        Some('n') => Ok('\n'),
        Some('t') => Ok('\t'),
        Some('\\') => Ok('\\'),
        Some('\'') => Ok('\''),
        Some('"') => Ok('"'),
        Some('0') => Ok('\0'),
        Some(c) => Err(LexError { message: format!("unknown escape sequence `\\{c}`"), span: span_from(start, cur) }),
        None => Err(LexError { message: "unterminated literal".into(), span: span_from(start, cur) }),
    }
}

/// Produces tokens without layout resolution.
pub fn raw_tokens(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { chars: source.chars().peekable(), line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let start = cur.pos();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '-' && cur.peek2() == Some('-') {
            // line comment
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let kind = if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(d) = cur.peek().filter(|d| d.is_ascii_digit()) {
                text.push(d);
                cur.bump();
            }
            let value = text.parse::<i64>().map_err(|_| LexError {
                message: format!("integer literal `{text}` is too large"),
                span: span_from(start, &cur),
            })?;
            TokenKind::Int(value)
        } else if c.is_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(d) = cur.peek().filter(|d| d.is_alphanumeric() || *d == '_' || *d == '\'') {
                text.push(d);
                cur.bump();
            }
            match text.as_str() {
                "if" => TokenKind::If,
                "then" => TokenKind::Then,
                "else" => TokenKind::Else,
                "let" => TokenKind::Let,
                "in" => TokenKind::In,
                "where" => TokenKind::Where,
                "_" => TokenKind::Underscore,
                _ if c.is_uppercase() => TokenKind::Con(text),
                _ => TokenKind::Ident(text),
            }
        } else if c == '\'' {
            cur.bump();
            let value = match cur.bump() {
                Some('\\') => lex_escape(&mut cur, start)?,
                Some('\n') | Some('\'') | None => {
                    return Err(LexError { message: "malformed character literal".into(), span: span_from(start, &cur) })
                }
                Some(ch) => ch,
            };
            if cur.bump() != Some('\'') {
                return Err(LexError { message: "unterminated character literal".into(), span: span_from(start, &cur) });
            }
            TokenKind::Char(value)
        } else if c == '"' {
            cur.bump();
            let mut text = String::new();
            loop {
                match cur.bump() {
                    Some('"') => break,
                    Some('\\') => text.push(lex_escape(&mut cur, start)?),
                    Some('\n') | None => {
                        return Err(LexError { message: "unterminated string literal".into(), span: span_from(start, &cur) })
                    }
                    Some(ch) => text.push(ch),
                }
            }
            TokenKind::Str(text)
        } else if let Some(kind) = match c {
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ',' => Some(TokenKind::Comma),
            _ => None,
        } {
            cur.bump();
            kind
        } else if is_symbol_char(c) {
            let mut text = String::new();
            while let Some(d) = cur.peek().filter(|d| is_symbol_char(*d)) {
                text.push(d);
                cur.bump();
            }
            match text.as_str() {
                "=" => TokenKind::Equals,
                "|" => TokenKind::Bar,
                "\\" => TokenKind::Backslash,
                "->" => TokenKind::Arrow,
                ".." => TokenKind::DotDot,
                op if OPERATORS.contains(&op) => TokenKind::Op(text),
                _ => {
                    return Err(LexError { message: format!("unknown operator `{text}`"), span: span_from(start, &cur) })
                }
            }
        } else {
            cur.bump();
            return Err(LexError { message: format!("illegal character {c:?}"), span: span_from(start, &cur) });
        };
        out.push(Token { kind, span: span_from(start, &cur) });
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Let,
    Where,
}

struct Block {
    kind: BlockKind,
    /// Column of the first binding; `None` until that token is seen.
    col: Option<u32>,
}

/// Tokenizes `source` and resolves indentation into explicit block tokens.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let raw = raw_tokens(source)?;
    let mut out: Vec<Token> = Vec::with_capacity(raw.len() + 8);
    let mut blocks: Vec<Block> = Vec::new();
    let mut prev_line = 0;
    for tok in raw {
        let first_on_line = tok.span.start_line != prev_line;
        prev_line = tok.span.end_line;
        let col = tok.span.start_col;
        let marker = |kind| Token { kind, span: tok.span };

        if blocks.last().is_some_and(|b| b.col.is_none()) {
            if first_on_line && col <= enclosing_col(&blocks) {
                // Keyword followed by nothing on deeper lines: empty block.
                blocks.pop();
                out.push(marker(TokenKind::BlockClose));
            } else {
                if let Some(block) = blocks.last_mut() {
                    block.col = Some(col);
                }
                push_token(&mut out, &mut blocks, tok);
                continue;
            }
        }

        if first_on_line {
            while let Some(Block { col: Some(c), .. }) = blocks.last() {
                if col < *c {
                    blocks.pop();
                    out.push(marker(TokenKind::BlockClose));
                } else {
                    break;
                }
            }
            match blocks.last() {
                Some(Block { col: Some(c), .. }) if *c == col => out.push(marker(TokenKind::BlockSep)),
                None if col == 1 && !out.is_empty() => out.push(marker(TokenKind::DeclSep)),
                _ => {}
            }
        }
        if tok.kind == TokenKind::In && blocks.iter().any(|b| b.kind == BlockKind::Let) {
            // `in` ends the innermost let block and any where blocks nested in it.
            while let Some(block) = blocks.pop() {
                out.push(marker(TokenKind::BlockClose));
                if block.kind == BlockKind::Let {
                    break;
                }
            }
        }
        push_token(&mut out, &mut blocks, tok);
    }
    if let Some(last) = out.last().map(|t| t.span) {
        for _ in blocks.drain(..) {
            out.push(Token { kind: TokenKind::BlockClose, span: last });
        }
    }
    Ok(out)
}

fn enclosing_col(blocks: &[Block]) -> u32 {
    blocks.iter().rev().skip(1).find_map(|b| b.col).unwrap_or(1)
}

fn push_token(out: &mut Vec<Token>, blocks: &mut Vec<Block>, tok: Token) {
    let opens = match tok.kind {
        TokenKind::Let => Some(BlockKind::Let),
        TokenKind::Where => Some(BlockKind::Where),
        _ => None,
    };
    let span = tok.span;
    out.push(tok);
    if let Some(kind) = opens {
        blocks.push(Block { kind, col: None });
        out.push(Token { kind: TokenKind::BlockOpen, span });
    }
}

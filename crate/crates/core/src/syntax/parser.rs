//! Recursive-descent parser over layout-resolved tokens.

use super::ast::*;
use super::lexer::{Token, TokenKind};
use super::ParseError;
use crate::span::Span;
use std::collections::HashSet;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    Left,
    Right,
    Non,
}

fn operator_info(op: &str) -> (u8, Assoc) {
    match op {
        "*" | "/" => (7, Assoc::Left),
        "+" | "-" => (6, Assoc::Left),
        ":" | "++" => (5, Assoc::Right),
        "==" | "/=" | "<" | "<=" | ">" | ">=" => (4, Assoc::Non),
        "&&" => (3, Assoc::Right),
        "||" => (2, Assoc::Right),
        _ => unreachable!("lexer only produces known operators"),
    }
}

pub(crate) struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'t> Parser<'t> {
    pub(crate) fn new(tokens: &'t [Token]) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn current_span(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => self.tokens.last().map_or(Span::new(1, 1, 1, 1), |t| {
                Span::new(t.span.end_line, t.span.end_col, t.span.end_line, t.span.end_col + 1)
            }),
        }
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos - 1].span
    }

    fn bump(&mut self) -> &'t Token {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let found = match self.peek() {
            Some(k) => k.to_string(),
            None => "end of input".to_string(),
        };
        let message = if expected.is_empty() {
            format!("unexpected {found}")
        } else {
            format!("unexpected {found}, expected {}", expected.join(" or "))
        };
        Err(ParseError {
            message,
            span: self.current_span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, kind: TokenKind, describe: &str) -> PResult<Span> {
        if self.eat(&kind) {
            Ok(self.prev_span())
        } else {
            self.error(&[describe])
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub(crate) fn program(&mut self) -> PResult<Vec<Binding>> {
        let mut equations = Vec::new();
        while self.eat(&TokenKind::DeclSep) {}
        while !self.at_end() {
            equations.push(self.equation()?);
            if self.at_end() {
                break;
            }
            if !self.eat(&TokenKind::DeclSep) {
                return self.error(&["new declaration"]);
            }
            while self.eat(&TokenKind::DeclSep) {}
        }
        group_equations(equations)
    }

    pub(crate) fn finish_expr(&mut self) -> PResult<Expr> {
        let e = self.expr()?;
        if !self.at_end() {
            return self.error(&["end of input"]);
        }
        Ok(e)
    }

    pub(crate) fn finish_pattern(&mut self) -> PResult<Pattern> {
        let p = self.pattern()?;
        if !self.at_end() {
            return self.error(&["end of input"]);
        }
        Ok(p)
    }

    fn block(&mut self) -> PResult<Vec<Binding>> {
        self.expect(TokenKind::BlockOpen, "block")?;
        let mut equations = Vec::new();
        if !self.at(&TokenKind::BlockClose) {
            loop {
                equations.push(self.equation()?);
                if !self.eat(&TokenKind::BlockSep) {
                    break;
                }
            }
        }
        self.expect(TokenKind::BlockClose, "end of block")?;
        group_equations(equations)
    }

    fn equation(&mut self) -> PResult<(String, Equation)> {
        let (name, name_span) = match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                (name, self.bump().span)
            }
            _ => return self.error(&["binding name"]),
        };
        let mut params = Vec::new();
        while self.starts_apat() {
            params.push(self.apat()?);
        }
        let lhs_span = params.last().map_or(name_span, |p| name_span.to(p.span));
        let mut seen = HashSet::new();
        for (var, span) in params.iter().flat_map(|p| p.bound_vars()) {
            if !seen.insert(var) {
                return Err(ParseError {
                    message: format!("variable `{var}` is bound more than once in the same equation"),
                    span,
                    expected: vec![],
                });
            }
        }
        let rhs = if self.at(&TokenKind::Bar) {
            let mut guards = Vec::new();
            while self.eat(&TokenKind::Bar) {
                let cond = self.expr()?;
                self.expect(TokenKind::Equals, "`=`")?;
                let body = self.expr()?;
                guards.push(Guard { cond, body });
            }
            Rhs::Guarded(guards)
        } else if self.eat(&TokenKind::Equals) {
            Rhs::Plain(self.expr()?)
        } else {
            return self.error(&["`=`", "`|`", "pattern"]);
        };
        let where_bindings = if self.eat(&TokenKind::Where) { self.block()? } else { Vec::new() };
        let span = name_span.to(self.last_real_span());
        Ok((name, Equation { name_span, lhs_span, params, rhs, where_bindings, span }))
    }

    fn last_real_span(&self) -> Span {
        self.tokens[..self.pos]
            .iter()
            .rev()
            .find(|t| !t.kind.is_virtual())
            .map(|t| t.span)
            .unwrap_or_else(|| self.current_span())
    }

    fn starts_apat(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                TokenKind::Ident(_)
                    | TokenKind::Underscore
                    | TokenKind::Int(_)
                    | TokenKind::Char(_)
                    | TokenKind::Con(_)
                    | TokenKind::LParen
                    | TokenKind::LBracket
            )
        )
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let head = self.apat()?;
        if self.at(&TokenKind::Op(":".into())) {
            self.bump();
            let tail = self.pattern()?;
            let span = head.span.to(tail.span);
            return Ok(Pattern { kind: PatternKind::Cons(Box::new(head), Box::new(tail)), span, id: 0 });
        }
        Ok(head)
    }

    fn apat(&mut self) -> PResult<Pattern> {
        let start = self.current_span();
        let kind = match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.bump();
                PatternKind::Var(name)
            }
            Some(TokenKind::Underscore) => {
                self.bump();
                PatternKind::Wild
            }
            Some(TokenKind::Int(n)) => {
                let n = *n;
                self.bump();
                PatternKind::Lit(Literal::Int(n))
            }
            Some(TokenKind::Char(c)) => {
                let c = *c;
                self.bump();
                PatternKind::Lit(Literal::Char(c))
            }
            Some(TokenKind::Con(name)) => {
                let value = self.bool_con(name)?;
                self.bump();
                PatternKind::Lit(Literal::Bool(value))
            }
            Some(TokenKind::LBracket) => {
                self.bump();
                self.expect(TokenKind::RBracket, "`]`")?;
                PatternKind::Lit(Literal::Nil)
            }
            Some(TokenKind::LParen) => {
                self.bump();
                let first = self.pattern()?;
                if self.eat(&TokenKind::RParen) {
                    // Parenthesised pattern keeps the inner node; widen its span.
                    return Ok(Pattern { span: start.to(self.prev_span()), ..first });
                }
                let mut items = vec![first];
                while self.eat(&TokenKind::Comma) {
                    items.push(self.pattern()?);
                }
                self.expect(TokenKind::RParen, "`)`")?;
                if items.len() > 3 {
                    return Err(ParseError {
                        message: "tuples may have at most three components".into(),
                        span: start.to(self.prev_span()),
                        expected: vec![],
                    });
                }
                PatternKind::Tuple(items)
            }
            _ => return self.error(&["pattern"]),
        };
        Ok(Pattern { kind, span: start.to(self.prev_span()), id: 0 })
    }

    fn bool_con(&self, name: &str) -> PResult<bool> {
        match name {
            "True" => Ok(true),
            "False" => Ok(false),
            _ => Err(ParseError {
                message: format!("unknown constructor `{name}`"),
                span: self.current_span(),
                expected: vec!["True".into(), "False".into()],
            }),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.infix(0)
    }

    fn infix(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.operand()?;
        while let Some(TokenKind::Op(op)) = self.peek() {
            let op = op.clone();
            let (prec, assoc) = operator_info(&op);
            if prec < min_prec {
                break;
            }
            let op_span = self.bump().span;
            let next_min = if assoc == Assoc::Right { prec } else { prec + 1 };
            let rhs = self.infix(next_min)?;
            let span = lhs.span.to(rhs.span);
            let op = Expr { kind: ExprKind::Var(op), span: op_span, id: 0 };
            lhs = Expr { kind: ExprKind::Infix { op: Box::new(op), lhs: Box::new(lhs), rhs: Box::new(rhs) }, span, id: 0 };
            if assoc == Assoc::Non {
                if let Some(TokenKind::Op(next)) = self.peek() {
                    if operator_info(next).0 == prec {
                        return Err(ParseError {
                            message: format!("comparison operators cannot be chained (`{next}`)"),
                            span: self.current_span(),
                            expected: vec![],
                        });
                    }
                }
            }
        }
        Ok(lhs)
    }

    fn operand(&mut self) -> PResult<Expr> {
        let start = self.current_span();
        match self.peek() {
            Some(TokenKind::Backslash) => {
                self.bump();
                let mut params = Vec::new();
                while self.starts_apat() {
                    params.push(self.apat()?);
                }
                if params.is_empty() {
                    return self.error(&["pattern"]);
                }
                self.expect(TokenKind::Arrow, "`->`")?;
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(Expr { kind: ExprKind::Lambda { params, body: Box::new(body) }, span, id: 0 })
            }
            Some(TokenKind::If) => {
                self.bump();
                let cond = self.expr()?;
                self.expect(TokenKind::Then, "`then`")?;
                let then_branch = self.expr()?;
                self.expect(TokenKind::Else, "`else`")?;
                let else_branch = self.expr()?;
                let span = start.to(else_branch.span);
                Ok(Expr {
                    kind: ExprKind::If {
                        cond: Box::new(cond),
                        then_branch: Box::new(then_branch),
                        else_branch: Box::new(else_branch),
                    },
                    span,
                    id: 0,
                })
            }
            Some(TokenKind::Let) => {
                self.bump();
                let bindings = self.block()?;
                self.expect(TokenKind::In, "`in`")?;
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(Expr { kind: ExprKind::Let { bindings, body: Box::new(body) }, span, id: 0 })
            }
            _ => self.application(),
        }
    }

    fn starts_aexp(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                TokenKind::Ident(_)
                    | TokenKind::Con(_)
                    | TokenKind::Int(_)
                    | TokenKind::Char(_)
                    | TokenKind::Str(_)
                    | TokenKind::LParen
                    | TokenKind::LBracket
            )
        )
    }

    fn application(&mut self) -> PResult<Expr> {
        let mut f = self.aexp()?;
        while self.starts_aexp() {
            let arg = self.aexp()?;
            let span = f.span.to(arg.span);
            f = Expr { kind: ExprKind::App(Box::new(f), Box::new(arg)), span, id: 0 };
        }
        Ok(f)
    }

    fn aexp(&mut self) -> PResult<Expr> {
        let start = self.current_span();
        let kind = match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.bump();
                ExprKind::Var(name)
            }
            Some(TokenKind::Con(name)) => {
                let value = self.bool_con(name)?;
                self.bump();
                ExprKind::Bool(value)
            }
            Some(TokenKind::Int(n)) => {
                let n = *n;
                self.bump();
                ExprKind::Int(n)
            }
            Some(TokenKind::Char(c)) => {
                let c = *c;
                self.bump();
                ExprKind::Char(c)
            }
            Some(TokenKind::Str(s)) => {
                let s = s.clone();
                self.bump();
                ExprKind::Str(s)
            }
            Some(TokenKind::LParen) => {
                self.bump();
                if let (Some(TokenKind::Op(op)), Some(TokenKind::RParen)) = (self.peek(), self.peek_at(1)) {
                    let op = op.clone();
                    self.bump();
                    self.bump();
                    return Ok(Expr { kind: ExprKind::Var(op), span: start.to(self.prev_span()), id: 0 });
                }
                let first = self.expr()?;
                if self.eat(&TokenKind::RParen) {
                    ExprKind::Paren(Box::new(first))
                } else {
                    let mut items = vec![first];
                    while self.eat(&TokenKind::Comma) {
                        items.push(self.expr()?);
                    }
                    self.expect(TokenKind::RParen, "`)`")?;
                    if items.len() == 1 {
                        return self.error(&["`)`", "`,`"]);
                    }
                    if items.len() > 3 {
                        return Err(ParseError {
                            message: "tuples may have at most three components".into(),
                            span: start.to(self.prev_span()),
                            expected: vec![],
                        });
                    }
                    ExprKind::Tuple(items)
                }
            }
            Some(TokenKind::LBracket) => {
                self.bump();
                if self.eat(&TokenKind::RBracket) {
                    ExprKind::List(Vec::new())
                } else {
                    let first = self.expr()?;
                    if self.eat(&TokenKind::DotDot) {
                        let to = self.expr()?;
                        self.expect(TokenKind::RBracket, "`]`")?;
                        ExprKind::Range { from: Box::new(first), to: Box::new(to) }
                    } else {
                        let mut items = vec![first];
                        while self.eat(&TokenKind::Comma) {
                            items.push(self.expr()?);
                        }
                        self.expect(TokenKind::RBracket, "`]`")?;
                        ExprKind::List(items)
                    }
                }
            }
            _ => return self.error(&["expression"]),
        };
        Ok(Expr { kind, span: start.to(self.prev_span()), id: 0 })
    }
}

/// Merges consecutive equations with the same name into bindings.
fn group_equations(equations: Vec<(String, Equation)>) -> PResult<Vec<Binding>> {
    let mut bindings: Vec<Binding> = Vec::new();
    for (name, eq) in equations {
        if let Some(last) = bindings.last_mut().filter(|b| b.name == name) {
            if last.arity() != eq.params.len() {
                return Err(ParseError {
                    message: format!("equations for `{name}` have different numbers of arguments"),
                    span: eq.lhs_span,
                    expected: vec![],
                });
            }
            last.span = last.span.to(eq.span);
            last.equations.push(eq);
            continue;
        }
        if bindings.iter().any(|b| b.name == name) {
            return Err(ParseError {
                message: format!("conflicting definitions for `{name}`"),
                span: eq.name_span,
                expected: vec![],
            });
        }
        bindings.push(Binding { name, id: 0, span: eq.span, equations: vec![eq] });
    }
    Ok(bindings)
}

/// Assigns node ids in preorder, children left to right.
pub(crate) struct Numbering {
    next: NodeId,
}

impl Numbering {
    pub(crate) fn new() -> Self {
        Numbering { next: 0 }
    }

    fn fresh(&mut self) -> NodeId {
        let id = self.next;
        self.next += 1;
        id
    }

    pub(crate) fn bindings(&mut self, bindings: &mut [Binding]) {
        for b in bindings {
            self.binding(b);
        }
    }

    fn binding(&mut self, b: &mut Binding) {
        b.id = self.fresh();
        for eq in &mut b.equations {
            for p in &mut eq.params {
                self.pattern(p);
            }
            match &mut eq.rhs {
                Rhs::Plain(e) => self.expr(e),
                Rhs::Guarded(guards) => {
                    for g in guards {
                        self.expr(&mut g.cond);
                        self.expr(&mut g.body);
                    }
                }
            }
            self.bindings(&mut eq.where_bindings);
        }
    }

    pub(crate) fn pattern(&mut self, p: &mut Pattern) {
        p.id = self.fresh();
        match &mut p.kind {
            PatternKind::Cons(h, t) => {
                self.pattern(h);
                self.pattern(t);
            }
            PatternKind::Tuple(items) => items.iter_mut().for_each(|i| self.pattern(i)),
            _ => {}
        }
    }

    pub(crate) fn expr(&mut self, e: &mut Expr) {
        e.id = self.fresh();
        match &mut e.kind {
            ExprKind::App(f, a) => {
                self.expr(f);
                self.expr(a);
            }
            ExprKind::Infix { op, lhs, rhs } => {
                self.expr(lhs);
                self.expr(op);
                self.expr(rhs);
            }
            ExprKind::If { cond, then_branch, else_branch } => {
                self.expr(cond);
                self.expr(then_branch);
                self.expr(else_branch);
            }
            ExprKind::Lambda { params, body } => {
                params.iter_mut().for_each(|p| self.pattern(p));
                self.expr(body);
            }
            ExprKind::Let { bindings, body } => {
                self.bindings(bindings);
                self.expr(body);
            }
            ExprKind::List(items) | ExprKind::Tuple(items) => items.iter_mut().for_each(|i| self.expr(i)),
            ExprKind::Range { from, to } => {
                self.expr(from);
                self.expr(to);
            }
            ExprKind::Paren(inner) => self.expr(inner),
            ExprKind::Var(_) | ExprKind::Int(_) | ExprKind::Char(_) | ExprKind::Str(_) | ExprKind::Bool(_) => {}
        }
    }
}

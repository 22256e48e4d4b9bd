//! Printing syntax trees back to source text that parses to the same shape.

use super::ast::*;

/// Prints a whole program. Top-level equations start in column 1 and nested
/// blocks are indented so the layout rule recovers the same structure.
pub fn print_program(program: &Program) -> String {
    let mut p = Printer::default();
    for (i, b) in program.bindings.iter().enumerate() {
        if i > 0 {
            p.out.push('\n');
        }
        p.binding(b, 1);
    }
    p.out.push('\n');
    p.out
}

pub fn print_expr(expr: &Expr) -> String {
    let mut p = Printer::default();
    p.expr(expr, 1);
    p.out
}

pub fn print_pattern(pat: &Pattern) -> String {
    let mut p = Printer::default();
    p.pattern(pat);
    p.out
}

pub fn print_literal(lit: &Literal) -> String {
    match lit {
        Literal::Int(n) => n.to_string(),
        Literal::Char(c) => format!("{c:?}"),
        Literal::Bool(true) => "True".into(),
        Literal::Bool(false) => "False".into(),
        Literal::Nil => "[]".into(),
    }
}

#[derive(Default)]
struct Printer {
    out: String,
}

impl Printer {
    fn newline(&mut self, col: usize) {
        self.out.push('\n');
        self.out.extend(std::iter::repeat_n(' ', col - 1));
    }

    /// `col` is the column at which the binding's first equation begins.
    fn binding(&mut self, b: &Binding, col: usize) {
        for (i, eq) in b.equations.iter().enumerate() {
            if i > 0 {
                self.newline(col);
            }
            self.out.push_str(&b.name);
            for param in &eq.params {
                self.out.push(' ');
                self.apat(param);
            }
            match &eq.rhs {
                Rhs::Plain(e) => {
                    self.out.push_str(" = ");
                    self.expr(e, col);
                }
                Rhs::Guarded(guards) => {
                    for g in guards {
                        self.out.push_str(" | ");
                        self.expr(&g.cond, col);
                        self.out.push_str(" = ");
                        self.expr(&g.body, col);
                    }
                }
            }
            if !eq.where_bindings.is_empty() {
                self.out.push_str(" where");
                self.block(&eq.where_bindings, col + 4);
            }
        }
    }

    fn block(&mut self, bindings: &[Binding], col: usize) {
        for b in bindings {
            self.newline(col);
            self.binding(b, col);
        }
    }

    /// `col` is the item column of the innermost enclosing block.
    fn expr(&mut self, e: &Expr, col: usize) {
        match &e.kind {
            ExprKind::Var(name) => {
                if name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') {
                    self.out.push_str(name);
                } else {
                    self.out.push('(');
                    self.out.push_str(name);
                    self.out.push(')');
                }
            }
            ExprKind::Int(n) => self.out.push_str(&n.to_string()),
            ExprKind::Char(c) => self.out.push_str(&format!("{c:?}")),
            ExprKind::Str(s) => self.out.push_str(&format!("{s:?}")),
            ExprKind::Bool(b) => self.out.push_str(if *b { "True" } else { "False" }),
            ExprKind::App(f, a) => {
                if matches!(f.unparen().kind, ExprKind::App(..)) {
                    self.expr(f.unparen(), col);
                } else {
                    self.atom(f, col);
                }
                self.out.push(' ');
                self.atom(a, col);
            }
            ExprKind::Infix { op, lhs, rhs } => {
                self.operand(lhs, col);
                self.out.push(' ');
                if let ExprKind::Var(name) = &op.kind {
                    self.out.push_str(name);
                }
                self.out.push(' ');
                self.operand(rhs, col);
            }
            ExprKind::If { cond, then_branch, else_branch } => {
                self.out.push_str("if ");
                self.expr(cond, col);
                self.out.push_str(" then ");
                self.expr(then_branch, col);
                self.out.push_str(" else ");
                self.expr(else_branch, col);
            }
            ExprKind::Lambda { params, body } => {
                self.out.push('\\');
                for (i, param) in params.iter().enumerate() {
                    if i > 0 {
                        self.out.push(' ');
                    }
                    self.apat(param);
                }
                self.out.push_str(" -> ");
                self.expr(body, col);
            }
            ExprKind::Let { bindings, body } => {
                self.out.push_str("let");
                self.block(bindings, col + 4);
                self.newline(col + 6);
                self.out.push_str("in ");
                self.expr(body, col);
            }
            ExprKind::List(items) => {
                self.out.push('[');
                self.comma_list(items, col);
                self.out.push(']');
            }
            ExprKind::Tuple(items) => {
                self.out.push('(');
                self.comma_list(items, col);
                self.out.push(')');
            }
            ExprKind::Range { from, to } => {
                self.out.push('[');
                self.expr(from, col);
                self.out.push_str(" .. ");
                self.expr(to, col);
                self.out.push(']');
            }
            ExprKind::Paren(inner) => self.atom(inner, col),
        }
    }

    fn comma_list(&mut self, items: &[Expr], col: usize) {
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.expr(item, col);
        }
    }

    /// Prints `e` so that it parses as an argument of an application.
    fn atom(&mut self, e: &Expr, col: usize) {
        let e = e.unparen();
        let atomic = matches!(
            e.kind,
            ExprKind::Var(_)
                | ExprKind::Int(_)
                | ExprKind::Char(_)
                | ExprKind::Str(_)
                | ExprKind::Bool(_)
                | ExprKind::List(_)
                | ExprKind::Tuple(_)
                | ExprKind::Range { .. }
        );
        if atomic {
            self.expr(e, col);
        } else {
            self.out.push('(');
            self.expr(e, col);
            self.out.push(')');
        }
    }

    /// Operands of infix operators are parenthesised unless they are
    /// applications or atoms.
    fn operand(&mut self, e: &Expr, col: usize) {
        let e = e.unparen();
        if matches!(e.kind, ExprKind::App(..)) {
            self.expr(e, col);
        } else {
            self.atom(e, col);
        }
    }

    fn pattern(&mut self, p: &Pattern) {
        match &p.kind {
            PatternKind::Cons(h, t) => {
                self.apat(h);
                self.out.push(':');
                if matches!(t.kind, PatternKind::Cons(..)) {
                    self.pattern(t);
                } else {
                    self.apat(t);
                }
            }
            _ => self.apat(p),
        }
    }

    fn apat(&mut self, p: &Pattern) {
        match &p.kind {
            PatternKind::Var(name) => self.out.push_str(name),
            PatternKind::Wild => self.out.push('_'),
            PatternKind::Lit(lit) => self.out.push_str(&print_literal(lit)),
            PatternKind::Tuple(items) => {
                self.out.push('(');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.pattern(item);
                }
                self.out.push(')');
            }
            PatternKind::Cons(..) => {
                self.out.push('(');
                self.pattern(p);
                self.out.push(')');
            }
        }
    }
}

use crate::span::Span;

/// Identity of an expression or pattern node. Assigned in preorder, children
/// left to right, starting from zero for each program.
pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
    pub id: NodeId,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Var(String),
    Int(i64),
    Char(char),
    Str(String),
    Bool(bool),
    App(Box<Expr>, Box<Expr>),
    /// `op` is always a `Var` node holding the operator symbol.
    Infix { op: Box<Expr>, lhs: Box<Expr>, rhs: Box<Expr> },
    If { cond: Box<Expr>, then_branch: Box<Expr>, else_branch: Box<Expr> },
    Lambda { params: Vec<Pattern>, body: Box<Expr> },
    Let { bindings: Vec<Binding>, body: Box<Expr> },
    List(Vec<Expr>),
    Range { from: Box<Expr>, to: Box<Expr> },
    Tuple(Vec<Expr>),
    Paren(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub span: Span,
    pub id: NodeId,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PatternKind {
    Var(String),
    Wild,
    Cons(Box<Pattern>, Box<Pattern>),
    Tuple(Vec<Pattern>),
    Lit(Literal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Char(char),
    Bool(bool),
    /// The empty list `[]`.
    Nil,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Guard {
    pub cond: Expr,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rhs {
    Plain(Expr),
    Guarded(Vec<Guard>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    /// Span of the defined name at the start of this equation.
    pub name_span: Span,
    /// Span of the name together with its parameter patterns.
    pub lhs_span: Span,
    pub params: Vec<Pattern>,
    pub rhs: Rhs,
    pub where_bindings: Vec<Binding>,
    pub span: Span,
}

/// All consecutive equations defining one name.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    /// Node id of the defining occurrence (the name in the first equation).
    pub id: NodeId,
    pub equations: Vec<Equation>,
    pub span: Span,
}

impl Binding {
    pub fn name_span(&self) -> Span {
        self.equations[0].name_span
    }

    pub fn arity(&self) -> usize {
        self.equations[0].params.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub bindings: Vec<Binding>,
    pub source: String,
}

impl Expr {
    /// Direct subexpressions in source order. Bindings of a `let` are not
    /// included; walk them through [`Expr::let_bindings`].
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Var(_) | ExprKind::Int(_) | ExprKind::Char(_) | ExprKind::Str(_) | ExprKind::Bool(_) => {
                vec![]
            }
            ExprKind::App(f, a) => vec![f, a],
            ExprKind::Infix { op, lhs, rhs } => vec![lhs, op, rhs],
            ExprKind::If { cond, then_branch, else_branch } => vec![cond, then_branch, else_branch],
            ExprKind::Lambda { body, .. } => vec![body],
            ExprKind::Let { body, .. } => vec![body],
            ExprKind::List(items) | ExprKind::Tuple(items) => items.iter().collect(),
            ExprKind::Range { from, to } => vec![from, to],
            ExprKind::Paren(inner) => vec![inner],
        }
    }

    pub fn let_bindings(&self) -> &[Binding] {
        match &self.kind {
            ExprKind::Let { bindings, .. } => bindings,
            _ => &[],
        }
    }

    /// Literal-like leaves whose type is known without inference.
    pub fn is_atomic_literal(&self) -> bool {
        matches!(
            &self.kind,
            ExprKind::Int(_) | ExprKind::Char(_) | ExprKind::Str(_) | ExprKind::Bool(_)
        ) || matches!(&self.kind, ExprKind::List(items) if items.is_empty())
    }

    /// Strips redundant parentheses.
    pub fn unparen(&self) -> &Expr {
        match &self.kind {
            ExprKind::Paren(inner) => inner.unparen(),
            _ => self,
        }
    }
}

impl Pattern {
    pub fn children(&self) -> Vec<&Pattern> {
        match &self.kind {
            PatternKind::Cons(h, t) => vec![h, t],
            PatternKind::Tuple(items) => items.iter().collect(),
            _ => vec![],
        }
    }

    /// Variables bound by this pattern, with their spans, left to right.
    pub fn bound_vars(&self) -> Vec<(&str, Span)> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<(&'a str, Span)>) {
        if let PatternKind::Var(name) = &self.kind {
            out.push((name, self.span));
        }
        for child in self.children() {
            child.collect_vars(out);
        }
    }
}

/// Structural equality ignoring spans, node ids and redundant parentheses.
pub trait SameShape {
    fn same_shape(&self, other: &Self) -> bool;
}

impl SameShape for Expr {
    fn same_shape(&self, other: &Self) -> bool {
        use ExprKind::*;
        let (a, b) = (self.unparen(), other.unparen());
        match (&a.kind, &b.kind) {
            (Var(x), Var(y)) => x == y,
            (Int(x), Int(y)) => x == y,
            (Char(x), Char(y)) => x == y,
            (Str(x), Str(y)) => x == y,
            (Bool(x), Bool(y)) => x == y,
            (App(f1, a1), App(f2, a2)) => f1.same_shape(f2) && a1.same_shape(a2),
            (Infix { op: o1, lhs: l1, rhs: r1 }, Infix { op: o2, lhs: l2, rhs: r2 }) => {
                o1.same_shape(o2) && l1.same_shape(l2) && r1.same_shape(r2)
            }
            (
                If { cond: c1, then_branch: t1, else_branch: e1 },
                If { cond: c2, then_branch: t2, else_branch: e2 },
            ) => c1.same_shape(c2) && t1.same_shape(t2) && e1.same_shape(e2),
            (Lambda { params: p1, body: b1 }, Lambda { params: p2, body: b2 }) => {
                p1.same_shape(p2) && b1.same_shape(b2)
            }
            (Let { bindings: x1, body: b1 }, Let { bindings: x2, body: b2 }) => {
                x1.same_shape(x2) && b1.same_shape(b2)
            }
            (List(x), List(y)) | (Tuple(x), Tuple(y)) => x.same_shape(y),
            (Range { from: f1, to: t1 }, Range { from: f2, to: t2 }) => f1.same_shape(f2) && t1.same_shape(t2),
            _ => false,
        }
    }
}

impl SameShape for Pattern {
    fn same_shape(&self, other: &Self) -> bool {
        use PatternKind::*;
        match (&self.kind, &other.kind) {
            (Var(x), Var(y)) => x == y,
            (Wild, Wild) => true,
            (Cons(h1, t1), Cons(h2, t2)) => h1.same_shape(h2) && t1.same_shape(t2),
            (Tuple(x), Tuple(y)) => x.same_shape(y),
            (Lit(x), Lit(y)) => x == y,
            _ => false,
        }
    }
}

impl SameShape for Binding {
    fn same_shape(&self, other: &Self) -> bool {
        self.name == other.name && self.equations.same_shape(&other.equations)
    }
}

impl SameShape for Equation {
    fn same_shape(&self, other: &Self) -> bool {
        let rhs = match (&self.rhs, &other.rhs) {
            (Rhs::Plain(a), Rhs::Plain(b)) => a.same_shape(b),
            (Rhs::Guarded(a), Rhs::Guarded(b)) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.cond.same_shape(&y.cond) && x.body.same_shape(&y.body))
            }
            _ => false,
        };
        rhs && self.params.same_shape(&other.params) && self.where_bindings.same_shape(&other.where_bindings)
    }
}

impl<T: SameShape> SameShape for Vec<T> {
    fn same_shape(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().zip(other).all(|(a, b)| a.same_shape(b))
    }
}

impl SameShape for Program {
    fn same_shape(&self, other: &Self) -> bool {
        self.bindings.same_shape(&other.bindings)
    }
}

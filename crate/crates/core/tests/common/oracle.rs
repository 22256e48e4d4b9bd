//! A reference Algorithm W, written separately from the constraint solver.
//!
//! It shares only the parser with the library. Types, substitutions,
//! unification, the builtin table, dependency ordering and printing are all
//! independent. Top-level groups are generalised; `let` and `where`
//! bindings are monomorphic.

use chameleon_core::syntax::ast::{Binding, Equation, Expr, ExprKind, Literal, Pattern, PatternKind, Rhs};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Var(u32),
    Con(&'static str),
    Fun(Box<Ty>, Box<Ty>),
    List(Box<Ty>),
    Tuple(Vec<Ty>),
}

fn fun(a: Ty, b: Ty) -> Ty {
    Ty::Fun(Box::new(a), Box::new(b))
}

fn list(a: Ty) -> Ty {
    Ty::List(Box::new(a))
}

const INT: Ty = Ty::Con("Int");
const CHAR: Ty = Ty::Con("Char");
const BOOL: Ty = Ty::Con("Bool");

impl Ty {
    fn free(&self, out: &mut Vec<u32>) {
        match self {
            Ty::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Ty::Con(_) => {}
            Ty::Fun(a, b) => {
                a.free(out);
                b.free(out);
            }
            Ty::List(a) => a.free(out),
            Ty::Tuple(ts) => ts.iter().for_each(|t| t.free(out)),
        }
    }

    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.free(&mut out);
        out
    }

    fn rename(&self, f: &impl Fn(u32) -> Ty) -> Ty {
        match self {
            Ty::Var(v) => f(*v),
            Ty::Con(c) => Ty::Con(c),
            Ty::Fun(a, b) => fun(a.rename(f), b.rename(f)),
            Ty::List(a) => list(a.rename(f)),
            Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| t.rename(f)).collect()),
        }
    }

    /// Printed with variables `a, b, ...` in order of first occurrence.
    pub fn show(&self) -> String {
        let order = self.vars();
        let mut out = String::new();
        self.write(&order, false, &mut out);
        out
    }

    fn write(&self, order: &[u32], left_of_arrow: bool, out: &mut String) {
        match self {
            Ty::Var(v) => {
                let i = order.iter().position(|w| w == v).unwrap();
                out.push((b'a' + (i % 26) as u8) as char);
                if i >= 26 {
                    out.push_str(&(i / 26).to_string());
                }
            }
            Ty::Con(c) => out.push_str(c),
            Ty::Fun(a, b) => {
                if left_of_arrow {
                    out.push('(');
                }
                a.write(order, true, out);
                out.push_str(" -> ");
                b.write(order, false, out);
                if left_of_arrow {
                    out.push(')');
                }
            }
            Ty::List(a) => {
                out.push('[');
                a.write(order, false, out);
                out.push(']');
            }
            Ty::Tuple(ts) => {
                out.push('(');
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    t.write(order, false, out);
                }
                out.push(')');
            }
        }
    }
}

/// Reads a printed type such as `(a -> Bool) -> [a]`. Variables are
/// numbered from `base` so that two parsed types can be kept apart.
pub fn parse_type(text: &str, base: u32) -> Ty {
    let tokens: Vec<String> = {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' {
                toks.push("->".to_string());
                i += 2;
            } else if c.is_alphanumeric() {
                let start = i;
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                toks.push(chars[start..i].iter().collect());
            } else {
                toks.push(c.to_string());
                i += 1;
            }
        }
        toks
    };
    let mut names: Vec<String> = Vec::new();
    let mut pos = 0;
    let t = parse_fun(&tokens, &mut pos, &mut names, base);
    assert_eq!(pos, tokens.len(), "trailing input in type {text}");
    t
}

fn parse_fun(toks: &[String], pos: &mut usize, names: &mut Vec<String>, base: u32) -> Ty {
    let lhs = parse_atom(toks, pos, names, base);
    if toks.get(*pos).map(String::as_str) == Some("->") {
        *pos += 1;
        fun(lhs, parse_fun(toks, pos, names, base))
    } else {
        lhs
    }
}

fn parse_atom(toks: &[String], pos: &mut usize, names: &mut Vec<String>, base: u32) -> Ty {
    let tok = toks[*pos].clone();
    *pos += 1;
    match tok.as_str() {
        "[" => {
            let inner = parse_fun(toks, pos, names, base);
            assert_eq!(toks[*pos], "]");
            *pos += 1;
            list(inner)
        }
        "(" => {
            let mut items = vec![parse_fun(toks, pos, names, base)];
            while toks[*pos] == "," {
                *pos += 1;
                items.push(parse_fun(toks, pos, names, base));
            }
            assert_eq!(toks[*pos], ")");
            *pos += 1;
            if items.len() == 1 {
                items.pop().unwrap()
            } else {
                Ty::Tuple(items)
            }
        }
        "Int" => INT,
        "Char" => CHAR,
        "Bool" => BOOL,
        "Float" => Ty::Con("Float"),
        name => {
            let i = names.iter().position(|n| n == name).unwrap_or_else(|| {
                names.push(name.to_string());
                names.len() - 1
            });
            Ty::Var(base + i as u32)
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Subst(HashMap<u32, Ty>);

impl Subst {
    pub fn apply(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.0.get(v) {
                Some(u) => self.apply(u),
                None => t.clone(),
            },
            Ty::Con(c) => Ty::Con(c),
            Ty::Fun(a, b) => fun(self.apply(a), self.apply(b)),
            Ty::List(a) => list(self.apply(a)),
            Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| self.apply(t)).collect()),
        }
    }

    /// `other` after `self`.
    fn then(&self, other: &Subst) -> Subst {
        let mut out: HashMap<u32, Ty> = self.0.iter().map(|(v, t)| (*v, other.apply(t))).collect();
        for (v, t) in &other.0 {
            out.entry(*v).or_insert_with(|| t.clone());
        }
        Subst(out)
    }
}

/// Most general unifier, or `None` on a clash or an infinite type.
pub fn mgu(a: &Ty, b: &Ty) -> Option<Subst> {
    match (a, b) {
        (Ty::Var(x), Ty::Var(y)) if x == y => Some(Subst::default()),
        (Ty::Var(x), t) | (t, Ty::Var(x)) => {
            if t.vars().contains(x) {
                None
            } else {
                Some(Subst(HashMap::from([(*x, t.clone())])))
            }
        }
        (Ty::Con(x), Ty::Con(y)) => (x == y).then(Subst::default),
        (Ty::Fun(a1, b1), Ty::Fun(a2, b2)) => mgu_all(&[(*a1.clone(), *a2.clone()), (*b1.clone(), *b2.clone())]),
        (Ty::List(x), Ty::List(y)) => mgu(x, y),
        (Ty::Tuple(xs), Ty::Tuple(ys)) if xs.len() == ys.len() => {
            let pairs: Vec<(Ty, Ty)> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
            mgu_all(&pairs)
        }
        _ => None,
    }
}

/// Unifies every pair in turn.
pub fn mgu_all(pairs: &[(Ty, Ty)]) -> Option<Subst> {
    let mut s = Subst::default();
    for (a, b) in pairs {
        let step = mgu(&s.apply(a), &s.apply(b))?;
        s = s.then(&step);
    }
    Some(s)
}

#[derive(Clone, Debug)]
struct Scheme {
    bound: Vec<u32>,
    body: Ty,
}

fn builtins() -> HashMap<&'static str, Scheme> {
    let a = Ty::Var(0);
    let b = Ty::Var(1);
    let poly = |body: Ty| Scheme { bound: body.vars(), body };
    let mono = |body: Ty| Scheme { bound: vec![], body };
    let mut env = HashMap::new();
    for op in ["+", "-", "*", "/", "div", "mod"] {
        env.insert(op, mono(fun(INT, fun(INT, INT))));
    }
    for op in ["==", "/=", "<", "<=", ">", ">="] {
        env.insert(op, poly(fun(a.clone(), fun(a.clone(), BOOL))));
    }
    for op in ["&&", "||"] {
        env.insert(op, mono(fun(BOOL, fun(BOOL, BOOL))));
    }
    env.insert("++", poly(fun(list(a.clone()), fun(list(a.clone()), list(a.clone())))));
    env.insert(":", poly(fun(a.clone(), fun(list(a.clone()), list(a.clone())))));
    env.insert("filter", poly(fun(fun(a.clone(), BOOL), fun(list(a.clone()), list(a.clone())))));
    env.insert("map", poly(fun(fun(a.clone(), b.clone()), fun(list(a.clone()), list(b.clone())))));
    env.insert("fst", poly(fun(Ty::Tuple(vec![a.clone(), b.clone()]), a.clone())));
    env.insert("snd", poly(fun(Ty::Tuple(vec![a.clone(), b.clone()]), b.clone())));
    env.insert("not", mono(fun(BOOL, BOOL)));
    env.insert("even", mono(fun(INT, BOOL)));
    env.insert("odd", mono(fun(INT, BOOL)));
    env.insert("otherwise", mono(BOOL));
    env
}

#[derive(Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every top-level binding with its printed type, in source order.
    WellTyped(Vec<(String, String)>),
    /// Names of the top-level bindings whose group failed.
    IllTyped(Vec<String>),
}

#[derive(Clone, Default)]
struct Env {
    schemes: HashMap<String, Scheme>,
}

impl Env {
    fn free(&self, s: &Subst) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for sc in self.schemes.values() {
            for v in s.apply(&sc.body).vars() {
                if !sc.bound.contains(&v) {
                    out.insert(v);
                }
            }
        }
        out
    }
}

struct W {
    next: u32,
}

type R<T> = Option<T>;

impl W {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next)
    }

    fn instantiate(&mut self, sc: &Scheme) -> Ty {
        let map: HashMap<u32, Ty> = sc.bound.iter().map(|v| (*v, self.fresh())).collect();
        sc.body.rename(&|v| map.get(&v).cloned().unwrap_or(Ty::Var(v)))
    }

    fn lookup(&mut self, env: &Env, name: &str) -> Ty {
        if let Some(sc) = env.schemes.get(name) {
            return self.instantiate(&sc.clone());
        }
        let sc = builtins().remove(name).unwrap_or_else(|| panic!("oracle: unbound {name}"));
        self.instantiate(&sc)
    }

    /// Unifies `a` and `b` under `s`, returning the extended substitution.
    fn unify(&self, s: Subst, a: &Ty, b: &Ty) -> R<Subst> {
        let step = mgu(&s.apply(a), &s.apply(b))?;
        Some(s.then(&step))
    }

    fn expr(&mut self, env: &Env, s: Subst, e: &Expr) -> R<(Subst, Ty)> {
        match &e.kind {
            ExprKind::Var(x) => Some((s, self.lookup(env, x))),
            ExprKind::Int(_) => Some((s, INT)),
            ExprKind::Char(_) => Some((s, CHAR)),
            ExprKind::Str(_) => Some((s, list(CHAR))),
            ExprKind::Bool(_) => Some((s, BOOL)),
            ExprKind::Paren(inner) => self.expr(env, s, inner),
            ExprKind::App(f, a) => self.apply(env, s, f, &[a]),
            ExprKind::Infix { op, lhs, rhs } => self.apply(env, s, op, &[lhs, rhs]),
            ExprKind::If { cond, then_branch, else_branch } => {
                let (s, tc) = self.expr(env, s, cond)?;
                let s = self.unify(s, &tc, &BOOL)?;
                let (s, tt) = self.expr(env, s, then_branch)?;
                let (s, te) = self.expr(env, s, else_branch)?;
                let s = self.unify(s, &tt, &te)?;
                Some((s, tt))
            }
            ExprKind::Lambda { params, body } => {
                let mut inner = env.clone();
                let mut s = s;
                let mut tys = Vec::new();
                for p in params {
                    let (s2, t) = self.pattern(&mut inner, s, p)?;
                    s = s2;
                    tys.push(t);
                }
                let (s, tb) = self.expr(&inner, s, body)?;
                Some((s, tys.into_iter().rev().fold(tb, |acc, t| fun(t, acc))))
            }
            ExprKind::Let { bindings, body } => {
                let (s, inner) = self.local_group(env, s, bindings)?;
                self.expr(&inner, s, body)
            }
            ExprKind::List(items) => {
                let elem = self.fresh();
                let mut s = s;
                for item in items {
                    let (s2, t) = self.expr(env, s, item)?;
                    s = self.unify(s2, &t, &elem)?;
                }
                Some((s, list(elem)))
            }
            ExprKind::Range { from, to } => {
                let (s, tf) = self.expr(env, s, from)?;
                let (s, tt) = self.expr(env, s, to)?;
                let s = self.unify(s, &tf, &tt)?;
                Some((s, list(tf)))
            }
            ExprKind::Tuple(items) => {
                let mut s = s;
                let mut tys = Vec::new();
                for item in items {
                    let (s2, t) = self.expr(env, s, item)?;
                    s = s2;
                    tys.push(t);
                }
                Some((s, Ty::Tuple(tys)))
            }
        }
    }

    fn apply(&mut self, env: &Env, s: Subst, f: &Expr, args: &[&Expr]) -> R<(Subst, Ty)> {
        let (mut s, mut tf) = self.expr(env, s, f)?;
        for a in args {
            let (s2, ta) = self.expr(env, s, a)?;
            let res = self.fresh();
            s = self.unify(s2, &tf, &fun(ta, res.clone()))?;
            tf = res;
        }
        Some((s, tf))
    }

    fn pattern(&mut self, env: &mut Env, s: Subst, p: &Pattern) -> R<(Subst, Ty)> {
        match &p.kind {
            PatternKind::Var(x) => {
                let t = self.fresh();
                env.schemes.insert(x.clone(), Scheme { bound: vec![], body: t.clone() });
                Some((s, t))
            }
            PatternKind::Wild => Some((s, self.fresh())),
            PatternKind::Lit(Literal::Int(_)) => Some((s, INT)),
            PatternKind::Lit(Literal::Char(_)) => Some((s, CHAR)),
            PatternKind::Lit(Literal::Bool(_)) => Some((s, BOOL)),
            PatternKind::Lit(Literal::Nil) => Some((s, list(self.fresh()))),
            PatternKind::Cons(h, t) => {
                let (s, th) = self.pattern(env, s, h)?;
                let (s, tt) = self.pattern(env, s, t)?;
                let s = self.unify(s, &list(th), &tt)?;
                Some((s, tt))
            }
            PatternKind::Tuple(items) => {
                let mut s = s;
                let mut tys = Vec::new();
                for item in items {
                    let (s2, t) = self.pattern(env, s, item)?;
                    s = s2;
                    tys.push(t);
                }
                Some((s, Ty::Tuple(tys)))
            }
        }
    }

    fn equation(&mut self, env: &Env, s: Subst, eq: &Equation) -> R<(Subst, Ty)> {
        let mut inner = env.clone();
        let mut s = s;
        let mut params = Vec::new();
        for p in &eq.params {
            let (s2, t) = self.pattern(&mut inner, s, p)?;
            s = s2;
            params.push(t);
        }
        let (s, inner) = self.local_group(&inner, s, &eq.where_bindings)?;
        let result = self.fresh();
        let mut s = s;
        match &eq.rhs {
            Rhs::Plain(body) => {
                let (s2, t) = self.expr(&inner, s, body)?;
                s = self.unify(s2, &t, &result)?;
            }
            Rhs::Guarded(guards) => {
                for g in guards {
                    let (s2, tc) = self.expr(&inner, s, &g.cond)?;
                    let s3 = self.unify(s2, &tc, &BOOL)?;
                    let (s4, tb) = self.expr(&inner, s3, &g.body)?;
                    s = self.unify(s4, &tb, &result)?;
                }
            }
        }
        Some((s, params.into_iter().rev().fold(result, |acc, t| fun(t, acc))))
    }

    fn binding(&mut self, env: &Env, s: Subst, b: &Binding, own: &Ty) -> R<Subst> {
        let mut s = s;
        for eq in &b.equations {
            let (s2, t) = self.equation(env, s, eq)?;
            s = self.unify(s2, &t, own)?;
        }
        Some(s)
    }

    /// Mutually recursive, monomorphic local bindings.
    fn local_group(&mut self, env: &Env, s: Subst, bindings: &[Binding]) -> R<(Subst, Env)> {
        let mut inner = env.clone();
        let own: Vec<Ty> = bindings.iter().map(|_| self.fresh()).collect();
        for (b, t) in bindings.iter().zip(&own) {
            inner.schemes.insert(b.name.clone(), Scheme { bound: vec![], body: t.clone() });
        }
        let mut s = s;
        for (b, t) in bindings.iter().zip(&own) {
            s = self.binding(&inner, s, b, t)?;
        }
        Some((s, inner))
    }
}

/// Names that `b` uses without binding them itself.
fn free_names(b: &Binding) -> BTreeSet<String> {
    fn expr(e: &Expr, bound: &[String], out: &mut BTreeSet<String>) {
        match &e.kind {
            ExprKind::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            ExprKind::Lambda { params, body } => {
                let mut inner = bound.to_vec();
                params.iter().for_each(|p| pattern_names(p, &mut inner));
                expr(body, &inner, out);
            }
            ExprKind::Let { bindings, body } => {
                let mut inner = bound.to_vec();
                inner.extend(bindings.iter().map(|b| b.name.clone()));
                for b in bindings {
                    binding(b, &inner, out);
                }
                expr(body, &inner, out);
            }
            _ => e.children().into_iter().for_each(|c| expr(c, bound, out)),
        }
    }
    fn pattern_names(p: &Pattern, out: &mut Vec<String>) {
        match &p.kind {
            PatternKind::Var(x) => out.push(x.clone()),
            PatternKind::Cons(h, t) => {
                pattern_names(h, out);
                pattern_names(t, out);
            }
            PatternKind::Tuple(items) => items.iter().for_each(|i| pattern_names(i, out)),
            _ => {}
        }
    }
    fn binding(b: &Binding, bound: &[String], out: &mut BTreeSet<String>) {
        for eq in &b.equations {
            let mut inner = bound.to_vec();
            eq.params.iter().for_each(|p| pattern_names(p, &mut inner));
            inner.extend(eq.where_bindings.iter().map(|w| w.name.clone()));
            match &eq.rhs {
                Rhs::Plain(body) => expr(body, &inner, out),
                Rhs::Guarded(gs) => gs.iter().for_each(|g| {
                    expr(&g.cond, &inner, out);
                    expr(&g.body, &inner, out);
                }),
            }
            for w in &eq.where_bindings {
                binding(w, &inner, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    binding(b, std::slice::from_ref(&b.name), &mut out);
    out.insert(b.name.clone());
    out
}

/// Groups of mutually dependent bindings, each after the groups it uses.
fn dependency_groups(bindings: &[Binding]) -> Vec<Vec<usize>> {
    let n = bindings.len();
    let index: BTreeMap<&str, usize> = bindings.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
    let mut reach = vec![vec![false; n]; n];
    for (i, b) in bindings.iter().enumerate() {
        for name in free_names(b) {
            if let Some(&j) = index.get(name.as_str()) {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut placed = vec![false; n];
    while placed.iter().any(|p| !p) {
        // Pick any unplaced binding all of whose dependencies outside its own
        // group are already placed.
        let next = (0..n)
            .filter(|&i| !placed[i])
            .find(|&i| (0..n).all(|j| !reach[i][j] || placed[j] || reach[j][i]))
            .expect("the dependency relation is a preorder");
        let group: Vec<usize> = (0..n).filter(|&j| j == next || (reach[next][j] && reach[j][next])).collect();
        group.iter().for_each(|&j| placed[j] = true);
        groups.push(group);
    }
    groups
}

/// Infers every top-level binding of a parsed program.
pub fn infer_program(bindings: &[Binding]) -> Verdict {
    let mut w = W { next: 1000 };
    let mut env = Env::default();
    let mut failed = Vec::new();
    let mut types: BTreeMap<usize, String> = BTreeMap::new();
    for group in dependency_groups(bindings) {
        let own: Vec<Ty> = group.iter().map(|_| w.fresh()).collect();
        let mut inner = env.clone();
        for (&i, t) in group.iter().zip(&own) {
            inner.schemes.insert(bindings[i].name.clone(), Scheme { bound: vec![], body: t.clone() });
        }
        let mut s = Some(Subst::default());
        for (&i, t) in group.iter().zip(&own) {
            s = s.and_then(|s| w.binding(&inner, s, &bindings[i], t));
        }
        match s {
            Some(s) => {
                let fixed = env.free(&s);
                for (&i, t) in group.iter().zip(&own) {
                    let body = s.apply(t);
                    let bound = body.vars().into_iter().filter(|v| !fixed.contains(v)).collect();
                    types.insert(i, body.show());
                    env.schemes.insert(bindings[i].name.clone(), Scheme { bound, body });
                }
            }
            None => {
                for &i in &group {
                    failed.push(bindings[i].name.clone());
                    // Dependents still get analysed, against an unconstrained type.
                    let t = w.fresh();
                    let bound = t.vars();
                    env.schemes.insert(bindings[i].name.clone(), Scheme { bound, body: t });
                }
            }
        }
    }
    if failed.is_empty() {
        Verdict::WellTyped(types.into_iter().map(|(i, t)| (bindings[i].name.clone(), t)).collect())
    } else {
        failed.sort_by_key(|name| bindings.iter().position(|b| &b.name == name));
        Verdict::IllTyped(failed)
    }
}

/// Convenience wrapper over [`infer_program`] for source text.
pub fn infer_source(source: &str) -> Verdict {
    let program = chameleon_core::syntax::parse_program(source).expect("oracle input parses");
    infer_program(&program.bindings)
}

/// Whether every equation in `pairs` can hold at once.
pub fn satisfiable(pairs: &[(Ty, Ty)]) -> bool {
    mgu_all(pairs).is_some()
}

/// Converts a library type into an oracle type.
pub fn from_core(t: &chameleon_core::types::Type) -> Ty {
    use chameleon_core::types::{TyCon, Type};
    match t {
        Type::Var(v) => Ty::Var(v.0),
        Type::Con(TyCon::Int) => INT,
        Type::Con(TyCon::Char) => CHAR,
        Type::Con(TyCon::Bool) => BOOL,
        Type::Con(TyCon::Float) => Ty::Con("Float"),
        Type::Fun(a, b) => fun(from_core(a), from_core(b)),
        Type::List(a) => list(from_core(a)),
        Type::Tuple(ts) => Ty::Tuple(ts.iter().map(from_core).collect()),
    }
}

/// Whether two printed types, with their variables kept apart, unify.
pub fn printed_types_unify(a: &str, b: &str) -> bool {
    mgu(&parse_type(a, 0), &parse_type(b, 10_000)).is_some()
}

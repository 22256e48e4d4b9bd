//! The type language: variables, base constructors, functions, lists and tuples.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TVar(pub u32);

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TyCon {
    Int,
    Char,
    Bool,
    Float,
}

impl TyCon {
    pub fn name(self) -> &'static str {
        match self {
            TyCon::Int => "Int",
            TyCon::Char => "Char",
            TyCon::Bool => "Bool",
            TyCon::Float => "Float",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(TVar),
    Con(TyCon),
    Fun(Box<Type>, Box<Type>),
    List(Box<Type>),
    /// Always has at least two components.
    Tuple(Vec<Type>),
}

impl Type {
    pub const INT: Type = Type::Con(TyCon::Int);
    pub const CHAR: Type = Type::Con(TyCon::Char);
    pub const BOOL: Type = Type::Con(TyCon::Bool);

    pub fn var(id: u32) -> Type {
        Type::Var(TVar(id))
    }

    pub fn fun(param: Type, result: Type) -> Type {
        Type::Fun(Box::new(param), Box::new(result))
    }

    /// `p1 -> p2 -> ... -> result`.
    pub fn curried(params: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let params: Vec<Type> = params.into_iter().collect();
        params.into_iter().rev().fold(result, |acc, p| Type::fun(p, acc))
    }

    pub fn list(elem: Type) -> Type {
        Type::List(Box::new(elem))
    }

    pub fn string() -> Type {
        Type::list(Type::CHAR)
    }

    /// Free variables in first-occurrence order, without duplicates.
    pub fn vars(&self) -> Vec<TVar> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<TVar>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Type::Con(_) => {}
            Type::Fun(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Type::List(t) => t.collect_vars(out),
            Type::Tuple(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, v: TVar) -> bool {
        match self {
            Type::Var(w) => *w == v,
            Type::Con(_) => false,
            Type::Fun(a, b) => a.contains_var(v) || b.contains_var(v),
            Type::List(t) => t.contains_var(v),
            Type::Tuple(ts) => ts.iter().any(|t| t.contains_var(v)),
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.vars().is_empty()
    }

    /// Replaces variables according to `f`; variables mapped to `None` stay.
    pub fn map_vars(&self, f: &mut impl FnMut(TVar) -> Option<Type>) -> Type {
        match self {
            Type::Var(v) => f(*v).unwrap_or(Type::Var(*v)),
            Type::Con(c) => Type::Con(*c),
            Type::Fun(a, b) => Type::fun(a.map_vars(f), b.map_vars(f)),
            Type::List(t) => Type::list(t.map_vars(f)),
            Type::Tuple(ts) => Type::Tuple(ts.iter().map(|t| t.map_vars(f)).collect()),
        }
    }

    /// Renames variables to `t0, t1, ...` in first-occurrence order, so that
    /// alpha-equivalent types compare equal.
    pub fn canonical(&self) -> Type {
        let order: BTreeMap<TVar, u32> = self.vars().into_iter().zip(0..).collect();
        self.map_vars(&mut |v| Some(Type::var(order[&v])))
    }

    /// Display form with variables named `a, b, c, ...` in first-occurrence order.
    pub fn display(&self) -> String {
        let names: BTreeMap<TVar, String> =
            self.vars().into_iter().enumerate().map(|(i, v)| (v, var_name(i))).collect();
        let mut out = String::new();
        write_type(self, &mut |v| names[&v].clone(), false, &mut out);
        out
    }
}

/// Displays several types with one shared variable naming, in
/// first-occurrence order across the list.
pub fn display_jointly(types: &[&Type]) -> Vec<String> {
    let mut order: Vec<TVar> = Vec::new();
    for t in types {
        for v in t.vars() {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    let names: BTreeMap<TVar, String> = order.into_iter().enumerate().map(|(i, v)| (v, var_name(i))).collect();
    types
        .iter()
        .map(|t| {
            let mut out = String::new();
            write_type(t, &mut |v| names[&v].clone(), false, &mut out);
            out
        })
        .collect()
}

/// `a`..`z`, then `a1`..`z1`, and so on.
pub fn var_name(index: usize) -> String {
    let letter = (b'a' + (index % 26) as u8) as char;
    match index / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

fn write_type(t: &Type, name: &mut impl FnMut(TVar) -> String, fun_lhs: bool, out: &mut String) {
    match t {
        Type::Var(v) => out.push_str(&name(*v)),
        Type::Con(c) => out.push_str(c.name()),
        Type::Fun(a, b) => {
            if fun_lhs {
                out.push('(');
            }
            write_type(a, name, true, out);
            out.push_str(" -> ");
            write_type(b, name, false, out);
            if fun_lhs {
                out.push(')');
            }
        }
        Type::List(e) => {
            out.push('[');
            write_type(e, name, false, out);
            out.push(']');
        }
        Type::Tuple(ts) => {
            out.push('(');
            for (i, e) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_type(e, name, false, out);
            }
            out.push(')');
        }
    }
}

/// Raw form with solver variable names, for debugging output.
impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_type(self, &mut |v| v.to_string(), false, &mut out);
        f.write_str(&out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeScheme {
    pub quantified: Vec<TVar>,
    pub body: Type,
}

impl TypeScheme {
    pub fn mono(body: Type) -> Self {
        TypeScheme { quantified: Vec::new(), body }
    }

    /// Quantifies every free variable of `body`.
    pub fn generalize(body: Type) -> Self {
        TypeScheme { quantified: body.vars(), body }
    }

    pub fn instantiate(&self, supply: &mut Supply) -> Type {
        let fresh: BTreeMap<TVar, Type> = self.quantified.iter().map(|v| (*v, supply.fresh_type())).collect();
        self.body.map_vars(&mut |v| fresh.get(&v).cloned())
    }

    /// Printed without the quantifier, e.g. `(a -> Bool) -> [a] -> [a]`.
    pub fn display(&self) -> String {
        self.body.display()
    }
}

/// Source of fresh type variables for one analysis run.
#[derive(Clone, Debug, Default)]
pub struct Supply {
    next: u32,
}

impl Supply {
    pub fn new() -> Self {
        Supply::default()
    }

    pub fn starting_at(next: u32) -> Self {
        Supply { next }
    }

    pub fn fresh(&mut self) -> TVar {
        let v = TVar(self.next);
        self.next += 1;
        v
    }

    pub fn fresh_type(&mut self) -> Type {
        Type::Var(self.fresh())
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

//! Types of the predefined functions and operators.

use crate::types::{Type, TypeScheme};
use std::collections::BTreeMap;

fn a() -> Type {
    Type::var(0)
}

fn b() -> Type {
    Type::var(1)
}

fn poly(body: Type) -> TypeScheme {
    TypeScheme::generalize(body)
}

/// Every builtin name with its type scheme. Quantified variables are
/// numbered from zero within each scheme.
pub fn builtin_env() -> BTreeMap<String, TypeScheme> {
    let int_op = Type::curried([Type::INT, Type::INT], Type::INT);
    let cmp = Type::curried([a(), a()], Type::BOOL);
    let bool_op = Type::curried([Type::BOOL, Type::BOOL], Type::BOOL);

    let mut env = BTreeMap::new();
    let mut add = |name: &str, scheme: TypeScheme| {
        env.insert(name.to_string(), scheme);
    };
    for op in ["+", "-", "*", "/", "div", "mod"] {
        add(op, TypeScheme::mono(int_op.clone()));
    }
    for op in ["==", "/=", "<", "<=", ">", ">="] {
        add(op, poly(cmp.clone()));
    }
    for op in ["&&", "||"] {
        add(op, TypeScheme::mono(bool_op.clone()));
    }
    add("++", poly(Type::curried([Type::list(a()), Type::list(a())], Type::list(a()))));
    add(":", poly(Type::curried([a(), Type::list(a())], Type::list(a()))));
    add(
        "filter",
        poly(Type::curried([Type::fun(a(), Type::BOOL), Type::list(a())], Type::list(a()))),
    );
    add("map", poly(Type::curried([Type::fun(a(), b()), Type::list(a())], Type::list(b()))));
    add("fst", poly(Type::fun(Type::Tuple(vec![a(), b()]), a())));
    add("snd", poly(Type::fun(Type::Tuple(vec![a(), b()]), b())));
    add("not", TypeScheme::mono(Type::fun(Type::BOOL, Type::BOOL)));
    add("even", TypeScheme::mono(Type::fun(Type::INT, Type::BOOL)));
    add("odd", TypeScheme::mono(Type::fun(Type::INT, Type::BOOL)));
    add("otherwise", TypeScheme::mono(Type::BOOL));
    env
}

//! Unification, satisfiability and the minimal/maximal subset searches used
//! for error slicing.
//!
//! Functions taking a constraint list and constraint ids expect the list to
//! be indexed by id, as produced by [`crate::constrain::generate`].

use crate::constrain::LabeledConstraint;
use crate::par::{self, Strategy};
use crate::types::{TVar, Type};
use std::collections::BTreeMap;
use thiserror::Error;

/// An idempotent substitution from type variables to types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<TVar, Type>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("cannot match {0} with {1}")]
    ConstructorClash(Type, Type),
    #[error("{0} occurs in {1}")]
    OccursCheck(TVar, Type),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("constraint set is satisfiable")]
    NotUnsat,
    #[error("seed constraints are unsatisfiable")]
    SeedUnsat,
}

/// `solve_all` failed while adding the constraint with this id.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unsatisfiable at constraint {failed}: {cause}")]
pub struct Unsat {
    pub failed: usize,
    pub cause: UnifyError,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn get(&self, v: TVar) -> Option<&Type> {
        self.map.get(&v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TVar, &Type)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &Type) -> Type {
        t.map_vars(&mut |v| self.map.get(&v).cloned())
    }

    /// Whether the substitution is in solved form: no bound variable occurs
    /// in any bound type.
    pub fn is_idempotent(&self) -> bool {
        self.map.values().all(|t| t.vars().iter().all(|v| !self.map.contains_key(v)))
    }

    fn bind(&mut self, v: TVar, t: Type) {
        for value in self.map.values_mut() {
            if value.contains_var(v) {
                *value = value.map_vars(&mut |w| (w == v).then(|| t.clone()));
            }
        }
        self.map.insert(v, t);
    }

    /// Extends `self` in place so that `a` and `b` become equal. On failure
    /// `self` may hold a partial extension.
    fn unify_in_place(&mut self, a: &Type, b: &Type) -> Result<(), UnifyError> {
        let (a, b) = (self.apply(a), self.apply(b));
        match (&a, &b) {
            (Type::Var(x), Type::Var(y)) if x == y => Ok(()),
            (Type::Var(x), t) | (t, Type::Var(x)) => {
                if t.contains_var(*x) {
                    return Err(UnifyError::OccursCheck(*x, t.clone()));
                }
                self.bind(*x, t.clone());
                Ok(())
            }
            (Type::Con(c), Type::Con(d)) if c == d => Ok(()),
            (Type::Fun(a1, r1), Type::Fun(a2, r2)) => {
                self.unify_in_place(a1, a2)?;
                self.unify_in_place(r1, r2)
            }
            (Type::List(x), Type::List(y)) => self.unify_in_place(x, y),
            (Type::Tuple(xs), Type::Tuple(ys)) if xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.unify_in_place(x, y))
            }
            _ => Err(UnifyError::ConstructorClash(a, b)),
        }
    }

    /// Tries to add one equation, leaving `self` untouched on failure.
    pub fn try_extend(&mut self, a: &Type, b: &Type) -> Result<(), UnifyError> {
        let mut next = self.clone();
        next.unify_in_place(a, b)?;
        *self = next;
        Ok(())
    }
}

/// Most general extension of `s` that equates `a` and `b`.
pub fn unify(a: &Type, b: &Type, s: &Substitution) -> Result<Substitution, UnifyError> {
    let mut out = s.clone();
    out.unify_in_place(a, b)?;
    Ok(out)
}

/// Whether two types, with their variables renamed apart, have a common
/// instance. Used to compare types recovered from different solutions.
pub fn types_unify(a: &Type, b: &Type) -> bool {
    let offset = a.vars().iter().map(|v| v.0 + 1).max().unwrap_or(0);
    let b = b.map_vars(&mut |v| Some(Type::var(v.0 + offset)));
    unify(a, &b, &Substitution::new()).is_ok()
}

/// Folds unification over `cs` in order.
pub fn solve_all<'a>(cs: impl IntoIterator<Item = &'a LabeledConstraint>) -> Result<Substitution, Unsat> {
    let mut s = Substitution::new();
    for c in cs {
        s.unify_in_place(&c.lhs, &c.rhs).map_err(|cause| Unsat { failed: c.id, cause })?;
    }
    Ok(s)
}

pub fn is_satisfiable<'a>(cs: impl IntoIterator<Item = &'a LabeledConstraint>) -> bool {
    solve_all(cs).is_ok()
}

fn subset<'a>(ids: &'a [usize], cs: &'a [LabeledConstraint]) -> impl Iterator<Item = &'a LabeledConstraint> + 'a {
    ids.iter().map(move |&i| {
        debug_assert_eq!(cs[i].id, i);
        &cs[i]
    })
}

/// Solves the constraints named by `ids`.
pub fn solve_ids(ids: &[usize], cs: &[LabeledConstraint]) -> Result<Substitution, Unsat> {
    solve_all(subset(ids, cs))
}

pub fn is_satisfiable_ids(ids: &[usize], cs: &[LabeledConstraint]) -> bool {
    solve_ids(ids, cs).is_ok()
}

/// Deletion-based search for a minimal unsatisfiable subset: constraints are
/// visited from the highest id down and dropped whenever the rest stays
/// unsatisfiable. The result is sorted by id.
pub fn find_mus(cs: &[LabeledConstraint]) -> Result<Vec<usize>, SolveError> {
    let mut current: Vec<usize> = (0..cs.len()).collect();
    if is_satisfiable_ids(&current, cs) {
        return Err(SolveError::NotUnsat);
    }
    for id in (0..cs.len()).rev() {
        let trial: Vec<usize> = current.iter().copied().filter(|&c| c != id).collect();
        if !is_satisfiable_ids(&trial, cs) {
            current = trial;
        }
    }
    Ok(current)
}

/// Greedily extends `seed` with members of `pool` in ascending id order,
/// keeping each one that preserves satisfiability. Returns the grown set in
/// ascending order together with its solution.
pub fn grow_mss(seed: &[usize], pool: &[usize], cs: &[LabeledConstraint]) -> Result<(Vec<usize>, Substitution), SolveError> {
    let mut s = solve_ids(seed, cs).map_err(|_| SolveError::SeedUnsat)?;
    let mut members: Vec<usize> = seed.to_vec();
    let mut pool: Vec<usize> = pool.iter().copied().filter(|p| !seed.contains(p)).collect();
    pool.sort_unstable();
    pool.dedup();
    for id in pool {
        if s.try_extend(&cs[id].lhs, &cs[id].rhs).is_ok() {
            members.push(id);
        }
    }
    members.sort_unstable();
    Ok((members, s))
}

/// The solution's view of `v`, with variables renamed to canonical order
/// (printed as `a`, `b`, ... by [`Type::display`]).
pub fn recover_type(v: TVar, solution: &Substitution) -> Type {
    solution.apply(&Type::Var(v)).canonical()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberSlice {
    /// The MUS member left out of this subset.
    pub constraint: usize,
    pub mss: Vec<usize>,
    pub solution: Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceResult {
    /// Minimal unsatisfiable subset, ascending.
    pub mus: Vec<usize>,
    /// One entry per MUS member, in the order of `mus`.
    pub per_member: Vec<MemberSlice>,
}

impl SliceResult {
    /// Constraints outside the MUS, ascending.
    pub fn background(&self, total: usize) -> Vec<usize> {
        (0..total).filter(|i| self.mus.binary_search(i).is_err()).collect()
    }
}

pub fn slice(cs: &[LabeledConstraint]) -> Result<SliceResult, SolveError> {
    slice_with(cs, Strategy::default())
}

/// Finds a MUS and, for each member `c`, grows `mus \ {c}` over the
/// remaining constraints.
pub fn slice_with(cs: &[LabeledConstraint], strategy: Strategy) -> Result<SliceResult, SolveError> {
    let mus = find_mus(cs)?;
    let pool: Vec<usize> = (0..cs.len()).filter(|i| mus.binary_search(i).is_err()).collect();
    let per_member = par::map(strategy, &mus, |&c| {
        let seed: Vec<usize> = mus.iter().copied().filter(|&m| m != c).collect();
        let (mss, solution) = grow_mss(&seed, &pool, cs).expect("a proper subset of a MUS is satisfiable");
        MemberSlice { constraint: c, mss, solution }
    });
    Ok(SliceResult { mus, per_member })
}

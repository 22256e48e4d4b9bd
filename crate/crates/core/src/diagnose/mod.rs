//! Turning an error slice into candidate expressions, possible types,
//! deduction steps and explanations.

mod chain;
mod explain;

pub use chain::build_chain;
pub use explain::explain;

use crate::constrain::{Env, IdentRole, IdentSite, LabeledConstraint, NameSource, VarMap};
use crate::par::{self, Strategy};
use crate::solve::{grow_mss, recover_type, types_unify, unify, SliceResult, Substitution};
use crate::span::{SourceText, Span};
use crate::types::{display_jointly, TVar, Type};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedType {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PossibleType {
    #[serde(rename = "type")]
    pub printed: String,
    pub locations: Vec<Span>,
    /// The type itself. Variables shared with the other possible type of
    /// the same candidate denote the same unknown.
    #[serde(skip)]
    pub ty: Type,
    /// Index of the step whose split produced the location group.
    #[serde(skip)]
    pub source_split: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeductionStep {
    pub index: usize,
    #[serde(skip)]
    pub constraint_id: usize,
    pub outlined: [Span; 2],
    pub explanation: String,
    pub group_a: Vec<Span>,
    pub group_b: Vec<Span>,
    pub type_a: String,
    pub type_b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateExpression {
    pub name: String,
    pub span: Span,
    pub possible_types: Vec<PossibleType>,
    pub steps: Vec<DeductionStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TypeErrorReport {
    pub group: String,
    pub error_statement: String,
    pub error_locations: Vec<Span>,
    pub default_candidate: usize,
    pub candidates: Vec<CandidateExpression>,
    pub relevant_types: Vec<NamedType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagnoseError {
    #[error("no candidate expression found for a non-empty error slice")]
    NoCandidates,
    #[error("the error slice is empty")]
    EmptySlice,
}

/// Everything known about one erroneous binding group.
pub struct GroupFailure<'a> {
    pub group: &'a str,
    pub constraints: &'a [LabeledConstraint],
    pub varmap: &'a VarMap,
    pub slice: &'a SliceResult,
    pub env: &'a Env,
    pub source: &'a SourceText,
}

/// Union of the spans of the MUS constraints, sorted and without duplicates.
pub fn error_locations(sr: &SliceResult, cs: &[LabeledConstraint]) -> Vec<Span> {
    let mut spans: Vec<Span> = sr.mus.iter().flat_map(|&id| [cs[id].lhs_span, cs[id].rhs_span]).collect();
    spans.sort();
    spans.dedup();
    spans
}

/// A candidate before steps are attached.
#[derive(Clone, Debug)]
struct Found {
    name: String,
    span: Span,
    /// The conflicting pair, most frequent first.
    pair: (Type, Type),
    target: Target,
}

/// What a candidate's type is read from on each side of a split.
#[derive(Clone, Debug)]
enum Target {
    /// Type variables of every site of the identifier.
    Vars(Vec<TVar>),
    /// Both sides of one constraint, used when no identifier conflicts.
    Constraint,
}

fn type_size(t: &Type) -> usize {
    match t {
        Type::Var(_) | Type::Con(_) => 1,
        Type::Fun(a, b) => 1 + type_size(a) + type_size(b),
        Type::List(e) => 1 + type_size(e),
        Type::Tuple(ts) => 1 + ts.iter().map(type_size).sum::<usize>(),
    }
}

/// The first non-unifiable pair among `types`, ordered by how often each type
/// occurs and then by first appearance.
fn conflicting_pair(types: &[Type]) -> Option<(Type, Type)> {
    let mut tally: Vec<(Type, usize, usize)> = Vec::new();
    for (i, t) in types.iter().enumerate() {
        match tally.iter_mut().find(|(u, _, _)| u == t) {
            Some(entry) => entry.1 += 1,
            None => tally.push((t.clone(), 1, i)),
        }
    }
    tally.sort_by_key(|(_, count, first)| (std::cmp::Reverse(*count), *first));
    for i in 0..tally.len() {
        for j in i + 1..tally.len() {
            if !types_unify(&tally[i].0, &tally[j].0) {
                return Some((tally[i].0.clone(), tally[j].0.clone()));
            }
        }
    }
    None
}

/// Identifiers that take non-unifiable types under different MUS members'
/// solutions, one per name, sorted by the span of their binding occurrence.
pub fn enumerate_candidates(sr: &SliceResult, vm: &VarMap) -> Vec<(String, Span, (Type, Type))> {
    find_identifiers(sr, vm).into_iter().map(|f| (f.name, f.span, f.pair)).collect()
}

fn find_identifiers(sr: &SliceResult, vm: &VarMap) -> Vec<Found> {
    let mut by_key: BTreeMap<(String, Span), Vec<&IdentSite>> = BTreeMap::new();
    for site in vm.idents.iter().filter(|s| s.source.is_user()) {
        by_key.entry((site.name.clone(), site.binder)).or_default().push(site);
    }
    let mut found: BTreeMap<String, Found> = BTreeMap::new();
    for ((name, binder), mut sites) in by_key {
        sites.sort_by_key(|s| (s.role != IdentRole::Binder, s.span));
        let pair = sites.iter().find_map(|site| {
            let types: Vec<Type> = sr.per_member.iter().map(|m| recover_type(site.var, &m.solution)).collect();
            conflicting_pair(&types)
        });
        let Some(pair) = pair else { continue };
        let mut vars: Vec<TVar> = sites.iter().map(|s| s.var).collect();
        vars.dedup();
        let candidate = Found { name: name.clone(), span: binder, pair, target: Target::Vars(vars) };
        match found.get(&name) {
            Some(existing) if existing.span <= binder => {}
            _ => {
                found.insert(name, candidate);
            }
        }
    }
    let mut out: Vec<Found> = found.into_values().collect();
    out.sort_by(|a, b| (a.span, &a.name).cmp(&(b.span, &b.name)));
    out
}

/// Splits the flattened location list `[lhs1, rhs1, ..., lhsn, rhsn]`
/// between `lhs_i` and `rhs_i`, removing duplicates so the groups are
/// disjoint.
fn split_locations(chain: &[usize], cs: &[LabeledConstraint], i: usize) -> (Vec<Span>, Vec<Span>) {
    let flat: Vec<Span> = chain.iter().flat_map(|&id| [cs[id].lhs_span, cs[id].rhs_span]).collect();
    let cut = 2 * i + 1;
    let mut a: Vec<Span> = Vec::new();
    for s in &flat[..cut] {
        if !a.contains(s) {
            a.push(*s);
        }
    }
    let mut b: Vec<Span> = Vec::new();
    for s in &flat[cut..] {
        if !a.contains(s) && !b.contains(s) {
            b.push(*s);
        }
    }
    if b.is_empty() {
        // Only possible when every span on the right also appears on the left.
        b.push(cs[chain[i]].rhs_span);
    }
    a.sort();
    b.sort();
    (a, b)
}

/// Solutions for the two sides of each step: the prefix of the chain up to
/// and including step `i` (but never the whole chain) and the suffix from
/// step `i` (never the whole chain), each grown over the background.
fn side_solutions(chain: &[usize], background: &[usize], cs: &[LabeledConstraint], strategy: Strategy) -> Vec<(Substitution, Substitution)> {
    let n = chain.len();
    let indices: Vec<usize> = (0..n).collect();
    par::map(strategy, &indices, |&i| {
        let a_end = (i + 1).min(n - 1);
        let b_start = i.max(1);
        let side = |ids: &[usize]| grow_mss(ids, background, cs).expect("proper subsets of a MUS are satisfiable").1;
        (side(&chain[..a_end]), side(&chain[b_start.min(n)..]))
    })
}

fn most_concrete(vars: &[TVar], solution: &Substitution) -> Type {
    vars.iter()
        .map(|&v| recover_type(v, solution))
        .enumerate()
        .min_by_key(|(i, t)| (t.vars().len(), std::cmp::Reverse(type_size(t)), *i))
        .map(|(_, t)| t)
        .expect("a candidate has at least one site")
}

fn target_types(target: &Target, cs: &[LabeledConstraint], a: &Substitution, b: &Substitution, i: usize, chain: &[usize]) -> (Type, Type) {
    match target {
        Target::Vars(vars) => (most_concrete(vars, a), most_concrete(vars, b)),
        Target::Constraint => {
            let c = &cs[chain[i]];
            (a.apply(&c.lhs).canonical(), b.apply(&c.rhs).canonical())
        }
    }
}

pub fn assemble_report(f: &GroupFailure<'_>) -> Result<TypeErrorReport, DiagnoseError> {
    assemble_report_with(f, Strategy::default())
}

pub fn assemble_report_with(f: &GroupFailure<'_>, strategy: Strategy) -> Result<TypeErrorReport, DiagnoseError> {
    let cs = f.constraints;
    let sr = f.slice;
    if sr.mus.is_empty() {
        return Err(DiagnoseError::EmptySlice);
    }
    let chain = build_chain(sr, cs);
    let background = sr.background(cs.len());
    let sides = side_solutions(&chain, &background, cs, strategy);

    let mut found = find_identifiers(sr, f.varmap);
    if found.is_empty() {
        let c = &cs[chain[0]];
        let member = sr.per_member.iter().find(|m| m.constraint == c.id).ok_or(DiagnoseError::NoCandidates)?;
        // Canonicalised together, keeping variables shared between the sides.
        let joint = Type::Tuple(vec![member.solution.apply(&c.lhs), member.solution.apply(&c.rhs)]).canonical();
        let Type::Tuple(sides) = joint else { unreachable!("canonical keeps the tuple") };
        let pair = (sides[0].clone(), sides[1].clone());
        if unify(&pair.0, &pair.1, &Substitution::new()).is_ok() {
            return Err(DiagnoseError::NoCandidates);
        }
        let name = f.source.snippet(c.lhs_span);
        found.push(Found { name, span: c.lhs_span, pair, target: Target::Constraint });
    }

    let candidates: Vec<CandidateExpression> = found
        .iter()
        .map(|cand| {
            let steps: Vec<DeductionStep> = chain
                .iter()
                .enumerate()
                .map(|(i, &id)| {
                    let c = &cs[id];
                    let (group_a, group_b) = split_locations(&chain, cs, i);
                    let (ta, tb) = target_types(&cand.target, cs, &sides[i].0, &sides[i].1, i, &chain);
                    DeductionStep {
                        index: i + 1,
                        constraint_id: id,
                        outlined: [c.lhs_span, c.rhs_span],
                        explanation: explain(c),
                        group_a,
                        group_b,
                        type_a: ta.display(),
                        type_b: tb.display(),
                    }
                })
                .collect();
            let possible_types = possible_types(cand, &chain, cs, &sides);
            CandidateExpression { name: cand.name.clone(), span: cand.span, possible_types, steps }
        })
        .collect();

    let error_locations = error_locations(sr, cs);
    let relevant_types = relevant_type_info(&error_locations, f.env, f.varmap);
    let error_statement = format!("The expression {} can have two conflicting types.", candidates[0].name);
    Ok(TypeErrorReport {
        group: f.group.to_string(),
        error_statement,
        error_locations,
        default_candidate: 0,
        candidates,
        relevant_types,
    })
}

/// Chooses the step whose split backs the candidate's two printed types and
/// attaches that step's location groups to them, group A first.
fn possible_types(cand: &Found, chain: &[usize], cs: &[LabeledConstraint], sides: &[(Substitution, Substitution)]) -> Vec<PossibleType> {
    let (p1, p2) = &cand.pair;
    let at: Vec<(Type, Type)> =
        (0..chain.len()).map(|i| target_types(&cand.target, cs, &sides[i].0, &sides[i].1, i, chain)).collect();
    let exact = at.iter().position(|(a, b)| (a == p1 && b == p2) || (a == p2 && b == p1));
    let concrete = || {
        at.iter()
            .enumerate()
            .filter(|(_, (a, b))| !types_unify(a, b))
            .min_by_key(|(i, (a, b))| (a.vars().len() + b.vars().len(), *i))
            .map(|(i, _)| i)
    };
    let step = exact.or_else(concrete).unwrap_or(0);
    let (ta, tb) = &at[step];
    let first_on_a = if p1 == ta {
        true
    } else if p1 == tb {
        false
    } else {
        types_unify(p1, ta) || !types_unify(p1, tb)
    };
    let (a, b) = split_locations(chain, cs, step);
    let (p1, p2) = if first_on_a { (p1, p2) } else { (p2, p1) };
    // A variable candidate's second type is stored renamed apart from the
    // first; a constraint candidate's pair keeps its shared variables.
    let (printed, p2) = match cand.target {
        Target::Vars(_) => {
            let offset = p1.vars().iter().map(|v| v.0 + 1).max().unwrap_or(0);
            let apart = p2.map_vars(&mut |v| Some(Type::Var(TVar(v.0 + offset))));
            (vec![p1.display(), p2.display()], apart)
        }
        Target::Constraint => (display_jointly(&[p1, p2]), p2.clone()),
    };
    let [s1, s2]: [String; 2] = printed.try_into().expect("two printed types");
    vec![
        PossibleType { printed: s1, locations: a, ty: p1.clone(), source_split: step + 1 },
        PossibleType { printed: s2, locations: b, ty: p2, source_split: step + 1 },
    ]
}

/// Predefined and previously checked names used inside the error locations,
/// with their types, in order of first use.
pub fn relevant_type_info(error_locations: &[Span], env: &Env, vm: &VarMap) -> Vec<NamedType> {
    let mut sites: Vec<&IdentSite> = vm
        .idents
        .iter()
        .filter(|s| s.role == IdentRole::Occurrence)
        .filter(|s| matches!(s.source, NameSource::Builtin | NameSource::OtherGroup))
        .filter(|s| error_locations.iter().any(|l| l.overlaps(&s.span)))
        .collect();
    sites.sort_by_key(|s| s.span);
    let mut out: Vec<NamedType> = Vec::new();
    for site in sites {
        if out.iter().any(|n| n.name == site.name) {
            continue;
        }
        if let Some(scheme) = env.get(&site.name).and_then(|e| e.scheme.as_ref()) {
            out.push(NamedType { name: site.name.clone(), ty: scheme.display() });
        }
    }
    out
}

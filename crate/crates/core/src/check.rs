//! End-to-end analysis: parse, split into binding groups, generate and solve
//! constraints, and diagnose the groups that fail.

use crate::constrain::{builtin_env, generate, ConstrainError, Env, GroupTemplate, LabeledConstraint, VarMap};
use crate::diagnose::{assemble_report_with, GroupFailure, NamedType, TypeErrorReport};
use crate::par::Strategy;
use crate::solve::{slice_with, solve_all, SliceResult, Substitution};
use crate::span::{SourceText, Span};
use crate::syntax::{parse_program, Binding, Equation, Expr, ExprKind, Pattern, Program, Rhs, SyntaxError};
use crate::types::{Supply, TypeScheme};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub strategy: Strategy,
}

/// Outcome of checking a program, as exposed over JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum CheckResult {
    Ok { binding_types: Vec<NamedType> },
    TypeError { reports: Vec<TypeErrorReport> },
    ParseError { message: String, span: Span },
    LexError { message: String, span: Span },
    UnboundName { message: String, span: Span },
}

impl CheckResult {
    pub fn status(&self) -> &'static str {
        match self {
            CheckResult::Ok { .. } => "ok",
            CheckResult::TypeError { .. } => "typeError",
            CheckResult::ParseError { .. } => "parseError",
            CheckResult::LexError { .. } => "lexError",
            CheckResult::UnboundName { .. } => "unboundName",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("variable not in scope: {name}")]
    Unbound { name: String, span: Span },
}

impl From<ConstrainError> for CheckError {
    fn from(e: ConstrainError) -> Self {
        match e {
            ConstrainError::UnboundName { name, span } => CheckError::Unbound { name, span },
        }
    }
}

#[derive(Clone, Debug)]
pub enum GroupOutcome {
    WellTyped { solution: Substitution, schemes: Vec<(String, TypeScheme)> },
    IllTyped { slice: SliceResult, report: TypeErrorReport },
}

/// One binding group with everything computed for it.
#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    /// Top-level names of the group in source order.
    pub names: Vec<String>,
    pub constraints: Vec<LabeledConstraint>,
    pub varmap: VarMap,
    /// Names visible from outside the group when it was analysed.
    pub env: Env,
    pub outcome: GroupOutcome,
}

impl GroupAnalysis {
    pub fn name(&self) -> String {
        self.names.join(", ")
    }

    pub fn report(&self) -> Option<&TypeErrorReport> {
        match &self.outcome {
            GroupOutcome::IllTyped { report, .. } => Some(report),
            GroupOutcome::WellTyped { .. } => None,
        }
    }

    pub fn slice(&self) -> Option<&SliceResult> {
        match &self.outcome {
            GroupOutcome::IllTyped { slice, .. } => Some(slice),
            GroupOutcome::WellTyped { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub program: Program,
    pub source: SourceText,
    /// Groups in the order they were analysed (dependencies first).
    pub groups: Vec<GroupAnalysis>,
}

impl Analysis {
    /// Reports of the failing groups, ordered by position in the source.
    pub fn reports(&self) -> Vec<&TypeErrorReport> {
        let mut failing: Vec<(Span, &TypeErrorReport)> = self
            .groups
            .iter()
            .filter_map(|g| g.report().map(|r| (self.first_span(g), r)))
            .collect();
        failing.sort_by_key(|(span, _)| *span);
        failing.into_iter().map(|(_, r)| r).collect()
    }

    fn first_span(&self, g: &GroupAnalysis) -> Span {
        self.program
            .bindings
            .iter()
            .filter(|b| g.names.contains(&b.name))
            .map(|b| b.span)
            .min()
            .expect("groups are non-empty")
    }

    /// Generalised types of every top-level binding in a well-typed group,
    /// in source order.
    pub fn binding_types(&self) -> Vec<NamedType> {
        let mut types: BTreeMap<&str, String> = BTreeMap::new();
        for g in &self.groups {
            if let GroupOutcome::WellTyped { schemes, .. } = &g.outcome {
                for (name, scheme) in schemes {
                    types.insert(name, scheme.display());
                }
            }
        }
        self.program
            .bindings
            .iter()
            .filter_map(|b| types.get(b.name.as_str()).map(|t| NamedType { name: b.name.clone(), ty: t.clone() }))
            .collect()
    }

    pub fn result(&self) -> CheckResult {
        let reports: Vec<TypeErrorReport> = self.reports().into_iter().cloned().collect();
        if reports.is_empty() {
            CheckResult::Ok { binding_types: self.binding_types() }
        } else {
            CheckResult::TypeError { reports }
        }
    }
}

pub fn check(source: &str) -> CheckResult {
    check_with(source, Options::default())
}

pub fn check_with(source: &str, options: Options) -> CheckResult {
    match analyze(source, options) {
        Ok(analysis) => analysis.result(),
        Err(CheckError::Syntax(SyntaxError::Lex(e))) => CheckResult::LexError { message: e.message, span: e.span },
        Err(CheckError::Syntax(SyntaxError::Parse(e))) => CheckResult::ParseError { message: e.message, span: e.span },
        Err(e @ CheckError::Unbound { span, .. }) => CheckResult::UnboundName { message: e.to_string(), span },
    }
}

pub fn analyze(source: &str, options: Options) -> Result<Analysis, CheckError> {
    let program = parse_program(source)?;
    let text = SourceText::new(source);
    let builtins = builtin_env();
    let top: HashSet<&str> = program.bindings.iter().map(|b| b.name.as_str()).collect();

    let uses: Vec<Vec<(String, Span)>> = program.bindings.iter().map(free_occurrences).collect();
    let unbound = uses
        .iter()
        .flatten()
        .filter(|(name, _)| !top.contains(name.as_str()) && !builtins.contains_key(name))
        .min_by_key(|(_, span)| *span);
    if let Some((name, span)) = unbound {
        return Err(CheckError::Unbound { name: name.clone(), span: *span });
    }

    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..program.bindings.len()).map(|i| graph.add_node(i)).collect();
    let index: BTreeMap<&str, usize> = program.bindings.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
    for (i, used) in uses.iter().enumerate() {
        let targets: BTreeSet<usize> = used.iter().filter_map(|(n, _)| index.get(n.as_str()).copied()).collect();
        for j in targets {
            graph.add_edge(nodes[i], nodes[j], ());
        }
    }

    let mut env = Env::with_builtins();
    let mut supply = Supply::new();
    let mut groups = Vec::new();
    for component in tarjan_scc(&graph) {
        let mut members: Vec<usize> = component.iter().map(|n| graph[*n]).collect();
        members.sort_unstable();
        let group: Vec<&Binding> = members.iter().map(|&i| &program.bindings[i]).collect();
        let names: Vec<String> = group.iter().map(|b| b.name.clone()).collect();
        let generated = generate(&group, &env, &text, &mut supply)?;
        let outcome = match solve_all(&generated.constraints) {
            Ok(solution) => {
                let schemes: Vec<(String, TypeScheme)> = names
                    .iter()
                    .map(|n| {
                        let root = generated.varmap.bindings[n];
                        (n.clone(), TypeScheme::generalize(solution.apply(&crate::types::Type::Var(root))))
                    })
                    .collect();
                GroupOutcome::WellTyped { solution, schemes }
            }
            Err(_) => {
                let slice = slice_with(&generated.constraints, options.strategy).expect("an unsolvable set has a MUS");
                let group_name = names.join(", ");
                let failure = GroupFailure {
                    group: &group_name,
                    constraints: &generated.constraints,
                    varmap: &generated.varmap,
                    slice: &slice,
                    env: &env,
                    source: &text,
                };
                let report = assemble_report_with(&failure, options.strategy)
                    .expect("a non-empty slice always yields a candidate");
                GroupOutcome::IllTyped { slice, report }
            }
        };
        let snapshot = env.clone();
        match &outcome {
            GroupOutcome::WellTyped { schemes, .. } => {
                let roots = group
                    .iter()
                    .map(|b| (b.name.clone(), (generated.varmap.bindings[&b.name], b.name_span())))
                    .collect();
                let template = GroupTemplate { constraints: generated.constraints.clone(), roots };
                env.add_group(template, schemes.iter().cloned().collect());
            }
            GroupOutcome::IllTyped { .. } => env.add_failed(group.iter().map(|b| (b.name.clone(), b.name_span()))),
        }
        groups.push(GroupAnalysis {
            names,
            constraints: generated.constraints,
            varmap: generated.varmap,
            env: snapshot,
            outcome,
        });
    }
    Ok(Analysis { program, source: text, groups })
}

/// Names used by a binding that are not bound inside it, with the span of
/// each use, in source order.
pub fn free_occurrences(b: &Binding) -> Vec<(String, Span)> {
    let mut out = Vec::new();
    let mut scopes: Vec<HashSet<String>> = Vec::new();
    walk_binding(b, &mut scopes, &mut out);
    out
}

fn walk_binding(b: &Binding, scopes: &mut Vec<HashSet<String>>, out: &mut Vec<(String, Span)>) {
    for eq in &b.equations {
        walk_equation(eq, scopes, out);
    }
}

fn pattern_names(ps: &[Pattern]) -> HashSet<String> {
    ps.iter().flat_map(|p| p.bound_vars()).map(|(n, _)| n.to_string()).collect()
}

fn walk_equation(eq: &Equation, scopes: &mut Vec<HashSet<String>>, out: &mut Vec<(String, Span)>) {
    scopes.push(pattern_names(&eq.params));
    scopes.push(eq.where_bindings.iter().map(|w| w.name.clone()).collect());
    match &eq.rhs {
        Rhs::Plain(e) => walk_expr(e, scopes, out),
        Rhs::Guarded(guards) => {
            for g in guards {
                walk_expr(&g.cond, scopes, out);
                walk_expr(&g.body, scopes, out);
            }
        }
    }
    for w in &eq.where_bindings {
        walk_binding(w, scopes, out);
    }
    scopes.pop();
    scopes.pop();
}

fn walk_expr(e: &Expr, scopes: &mut Vec<HashSet<String>>, out: &mut Vec<(String, Span)>) {
    match &e.kind {
        ExprKind::Var(name) => {
            if !scopes.iter().any(|s| s.contains(name)) {
                out.push((name.clone(), e.span));
            }
        }
        ExprKind::Lambda { params, body } => {
            scopes.push(pattern_names(params));
            walk_expr(body, scopes, out);
            scopes.pop();
        }
        ExprKind::Let { bindings, body } => {
            scopes.push(bindings.iter().map(|b| b.name.clone()).collect());
            for b in bindings {
                walk_binding(b, scopes, out);
            }
            walk_expr(body, scopes, out);
            scopes.pop();
        }
        _ => {
            for child in e.children() {
                walk_expr(child, scopes, out);
            }
        }
    }
}

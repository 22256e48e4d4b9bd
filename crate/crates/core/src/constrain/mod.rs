//! Generation of span-labelled equality constraints from syntax.

mod builtins;
mod generate;

pub use builtins::builtin_env;
pub use generate::generate;

use crate::span::Span;
use crate::syntax::NodeId;
use crate::types::{TVar, Type, TypeScheme};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// The typing rule that produced a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OriginKind {
    IfCondition,
    IfBranches,
    IfResult,
    DefinitionEquation,
    EquationGroup,
    Application,
    GuardCondition,
    PatternCons,
    PatternTail,
    PatternTuple,
    PatternLit,
    ListElement,
    RangeEndpoint,
    TupleComponent,
    VarOccurrence,
    LiteralType,
    BuiltinInstantiation,
    Lambda,
}

impl OriginKind {
    /// Short label in the style `(if condition)`.
    pub fn label(self) -> &'static str {
        match self {
            OriginKind::IfCondition => "if condition",
            OriginKind::IfBranches => "if branches",
            OriginKind::IfResult => "if result",
            OriginKind::DefinitionEquation => "definition",
            OriginKind::EquationGroup => "equations",
            OriginKind::Application => "application",
            OriginKind::GuardCondition => "guard",
            OriginKind::PatternCons => "cons pattern",
            OriginKind::PatternTail => "pattern tail",
            OriginKind::PatternTuple => "tuple pattern",
            OriginKind::PatternLit => "literal pattern",
            OriginKind::ListElement => "list element",
            OriginKind::RangeEndpoint => "range",
            OriginKind::TupleComponent => "tuple",
            OriginKind::VarOccurrence => "occurrence",
            OriginKind::LiteralType => "literal",
            OriginKind::BuiltinInstantiation => "built-in",
            OriginKind::Lambda => "lambda",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintOrigin {
    pub kind: OriginKind,
    /// Source snippets filled into the explanation template.
    pub actors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledConstraint {
    /// Position in emission order; equals the index in the group's list.
    pub id: usize,
    pub lhs: Type,
    pub rhs: Type,
    pub lhs_span: Span,
    pub rhs_span: Span,
    pub origin: ConstraintOrigin,
}

impl LabeledConstraint {
    pub fn vars(&self) -> Vec<TVar> {
        let mut vs = self.lhs.vars();
        for v in self.rhs.vars() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs
    }
}

impl fmt::Display for LabeledConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {} = {} ({})", self.id, self.lhs, self.rhs, self.origin.kind.label())
    }
}

/// Where an identifier's binding comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameSource {
    /// Bound by a pattern in an equation or lambda.
    Pattern,
    /// A `where` or `let` binding.
    Local,
    /// A top-level binding of the group under analysis.
    Group,
    /// A top-level binding of an earlier, well-typed group.
    OtherGroup,
    /// A top-level binding of an earlier group that failed to type-check.
    Failed,
    Builtin,
}

impl NameSource {
    pub fn is_user(self) -> bool {
        self != NameSource::Builtin
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentRole {
    Binder,
    Occurrence,
}

/// One appearance of an identifier in the analysed group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentSite {
    pub name: String,
    pub span: Span,
    pub var: TVar,
    pub role: IdentRole,
    pub source: NameSource,
    /// Span of the binding occurrence this site refers to. Sites sharing a
    /// name and binder denote the same variable.
    pub binder: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarMap {
    /// Type variable of every expression, pattern and binding node.
    pub nodes: BTreeMap<NodeId, TVar>,
    /// Type variable of each top-level binding of the group.
    pub bindings: BTreeMap<String, TVar>,
    /// Identifier sites in emission order.
    pub idents: Vec<IdentSite>,
}

/// The constraints of a well-typed group, reused at every later use site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTemplate {
    pub constraints: Vec<LabeledConstraint>,
    /// Root type variable and defining span of each binding in the group.
    pub roots: BTreeMap<String, (TVar, Span)>,
}

#[derive(Clone, Debug)]
pub enum EnvSource {
    Builtin,
    Group(Arc<GroupTemplate>),
    Failed { binder: Span },
}

#[derive(Clone, Debug)]
pub struct EnvEntry {
    /// `None` for bindings whose group failed to type-check.
    pub scheme: Option<TypeScheme>,
    pub source: EnvSource,
}

/// Names defined outside the group under analysis.
#[derive(Clone, Debug, Default)]
pub struct Env {
    entries: BTreeMap<String, EnvEntry>,
}

impl Env {
    pub fn empty() -> Self {
        Env::default()
    }

    pub fn with_builtins() -> Self {
        let entries = builtin_env()
            .into_iter()
            .map(|(name, scheme)| (name, EnvEntry { scheme: Some(scheme), source: EnvSource::Builtin }))
            .collect();
        Env { entries }
    }

    pub fn get(&self, name: &str) -> Option<&EnvEntry> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: EnvEntry) {
        self.entries.insert(name.into(), entry);
    }

    /// Records the bindings of a well-typed group.
    pub fn add_group(&mut self, template: GroupTemplate, schemes: BTreeMap<String, TypeScheme>) {
        let template = Arc::new(template);
        for (name, scheme) in schemes {
            let source = EnvSource::Group(Arc::clone(&template));
            self.entries.insert(name, EnvEntry { scheme: Some(scheme), source });
        }
    }

    /// Records the bindings of a group that failed to type-check.
    pub fn add_failed(&mut self, names: impl IntoIterator<Item = (String, Span)>) {
        for (name, binder) in names {
            self.entries.insert(name, EnvEntry { scheme: None, source: EnvSource::Failed { binder } });
        }
    }
}

/// Constraints and variable assignment for one binding group.
#[derive(Clone, Debug)]
pub struct GroupConstraints {
    pub constraints: Vec<LabeledConstraint>,
    pub varmap: VarMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstrainError {
    #[error("variable not in scope: {name}")]
    UnboundName { name: String, span: Span },
}

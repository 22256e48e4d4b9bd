use super::*;
use crate::span::SourceText;
use crate::syntax::{Binding, Equation, Expr, ExprKind, Literal, Pattern, PatternKind, Rhs};
use crate::types::{Supply, TyCon};
use std::collections::HashMap;

#[derive(Clone, Copy)]
struct Binder {
    var: TVar,
    span: Span,
    source: NameSource,
}

struct Gen<'a> {
    env: &'a Env,
    src: &'a SourceText,
    supply: &'a mut Supply,
    constraints: Vec<LabeledConstraint>,
    varmap: VarMap,
    /// Type standing for each node: a variable, or the literal's own type.
    node_types: HashMap<NodeId, Type>,
    scopes: Vec<HashMap<String, Binder>>,
}

/// Generates the constraints of one binding group. `env` must contain every
/// name the group uses that it does not define itself.
pub fn generate(
    group: &[&Binding],
    env: &Env,
    src: &SourceText,
    supply: &mut Supply,
) -> Result<GroupConstraints, ConstrainError> {
    let mut gen = Gen {
        env,
        src,
        supply,
        constraints: Vec::new(),
        varmap: VarMap::default(),
        node_types: HashMap::new(),
        scopes: Vec::new(),
    };
    for b in group {
        gen.alloc_binding(b);
    }
    let mut scope = HashMap::new();
    for b in group {
        let var = gen.varmap.nodes[&b.id];
        gen.varmap.bindings.insert(b.name.clone(), var);
        gen.bind(&mut scope, &b.name, Binder { var, span: b.name_span(), source: NameSource::Group });
    }
    gen.scopes.push(scope);
    for b in group {
        gen.binding(b)?;
    }
    Ok(GroupConstraints { constraints: gen.constraints, varmap: gen.varmap })
}

fn literal_con(lit: &Literal) -> Option<TyCon> {
    match lit {
        Literal::Int(_) => Some(TyCon::Int),
        Literal::Char(_) => Some(TyCon::Char),
        Literal::Bool(_) => Some(TyCon::Bool),
        Literal::Nil => None,
    }
}

impl Gen<'_> {
    fn fresh(&mut self) -> TVar {
        self.supply.fresh()
    }

    fn alloc_binding(&mut self, b: &Binding) {
        let v = self.fresh();
        self.varmap.nodes.insert(b.id, v);
        for eq in &b.equations {
            for p in &eq.params {
                self.alloc_pattern(p);
            }
            match &eq.rhs {
                Rhs::Plain(e) => self.alloc_expr(e),
                Rhs::Guarded(guards) => {
                    for g in guards {
                        self.alloc_expr(&g.cond);
                        self.alloc_expr(&g.body);
                    }
                }
            }
            for wb in &eq.where_bindings {
                self.alloc_binding(wb);
            }
        }
    }

    fn alloc_pattern(&mut self, p: &Pattern) {
        let v = self.fresh();
        self.varmap.nodes.insert(p.id, v);
        for child in p.children() {
            self.alloc_pattern(child);
        }
    }

    fn alloc_expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Paren(inner) => {
                self.alloc_expr(inner);
                self.alias(e.id, inner.id);
                return;
            }
            ExprKind::Let { bindings, body } => {
                for b in bindings {
                    self.alloc_binding(b);
                }
                self.alloc_expr(body);
                self.alias(e.id, body.id);
                return;
            }
            _ => {}
        }
        let v = self.fresh();
        self.varmap.nodes.insert(e.id, v);
        let ty = match &e.kind {
            ExprKind::Int(_) => Type::INT,
            ExprKind::Char(_) => Type::CHAR,
            ExprKind::Str(_) => Type::string(),
            ExprKind::Bool(_) => Type::BOOL,
            ExprKind::List(items) if items.is_empty() => Type::list(self.supply.fresh_type()),
            _ => Type::Var(v),
        };
        self.node_types.insert(e.id, ty);
        if let ExprKind::Lambda { params, .. } = &e.kind {
            params.iter().for_each(|p| self.alloc_pattern(p));
        }
        for child in e.children() {
            self.alloc_expr(child);
        }
    }

    fn alias(&mut self, node: NodeId, inner: NodeId) {
        let v = self.varmap.nodes[&inner];
        self.varmap.nodes.insert(node, v);
        let ty = self.node_types[&inner].clone();
        self.node_types.insert(node, ty);
    }

    fn var(&self, id: NodeId) -> TVar {
        self.varmap.nodes[&id]
    }

    fn ty(&self, e: &Expr) -> Type {
        self.node_types[&e.id].clone()
    }

    fn pty(&self, p: &Pattern) -> Type {
        Type::Var(self.var(p.id))
    }

    fn text(&self, span: Span) -> String {
        self.src.snippet(span)
    }

    fn emit(&mut self, kind: OriginKind, lhs: Type, rhs: Type, lhs_span: Span, rhs_span: Span, actors: Vec<String>) {
        let id = self.constraints.len();
        let origin = ConstraintOrigin { kind, actors };
        self.constraints.push(LabeledConstraint { id, lhs, rhs, lhs_span, rhs_span, origin });
    }

    fn site(&mut self, name: &str, span: Span, var: TVar, role: IdentRole, source: NameSource, binder: Span) {
        self.varmap.idents.push(IdentSite { name: name.to_string(), span, var, role, source, binder });
    }

    fn bind(&mut self, scope: &mut HashMap<String, Binder>, name: &str, binder: Binder) {
        self.site(name, binder.span, binder.var, IdentRole::Binder, binder.source, binder.span);
        scope.insert(name.to_string(), binder);
    }

    fn lookup(&self, name: &str) -> Option<Binder> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn local_scope(&mut self, bindings: &[Binding]) -> HashMap<String, Binder> {
        let mut scope = HashMap::new();
        for b in bindings {
            let binder = Binder { var: self.var(b.id), span: b.name_span(), source: NameSource::Local };
            self.bind(&mut scope, &b.name, binder);
        }
        scope
    }

    fn binding(&mut self, b: &Binding) -> Result<(), ConstrainError> {
        let root = self.var(b.id);
        let first_name = b.name_span();
        for (i, eq) in b.equations.iter().enumerate() {
            let eq_var = if i == 0 {
                root
            } else {
                let v = self.fresh();
                self.emit(
                    OriginKind::EquationGroup,
                    Type::Var(v),
                    Type::Var(root),
                    eq.name_span,
                    first_name,
                    vec![b.name.clone()],
                );
                let source = self.lookup(&b.name).map_or(NameSource::Local, |binder| binder.source);
                self.site(&b.name, eq.name_span, v, IdentRole::Binder, source, first_name);
                v
            };
            self.equation(eq, eq_var)?;
        }
        Ok(())
    }

    fn equation(&mut self, eq: &Equation, eq_var: TVar) -> Result<(), ConstrainError> {
        let mut params = HashMap::new();
        for p in &eq.params {
            self.pattern(p, &mut params);
        }
        self.scopes.push(params);
        let locals = self.local_scope(&eq.where_bindings);
        self.scopes.push(locals);

        let param_types: Vec<Type> = eq.params.iter().map(|p| self.pty(p)).collect();
        let lhs_text = self.text(eq.lhs_span);
        let result = match &eq.rhs {
            Rhs::Plain(body) => {
                let def = Type::curried(param_types.clone(), self.ty(body));
                let actors = vec![lhs_text.clone(), self.text(body.span)];
                self.emit(OriginKind::DefinitionEquation, Type::Var(eq_var), def, eq.lhs_span, body.span, actors);
                self.expr(body)
            }
            Rhs::Guarded(guards) => guards.iter().try_for_each(|g| {
                let actors = vec![self.text(g.cond.span)];
                self.emit(OriginKind::GuardCondition, self.ty(&g.cond), Type::BOOL, g.cond.span, g.cond.span, actors);
                let def = Type::curried(param_types.clone(), self.ty(&g.body));
                let actors = vec![lhs_text.clone(), self.text(g.body.span)];
                self.emit(OriginKind::DefinitionEquation, Type::Var(eq_var), def, eq.lhs_span, g.body.span, actors);
                self.expr(&g.cond)?;
                self.expr(&g.body)
            }),
        };
        let result = result.and_then(|()| eq.where_bindings.iter().try_for_each(|wb| self.binding(wb)));
        self.scopes.pop();
        self.scopes.pop();
        result
    }

    fn pattern(&mut self, p: &Pattern, scope: &mut HashMap<String, Binder>) {
        let t = self.pty(p);
        match &p.kind {
            PatternKind::Var(name) => {
                let binder = Binder { var: self.var(p.id), span: p.span, source: NameSource::Pattern };
                self.bind(scope, name, binder);
            }
            PatternKind::Wild => {}
            PatternKind::Lit(lit) => {
                let (lit_ty, name) = match literal_con(lit) {
                    Some(con) => (Type::Con(con), con.name().to_string()),
                    None => (Type::list(self.supply.fresh_type()), "list".to_string()),
                };
                let actors = vec![self.text(p.span), name];
                self.emit(OriginKind::PatternLit, t, lit_ty, p.span, p.span, actors);
            }
            PatternKind::Cons(head, tail) => {
                let actors = vec![self.text(p.span)];
                self.emit(OriginKind::PatternCons, t.clone(), Type::list(self.pty(head)), p.span, head.span, actors);
                let actors = vec![self.text(tail.span), self.text(p.span)];
                self.emit(OriginKind::PatternTail, self.pty(tail), t, tail.span, p.span, actors);
                self.pattern(head, scope);
                self.pattern(tail, scope);
            }
            PatternKind::Tuple(items) => {
                let tuple = Type::Tuple(items.iter().map(|i| self.pty(i)).collect());
                let actors = vec![self.text(p.span)];
                self.emit(OriginKind::PatternTuple, t, tuple, p.span, p.span, actors);
                for item in items {
                    self.pattern(item, scope);
                }
            }
        }
    }

    fn expr(&mut self, e: &Expr) -> Result<(), ConstrainError> {
        let here = Type::Var(self.var(e.id));
        match &e.kind {
            ExprKind::Var(name) => self.occurrence(e, name)?,
            ExprKind::Int(_) | ExprKind::Char(_) | ExprKind::Str(_) | ExprKind::Bool(_) => {
                let type_name = match &e.kind {
                    ExprKind::Str(_) => "String".to_string(),
                    _ => self.ty(e).display(),
                };
                let actors = vec![self.text(e.span), type_name];
                self.emit(OriginKind::LiteralType, here.clone(), self.ty(e), e.span, e.span, actors);
            }
            ExprKind::List(items) if items.is_empty() => {
                let actors = vec![self.text(e.span), "list".to_string()];
                self.emit(OriginKind::LiteralType, here.clone(), self.ty(e), e.span, e.span, actors);
            }
            ExprKind::App(f, a) => {
                let actors = vec![self.text(f.span), self.text(a.span)];
                self.emit(OriginKind::Application, self.ty(f), Type::fun(self.ty(a), here.clone()), f.span, a.span, actors);
                self.expr(f)?;
                self.expr(a)?;
            }
            ExprKind::Infix { op, lhs, rhs } => {
                let actors = vec![self.text(op.span), self.text(lhs.span), self.text(rhs.span)];
                let applied = Type::curried([self.ty(lhs), self.ty(rhs)], here.clone());
                self.emit(OriginKind::Application, self.ty(op), applied, op.span, e.span, actors);
                self.expr(lhs)?;
                self.expr(op)?;
                self.expr(rhs)?;
            }
            ExprKind::If { cond, then_branch, else_branch } => {
                let actors = vec![self.text(cond.span)];
                self.emit(OriginKind::IfCondition, self.ty(cond), Type::BOOL, cond.span, cond.span, actors);
                let actors = vec![self.text(then_branch.span), self.text(else_branch.span)];
                let (t, f) = (self.ty(then_branch), self.ty(else_branch));
                self.emit(OriginKind::IfBranches, t, f, then_branch.span, else_branch.span, actors);
                let actors = vec![self.text(then_branch.span)];
                self.emit(OriginKind::IfResult, here.clone(), self.ty(then_branch), e.span, then_branch.span, actors);
                self.expr(cond)?;
                self.expr(then_branch)?;
                self.expr(else_branch)?;
            }
            ExprKind::Lambda { params, body } => {
                let fun = Type::curried(params.iter().map(|p| self.pty(p)), self.ty(body));
                let actors = vec![self.text(e.span), self.text(body.span)];
                self.emit(OriginKind::Lambda, here.clone(), fun, e.span, body.span, actors);
                let mut scope = HashMap::new();
                for p in params {
                    self.pattern(p, &mut scope);
                }
                self.scopes.push(scope);
                let result = self.expr(body);
                self.scopes.pop();
                result?;
            }
            ExprKind::Let { bindings, body } => {
                let scope = self.local_scope(bindings);
                self.scopes.push(scope);
                let result = bindings.iter().try_for_each(|b| self.binding(b)).and_then(|()| self.expr(body));
                self.scopes.pop();
                result?;
            }
            ExprKind::List(items) => {
                for item in items {
                    let actors = vec![self.text(item.span), self.text(e.span)];
                    self.emit(OriginKind::ListElement, here.clone(), Type::list(self.ty(item)), e.span, item.span, actors);
                }
                items.iter().try_for_each(|i| self.expr(i))?;
            }
            ExprKind::Range { from, to } => {
                for end in [from, to] {
                    let actors = vec![self.text(end.span), self.text(e.span)];
                    self.emit(OriginKind::RangeEndpoint, here.clone(), Type::list(self.ty(end)), e.span, end.span, actors);
                }
                self.expr(from)?;
                self.expr(to)?;
            }
            ExprKind::Tuple(items) => {
                let tuple = Type::Tuple(items.iter().map(|i| self.ty(i)).collect());
                let actors = vec![self.text(e.span)];
                self.emit(OriginKind::TupleComponent, here.clone(), tuple, e.span, e.span, actors);
                items.iter().try_for_each(|i| self.expr(i))?;
            }
            ExprKind::Paren(inner) => self.expr(inner)?,
        }
        Ok(())
    }

    fn occurrence(&mut self, e: &Expr, name: &str) -> Result<(), ConstrainError> {
        let var = self.var(e.id);
        if let Some(binder) = self.lookup(name) {
            let actors = vec![name.to_string()];
            self.emit(OriginKind::VarOccurrence, Type::Var(var), Type::Var(binder.var), e.span, binder.span, actors);
            self.site(name, e.span, var, IdentRole::Occurrence, binder.source, binder.span);
            return Ok(());
        }
        let env = self.env;
        let Some(entry) = env.get(name) else {
            return Err(ConstrainError::UnboundName { name: name.to_string(), span: e.span });
        };
        match &entry.source {
            EnvSource::Builtin => {
                let scheme = entry.scheme.as_ref().expect("builtins have schemes");
                let inst = scheme.instantiate(self.supply);
                let actors = vec![name.to_string(), scheme.display()];
                self.emit(OriginKind::BuiltinInstantiation, Type::Var(var), inst, e.span, e.span, actors);
                self.site(name, e.span, var, IdentRole::Occurrence, NameSource::Builtin, e.span);
            }
            EnvSource::Group(template) => {
                let (root, binder) = template.roots[name];
                self.copy_template(template, root, var);
                self.site(name, binder, var, IdentRole::Binder, NameSource::OtherGroup, binder);
                self.site(name, e.span, var, IdentRole::Occurrence, NameSource::OtherGroup, binder);
            }
            EnvSource::Failed { binder } => {
                self.site(name, e.span, var, IdentRole::Occurrence, NameSource::Failed, *binder);
            }
        }
        Ok(())
    }

    /// Re-emits a well-typed group's constraints with fresh variables, except
    /// that the used binding's root variable becomes `occurrence`.
    fn copy_template(&mut self, template: &GroupTemplate, root: TVar, occurrence: TVar) {
        let mut renaming: HashMap<TVar, TVar> = HashMap::from([(root, occurrence)]);
        for c in &template.constraints {
            let mut rename = |v: TVar| Some(Type::Var(*renaming.entry(v).or_insert_with(|| self.supply.fresh())));
            let lhs = c.lhs.map_vars(&mut rename);
            let rhs = c.rhs.map_vars(&mut rename);
            self.emit(c.origin.kind, lhs, rhs, c.lhs_span, c.rhs_span, c.origin.actors.clone());
        }
    }
}

use crate::constrain::{LabeledConstraint, OriginKind};

/// Plain-language reason for a constraint, filled from its actor snippets.
pub fn explain(c: &LabeledConstraint) -> String {
    let a = |i: usize| c.origin.actors.get(i).map(String::as_str).unwrap_or("it");
    match c.origin.kind {
        OriginKind::IfCondition => format!("{} is the condition of an if expression, so it must have type Bool", a(0)),
        OriginKind::IfBranches => {
            format!("the then branch {} and the else branch {} must have the same type", a(0), a(1))
        }
        OriginKind::IfResult => format!("the if expression takes the type of its then branch {}", a(0)),
        OriginKind::DefinitionEquation => {
            format!("{} is defined as {}, so both sides must have the same type", a(0), a(1))
        }
        OriginKind::EquationGroup => format!("all equations of {} must have the same type", a(0)),
        OriginKind::Application if c.origin.actors.len() == 3 => format!(
            "{op} is applied to {l} and {r}, so {op} must be a function that accepts the types of {l} and {r}",
            op = a(0),
            l = a(1),
            r = a(2)
        ),
        OriginKind::Application => format!(
            "{f} is applied to {x}, so {f} must be a function that accepts the type of {x}",
            f = a(0),
            x = a(1)
        ),
        OriginKind::GuardCondition => "a guard must have type Bool".to_string(),
        OriginKind::PatternCons => {
            format!("the pattern {} matches a list, so the matched value must have a list type", a(0))
        }
        OriginKind::PatternTail => {
            format!("the tail {} of the pattern {} is a list of the same type as the whole pattern", a(0), a(1))
        }
        OriginKind::PatternTuple => format!(
            "the pattern {} matches a tuple, so the matched value must be a tuple of the same size",
            a(0)
        ),
        OriginKind::PatternLit => format!(
            "the pattern {} is a {} literal, so the matched value must have the same type",
            a(0),
            a(1)
        ),
        OriginKind::ListElement => {
            format!("{} is an element of the list {}, so all elements must have the same type", a(0), a(1))
        }
        OriginKind::RangeEndpoint => {
            format!("{} is an endpoint of the range {}, so the range is a list of its type", a(0), a(1))
        }
        OriginKind::TupleComponent => format!("the type of the tuple {} is built from the types of its parts", a(0)),
        OriginKind::VarOccurrence => format!("the two occurrences of {} must have the same type", a(0)),
        OriginKind::LiteralType => format!("{} is a {} literal", a(0), a(1)),
        OriginKind::BuiltinInstantiation => format!("{} is predefined with type {}", a(0), a(1)),
        OriginKind::Lambda => format!("{} is a function whose result is {}", a(0), a(1)),
    }
}

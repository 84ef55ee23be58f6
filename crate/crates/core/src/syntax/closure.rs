//! The finite closure `cl(φ)` used to bound canonical countermodels.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use super::{Formula, Modality};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("closure is undefined for formulas containing update operators")]
    UpdateOperator,
}

/// Least set containing `f` and closed under the nine closure conditions:
/// subformulas, single negation, awareness of subformulas, awareness
/// introspection, `I`/`S` positive and negative introspection, the `C`
/// mix condition and the `E` decomposition.
///
/// Derived connectives are treated as binary constructors whose
/// subformulas are their operands.
pub fn closure_cl(f: &Formula) -> Result<BTreeSet<Formula>, ClosureError> {
    if f.has_updates() {
        return Err(ClosureError::UpdateOperator);
    }
    let mut set = BTreeSet::new();
    let mut queue = VecDeque::new();
    let add = |g: Formula, set: &mut BTreeSet<Formula>, queue: &mut VecDeque<Formula>| {
        if set.insert(g.clone()) {
            queue.push_back(g);
        }
    };
    add(f.clone(), &mut set, &mut queue);
    while let Some(g) = queue.pop_front() {
        for h in consequences(&g) {
            add(h, &mut set, &mut queue);
        }
    }
    Ok(set)
}

/// Formulas one application of some closure condition adds for `g`.
/// Immediate children stand in for all subformulas since the queue reaches
/// them transitively.
pub(super) fn consequences(g: &Formula) -> Vec<Formula> {
    let mut out: Vec<Formula> = g.children().into_iter().cloned().collect();
    if !matches!(g, Formula::Not(_)) {
        out.push(Formula::not(g.clone()));
    }
    if let Formula::Modal(m, i, body) = g {
        let boxed = |m: Modality, f: Formula| Formula::modal(m, i, f);
        match m {
            Modality::Aware => {
                for child in body.children() {
                    out.push(boxed(Modality::Aware, child.clone()));
                }
                out.push(boxed(Modality::Implicit, g.clone()));
                out.push(boxed(Modality::Implicit, Formula::not(g.clone())));
                for p in body.atoms() {
                    out.push(boxed(Modality::Sim, Formula::Atom(p)));
                }
            }
            Modality::Implicit | Modality::Sim if !is_introspective(body, *m, i) => {
                out.push(boxed(*m, g.clone()));
                out.push(boxed(*m, Formula::not(g.clone())));
            }
            Modality::Ek => {
                out.push(boxed(Modality::Sim, boxed(Modality::Implicit, g.clone())));
            }
            Modality::Explicit => {
                out.push(boxed(Modality::Aware, (**body).clone()));
                out.push(boxed(Modality::Ek, (**body).clone()));
            }
            _ => {}
        }
    }
    out
}

/// `body` has the form `M_i χ` or `¬M_i χ`.
fn is_introspective(body: &Formula, m: Modality, i: &super::Agent) -> bool {
    let inner = match body {
        Formula::Not(inner) => inner,
        other => other,
    };
    matches!(inner, Formula::Modal(m2, j, _) if *m2 == m && j == i)
}

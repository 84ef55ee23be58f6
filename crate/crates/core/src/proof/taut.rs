use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::{Connective, Formula};

/// Truth tables are enumerated in full, so the variable count is capped.
pub const MAX_TAUT_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{found} abstracted variables exceed the truth-table limit of {limit}")]
pub struct CapacityError {
    pub found: usize,
    pub limit: usize,
}

/// Propositional skeleton: leaves index abstracted subformulas.
enum Skeleton {
    Var(usize),
    Not(Box<Skeleton>),
    Bin(Connective, Box<Skeleton>, Box<Skeleton>),
}

impl Skeleton {
    fn eval(&self, assignment: u32) -> bool {
        match self {
            Skeleton::Var(k) => assignment >> k & 1 == 1,
            Skeleton::Not(s) => !s.eval(assignment),
            Skeleton::Bin(op, l, r) => {
                let (l, r) = (l.eval(assignment), r.eval(assignment));
                match op {
                    Connective::And => l && r,
                    Connective::Or => l || r,
                    Connective::Implies => !l || r,
                    Connective::Iff => l == r,
                }
            }
        }
    }
}

/// Replaces each maximal non-Boolean subformula by a variable. Subformulas
/// that are equal modulo sugar share a variable.
fn abstract_formula(f: &Formula, vars: &mut HashMap<Formula, usize>) -> Skeleton {
    match f {
        Formula::Not(g) => Skeleton::Not(Box::new(abstract_formula(g, vars))),
        Formula::Binary(op, l, r) => Skeleton::Bin(
            *op,
            Box::new(abstract_formula(l, vars)),
            Box::new(abstract_formula(r, vars)),
        ),
        leaf => {
            let next = vars.len();
            Skeleton::Var(*vars.entry(leaf.desugar()).or_insert(next))
        }
    }
}

/// Whether `f` is a substitution instance of a propositional tautology.
pub fn is_tautology_instance(f: &Formula) -> Result<bool, CapacityError> {
    let mut vars = HashMap::new();
    let skeleton = abstract_formula(f, &mut vars);
    if vars.len() > MAX_TAUT_VARIABLES {
        return Err(CapacityError { found: vars.len(), limit: MAX_TAUT_VARIABLES });
    }
    Ok((0..1u32 << vars.len()).all(|a| skeleton.eval(a)))
}

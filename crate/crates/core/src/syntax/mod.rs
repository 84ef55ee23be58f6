//! Formula syntax: atoms, agents, the formula tree, and purely syntactic
//! operations (atom sets, subformulas, desugaring, closure).

mod closure;
mod parser;
mod printer;
pub mod schema;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use closure::{closure_cl, ClosureError};
pub use parser::{parse, ParseError};

/// Rejected identifier for an atom or agent.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}: must match [a-z][a-zA-Z0-9_]*")]
pub struct NameError(pub String);

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: &str) -> Result<Self, NameError> {
                if is_identifier(name) {
                    Ok(Self(name.to_string()))
                } else {
                    Err(NameError(name.to_string()))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::str::FromStr for $name {
            type Err = NameError;

            fn from_str(s: &str) -> Result<Self, NameError> {
                Self::new(s)
            }
        }
    };
}

name_type!(
    /// An atomic proposition.
    Atom
);
name_type!(
    /// An agent index.
    Agent
);

/// Binary propositional connectives. Only `And` is primitive; the rest are
/// kept for printing and desugared for evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 4] = [Self::And, Self::Or, Self::Implies, Self::Iff];

    pub fn symbol(self) -> &'static str {
        match self {
            Self::And => "&",
            Self::Or => "|",
            Self::Implies => "->",
            Self::Iff => "<->",
        }
    }
}

/// Agent-indexed unary modalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    /// `A[i]`: awareness of.
    Aware,
    /// `I[i]`: implicit knowledge, over the IK-accessibility relation.
    Implicit,
    /// `E[i]`: explicit knowledge.
    Explicit,
    /// `S[i]`: box over A-equivalence.
    Sim,
    /// `C[i]`: box over EK-accessibility.
    Ek,
}

impl Modality {
    pub const ALL: [Modality; 5] = [
        Self::Aware,
        Self::Implicit,
        Self::Explicit,
        Self::Sim,
        Self::Ek,
    ];

    pub fn letter(self) -> char {
        match self {
            Self::Aware => 'A',
            Self::Implicit => 'I',
            Self::Explicit => 'E',
            Self::Sim => 'S',
            Self::Ek => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.letter() == c)
    }
}

/// Direction of an awareness update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Update {
    /// `+[i]{..}`: become aware.
    Add,
    /// `-[i]{..}`: become unaware.
    Remove,
}

impl Update {
    pub fn sign(self) -> char {
        match self {
            Self::Add => '+',
            Self::Remove => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Modal(Modality, Agent, Box<Formula>),
    Update(Update, Agent, BTreeSet<Atom>, Box<Formula>),
}

impl Formula {
    /// Builds an atom. Panics on a malformed name; use [`Atom::new`] for
    /// untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("valid atom name"))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn binary(op: Connective, l: Formula, r: Formula) -> Formula {
        Formula::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::And, l, r)
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::Or, l, r)
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::Implies, l, r)
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Self::binary(Connective::Iff, l, r)
    }

    pub fn modal(m: Modality, agent: &Agent, f: Formula) -> Formula {
        Formula::Modal(m, agent.clone(), Box::new(f))
    }

    pub fn update(u: Update, agent: &Agent, atoms: BTreeSet<Atom>, f: Formula) -> Formula {
        Formula::Update(u, agent.clone(), atoms, Box::new(f))
    }

    /// Right-nested conjunction; `None` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(f) = parts.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(f) | Formula::Modal(_, _, f) | Formula::Update(_, _, _, f) => vec![f],
            Formula::Binary(_, l, r) => vec![l, r],
        }
    }

    /// `At(f)`: the atoms occurring in `f`. For updates the update set is
    /// included, so `At([±Q]φ) = Q ∪ At(φ)`.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Update(_, _, q, f) => {
                out.extend(q.iter().cloned());
                f.collect_atoms(out);
            }
            _ => self.children().into_iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Agents indexing some operator of `f`.
    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Modal(_, i, _) | Formula::Update(_, i, _, _) => {
                out.insert(i.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, visitor: &mut impl FnMut(&'a Formula)) {
        visitor(self);
        for c in self.children() {
            c.visit(visitor);
        }
    }

    /// `f` and all of its strict subformulas.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            out.insert(f.clone());
        });
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Nesting depth of agent modalities (updates are transparent).
    pub fn modal_depth(&self) -> usize {
        let inner = self
            .children()
            .iter()
            .map(|c| c.modal_depth())
            .max()
            .unwrap_or(0);
        match self {
            Formula::Modal(..) => inner + 1,
            _ => inner,
        }
    }

    pub fn has_updates(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Update(..)));
        found
    }

    /// True when an update operator sits strictly inside the operand of an
    /// awareness operator. Such formulas are rejected everywhere.
    pub fn has_update_under_awareness(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if let Formula::Modal(Modality::Aware, _, body) = f {
                found |= body.has_updates();
            }
        });
        found
    }

    /// Rewrites `|`, `->` and `<->` in terms of `~` and `&`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.desugar()),
            Formula::Binary(op, l, r) => {
                let (l, r) = (l.desugar(), r.desugar());
                match op {
                    Connective::And => Formula::and(l, r),
                    Connective::Or => Formula::not(Formula::and(Formula::not(l), Formula::not(r))),
                    Connective::Implies => Formula::not(Formula::and(l, Formula::not(r))),
                    Connective::Iff => Formula::and(
                        Formula::not(Formula::and(l.clone(), Formula::not(r.clone()))),
                        Formula::not(Formula::and(r, Formula::not(l))),
                    ),
                }
            }
            Formula::Modal(m, i, f) => Formula::modal(*m, i, f.desugar()),
            Formula::Update(u, i, q, f) => Formula::update(*u, i, q.clone(), f.desugar()),
        }
    }

    /// Structural equality modulo the definitional sugar.
    pub fn same_as(&self, other: &Formula) -> bool {
        self == other || self.desugar() == other.desugar()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer::write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

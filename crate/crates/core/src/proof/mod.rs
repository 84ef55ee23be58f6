//! Hilbert-style proofs: axiom recognition and line-by-line checking.

mod axioms;
mod taut;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse, Agent, Formula, Modality, ParseError};

pub use axioms::{axiom_by_name, axioms, match_axiom, Axiom};
pub use taut::{is_tautology_instance, CapacityError, MAX_TAUT_VARIABLES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generalization {
    pub from: usize,
    pub agent: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Justification {
    Axiom(String),
    Taut,
    /// `[j, k]`: line `k` must be line `j` implying this line.
    Mp([usize; 2]),
    Gi(Generalization),
    Gsim(Generalization),
    Gek(Generalization),
}

impl Justification {
    /// Line numbers this justification cites.
    pub fn citations(&self) -> Vec<usize> {
        match self {
            Justification::Axiom(_) | Justification::Taut => vec![],
            Justification::Mp([j, k]) => vec![*j, *k],
            Justification::Gi(g) | Justification::Gsim(g) | Justification::Gek(g) => vec![g.from],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub n: usize,
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineFile {
    n: usize,
    formula: String,
    by: Justification,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofFile {
    lines: Vec<LineFile>,
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("malformed proof file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
}

impl Proof {
    pub fn from_json(text: &str) -> Result<Proof, ProofError> {
        let file: ProofFile = serde_json::from_str(text)?;
        let lines = file
            .lines
            .into_iter()
            .map(|l| {
                let formula = parse(&l.formula).map_err(|source| ProofError::Formula { line: l.n, source })?;
                Ok(ProofLine { n: l.n, formula, by: l.by })
            })
            .collect::<Result<_, ProofError>>()?;
        Ok(Proof { lines })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = ProofFile {
            lines: self
                .lines
                .iter()
                .map(|l| LineFile { n: l.n, formula: l.formula.to_string(), by: l.by.clone() })
                .collect(),
        };
        serde_json::to_value(file).expect("proofs always serialize")
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Why a line was not accepted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Rejection {
    /// Line numbers must increase strictly.
    LineOrder { previous: usize },
    UnknownAxiom { name: String },
    NotAnInstance { axiom: String },
    NotATautology,
    TautologyTooLarge { variables: usize },
    /// A cited line does not exist before this one.
    BadCitation { cited: usize },
    MpMismatch { antecedent: usize, implication: usize },
    GeneralizationMismatch { rule: String, from: usize, agent: String },
    BadAgent { agent: String },
    DynamicOperator,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::LineOrder { previous } => write!(f, "line numbers must increase (previous line is {previous})"),
            Rejection::UnknownAxiom { name } => write!(f, "unknown axiom {name:?}"),
            Rejection::NotAnInstance { axiom } => write!(f, "not-an-instance of {axiom}"),
            Rejection::NotATautology => f.write_str("not-a-tautology"),
            Rejection::TautologyTooLarge { variables } => {
                write!(f, "tautology check needs {variables} variables (limit {MAX_TAUT_VARIABLES})")
            }
            Rejection::BadCitation { cited } => write!(f, "cites line {cited}, which does not precede it"),
            Rejection::MpMismatch { antecedent, implication } => {
                write!(f, "mp-mismatch: line {implication} is not line {antecedent} implying this line")
            }
            Rejection::GeneralizationMismatch { rule, from, agent } => {
                write!(f, "{rule}-mismatch: this line is not line {from} under the {agent} box")
            }
            Rejection::BadAgent { agent } => write!(f, "invalid agent name {agent:?}"),
            Rejection::DynamicOperator => f.write_str("update operators are not part of the proof system"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofVerdict {
    Accepted,
    Rejected { line: usize, reason: Rejection },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Accept an axiom line if it instantiates any schema, whatever it names.
    pub infer_axiom: bool,
}

fn check_line(line: &ProofLine, earlier: &HashMap<usize, &Formula>, opts: CheckOptions) -> Result<(), Rejection> {
    if line.formula.has_updates() {
        return Err(Rejection::DynamicOperator);
    }
    let cited = |k: usize| earlier.get(&k).copied().ok_or(Rejection::BadCitation { cited: k });
    match &line.by {
        Justification::Axiom(name) => {
            let matches = match_axiom(&line.formula);
            if opts.infer_axiom {
                if matches.is_empty() {
                    return Err(Rejection::NotAnInstance { axiom: "any schema".into() });
                }
                return Ok(());
            }
            let axiom = axiom_by_name(name).ok_or_else(|| Rejection::UnknownAxiom { name: name.clone() })?;
            if !matches.iter().any(|(n, _)| *n == axiom.name) {
                return Err(Rejection::NotAnInstance { axiom: axiom.name.to_string() });
            }
        }
        Justification::Taut => match is_tautology_instance(&line.formula) {
            Ok(true) => {}
            Ok(false) => return Err(Rejection::NotATautology),
            Err(e) => return Err(Rejection::TautologyTooLarge { variables: e.found }),
        },
        Justification::Mp([j, k]) => {
            let (antecedent, implication) = (cited(*j)?, cited(*k)?);
            let expected = Formula::implies(antecedent.clone(), line.formula.clone());
            if !implication.same_as(&expected) {
                return Err(Rejection::MpMismatch { antecedent: *j, implication: *k });
            }
        }
        Justification::Gi(g) | Justification::Gsim(g) | Justification::Gek(g) => {
            let (modality, rule) = match &line.by {
                Justification::Gi(_) => (Modality::Implicit, "gi"),
                Justification::Gsim(_) => (Modality::Sim, "gsim"),
                _ => (Modality::Ek, "gek"),
            };
            let agent = Agent::new(&g.agent).map_err(|_| Rejection::BadAgent { agent: g.agent.clone() })?;
            let premise = cited(g.from)?;
            if !line.formula.same_as(&Formula::modal(modality, &agent, premise.clone())) {
                return Err(Rejection::GeneralizationMismatch {
                    rule: rule.to_string(),
                    from: g.from,
                    agent: g.agent.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Checks every line in order and reports the first failure.
pub fn check_proof(pf: &Proof, opts: CheckOptions) -> ProofVerdict {
    let mut earlier: HashMap<usize, &Formula> = HashMap::new();
    let mut previous: Option<usize> = None;
    for line in &pf.lines {
        let verdict = match previous {
            Some(p) if line.n <= p => Err(Rejection::LineOrder { previous: p }),
            _ => check_line(line, &earlier, opts),
        };
        if let Err(reason) = verdict {
            return ProofVerdict::Rejected { line: line.n, reason };
        }
        earlier.insert(line.n, &line.formula);
        previous = Some(line.n);
    }
    ProofVerdict::Accepted
}

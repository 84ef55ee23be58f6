//! Single-token mutations of proofs: one modality, connective, agent name,
//! rule kind or cited line number changed.

use ail::proof::{Generalization, Justification, Proof};
use ail::syntax::{Agent, Connective, Formula, Modality};

fn other_agent(i: &Agent) -> Agent {
    Agent::new(if i.as_str() == "a" { "b" } else { "a" }).unwrap()
}

/// Every formula differing from `f` in exactly one operator or agent.
pub fn formula_mutants(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    match f {
        Formula::Atom(_) => {}
        Formula::Not(g) => out.extend(formula_mutants(g).into_iter().map(Formula::not)),
        Formula::Binary(op, l, r) => {
            for other in Connective::ALL.into_iter().filter(|o| o != op) {
                out.push(Formula::binary(other, (**l).clone(), (**r).clone()));
            }
            out.extend(formula_mutants(l).into_iter().map(|m| Formula::binary(*op, m, (**r).clone())));
            out.extend(formula_mutants(r).into_iter().map(|m| Formula::binary(*op, (**l).clone(), m)));
        }
        Formula::Modal(m, i, g) => {
            for other in Modality::ALL.into_iter().filter(|o| o != m) {
                out.push(Formula::modal(other, i, (**g).clone()));
            }
            out.push(Formula::modal(*m, &other_agent(i), (**g).clone()));
            out.extend(formula_mutants(g).into_iter().map(|h| Formula::modal(*m, i, h)));
        }
        Formula::Update(u, i, q, g) => {
            out.push(Formula::update(*u, &other_agent(i), q.clone(), (**g).clone()));
            out.extend(formula_mutants(g).into_iter().map(|h| Formula::update(*u, i, q.clone(), h)));
        }
    }
    out
}

fn justification_mutants(by: &Justification, line_numbers: &[usize]) -> Vec<Justification> {
    let others = |k: usize| line_numbers.iter().copied().filter(move |&n| n != k);
    match by {
        Justification::Axiom(_) | Justification::Taut => vec![],
        Justification::Mp([j, k]) => others(*j)
            .map(|x| Justification::Mp([x, *k]))
            .chain(others(*k).map(|x| Justification::Mp([*j, x])))
            .collect(),
        Justification::Gi(g) | Justification::Gsim(g) | Justification::Gek(g) => {
            let rules: [fn(Generalization) -> Justification; 3] =
                [Justification::Gi, Justification::Gsim, Justification::Gek];
            let mut out: Vec<Justification> = rules
                .iter()
                .map(|rule| rule(g.clone()))
                .filter(|j| j != by)
                .collect();
            let rebuild = |g: Generalization| match by {
                Justification::Gi(_) => Justification::Gi(g),
                Justification::Gsim(_) => Justification::Gsim(g),
                _ => Justification::Gek(g),
            };
            let flipped = other_agent(&Agent::new(&g.agent).unwrap()).to_string();
            out.push(rebuild(Generalization { from: g.from, agent: flipped }));
            out.extend(others(g.from).map(|x| rebuild(Generalization { from: x, agent: g.agent.clone() })));
            out
        }
    }
}

/// All single-token mutants of `pf`, each with a description.
pub fn proof_mutants(pf: &Proof) -> Vec<(String, Proof)> {
    let numbers: Vec<usize> = pf.lines.iter().map(|l| l.n).collect();
    let mut out = Vec::new();
    for (k, line) in pf.lines.iter().enumerate() {
        for m in formula_mutants(&line.formula) {
            let mut copy = pf.clone();
            copy.lines[k].formula = m.clone();
            out.push((format!("line {}: formula {m}", line.n), copy));
        }
        for by in justification_mutants(&line.by, &numbers) {
            let mut copy = pf.clone();
            copy.lines[k].by = by.clone();
            out.push((format!("line {}: by {by:?}", line.n), copy));
        }
    }
    out
}

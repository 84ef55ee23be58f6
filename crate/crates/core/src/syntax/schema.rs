//! Formula schemas: formulas whose designated atoms and agents are
//! metavariables.
//!
//! A schema is written in the ordinary formula syntax. Atom names listed as
//! formula variables range over formulas, atom variables range over atoms,
//! and agent names listed as agent variables range over agents. Matching is
//! performed modulo the definitional sugar of `|`, `->` and `<->`.

use std::collections::BTreeMap;
use std::fmt;

use super::{parse, Agent, Formula, Modality, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub pattern: Formula,
    pub formula_vars: Vec<String>,
    pub atom_vars: Vec<String>,
    pub agent_vars: Vec<String>,
    /// Placeholder atoms replaced on instantiation by `⋀_{p ∈ At(σ(var))} A_σ(agent) p`.
    pub aware_conjunctions: Vec<AwareConjunction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AwareConjunction {
    pub placeholder: String,
    pub agent_var: String,
    pub formula_var: String,
}

/// A metavariable assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Substitution {
    pub formulas: BTreeMap<String, Formula>,
    pub agents: BTreeMap<String, Agent>,
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        let entries = self
            .formulas
            .iter()
            .map(|(k, v)| (k, v.to_string()))
            .chain(self.agents.iter().map(|(k, v)| (k, v.to_string())));
        for (k, v) in entries {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{k} ↦ {v}")?;
        }
        f.write_str("}")
    }
}

impl Schema {
    /// Parses `text` and declares formula and agent metavariables.
    pub fn new(
        name: &str,
        text: &str,
        formula_vars: &[&str],
        agent_vars: &[&str],
    ) -> Result<Schema, ParseError> {
        Ok(Schema {
            name: name.to_string(),
            pattern: parse(text)?,
            formula_vars: formula_vars.iter().map(|s| s.to_string()).collect(),
            atom_vars: vec![],
            agent_vars: agent_vars.iter().map(|s| s.to_string()).collect(),
            aware_conjunctions: vec![],
        })
    }

    pub fn with_atom_vars(mut self, vars: &[&str]) -> Schema {
        self.atom_vars = vars.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_aware_conjunction(mut self, placeholder: &str, agent_var: &str, formula_var: &str) -> Schema {
        self.aware_conjunctions.push(AwareConjunction {
            placeholder: placeholder.to_string(),
            agent_var: agent_var.to_string(),
            formula_var: formula_var.to_string(),
        });
        self
    }

    /// Formula and atom variables occurring in the pattern, in declaration order.
    fn used_formula_vars(&self) -> Vec<&String> {
        let atoms = self.pattern.atoms();
        self.formula_vars
            .iter()
            .chain(&self.atom_vars)
            .filter(|v| atoms.iter().any(|a| a.as_str() == v.as_str()))
            .collect()
    }

    fn used_agent_vars(&self) -> Vec<&String> {
        let agents = self.pattern.agents();
        self.agent_vars
            .iter()
            .filter(|v| agents.iter().any(|a| a.as_str() == v.as_str()))
            .collect()
    }

    /// Replaces metavariables. Unbound metavariables are left in place.
    pub fn instantiate(&self, subst: &Substitution) -> Formula {
        self.instantiate_node(&self.pattern, subst)
    }

    fn instantiate_node(&self, node: &Formula, subst: &Substitution) -> Formula {
        let agent = |i: &Agent| subst.agents.get(i.as_str()).cloned().unwrap_or_else(|| i.clone());
        match node {
            Formula::Atom(a) => {
                if let Some(c) = self.aware_conjunctions.iter().find(|c| c.placeholder == a.as_str()) {
                    if let (Some(target), Some(i)) = (
                        subst.formulas.get(&c.formula_var),
                        subst.agents.get(&c.agent_var),
                    ) {
                        let parts = target
                            .atoms()
                            .into_iter()
                            .map(|p| Formula::modal(Modality::Aware, i, Formula::Atom(p)));
                        if let Some(conj) = Formula::conjunction(parts) {
                            return conj;
                        }
                    }
                }
                subst.formulas.get(a.as_str()).cloned().unwrap_or_else(|| node.clone())
            }
            Formula::Not(g) => Formula::not(self.instantiate_node(g, subst)),
            Formula::Binary(op, l, r) => Formula::binary(
                *op,
                self.instantiate_node(l, subst),
                self.instantiate_node(r, subst),
            ),
            Formula::Modal(m, i, g) => Formula::modal(*m, &agent(i), self.instantiate_node(g, subst)),
            Formula::Update(u, i, q, g) => {
                Formula::update(*u, &agent(i), q.clone(), self.instantiate_node(g, subst))
            }
        }
    }

    /// Every instance with formula variables drawn from `pool` and agent
    /// variables from `agents`, in lexicographic order of the assignment.
    pub fn instances(&self, pool: &[Formula], agents: &[Agent]) -> Vec<(Substitution, Formula)> {
        let fvars = self.used_formula_vars();
        let avars = self.used_agent_vars();
        let mut out = Vec::new();
        let mut fidx = vec![0usize; fvars.len()];
        if (!fvars.is_empty() && pool.is_empty()) || (!avars.is_empty() && agents.is_empty()) {
            return out;
        }
        loop {
            let mut aidx = vec![0usize; avars.len()];
            loop {
                let mut subst = Substitution::default();
                for (v, k) in fvars.iter().zip(&fidx) {
                    subst.formulas.insert((*v).clone(), pool[*k].clone());
                }
                for (v, k) in avars.iter().zip(&aidx) {
                    subst.agents.insert((*v).clone(), agents[*k].clone());
                }
                let inst = self.instantiate(&subst);
                out.push((subst, inst));
                if !odometer(&mut aidx, agents.len()) {
                    break;
                }
            }
            if !odometer(&mut fidx, pool.len()) {
                break;
            }
        }
        out
    }

    /// Matches `target` against the pattern modulo sugar, returning the
    /// witnessing substitution.
    pub fn matches(&self, target: &Formula) -> Option<Substitution> {
        let mut subst = Substitution::default();
        if self.match_node(&self.pattern.desugar(), &target.desugar(), &mut subst) {
            Some(subst)
        } else {
            None
        }
    }

    fn match_agent(&self, pat: &Agent, target: &Agent, subst: &mut Substitution) -> bool {
        if !self.agent_vars.iter().any(|v| v == pat.as_str()) {
            return pat == target;
        }
        match subst.agents.get(pat.as_str()) {
            Some(bound) => bound == target,
            None => {
                subst.agents.insert(pat.as_str().to_string(), target.clone());
                true
            }
        }
    }

    fn bind(&self, var: &str, target: &Formula, subst: &mut Substitution) -> bool {
        match subst.formulas.get(var) {
            Some(bound) => bound == target,
            None => {
                subst.formulas.insert(var.to_string(), target.clone());
                true
            }
        }
    }

    fn match_node(&self, pat: &Formula, target: &Formula, subst: &mut Substitution) -> bool {
        match (pat, target) {
            (Formula::Atom(a), _) if self.formula_vars.iter().any(|v| v == a.as_str()) => {
                self.bind(a.as_str(), target, subst)
            }
            (Formula::Atom(a), Formula::Atom(_)) if self.atom_vars.iter().any(|v| v == a.as_str()) => {
                self.bind(a.as_str(), target, subst)
            }
            (Formula::Atom(a), Formula::Atom(b)) => {
                !self.atom_vars.iter().any(|v| v == a.as_str()) && a == b
            }
            (Formula::Not(p), Formula::Not(t)) => self.match_node(p, t, subst),
            (Formula::Binary(o1, pl, pr), Formula::Binary(o2, tl, tr)) => {
                o1 == o2 && self.match_node(pl, tl, subst) && self.match_node(pr, tr, subst)
            }
            (Formula::Modal(m1, i, p), Formula::Modal(m2, j, t)) => {
                m1 == m2 && self.match_agent(i, j, subst) && self.match_node(p, t, subst)
            }
            (Formula::Update(u1, i, q1, p), Formula::Update(u2, j, q2, t)) => {
                u1 == u2 && q1 == q2 && self.match_agent(i, j, subst) && self.match_node(p, t, subst)
            }
            _ => false,
        }
    }
}

/// Advances a mixed-radix counter; false once it wraps around.
fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Convenience for building substitutions in tests and examples.
pub fn substitution(formulas: &[(&str, &str)], agents: &[(&str, &str)]) -> Substitution {
    Substitution {
        formulas: formulas
            .iter()
            .map(|(k, v)| (k.to_string(), parse(v).expect("valid formula")))
            .collect(),
        agents: agents
            .iter()
            .map(|(k, v)| (k.to_string(), Agent::new(v).expect("valid agent")))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn instantiation_over_pool() {
        let s = Schema::new("AN", "A[i] phi <-> A[i] ~phi", &["phi"], &["i"]).unwrap();
        let pool = [f("p"), f("p & q")];
        let agents = [Agent::new("i").unwrap()];
        let inst: Vec<String> = s
            .instances(&pool, &agents)
            .into_iter()
            .map(|(_, g)| g.to_string())
            .collect();
        assert_eq!(inst, ["A[i] p <-> A[i] ~p", "A[i](p & q) <-> A[i] ~(p & q)"]);
    }

    #[test]
    fn two_variable_instances_are_ordered() {
        let s = Schema::new("K", "I[i](phi -> psi) -> I[i] phi -> I[i] psi", &["phi", "psi"], &["i"]).unwrap();
        let pool = [f("p"), f("q")];
        let agents = [Agent::new("a").unwrap(), Agent::new("b").unwrap()];
        let inst = s.instances(&pool, &agents);
        assert_eq!(inst.len(), 8);
        assert_eq!(inst[0].1.to_string(), "I[a](p -> p) -> I[a] p -> I[a] p");
        assert_eq!(inst[1].1.to_string(), "I[b](p -> p) -> I[b] p -> I[b] p");
        assert_eq!(inst[2].1.to_string(), "I[a](p -> q) -> I[a] p -> I[a] q");
    }

    #[test]
    fn aware_conjunction_placeholder() {
        let s = Schema::new("red", "A[i] phi <-> allaware", &["phi"], &["i"])
            .unwrap()
            .with_aware_conjunction("allaware", "i", "phi");
        let g = s.instantiate(&substitution(&[("phi", "q & I[i] p")], &[("i", "i")]));
        assert_eq!(g, f("A[i](q & I[i] p) <-> A[i] p & A[i] q"));
    }

    #[test]
    fn matching_binds_consistently() {
        let t = Schema::new("T_I", "I[i] phi -> phi", &["phi"], &["i"]).unwrap();
        assert_eq!(
            t.matches(&f("I[a] p -> p")),
            Some(substitution(&[("phi", "p")], &[("i", "a")]))
        );
        assert_eq!(t.matches(&f("I[a] p -> q")), None);
        assert_eq!(t.matches(&f("p -> I[a] p")), None);
        // Sugar-insensitive.
        assert!(t.matches(&f("~(I[a] p & ~p)")).is_some());
    }

    #[test]
    fn atom_variables_only_match_atoms() {
        let s = Schema::new("AA[S]", "A[i] p & p -> S[i] p", &[], &["i"])
            .unwrap()
            .with_atom_vars(&["p"]);
        assert!(s.matches(&f("A[a] q & q -> S[a] q")).is_some());
        assert!(s.matches(&f("A[a] ~q & ~q -> S[a] ~q")).is_none());
    }
}

use std::sync::OnceLock;

use crate::syntax::schema::{Schema, Substitution};
use crate::syntax::Formula;

/// An axiom schema of the Hilbert system.
#[derive(Clone, Debug)]
pub struct Axiom {
    /// ASCII name, with `S` for the A-equivalence box and `C` for the EK box.
    pub name: &'static str,
    /// The same name in mathematical notation.
    pub symbol: &'static str,
    pub schema: Schema,
}

/// `(name, symbol, pattern)`. Formula metavariables are `phi` and `psi`,
/// agent metavariables `i` and `j`; `AA[S]` ranges over atoms `p` only.
const TABLE: [(&str, &str, &str); 20] = [
    ("AN", "AN", "A[i] phi <-> A[i] ~phi"),
    ("AC", "AC", "A[i](phi & psi) <-> A[i] phi & A[i] psi"),
    ("AA", "AA", "A[i] phi <-> A[i] A[j] phi"),
    ("AI", "AI", "A[i] phi <-> A[i] I[j] phi"),
    ("A[S]", "A[≈]", "A[i] phi <-> A[i] S[j] phi"),
    ("A[C]", "A[∘⁺]", "A[i] phi <-> A[i] C[j] phi"),
    ("AE", "AE", "A[i] phi <-> A[i] E[j] phi"),
    ("IA", "IA", "A[i] phi -> I[i] A[i] phi"),
    ("INA", "INA", "~A[i] phi -> I[i] ~A[i] phi"),
    ("AA[S]", "AA[≈]", "A[i] p & p -> S[i] p"),
    ("K_I", "K_I", "I[i](phi -> psi) -> I[i] phi -> I[i] psi"),
    ("T_I", "T_I", "I[i] phi -> phi"),
    ("5_I", "5_I", "~I[i] phi -> I[i] ~I[i] phi"),
    ("K_S", "K_[≈]", "S[i](phi -> psi) -> S[i] phi -> S[i] psi"),
    ("T_S", "T_[≈]", "S[i] phi -> phi"),
    ("5_S", "5_[≈]", "~S[i] phi -> S[i] ~S[i] phi"),
    ("K_C", "K_[∘⁺]", "C[i](phi -> psi) -> C[i] phi -> C[i] psi"),
    ("MIX", "MIX", "C[i] phi -> phi & S[i] I[i] C[i] phi"),
    ("IND", "IND", "C[i](phi -> S[i] I[i] phi) -> phi -> C[i] phi"),
    ("EA[C]", "EA[∘⁺]", "E[i] phi <-> A[i] phi & C[i] phi"),
];

/// All axiom schemata in table order.
pub fn axioms() -> &'static [Axiom] {
    static AXIOMS: OnceLock<Vec<Axiom>> = OnceLock::new();
    AXIOMS.get_or_init(|| {
        TABLE
            .iter()
            .map(|&(name, symbol, text)| {
                let mut schema = Schema::new(name, text, &["phi", "psi"], &["i", "j"]).expect("axiom pattern parses");
                if name == "AA[S]" {
                    schema = schema.with_atom_vars(&["p"]);
                }
                Axiom { name, symbol, schema }
            })
            .collect()
    })
}

/// Looks up an axiom by its ASCII or symbolic name. `[≈]` and `[∘⁺]` may
/// also be written `[S]`/`S` and `[C]`/`C`, and `A[∘⁺]M` is accepted for
/// `A[C]`.
pub fn axiom_by_name(name: &str) -> Option<&'static Axiom> {
    let normalized = name
        .replace("[≈]", "[S]")
        .replace("[∘⁺]", "[C]")
        .replace("K_[S]", "K_S")
        .replace("T_[S]", "T_S")
        .replace("5_[S]", "5_S")
        .replace("K_[C]", "K_C");
    let normalized = if normalized == "A[C]M" { "A[C]".to_string() } else { normalized };
    axioms().iter().find(|a| a.name == normalized || a.symbol == name)
}

/// Every schema `f` is an instance of, with the witnessing substitution.
pub fn match_axiom(f: &Formula) -> Vec<(&'static str, Substitution)> {
    if f.has_updates() {
        return vec![];
    }
    axioms()
        .iter()
        .filter_map(|a| a.schema.matches(f).map(|s| (a.name, s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use crate::syntax::schema::substitution;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(match_axiom(&f("I[a] p -> p")), vec![("T_I", substitution(&[("phi", "p")], &[("i", "a")]))]);
        assert_eq!(match_axiom(&f("A[a] p <-> A[a] ~p")), vec![("AN", substitution(&[("phi", "p")], &[("i", "a")]))]);
        assert_eq!(match_axiom(&f("p -> I[a] p")), vec![]);
    }

    #[test]
    fn distinct_agents_allowed_where_the_table_says_so() {
        assert_eq!(match_axiom(&f("A[a] q <-> A[a] E[b] q"))[0].0, "AE");
        assert!(match_axiom(&f("I[a] p -> I[b] A[a] p")).is_empty());
    }

    #[test]
    fn atom_only_schema() {
        assert_eq!(match_axiom(&f("A[a] r & r -> S[a] r"))[0].0, "AA[S]");
        assert!(match_axiom(&f("A[a] ~r & ~r -> S[a] ~r")).is_empty());
    }

    #[test]
    fn names_and_aliases() {
        assert_eq!(axiom_by_name("EA[C]").unwrap().name, "EA[C]");
        assert_eq!(axiom_by_name("EA[∘⁺]").unwrap().name, "EA[C]");
        assert_eq!(axiom_by_name("K_[≈]").unwrap().name, "K_S");
        assert_eq!(axiom_by_name("A[∘⁺]M").unwrap().name, "A[C]");
        assert_eq!(axiom_by_name("AA[≈]").unwrap().name, "AA[S]");
        assert!(axiom_by_name("TAUT").is_none());
        assert!(axiom_by_name("K").is_none());
    }

    #[test]
    fn every_axiom_recognizes_its_own_instances() {
        let pool = [f("p"), f("q & E[b] p"), f("~A[a] r")];
        let agents = [crate::syntax::Agent::new("a").unwrap(), crate::syntax::Agent::new("b").unwrap()];
        for ax in axioms() {
            let pool: &[Formula] = if ax.name == "AA[S]" { &pool[..1] } else { &pool };
            for (_, inst) in ax.schema.instances(pool, &agents) {
                assert!(
                    match_axiom(&inst).iter().any(|(n, _)| *n == ax.name),
                    "{} not recognized in {inst}",
                    ax.name
                );
            }
        }
    }
}

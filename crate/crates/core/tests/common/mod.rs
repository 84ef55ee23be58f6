//! Shared generators and reference implementations for the integration
//! tests.

#![allow(dead_code)]

pub mod mutate;
pub mod oracle;

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::strategy::{Union, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use ail::model::{random_model, EpistemicModel};
use ail::syntax::{Agent, Atom, Formula, Modality, Update};

pub fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::new(n).unwrap()).collect()
}

pub fn agents(names: &[&str]) -> Vec<Agent> {
    names.iter().map(|n| Agent::new(n).unwrap()).collect()
}

pub fn f(text: &str) -> Formula {
    ail::syntax::parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Which constructors random formulas may use.
#[derive(Clone, Debug)]
pub struct Lang {
    pub atoms: Vec<Atom>,
    pub agents: Vec<Agent>,
    pub modalities: Vec<Modality>,
    pub updates: bool,
}

impl Lang {
    /// Static language: every modality, no updates.
    pub fn new(atom_names: &[&str], agent_names: &[&str]) -> Lang {
        Lang {
            atoms: atoms(atom_names),
            agents: agents(agent_names),
            modalities: Modality::ALL.to_vec(),
            updates: false,
        }
    }

    pub fn with_modalities(mut self, ms: &[Modality]) -> Lang {
        self.modalities = ms.to_vec();
        self
    }

    /// The FH fragment: `A`, `I` and `E` only.
    pub fn fh(self) -> Lang {
        self.with_modalities(&[Modality::Aware, Modality::Implicit, Modality::Explicit])
    }

    pub fn propositional(self) -> Lang {
        self.with_modalities(&[])
    }

    pub fn with_updates(mut self) -> Lang {
        self.updates = true;
        self
    }
}

fn layer(lang: &Lang, sub: &BoxedStrategy<Formula>, static_sub: &BoxedStrategy<Formula>, updates: bool) -> BoxedStrategy<Formula> {
    let leaf = prop::sample::select(lang.atoms.clone()).prop_map(Formula::Atom).boxed();
    let mut options: Vec<(u32, BoxedStrategy<Formula>)> = vec![
        (2, leaf),
        (2, sub.clone().prop_map(Formula::not).boxed()),
        (
            3,
            (prop::sample::select(ail::syntax::Connective::ALL.to_vec()), sub.clone(), sub.clone())
                .prop_map(|(op, l, r)| Formula::binary(op, l, r))
                .boxed(),
        ),
    ];
    if !lang.modalities.is_empty() {
        options.push((
            4,
            (
                prop::sample::select(lang.modalities.clone()),
                prop::sample::select(lang.agents.clone()),
                sub.clone(),
                static_sub.clone(),
            )
                // Updates may not occur under awareness.
                .prop_map(|(m, i, g, static_g)| match m {
                    Modality::Aware => Formula::modal(m, &i, static_g),
                    _ => Formula::modal(m, &i, g),
                })
                .boxed(),
        ));
    }
    if updates {
        let n = lang.atoms.len();
        options.push((
            2,
            (
                any::<bool>(),
                prop::sample::select(lang.agents.clone()),
                prop::sample::subsequence(lang.atoms.clone(), 1..=n),
                sub.clone(),
            )
                .prop_map(|(add, i, q, g)| {
                    let u = if add { Update::Add } else { Update::Remove };
                    Formula::update(u, &i, q.into_iter().collect::<BTreeSet<_>>(), g)
                })
                .boxed(),
        ));
    }
    Union::new_weighted(options).boxed()
}

/// Formulas over `lang` of tree depth at most `depth`.
pub fn formula(lang: &Lang, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop::sample::select(lang.atoms.clone()).prop_map(Formula::Atom).boxed();
    let (mut full, mut fixed) = (leaf.clone(), leaf);
    for _ in 0..depth {
        let next_static = layer(lang, &fixed, &fixed, false);
        full = if lang.updates { layer(lang, &full, &fixed, true) } else { next_static.clone() };
        fixed = next_static;
    }
    full
}

/// Random models of 1 to `max_worlds` worlds.
pub fn model(atom_list: Vec<Atom>, agent_list: Vec<Agent>, max_worlds: usize) -> BoxedStrategy<EpistemicModel> {
    (1..=max_worlds, any::<u64>())
        .prop_map(move |(n, seed)| random_model(&atom_list, &agent_list, n, seed))
        .boxed()
}

/// A deterministic source of samples for fixed-count loops.
pub fn sampler(seed: u8) -> TestRunner {
    TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

pub fn sample<S: Strategy>(s: &S, runner: &mut TestRunner) -> S::Value {
    s.new_tree(runner).expect("strategy yields a value").current()
}

/// A copy of `m` with one more atom, true at the worlds in `truth` and in
/// no agent's awareness.
pub fn with_fresh_atom(m: &EpistemicModel, fresh: &Atom, truth: impl Fn(usize) -> bool) -> EpistemicModel {
    let mut all = m.atoms().to_vec();
    all.push(fresh.clone());
    let mut out = EpistemicModel::new(m.worlds().to_vec(), m.agents().to_vec(), all).unwrap();
    copy_into(m, &mut out);
    for w in 0..m.world_count() {
        out.set_truth(fresh, m.world_name(w), truth(w)).unwrap();
    }
    out
}

fn copy_into(m: &EpistemicModel, out: &mut EpistemicModel) {
    for (p, a) in m.atoms().iter().enumerate() {
        for w in 0..m.world_count() {
            out.set_truth(a, m.world_name(w), m.holds(p, w)).unwrap();
        }
    }
    for (k, i) in m.agents().iter().enumerate() {
        for (w, v) in m.ik_pairs(k) {
            out.relate(i, m.world_name(w), m.world_name(v)).unwrap();
        }
        for w in 0..m.world_count() {
            out.set_awareness(i, m.world_name(w), &m.awareness_atoms(k, w)).unwrap();
        }
    }
}

/// A copy of `m` where `agent` has its world-0 awareness set everywhere.
pub fn with_uniform_awareness(m: &EpistemicModel, agent: &Agent) -> EpistemicModel {
    let k = m.agent_index(agent).unwrap();
    let set = m.awareness_atoms(k, 0);
    let mut out = m.clone();
    for w in m.worlds().to_vec() {
        out.set_awareness(agent, &w, &set).unwrap();
    }
    out
}

/// No two worlds agree on every atom.
pub fn has_injective_valuation(m: &EpistemicModel) -> bool {
    let key = |w: usize| (0..m.atoms().len()).map(|p| m.holds(p, w)).collect::<Vec<_>>();
    let keys: BTreeSet<Vec<bool>> = (0..m.world_count()).map(key).collect();
    keys.len() == m.world_count()
}

/// Two copies of every world with the relations and labels copied; the
/// identity-or-copy relation is a bisimulation.
pub fn doubled(m: &EpistemicModel) -> EpistemicModel {
    let n = m.world_count();
    let names: Vec<String> = (0..2 * n)
        .map(|k| if k < n { m.world_name(k).to_string() } else { format!("{}_copy", m.world_name(k - n)) })
        .collect();
    let mut out = EpistemicModel::new(names.clone(), m.agents().to_vec(), m.atoms().to_vec()).unwrap();
    for (p, a) in m.atoms().iter().enumerate() {
        for w in 0..2 * n {
            out.set_truth(a, &names[w], m.holds(p, w % n)).unwrap();
        }
    }
    for (k, i) in m.agents().iter().enumerate() {
        for (w, v) in m.ik_pairs(k) {
            for (x, y) in [(w, v), (w, v + n), (w + n, v), (w + n, v + n)] {
                out.relate(i, &names[x], &names[y]).unwrap();
            }
        }
        for w in 0..2 * n {
            out.set_awareness(i, &names[w], &m.awareness_atoms(k, w % n)).unwrap();
        }
    }
    out
}

/// A random instance of a random axiom schema, with formula variables
/// drawn from `formula(lang, depth)`.
pub fn axiom_instance(lang: &Lang, depth: u32) -> BoxedStrategy<(&'static str, Formula)> {
    use ail::syntax::schema::Substitution;
    let count = ail::proof::axioms().len();
    (
        0..count,
        formula(lang, depth),
        formula(lang, depth),
        prop::sample::select(lang.atoms.clone()),
        prop::sample::select(lang.agents.clone()),
        prop::sample::select(lang.agents.clone()),
    )
        .prop_map(|(k, phi, psi, p, i, j)| {
            let ax = &ail::proof::axioms()[k];
            let mut s = Substitution::default();
            s.formulas.insert("phi".into(), phi);
            s.formulas.insert("psi".into(), psi);
            s.formulas.insert("p".into(), Formula::Atom(p));
            s.agents.insert("i".into(), i);
            s.agents.insert("j".into(), j);
            (ax.name, ax.schema.instantiate(&s))
        })
        .boxed()
}

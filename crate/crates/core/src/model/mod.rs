//! Finite epistemic models with awareness and their derived relations.

mod enumerate;
mod io;
mod partition;
mod relations;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Agent, Atom, Update};

pub use enumerate::{enumerate_models, random_model, ModelSpace};
pub use io::{load_model, model_from_json, model_to_json, IkSpec, LoadOptions, ModelFile};
pub use partition::{DisjointSet, Partition};
pub use relations::DerivedRelations;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("duplicate {kind} {name:?}")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("invalid name: {0}")]
    Name(#[from] crate::syntax::NameError),
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// A failed structural requirement, naming the agent and witnessing worlds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "kebab-case")]
pub enum Violation {
    NoWorlds,
    Reflexivity { agent: String, world: String },
    Symmetry { agent: String, worlds: [String; 2] },
    Transitivity { agent: String, worlds: [String; 3] },
    Ka { agent: String, worlds: [String; 2] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWorlds => write!(f, "nonempty: the model has no worlds"),
            Violation::Reflexivity { agent, world } => {
                write!(f, "reflexivity: agent {agent} at ({world}, {world})")
            }
            Violation::Symmetry { agent, worlds: [w, v] } => {
                write!(f, "symmetry: agent {agent} relates ({w}, {v}) but not ({v}, {w})")
            }
            Violation::Transitivity { agent, worlds: [w, v, u] } => write!(
                f,
                "transitivity: agent {agent} relates ({w}, {v}) and ({v}, {u}) but not ({w}, {u})"
            ),
            Violation::Ka { agent, worlds: [w, v] } => write!(
                f,
                "ka: agent {agent} at ({w}, {v}): related worlds with different awareness"
            ),
        }
    }
}

/// `M = (W, {∼ᵢ}, {𝒜ᵢ}, V)` over declared atom and agent universes.
///
/// Worlds, agents and atoms are addressed by index; names are kept for I/O.
/// The IK relations are stored as given so that [`EpistemicModel::validate`]
/// can report non-equivalences rather than silently repairing them.
#[derive(Clone)]
pub struct EpistemicModel {
    worlds: Vec<String>,
    agents: Vec<Agent>,
    atoms: Vec<Atom>,
    /// Indexed by atom, then world.
    valuation: Vec<FixedBitSet>,
    /// Indexed by agent, then world: the ∼ᵢ-successors.
    ik: Vec<Vec<FixedBitSet>>,
    /// Indexed by agent, then world: a set of atom indices.
    awareness: Vec<Vec<FixedBitSet>>,
    derived: OnceLock<DerivedRelations>,
}

fn check_unique<'a>(kind: &'static str, names: impl IntoIterator<Item = &'a str>) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(ModelError::Duplicate { kind, name: n.to_string() });
        }
    }
    Ok(())
}

impl EpistemicModel {
    /// A model in which every atom is false, every ∼ᵢ is the identity and
    /// every awareness set is empty.
    pub fn new(worlds: Vec<String>, agents: Vec<Agent>, atoms: Vec<Atom>) -> Result<Self, ModelError> {
        check_unique("world", worlds.iter().map(String::as_str))?;
        check_unique("agent", agents.iter().map(Agent::as_str))?;
        check_unique("atom", atoms.iter().map(Atom::as_str))?;
        let n = worlds.len();
        let identity: Vec<FixedBitSet> = (0..n)
            .map(|w| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(w);
                row
            })
            .collect();
        Ok(EpistemicModel {
            valuation: vec![FixedBitSet::with_capacity(n); atoms.len()],
            ik: vec![identity; agents.len()],
            awareness: vec![vec![FixedBitSet::with_capacity(atoms.len()); n]; agents.len()],
            worlds,
            agents,
            atoms,
            derived: OnceLock::new(),
        })
    }

    /// Builds a model from index data, taking each ∼ᵢ from a partition.
    pub(crate) fn from_parts(
        worlds: Vec<String>,
        agents: Vec<Agent>,
        atoms: Vec<Atom>,
        valuation: Vec<FixedBitSet>,
        ik: &[Partition],
        awareness: Vec<Vec<FixedBitSet>>,
    ) -> Self {
        EpistemicModel {
            ik: ik.iter().map(Partition::to_relation).collect(),
            worlds,
            agents,
            atoms,
            valuation,
            awareness,
            derived: OnceLock::new(),
        }
    }

    fn touched(&mut self) {
        self.derived = OnceLock::new();
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    pub fn agent_index(&self, agent: &Agent) -> Result<usize, ModelError> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| ModelError::UnknownAgent(agent.to_string()))
    }

    pub fn atom_index(&self, atom: &Atom) -> Result<usize, ModelError> {
        self.atoms
            .iter()
            .position(|a| a == atom)
            .ok_or_else(|| ModelError::UnknownAtom(atom.to_string()))
    }

    /// `V(p)` as a world set.
    pub fn truth_set(&self, atom: usize) -> &FixedBitSet {
        &self.valuation[atom]
    }

    pub fn holds(&self, atom: usize, w: usize) -> bool {
        self.valuation[atom].contains(w)
    }

    /// `𝒜ᵢ(w)` as a set of atom indices.
    pub fn awareness_set(&self, agent: usize, w: usize) -> &FixedBitSet {
        &self.awareness[agent][w]
    }

    pub fn awareness_atoms(&self, agent: usize, w: usize) -> BTreeSet<Atom> {
        self.awareness[agent][w].ones().map(|p| self.atoms[p].clone()).collect()
    }

    pub fn ik_related(&self, agent: usize, w: usize, v: usize) -> bool {
        self.ik[agent][w].contains(v)
    }

    /// The stored ∼ᵢ pairs, ascending.
    pub fn ik_pairs(&self, agent: usize) -> Vec<(usize, usize)> {
        self.ik[agent]
            .iter()
            .enumerate()
            .flat_map(|(w, row)| row.ones().map(move |v| (w, v)))
            .collect()
    }

    pub fn set_truth(&mut self, atom: &Atom, world: &str, value: bool) -> Result<(), ModelError> {
        let (p, w) = (self.atom_index(atom)?, self.world_index(world)?);
        self.valuation[p].set(w, value);
        self.touched();
        Ok(())
    }

    /// Adds the pair `(w, v)` to `∼ᵢ` verbatim.
    pub fn relate(&mut self, agent: &Agent, w: &str, v: &str) -> Result<(), ModelError> {
        let (i, w, v) = (self.agent_index(agent)?, self.world_index(w)?, self.world_index(v)?);
        self.ik[i][w].insert(v);
        self.touched();
        Ok(())
    }

    /// Replaces `∼ᵢ` by its reflexive, symmetric and transitive closure.
    pub fn close_ik(&mut self, agent: &Agent) -> Result<(), ModelError> {
        let i = self.agent_index(agent)?;
        let part = Partition::from_pairs(self.world_count(), self.ik_pairs(i));
        self.ik[i] = part.to_relation();
        self.touched();
        Ok(())
    }

    pub fn set_awareness(&mut self, agent: &Agent, world: &str, atoms: &BTreeSet<Atom>) -> Result<(), ModelError> {
        let (i, w) = (self.agent_index(agent)?, self.world_index(world)?);
        let mut set = FixedBitSet::with_capacity(self.atoms.len());
        for a in atoms {
            set.insert(self.atom_index(a)?);
        }
        self.awareness[i][w] = set;
        self.touched();
        Ok(())
    }

    /// Checks the structural requirements on a model: a nonempty world set,
    /// each `∼ᵢ` an equivalence relation, and awareness constant along `∼ᵢ`.
    /// Valuation and awareness stay inside the declared universes by
    /// construction.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.world_count();
        if n == 0 {
            out.push(Violation::NoWorlds);
        }
        let name = |w: usize| self.worlds[w].clone();
        for (i, rel) in self.ik.iter().enumerate() {
            let agent = self.agents[i].to_string();
            for w in 0..n {
                if !rel[w].contains(w) {
                    out.push(Violation::Reflexivity { agent: agent.clone(), world: name(w) });
                }
            }
            for (w, v) in self.ik_pairs(i) {
                if !rel[v].contains(w) {
                    out.push(Violation::Symmetry { agent: agent.clone(), worlds: [name(w), name(v)] });
                }
            }
            for (w, v) in self.ik_pairs(i) {
                for u in rel[v].ones() {
                    if !rel[w].contains(u) {
                        out.push(Violation::Transitivity {
                            agent: agent.clone(),
                            worlds: [name(w), name(v), name(u)],
                        });
                    }
                }
            }
            for (w, v) in self.ik_pairs(i) {
                if w < v && self.awareness[i][w] != self.awareness[i][v] {
                    out.push(Violation::Ka { agent: agent.clone(), worlds: [name(w), name(v)] });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// `≈ᵢ`, `∼ᵢ` and EK-accessibility partitions, computed on first use.
    pub fn derived(&self) -> &DerivedRelations {
        self.derived.get_or_init(|| DerivedRelations::compute(self))
    }

    /// `M[+Q]ᵢ` or `M[−Q]ᵢ`: agent `i`'s awareness gains or loses `Q` at every
    /// world; nothing else changes.
    pub fn update_awareness(&self, agent: &Agent, q: &BTreeSet<Atom>, direction: Update) -> Result<Self, ModelError> {
        let i = self.agent_index(agent)?;
        let mut mask = FixedBitSet::with_capacity(self.atoms.len());
        for a in q {
            mask.insert(self.atom_index(a)?);
        }
        Ok(self.update_awareness_indexed(i, &mask, direction))
    }

    pub(crate) fn update_awareness_indexed(&self, agent: usize, mask: &FixedBitSet, direction: Update) -> Self {
        let mut out = EpistemicModel {
            worlds: self.worlds.clone(),
            agents: self.agents.clone(),
            atoms: self.atoms.clone(),
            valuation: self.valuation.clone(),
            ik: self.ik.clone(),
            awareness: self.awareness.clone(),
            derived: OnceLock::new(),
        };
        for set in &mut out.awareness[agent] {
            match direction {
                Update::Add => set.union_with(mask),
                Update::Remove => set.difference_with(mask),
            }
        }
        out
    }
}

impl fmt::Debug for EpistemicModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&model_to_json(self).to_string())
    }
}

impl PartialEq for EpistemicModel {
    fn eq(&self, other: &Self) -> bool {
        self.worlds == other.worlds
            && self.agents == other.agents
            && self.atoms == other.atoms
            && self.valuation == other.valuation
            && self.ik == other.ik
            && self.awareness == other.awareness
    }
}

impl Eq for EpistemicModel {}

/// Free-function form of [`EpistemicModel::validate`].
pub fn validate_model(m: &EpistemicModel) -> Result<(), Vec<Violation>> {
    m.validate()
}

pub fn a_equivalence(m: &EpistemicModel, agent: &Agent) -> Result<Partition, ModelError> {
    Ok(m.derived().a_equiv[m.agent_index(agent)?].clone())
}

pub fn ek_accessibility(m: &EpistemicModel, agent: &Agent) -> Result<Partition, ModelError> {
    Ok(m.derived().ek[m.agent_index(agent)?].clone())
}

pub fn update_awareness(
    m: &EpistemicModel,
    agent: &Agent,
    q: &BTreeSet<Atom>,
    direction: Update,
) -> Result<EpistemicModel, ModelError> {
    m.update_awareness(agent, q, direction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn agent(s: &str) -> Agent {
        Agent::new(s).unwrap()
    }

    fn atom_set(s: &[&str]) -> BTreeSet<Atom> {
        s.iter().map(|a| Atom::new(a).unwrap()).collect()
    }

    #[test]
    fn single_world_is_valid() {
        let mut m = EpistemicModel::new(names(&["w"]), vec![agent("i")], vec![Atom::new("p").unwrap()]).unwrap();
        m.set_awareness(&agent("i"), "w", &atom_set(&["p"])).unwrap();
        assert_eq!(m.validate(), Ok(()));
    }

    #[test]
    fn ka_violation_is_reported() {
        let mut m = EpistemicModel::new(names(&["w", "v"]), vec![agent("i")], vec![Atom::new("p").unwrap()]).unwrap();
        m.relate(&agent("i"), "w", "v").unwrap();
        m.relate(&agent("i"), "v", "w").unwrap();
        m.set_awareness(&agent("i"), "w", &atom_set(&["p"])).unwrap();
        let errs = m.validate().unwrap_err();
        assert_eq!(
            errs,
            vec![Violation::Ka { agent: "i".into(), worlds: ["w".into(), "v".into()] }]
        );
        assert!(errs[0].to_string().starts_with("ka: agent i at (w, v)"));
    }

    #[test]
    fn equivalence_violations_are_reported() {
        let mut m = EpistemicModel::new(names(&["w", "v", "u"]), vec![agent("i")], vec![]).unwrap();
        m.relate(&agent("i"), "w", "v").unwrap();
        m.relate(&agent("i"), "v", "u").unwrap();
        let errs = m.validate().unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, Violation::Symmetry { .. })));
        assert!(errs.iter().any(|e| matches!(e, Violation::Transitivity { .. })));
        m.close_ik(&agent("i")).unwrap();
        assert_eq!(m.validate(), Ok(()));
        assert!(m.ik_related(0, 0, 2));
    }

    #[test]
    fn empty_model_is_rejected() {
        let m = EpistemicModel::new(vec![], vec![agent("i")], vec![]).unwrap();
        assert_eq!(m.validate(), Err(vec![Violation::NoWorlds]));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            EpistemicModel::new(names(&["w", "w"]), vec![], vec![]),
            Err(ModelError::Duplicate { kind: "world", .. })
        ));
    }

    #[test]
    fn add_then_remove_and_back() {
        let i = agent("i");
        let mut m = EpistemicModel::new(names(&["w", "v"]), vec![i.clone()], atom_set(&["p", "q", "r"]).into_iter().collect()).unwrap();
        m.set_awareness(&i, "w", &atom_set(&["p", "q"])).unwrap();
        m.set_awareness(&i, "v", &atom_set(&["r"])).unwrap();
        let q = atom_set(&["q", "r"]);
        let m1 = m.update_awareness(&i, &q, Update::Add).unwrap().update_awareness(&i, &q, Update::Remove).unwrap();
        assert_eq!(m1.awareness_atoms(0, 0), atom_set(&["p"]));
        assert_eq!(m1.awareness_atoms(0, 1), atom_set(&[]));
        let m2 = m.update_awareness(&i, &q, Update::Remove).unwrap().update_awareness(&i, &q, Update::Add).unwrap();
        assert_eq!(m2.awareness_atoms(0, 0), atom_set(&["p", "q", "r"]));
        assert_eq!(m2.awareness_atoms(0, 1), atom_set(&["q", "r"]));
        assert!(matches!(
            m.update_awareness(&i, &atom_set(&["zz"]), Update::Add),
            Err(ModelError::UnknownAtom(_))
        ));
    }
}

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EpistemicModel, ModelError};
use crate::syntax::{Agent, Atom};

/// On-disk model description.
///
/// Atoms missing from `valuation` are false everywhere, agents missing from
/// `awareness` (or worlds missing under an agent) are unaware of everything,
/// and agents missing from `ik` get the identity relation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub agents: Vec<String>,
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub ik: BTreeMap<String, IkSpec>,
    #[serde(default)]
    pub awareness: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

/// An IK relation, either as pairs or as blocks.
///
/// Pairs with `"closed": false` are closed under reflexivity, symmetry and
/// transitivity on load. Otherwise pairs are kept verbatim and must already
/// form an equivalence relation. Blocks relate all members of each block and
/// are likewise taken verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IkSpec {
    Pairs {
        pairs: Vec<[String; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        closed: Option<bool>,
    },
    Blocks { blocks: Vec<Vec<String>> },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Close every pair-list relation, whatever its `closed` flag says.
    pub close_ik: bool,
}

impl ModelFile {
    pub fn into_model(self, opts: LoadOptions) -> Result<EpistemicModel, ModelError> {
        let agents = self.agents.iter().map(|a| Agent::new(a)).collect::<Result<Vec<_>, _>>()?;
        let atoms = self.atoms.iter().map(|a| Atom::new(a)).collect::<Result<Vec<_>, _>>()?;
        let mut m = EpistemicModel::new(self.worlds.clone(), agents, atoms)?;
        for (atom, worlds) in &self.valuation {
            let atom = Atom::new(atom)?;
            for w in worlds {
                m.set_truth(&atom, w, true)?;
            }
        }
        for (agent, spec) in &self.ik {
            let agent = Agent::new(agent)?;
            let i = m.agent_index(&agent)?;
            // An explicit relation replaces the identity default.
            for row in &mut m.ik[i] {
                row.clear();
            }
            match spec {
                IkSpec::Pairs { pairs, closed } => {
                    for [w, v] in pairs {
                        m.relate(&agent, w, v)?;
                    }
                    if opts.close_ik || *closed == Some(false) {
                        m.close_ik(&agent)?;
                    }
                }
                IkSpec::Blocks { blocks } => {
                    for block in blocks {
                        for w in block {
                            for v in block {
                                m.relate(&agent, w, v)?;
                            }
                        }
                    }
                }
            }
        }
        for (agent, per_world) in &self.awareness {
            let agent = Agent::new(agent)?;
            for (w, atoms) in per_world {
                let set = atoms.iter().map(|a| Atom::new(a)).collect::<Result<BTreeSet<_>, _>>()?;
                m.set_awareness(&agent, w, &set)?;
            }
        }
        Ok(m)
    }

    pub fn from_model(m: &EpistemicModel) -> ModelFile {
        let name = |w: usize| m.world_name(w).to_string();
        let valuation = m
            .atoms()
            .iter()
            .enumerate()
            .map(|(p, a)| (a.to_string(), m.truth_set(p).ones().map(name).collect()))
            .collect();
        let ik = m
            .agents()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let part = &m.derived().ik[i];
                let spec = if part.to_relation() == m.ik[i] {
                    IkSpec::Blocks {
                        blocks: part.blocks().iter().map(|b| b.iter().map(|&w| name(w)).collect()).collect(),
                    }
                } else {
                    IkSpec::Pairs {
                        pairs: m.ik_pairs(i).into_iter().map(|(w, v)| [name(w), name(v)]).collect(),
                        closed: Some(true),
                    }
                };
                (a.to_string(), spec)
            })
            .collect();
        let awareness = m
            .agents()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let per_world = (0..m.world_count())
                    .map(|w| (name(w), m.awareness_atoms(i, w).iter().map(Atom::to_string).collect()))
                    .collect();
                (a.to_string(), per_world)
            })
            .collect();
        ModelFile {
            worlds: m.worlds().to_vec(),
            agents: m.agents().iter().map(Agent::to_string).collect(),
            atoms: m.atoms().iter().map(Atom::to_string).collect(),
            valuation,
            ik,
            awareness,
        }
    }
}

pub fn model_from_json(text: &str, opts: LoadOptions) -> Result<EpistemicModel, ModelError> {
    serde_json::from_str::<ModelFile>(text)?.into_model(opts)
}

pub fn load_model(path: &Path, opts: LoadOptions) -> Result<EpistemicModel, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    model_from_json(&text, opts)
}

pub fn model_to_json(m: &EpistemicModel) -> serde_json::Value {
    serde_json::to_value(ModelFile::from_model(m)).expect("model files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Violation;

    const CHAIN: &str = r#"{
        "worlds": ["w", "v", "u"],
        "agents": ["i"],
        "atoms": ["p"],
        "valuation": {"p": ["w"]},
        "ik": {"i": {"pairs": [["w", "v"], ["v", "u"]]%CLOSED%}}
    }"#;

    #[test]
    fn open_pairs_are_closed() {
        let m = model_from_json(&CHAIN.replace("%CLOSED%", r#", "closed": false"#), LoadOptions::default()).unwrap();
        assert_eq!(m.validate(), Ok(()));
        assert!(m.ik_related(0, 0, 2));
    }

    #[test]
    fn strict_pairs_are_validated() {
        for closed in ["", r#", "closed": true"#] {
            let m = model_from_json(&CHAIN.replace("%CLOSED%", closed), LoadOptions::default()).unwrap();
            let errs = m.validate().unwrap_err();
            assert!(errs.iter().any(|e| matches!(e, Violation::Reflexivity { .. })));
        }
        let m = model_from_json(&CHAIN.replace("%CLOSED%", ""), LoadOptions { close_ik: true }).unwrap();
        assert_eq!(m.validate(), Ok(()));
    }

    #[test]
    fn blocks_and_defaults() {
        let m = model_from_json(
            r#"{"worlds": ["w", "v"], "agents": ["i", "j"], "atoms": ["p"],
                "ik": {"i": {"blocks": [["w", "v"]]}},
                "awareness": {"i": {"w": ["p"], "v": ["p"]}}}"#,
            LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(m.validate(), Ok(()));
        assert!(m.ik_related(0, 0, 1));
        assert!(!m.ik_related(1, 0, 1));
        assert!(!m.holds(0, 0));
    }

    #[test]
    fn unknown_names_rejected() {
        for text in [
            r#"{"worlds": ["w"], "atoms": ["p"], "valuation": {"q": ["w"]}}"#,
            r#"{"worlds": ["w"], "atoms": ["p"], "valuation": {"p": ["x"]}}"#,
            r#"{"worlds": ["w"], "agents": ["i"], "awareness": {"i": {"w": ["p"]}}}"#,
            r#"{"worlds": ["w"], "ik": {"i": {"blocks": [["w"]]}}}"#,
            r#"{"worlds": ["w"], "extra": 1}"#,
        ] {
            assert!(model_from_json(text, LoadOptions::default()).is_err(), "{text}");
        }
    }

    #[test]
    fn json_round_trip() {
        let atoms = [Atom::new("p").unwrap(), Atom::new("q").unwrap()];
        let agents = [Agent::new("a").unwrap(), Agent::new("b").unwrap()];
        for seed in 0..20 {
            let m = crate::model::random_model(&atoms, &agents, 4, seed);
            let text = model_to_json(&m).to_string();
            assert_eq!(model_from_json(&text, LoadOptions::default()).unwrap(), m);
        }
    }
}

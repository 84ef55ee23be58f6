use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{eval, is_full, satisfies_at, CheckError, PointedModel};
use crate::model::{EpistemicModel, ModelSpace};
use crate::syntax::schema::{Schema, Substitution};
use crate::syntax::{closure_cl, Agent, Atom, Formula};

/// Frames handed to the worker pool at a time. Chunks are scanned in order,
/// so a witness in an early chunk stops the search without touching later
/// ones.
const CHUNK: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    /// Atom universe; `At(φ)` when absent.
    pub atoms: Option<Vec<Atom>>,
    /// Agent universe; the agents of `φ` when absent.
    pub agents: Option<Vec<Agent>>,
    /// Wall-clock budget for one search.
    pub deadline: Option<Duration>,
}

impl SearchBounds {
    pub fn new(max_worlds: usize) -> Self {
        SearchBounds { max_worlds, atoms: None, agents: None, deadline: None }
    }

    pub fn with_atoms(mut self, atoms: Vec<Atom>) -> Self {
        self.atoms = Some(atoms);
        self
    }

    pub fn with_agents(mut self, agents: Vec<Agent>) -> Self {
        self.agents = Some(agents);
        self
    }

    pub fn with_deadline(mut self, budget: Duration) -> Self {
        self.deadline = Some(budget);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ValidUpToBound,
    CountermodelFound,
    BudgetExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ValidUpToBound => "valid-up-to-bound",
            Verdict::CountermodelFound => "countermodel-found",
            Verdict::BudgetExhausted => "budget-exhausted",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    /// Present exactly when a countermodel was found; falsifies the formula.
    pub witness: Option<PointedModel>,
    /// Models examined in enumeration order, up to and including the witness.
    pub models_checked: u64,
    /// `|cl(φ)|`: models of at most `2^|cl(φ)|` worlds suffice in principle.
    /// Absent for formulas with update operators.
    pub closure_size: Option<usize>,
}

enum Hit {
    Found { model: EpistemicModel, world: usize, offset: u64 },
    OutOfTime,
}

fn universe<T: Ord + Clone>(given: &Option<Vec<T>>, needed: impl IntoIterator<Item = T>, missing: impl Fn(T) -> CheckError) -> Result<Vec<T>, CheckError> {
    let needed: Vec<T> = needed.into_iter().collect();
    match given {
        None => Ok(needed),
        Some(list) => {
            for x in needed {
                if !list.contains(&x) {
                    return Err(missing(x));
                }
            }
            Ok(list.clone())
        }
    }
}

/// Searches all models within `bounds` for a world falsifying `f`.
///
/// Models are visited in the deterministic order of [`ModelSpace`]; the
/// reported witness is the first one in that order even though chunks are
/// evaluated in parallel.
pub fn find_countermodel(f: &Formula, bounds: &SearchBounds) -> Result<SearchOutcome, CheckError> {
    if f.has_update_under_awareness() {
        return Err(CheckError::UpdateUnderAwareness);
    }
    if bounds.max_worlds == 0 {
        return Err(CheckError::EmptyBound);
    }
    let atoms = universe(&bounds.atoms, f.atoms(), CheckError::UndeclaredAtom)?;
    let agents = universe(&bounds.agents, f.agents(), CheckError::UndeclaredAgent)?;
    let space = ModelSpace::new(&atoms, &agents, bounds.max_worlds);
    let closure_size = closure_cl(f).ok().map(|c| c.len());
    let started = Instant::now();
    let out_of_time = || bounds.deadline.is_some_and(|d| started.elapsed() > d);

    let mut checked = 0u64;
    let mut frames = space.frames().peekable();
    while frames.peek().is_some() {
        let chunk: Vec<_> = frames.by_ref().take(CHUNK).collect();
        let hit = chunk.par_iter().enumerate().find_map_first(|(k, frame)| {
            if out_of_time() {
                return Some((k, Hit::OutOfTime));
            }
            for (offset, model) in space.frame_models(frame).enumerate() {
                if offset % 1024 == 1023 && out_of_time() {
                    return Some((k, Hit::OutOfTime));
                }
                let ext = eval(&model, f);
                if !is_full(&ext, model.world_count()) {
                    let world = (0..model.world_count()).find(|&w| !ext.contains(w)).expect("a falsifying world");
                    return Some((k, Hit::Found { model, world, offset: offset as u64 }));
                }
            }
            None
        });
        match hit {
            None => checked += chunk.iter().map(|fr| space.frame_size(fr)).sum::<u64>(),
            Some((k, hit)) => {
                checked += chunk[..k].iter().map(|fr| space.frame_size(fr)).sum::<u64>();
                return Ok(match hit {
                    Hit::Found { model, world, offset } => {
                        assert!(
                            !satisfies_at(&model, world, f)?,
                            "search witness does not falsify {f}"
                        );
                        SearchOutcome {
                            verdict: Verdict::CountermodelFound,
                            witness: Some(PointedModel { model, world }),
                            models_checked: checked + offset + 1,
                            closure_size,
                        }
                    }
                    Hit::OutOfTime => SearchOutcome {
                        verdict: Verdict::BudgetExhausted,
                        witness: None,
                        models_checked: checked,
                        closure_size,
                    },
                });
            }
        }
    }
    Ok(SearchOutcome { verdict: Verdict::ValidUpToBound, witness: None, models_checked: checked, closure_size })
}

#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub substitution: Substitution,
    pub formula: Formula,
    pub outcome: SearchOutcome,
}

#[derive(Clone, Debug)]
pub struct SchemaReport {
    pub schema: String,
    pub instances: Vec<InstanceReport>,
}

impl SchemaReport {
    /// Countermodel if any instance has one; otherwise exhausted if any
    /// search ran out of time; otherwise valid up to the bound.
    pub fn verdict(&self) -> Verdict {
        let has = |v: Verdict| self.instances.iter().any(|r| r.outcome.verdict == v);
        if has(Verdict::CountermodelFound) {
            Verdict::CountermodelFound
        } else if has(Verdict::BudgetExhausted) {
            Verdict::BudgetExhausted
        } else {
            Verdict::ValidUpToBound
        }
    }

    pub fn first_countermodel(&self) -> Option<&InstanceReport> {
        self.instances.iter().find(|r| r.outcome.verdict == Verdict::CountermodelFound)
    }
}

/// Instantiates `schema` with formula variables over `pool` and agent
/// variables over `bounds.agents` (the schema's own agent names when
/// absent), then searches each instance.
pub fn check_schema(schema: &Schema, pool: &[Formula], bounds: &SearchBounds) -> Result<SchemaReport, CheckError> {
    let agents = match &bounds.agents {
        Some(list) => list.clone(),
        None => schema
            .agent_vars
            .iter()
            .map(|v| Agent::new(v))
            .collect::<Result<_, _>>()
            .map_err(crate::model::ModelError::from)?,
    };
    let mut instances = Vec::new();
    for (substitution, formula) in schema.instances(pool, &agents) {
        let outcome = find_countermodel(&formula, bounds)?;
        instances.push(InstanceReport { substitution, formula, outcome });
    }
    Ok(SchemaReport { schema: schema.name.clone(), instances })
}

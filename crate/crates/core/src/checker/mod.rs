//! Satisfaction, model validity and bounded countermodel search.

pub mod catalogue;
mod search;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::model::{EpistemicModel, ModelError};
use crate::syntax::{Agent, Atom, Connective, Formula, Modality};

pub use catalogue::{default_pool, parse_catalogue, run_catalogue, section34, CatalogueError, CatalogueRow, Expected, RowReport};
pub use search::{check_schema, find_countermodel, InstanceReport, SchemaReport, SearchBounds, SearchOutcome, Verdict};

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("atom {0} is not declared by the model")]
    UndeclaredAtom(Atom),
    #[error("agent {0} is not declared by the model")]
    UndeclaredAgent(Agent),
    #[error("update operators may not occur inside an awareness operator")]
    UpdateUnderAwareness,
    #[error("the world bound must be at least 1")]
    EmptyBound,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A model together with a designated world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: EpistemicModel,
    pub world: usize,
}

impl PointedModel {
    pub fn new(model: EpistemicModel, world: &str) -> Result<Self, ModelError> {
        let world = model.world_index(world)?;
        Ok(PointedModel { model, world })
    }

    pub fn world_name(&self) -> &str {
        self.model.world_name(self.world)
    }
}

/// Rejects formulas the model cannot interpret.
pub fn check_formula(m: &EpistemicModel, f: &Formula) -> Result<(), CheckError> {
    if f.has_update_under_awareness() {
        return Err(CheckError::UpdateUnderAwareness);
    }
    for a in f.atoms() {
        if !m.atoms().contains(&a) {
            return Err(CheckError::UndeclaredAtom(a));
        }
    }
    for i in f.agents() {
        if !m.agents().contains(&i) {
            return Err(CheckError::UndeclaredAgent(i));
        }
    }
    Ok(())
}

/// The set of worlds of `m` at which `f` holds.
pub fn extension(m: &EpistemicModel, f: &Formula) -> Result<FixedBitSet, CheckError> {
    check_formula(m, f)?;
    Ok(eval(m, f))
}

pub fn satisfies(pm: &PointedModel, f: &Formula) -> Result<bool, CheckError> {
    satisfies_at(&pm.model, pm.world, f)
}

pub fn satisfies_at(m: &EpistemicModel, world: usize, f: &Formula) -> Result<bool, CheckError> {
    Ok(extension(m, f)?.contains(world))
}

/// `f` holds at every world of `m`.
pub fn model_valid(m: &EpistemicModel, f: &Formula) -> Result<bool, CheckError> {
    Ok(is_full(&extension(m, f)?, m.world_count()))
}

pub(crate) fn is_full(set: &FixedBitSet, n: usize) -> bool {
    set.count_ones(..) == n
}

fn atom_mask(m: &EpistemicModel, atoms: impl IntoIterator<Item = Atom>) -> FixedBitSet {
    let mut mask = FixedBitSet::with_capacity(m.atoms().len());
    for a in atoms {
        mask.insert(m.atom_index(&a).expect("checked atom"));
    }
    mask
}

/// Worlds at which agent `i` is aware of every atom in `mask`.
pub(crate) fn aware_worlds(m: &EpistemicModel, i: usize, mask: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(m.world_count());
    for w in 0..m.world_count() {
        out.set(w, mask.is_subset(m.awareness_set(i, w)));
    }
    out
}

/// Computes the extension bottom-up. Every node is visited once, so each
/// (world, subformula) pair is decided once per query; an update evaluates
/// its operand afresh in the updated model, whose derived relations differ.
pub(crate) fn eval(m: &EpistemicModel, f: &Formula) -> FixedBitSet {
    let n = m.world_count();
    match f {
        Formula::Atom(a) => m.truth_set(m.atom_index(a).expect("checked atom")).clone(),
        Formula::Not(g) => {
            let mut s = eval(m, g);
            s.toggle_range(..n);
            s
        }
        Formula::Binary(op, l, r) => {
            let (mut l, r) = (eval(m, l), eval(m, r));
            match op {
                Connective::And => l.intersect_with(&r),
                Connective::Or => l.union_with(&r),
                Connective::Implies => {
                    l.toggle_range(..n);
                    l.union_with(&r);
                }
                Connective::Iff => {
                    l.symmetric_difference_with(&r);
                    l.toggle_range(..n);
                }
            }
            l
        }
        Formula::Modal(modality, agent, g) => {
            let i = m.agent_index(agent).expect("checked agent");
            let d = m.derived();
            match modality {
                Modality::Aware => aware_worlds(m, i, &atom_mask(m, g.atoms())),
                Modality::Implicit => d.ik[i].boxed(&eval(m, g)),
                Modality::Sim => d.a_equiv[i].boxed(&eval(m, g)),
                Modality::Ek => d.ek[i].boxed(&eval(m, g)),
                Modality::Explicit => {
                    let mut s = d.ek[i].boxed(&eval(m, g));
                    s.intersect_with(&aware_worlds(m, i, &atom_mask(m, g.atoms())));
                    s
                }
            }
        }
        Formula::Update(dir, agent, q, g) => {
            let i = m.agent_index(agent).expect("checked agent");
            let updated = m.update_awareness_indexed(i, &atom_mask(m, q.iter().cloned()), *dir);
            eval(&updated, g)
        }
    }
}

//! The Fagin–Halpern awareness logic over the same models: its semantics,
//! the embedding into AIL, bisimulation, and bounded formula agreement.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checker::{self, aware_worlds, CheckError, PointedModel};
use crate::model::{EpistemicModel, LoadOptions, ModelError, ModelFile, ModelSpace};
use crate::syntax::{Agent, Atom, Formula, Modality};

#[derive(Debug, Error)]
pub enum FhError {
    #[error("{0} is outside the FH language (only ~, &, |, ->, <->, A, I and E are allowed)")]
    NotFh(Formula),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// A formula built from atoms, Boolean connectives and `A`, `I`, `E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FhFormula(Formula);

impl FhFormula {
    pub fn new(f: Formula) -> Result<Self, FhError> {
        let mut ok = true;
        f.visit(&mut |g| {
            ok &= match g {
                Formula::Update(..) => false,
                Formula::Modal(m, ..) => matches!(m, Modality::Aware | Modality::Implicit | Modality::Explicit),
                _ => true,
            }
        });
        if ok {
            Ok(FhFormula(f))
        } else {
            Err(FhError::NotFh(f))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }
}

impl fmt::Display for FhFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<Formula> for FhFormula {
    type Error = FhError;

    fn try_from(f: Formula) -> Result<Self, FhError> {
        FhFormula::new(f)
    }
}

/// FH satisfaction: as AIL on atoms, connectives, `A` and `I`, with
/// `E φ` read as `A φ ∧ I φ`.
pub fn satisfies_fh(pm: &PointedModel, f: &FhFormula) -> Result<bool, CheckError> {
    Ok(fh_extension(&pm.model, f)?.contains(pm.world))
}

pub fn fh_extension(m: &EpistemicModel, f: &FhFormula) -> Result<FixedBitSet, CheckError> {
    checker::check_formula(m, &f.0)?;
    Ok(fh_eval(m, &f.0))
}

fn fh_eval(m: &EpistemicModel, f: &Formula) -> FixedBitSet {
    match f {
        Formula::Modal(Modality::Explicit, agent, g) => {
            let i = m.agent_index(agent).expect("checked agent");
            let mut s = m.derived().ik[i].boxed(&fh_eval(m, g));
            let mut mask = FixedBitSet::with_capacity(m.atoms().len());
            for a in g.atoms() {
                mask.insert(m.atom_index(&a).expect("checked atom"));
            }
            s.intersect_with(&aware_worlds(m, i, &mask));
            s
        }
        Formula::Modal(Modality::Implicit, agent, g) => {
            let i = m.agent_index(agent).expect("checked agent");
            m.derived().ik[i].boxed(&fh_eval(m, g))
        }
        Formula::Not(g) => {
            let mut s = fh_eval(m, g);
            s.toggle_range(..m.world_count());
            s
        }
        Formula::Binary(op, l, r) => {
            let (l, r) = (fh_eval(m, l), fh_eval(m, r));
            combine(*op, l, r, m.world_count())
        }
        // Atoms and awareness mean the same in both logics.
        other => checker::eval(m, other),
    }
}

fn combine(op: crate::syntax::Connective, mut l: FixedBitSet, r: FixedBitSet, n: usize) -> FixedBitSet {
    use crate::syntax::Connective::*;
    match op {
        And => l.intersect_with(&r),
        Or => l.union_with(&r),
        Implies => {
            l.toggle_range(..n);
            l.union_with(&r);
        }
        Iff => {
            l.symmetric_difference_with(&r);
            l.toggle_range(..n);
        }
    }
    l
}

/// The embedding into AIL: homomorphic except `E φ ↦ A t(φ) ∧ I t(φ)`.
pub fn translate(f: &FhFormula) -> Formula {
    fn t(f: &Formula) -> Formula {
        match f {
            Formula::Atom(_) => f.clone(),
            Formula::Not(g) => Formula::not(t(g)),
            Formula::Binary(op, l, r) => Formula::binary(*op, t(l), t(r)),
            Formula::Modal(Modality::Explicit, i, g) => {
                let g = t(g);
                Formula::and(
                    Formula::modal(Modality::Aware, i, g.clone()),
                    Formula::modal(Modality::Implicit, i, g),
                )
            }
            Formula::Modal(m, i, g) => Formula::modal(*m, i, t(g)),
            Formula::Update(..) => unreachable!("FH formulas have no updates"),
        }
    }
    t(&f.0)
}

/// Copies of two models over the union of their signatures. An atom a model
/// does not declare is false everywhere and nobody is aware of it; an agent
/// it does not declare has the identity relation and empty awareness.
pub fn align_signatures(m1: &EpistemicModel, m2: &EpistemicModel) -> Result<(EpistemicModel, EpistemicModel), ModelError> {
    let atoms: BTreeSet<Atom> = m1.atoms().iter().chain(m2.atoms()).cloned().collect();
    let agents: BTreeSet<Agent> = m1.agents().iter().chain(m2.agents()).cloned().collect();
    let extend = |m: &EpistemicModel| -> Result<EpistemicModel, ModelError> {
        let mut out = EpistemicModel::new(
            m.worlds().to_vec(),
            agents.iter().cloned().collect(),
            atoms.iter().cloned().collect(),
        )?;
        for (p, a) in m.atoms().iter().enumerate() {
            for w in m.truth_set(p).ones() {
                out.set_truth(a, m.world_name(w), true)?;
            }
        }
        for (i, agent) in m.agents().iter().enumerate() {
            for (w, v) in m.ik_pairs(i) {
                out.relate(agent, m.world_name(w), m.world_name(v))?;
            }
            for w in 0..m.world_count() {
                out.set_awareness(agent, m.world_name(w), &m.awareness_atoms(i, w))?;
            }
        }
        Ok(out)
    };
    Ok((extend(m1)?, extend(m2)?))
}

/// A relation between the worlds of two models, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BisimRelation {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl BisimRelation {
    pub fn contains(&self, w: usize, w2: usize) -> bool {
        self.pairs.contains(&(w, w2))
    }

    pub fn named_pairs(&self, m1: &EpistemicModel, m2: &EpistemicModel) -> Vec<[String; 2]> {
        self.pairs
            .iter()
            .map(|&(w, v)| [m1.world_name(w).to_string(), m2.world_name(v).to_string()])
            .collect()
    }

    pub fn from_names(m1: &EpistemicModel, m2: &EpistemicModel, pairs: &[[String; 2]]) -> Result<Self, ModelError> {
        let mut out = BisimRelation::default();
        for [w, v] in pairs {
            out.pairs.insert((m1.world_index(w)?, m2.world_index(v)?));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BisimClause {
    Atoms,
    Forth,
    Back,
    Awareness,
}

impl fmt::Display for BisimClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BisimClause::Atoms => "atoms",
            BisimClause::Forth => "forth",
            BisimClause::Back => "back",
            BisimClause::Awareness => "awareness",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisimViolation {
    pub pair: [String; 2],
    pub clause: BisimClause,
    /// The agent for forth, back and awareness failures; the atom for atom
    /// failures.
    pub witness: String,
}

impl fmt::Display for BisimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [w, v] = &self.pair;
        write!(f, "({w}, {v}) violates the {} clause ({})", self.clause, self.witness)
    }
}

/// Pair-local clauses: the same atoms hold and every agent has the same
/// awareness set. Both models must share a signature.
fn local_mismatch(m1: &EpistemicModel, m2: &EpistemicModel, w: usize, v: usize) -> Option<(BisimClause, String)> {
    for (p, a) in m1.atoms().iter().enumerate() {
        if m1.holds(p, w) != m2.holds(p, v) {
            return Some((BisimClause::Atoms, a.to_string()));
        }
    }
    for (i, a) in m1.agents().iter().enumerate() {
        if m1.awareness_set(i, w) != m2.awareness_set(i, v) {
            return Some((BisimClause::Awareness, a.to_string()));
        }
    }
    None
}

/// Forth and back for one pair against the relation `r`.
fn zigzag_mismatch(m1: &EpistemicModel, m2: &EpistemicModel, r: &BisimRelation, w: usize, v: usize) -> Option<(BisimClause, String)> {
    for (i, a) in m1.agents().iter().enumerate() {
        let forth = (0..m1.world_count())
            .filter(|&x| m1.ik_related(i, w, x))
            .all(|x| (0..m2.world_count()).any(|y| m2.ik_related(i, v, y) && r.contains(x, y)));
        if !forth {
            return Some((BisimClause::Forth, a.to_string()));
        }
        let back = (0..m2.world_count())
            .filter(|&y| m2.ik_related(i, v, y))
            .all(|y| (0..m1.world_count()).any(|x| m1.ik_related(i, w, x) && r.contains(x, y)));
        if !back {
            return Some((BisimClause::Back, a.to_string()));
        }
    }
    None
}

/// Checks the four bisimulation clauses for every pair of `r`.
pub fn is_bisimulation(m1: &EpistemicModel, m2: &EpistemicModel, r: &BisimRelation) -> Result<Result<(), BisimViolation>, ModelError> {
    let (a1, a2) = align_signatures(m1, m2)?;
    for &(w, v) in &r.pairs {
        if let Some((clause, witness)) = local_mismatch(&a1, &a2, w, v).or_else(|| zigzag_mismatch(&a1, &a2, r, w, v)) {
            return Ok(Err(BisimViolation {
                pair: [m1.world_name(w).to_string(), m2.world_name(v).to_string()],
                clause,
                witness,
            }));
        }
    }
    Ok(Ok(()))
}

/// The largest bisimulation between the two models, if it relates the two
/// designated worlds. Computed as a greatest fixpoint: start from all pairs
/// passing the local clauses and delete pairs failing forth or back until
/// nothing changes.
pub fn find_bisimulation(pm1: &PointedModel, pm2: &PointedModel) -> Result<Option<BisimRelation>, ModelError> {
    let (m1, m2) = align_signatures(&pm1.model, &pm2.model)?;
    let mut r = BisimRelation::default();
    for w in 0..m1.world_count() {
        for v in 0..m2.world_count() {
            if local_mismatch(&m1, &m2, w, v).is_none() {
                r.pairs.insert((w, v));
            }
        }
    }
    loop {
        let doomed: Vec<_> = r
            .pairs
            .iter()
            .copied()
            .filter(|&(w, v)| zigzag_mismatch(&m1, &m2, &r, w, v).is_some())
            .collect();
        if doomed.is_empty() {
            break;
        }
        for pair in doomed {
            r.pairs.remove(&pair);
        }
    }
    Ok(r.contains(pm1.world, pm2.world).then_some(r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree { formulas_checked: usize },
    Distinguished(FhFormula),
}

/// The finite slice of FH formulas used for agreement checks, in a fixed
/// order.
///
/// Depth 0 holds the literals over `atoms` followed by the conjunctions and
/// disjunctions of two distinct literals. Depth `d` adds `O_i φ` and
/// `¬O_i φ` for every formula `φ` of depth `d - 1`, every agent and every
/// `O` among `A`, `I`, `E`.
pub fn fh_formulas(atoms: &[Atom], agents: &[Agent], depth: usize) -> Vec<FhFormula> {
    let mut out: Vec<Formula> = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |f: Formula, out: &mut Vec<Formula>| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };
    let literals: Vec<Formula> = atoms
        .iter()
        .flat_map(|a| {
            let p = Formula::Atom(a.clone());
            [p.clone(), Formula::not(p)]
        })
        .collect();
    for l in &literals {
        push(l.clone(), &mut out);
    }
    for (k, l) in literals.iter().enumerate() {
        for r in &literals[k + 1..] {
            push(Formula::and(l.clone(), r.clone()), &mut out);
            push(Formula::or(l.clone(), r.clone()), &mut out);
        }
    }
    let mut previous = out.clone();
    for _ in 0..depth {
        let mut layer = Vec::new();
        for f in &previous {
            for i in agents {
                for m in [Modality::Aware, Modality::Implicit, Modality::Explicit] {
                    let boxed = Formula::modal(m, i, f.clone());
                    push(boxed.clone(), &mut layer);
                    push(Formula::not(boxed), &mut layer);
                }
            }
        }
        out.extend(layer.iter().cloned());
        previous = layer;
    }
    out.into_iter().map(FhFormula).collect()
}

/// Compares the two pointed models on every formula of [`fh_formulas`] up
/// to `depth`, over the union of their signatures.
pub fn fh_agree_up_to_depth(pm1: &PointedModel, pm2: &PointedModel, depth: usize) -> Result<Agreement, ModelError> {
    let (m1, m2) = align_signatures(&pm1.model, &pm2.model)?;
    let formulas = fh_formulas(m1.atoms(), m1.agents(), depth);
    for f in &formulas {
        if fh_eval(&m1, &f.0).contains(pm1.world) != fh_eval(&m2, &f.0).contains(pm2.world) {
            return Ok(Agreement::Distinguished(f.clone()));
        }
    }
    Ok(Agreement::Agree { formulas_checked: formulas.len() })
}

/// Two pointed models related by a bisimulation that AIL can still tell
/// apart.
#[derive(Clone, Debug)]
pub struct SeparationPair {
    pub left: PointedModel,
    pub right: PointedModel,
    pub relation: BisimRelation,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeparationFile {
    left: ModelFile,
    left_world: String,
    right: ModelFile,
    right_world: String,
    relation: Vec<[String; 2]>,
}

impl SeparationPair {
    pub fn from_json(text: &str) -> Result<SeparationPair, ModelError> {
        let file: SeparationFile = serde_json::from_str(text)?;
        let left = PointedModel::new(file.left.into_model(LoadOptions::default())?, &file.left_world)?;
        let right = PointedModel::new(file.right.into_model(LoadOptions::default())?, &file.right_world)?;
        let relation = BisimRelation::from_names(&left.model, &right.model, &file.relation)?;
        Ok(SeparationPair { left, right, relation })
    }

    /// The relation as stated, checked over the union signature.
    pub fn check_relation(&self) -> Result<Result<(), BisimViolation>, ModelError> {
        let (m1, m2) = align_signatures(&self.left.model, &self.right.model)?;
        if !self.relation.contains(self.left.world, self.right.world) {
            return Ok(Err(BisimViolation {
                pair: [self.left.world_name().to_string(), self.right.world_name().to_string()],
                clause: BisimClause::Forth,
                witness: "designated worlds are not related".into(),
            }));
        }
        is_bisimulation(&m1, &m2, &self.relation)
    }
}

/// Searches for the first pair of bisimilar pointed models (in enumeration
/// order, smaller right-hand models first) that disagree on `E_i p`, using
/// a single atom `p` and agent `i`.
pub fn find_separation(agent: &Agent, max_worlds: usize) -> Option<SeparationPair> {
    let p = Atom::new("p").expect("valid atom");
    let target = Formula::modal(Modality::Explicit, agent, Formula::Atom(p.clone()));
    let space = ModelSpace::new(&[p], std::slice::from_ref(agent), max_worlds);
    let models: Vec<(EpistemicModel, FixedBitSet)> = space
        .iter()
        .map(|m| {
            let ext = checker::extension(&m, &target).expect("formula fits the model");
            (m, ext)
        })
        .collect();
    let mut by_size: Vec<&(EpistemicModel, FixedBitSet)> = models.iter().collect();
    by_size.sort_by_key(|(m, _)| m.world_count());
    for (right, right_ext) in &by_size {
        for (left, left_ext) in &models {
            for w in 0..left.world_count() {
                for v in 0..right.world_count() {
                    if left_ext.contains(w) == right_ext.contains(v) {
                        continue;
                    }
                    let pl = PointedModel { model: left.clone(), world: w };
                    let pr = PointedModel { model: right.clone(), world: v };
                    if let Ok(Some(relation)) = find_bisimulation(&pl, &pr) {
                        return Some(SeparationPair { left: pl, right: pr, relation });
                    }
                }
            }
        }
    }
    None
}

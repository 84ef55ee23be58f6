//! A reference evaluator written directly from the definitions, with
//! explicit relation matrices and no partitions or bitsets. Slow, and only
//! meant for small models.

use std::collections::{BTreeMap, BTreeSet};

use ail::model::EpistemicModel;
use ail::syntax::{Agent, Atom, Connective, Formula, Modality, Update};

pub type Relation = Vec<Vec<bool>>;

#[derive(Clone, Debug)]
pub struct Naive {
    pub n: usize,
    pub agents: Vec<Agent>,
    pub val: BTreeMap<Atom, Vec<bool>>,
    pub ik: Vec<Relation>,
    pub aw: Vec<Vec<BTreeSet<Atom>>>,
}

/// Warshall transitive closure.
pub fn transitive_closure(mut r: Relation) -> Relation {
    let n = r.len();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// `{(w, u) | ∃v. w r v ∧ v s u}`
pub fn compose(r: &Relation, s: &Relation) -> Relation {
    let n = r.len();
    (0..n)
        .map(|w| (0..n).map(|u| (0..n).any(|v| r[w][v] && s[v][u])).collect())
        .collect()
}

impl Naive {
    pub fn from_model(m: &EpistemicModel) -> Naive {
        let n = m.world_count();
        let val = m
            .atoms()
            .iter()
            .enumerate()
            .map(|(p, a)| (a.clone(), (0..n).map(|w| m.holds(p, w)).collect()))
            .collect();
        let ik = (0..m.agents().len())
            .map(|k| (0..n).map(|w| (0..n).map(|v| m.ik_related(k, w, v)).collect()).collect())
            .collect();
        let aw = (0..m.agents().len())
            .map(|k| (0..n).map(|w| m.awareness_atoms(k, w)).collect())
            .collect();
        Naive { n, agents: m.agents().to_vec(), val, ik, aw }
    }

    fn agent(&self, i: &Agent) -> usize {
        self.agents.iter().position(|a| a == i).expect("declared agent")
    }

    /// Same awareness set, and agreement on every atom in it.
    pub fn a_equiv(&self, k: usize) -> Relation {
        (0..self.n)
            .map(|w| {
                (0..self.n)
                    .map(|v| self.aw[k][w] == self.aw[k][v] && self.aw[k][w].iter().all(|p| self.val[p][w] == self.val[p][v]))
                    .collect()
            })
            .collect()
    }

    /// Transitive closure of `≈` followed by `∼`, or `∼` then `≈` when
    /// `swapped`.
    pub fn ek(&self, k: usize, swapped: bool) -> Relation {
        let sim = self.a_equiv(k);
        let step = if swapped { compose(&self.ik[k], &sim) } else { compose(&sim, &self.ik[k]) };
        transitive_closure(step)
    }

    fn boxed(&self, r: &Relation, w: usize, g: &Formula) -> bool {
        (0..self.n).filter(|&v| r[w][v]).all(|v| self.holds(v, g))
    }

    fn aware_of(&self, k: usize, w: usize, g: &Formula) -> bool {
        g.atoms().is_subset(&self.aw[k][w])
    }

    pub fn holds(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => self.val[p][w],
            Formula::Not(g) => !self.holds(w, g),
            Formula::Binary(op, l, r) => {
                let (l, r) = (self.holds(w, l), self.holds(w, r));
                match op {
                    Connective::And => l && r,
                    Connective::Or => l || r,
                    Connective::Implies => !l || r,
                    Connective::Iff => l == r,
                }
            }
            Formula::Modal(m, i, g) => {
                let k = self.agent(i);
                match m {
                    Modality::Aware => self.aware_of(k, w, g),
                    Modality::Implicit => self.boxed(&self.ik[k], w, g),
                    Modality::Sim => self.boxed(&self.a_equiv(k), w, g),
                    Modality::Ek => self.boxed(&self.ek(k, false), w, g),
                    Modality::Explicit => self.aware_of(k, w, g) && self.boxed(&self.ek(k, false), w, g),
                }
            }
            Formula::Update(u, i, q, g) => {
                let k = self.agent(i);
                let mut next = self.clone();
                for set in &mut next.aw[k] {
                    match u {
                        Update::Add => set.extend(q.iter().cloned()),
                        Update::Remove => set.retain(|p| !q.contains(p)),
                    }
                }
                next.holds(w, g)
            }
        }
    }

    /// Fagin–Halpern reading: `E φ` is `A φ ∧ I φ`.
    pub fn holds_fh(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => self.val[p][w],
            Formula::Not(g) => !self.holds_fh(w, g),
            Formula::Binary(op, l, r) => {
                let (l, r) = (self.holds_fh(w, l), self.holds_fh(w, r));
                match op {
                    Connective::And => l && r,
                    Connective::Or => l || r,
                    Connective::Implies => !l || r,
                    Connective::Iff => l == r,
                }
            }
            Formula::Modal(m, i, g) => {
                let k = self.agent(i);
                let known = || (0..self.n).filter(|&v| self.ik[k][w][v]).all(|v| self.holds_fh(v, g));
                match m {
                    Modality::Aware => self.aware_of(k, w, g),
                    Modality::Implicit => known(),
                    Modality::Explicit => self.aware_of(k, w, g) && known(),
                    _ => panic!("not an FH formula: {f}"),
                }
            }
            Formula::Update(..) => panic!("not an FH formula: {f}"),
        }
    }
}

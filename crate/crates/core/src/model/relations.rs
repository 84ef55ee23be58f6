use fixedbitset::FixedBitSet;

use super::{EpistemicModel, Partition};

/// Per-agent partitions derived from a model, indexed like the model's agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRelations {
    /// `∼ᵢ`. For a relation that is not an equivalence this is its
    /// equivalence closure; such models fail validation anyway.
    pub ik: Vec<Partition>,
    /// `≈ᵢ`: equal awareness sets and agreement on every aware atom.
    pub a_equiv: Vec<Partition>,
    /// EK-accessibility `(∼ᵢ ∘ ≈ᵢ)⁺`, computed as the join of the two.
    pub ek: Vec<Partition>,
}

impl DerivedRelations {
    pub(super) fn compute(m: &EpistemicModel) -> Self {
        let n = m.world_count();
        let mut out = DerivedRelations { ik: vec![], a_equiv: vec![], ek: vec![] };
        for i in 0..m.agents().len() {
            let ik = Partition::from_pairs(n, m.ik_pairs(i));
            let a_equiv = a_equivalence_partition(m, i);
            out.ek.push(ik.join(&a_equiv));
            out.ik.push(ik);
            out.a_equiv.push(a_equiv);
        }
        out
    }
}

/// Worlds are A-equivalent for agent `i` exactly when their pair
/// (awareness set, valuation restricted to that set) coincides.
fn a_equivalence_partition(m: &EpistemicModel, i: usize) -> Partition {
    let signature = |w: usize| {
        let aware = m.awareness_set(i, w).clone();
        let mut seen = FixedBitSet::with_capacity(m.atoms().len());
        for p in aware.ones() {
            seen.set(p, m.holds(p, w));
        }
        (aware, seen)
    };
    let labels: Vec<_> = (0..m.world_count()).map(signature).collect();
    Partition::from_labels(&labels)
}

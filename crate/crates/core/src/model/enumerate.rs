use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EpistemicModel, Partition};
use crate::syntax::{Agent, Atom};

/// Set partitions of `0..n` as restricted growth strings, lexicographically.
pub(crate) fn set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(Partition::from_labels(&rgs));
        // Increment the rightmost position that may still grow.
        let mut k = n;
        loop {
            if k <= 1 {
                return out;
            }
            k -= 1;
            let bound = rgs[..k].iter().max().copied().unwrap_or(0) + 1;
            if rgs[k] < bound {
                rgs[k] += 1;
                for x in &mut rgs[k + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|w| format!("w{w}")).collect()
}

/// The bounded space of models over fixed atom and agent universes.
///
/// Order: world count ascending, then valuation, then the tuple of
/// per-agent IK partitions, then awareness per IK block. Awareness is chosen
/// per block, so every model satisfies **ka** by construction.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    atoms: Vec<Atom>,
    agents: Vec<Agent>,
    max_worlds: usize,
}

/// A valuation together with one IK partition per agent. The models of a
/// frame differ only in awareness.
#[derive(Clone, Debug)]
pub struct Frame {
    pub worlds: usize,
    valuation: u64,
    partitions: Vec<Partition>,
}

impl ModelSpace {
    pub fn new(atoms: &[Atom], agents: &[Agent], max_worlds: usize) -> Self {
        assert!(
            max_worlds * atoms.len() < 64,
            "model space too large to enumerate"
        );
        ModelSpace {
            atoms: atoms.to_vec(),
            agents: agents.to_vec(),
            max_worlds,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn max_worlds(&self) -> usize {
        self.max_worlds
    }

    /// Frames in enumeration order, lazily.
    pub fn frames(&self) -> impl Iterator<Item = Frame> + '_ {
        (1..=self.max_worlds).flat_map(move |n| {
            let parts = set_partitions(n);
            let valuations = 1u64 << (n * self.atoms.len());
            let agents = self.agents.len();
            (0..valuations).flat_map(move |valuation| {
                let parts = parts.clone();
                let mut idx = vec![0usize; agents];
                let mut done = false;
                std::iter::from_fn(move || {
                    if done {
                        return None;
                    }
                    let frame = Frame {
                        worlds: n,
                        valuation,
                        partitions: idx.iter().map(|&k| parts[k].clone()).collect(),
                    };
                    done = !advance(&mut idx, |_| parts.len());
                    Some(frame)
                })
            })
        })
    }

    pub fn frame_size(&self, frame: &Frame) -> u64 {
        frame
            .partitions
            .iter()
            .map(|p| 1u64 << (p.block_count() * self.atoms.len()))
            .product()
    }

    /// The models of `frame`, in awareness order.
    pub fn frame_models<'a>(&'a self, frame: &'a Frame) -> impl Iterator<Item = EpistemicModel> + 'a {
        let n = frame.worlds;
        let natoms = self.atoms.len();
        let valuation: Vec<FixedBitSet> = (0..natoms)
            .map(|k| {
                // The first atom is the most significant digit.
                let shift = n * (natoms - 1 - k);
                let mask = (frame.valuation >> shift) & ((1u64 << n) - 1);
                let mut set = FixedBitSet::with_capacity(n);
                for w in 0..n {
                    set.set(w, mask >> w & 1 == 1);
                }
                set
            })
            .collect();
        // One digit per (agent, block), each an atom subset.
        let slots: Vec<(usize, usize)> = frame
            .partitions
            .iter()
            .enumerate()
            .flat_map(|(i, p)| (0..p.block_count()).map(move |b| (i, b)))
            .collect();
        let mut digits = vec![0u64; slots.len()];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let mut awareness = vec![vec![FixedBitSet::with_capacity(natoms); n]; frame.partitions.len()];
            for (&(i, b), &subset) in slots.iter().zip(&digits) {
                let mut set = FixedBitSet::with_capacity(natoms);
                for p in 0..natoms {
                    set.set(p, subset >> p & 1 == 1);
                }
                for &w in &frame.partitions[i].blocks()[b] {
                    awareness[i][w] = set.clone();
                }
            }
            let model = EpistemicModel::from_parts(
                world_names(n),
                self.agents.clone(),
                self.atoms.clone(),
                valuation.clone(),
                &frame.partitions,
                awareness,
            );
            done = !advance_u64(&mut digits, 1u64 << natoms);
            Some(model)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = EpistemicModel> + '_ {
        self.frames().flat_map(move |f| self.frame_models(&f).collect::<Vec<_>>())
    }

    /// Number of models in the space.
    pub fn count(&self) -> u128 {
        let mut total = 0u128;
        for n in 1..=self.max_worlds {
            let per_agent: u128 = set_partitions(n)
                .iter()
                .map(|p| 1u128 << (p.block_count() * self.atoms.len()))
                .sum();
            total += (1u128 << (n * self.atoms.len())) * per_agent.pow(self.agents.len() as u32);
        }
        total
    }
}

/// Mixed-radix increment, last digit fastest; false on wrap-around.
fn advance(idx: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < radix(k) {
            return true;
        }
        idx[k] = 0;
    }
    false
}

fn advance_u64(idx: &mut [u64], radix: u64) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every model with at most `max_worlds` worlds over the given universes.
pub fn enumerate_models(atoms: &[Atom], agents: &[Agent], max_worlds: usize) -> impl Iterator<Item = EpistemicModel> {
    let space = ModelSpace::new(atoms, agents, max_worlds);
    let frames: Vec<Frame> = space.frames().collect();
    frames
        .into_iter()
        .flat_map(move |f| space.frame_models(&f).collect::<Vec<_>>())
}

/// A random valid model; the same seed always gives the same model.
pub fn random_model(atoms: &[Atom], agents: &[Agent], n_worlds: usize, seed: u64) -> EpistemicModel {
    assert!(n_worlds >= 1, "a model needs at least one world");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let valuation = atoms
        .iter()
        .map(|_| {
            let mut set = FixedBitSet::with_capacity(n_worlds);
            for w in 0..n_worlds {
                set.set(w, rng.gen_bool(0.5));
            }
            set
        })
        .collect();
    let mut partitions = Vec::new();
    let mut awareness = Vec::new();
    for _ in agents {
        let groups = rng.gen_range(1..=n_worlds);
        let labels: Vec<usize> = (0..n_worlds).map(|_| rng.gen_range(0..groups)).collect();
        let part = Partition::from_labels(&labels);
        let mut per_world = vec![FixedBitSet::with_capacity(atoms.len()); n_worlds];
        for block in part.blocks() {
            let mut set = FixedBitSet::with_capacity(atoms.len());
            for p in 0..atoms.len() {
                set.set(p, rng.gen_bool(0.6));
            }
            for &w in block {
                per_world[w] = set.clone();
            }
        }
        partitions.push(part);
        awareness.push(per_world);
    }
    EpistemicModel::from_parts(
        world_names(n_worlds),
        agents.to_vec(),
        atoms.to_vec(),
        valuation,
        &partitions,
        awareness,
    )
}

use std::fmt;

use fixedbitset::FixedBitSet;

/// Union-find over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

/// A partition of the worlds `0..n` into blocks.
///
/// Blocks are numbered in order of their least member and each block lists
/// its members ascending, so equal partitions compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Worlds with equal labels share a block.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut block_of = vec![usize::MAX; labels.len()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for w in 0..labels.len() {
            if block_of[w] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut members = Vec::new();
            for v in w..labels.len() {
                if block_of[v] == usize::MAX && labels[v] == labels[w] {
                    block_of[v] = id;
                    members.push(v);
                }
            }
            blocks.push(members);
        }
        Partition { block_of, blocks }
    }

    pub fn discrete(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn total(n: usize) -> Self {
        Partition::from_labels(&vec![0u8; n])
    }

    /// Equivalence closure of `pairs` over `0..n`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut dsu = DisjointSet::new(n);
        for (a, b) in pairs {
            dsu.union(a, b);
        }
        dsu.into_partition()
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        Partition::from_pairs(
            n,
            blocks
                .iter()
                .flat_map(|b| b.windows(2).map(|w| (w[0], w[1]))),
        )
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_id(&self, w: usize) -> usize {
        self.block_of[w]
    }

    pub fn block(&self, w: usize) -> &[usize] {
        &self.blocks[self.block_of[w]]
    }

    pub fn related(&self, w: usize, v: usize) -> bool {
        self.block_of[w] == self.block_of[v]
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len(), "partitions over different world sets");
        let mut dsu = DisjointSet::new(self.len());
        for part in [self, other] {
            for block in &part.blocks {
                for &v in &block[1..] {
                    dsu.union(block[0], v);
                }
            }
        }
        dsu.into_partition()
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&v| coarser.related(b[0], v)))
    }

    /// The pair relation as an adjacency matrix.
    pub fn to_relation(&self) -> Vec<FixedBitSet> {
        (0..self.len())
            .map(|w| {
                let mut row = FixedBitSet::with_capacity(self.len());
                for &v in self.block(w) {
                    row.insert(v);
                }
                row
            })
            .collect()
    }

    /// Worlds whose whole block lies inside `set`: the box of the relation.
    pub fn boxed(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for block in &self.blocks {
            if block.iter().all(|&v| set.contains(v)) {
                for &v in block {
                    out.insert(v);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.blocks.iter()).finish()
    }
}

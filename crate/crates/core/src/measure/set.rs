use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::MeasureSpace;
use crate::intervals::IndexSet;

/// A measurable set of the model: explicit atoms by index, segment cells at
/// a dyadic depth, and family indices (1-based, possibly infinite).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSet {
    atoms: BTreeSet<usize>,
    cells: IndexSet,
    depth: u32,
    family: IndexSet,
}

impl PieceSet {
    pub fn new(atoms: BTreeSet<usize>, cells: IndexSet, depth: u32, family: IndexSet) -> Self {
        PieceSet {
            atoms,
            cells,
            depth,
            family,
        }
    }

    pub fn atoms_only(atoms: BTreeSet<usize>) -> Self {
        PieceSet::new(atoms, IndexSet::empty(), 0, IndexSet::empty())
    }

    pub fn cells_only(cells: IndexSet, depth: u32) -> Self {
        PieceSet::new(BTreeSet::new(), cells, depth, IndexSet::empty())
    }

    pub fn family_only(family: IndexSet) -> Self {
        PieceSet::new(BTreeSet::new(), IndexSet::empty(), 0, family)
    }

    pub fn atoms(&self) -> &BTreeSet<usize> {
        &self.atoms
    }

    pub fn cells(&self) -> &IndexSet {
        &self.cells
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn family(&self) -> &IndexSet {
        &self.family
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.cells.is_empty() && self.family.is_empty()
    }

    /// Same set with cells expressed at a finer `depth`.
    pub fn refine_to(&self, depth: u32) -> PieceSet {
        if depth <= self.depth {
            return self.clone();
        }
        PieceSet {
            atoms: self.atoms.clone(),
            cells: self.cells.refine(depth - self.depth),
            depth,
            family: self.family.clone(),
        }
    }

    fn aligned(&self, other: &PieceSet) -> (PieceSet, PieceSet) {
        let d = self.depth.max(other.depth);
        (self.refine_to(d), other.refine_to(d))
    }

    pub fn union(&self, other: &PieceSet) -> PieceSet {
        let (a, b) = self.aligned(other);
        PieceSet {
            atoms: a.atoms.union(&b.atoms).copied().collect(),
            cells: a.cells.union(&b.cells),
            depth: a.depth,
            family: a.family.union(&b.family),
        }
    }

    pub fn intersection(&self, other: &PieceSet) -> PieceSet {
        let (a, b) = self.aligned(other);
        PieceSet {
            atoms: a.atoms.intersection(&b.atoms).copied().collect(),
            cells: a.cells.intersection(&b.cells),
            depth: a.depth,
            family: a.family.intersection(&b.family),
        }
    }

    pub fn difference(&self, other: &PieceSet) -> PieceSet {
        let (a, b) = self.aligned(other);
        PieceSet {
            atoms: a.atoms.difference(&b.atoms).copied().collect(),
            cells: a.cells.difference(&b.cells),
            depth: a.depth,
            family: a.family.difference(&b.family),
        }
    }

    pub fn complement(&self, space: &MeasureSpace) -> PieceSet {
        space.whole().difference(self)
    }

    pub fn is_subset(&self, other: &PieceSet) -> bool {
        self.difference(other).is_empty()
    }
}

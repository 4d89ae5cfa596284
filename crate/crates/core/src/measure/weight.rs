use serde::{Deserialize, Serialize};

use super::{MeasureSpace, Piece, PieceSet, SimpleFunction};
use crate::error::{Error, Result};
use crate::intervals::IndexSet;

/// Action of τ on the dyadic cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMap {
    Identity,
    /// `targets[c]` is the image of cell `c` at `depth`. Finer cells follow
    /// their parent, keeping their offset inside it.
    Explicit { depth: u32, targets: Vec<u64> },
}

/// Action of τ on the countable family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMap {
    Identity,
    /// `i ↦ i + k`
    Shift(u64),
}

/// A piece-to-piece measurable transformation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformation {
    pub atoms: Vec<usize>,
    pub cells: CellMap,
    pub family: FamilyMap,
}

impl Transformation {
    pub fn identity(space: &MeasureSpace) -> Self {
        Transformation {
            atoms: (0..space.atoms().len()).collect(),
            cells: CellMap::Identity,
            family: FamilyMap::Identity,
        }
    }

    fn validate(&self, space: &MeasureSpace) -> Result<()> {
        let n = space.atoms().len();
        if self.atoms.len() != n {
            return Err(Error::config("tau.atoms", format!("expected {n} atom images, got {}", self.atoms.len())));
        }
        if let Some((i, t)) = self.atoms.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(Error::config(format!("tau.atoms[{i}]"), format!("target {t} is not an atom")));
        }
        if let CellMap::Explicit { depth, targets } = &self.cells {
            if space.segment().is_none() {
                return Err(Error::config("tau.cells", "space has no segment"));
            }
            if *depth > 16 {
                return Err(Error::config("tau.cells.depth", "explicit cell maps are limited to depth 16"));
            }
            let count = 1u64 << depth;
            if targets.len() as u64 != count {
                return Err(Error::config("tau.cells.targets", format!("expected {count} targets, got {}", targets.len())));
            }
            if let Some((i, t)) = targets.iter().enumerate().find(|(_, &t)| t >= count) {
                return Err(Error::config(format!("tau.cells.targets[{i}]"), format!("target {t} is not a cell")));
            }
        }
        if matches!(self.family, FamilyMap::Shift(_)) && space.family().is_none() {
            return Err(Error::config("tau.family", "space has no family"));
        }
        Ok(())
    }
}

/// τ together with the pushforward masses `μ(τ⁻¹{p})` that define the
/// Radon–Nikodym weight `ω(p) = μ(τ⁻¹{p}) / μ(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStructure {
    space: MeasureSpace,
    tau: Transformation,
    atom_pushforward: Vec<f64>,
    cell_preimage_counts: Option<Vec<u64>>,
    nonsingular: bool,
}

impl WeightedStructure {
    /// Derives the weight of `tau` on `space`.
    pub fn derive(space: &MeasureSpace, tau: Transformation) -> Result<Self> {
        tau.validate(space)?;
        let mut atom_pushforward = vec![0.0; space.atoms().len()];
        for (i, &t) in tau.atoms.iter().enumerate() {
            atom_pushforward[t] += space.atoms()[i].mass;
        }
        let cell_preimage_counts = match &tau.cells {
            CellMap::Identity => None,
            CellMap::Explicit { targets, .. } => {
                let mut counts = vec![0u64; targets.len()];
                for &t in targets {
                    counts[t as usize] += 1;
                }
                Some(counts)
            }
        };
        let mut w = WeightedStructure {
            space: space.clone(),
            tau,
            atom_pushforward,
            cell_preimage_counts,
            nonsingular: false,
        };
        w.nonsingular = w.check_nonsingular();
        Ok(w)
    }

    /// Weight of the identity map, `ω ≡ 1`.
    pub fn unweighted(space: &MeasureSpace) -> Self {
        WeightedStructure::derive(space, Transformation::identity(space)).expect("identity is valid")
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn tau(&self) -> &Transformation {
        &self.tau
    }

    /// Whether null sets pull back to null sets. Every piece of the model
    /// has positive mass, so this always holds; it is still evaluated.
    pub fn nonsingular(&self) -> bool {
        self.nonsingular
    }

    fn check_nonsingular(&self) -> bool {
        let mut probe = self.space.whole();
        // all cells at one depth share a mass
        probe = PieceSet::new(
            probe.atoms().clone(),
            probe.cells().take_first(1),
            probe.depth(),
            probe.family().clone(),
        );
        self.space
            .find_piece(&probe, self.truncation(), |p| !(self.space.piece_mass(p) > 0.0))
            .is_none()
    }

    pub fn truncation(&self) -> u64 {
        self.space.family().map_or(0, |f| f.truncation)
    }

    /// Depth at which τ acts on cells.
    pub fn cell_depth(&self) -> u32 {
        match &self.tau.cells {
            CellMap::Identity => 0,
            CellMap::Explicit { depth, .. } => *depth,
        }
    }

    /// `μ(τ⁻¹{p})`. Cells coarser than the map depth are split first.
    pub fn pushforward_mass(&self, piece: Piece) -> f64 {
        match piece {
            Piece::Atom(i) => self.atom_pushforward[i],
            Piece::Cell { index, depth } => {
                let mass = self.space.cell_mass(depth);
                match &self.cell_preimage_counts {
                    None => mass,
                    Some(counts) => {
                        let map_depth = self.cell_depth();
                        if depth >= map_depth {
                            counts[(index >> (depth - map_depth)) as usize] as f64 * mass
                        } else {
                            let k = map_depth - depth;
                            let start = (index << k) as usize;
                            let n: u64 = counts[start..start + (1usize << k)].iter().sum();
                            n as f64 * self.space.cell_mass(map_depth)
                        }
                    }
                }
            }
            Piece::Family(j) => {
                let rule = self.space.family().expect("family piece on a family space").mass_rule;
                match self.tau.family {
                    FamilyMap::Identity => rule.mass(j),
                    FamilyMap::Shift(k) if j > k => rule.mass(j - k),
                    FamilyMap::Shift(_) => 0.0,
                }
            }
        }
    }

    /// `ω(p)`.
    pub fn omega(&self, piece: Piece) -> f64 {
        self.pushforward_mass(piece) / self.space.piece_mass(piece)
    }

    /// `τ⁻¹(A)`, exact on the piece model.
    pub fn preimage(&self, set: &PieceSet) -> Result<PieceSet> {
        self.space.check_set(set)?;
        let atoms = self
            .tau
            .atoms
            .iter()
            .enumerate()
            .filter(|(_, t)| set.atoms().contains(t))
            .map(|(i, _)| i)
            .collect();
        let (cells, depth) = match &self.tau.cells {
            CellMap::Identity => (set.cells().clone(), set.depth()),
            CellMap::Explicit { depth: map_depth, targets } => {
                let set = set.refine_to(*map_depth);
                let k = set.depth() - map_depth;
                let mut pre = IndexSet::empty();
                for (q, &p) in targets.iter().enumerate() {
                    let block = IndexSet::range(p << k, (p + 1) << k);
                    for r in set.cells().intersection(&block).ranges() {
                        let off_lo = r.start - (p << k);
                        let off_hi = r.end - (p << k);
                        let base = (q as u64) << k;
                        pre.insert(base + off_lo..base + off_hi);
                    }
                }
                (pre, set.depth())
            }
        };
        let family = match self.tau.family {
            FamilyMap::Identity => set.family().clone(),
            FamilyMap::Shift(k) => set.family().shift_down(k, 1),
        };
        Ok(PieceSet::new(atoms, cells, depth, family))
    }

    /// `∫_A ω dμ = μ(τ⁻¹(A))`.
    pub fn weighted_measure(&self, set: &PieceSet) -> Result<f64> {
        self.space.measure(&self.preimage(set)?)
    }

    /// Pieces with `ω = 0` (cells at the map depth, family up to truncation
    /// plus the shifted head).
    pub fn omega_null_set(&self) -> PieceSet {
        let atoms = (0..self.space.atoms().len())
            .filter(|&i| self.atom_pushforward[i] == 0.0)
            .collect();
        let (cells, depth) = match &self.cell_preimage_counts {
            None => (IndexSet::empty(), self.space.depth()),
            Some(counts) => (
                IndexSet::from_indices(
                    counts.iter().enumerate().filter(|(_, &n)| n == 0).map(|(i, _)| i as u64),
                ),
                self.cell_depth(),
            ),
        };
        let family = match self.tau.family {
            FamilyMap::Shift(k) if k > 0 => IndexSet::range(1, k + 1),
            _ => IndexSet::empty(),
        };
        PieceSet::new(atoms, cells, depth, family)
    }

    /// First single piece violating `μ(τ⁻¹{p}) >= μ(p)`, if any. Mass rules
    /// are nonincreasing, so shifted family atoms beyond the head pass.
    pub fn expanding_violation(&self) -> Option<Piece> {
        let depth = self.cell_depth().max(self.space.depth());
        let mut probe = self.space.whole().refine_to(depth);
        if self.cell_preimage_counts.is_none() {
            probe = PieceSet::new(probe.atoms().clone(), IndexSet::empty(), depth, probe.family().clone());
        }
        if let FamilyMap::Shift(k) = self.tau.family {
            probe = PieceSet::new(
                probe.atoms().clone(),
                probe.cells().clone(),
                depth,
                IndexSet::range(1, k + 2).intersection(probe.family()),
            );
        }
        self.space.find_piece(&probe, self.truncation(), |p| {
            self.pushforward_mass(p) < self.space.piece_mass(p) * (1.0 - 1e-12)
        })
    }

    /// `ω` as a function on the pieces. Family values are only exact for
    /// the identity family map, where `ω ≡ 1`.
    pub fn omega_atoms(&self) -> Vec<f64> {
        (0..self.space.atoms().len()).map(|i| self.omega(Piece::Atom(i))).collect()
    }

    /// Lines a function up with the cell depth of τ.
    pub(crate) fn align(&self, f: &SimpleFunction) -> SimpleFunction {
        f.refine_to(self.cell_depth())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> MeasureSpace {
        MeasureSpace::from_json(r#"{"atoms":[{"id":"a1","mass":0.5},{"id":"a2","mass":0.5}]}"#).unwrap()
    }

    fn collapse() -> Transformation {
        Transformation {
            atoms: vec![1, 1],
            cells: CellMap::Identity,
            family: FamilyMap::Identity,
        }
    }

    #[test]
    fn preimage_examples() {
        let s = two_atoms();
        let id = WeightedStructure::unweighted(&s);
        let a = PieceSet::atoms_only([1].into_iter().collect());
        assert_eq!(id.preimage(&a).unwrap(), a);
        let w = WeightedStructure::derive(&s, collapse()).unwrap();
        assert_eq!(w.preimage(&a).unwrap().atoms().len(), 2);

        let seg = MeasureSpace::from_json(r#"{"segment":{"length":1,"depth":2}}"#).unwrap();
        let to_one = Transformation {
            atoms: vec![],
            cells: CellMap::Explicit { depth: 2, targets: vec![1; 4] },
            family: FamilyMap::Identity,
        };
        let w = WeightedStructure::derive(&seg, to_one).unwrap();
        let c = PieceSet::cells_only(IndexSet::range(1, 2), 2);
        assert_eq!(w.preimage(&c).unwrap(), seg.segment_set());
    }

    #[test]
    fn derive_weight_examples() {
        let s = two_atoms();
        let w = WeightedStructure::derive(&s, collapse()).unwrap();
        assert_eq!(w.omega_atoms(), vec![0.0, 2.0]);
        assert!(w.nonsingular());
        assert_eq!(w.omega_null_set().atoms().iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(WeightedStructure::unweighted(&s).omega_atoms(), vec![1.0, 1.0]);
        let swap = Transformation { atoms: vec![1, 0], ..collapse() };
        assert_eq!(WeightedStructure::derive(&s, swap).unwrap().omega_atoms(), vec![1.0, 1.0]);
    }

    #[test]
    fn fine_cells_follow_their_parent() {
        let seg = MeasureSpace::from_json(r#"{"segment":{"length":1,"depth":1}}"#).unwrap();
        let tau = Transformation {
            atoms: vec![],
            cells: CellMap::Explicit { depth: 1, targets: vec![0, 0] },
            family: FamilyMap::Identity,
        };
        let w = WeightedStructure::derive(&seg, tau).unwrap();
        assert_eq!(w.omega(Piece::Cell { index: 1, depth: 3 }), 2.0);
        assert_eq!(w.omega(Piece::Cell { index: 5, depth: 3 }), 0.0);
        assert_eq!(w.pushforward_mass(Piece::Cell { index: 0, depth: 0 }), 1.0);
        let fine = PieceSet::cells_only(IndexSet::range(1, 2), 3);
        let pre = w.preimage(&fine).unwrap();
        assert_eq!(pre.cells(), &IndexSet::from_indices([1, 5]));
    }

    #[test]
    fn family_shift_weights() {
        let s = MeasureSpace::from_json(r#"{"family":{"mass_rule":{"kind":"geometric","m":0.5,"r":0.5}}}"#).unwrap();
        let tau = Transformation { atoms: vec![], cells: CellMap::Identity, family: FamilyMap::Shift(2) };
        let w = WeightedStructure::derive(&s, tau).unwrap();
        assert_eq!(w.omega(Piece::Family(1)), 0.0);
        assert_eq!(w.omega(Piece::Family(3)), 4.0);
        assert_eq!(w.expanding_violation(), Some(Piece::Family(1)));
        let pre = w.preimage(&PieceSet::family_only(IndexSet::range(2, 6))).unwrap();
        assert_eq!(pre.family(), &IndexSet::range(1, 4));
    }

    #[test]
    fn invalid_transformations() {
        let s = two_atoms();
        let bad = Transformation { atoms: vec![0, 2], ..collapse() };
        assert!(matches!(WeightedStructure::derive(&s, bad), Err(Error::Config { .. })));
        let shift = Transformation { family: FamilyMap::Shift(1), ..collapse() };
        assert!(WeightedStructure::derive(&s, shift).is_err());
    }
}

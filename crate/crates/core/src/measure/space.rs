use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PieceSet;
use crate::error::{Error, Result};
use crate::intervals::IndexSet;

/// Largest dyadic depth a segment may be refined to.
pub const MAX_DEPTH: u32 = 24;
/// Default number of family atoms used by numeric integration.
pub const DEFAULT_TRUNCATION: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub id: String,
    pub mass: f64,
}

/// A nonatomic interval of the given length, resolved into `2^depth`
/// dyadic cells of equal measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub length: f64,
    pub depth: u32,
}

/// Mass of the `i`-th family atom, `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MassRule {
    /// `m`
    Constant { m: f64 },
    /// `m * r^(i-1)`, `0 < r < 1`
    Geometric { m: f64, r: f64 },
    /// `m * i^(-s)`, `s > 1`
    Power { m: f64, s: f64 },
}

impl MassRule {
    pub fn mass(&self, i: u64) -> f64 {
        debug_assert!(i >= 1);
        match *self {
            MassRule::Constant { m } => m,
            MassRule::Geometric { m, r } => m * r.powf((i - 1) as f64),
            MassRule::Power { m, s } => m * (i as f64).powf(-s),
        }
    }

    fn validate(&self) -> Result<()> {
        let (m, ok, what) = match *self {
            MassRule::Constant { m } => (m, true, ""),
            MassRule::Geometric { m, r } => (m, r > 0.0 && r < 1.0, "ratio r must lie in (0, 1)"),
            MassRule::Power { m, s } => (m, s > 1.0 && s.is_finite(), "exponent s must be > 1"),
        };
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::config("family.mass_rule.m", format!("mass must be positive, got {m}")));
        }
        if !ok {
            return Err(Error::config("family.mass_rule", what));
        }
        Ok(())
    }

    /// `sum_{i in [a, b)} m_i`, `1 <= a`, `b` possibly unbounded.
    fn partial_sum(&self, a: u64, b: u64) -> f64 {
        if a >= b {
            return 0.0;
        }
        let unbounded = b == crate::intervals::UNBOUNDED;
        match *self {
            MassRule::Constant { m } => {
                if unbounded {
                    f64::INFINITY
                } else {
                    m * (b - a) as f64
                }
            }
            MassRule::Geometric { m, r } => {
                let head = m * r.powf((a - 1) as f64) / (1.0 - r);
                if unbounded {
                    head
                } else {
                    head * -f64::exp_m1((b - a) as f64 * r.ln())
                }
            }
            MassRule::Power { m, s } => {
                if !unbounded && b - a <= 100_000 {
                    m * (a..b).map(|i| (i as f64).powf(-s)).sum::<f64>()
                } else if unbounded {
                    m * zeta_tail(s, a - 1)
                } else {
                    m * (zeta_tail(s, a - 1) - zeta_tail(s, b - 1))
                }
            }
        }
    }
}

/// `sum_{i > n} i^(-s)` by direct summation to a cutoff plus an
/// Euler–Maclaurin remainder.
fn zeta_tail(s: f64, n: u64) -> f64 {
    let cutoff = (n + 1).max(64);
    let head: f64 = (n + 1..cutoff).map(|i| (i as f64).powf(-s)).sum();
    let m = cutoff as f64;
    let rem = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s * m.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * m.powf(-s - 3.0) / 720.0;
    head + rem
}

/// A countable family of atoms given by a closed-form mass rule, with a
/// truncation used where numerics need a finite list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountableAtomFamily {
    pub mass_rule: MassRule,
    #[serde(default = "default_truncation")]
    pub truncation: u64,
}

fn default_truncation() -> u64 {
    DEFAULT_TRUNCATION
}

/// A single piece of the model: an explicit atom, a dyadic cell at a
/// given depth, or the `i`-th family atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Atom(usize),
    Cell { index: u64, depth: u32 },
    Family(u64),
}

/// Validated measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
    segment: Option<Segment>,
    family: Option<CountableAtomFamily>,
    index: HashMap<String, usize>,
}

/// JSON form of a [`MeasureSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<Segment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<CountableAtomFamily>,
}

impl TryFrom<SpaceDescriptor> for MeasureSpace {
    type Error = Error;

    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        MeasureSpace::new(d.atoms, d.segment, d.family)
    }
}

impl From<MeasureSpace> for SpaceDescriptor {
    fn from(s: MeasureSpace) -> Self {
        SpaceDescriptor {
            atoms: s.atoms,
            segment: s.segment,
            family: s.family,
        }
    }
}

impl MeasureSpace {
    pub fn new(
        atoms: Vec<Atom>,
        segment: Option<Segment>,
        family: Option<CountableAtomFamily>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::config(
                    format!("atoms[{i}].mass"),
                    format!("atom `{}` has nonpositive mass {}", a.id, a.mass),
                ));
            }
            if index.insert(a.id.clone(), i).is_some() {
                return Err(Error::config(format!("atoms[{i}].id"), format!("duplicate atom id `{}`", a.id)));
            }
        }
        if let Some(seg) = segment {
            if !(seg.length > 0.0 && seg.length.is_finite()) {
                return Err(Error::config("segment.length", format!("must be positive, got {}", seg.length)));
            }
            if seg.depth < 1 || seg.depth > MAX_DEPTH {
                return Err(Error::config(
                    "segment.depth",
                    format!("must lie in 1..={MAX_DEPTH}, got {}", seg.depth),
                ));
            }
        }
        if let Some(fam) = &family {
            fam.mass_rule.validate()?;
            if fam.truncation == 0 {
                return Err(Error::config("family.truncation", "must be at least 1"));
            }
        }
        if atoms.is_empty() && segment.is_none() && family.is_none() {
            return Err(Error::config("space", "a space needs atoms, a segment or a family"));
        }
        Ok(MeasureSpace {
            atoms,
            segment,
            family,
            index,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("space", e.to_string()))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segment(&self) -> Option<Segment> {
        self.segment
    }

    pub fn family(&self) -> Option<&CountableAtomFamily> {
        self.family.as_ref()
    }

    pub fn atom_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown atom id `{id}`")))
    }

    /// Default dyadic depth of the segment (0 when there is no segment).
    pub fn depth(&self) -> u32 {
        self.segment.map_or(0, |s| s.depth)
    }

    pub fn cell_mass(&self, depth: u32) -> f64 {
        self.segment.map_or(0.0, |s| s.length / 2f64.powi(depth as i32))
    }

    /// Measure of a single piece.
    pub fn piece_mass(&self, piece: Piece) -> f64 {
        match piece {
            Piece::Atom(i) => self.atoms[i].mass,
            Piece::Cell { depth, .. } => self.cell_mass(depth),
            Piece::Family(i) => self.family.map_or(0.0, |f| f.mass_rule.mass(i)),
        }
    }

    pub fn piece_name(&self, piece: Piece) -> String {
        match piece {
            Piece::Atom(i) => format!("atom `{}`", self.atoms[i].id),
            Piece::Cell { index, depth } => format!("cell {index} at depth {depth}"),
            Piece::Family(i) => format!("family atom {i}"),
        }
    }

    /// Cells of the whole segment at `depth`.
    pub fn cell_universe(&self, depth: u32) -> IndexSet {
        match self.segment {
            Some(_) => IndexSet::range(0, 1u64 << depth),
            None => IndexSet::empty(),
        }
    }

    /// Family indices `[1, ∞)`, or empty.
    pub fn family_universe(&self) -> IndexSet {
        match self.family {
            Some(_) => IndexSet::from(1),
            None => IndexSet::empty(),
        }
    }

    pub fn whole(&self) -> PieceSet {
        PieceSet::new(
            (0..self.atoms.len()).collect(),
            self.cell_universe(self.depth()),
            self.depth(),
            self.family_universe(),
        )
    }

    pub fn empty_set(&self) -> PieceSet {
        PieceSet::new(Default::default(), IndexSet::empty(), self.depth(), IndexSet::empty())
    }

    pub fn segment_set(&self) -> PieceSet {
        PieceSet::new(Default::default(), self.cell_universe(self.depth()), self.depth(), IndexSet::empty())
    }

    /// Checks that `set` only names pieces of this space.
    pub fn check_set(&self, set: &PieceSet) -> Result<()> {
        if let Some(&i) = set.atoms().iter().find(|&&i| i >= self.atoms.len()) {
            return Err(Error::Domain(format!("atom index {i} is not in the space")));
        }
        if !set.cells().is_empty() && set.depth() > MAX_DEPTH {
            return Err(Error::DepthExhausted {
                required: set.depth(),
                limit: MAX_DEPTH,
            });
        }
        if !set.cells().is_subset(&self.cell_universe(set.depth())) {
            return Err(Error::Domain("cell indices fall outside the segment".into()));
        }
        if !set.family().is_subset(&self.family_universe()) {
            return Err(Error::Domain("family indices fall outside the family".into()));
        }
        Ok(())
    }

    /// Measure of a piece-set: atom masses plus cell count times cell mass
    /// plus the closed-form family sum.
    pub fn measure(&self, set: &PieceSet) -> Result<f64> {
        self.check_set(set)?;
        let atoms: f64 = set.atoms().iter().map(|&i| self.atoms[i].mass).sum();
        let cells = set.cells().len().unwrap_or(0) as f64 * self.cell_mass(set.depth());
        Ok(atoms + cells + self.family_measure(set.family()))
    }

    /// Closed-form measure of a set of family indices.
    pub fn family_measure(&self, indices: &IndexSet) -> f64 {
        match self.family {
            None => 0.0,
            Some(f) => indices.ranges().map(|r| f.mass_rule.partial_sum(r.start, r.end)).sum(),
        }
    }

    pub fn total_measure(&self) -> f64 {
        self.measure(&self.whole()).expect("whole space is valid")
    }

    /// `(nonatomic, atomic)` parts: the segment cells versus explicit atoms
    /// together with the family.
    pub fn decompose(&self) -> (PieceSet, PieceSet) {
        let whole = self.whole();
        let nonatomic = self.segment_set();
        let atomic = PieceSet::new(whole.atoms().clone(), IndexSet::empty(), self.depth(), whole.family().clone());
        (nonatomic, atomic)
    }

    /// `A = A_1 ⊃ A_2 ⊃ … ⊃ A_n` with `μ(A_k) = μ(A) 2^(1-k)`, each a union
    /// of dyadic cells. The depth is refined as far as needed.
    pub fn shrinking_sequence(&self, set: &PieceSet, n: usize) -> Result<Vec<PieceSet>> {
        self.check_set(set)?;
        if !set.atoms().is_empty() || !set.family().is_empty() {
            return Err(Error::NotNonatomic("set contains atoms".into()));
        }
        let count = set.cells().len().unwrap_or(0);
        if count == 0 {
            return Err(Error::NotNonatomic("set has no segment measure".into()));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let halvings = (n - 1) as u32;
        let extra = halvings.saturating_sub(count.trailing_zeros());
        let depth = set.depth() + extra;
        if depth > MAX_DEPTH {
            return Err(Error::DepthExhausted {
                required: depth,
                limit: MAX_DEPTH,
            });
        }
        let mut current = set.refine_to(depth);
        let mut out = Vec::with_capacity(n);
        out.push(current.clone());
        for _ in 1..n {
            let len = current.cells().len().unwrap_or(0);
            let next = PieceSet::new(Default::default(), current.cells().take_first(len / 2), depth, IndexSet::empty());
            out.push(next.clone());
            current = next;
        }
        Ok(out)
    }

    /// Whether every piece in `set` has the given property, returning the
    /// first offending piece otherwise.
    pub(crate) fn find_piece<F>(&self, set: &PieceSet, truncation: u64, mut pred: F) -> Option<Piece>
    where
        F: FnMut(Piece) -> bool,
    {
        for &i in set.atoms() {
            if pred(Piece::Atom(i)) {
                return Some(Piece::Atom(i));
            }
        }
        for r in set.cells().ranges() {
            for index in r {
                let p = Piece::Cell {
                    index,
                    depth: set.depth(),
                };
                if pred(p) {
                    return Some(p);
                }
            }
        }
        let head = set.family().intersection(&IndexSet::range(1, truncation + 1));
        let found = head.iter().map(Piece::Family).find(|&p| pred(p));
        found
    }
}

impl fmt::Display for MeasureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} atoms", self.atoms.len())?;
        if let Some(s) = self.segment {
            write!(f, ", segment of length {} at depth {}", s.length, s.depth)?;
        }
        if let Some(fam) = self.family {
            write!(f, ", countable family {:?}", fam.mass_rule)?;
        }
        Ok(())
    }
}

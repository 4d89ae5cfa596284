//! JSON forms of functions, sets and transformations that refer to atoms
//! by id. They are resolved against a [`MeasureSpace`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::IndexSet;
use crate::measure::{CellMap, FamilyMap, FamilyPart, MeasureSpace, PieceSet, SimpleFunction, Transformation, ValueRule};

/// A set of family indices.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSpec {
    All,
    #[default]
    None,
    /// `1..=k`
    First(u64),
    /// `k..`
    From(u64),
    Indices(Vec<u64>),
}

impl IndexSpec {
    fn resolve(&self, field: &str) -> Result<IndexSet> {
        Ok(match self {
            IndexSpec::All => IndexSet::from(1),
            IndexSpec::None => IndexSet::empty(),
            IndexSpec::First(k) => IndexSet::range(1, k + 1),
            IndexSpec::From(0) => return Err(Error::config(field, "family indices start at 1")),
            IndexSpec::From(k) => IndexSet::from(*k),
            IndexSpec::Indices(v) => {
                if v.contains(&0) {
                    return Err(Error::config(field, "family indices start at 1"));
                }
                IndexSet::from_indices(v.iter().copied())
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub range: [u64; 2],
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub rule: ValueRule,
    #[serde(default = "all_indices")]
    pub support: IndexSpec,
}

fn all_indices() -> IndexSpec {
    IndexSpec::All
}

/// A simple function. Unlisted atoms and cells are zero. `segment` sets a
/// constant value on the whole segment before `cells` are applied.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub atoms: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<RunSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

impl FunctionSpec {
    pub fn resolve(&self, space: &MeasureSpace) -> Result<SimpleFunction> {
        let mut atoms = vec![0.0; space.atoms().len()];
        for (id, &v) in &self.atoms {
            let i = space
                .atom_index(id)
                .map_err(|_| Error::config(format!("atoms.{id}"), "no atom with this id"))?;
            atoms[i] = v;
        }
        let depth = self.depth.unwrap_or(space.depth());
        if space.segment().is_none() && (self.segment.is_some() || !self.cells.is_empty()) {
            return Err(Error::config("cells", "the space has no segment"));
        }
        let n = if space.segment().is_some() { 1u64 << depth.min(63) } else { 0 };
        let mut runs: Vec<(u64, u64, f64)> = Vec::new();
        let mut cursor = 0;
        let fill = self.segment.unwrap_or(0.0);
        let mut cells = self.cells.clone();
        cells.sort_by_key(|r| r.range[0]);
        for (i, r) in cells.iter().enumerate() {
            let [a, b] = r.range;
            if a < cursor || b > n || a >= b {
                return Err(Error::config(format!("cells[{i}].range"), format!("[{a}, {b}) is invalid at depth {depth}")));
            }
            if a > cursor && fill != 0.0 {
                runs.push((cursor, a, fill));
            }
            runs.push((a, b, r.value));
            cursor = b;
        }
        if cursor < n && fill != 0.0 {
            runs.push((cursor, n, fill));
        }
        let family = match (&self.family, space.family()) {
            (None, _) => None,
            (Some(_), None) => return Err(Error::config("family", "the space has no family")),
            (Some(f), Some(_)) => Some(FamilyPart::new(f.rule, f.support.resolve("family.support")?)),
        };
        SimpleFunction::from_parts(space, atoms, depth, runs, family)
    }
}

/// A piece-set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// Half-open cell ranges at `depth`.
    #[serde(default)]
    pub cells: Vec<[u64; 2]>,
    #[serde(default)]
    pub family: IndexSpec,
}

impl SetSpec {
    pub fn resolve(&self, space: &MeasureSpace) -> Result<PieceSet> {
        let mut atoms = BTreeSet::new();
        for (i, id) in self.atoms.iter().enumerate() {
            atoms.insert(
                space
                    .atom_index(id)
                    .map_err(|_| Error::config(format!("atoms[{i}]"), format!("no atom with id `{id}`")))?,
            );
        }
        let depth = self.depth.unwrap_or(space.depth());
        let cells = IndexSet::from_ranges(self.cells.iter().map(|r| r[0]..r[1]));
        let set = PieceSet::new(atoms, cells, depth, self.family.resolve("family")?);
        space.check_set(&set).map_err(|e| Error::config("set", e.to_string()))?;
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellSpec {
    Identity,
    /// Every cell at `depth` is sent to `targets[c]`.
    Map { depth: u32, targets: Vec<u64> },
    /// Every cell at `depth` is sent to one cell.
    Constant { depth: u32, target: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySpecMap {
    Identity,
    Shift(u64),
}

/// A transformation τ. Unlisted atoms are fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSpec {
    #[serde(default)]
    pub atoms: BTreeMap<String, String>,
    #[serde(default = "identity_cells")]
    pub cells: CellSpec,
    #[serde(default = "identity_family")]
    pub family: FamilySpecMap,
}

fn identity_cells() -> CellSpec {
    CellSpec::Identity
}

fn identity_family() -> FamilySpecMap {
    FamilySpecMap::Identity
}

impl TauSpec {
    pub fn resolve(&self, space: &MeasureSpace) -> Result<Transformation> {
        let mut atoms: Vec<usize> = (0..space.atoms().len()).collect();
        for (from, to) in &self.atoms {
            let i = space
                .atom_index(from)
                .map_err(|_| Error::config(format!("tau.atoms.{from}"), "no atom with this id"))?;
            let j = space
                .atom_index(to)
                .map_err(|_| Error::config(format!("tau.atoms.{from}"), format!("no atom with id `{to}`")))?;
            atoms[i] = j;
        }
        let cells = match &self.cells {
            CellSpec::Identity => CellMap::Identity,
            CellSpec::Map { depth, targets } => CellMap::Explicit {
                depth: *depth,
                targets: targets.clone(),
            },
            CellSpec::Constant { depth, target } => {
                if *depth > 16 {
                    return Err(Error::config("tau.cells.depth", "explicit cell maps are limited to depth 16"));
                }
                CellMap::Explicit {
                    depth: *depth,
                    targets: vec![*target; 1 << depth],
                }
            }
        };
        let family = match self.family {
            FamilySpecMap::Identity => FamilyMap::Identity,
            FamilySpecMap::Shift(k) => FamilyMap::Shift(k),
        };
        Ok(Transformation { atoms, cells, family })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Piece;

    fn space() -> MeasureSpace {
        MeasureSpace::from_json(
            r#"{"atoms":[{"id":"a1","mass":0.5},{"id":"a2","mass":0.5}],
                "segment":{"length":1,"depth":2},
                "family":{"mass_rule":{"kind":"geometric","m":0.5,"r":0.5}}}"#,
        )
        .unwrap()
    }

    #[test]
    fn function_by_atom_id() {
        let s = space();
        let spec: FunctionSpec = serde_json::from_str(
            r#"{"atoms":{"a2":5},"segment":1,"cells":[{"range":[1,2],"value":3}],
                "family":{"rule":{"kind":"harmonic","c":1},"support":{"first":4}}}"#,
        )
        .unwrap();
        let f = spec.resolve(&s).unwrap();
        assert_eq!(f.atoms(), &[0.0, 5.0]);
        assert_eq!(f.value_at(Piece::Cell { index: 0, depth: 2 }), 1.0);
        assert_eq!(f.value_at(Piece::Cell { index: 1, depth: 2 }), 3.0);
        assert_eq!(f.value_at(Piece::Cell { index: 3, depth: 2 }), 1.0);
        assert_eq!(f.value_at(Piece::Family(4)), 0.25);
        assert_eq!(f.value_at(Piece::Family(5)), 0.0);
    }

    #[test]
    fn unknown_ids_name_the_field() {
        let s = space();
        let spec: FunctionSpec = serde_json::from_str(r#"{"atoms":{"zz":1}}"#).unwrap();
        assert_eq!(
            spec.resolve(&s).unwrap_err(),
            Error::config("atoms.zz", "no atom with this id")
        );
        assert!(serde_json::from_str::<FunctionSpec>(r#"{"atom":{}}"#).is_err());
    }

    #[test]
    fn sets_and_tau() {
        let s = space();
        let set: SetSpec = serde_json::from_str(r#"{"atoms":["a1"],"cells":[[0,2]],"family":{"first":2}}"#).unwrap();
        let set = set.resolve(&s).unwrap();
        assert!((s.measure(&set).unwrap() - (0.5 + 0.5 + 0.75)).abs() < 1e-15);
        let tau: TauSpec =
            serde_json::from_str(r#"{"atoms":{"a1":"a2"},"cells":{"constant":{"depth":1,"target":0}},"family":{"shift":1}}"#)
                .unwrap();
        let t = tau.resolve(&s).unwrap();
        assert_eq!(t.atoms, vec![1, 1]);
        assert_eq!(t.cells, CellMap::Explicit { depth: 1, targets: vec![0, 0] });
        assert_eq!(t.family, FamilyMap::Shift(1));
    }
}

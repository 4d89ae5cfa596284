//! Desk-scale σ-finite measure spaces: explicit atoms, a dyadic nonatomic
//! segment and a symbolic countable atom family, together with simple
//! functions and piece-to-piece transformations.

mod function;
mod set;
mod space;
mod weight;

pub use function::{FamilyPart, SimpleFunction, ValueRule};
pub use set::PieceSet;
pub use space::{
    Atom, CountableAtomFamily, MassRule, MeasureSpace, Piece, Segment, DEFAULT_TRUNCATION,
    MAX_DEPTH,
};
pub use weight::{CellMap, FamilyMap, Transformation, WeightedStructure};

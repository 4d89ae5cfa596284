//! Seeded generators for random spaces, functions, Orlicz functions and
//! transformations, shared by probes, the theorem suite and tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::intervals::IndexSet;
use crate::measure::{
    Atom, CellMap, CountableAtomFamily, FamilyMap, FamilyPart, MassRule, MeasureSpace, Segment,
    SimpleFunction, Transformation, ValueRule,
};
use crate::orlicz::OrliczFunction;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which parts a random space should have.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceShape {
    pub atoms: usize,
    pub segment: bool,
    pub family: bool,
}

pub fn space<R: Rng>(rng: &mut R, shape: SpaceShape) -> MeasureSpace {
    let atoms = (0..shape.atoms)
        .map(|i| Atom {
            id: format!("a{}", i + 1),
            mass: rng.random_range(0.05..2.0),
        })
        .collect();
    let segment = shape.segment.then(|| Segment {
        length: rng.random_range(0.25..4.0),
        depth: rng.random_range(1..=4),
    });
    let family = shape.family.then(|| CountableAtomFamily {
        mass_rule: match rng.random_range(0..3) {
            0 => MassRule::Geometric {
                m: rng.random_range(0.1..1.0),
                r: rng.random_range(0.3..0.8),
            },
            1 => MassRule::Power {
                m: rng.random_range(0.1..1.0),
                s: rng.random_range(1.5..3.0),
            },
            _ => MassRule::Constant {
                m: rng.random_range(0.1..1.0),
            },
        },
        truncation: 32,
    });
    MeasureSpace::new(atoms, segment, family).expect("sampled space is valid")
}

/// A value in `[-2, 2]`, zero about one time in five.
fn value<R: Rng>(rng: &mut R, dyadic: bool) -> f64 {
    if rng.random_bool(0.2) {
        0.0
    } else if dyadic {
        rng.random_range(-16i32..=16) as f64 / 8.0
    } else {
        rng.random_range(-2.0..2.0)
    }
}

fn function_with<R: Rng>(rng: &mut R, space: &MeasureSpace, dyadic: bool) -> SimpleFunction {
    let atoms = (0..space.atoms().len()).map(|_| value(rng, dyadic)).collect();
    let depth = space.depth() + rng.random_range(0..=2);
    let runs = match space.segment() {
        None => Vec::new(),
        Some(_) => {
            let n = 1u64 << depth;
            let mut cuts: Vec<u64> = (0..rng.random_range(0..4)).map(|_| rng.random_range(1..n)).collect();
            cuts.push(0);
            cuts.push(n);
            cuts.sort_unstable();
            cuts.dedup();
            cuts.windows(2).map(|w| (w[0], w[1], value(rng, dyadic))).collect()
        }
    };
    let family = space.family().map(|fam| {
        let c = value(rng, dyadic);
        let rule = match rng.random_range(0..3) {
            0 => ValueRule::constant(c),
            1 => ValueRule::harmonic(c),
            _ => ValueRule::geometric(c, if dyadic { 0.5 } else { rng.random_range(0.2..0.9) })
                .expect("ratio in range"),
        };
        let k = rng.random_range(1..=fam.truncation);
        FamilyPart::new(rule, IndexSet::range(1, k + 1))
    });
    SimpleFunction::from_parts(space, atoms, depth, runs, family).expect("sampled function fits")
}

/// Random simple function with values in `[-2, 2]` and finitely
/// supported family part.
pub fn function<R: Rng>(rng: &mut R, space: &MeasureSpace) -> SimpleFunction {
    function_with(rng, space, false)
}

/// Like [`function`] with values in `2^-3 ℤ`, so products are exact.
pub fn dyadic_function<R: Rng>(rng: &mut R, space: &MeasureSpace) -> SimpleFunction {
    function_with(rng, space, true)
}

/// A doubling Orlicz function: `Power` or `PowerLog`.
pub fn doubling_phi<R: Rng>(rng: &mut R) -> OrliczFunction {
    if rng.random_bool(0.5) {
        OrliczFunction::power(rng.random_range(1.2..4.0), rng.random_range(0.5..2.0)).expect("valid power")
    } else {
        OrliczFunction::power_log(rng.random_range(1.0..3.0)).expect("valid power-log")
    }
}

/// Any built-in family, including the non-doubling `ExpMinus`.
pub fn phi<R: Rng>(rng: &mut R) -> OrliczFunction {
    if rng.random_bool(0.2) {
        OrliczFunction::exp_minus()
    } else {
        doubling_phi(rng)
    }
}

/// Random transformation of `space`; cell maps act at depth 2.
pub fn transformation<R: Rng>(rng: &mut R, space: &MeasureSpace) -> Transformation {
    let n = space.atoms().len();
    let atoms = (0..n).map(|_| rng.random_range(0..n)).collect();
    let cells = match space.segment() {
        Some(_) if rng.random_bool(0.5) => CellMap::Explicit {
            depth: 2,
            targets: (0..4).map(|_| rng.random_range(0..4)).collect(),
        },
        _ => CellMap::Identity,
    };
    let family = match space.family() {
        Some(_) if rng.random_bool(0.5) => FamilyMap::Shift(rng.random_range(1..=3)),
        _ => FamilyMap::Identity,
    };
    Transformation { atoms, cells, family }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_samples() {
        let shape = SpaceShape {
            atoms: 3,
            segment: true,
            family: true,
        };
        let (mut a, mut b) = (rng(7), rng(7));
        let (sa, sb) = (space(&mut a, shape), space(&mut b, shape));
        assert_eq!(sa, sb);
        assert_eq!(function(&mut a, &sa), function(&mut b, &sb));
    }

    #[test]
    fn dyadic_values_are_exact_eighths() {
        let mut r = rng(1);
        let s = space(
            &mut r,
            SpaceShape {
                atoms: 5,
                segment: false,
                family: false,
            },
        );
        let f = dyadic_function(&mut r, &s);
        assert!(f.atoms().iter().all(|v| (v * 8.0).fract() == 0.0));
    }
}

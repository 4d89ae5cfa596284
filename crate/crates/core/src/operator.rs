//! Multiplication operators `M_u f = u·f` on `L^φ` and `L^φ_ω`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::{MeasureSpace, Piece, PieceSet, SimpleFunction};
use crate::norms::{luxemburg_norm, Weight, LUXEMBURG_TOL};
use crate::orlicz::OrliczFunction;
use crate::sample;

/// Threshold below which `ess inf |u|` counts as zero.
pub const INVERTIBILITY_TOL: f64 = 1e-12;
/// Relative size of the witness margin `δ`.
pub const WITNESS_DELTA: f64 = 1e-6;
/// Number of `ε = 2^-k` levels in a dimension report.
pub const DIM_LEVELS: u32 = 21;

/// `M_u f`.
pub fn apply(u: &SimpleFunction, f: &SimpleFunction) -> Result<SimpleFunction> {
    u.mul(f)
}

/// Pieces of positive weight mass.
fn positive_region(weight: Weight<'_>) -> PieceSet {
    match weight {
        Weight::Plain(s) => s.whole(),
        Weight::Weighted(w) => w.omega_null_set().complement(w.space()),
    }
}

/// `ess sup |u|` with respect to `ω dμ`.
pub fn weighted_ess_sup(u: &SimpleFunction, weight: Weight<'_>) -> f64 {
    u.restrict(&positive_region(weight)).ess_sup()
}

/// `N(u, ε) = { |u| >= ε }`.
pub fn n_set(u: &SimpleFunction, eps: f64) -> Result<PieceSet> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    Ok(u.level_set(eps, false))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorNorm {
    /// `ess sup |u|` over pieces of positive `ω·μ` mass.
    pub norm: f64,
    /// `E = { |u| >= norm - δ }` restricted to positive weight.
    pub witness: PieceSet,
    pub delta: f64,
    pub witness_mass: f64,
    /// The `μ`-essential supremum exceeds the weighted one: `|u|` is
    /// largest where `ω` vanishes.
    pub seminorm_only: bool,
}

/// `||M_u|| = ||u||_∞` with the near-maximal witness set.
pub fn operator_norm(u: &SimpleFunction, weight: Weight<'_>) -> Result<OperatorNorm> {
    let space = weight.space();
    u.check_space(space)?;
    let region = positive_region(weight);
    let restricted = u.restrict(&region);
    let norm = restricted.ess_sup();
    let seminorm_only = u.ess_sup() > norm;
    if norm == 0.0 {
        return Ok(OperatorNorm {
            norm,
            witness: space.empty_set(),
            delta: 0.0,
            witness_mass: 0.0,
            seminorm_only,
        });
    }
    let mut delta = WITNESS_DELTA * norm;
    for _ in 0..64 {
        let mut witness = restricted.level_set(norm - delta, false).intersection(&region);
        let mut mass = weight.set_mass(&witness)?;
        if mass.is_infinite() {
            let truncation = space.family().map_or(0, |f| f.truncation);
            witness = PieceSet::new(
                witness.atoms().clone(),
                witness.cells().clone(),
                witness.depth(),
                witness.family().take_first(truncation.max(1)),
            );
            mass = weight.set_mass(&witness)?;
        }
        if mass > 0.0 {
            return Ok(OperatorNorm {
                norm,
                witness,
                delta,
                witness_mass: mass,
                seminorm_only,
            });
        }
        delta *= 0.5;
    }
    Err(Error::Hypothesis("no near-maximal set of positive weighted measure".into()))
}

/// `||M_u f|| / ||f||` for each probe with `||f|| > 0`.
pub fn probe_ratios(
    u: &SimpleFunction,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    probes: &[SimpleFunction],
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(probes.len());
    for f in probes {
        let nf = luxemburg_norm(f, phi, weight, LUXEMBURG_TOL)?.value;
        if nf > 0.0 {
            let nuf = luxemburg_norm(&apply(u, f)?, phi, weight, LUXEMBURG_TOL)?.value;
            out.push(nuf / nf);
        }
    }
    Ok(out)
}

/// Indicators of single pieces (family up to the truncation) followed by
/// `random` seeded random functions.
pub fn default_probes(space: &MeasureSpace, random: usize, seed: u64) -> Vec<SimpleFunction> {
    let mut probes = Vec::new();
    let truncation = space.family().map_or(0, |f| f.truncation);
    let mut pieces: Vec<Piece> = (0..space.atoms().len()).map(Piece::Atom).collect();
    if space.segment().is_some() {
        let d = space.depth();
        pieces.extend((0..1u64 << d).map(|index| Piece::Cell { index, depth: d }));
    }
    if space.family().is_some() {
        pieces.extend((1..=truncation).map(Piece::Family));
    }
    for p in pieces {
        let set = piece_set(p);
        probes.push(SimpleFunction::indicator(space, &set).expect("piece of the space"));
    }
    let mut rng = sample::rng(seed);
    for _ in 0..random {
        probes.push(sample::function(&mut rng, space));
    }
    probes
}

pub fn piece_set(p: Piece) -> PieceSet {
    use crate::intervals::IndexSet;
    match p {
        Piece::Atom(i) => PieceSet::atoms_only([i].into_iter().collect()),
        Piece::Cell { index, depth } => PieceSet::cells_only(IndexSet::range(index, index + 1), depth),
        Piece::Family(i) => PieceSet::family_only(IndexSet::range(i, i + 1)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Compact,
    NotCompact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    /// Every `N(u, ε)` is a finite set of atoms.
    NSetsFiniteAtoms,
    /// Some `N(u, ε)` carries nonatomic measure.
    NonatomicMassInNSet,
    /// Some `N(u, ε)` contains infinitely many family atoms.
    InfinitelyManyFamilyAtoms,
    ZeroOperator,
}

/// Model-scale dimension of `L^φ(N(u, ε))`: the number of positive-mass
/// pieces, or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl Dim {
    pub fn is_finite(&self) -> bool {
        matches!(self, Dim::Finite(_))
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::Finite(n) => s.serialize_u64(*n),
            Dim::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(n) => Ok(Dim::Finite(n)),
            Repr::S(s) if s == "inf" => Ok(Dim::Infinite),
            Repr::S(s) => Err(serde::de::Error::custom(format!("expected a count or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimEntry {
    pub k: u32,
    pub eps: f64,
    pub dim: Dim,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactReport {
    pub verdict: Compactness,
    pub justification: Justification,
    pub dim_report: Vec<DimEntry>,
}

fn dim_of(set: &PieceSet) -> Dim {
    if !set.cells().is_empty() {
        return Dim::Infinite;
    }
    match set.family().len() {
        None => Dim::Infinite,
        Some(n) => Dim::Finite(set.atoms().len() as u64 + n),
    }
}

/// Decides compactness of `M_u` from the value rules: compact iff every
/// `N(u, ε)` has no nonatomic mass and finitely many family atoms.
pub fn classify_compact(u: &SimpleFunction, weight: Weight<'_>) -> Result<CompactReport> {
    u.check_space(weight.space())?;
    let u = u.restrict(&positive_region(weight));
    let dim_report = (0..DIM_LEVELS)
        .map(|k| {
            let eps = 0.5f64.powi(k as i32);
            DimEntry {
                k,
                eps,
                dim: dim_of(&u.level_set(eps, false)),
            }
        })
        .collect();
    let (verdict, justification) = if u.is_zero() {
        (Compactness::Compact, Justification::ZeroOperator)
    } else if u.runs().iter().any(|r| r.2 != 0.0) {
        (Compactness::NotCompact, Justification::NonatomicMassInNSet)
    } else if u
        .family()
        .is_some_and(|p| !p.support.is_bounded() && p.rule.is_nondecaying())
    {
        (Compactness::NotCompact, Justification::InfinitelyManyFamilyAtoms)
    } else {
        (Compactness::Compact, Justification::NSetsFiniteAtoms)
    };
    Ok(CompactReport {
        verdict,
        justification,
        dim_report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompleteContinuity {
    pub verdict: Compactness,
    /// The equivalence with compactness needs φ doubling and superlinear;
    /// when either is missing the verdict is only the compact one.
    pub conditional: bool,
}

pub fn complete_continuity(compact: &CompactReport, phi: &OrliczFunction) -> CompleteContinuity {
    CompleteContinuity {
        verdict: compact.verdict,
        conditional: !(phi.delta2().holds() && phi.superlinear()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invertibility {
    pub invertible: bool,
    pub ess_inf_abs: f64,
    pub inverse: Option<SimpleFunction>,
    pub finite_measure: bool,
}

/// `M_u` is invertible iff `u` is bounded away from zero.
pub fn check_invertible(u: &SimpleFunction, space: &MeasureSpace) -> Result<Invertibility> {
    u.check_space(space)?;
    let ess_inf_abs = u.ess_inf_abs();
    let invertible = ess_inf_abs > INVERTIBILITY_TOL;
    Ok(Invertibility {
        invertible,
        ess_inf_abs,
        inverse: if invertible { Some(u.reciprocal()?) } else { None },
        finite_measure: space.total_measure().is_finite(),
    })
}

/// `u_n = u·χ{|u| > 1/n}`.
pub fn truncation(u: &SimpleFunction, n: u64) -> Result<SimpleFunction> {
    if n == 0 {
        return Err(Error::Domain("truncation index must be >= 1".into()));
    }
    Ok(u.restrict(&u.level_set(1.0 / n as f64, true)))
}

/// `max ||(u_n - u) f|| / ||f||` over the probes.
pub fn truncation_gap(
    u: &SimpleFunction,
    n: u64,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    probes: &[SimpleFunction],
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("truncation index must be >= 1".into()));
    }
    let space = weight.space();
    // u - u_n = u·χ{|u| <= 1/n}
    let low = u.level_set(1.0 / n as f64, true).complement(space);
    let diff = u.restrict(&low);
    Ok(probe_ratios(&diff, phi, weight, probes)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Checks `u(vf) = v(uf) = (uv)f` exactly on every probe, and that the
/// operator `T = M_v` satisfies `T(1) = v` and `T(χ_E) = v·χ_E` on probe
/// supports. Products that round differently in different orders (values
/// that are not dyadic) can make the exact comparison fail.
pub fn commute_check(
    space: &MeasureSpace,
    u: &SimpleFunction,
    v: &SimpleFunction,
    probes: &[SimpleFunction],
) -> Result<bool> {
    let uv = u.mul(v)?;
    if uv != v.mul(u)? {
        return Ok(false);
    }
    for f in probes {
        let a = apply(u, &apply(v, f)?)?;
        let b = apply(v, &apply(u, f)?)?;
        let c = apply(&uv, f)?;
        if a != b || b != c {
            return Ok(false);
        }
    }
    let one = SimpleFunction::constant(space, 1.0);
    if apply(v, &one)? != v.refine_to(one.depth()) {
        return Ok(false);
    }
    for f in probes {
        let e = f.support();
        let chi = SimpleFunction::indicator(space, &e)?;
        let d = chi.depth().max(v.depth());
        if apply(v, &chi)?.refine_to(d) != v.restrict(&e).refine_to(d) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full analysis of `M_u` on `L^φ` or `L^φ_ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub bounded: bool,
    pub operator_norm: f64,
    pub norm_witness: PieceSet,
    pub witness_delta: f64,
    pub seminorm_only: bool,
    pub compact: Compactness,
    pub justification: Justification,
    pub completely_continuous: CompleteContinuity,
    pub invertible: bool,
    pub ess_inf_abs: f64,
    pub finite_measure: bool,
    pub delta2: bool,
    pub superlinear: bool,
    pub dim_report: Vec<DimEntry>,
    /// Largest probe ratio `||uf|| / ||f||` seen.
    pub probe_max: f64,
    /// `||u χ_E|| / ||χ_E||` for the witness `E`.
    pub witness_ratio: f64,
}

pub fn analyze(
    u: &SimpleFunction,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    probes: &[SimpleFunction],
) -> Result<OperatorReport> {
    let space = weight.space();
    let norm = operator_norm(u, weight)?;
    let compact = classify_compact(u, weight)?;
    let inv = check_invertible(u, space)?;
    let probe_max = probe_ratios(u, phi, weight, probes)?.into_iter().fold(0.0, f64::max);
    let witness_ratio = if norm.witness.is_empty() {
        0.0
    } else {
        let chi = SimpleFunction::indicator(space, &norm.witness)?;
        probe_ratios(u, phi, weight, std::slice::from_ref(&chi))?
            .first()
            .copied()
            .unwrap_or(0.0)
    };
    Ok(OperatorReport {
        bounded: norm.norm.is_finite(),
        operator_norm: norm.norm,
        norm_witness: norm.witness,
        witness_delta: norm.delta,
        seminorm_only: norm.seminorm_only,
        compact: compact.verdict,
        justification: compact.justification,
        completely_continuous: complete_continuity(&compact, phi),
        invertible: inv.invertible,
        ess_inf_abs: inv.ess_inf_abs,
        finite_measure: inv.finite_measure,
        delta2: phi.delta2().holds(),
        superlinear: phi.superlinear(),
        dim_report: compact.dim_report,
        probe_max,
        witness_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::IndexSet;
    use crate::measure::{CellMap, FamilyMap, FamilyPart, Transformation, ValueRule, WeightedStructure};
    use proptest::prelude::*;

    fn two_atoms() -> MeasureSpace {
        MeasureSpace::from_json(r#"{"atoms":[{"id":"a1","mass":0.5},{"id":"a2","mass":0.5}]}"#).unwrap()
    }

    fn family_space() -> MeasureSpace {
        MeasureSpace::from_json(r#"{"family":{"mass_rule":{"kind":"constant","m":1.0}}}"#).unwrap()
    }

    fn on_family(space: &MeasureSpace, rule: ValueRule) -> SimpleFunction {
        SimpleFunction::from_parts(space, vec![], 0, vec![], Some(FamilyPart::new(rule, IndexSet::from(1)))).unwrap()
    }

    fn sq() -> OrliczFunction {
        OrliczFunction::power(2.0, 1.0).unwrap()
    }

    #[test]
    fn apply_examples() {
        let s = two_atoms();
        let f = SimpleFunction::on_atoms(&s, vec![1.0, 1.0]).unwrap();
        let u = SimpleFunction::on_atoms(&s, vec![2.0, 5.0]).unwrap();
        assert_eq!(apply(&u, &f).unwrap(), u);
        assert_eq!(apply(&SimpleFunction::constant(&s, 1.0), &u).unwrap(), u);
        assert!(apply(&SimpleFunction::zero(&s), &u).unwrap().is_zero());
        assert!(apply(&u, &SimpleFunction::zero(&family_space())).is_err());
    }

    #[test]
    fn operator_norm_with_witness() {
        let s = two_atoms();
        let u = SimpleFunction::on_atoms(&s, vec![2.0, 5.0]).unwrap();
        let n = operator_norm(&u, (&s).into()).unwrap();
        assert_eq!(n.norm, 5.0);
        assert_eq!(n.witness, PieceSet::atoms_only([1].into_iter().collect()));
        assert!(!n.seminorm_only);

        let probes = default_probes(&s, 100, 3);
        let ratios = probe_ratios(&u, &sq(), (&s).into(), &probes).unwrap();
        let max = ratios.iter().copied().fold(0.0, f64::max);
        assert!((5.0 - 1e-4..=5.0 + 1e-8).contains(&max), "{max}");

        let c = SimpleFunction::constant(&s, -3.0);
        assert_eq!(operator_norm(&c, (&s).into()).unwrap().norm, 3.0);
    }

    #[test]
    fn weighted_norm_ignores_omega_null_pieces() {
        let s = two_atoms();
        let tau = Transformation {
            atoms: vec![0, 0],
            cells: CellMap::Identity,
            family: FamilyMap::Identity,
        };
        let w = WeightedStructure::derive(&s, tau).unwrap();
        let u = SimpleFunction::on_atoms(&s, vec![2.0, 5.0]).unwrap();
        let n = operator_norm(&u, (&w).into()).unwrap();
        assert_eq!(n.norm, 2.0);
        assert!(n.seminorm_only);
        assert_eq!(n.witness_mass, 1.0);
    }

    #[test]
    fn n_set_examples() {
        let s = two_atoms();
        let u = SimpleFunction::on_atoms(&s, vec![2.0, 5.0]).unwrap();
        assert_eq!(n_set(&u, 3.0).unwrap(), PieceSet::atoms_only([1].into_iter().collect()));
        assert!(n_set(&u, 6.0).unwrap().is_empty());
        assert!(n_set(&u, 0.0).is_err());
        let fs = family_space();
        let h = on_family(&fs, ValueRule::harmonic(1.0));
        assert_eq!(n_set(&h, 0.1).unwrap().family(), &IndexSet::range(1, 11));
    }

    #[test]
    fn compactness_examples() {
        let seg = MeasureSpace::from_json(r#"{"segment":{"length":1,"depth":3}}"#).unwrap();
        let zero = classify_compact(&SimpleFunction::zero(&seg), (&seg).into()).unwrap();
        assert_eq!((zero.verdict, zero.justification), (Compactness::Compact, Justification::ZeroOperator));
        let one = classify_compact(&SimpleFunction::constant(&seg, 1.0), (&seg).into()).unwrap();
        assert_eq!(
            (one.verdict, one.justification),
            (Compactness::NotCompact, Justification::NonatomicMassInNSet)
        );
        assert_eq!(one.dim_report[0].dim, Dim::Infinite);

        let fs = family_space();
        let h = classify_compact(&on_family(&fs, ValueRule::harmonic(1.0)), (&fs).into()).unwrap();
        assert_eq!((h.verdict, h.justification), (Compactness::Compact, Justification::NSetsFiniteAtoms));
        assert_eq!(h.dim_report[0].dim, Dim::Finite(1));
        assert_eq!(h.dim_report[3].dim, Dim::Finite(8));
        assert!(h.dim_report.iter().all(|e| e.dim.is_finite()));

        let c = classify_compact(&on_family(&fs, ValueRule::constant(0.7)), (&fs).into()).unwrap();
        assert_eq!(
            (c.verdict, c.justification),
            (Compactness::NotCompact, Justification::InfinitelyManyFamilyAtoms)
        );
        assert_eq!(c.dim_report[0].dim, Dim::Finite(0));
        assert_eq!(c.dim_report[1].dim, Dim::Infinite);
    }

    #[test]
    fn complete_continuity_is_conditional_without_hypotheses() {
        let s = two_atoms();
        let r = classify_compact(&SimpleFunction::constant(&s, 1.0), (&s).into()).unwrap();
        assert!(!complete_continuity(&r, &sq()).conditional);
        assert!(complete_continuity(&r, &OrliczFunction::exp_minus()).conditional);
    }

    #[test]
    fn invertibility_examples() {
        let s = two_atoms();
        let u = SimpleFunction::on_atoms(&s, vec![2.0, 5.0]).unwrap();
        let inv = check_invertible(&u, &s).unwrap();
        assert!(inv.invertible && inv.finite_measure);
        let r = inv.inverse.unwrap();
        assert_eq!(r.atoms(), &[0.5, 0.2]);
        let f = SimpleFunction::on_atoms(&s, vec![0.25, -4.0]).unwrap();
        assert_eq!(apply(&r, &apply(&u, &f).unwrap()).unwrap(), f);

        let z = SimpleFunction::on_atoms(&s, vec![0.0, 5.0]).unwrap();
        assert!(!check_invertible(&z, &s).unwrap().invertible);

        let fs = family_space();
        let h = check_invertible(&on_family(&fs, ValueRule::harmonic(1.0)), &fs).unwrap();
        assert!(!h.invertible);
        assert_eq!(h.ess_inf_abs, 0.0);
        assert!(!h.finite_measure);
    }

    #[test]
    fn truncation_examples() {
        let s = two_atoms();
        let u = SimpleFunction::on_atoms(&s, vec![0.3, 2.0]).unwrap();
        assert_eq!(truncation(&u, 2).unwrap().atoms(), &[0.0, 2.0]);
        assert_eq!(truncation(&u, 4).unwrap(), u);
        let probes = default_probes(&s, 20, 5);
        let gap = truncation_gap(&u, 2, &sq(), (&s).into(), &probes).unwrap();
        assert!((0.3 - 1e-9..=0.5 + 1e-9).contains(&gap), "{gap}");
        assert_eq!(truncation_gap(&u, 4, &sq(), (&s).into(), &probes).unwrap(), 0.0);
        assert!(truncation(&u, 0).is_err());
    }

    #[test]
    fn commuting_symbols() {
        let mut rng = sample::rng(11);
        let s = sample::space(
            &mut rng,
            sample::SpaceShape {
                atoms: 3,
                segment: true,
                family: true,
            },
        );
        let probes: Vec<_> = (0..10).map(|_| sample::dyadic_function(&mut rng, &s)).collect();
        for _ in 0..10 {
            let u = sample::dyadic_function(&mut rng, &s);
            let v = sample::dyadic_function(&mut rng, &s);
            assert!(commute_check(&s, &u, &v, &probes).unwrap());
        }
    }

    #[test]
    fn report_round_trips() {
        let s = two_atoms();
        let u = SimpleFunction::on_atoms(&s, vec![2.0, 5.0]).unwrap();
        let r = analyze(&u, &sq(), (&s).into(), &default_probes(&s, 10, 1)).unwrap();
        assert_eq!(r.operator_norm, 5.0);
        assert!((r.witness_ratio - 5.0).abs() < 1e-8);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<OperatorReport>(&text).unwrap(), r);
    }

    proptest! {
        #[test]
        fn norm_scales_exactly(seed in 0u64..1000, c in -8i32..8) {
            let mut rng = sample::rng(seed);
            let s = sample::space(&mut rng, sample::SpaceShape { atoms: 3, segment: true, family: true });
            let u = sample::function(&mut rng, &s);
            let c = c as f64 / 4.0;
            let a = operator_norm(&u.scale(c), (&s).into()).unwrap().norm;
            let b = operator_norm(&u, (&s).into()).unwrap().norm;
            prop_assert_eq!(a, c.abs() * b);
        }

        #[test]
        fn n_sets_shrink(seed in 0u64..1000, e1 in 0.01f64..2.0, e2 in 0.01f64..2.0) {
            let mut rng = sample::rng(seed);
            let s = sample::space(&mut rng, sample::SpaceShape { atoms: 4, segment: true, family: true });
            let u = sample::function(&mut rng, &s);
            let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(n_set(&u, hi).unwrap().is_subset(&n_set(&u, lo).unwrap()));
        }

        #[test]
        fn zero_symbol_is_compact_with_zero_norm(seed in 0u64..200) {
            let mut rng = sample::rng(seed);
            let s = sample::space(&mut rng, sample::SpaceShape { atoms: 2, segment: true, family: true });
            let z = SimpleFunction::zero(&s);
            prop_assert_eq!(operator_norm(&z, (&s).into()).unwrap().norm, 0.0);
            prop_assert_eq!(classify_compact(&z, (&s).into()).unwrap().justification, Justification::ZeroOperator);
        }
    }
}

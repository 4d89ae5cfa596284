use serde::{Deserialize, Serialize};

use super::{MeasureSpace, Piece, PieceSet};
use crate::error::{Error, Result};
use crate::intervals::IndexSet;

/// Values on the countable family: `c * i^(-decay) * ratio^(i-1)` for
/// `i >= 1`, with `decay >= 0` and `|ratio| <= 1`, so that `|value|` is
/// nonincreasing in `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RuleDescriptor", into = "RuleDescriptor")]
pub struct ValueRule {
    c: f64,
    decay: f64,
    ratio: f64,
}

/// JSON form of a [`ValueRule`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleDescriptor {
    Constant { c: f64 },
    Harmonic { c: f64 },
    Geometric { c: f64, rho: f64 },
    General { c: f64, decay: f64, ratio: f64 },
}

impl TryFrom<RuleDescriptor> for ValueRule {
    type Error = Error;

    fn try_from(d: RuleDescriptor) -> Result<Self> {
        match d {
            RuleDescriptor::Constant { c } => ValueRule::new(c, 0.0, 1.0),
            RuleDescriptor::Harmonic { c } => ValueRule::new(c, 1.0, 1.0),
            RuleDescriptor::Geometric { c, rho } => ValueRule::new(c, 0.0, rho),
            RuleDescriptor::General { c, decay, ratio } => ValueRule::new(c, decay, ratio),
        }
    }
}

impl From<ValueRule> for RuleDescriptor {
    fn from(r: ValueRule) -> Self {
        match (r.decay, r.ratio) {
            (d, q) if d == 0.0 && q == 1.0 => RuleDescriptor::Constant { c: r.c },
            (d, q) if d == 1.0 && q == 1.0 => RuleDescriptor::Harmonic { c: r.c },
            (0.0, q) => RuleDescriptor::Geometric { c: r.c, rho: q },
            _ => RuleDescriptor::General {
                c: r.c,
                decay: r.decay,
                ratio: r.ratio,
            },
        }
    }
}

impl ValueRule {
    pub fn new(c: f64, decay: f64, ratio: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::config("family.c", format!("coefficient must be finite, got {c}")));
        }
        if !(decay >= 0.0 && decay.is_finite()) {
            return Err(Error::config("family.decay", format!("decay must be >= 0, got {decay}")));
        }
        if !(ratio.abs() <= 1.0) {
            return Err(Error::config("family.rho", format!("|ratio| must be <= 1, got {ratio}")));
        }
        Ok(ValueRule { c, decay, ratio })
    }

    pub fn constant(c: f64) -> Self {
        ValueRule::new(c, 0.0, 1.0).expect("finite constant")
    }

    pub fn harmonic(c: f64) -> Self {
        ValueRule::new(c, 1.0, 1.0).expect("finite coefficient")
    }

    pub fn geometric(c: f64, rho: f64) -> Result<Self> {
        ValueRule::new(c, 0.0, rho)
    }

    pub fn zero() -> Self {
        ValueRule::constant(0.0)
    }

    pub fn coefficient(&self) -> f64 {
        self.c
    }

    pub fn value(&self, i: u64) -> f64 {
        debug_assert!(i >= 1);
        let mut v = self.c;
        if self.decay != 0.0 {
            v /= (i as f64).powf(self.decay);
        }
        if self.ratio != 1.0 {
            v *= self.ratio.powf((i - 1) as f64);
        }
        v
    }

    /// `|value(i)|` does not tend to zero.
    pub fn is_nondecaying(&self) -> bool {
        self.c != 0.0 && self.decay == 0.0 && self.ratio.abs() == 1.0
    }

    /// `lim_{i→∞} |value(i)|`.
    pub fn limit_abs(&self) -> f64 {
        if self.is_nondecaying() {
            self.c.abs()
        } else {
            0.0
        }
    }

    fn product(&self, other: &ValueRule) -> ValueRule {
        ValueRule {
            c: self.c * other.c,
            decay: self.decay + other.decay,
            ratio: self.ratio * other.ratio,
        }
    }

    fn abs(&self) -> ValueRule {
        ValueRule {
            c: self.c.abs(),
            decay: self.decay,
            ratio: self.ratio.abs(),
        }
    }

    fn scale(&self, k: f64) -> ValueRule {
        ValueRule { c: self.c * k, ..*self }
    }

    /// Indices `i >= 1` with `|value(i)| >= threshold` (or `>` when
    /// `strict`). Always a prefix because `|value|` is nonincreasing.
    pub fn level_prefix(&self, threshold: f64, strict: bool) -> IndexSet {
        let passes = |i: u64| {
            let v = self.value(i).abs();
            if strict {
                v > threshold
            } else {
                v >= threshold
            }
        };
        if !passes(1) {
            return IndexSet::empty();
        }
        if self.is_nondecaying() {
            return IndexSet::from(1);
        }
        let mut hi: u64 = 2;
        while passes(hi) {
            hi = hi.saturating_mul(2);
            if hi == u64::MAX {
                return IndexSet::from(1);
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if passes(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        IndexSet::range(1, lo + 1)
    }
}

/// Family values: a rule on a support set of indices, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyPart {
    pub rule: ValueRule,
    pub support: IndexSet,
}

impl FamilyPart {
    pub fn new(rule: ValueRule, support: IndexSet) -> Self {
        if rule.c == 0.0 || support.is_empty() {
            FamilyPart {
                rule: ValueRule::zero(),
                support: IndexSet::empty(),
            }
        } else {
            FamilyPart { rule, support }
        }
    }

    pub fn zero() -> Self {
        FamilyPart::new(ValueRule::zero(), IndexSet::empty())
    }

    pub fn value(&self, i: u64) -> f64 {
        if self.support.contains(i) {
            self.rule.value(i)
        } else {
            0.0
        }
    }

    fn sup_abs(&self) -> f64 {
        self.support.min().map_or(0.0, |i| self.rule.value(i).abs())
    }

    fn level_set(&self, threshold: f64, strict: bool) -> IndexSet {
        if self.support.is_empty() {
            return if (strict && threshold < 0.0) || (!strict && threshold <= 0.0) {
                IndexSet::from(1)
            } else {
                IndexSet::empty()
            };
        }
        let mut set = self.rule.level_prefix(threshold, strict).intersection(&self.support);
        let zero_passes = if strict { 0.0 > threshold } else { 0.0 >= threshold };
        if zero_passes {
            set = set.union(&self.support.complement_in(&IndexSet::from(1)));
        }
        set
    }
}

type Run = (u64, u64, f64);

/// Piecewise-constant function on the model: one value per explicit atom,
/// run-length values on the dyadic cells, and a value rule on the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleFunction {
    atoms: Vec<f64>,
    depth: u32,
    runs: Vec<Run>,
    family: Option<FamilyPart>,
}

fn normalize_runs(runs: Vec<Run>) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::with_capacity(runs.len());
    for (a, b, v) in runs {
        if a >= b {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.1 == a && last.2 == v => last.1 = b,
            _ => out.push((a, b, v)),
        }
    }
    out
}

fn combine_runs<F: Fn(f64, f64) -> f64>(x: &[Run], y: &[Run], f: F) -> Vec<Run> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let lo = x[i].0.max(y[j].0);
        let hi = x[i].1.min(y[j].1);
        if lo < hi {
            out.push((lo, hi, f(x[i].2, y[j].2)));
        }
        if x[i].1 < y[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    normalize_runs(out)
}

impl SimpleFunction {
    /// Builds a function from explicit parts. `cells` lists `(start, end,
    /// value)` runs at `depth`; uncovered cells are zero.
    pub fn from_parts(
        space: &MeasureSpace,
        atoms: Vec<f64>,
        depth: u32,
        cells: Vec<Run>,
        family: Option<FamilyPart>,
    ) -> Result<Self> {
        if atoms.len() != space.atoms().len() {
            return Err(Error::Domain(format!(
                "expected {} atom values, got {}",
                space.atoms().len(),
                atoms.len()
            )));
        }
        if let Some(v) = atoms.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("atom value {v} is not finite")));
        }
        let runs = match space.segment() {
            None => {
                if !cells.is_empty() {
                    return Err(Error::Domain("cell values given but the space has no segment".into()));
                }
                Vec::new()
            }
            Some(_) => {
                if depth > super::MAX_DEPTH {
                    return Err(Error::DepthExhausted {
                        required: depth,
                        limit: super::MAX_DEPTH,
                    });
                }
                let n = 1u64 << depth;
                let mut sorted = cells;
                sorted.sort_by_key(|r| r.0);
                let mut full = Vec::new();
                let mut cursor = 0;
                for (a, b, v) in sorted {
                    if a < cursor || b > n || a >= b {
                        return Err(Error::Domain(format!("cell run [{a}, {b}) is invalid at depth {depth}")));
                    }
                    if !v.is_finite() {
                        return Err(Error::Domain(format!("cell value {v} is not finite")));
                    }
                    if a > cursor {
                        full.push((cursor, a, 0.0));
                    }
                    full.push((a, b, v));
                    cursor = b;
                }
                if cursor < n {
                    full.push((cursor, n, 0.0));
                }
                normalize_runs(full)
            }
        };
        let family = match (space.family(), family) {
            (None, None) => None,
            (None, Some(f)) if f.support.is_empty() => None,
            (None, Some(_)) => return Err(Error::Domain("family values given but the space has no family".into())),
            (Some(_), f) => {
                let f = f.unwrap_or_else(FamilyPart::zero);
                if !f.support.is_subset(&IndexSet::from(1)) {
                    return Err(Error::Domain("family support must use indices >= 1".into()));
                }
                Some(FamilyPart::new(f.rule, f.support))
            }
        };
        Ok(SimpleFunction {
            atoms,
            depth: if space.segment().is_some() { depth } else { 0 },
            runs,
            family,
        })
    }

    pub fn constant(space: &MeasureSpace, c: f64) -> Self {
        let n = space.segment().map(|_| 1u64 << space.depth());
        SimpleFunction::from_parts(
            space,
            vec![c; space.atoms().len()],
            space.depth(),
            n.map(|n| vec![(0, n, c)]).unwrap_or_default(),
            space.family().map(|_| FamilyPart::new(ValueRule::constant(c), IndexSet::from(1))),
        )
        .expect("constant function matches its space")
    }

    pub fn zero(space: &MeasureSpace) -> Self {
        SimpleFunction::constant(space, 0.0)
    }

    /// Characteristic function of `set`.
    pub fn indicator(space: &MeasureSpace, set: &PieceSet) -> Result<Self> {
        space.check_set(set)?;
        let atoms = (0..space.atoms().len())
            .map(|i| if set.atoms().contains(&i) { 1.0 } else { 0.0 })
            .collect();
        let depth = set.depth().max(space.depth());
        let set = set.refine_to(depth);
        let runs = set.cells().ranges().map(|r| (r.start, r.end, 1.0)).collect();
        let family = space
            .family()
            .map(|_| FamilyPart::new(ValueRule::constant(1.0), set.family().clone()));
        SimpleFunction::from_parts(space, atoms, depth, runs, family)
    }

    /// Values on the explicit atoms only; cells and family are zero.
    pub fn on_atoms(space: &MeasureSpace, values: Vec<f64>) -> Result<Self> {
        SimpleFunction::from_parts(space, values, space.depth(), Vec::new(), None)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Cell runs `(start, end, value)` covering the whole segment.
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn family(&self) -> Option<&FamilyPart> {
        self.family.as_ref()
    }

    pub fn has_segment(&self) -> bool {
        !self.runs.is_empty()
    }

    pub fn value_at(&self, piece: Piece) -> f64 {
        match piece {
            Piece::Atom(i) => self.atoms[i],
            Piece::Cell { index, depth } => {
                let own = if depth >= self.depth {
                    index >> (depth - self.depth)
                } else {
                    index << (self.depth - depth)
                };
                let k = self.runs.partition_point(|r| r.1 <= own);
                self.runs.get(k).map_or(0.0, |r| r.2)
            }
            Piece::Family(i) => self.family.as_ref().map_or(0.0, |f| f.value(i)),
        }
    }

    pub fn refine_to(&self, depth: u32) -> SimpleFunction {
        if depth <= self.depth || self.runs.is_empty() {
            return self.clone();
        }
        let k = depth - self.depth;
        SimpleFunction {
            atoms: self.atoms.clone(),
            depth,
            runs: self.runs.iter().map(|&(a, b, v)| (a << k, b << k, v)).collect(),
            family: self.family.clone(),
        }
    }

    fn same_shape(&self, other: &SimpleFunction) -> Result<()> {
        if self.atoms.len() != other.atoms.len()
            || self.runs.is_empty() != other.runs.is_empty()
            || self.family.is_some() != other.family.is_some()
        {
            return Err(Error::Domain("functions live on different spaces".into()));
        }
        Ok(())
    }

    /// Checks that this function lives on `space`.
    pub fn check_space(&self, space: &MeasureSpace) -> Result<()> {
        if self.atoms.len() != space.atoms().len()
            || self.runs.is_empty() == space.segment().is_some()
            || self.family.is_some() != space.family().is_some()
        {
            return Err(Error::Domain("function does not live on this space".into()));
        }
        Ok(())
    }

    fn map_values<F: Fn(f64) -> f64>(&self, f: F, rule: impl Fn(&ValueRule) -> ValueRule) -> SimpleFunction {
        SimpleFunction {
            atoms: self.atoms.iter().map(|&v| f(v)).collect(),
            depth: self.depth,
            runs: normalize_runs(self.runs.iter().map(|&(a, b, v)| (a, b, f(v))).collect()),
            family: self
                .family
                .as_ref()
                .map(|p| FamilyPart::new(rule(&p.rule), p.support.clone())),
        }
    }

    pub fn scale(&self, k: f64) -> SimpleFunction {
        self.map_values(|v| k * v, |r| r.scale(k))
    }

    pub fn abs(&self) -> SimpleFunction {
        self.map_values(f64::abs, ValueRule::abs)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.same_shape(other)?;
        let d = self.depth.max(other.depth);
        let (a, b) = (self.refine_to(d), other.refine_to(d));
        let family = match (&a.family, &b.family) {
            (Some(x), Some(y)) => Some(FamilyPart::new(
                x.rule.product(&y.rule),
                x.support.intersection(&y.support),
            )),
            _ => None,
        };
        Ok(SimpleFunction {
            atoms: a.atoms.iter().zip(&b.atoms).map(|(x, y)| x * y).collect(),
            depth: d,
            runs: combine_runs(&a.runs, &b.runs, |x, y| x * y),
            family,
        })
    }

    /// Pointwise sum. Fails with [`Error::Unrepresentable`] when both family
    /// parts are nonzero with different decay profiles or supports.
    pub fn add(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.same_shape(other)?;
        let d = self.depth.max(other.depth);
        let (a, b) = (self.refine_to(d), other.refine_to(d));
        let family = match (&a.family, &b.family) {
            (Some(x), Some(y)) => Some(if y.support.is_empty() {
                x.clone()
            } else if x.support.is_empty() {
                y.clone()
            } else if x.rule.decay == y.rule.decay && x.rule.ratio == y.rule.ratio && x.support == y.support {
                FamilyPart::new(ValueRule { c: x.rule.c + y.rule.c, ..x.rule }, x.support.clone())
            } else {
                return Err(Error::Unrepresentable(
                    "sum of family rules with different profiles".into(),
                ));
            }),
            _ => None,
        };
        Ok(SimpleFunction {
            atoms: a.atoms.iter().zip(&b.atoms).map(|(x, y)| x + y).collect(),
            depth: d,
            runs: combine_runs(&a.runs, &b.runs, |x, y| x + y),
            family,
        })
    }

    pub fn sub(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.add(&other.scale(-1.0))
    }

    /// `self · χ_set`.
    pub fn restrict(&self, set: &PieceSet) -> SimpleFunction {
        let d = self.depth.max(set.depth());
        let f = self.refine_to(d);
        let set = set.refine_to(d);
        let mask: Vec<Run> = {
            let mut v = Vec::new();
            let mut cursor = 0;
            for r in set.cells().ranges() {
                v.push((cursor, r.start, 0.0));
                v.push((r.start, r.end, 1.0));
                cursor = r.end;
            }
            if let Some(last) = f.runs.last() {
                v.push((cursor, last.1, 0.0));
            }
            normalize_runs(v)
        };
        SimpleFunction {
            atoms: f
                .atoms
                .iter()
                .enumerate()
                .map(|(i, &v)| if set.atoms().contains(&i) { v } else { 0.0 })
                .collect(),
            depth: d,
            runs: if f.runs.is_empty() {
                Vec::new()
            } else {
                combine_runs(&f.runs, &mask, |x, m| x * m)
            },
            family: f
                .family
                .as_ref()
                .map(|p| FamilyPart::new(p.rule, p.support.intersection(set.family()))),
        }
    }

    /// `{ |f| >= threshold }`, or `{ |f| > threshold }` when `strict`.
    pub fn level_set(&self, threshold: f64, strict: bool) -> PieceSet {
        let passes = |v: f64| if strict { v.abs() > threshold } else { v.abs() >= threshold };
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(_, &v)| passes(v))
            .map(|(i, _)| i)
            .collect();
        let cells = IndexSet::from_ranges(self.runs.iter().filter(|r| passes(r.2)).map(|r| r.0..r.1));
        let family = self
            .family
            .as_ref()
            .map_or_else(IndexSet::empty, |p| p.level_set(threshold, strict));
        PieceSet::new(atoms, cells, self.depth, family)
    }

    /// Pieces where the function is nonzero.
    pub fn support(&self) -> PieceSet {
        self.level_set(0.0, true)
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    /// `max |f|` over pieces; all pieces have positive mass.
    pub fn ess_sup(&self) -> f64 {
        let explicit = self
            .atoms
            .iter()
            .chain(self.runs.iter().map(|r| &r.2))
            .fold(0.0f64, |m, v| m.max(v.abs()));
        explicit.max(self.family.as_ref().map_or(0.0, FamilyPart::sup_abs))
    }

    /// `inf |f|` over pieces, using the rule limit on an infinite family.
    pub fn ess_inf_abs(&self) -> f64 {
        let explicit = self
            .atoms
            .iter()
            .chain(self.runs.iter().map(|r| &r.2))
            .fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let family = match &self.family {
            None => f64::INFINITY,
            Some(p) if p.support == IndexSet::from(1) => p.rule.limit_abs(),
            Some(_) => 0.0,
        };
        explicit.min(family)
    }

    /// Pointwise reciprocal, defined when `ess_inf_abs > 0`.
    pub fn reciprocal(&self) -> Result<SimpleFunction> {
        if !(self.ess_inf_abs() > 0.0) {
            return Err(Error::Domain("function vanishes or decays to zero".into()));
        }
        Ok(SimpleFunction {
            atoms: self.atoms.iter().map(|v| 1.0 / v).collect(),
            depth: self.depth,
            runs: self.runs.iter().map(|&(a, b, v)| (a, b, 1.0 / v)).collect(),
            family: self.family.as_ref().map(|p| {
                // invertible rules are nondecaying: ratio is ±1
                FamilyPart::new(ValueRule { c: 1.0 / p.rule.c, decay: 0.0, ratio: p.rule.ratio }, p.support.clone())
            }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> MeasureSpace {
        MeasureSpace::from_json(r#"{"atoms":[{"id":"a1","mass":0.5},{"id":"a2","mass":0.5}]}"#).unwrap()
    }

    fn with_family(rule: &str) -> MeasureSpace {
        MeasureSpace::from_json(&format!(
            r#"{{"atoms":[{{"id":"a","mass":1}}],"segment":{{"length":1,"depth":2}},"family":{{"mass_rule":{rule}}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn indicator_of_empty_is_zero() {
        let s = with_family(r#"{"kind":"constant","m":1}"#);
        let f = SimpleFunction::indicator(&s, &s.empty_set()).unwrap();
        assert!(f.is_zero());
        assert_eq!(f, SimpleFunction::zero(&s));
    }

    #[test]
    fn ess_sup_examples() {
        let u = SimpleFunction::on_atoms(&two_atoms(), vec![2.0, 5.0]).unwrap();
        assert_eq!(u.ess_sup(), 5.0);
        assert_eq!(u.ess_inf_abs(), 2.0);
        let s = with_family(r#"{"kind":"geometric","m":0.5,"r":0.5}"#);
        let h = SimpleFunction::from_parts(
            &s,
            vec![0.0],
            2,
            vec![],
            Some(FamilyPart::new(ValueRule::harmonic(3.0), IndexSet::from(1))),
        )
        .unwrap();
        assert_eq!(h.ess_sup(), 3.0);
        assert_eq!(h.ess_inf_abs(), 0.0);
    }

    #[test]
    fn harmonic_level_prefix() {
        let r = ValueRule::harmonic(1.0);
        assert_eq!(r.level_prefix(0.1, false), IndexSet::range(1, 11));
        assert_eq!(r.level_prefix(0.1, true), IndexSet::range(1, 10));
        assert_eq!(ValueRule::constant(2.0).level_prefix(1.0, false), IndexSet::from(1));
        assert!(ValueRule::constant(0.5).level_prefix(1.0, false).is_empty());
        let g = ValueRule::geometric(1.0, 0.5).unwrap();
        assert_eq!(g.level_prefix(0.25, false), IndexSet::range(1, 4));
        let tiny = ValueRule::harmonic(3.0).level_prefix(2f64.powi(-20), false);
        assert_eq!(tiny, IndexSet::range(1, 3 * (1 << 20) + 1));
    }

    #[test]
    fn mul_refines_and_intersects() {
        let s = with_family(r#"{"kind":"constant","m":1}"#);
        let u = SimpleFunction::from_parts(
            &s,
            vec![2.0],
            1,
            vec![(0, 1, 3.0), (1, 2, 4.0)],
            Some(FamilyPart::new(ValueRule::harmonic(2.0), IndexSet::from(1))),
        )
        .unwrap();
        let f = SimpleFunction::from_parts(
            &s,
            vec![0.5],
            2,
            vec![(1, 3, 1.0)],
            Some(FamilyPart::new(ValueRule::geometric(1.0, 0.5).unwrap(), IndexSet::range(1, 5))),
        )
        .unwrap();
        let g = u.mul(&f).unwrap();
        assert_eq!(g.atoms(), &[1.0]);
        assert_eq!(g.depth(), 2);
        assert_eq!(g.runs(), &[(0, 1, 0.0), (1, 2, 3.0), (2, 3, 4.0), (3, 4, 0.0)]);
        assert_eq!(g.value_at(Piece::Family(2)), 2.0 / 2.0 * 0.5);
        assert_eq!(g.value_at(Piece::Family(5)), 0.0);
        assert_eq!(g, f.mul(&u).unwrap());
    }

    #[test]
    fn add_rejects_unrepresentable_family_sums() {
        let s = with_family(r#"{"kind":"constant","m":1}"#);
        let h = SimpleFunction::from_parts(&s, vec![0.0], 2, vec![], Some(FamilyPart::new(ValueRule::harmonic(1.0), IndexSet::from(1)))).unwrap();
        let c = SimpleFunction::constant(&s, 1.0);
        assert!(matches!(h.add(&c), Err(Error::Unrepresentable(_))));
        let sum = h.add(&h).unwrap();
        assert_eq!(sum.value_at(Piece::Family(4)), 0.5);
        assert!(h.sub(&h).unwrap().is_zero());
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let u = SimpleFunction::constant(&two_atoms(), 1.0);
        let v = SimpleFunction::constant(&with_family(r#"{"kind":"constant","m":1}"#), 1.0);
        assert!(matches!(u.mul(&v), Err(Error::Domain(_))));
    }

    #[test]
    fn level_sets_and_restrict() {
        let s = with_family(r#"{"kind":"constant","m":1}"#);
        let u = SimpleFunction::from_parts(
            &s,
            vec![0.3],
            2,
            vec![(0, 2, 2.0)],
            Some(FamilyPart::new(ValueRule::harmonic(1.0), IndexSet::from(1))),
        )
        .unwrap();
        let n = u.level_set(0.5, false);
        assert!(n.atoms().is_empty());
        assert_eq!(n.cells(), &IndexSet::range(0, 2));
        assert_eq!(n.family(), &IndexSet::range(1, 3));
        let low = u.level_set(0.5, true).complement(&s);
        let r = u.restrict(&low);
        assert_eq!(r.atoms(), &[0.3]);
        assert_eq!(r.value_at(Piece::Cell { index: 0, depth: 2 }), 0.0);
        assert_eq!(r.value_at(Piece::Family(1)), 0.0);
        assert_eq!(r.value_at(Piece::Family(2)), 0.5);
        assert_eq!(r.value_at(Piece::Family(3)), 1.0 / 3.0);
        assert_eq!(r.ess_sup(), 0.5);
    }

    #[test]
    fn reciprocal_cancels() {
        let u = SimpleFunction::on_atoms(&two_atoms(), vec![2.0, 5.0]).unwrap();
        let inv = u.reciprocal().unwrap();
        assert_eq!(inv.atoms(), &[0.5, 0.2]);
        let z = SimpleFunction::on_atoms(&two_atoms(), vec![0.0, 5.0]).unwrap();
        assert!(z.reciprocal().is_err());
    }

    #[test]
    fn rule_descriptor_round_trip() {
        let r: ValueRule = serde_json::from_str(r#"{"kind":"harmonic","c":3.0}"#).unwrap();
        assert_eq!(r, ValueRule::harmonic(3.0));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"kind":"harmonic","c":3.0}"#);
        assert!(serde_json::from_str::<ValueRule>(r#"{"kind":"geometric","c":1,"rho":2}"#).is_err());
        assert!(serde_json::from_str::<ValueRule>(r#"{"kind":"oscillating","c":1}"#).is_err());
    }
}

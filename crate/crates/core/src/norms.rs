//! Modulars and norms on (weighted) Orlicz spaces of the piece model.
//!
//! A function is flattened into `(|value|, weight mass)` pairs once, after
//! which the modular `k ↦ Σ φ(k·|v|)·w` is cheap to evaluate inside the
//! Luxemburg bisection and the Amemiya minimization. Family atoms past the
//! truncation contribute an upper tail bound instead of exact terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::IndexSet;
use crate::measure::{MeasureSpace, Piece, PieceSet, SimpleFunction, WeightedStructure};
use crate::orlicz::OrliczFunction;
use crate::search::{bisect_predicate, golden_min, log_grid};

/// Default relative tolerance of the Luxemburg bisection.
pub const LUXEMBURG_TOL: f64 = 1e-10;
/// Default relative tolerance on the Amemiya minimizer.
pub const AMEMIYA_TOL: f64 = 1e-9;

/// The measure a modular integrates against: `μ`, or `ω dμ` for a
/// weighted structure.
#[derive(Debug, Clone, Copy)]
pub enum Weight<'a> {
    Plain(&'a MeasureSpace),
    Weighted(&'a WeightedStructure),
}

impl<'a> Weight<'a> {
    pub fn space(&self) -> &'a MeasureSpace {
        match self {
            Weight::Plain(s) => s,
            Weight::Weighted(w) => w.space(),
        }
    }

    /// `∫_{piece} ω dμ`.
    pub fn piece_mass(&self, piece: Piece) -> f64 {
        match self {
            Weight::Plain(s) => s.piece_mass(piece),
            Weight::Weighted(w) => w.pushforward_mass(piece),
        }
    }

    /// `∫_A ω dμ`.
    pub fn set_mass(&self, set: &PieceSet) -> Result<f64> {
        match self {
            Weight::Plain(s) => s.measure(set),
            Weight::Weighted(w) => w.weighted_measure(set),
        }
    }

    fn truncation(&self) -> u64 {
        self.space().family().map_or(0, |f| f.truncation)
    }
}

impl<'a> From<&'a MeasureSpace> for Weight<'a> {
    fn from(s: &'a MeasureSpace) -> Self {
        Weight::Plain(s)
    }
}

impl<'a> From<&'a WeightedStructure> for Weight<'a> {
    fn from(w: &'a WeightedStructure) -> Self {
        Weight::Weighted(w)
    }
}

/// `f` flattened into integrable terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Terms {
    /// `(|value|, weight mass)` with both entries positive.
    pub items: Vec<(f64, f64)>,
    /// Family atoms past the truncation: largest `|value|` there and the
    /// weight mass of the tail support.
    pub tail: Option<(f64, f64)>,
}

impl Terms {
    pub fn collect(f: &SimpleFunction, weight: Weight<'_>) -> Result<Terms> {
        let space = weight.space();
        f.check_space(space)?;
        let f = match weight {
            Weight::Weighted(w) => w.align(f),
            Weight::Plain(_) => f.clone(),
        };
        let mut items = Vec::new();
        let mut push = |v: f64, m: f64| {
            if v != 0.0 && m > 0.0 {
                items.push((v.abs(), m));
            }
        };
        for (i, &v) in f.atoms().iter().enumerate() {
            push(v, weight.piece_mass(Piece::Atom(i)));
        }
        let depth = f.depth();
        let uniform_cells = match weight {
            Weight::Plain(_) => true,
            Weight::Weighted(w) => w.cell_depth() == 0,
        };
        for &(a, b, v) in f.runs() {
            if v == 0.0 {
                continue;
            }
            if uniform_cells {
                push(v, (b - a) as f64 * space.cell_mass(depth));
            } else {
                for index in a..b {
                    push(v, weight.piece_mass(Piece::Cell { index, depth }));
                }
            }
        }
        let mut tail = None;
        if let Some(part) = f.family() {
            let n = weight.truncation();
            let head = part.support.intersection(&IndexSet::range(1, n + 1));
            for i in head.iter() {
                push(part.rule.value(i), weight.piece_mass(Piece::Family(i)));
            }
            let rest = part.support.difference(&IndexSet::range(1, n + 1));
            if let Some(first) = rest.min() {
                let mass = weight.set_mass(&PieceSet::family_only(rest.clone()))?;
                let sup = part.rule.value(first).abs();
                if mass > 0.0 && sup > 0.0 {
                    if mass.is_infinite() && part.rule.is_nondecaying() {
                        return Err(Error::NotInSpace(
                            "nondecaying values on a family tail of infinite measure".into(),
                        ));
                    }
                    tail = Some((sup, mass));
                }
            }
        }
        Ok(Terms { items, tail })
    }

    pub fn is_zero(&self) -> bool {
        self.items.is_empty() && self.tail.is_none()
    }

    pub fn sup(&self) -> f64 {
        self.items
            .iter()
            .map(|t| t.0)
            .chain(self.tail.map(|t| t.0))
            .fold(0.0, f64::max)
    }

    /// `Σ φ(scale·|v|)·w` over the explicit terms.
    pub fn modular(&self, phi: &OrliczFunction, scale: f64) -> f64 {
        self.items
            .iter()
            .map(|&(v, m)| phi.eval_unchecked(scale * v) * m)
            .sum()
    }

    /// Upper bound on the truncated tail at this scale.
    pub fn tail_upper(&self, phi: &OrliczFunction, scale: f64) -> f64 {
        self.tail
            .map_or(0.0, |(v, m)| phi.eval_unchecked(scale * v) * m)
    }
}

/// Modular value with its truncation tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modular {
    pub value: f64,
    pub tail_upper: f64,
    pub overflow: bool,
}

/// `I_φ(f) = ∫ φ(|f|) ω dμ`, with `ω ≡ 1` for a plain space.
pub fn modular(f: &SimpleFunction, phi: &OrliczFunction, weight: Weight<'_>) -> Result<Modular> {
    let terms = Terms::collect(f, weight)?;
    let value = terms.modular(phi, 1.0);
    Ok(Modular {
        value,
        tail_upper: terms.tail_upper(phi, 1.0),
        overflow: value.is_infinite(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Bisection,
    Minimization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub method: Method,
    /// Modular at the returned norm minus one, where that applies.
    pub residual: f64,
    pub iterations: usize,
}

impl NormResult {
    fn zero(method: Method) -> Self {
        NormResult {
            value: 0.0,
            method,
            residual: 0.0,
            iterations: 0,
        }
    }
}

/// `||f|| = inf { k > 0 : I_φ(f/k) <= 1 }` by bisection on `k`.
///
/// The returned value is the upper end of the final bracket, so
/// `I_φ(f/||f||) <= 1` holds for it, and is within `tol` relative of the
/// exact norm.
pub fn luxemburg_norm(
    f: &SimpleFunction,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    tol: f64,
) -> Result<NormResult> {
    let terms = Terms::collect(f, weight)?;
    luxemburg_from_terms(&terms, phi, tol)
}

pub fn luxemburg_from_terms(terms: &Terms, phi: &OrliczFunction, tol: f64) -> Result<NormResult> {
    if terms.items.is_empty() {
        return Ok(NormResult::zero(Method::Bisection));
    }
    let fits = |k: f64| terms.modular(phi, 1.0 / k) <= 1.0;
    // The bracket is always [2^(j-1), 2^j] and is halved a fixed number of
    // times, so |f| <= |g| pointwise gives ||f|| <= ||g|| exactly.
    let mut hi = 2f64.powi(terms.sup().log2().ceil() as i32);
    while !fits(hi) {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NotInSpace("modular exceeds 1 for every scaling".into()));
        }
    }
    while fits(hi * 0.5) {
        hi *= 0.5;
        if hi < 1e-300 {
            return Err(Error::Domain("norm underflows".into()));
        }
    }
    let halvings = (-tol.log2()).ceil().max(1.0) as usize + 1;
    let (k, iterations) = bisect_predicate(fits, hi * 0.5, hi, 0.0, 0.0, halvings);
    Ok(NormResult {
        value: k,
        method: Method::Bisection,
        residual: terms.modular(phi, 1.0 / k) - 1.0,
        iterations,
    })
}

/// `||f||⁰ = inf_{k>0} (1 + I_φ(k f)) / k` by golden-section search
/// around the best point of a log-spaced scan.
pub fn amemiya_norm(
    f: &SimpleFunction,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    tol: f64,
) -> Result<NormResult> {
    let terms = Terms::collect(f, weight)?;
    if terms.items.is_empty() {
        return Ok(NormResult::zero(Method::Minimization));
    }
    let lux = luxemburg_from_terms(&terms, phi, LUXEMBURG_TOL)?.value;
    let g = |k: f64| (1.0 + terms.modular(phi, k)) / k;
    let base = 1.0 / lux;
    let samples: Vec<(f64, f64)> = (-80..=80)
        .map(|j| {
            let k = base * 2f64.powf(j as f64 / 4.0);
            (k, g(k))
        })
        .collect();
    let best = samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("nonempty scan");
    if best == 0 || best + 1 == samples.len() {
        // infimum not attained inside the scan
        let (k, value) = samples[best];
        return Ok(NormResult {
            value,
            method: Method::Minimization,
            residual: terms.modular(phi, k) - 1.0,
            iterations: samples.len(),
        });
    }
    let (a, b) = (samples[best - 1].0, samples[best + 1].0);
    let r = golden_min(g, a, b, tol * samples[best].0, 500);
    let value = r.value.min(samples[best].1);
    Ok(NormResult {
        value,
        method: Method::Minimization,
        residual: terms.modular(phi, r.x) - 1.0,
        iterations: r.iterations + samples.len(),
    })
}

/// Amemiya norm together with the minimum of a dense 1024-point log scan
/// of `(1 + I_φ(k f))/k`, used to validate the golden-section result.
pub fn amemiya_norm_verified(
    f: &SimpleFunction,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    tol: f64,
) -> Result<(NormResult, f64)> {
    let result = amemiya_norm(f, phi, weight, tol)?;
    let terms = Terms::collect(f, weight)?;
    if terms.items.is_empty() {
        return Ok((result, 0.0));
    }
    let lux = luxemburg_from_terms(&terms, phi, LUXEMBURG_TOL)?.value;
    let scan = log_grid(1e-3 / lux, 1e3 / lux, 1024)
        .into_iter()
        .map(|k| (1.0 + terms.modular(phi, k)) / k)
        .fold(f64::INFINITY, f64::min);
    Ok((result, scan))
}

/// `||χ_A||_φ = 1 / φ⁻¹(1/μ(A))`.
pub fn indicator_norm(space: &MeasureSpace, set: &PieceSet, phi: &OrliczFunction) -> Result<NormResult> {
    closed_form_indicator(space.measure(set)?, phi)
}

/// `||χ_F||_{φ,ω} = 1 / φ⁻¹(1/μ(τ⁻¹F))`; zero when `μ(τ⁻¹F) = 0`.
pub fn weighted_indicator_norm(
    set: &PieceSet,
    phi: &OrliczFunction,
    w: &WeightedStructure,
) -> Result<NormResult> {
    closed_form_indicator(w.weighted_measure(set)?, phi)
}

fn closed_form_indicator(mass: f64, phi: &OrliczFunction) -> Result<NormResult> {
    if mass == 0.0 {
        return Ok(NormResult::zero(Method::ClosedForm));
    }
    if mass.is_infinite() {
        return Err(Error::NotInSpace("indicator of a set of infinite measure".into()));
    }
    let value = 1.0 / phi.right_inverse(1.0 / mass)?;
    let residual = phi.eval_unchecked(1.0 / value) * mass - 1.0;
    Ok(NormResult {
        value,
        method: Method::ClosedForm,
        residual,
        iterations: 0,
    })
}

/// Weighted modular of `f / ||f||_{φ,ω}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularAtNorm {
    pub value: f64,
    pub norm: f64,
    /// False when φ is not known to satisfy the doubling condition, in
    /// which case the value is only an observation.
    pub hypothesis_met: bool,
}

pub fn modular_at_norm(
    f: &SimpleFunction,
    phi: &OrliczFunction,
    weight: Weight<'_>,
    tol: f64,
) -> Result<ModularAtNorm> {
    let terms = Terms::collect(f, weight)?;
    if terms.items.is_empty() {
        return Err(Error::Domain("function vanishes on every piece of positive weight".into()));
    }
    let norm = luxemburg_from_terms(&terms, phi, tol)?.value;
    Ok(ModularAtNorm {
        value: terms.modular(phi, 1.0 / norm),
        norm,
        hypothesis_met: phi.delta2().holds(),
    })
}

//! Constructive checks behind the compactness and convergence arguments:
//! unit-norm spikes on shrinking sets, their pairing decay, the lower
//! bound `||M_u h_n|| >= ε₀`, and the norm-to-measure convergence bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::IndexSet;
use crate::measure::{MeasureSpace, PieceSet, SimpleFunction, WeightedStructure};
use crate::norms::{luxemburg_norm, Weight, LUXEMBURG_TOL};
use crate::operator::apply;
use crate::orlicz::OrliczFunction;

/// `h_n = φ⁻¹(1/μ(E_n)) χ_{E_n}` on a decreasing (or disjoint) family of
/// sets `E_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeSequence {
    pub sets: Vec<PieceSet>,
    pub masses: Vec<f64>,
    /// `φ⁻¹(1/μ(E_n))`
    pub heights: Vec<f64>,
    pub spikes: Vec<SimpleFunction>,
    /// `||h_n||_φ`, computed by bisection.
    pub norms: Vec<f64>,
    pub superlinear: bool,
}

fn spikes_on(space: &MeasureSpace, sets: Vec<PieceSet>, phi: &OrliczFunction) -> Result<SpikeSequence> {
    let mut seq = SpikeSequence {
        sets: Vec::with_capacity(sets.len()),
        masses: Vec::new(),
        heights: Vec::new(),
        spikes: Vec::new(),
        norms: Vec::new(),
        superlinear: phi.superlinear(),
    };
    for set in sets {
        let mass = space.measure(&set)?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("spike set has measure {mass}")));
        }
        let height = phi.right_inverse(1.0 / mass)?;
        let h = SimpleFunction::indicator(space, &set)?.scale(height);
        let norm = luxemburg_norm(&h, phi, space.into(), LUXEMBURG_TOL)?.value;
        seq.sets.push(set);
        seq.masses.push(mass);
        seq.heights.push(height);
        seq.spikes.push(h);
        seq.norms.push(norm);
    }
    Ok(seq)
}

/// Spikes on `E_1 = e0 ⊃ E_2 ⊃ … ⊃ E_{n_max}` with `μ(E_n) = μ(e0) 2^(1-n)`.
/// `e0` must lie in the segment.
pub fn build_spikes(space: &MeasureSpace, e0: &PieceSet, phi: &OrliczFunction, n_max: usize) -> Result<SpikeSequence> {
    let sets = space.shrinking_sequence(e0, n_max)?;
    spikes_on(space, sets, phi)
}

/// Spikes on the single family atoms `E_n = {n}`, `n = 1..=n_max`: the
/// branch where `N(u, ε)` holds infinitely many atoms.
pub fn build_atom_spikes(space: &MeasureSpace, phi: &OrliczFunction, n_max: u64) -> Result<SpikeSequence> {
    if space.family().is_none() {
        return Err(Error::Domain("space has no atom family".into()));
    }
    let sets = (1..=n_max)
        .map(|n| PieceSet::family_only(IndexSet::range(n, n + 1)))
        .collect();
    spikes_on(space, sets, phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    /// `∫ h_n χ_F dμ`
    pub pairing: f64,
    /// `φ⁻¹(1/μ(E_n)) μ(E_n)`
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub entries: Vec<Pairing>,
    /// Without superlinear growth the bounds need not tend to zero.
    pub superlinear: bool,
}

pub fn pairing_decay(space: &MeasureSpace, seq: &SpikeSequence, f: &PieceSet) -> Result<PairingReport> {
    space.check_set(f)?;
    let mut entries = Vec::with_capacity(seq.sets.len());
    for ((set, &mass), &height) in seq.sets.iter().zip(&seq.masses).zip(&seq.heights) {
        let overlap = space.measure(&set.intersection(f))?;
        entries.push(Pairing {
            pairing: height * overlap,
            bound: height * mass,
        });
    }
    Ok(PairingReport {
        entries,
        superlinear: seq.superlinear,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeBound {
    pub passed: bool,
    /// `||M_u h_n||_φ`
    pub norms: Vec<f64>,
}

/// Checks `||M_u h_n||_φ >= ε₀ - 1e-8` for every spike, given `|u| >= ε₀`
/// on the first set of the sequence.
pub fn spike_lower_bound(
    space: &MeasureSpace,
    u: &SimpleFunction,
    seq: &SpikeSequence,
    eps0: f64,
    phi: &OrliczFunction,
) -> Result<SpikeBound> {
    let e0 = seq.sets.first().ok_or_else(|| Error::Domain("empty spike sequence".into()))?;
    let low = u.level_set(eps0, false).complement(space).intersection(e0);
    let truncation = space.family().map_or(0, |f| f.truncation);
    if let Some(p) = space.find_piece(&low, truncation, |_| true) {
        return Err(Error::Hypothesis(format!(
            "|u| < {eps0} on {}",
            space.piece_name(p)
        )));
    }
    let mut norms = Vec::with_capacity(seq.spikes.len());
    for h in &seq.spikes {
        norms.push(luxemburg_norm(&apply(u, h)?, phi, space.into(), LUXEMBURG_TOL)?.value);
    }
    Ok(SpikeBound {
        passed: norms.iter().all(|&n| n >= eps0 - 1e-8),
        norms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    /// `μ{|f_n - f| >= ε}`
    pub measured: f64,
    /// `||f_n - f||_{φ,ω} / φ(ε)`
    pub bound: f64,
    pub norm: f64,
}

/// `μ{|f_n - f| >= ε}` next to `||f_n - f||_{φ,ω} / φ(ε)` for each `n`.
/// Requires `μ(τ⁻¹E) >= μ(E)`; the bound is meaningful while
/// `||f_n - f||_{φ,ω} <= 1`.
pub fn measure_convergence_bound(
    f_seq: &[SimpleFunction],
    f: &SimpleFunction,
    phi: &OrliczFunction,
    w: &WeightedStructure,
    eps: f64,
) -> Result<Vec<ConvergenceEntry>> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    let space = w.space();
    if let Some(p) = w.expanding_violation() {
        let name = space.piece_name(p);
        return Err(Error::Hypothesis(format!("μ(τ⁻¹({name})) < μ({name})")));
    }
    let phi_eps = phi.evaluate(eps)?;
    f_seq
        .iter()
        .map(|fn_| {
            let d = fn_.sub(f)?;
            let norm = luxemburg_norm(&d, phi, Weight::Weighted(w), LUXEMBURG_TOL)?.value;
            let measured = space.measure(&d.level_set(eps, false))?;
            Ok(ConvergenceEntry {
                measured,
                bound: norm / phi_eps,
                norm,
            })
        })
        .collect()
}

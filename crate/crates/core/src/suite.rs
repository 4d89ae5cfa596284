//! The full invariant suite over one configuration, with seeded sampling
//! so that reports are reproducible.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::descriptor::{FunctionSpec, TauSpec};
use crate::error::{Error, Result};
use crate::harness::{build_atom_spikes, build_spikes, measure_convergence_bound, pairing_decay, spike_lower_bound};
use crate::intervals::IndexSet;
use crate::measure::{MeasureSpace, PieceSet, SimpleFunction, Transformation, WeightedStructure};
use crate::norms::{
    amemiya_norm, indicator_norm, luxemburg_norm, modular, modular_at_norm, weighted_indicator_norm, Weight,
    AMEMIYA_TOL, LUXEMBURG_TOL,
};
use crate::operator::{
    analyze, check_invertible, classify_compact, commute_check, complete_continuity, default_probes, truncation_gap,
    Compactness, Justification, OperatorReport,
};
use crate::orlicz::{Delta2, Delta2Verdict, Family, OrliczFunction};
use crate::sample::{self, SampleRng};

pub const SCHEMA_VERSION: u32 = 1;
/// Random samples drawn per sampled check.
pub const SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub theorem_id: String,
    pub status: Status,
    /// Worst observed margin: the largest error for equalities, the largest
    /// `lhs - rhs` for inequalities `lhs <= rhs` (negative means slack).
    pub residual: f64,
    pub hypothesis_notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn entry(&self, id: &str) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.theorem_id == id)
    }
}

/// Inputs of a suite run, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub space: MeasureSpace,
    pub phi: OrliczFunction,
    pub u: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SuiteConfig {
    pub fn run(&self, seed: u64) -> Result<SuiteReport> {
        let u = self.u.resolve(&self.space)?;
        let tau = self.tau.as_ref().map(|t| t.resolve(&self.space)).transpose()?;
        run_suite(&self.space, &self.phi, &u, tau, seed)
    }
}

struct Outcome {
    status: Status,
    residual: f64,
    notes: Vec<String>,
}

impl Outcome {
    fn check(ok: bool, residual: f64) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            residual,
            notes: Vec::new(),
        }
    }

    fn skipped(note: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped,
            residual: 0.0,
            notes: vec![note.into()],
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

struct Ctx<'a> {
    space: &'a MeasureSpace,
    phi: &'a OrliczFunction,
    u: &'a SimpleFunction,
    weighted: Option<WeightedStructure>,
    seed: u64,
}

impl Ctx<'_> {
    fn weight(&self) -> Weight<'_> {
        match &self.weighted {
            Some(w) => Weight::Weighted(w),
            None => Weight::Plain(self.space),
        }
    }

    /// Independent stream for each check, so adding a check leaves the
    /// samples of the others unchanged.
    fn rng(&self, stream: u64) -> SampleRng {
        sample::rng(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(stream))
    }
}

/// Runs every check on `(space, φ, u, τ)`. Failures inside a check are
/// reported in its entry; only invalid inputs make the whole run fail.
pub fn run_suite(
    space: &MeasureSpace,
    phi: &OrliczFunction,
    u: &SimpleFunction,
    tau: Option<Transformation>,
    seed: u64,
) -> Result<SuiteReport> {
    u.check_space(space)?;
    let weighted = tau.map(|t| WeightedStructure::derive(space, t)).transpose()?;
    let ctx = Ctx {
        space,
        phi,
        u,
        weighted,
        seed,
    };
    type Check = fn(&Ctx<'_>) -> Result<Outcome>;
    let checks: [(&str, Check); 19] = [
        ("delta2", delta2),
        ("young_inequality", young_inequality),
        ("luxemburg_power_norm", luxemburg_power_norm),
        ("indicator_norm", indicator_formula),
        ("weighted_indicator_norm", weighted_indicator_formula),
        ("norm_sandwich", norm_sandwich),
        ("unit_ball", unit_ball),
        ("modular_at_norm", modular_at_unit),
        ("operator_norm", operator_norm_check),
        ("boundedness", boundedness),
        ("truncation_gap", truncation),
        ("compactness", compactness),
        ("complete_continuity", complete_continuity_check),
        ("spike_normalization", spike_normalization),
        ("pairing_decay", pairing),
        ("invertibility", invertibility),
        ("commutation", commutation),
        ("measure_convergence", measure_convergence),
        ("analysis_report", analysis_report),
    ];
    let entries = checks
        .iter()
        .map(|(id, check)| {
            let out = check(&ctx).unwrap_or_else(|e| match e {
                Error::Hypothesis(m) => Outcome::skipped(format!("hypothesis not met: {m}")),
                other => Outcome {
                    status: Status::Fail,
                    residual: f64::NAN,
                    notes: vec![other.to_string()],
                },
            });
            SuiteEntry {
                theorem_id: id.to_string(),
                status: out.status,
                residual: out.residual,
                hypothesis_notes: out.notes,
            }
        })
        .collect();
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        seed,
        entries,
    })
}

/// The JSON spelling of a unit enum variant.
fn wire_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn random_set(rng: &mut SampleRng, space: &MeasureSpace) -> PieceSet {
    let atoms: BTreeSet<usize> = (0..space.atoms().len()).filter(|_| rng.random_bool(0.5)).collect();
    let depth = space.depth();
    let cells = match space.segment() {
        None => IndexSet::empty(),
        Some(_) => {
            let n = 1u64 << depth;
            let a = rng.random_range(0..n);
            let b = rng.random_range(a..=n);
            IndexSet::range(a, b)
        }
    };
    let family = match space.family() {
        None => IndexSet::empty(),
        Some(f) => IndexSet::range(1, rng.random_range(1..=f.truncation + 1)),
    };
    PieceSet::new(atoms, cells, depth, family)
}

fn samples(ctx: &Ctx<'_>, stream: u64) -> Vec<SimpleFunction> {
    let mut rng = ctx.rng(stream);
    (0..SAMPLES).map(|_| sample::function(&mut rng, ctx.space)).collect()
}

fn delta2(ctx: &Ctx<'_>) -> Result<Outcome> {
    let report = ctx.phi.check_delta2();
    Ok(match (ctx.phi.delta2(), ctx.phi.family()) {
        (Delta2::Holds { k }, Family::Power { .. }) => {
            let err = (report.k_estimate - k).abs();
            Outcome::check(report.verdict == Delta2Verdict::Holds && err <= 1e-6, err)
        }
        (Delta2::Holds { k }, _) => Outcome::check(
            report.verdict == Delta2Verdict::Holds && report.k_estimate <= k,
            report.k_estimate - k,
        ),
        (Delta2::Fails, _) => Outcome::check(report.verdict == Delta2Verdict::Fails, 0.0),
        (Delta2::Unknown, _) => Outcome::skipped("doubling flag unknown"),
    })
}

fn young_inequality(ctx: &Ctx<'_>) -> Result<Outcome> {
    if matches!(ctx.phi.family(), Family::Tabulated { .. }) {
        return Ok(Outcome::skipped("conjugate of a tabulated function is not computed"));
    }
    let mut rng = ctx.rng(1);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let x: f64 = rng.random_range(0.0..10.0);
        let y: f64 = rng.random_range(0.0..10.0);
        let psi = match ctx.phi.conjugate_value(y) {
            Ok(v) => v,
            Err(Error::UnboundedConjugate { .. }) => continue,
            Err(e) => return Err(e),
        };
        let lhs = x * y;
        worst = worst.max((lhs - ctx.phi.evaluate(x)? - psi) / (1.0 + lhs));
    }
    Ok(Outcome::check(worst <= 1e-9, worst))
}

fn luxemburg_power_norm(ctx: &Ctx<'_>) -> Result<Outcome> {
    let Family::Power { p, c } = *ctx.phi.family() else {
        return Ok(Outcome::skipped("closed-form p-norm only for power functions"));
    };
    let mut worst: f64 = 0.0;
    for f in samples(ctx, 2) {
        let lux = luxemburg_norm(&f, ctx.phi, ctx.space.into(), LUXEMBURG_TOL)?.value;
        let sum = modular(&f, &OrliczFunction::power(p, 1.0)?, ctx.space.into())?.value;
        worst = worst.max(rel(lux, c.powf(1.0 / p) * sum.powf(1.0 / p)));
    }
    Ok(Outcome::check(worst <= 1e-8, worst))
}

fn indicator_formula(ctx: &Ctx<'_>) -> Result<Outcome> {
    let mut rng = ctx.rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let set = random_set(&mut rng, ctx.space);
        let closed = indicator_norm(ctx.space, &set, ctx.phi)?.value;
        let chi = SimpleFunction::indicator(ctx.space, &set)?;
        let bis = luxemburg_norm(&chi, ctx.phi, ctx.space.into(), LUXEMBURG_TOL)?.value;
        worst = worst.max(rel(closed, bis));
    }
    Ok(Outcome::check(worst <= 1e-9, worst))
}

fn weighted_indicator_formula(ctx: &Ctx<'_>) -> Result<Outcome> {
    let Some(w) = &ctx.weighted else {
        return Ok(Outcome::skipped("no transformation given"));
    };
    let mut rng = ctx.rng(4);
    let mut worst: f64 = 0.0;
    let mut vanishing = 0;
    for _ in 0..SAMPLES {
        let set = random_set(&mut rng, ctx.space);
        let closed = weighted_indicator_norm(&set, ctx.phi, w)?.value;
        let chi = SimpleFunction::indicator(ctx.space, &set)?;
        let bis = luxemburg_norm(&chi, ctx.phi, w.into(), LUXEMBURG_TOL)?.value;
        if closed == 0.0 {
            vanishing += 1;
        }
        worst = worst.max(rel(closed, bis));
    }
    Ok(Outcome::check(worst <= 1e-9, worst).note(format!("{vanishing} sets with zero weighted measure")))
}

fn norm_sandwich(ctx: &Ctx<'_>) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for f in samples(ctx, 5) {
        let lux = luxemburg_norm(&f, ctx.phi, ctx.weight(), LUXEMBURG_TOL)?.value;
        let am = amemiya_norm(&f, ctx.phi, ctx.weight(), AMEMIYA_TOL)?.value;
        let scale = lux.max(f64::MIN_POSITIVE);
        worst = worst.max((lux - am) / scale).max((am - 2.0 * lux) / scale);
    }
    Ok(Outcome::check(worst <= 1e-8, worst))
}

fn unit_ball(ctx: &Ctx<'_>) -> Result<Outcome> {
    let mut rng = ctx.rng(6);
    let mut mismatches = 0;
    let mut worst = f64::NEG_INFINITY;
    for f in samples(ctx, 6) {
        let f = f.scale(rng.random_range(0.1..3.0));
        let lux = luxemburg_norm(&f, ctx.phi, ctx.weight(), LUXEMBURG_TOL)?.value;
        let m = modular(&f, ctx.phi, ctx.weight())?.value;
        // the computed norm overshoots by at most the bisection tolerance
        let inside_norm = lux <= 1.0;
        let inside_modular = m <= 1.0;
        if inside_norm != inside_modular && !(inside_modular && lux <= 1.0 + 1e-9) {
            mismatches += 1;
        }
        if inside_modular {
            worst = worst.max(lux - 1.0);
        }
    }
    Ok(Outcome::check(mismatches == 0, worst))
}

fn modular_at_unit(ctx: &Ctx<'_>) -> Result<Outcome> {
    if !ctx.phi.delta2().holds() {
        return Ok(Outcome::skipped("φ does not satisfy the doubling condition"));
    }
    let mut worst: f64 = 0.0;
    for f in samples(ctx, 7) {
        match modular_at_norm(&f, ctx.phi, ctx.weight(), LUXEMBURG_TOL) {
            Ok(m) => worst = worst.max((m.value - 1.0).abs()),
            Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::check(worst <= 1e-8, worst))
}

fn operator_norm_outcome(ctx: &Ctx<'_>) -> Result<Outcome> {
    let probes = default_probes(ctx.space, 100, ctx.seed);
    let report = analyze(ctx.u, ctx.phi, ctx.weight(), &probes)?;
    let upper = report.probe_max - report.operator_norm;
    let lower = (report.operator_norm - 2.0 * report.witness_delta) - report.witness_ratio;
    let mut out = Outcome::check(upper <= 1e-8 && lower <= 0.0, upper.max(lower));
    if report.seminorm_only {
        out = out.note("|u| is largest where the weight vanishes; the norm is a seminorm value");
    }
    Ok(out)
}

fn operator_norm_check(ctx: &Ctx<'_>) -> Result<Outcome> {
    operator_norm_outcome(ctx)
}

fn boundedness(ctx: &Ctx<'_>) -> Result<Outcome> {
    Ok(operator_norm_outcome(ctx)?.note("subsumed by the operator_norm check"))
}

fn truncation(ctx: &Ctx<'_>) -> Result<Outcome> {
    let probes = default_probes(ctx.space, 20, ctx.seed.wrapping_add(1));
    let mut worst = f64::NEG_INFINITY;
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for k in 0..=6 {
        let n = 1u64 << k;
        let gap = truncation_gap(ctx.u, n, ctx.phi, ctx.weight(), &probes)?;
        worst = worst.max(gap - 1.0 / n as f64);
        monotone &= gap <= prev;
        prev = gap;
    }
    let mut out = Outcome::check(worst <= 1e-9 && monotone, worst);
    if !monotone {
        out = out.note("gap sequence increased");
    }
    Ok(out)
}

/// The positive-weight part of `u`.
fn effective_u(ctx: &Ctx<'_>) -> SimpleFunction {
    match &ctx.weighted {
        Some(w) => ctx.u.restrict(&w.omega_null_set().complement(ctx.space)),
        None => ctx.u.clone(),
    }
}

fn compactness(ctx: &Ctx<'_>) -> Result<Outcome> {
    let report = classify_compact(ctx.u, ctx.weight())?;
    let u = effective_u(ctx);
    let out = match report.justification {
        Justification::ZeroOperator => Outcome::check(u.ess_sup() == 0.0, u.ess_sup()),
        Justification::NSetsFiniteAtoms => {
            let finite = report.dim_report.iter().all(|e| e.dim.is_finite());
            Outcome::check(finite, 0.0)
        }
        Justification::NonatomicMassInNSet => {
            // spikes inside the largest segment run keep ||M_u h_n|| >= ε₀
            let run = u
                .runs()
                .iter()
                .filter(|r| r.2 != 0.0)
                .max_by(|a, b| a.2.abs().total_cmp(&b.2.abs()))
                .copied()
                .expect("nonatomic verdict has a nonzero run");
            let eps0 = run.2.abs();
            let count = run.1 - run.0;
            let room = 24 + count.trailing_zeros() as i64 - u.depth() as i64 + 1;
            let n_max = room.clamp(1, 20) as usize;
            let e0 = PieceSet::cells_only(IndexSet::range(run.0, run.1), u.depth());
            let seq = build_spikes(ctx.space, &e0, ctx.phi, n_max)?;
            let bound = spike_lower_bound(ctx.space, &u, &seq, eps0, ctx.phi)?;
            let min = bound.norms.iter().copied().fold(f64::INFINITY, f64::min);
            Outcome::check(bound.passed, eps0 - 1e-8 - min)
                .note(format!("{n_max} spikes on cells [{}, {}) at depth {}", run.0, run.1, u.depth()))
        }
        Justification::InfinitelyManyFamilyAtoms => {
            let part = u.family().expect("family verdict has a family part");
            let eps0 = part.rule.limit_abs();
            let first = part.support.min().unwrap_or(1);
            let seq = build_atom_spikes(ctx.space, ctx.phi, first + 63)?;
            let seq = crate::harness::SpikeSequence {
                sets: seq.sets[(first - 1) as usize..].to_vec(),
                masses: seq.masses[(first - 1) as usize..].to_vec(),
                heights: seq.heights[(first - 1) as usize..].to_vec(),
                spikes: seq.spikes[(first - 1) as usize..].to_vec(),
                norms: seq.norms[(first - 1) as usize..].to_vec(),
                superlinear: seq.superlinear,
            };
            let bound = spike_lower_bound(ctx.space, &u, &seq, eps0, ctx.phi)?;
            let min = bound.norms.iter().copied().fold(f64::INFINITY, f64::min);
            Outcome::check(bound.passed, eps0 - 1e-8 - min).note("64 spikes on single family atoms")
        }
    };
    let mut out = out.note(format!(
        "verdict {}, {}",
        wire_name(&report.verdict),
        wire_name(&report.justification)
    ));
    if !ctx.space.total_measure().is_finite() {
        out = out.note("μ(Ω) is infinite; the characterization is applied at model scale");
    }
    Ok(out)
}

fn complete_continuity_check(ctx: &Ctx<'_>) -> Result<Outcome> {
    let report = classify_compact(ctx.u, ctx.weight())?;
    let cc = complete_continuity(&report, ctx.phi);
    if cc.conditional {
        return Ok(Outcome::skipped(
            "φ is not both doubling and superlinear; the verdict equals compactness only conditionally",
        ));
    }
    Ok(Outcome::check(cc.verdict == report.verdict, 0.0))
}

/// A set of the segment, or the family atoms when there is no segment.
enum SpikeSource {
    Segment(PieceSet, usize),
    Family,
}

fn spike_source(space: &MeasureSpace) -> Option<SpikeSource> {
    if space.segment().is_some() {
        let d = space.depth();
        let n_max = (25 - d as i64).clamp(1, 20) as usize;
        Some(SpikeSource::Segment(PieceSet::cells_only(IndexSet::range(0, 1), d), n_max))
    } else if space.family().is_some() {
        Some(SpikeSource::Family)
    } else {
        None
    }
}

fn spikes(ctx: &Ctx<'_>) -> Result<Option<crate::harness::SpikeSequence>> {
    Ok(match spike_source(ctx.space) {
        Some(SpikeSource::Segment(e0, n)) => Some(build_spikes(ctx.space, &e0, ctx.phi, n)?),
        Some(SpikeSource::Family) => Some(build_atom_spikes(ctx.space, ctx.phi, 64)?),
        None => None,
    })
}

fn spike_normalization(ctx: &Ctx<'_>) -> Result<Outcome> {
    let Some(seq) = spikes(ctx)? else {
        return Ok(Outcome::skipped("space has no segment or family"));
    };
    let worst = seq.norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    Ok(Outcome::check(worst <= 1e-8, worst).note(format!("{} spikes", seq.norms.len())))
}

fn pairing(ctx: &Ctx<'_>) -> Result<Outcome> {
    let Some(seq) = spikes(ctx)? else {
        return Ok(Outcome::skipped("space has no segment or family"));
    };
    let mut rng = ctx.rng(8);
    let f = random_set(&mut rng, ctx.space);
    let report = pairing_decay(ctx.space, &seq, &f)?;
    let worst = report
        .entries
        .iter()
        .map(|p| p.pairing - p.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = Outcome::check(worst <= 0.0, worst);
    if let Some(SpikeSource::Segment(..)) = spike_source(ctx.space) {
        if report.superlinear {
            let decreasing = report.entries.windows(2).all(|w| w[1].bound < w[0].bound);
            if !decreasing {
                out = Outcome::check(false, worst).note("bounds are not strictly decreasing");
            }
        } else {
            out = out.note("φ is not superlinear; decay of the bounds is not asserted");
        }
    } else {
        // disjoint atoms: no pairing once past the indices meeting F
        let past = f.family().max().map_or(0, |m| m as usize);
        let clean = report.entries.iter().skip(past).all(|p| p.pairing == 0.0);
        if !clean {
            out = Outcome::check(false, worst).note("pairing nonzero past the finite set");
        }
    }
    Ok(out)
}

fn invertibility(ctx: &Ctx<'_>) -> Result<Outcome> {
    let inv = check_invertible(ctx.u, ctx.space)?;
    let mut out = match &inv.inverse {
        Some(r) => {
            let mut worst: f64 = 0.0;
            for f in samples(ctx, 9) {
                let back = r.mul(&ctx.u.mul(&f)?)?;
                let err = back.sub(&f)?.ess_sup();
                worst = worst.max(err / f.ess_sup().max(f64::MIN_POSITIVE));
            }
            Outcome::check(worst <= 1e-14, worst)
        }
        None => Outcome::check(inv.ess_inf_abs <= crate::operator::INVERTIBILITY_TOL, inv.ess_inf_abs),
    }
    .note(format!("invertible: {}, ess inf |u| = {}", inv.invertible, inv.ess_inf_abs));
    if !inv.finite_measure {
        out = out.note("μ(Ω) is infinite");
    }
    if !ctx.phi.delta2().holds() {
        out = out.note("φ is not known to be doubling");
    }
    Ok(out)
}

fn commutation(ctx: &Ctx<'_>) -> Result<Outcome> {
    let mut rng = ctx.rng(10);
    let probes: Vec<_> = (0..10).map(|_| sample::dyadic_function(&mut rng, ctx.space)).collect();
    let mut ok = true;
    for _ in 0..10 {
        let u = sample::dyadic_function(&mut rng, ctx.space);
        let v = sample::dyadic_function(&mut rng, ctx.space);
        ok &= commute_check(ctx.space, &u, &v, &probes)?;
    }
    Ok(Outcome::check(ok, 0.0).note("dyadic symbols, compared exactly"))
}

fn measure_convergence(ctx: &Ctx<'_>) -> Result<Outcome> {
    let w = ctx
        .weighted
        .clone()
        .unwrap_or_else(|| WeightedStructure::unweighted(ctx.space));
    let mut rng = ctx.rng(11);
    let explicit = PieceSet::new(
        (0..ctx.space.atoms().len()).collect(),
        ctx.space.cell_universe(ctx.space.depth()),
        ctx.space.depth(),
        IndexSet::empty(),
    );
    let mut worst = f64::NEG_INFINITY;
    let mut sequences = 0;
    while sequences < 10 {
        let f = sample::function(&mut rng, ctx.space);
        let g = sample::function(&mut rng, ctx.space).restrict(&explicit);
        let ng = luxemburg_norm(&g, ctx.phi, (&w).into(), LUXEMBURG_TOL)?.value;
        if ng == 0.0 {
            continue;
        }
        let g = g.scale(0.999 / ng);
        let f_seq: Vec<_> = (0..8).map(|n| f.add(&g.scale(0.5f64.powi(n))).expect("same family profile")).collect();
        let eps = rng.random_range(0.05..1.0);
        for e in measure_convergence_bound(&f_seq, &f, ctx.phi, &w, eps)? {
            worst = worst.max(e.measured - e.bound);
        }
        sequences += 1;
    }
    Ok(Outcome::check(worst <= 1e-10, worst))
}

fn analysis_report(ctx: &Ctx<'_>) -> Result<Outcome> {
    let probes = default_probes(ctx.space, 10, ctx.seed);
    let report: OperatorReport = analyze(ctx.u, ctx.phi, ctx.weight(), &probes)?;
    let text = serde_json::to_string(&report).map_err(|e| Error::Domain(e.to_string()))?;
    let back: OperatorReport = serde_json::from_str(&text).map_err(|e| Error::Domain(e.to_string()))?;
    let consistent = report.operator_norm >= 0.0
        && (report.justification != Justification::ZeroOperator || report.operator_norm == 0.0)
        && (!report.invertible || report.ess_inf_abs > 0.0)
        && (report.compact == Compactness::Compact) == report.completely_continuous.verdict.eq(&Compactness::Compact);
    Ok(Outcome::check(consistent && back == report, 0.0).note("report invariants and JSON round trip"))
}

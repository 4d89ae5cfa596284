//! `orlicz-kit`: Orlicz-space norms, conjugates and multiplication-operator
//! analysis from JSON descriptors.
//!
//! Reports go to stdout (or `--out`) as JSON; diagnostics go to stderr.
//! Exit codes: 0 success, 1 computation error or failed check, 2 hypothesis
//! violation, 3 configuration error.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use orlicz_kit::harness::{build_spikes, measure_convergence_bound, pairing_decay};
use orlicz_kit::measure::WeightedStructure;
use orlicz_kit::norms::{amemiya_norm, luxemburg_norm, modular, modular_at_norm, Weight, AMEMIYA_TOL, LUXEMBURG_TOL};
use orlicz_kit::operator::{analyze, default_probes};
use orlicz_kit::suite::{run_suite, Status, SCHEMA_VERSION};
use orlicz_kit::Error;

use config::{Failure, Inputs};

#[derive(Parser)]
#[command(name = "orlicz-kit", version, about = "Orlicz-space numerics and multiplication operator analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Inputs shared by every subcommand. Each path flag overrides the
/// matching field of `--config`.
#[derive(Args, Clone, Default)]
struct Common {
    /// JSON file bundling any of the inputs below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Measure space descriptor
    #[arg(long, global = true)]
    space: Option<PathBuf>,
    /// Orlicz function descriptor
    #[arg(long, global = true)]
    phi: Option<PathBuf>,
    /// Transformation τ defining the weight
    #[arg(long, global = true)]
    tau: Option<PathBuf>,
    /// Multiplier symbol u
    #[arg(long, global = true)]
    u: Option<PathBuf>,
    /// Function f
    #[arg(long, global = true)]
    f: Option<PathBuf>,
    /// Comma-separated ε values
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Number of spikes
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Relative tolerance of the Luxemburg bisection
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Luxemburg and Amemiya norms and the modular of f
    Norm(Common2),
    /// Complementary function ψ(y) = sup_x (xy - φ(x))
    Conjugate {
        /// Comma-separated points y (default 0, 0.5, ..., 10)
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[command(flatten)]
        common: Common2,
    },
    /// Doubling-condition probe and growth flags of φ
    Delta2(Common2),
    /// Operator report for M_u
    Analyze(Common2),
    /// Spike constructions and the convergence bound
    #[command(subcommand)]
    Harness(HarnessCommand),
    /// Run the full invariant suite (built-in demo unless inputs are given)
    Verify(Common2),
}

#[derive(Subcommand)]
enum HarnessCommand {
    /// Unit-norm spikes on halving subsets of a segment set
    Spikes {
        /// Starting set E₀
        #[arg(long)]
        set: Option<PathBuf>,
        #[command(flatten)]
        common: Common2,
    },
    /// ∫ h_n χ_F dμ against its bound
    Pairing {
        #[arg(long)]
        set: Option<PathBuf>,
        /// The set F
        #[arg(long)]
        against: Option<PathBuf>,
        #[command(flatten)]
        common: Common2,
    },
    /// μ{|f_n - f| >= ε} against ||f_n - f||/φ(ε)
    Convergence {
        /// JSON array of functions f_n
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[command(flatten)]
        common: Common2,
    },
}

/// Flattened wrapper so subcommands can each carry the shared flags.
#[derive(Args, Clone, Default)]
struct Common2 {
    #[command(flatten)]
    inner: Common,
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(common: &Common, body: T) -> Result<(), Failure> {
    write_out(common, &Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    })
}

/// Writes a report that already carries `schema_version`.
fn write_out<T: Serialize>(common: &Common, report: &T) -> Result<(), Failure> {
    let text = output::to_string(report).map_err(|e| Failure::Compute(e.to_string()))?;
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ORLICZ_KIT_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Norm(c) => norm(&c.inner),
        Command::Conjugate { y, common } => conjugate(&common.inner, y),
        Command::Delta2(c) => delta2(&c.inner),
        Command::Analyze(c) => analyze_cmd(&c.inner),
        Command::Harness(HarnessCommand::Spikes { set, common }) => spikes(&common.inner, set),
        Command::Harness(HarnessCommand::Pairing { set, against, common }) => pairing(&common.inner, set, against),
        Command::Harness(HarnessCommand::Convergence { sequence, common }) => convergence(&common.inner, sequence),
        Command::Verify(c) => verify(&c.inner),
    }
}

fn inputs(c: &Common) -> Result<Inputs, Failure> {
    Inputs::load(c.config.as_deref(), config::Overrides {
        space: c.space.as_deref(),
        phi: c.phi.as_deref(),
        tau: c.tau.as_deref(),
        u: c.u.as_deref(),
        f: c.f.as_deref(),
        set: None,
        against: None,
        sequence: None,
    })
}

fn tolerance(c: &Common, inputs: &Inputs) -> Result<f64, Failure> {
    let tol = c.tol.or(inputs.tol).unwrap_or(LUXEMBURG_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Failure::Config(format!("tol: must lie in (0, 1), got {tol}")));
    }
    Ok(tol)
}

fn norm(c: &Common) -> Result<u8, Failure> {
    let inputs = inputs(c)?;
    let space = inputs.space()?;
    let phi = inputs.phi()?;
    let f = inputs.f(&space)?;
    let weighted = inputs.tau(&space)?.map(|t| WeightedStructure::derive(&space, t)).transpose()?;
    let weight = weighted.as_ref().map_or(Weight::Plain(&space), Weight::Weighted);
    let tol = tolerance(c, &inputs)?;
    info!("norm on {space}");

    #[derive(Serialize)]
    struct Report {
        weighted: bool,
        luxemburg: orlicz_kit::norms::NormResult,
        amemiya: orlicz_kit::norms::NormResult,
        modular: orlicz_kit::norms::Modular,
        modular_at_norm: Option<orlicz_kit::norms::ModularAtNorm>,
    }
    let luxemburg = luxemburg_norm(&f, &phi, weight, tol)?;
    let report = Report {
        weighted: weighted.is_some(),
        luxemburg,
        amemiya: amemiya_norm(&f, &phi, weight, AMEMIYA_TOL)?,
        modular: modular(&f, &phi, weight)?,
        modular_at_norm: if luxemburg.value > 0.0 {
            Some(modular_at_norm(&f, &phi, weight, tol)?)
        } else {
            None
        },
    };
    emit(c, report)?;
    Ok(0)
}

fn conjugate(c: &Common, ys: Vec<f64>) -> Result<u8, Failure> {
    let inputs = inputs(c)?;
    let phi = inputs.phi()?;
    let ys = if ys.is_empty() {
        (0..=20).map(|i| i as f64 * 0.5).collect()
    } else {
        ys
    };

    #[derive(Serialize)]
    struct Point {
        y: f64,
        /// `null` where the supremum is unbounded
        psi: Option<f64>,
    }
    #[derive(Serialize)]
    struct Report {
        phi: orlicz_kit::OrliczFunction,
        closed_form: Option<orlicz_kit::OrliczFunction>,
        values: Vec<Point>,
    }
    let mut values = Vec::with_capacity(ys.len());
    for y in ys {
        let psi = match phi.conjugate_value(y) {
            Ok(v) => Some(v),
            Err(Error::UnboundedConjugate { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        values.push(Point { y, psi });
    }
    let closed_form = match phi.family() {
        orlicz_kit::orlicz::Family::Power { .. } => Some(phi.conjugate()?),
        _ => None,
    };
    emit(c, Report { phi, closed_form, values })?;
    Ok(0)
}

fn delta2(c: &Common) -> Result<u8, Failure> {
    let phi = inputs(c)?.phi()?;

    #[derive(Serialize)]
    struct Report {
        flag: orlicz_kit::orlicz::Delta2,
        probe: orlicz_kit::orlicz::Delta2Report,
        superlinear: bool,
    }
    emit(c, Report {
        flag: phi.delta2(),
        probe: phi.check_delta2(),
        superlinear: phi.superlinear(),
    })?;
    Ok(0)
}

fn analyze_cmd(c: &Common) -> Result<u8, Failure> {
    let inputs = inputs(c)?;
    let seed = c.seed.or(inputs.seed).ok_or_else(|| Failure::Config("seed: required for probe sampling".into()))?;
    let space = inputs.space()?;
    let phi = inputs.phi()?;
    let u = inputs.u(&space)?;
    let weighted = inputs.tau(&space)?.map(|t| WeightedStructure::derive(&space, t)).transpose()?;
    let weight = weighted.as_ref().map_or(Weight::Plain(&space), Weight::Weighted);
    let probes = default_probes(&space, 100, seed);
    let report = analyze(&u, &phi, weight, &probes)?;
    info!("operator norm {} ({:?})", report.operator_norm, report.compact);
    emit(c, report)?;
    Ok(0)
}

fn spikes(c: &Common, set: Option<PathBuf>) -> Result<u8, Failure> {
    let inputs = Inputs::load(c.config.as_deref(), overrides_with(c, set.as_deref(), None, None))?;
    let space = inputs.space()?;
    let phi = inputs.phi()?;
    let e0 = inputs.set(&space)?;
    let n_max = c.nmax.or(inputs.nmax).unwrap_or(20);
    let seq = build_spikes(&space, &e0, &phi, n_max)?;

    #[derive(Serialize)]
    struct Report {
        sets: Vec<orlicz_kit::PieceSet>,
        masses: Vec<f64>,
        heights: Vec<f64>,
        norms: Vec<f64>,
        superlinear: bool,
    }
    emit(c, Report {
        sets: seq.sets,
        masses: seq.masses,
        heights: seq.heights,
        norms: seq.norms,
        superlinear: seq.superlinear,
    })?;
    Ok(0)
}

fn pairing(c: &Common, set: Option<PathBuf>, against: Option<PathBuf>) -> Result<u8, Failure> {
    let inputs = Inputs::load(c.config.as_deref(), overrides_with(c, set.as_deref(), against.as_deref(), None))?;
    let space = inputs.space()?;
    let phi = inputs.phi()?;
    let e0 = inputs.set(&space)?;
    let f = inputs.against(&space)?;
    let n_max = c.nmax.or(inputs.nmax).unwrap_or(20);
    let seq = build_spikes(&space, &e0, &phi, n_max)?;
    let report = pairing_decay(&space, &seq, &f)?;
    if !report.superlinear {
        log::warn!("φ is not superlinear; the pairing bounds need not decay");
    }
    emit(c, report)?;
    Ok(0)
}

fn convergence(c: &Common, sequence: Option<PathBuf>) -> Result<u8, Failure> {
    let inputs = Inputs::load(c.config.as_deref(), overrides_with(c, None, None, sequence.as_deref()))?;
    let space = inputs.space()?;
    let phi = inputs.phi()?;
    let f = inputs.f(&space)?;
    let seq = inputs.sequence(&space)?;
    let tau = inputs.tau(&space)?;
    let w = match tau {
        Some(t) => WeightedStructure::derive(&space, t)?,
        None => WeightedStructure::unweighted(&space),
    };
    let eps = c
        .eps
        .first()
        .copied()
        .or_else(|| inputs.eps.as_ref().and_then(|e| e.first().copied()))
        .ok_or_else(|| Failure::Config("eps: required".into()))?;
    let entries = measure_convergence_bound(&seq, &f, &phi, &w, eps)?;

    #[derive(Serialize)]
    struct Report {
        eps: f64,
        entries: Vec<orlicz_kit::harness::ConvergenceEntry>,
        holds: bool,
    }
    let holds = entries.iter().all(|e| e.norm > 1.0 || e.measured <= e.bound + 1e-10);
    emit(c, Report { eps, entries, holds })?;
    Ok(if holds { 0 } else { 1 })
}

fn overrides_with<'a>(
    c: &'a Common,
    set: Option<&'a std::path::Path>,
    against: Option<&'a std::path::Path>,
    sequence: Option<&'a std::path::Path>,
) -> config::Overrides<'a> {
    config::Overrides {
        space: c.space.as_deref(),
        phi: c.phi.as_deref(),
        tau: c.tau.as_deref(),
        u: c.u.as_deref(),
        f: c.f.as_deref(),
        set,
        against,
        sequence,
    }
}

fn verify(c: &Common) -> Result<u8, Failure> {
    let any_input = c.config.is_some() || c.space.is_some() || c.phi.is_some() || c.u.is_some();
    let inputs = if any_input {
        inputs(c)?
    } else {
        info!("no inputs given, using the built-in demo");
        Inputs::demo()
    };
    let seed = c.seed.or(inputs.seed).ok_or_else(|| Failure::Config("seed: required".into()))?;
    let space = inputs.space()?;
    let phi = inputs.phi()?;
    let u = inputs.u(&space)?;
    let tau = inputs.tau(&space)?;
    let report = run_suite(&space, &phi, &u, tau, seed)?;
    for e in &report.entries {
        let status = match e.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        eprintln!("{status:4}  {:24} residual {:.3e}", e.theorem_id, e.residual);
    }
    let passed = report.passed();
    write_out(c, &report)?;
    Ok(if passed { 0 } else { 1 })
}

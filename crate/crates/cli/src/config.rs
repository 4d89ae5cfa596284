//! Loading of JSON inputs, either from individual files or from one
//! `--config` bundle, with error paths that point at the offending field.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use orlicz_kit::descriptor::{FunctionSpec, SetSpec, TauSpec};
use orlicz_kit::measure::Transformation;
use orlicz_kit::{Error, MeasureSpace, OrliczFunction, PieceSet, SimpleFunction};

const DEMO: &str = include_str!("../fixtures/demo.json");

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Hypothesis(String),
    Compute(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Hypothesis(_) => 2,
            Failure::Config(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config: {m}"),
            Failure::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            Failure::Compute(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => Failure::Config(e.to_string()),
            Error::Hypothesis(m) => Failure::Hypothesis(m),
            other => Failure::Compute(other.to_string()),
        }
    }
}

/// Per-input file paths that take precedence over `--config`.
#[derive(Default)]
pub struct Overrides<'a> {
    pub space: Option<&'a Path>,
    pub phi: Option<&'a Path>,
    pub tau: Option<&'a Path>,
    pub u: Option<&'a Path>,
    pub f: Option<&'a Path>,
    pub set: Option<&'a Path>,
    pub against: Option<&'a Path>,
    pub sequence: Option<&'a Path>,
}

/// Raw inputs; each is parsed on demand so errors carry the field name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    space: Option<Value>,
    phi: Option<Value>,
    tau: Option<Value>,
    u: Option<Value>,
    f: Option<Value>,
    set: Option<Value>,
    against: Option<Value>,
    sequence: Option<Value>,
    pub seed: Option<u64>,
    pub eps: Option<Vec<f64>>,
    pub nmax: Option<usize>,
    pub tol: Option<f64>,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(name: &str, value: &Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { name.to_string() } else { format!("{name}.{path}") };
        Failure::Config(format!("at `{at}`: {}", e.into_inner()))
    })
}

impl Inputs {
    pub fn load(config: Option<&Path>, over: Overrides<'_>) -> Result<Self, Failure> {
        let mut inputs = match config {
            Some(path) => parse::<Inputs>("config", &read_json(path)?)?,
            None => Inputs::default(),
        };
        let slots = [
            (over.space, &mut inputs.space),
            (over.phi, &mut inputs.phi),
            (over.tau, &mut inputs.tau),
            (over.u, &mut inputs.u),
            (over.f, &mut inputs.f),
            (over.set, &mut inputs.set),
            (over.against, &mut inputs.against),
            (over.sequence, &mut inputs.sequence),
        ];
        for (path, slot) in slots {
            if let Some(path) = path {
                *slot = Some(read_json(path)?);
            }
        }
        Ok(inputs)
    }

    pub fn demo() -> Self {
        serde_json::from_str(DEMO).expect("bundled demo config parses")
    }

    fn required<'a>(name: &str, v: &'a Option<Value>) -> Result<&'a Value, Failure> {
        v.as_ref().ok_or_else(|| Failure::Config(format!("`{name}` is required (pass --{name} or --config)")))
    }

    pub fn space(&self) -> Result<MeasureSpace, Failure> {
        parse("space", Self::required("space", &self.space)?)
    }

    pub fn phi(&self) -> Result<OrliczFunction, Failure> {
        parse("phi", Self::required("phi", &self.phi)?)
    }

    pub fn tau(&self, space: &MeasureSpace) -> Result<Option<Transformation>, Failure> {
        match &self.tau {
            None => Ok(None),
            Some(v) => Ok(Some(parse::<TauSpec>("tau", v)?.resolve(space)?)),
        }
    }

    fn function(name: &str, v: &Option<Value>, space: &MeasureSpace) -> Result<SimpleFunction, Failure> {
        resolved(name, parse::<FunctionSpec>(name, Self::required(name, v)?)?.resolve(space))
    }

    pub fn u(&self, space: &MeasureSpace) -> Result<SimpleFunction, Failure> {
        Self::function("u", &self.u, space)
    }

    pub fn f(&self, space: &MeasureSpace) -> Result<SimpleFunction, Failure> {
        Self::function("f", &self.f, space)
    }

    pub fn set(&self, space: &MeasureSpace) -> Result<PieceSet, Failure> {
        resolved("set", parse::<SetSpec>("set", Self::required("set", &self.set)?)?.resolve(space))
    }

    pub fn against(&self, space: &MeasureSpace) -> Result<PieceSet, Failure> {
        resolved("against", parse::<SetSpec>("against", Self::required("against", &self.against)?)?.resolve(space))
    }

    pub fn sequence(&self, space: &MeasureSpace) -> Result<Vec<SimpleFunction>, Failure> {
        let specs: Vec<FunctionSpec> = parse("sequence", Self::required("sequence", &self.sequence)?)?;
        specs
            .iter()
            .enumerate()
            .map(|(i, s)| resolved(&format!("sequence[{i}]"), s.resolve(space)))
            .collect()
    }
}

/// Prefixes config errors raised during resolution with the input name.
fn resolved<T>(name: &str, r: orlicz_kit::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Config { field, message } => Failure::Config(format!("at `{name}.{field}`: {message}")),
        other => other.into(),
    })
}

//! Run configuration: a JSON document plus command-line overrides.
//!
//! The document is either a bare weight-system object or
//!
//! ```json
//! {"weights": {"n": 2, "family": "constant", "value": 1.0},
//!  "depth": 8, "tol": 1e-10, "eps": 0.02, "seed": 0, "growth_bound": 1.0,
//!  "grid": "0:1.2:0.1", "lambda": ["0.3+0.1i,0.4"], "k": 4,
//!  "eta1": {"21": [1, 0]}, "eta2": {}}
//! ```
//!
//! Unknown fields are rejected.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::algebra::FourierElement;
use crate::eigen::GridSpec;
use crate::error::{Error, Result};
use crate::weights::schema::{as_f64, as_usize, object, reject_unknown, weights_from_json, weights_to_json};
use crate::weights::WeightSystem;
use crate::words::Word;

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_EPS: f64 = 0.02;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_GROWTH_BOUND: f64 = 1.0;
/// Rows of a left growth table when `k` is not given.
pub const DEFAULT_GROWTH_K: usize = 32;

const RUN_KEYS: [&str; 11] = [
    "weights",
    "depth",
    "tol",
    "eps",
    "seed",
    "growth_bound",
    "grid",
    "lambda",
    "k",
    "eta1",
    "eta2",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpectraMode {
    #[default]
    Right,
    Left,
    Zero,
}

impl SpectraMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "right" => Ok(SpectraMode::Right),
            "left" => Ok(SpectraMode::Left),
            "zero" => Ok(SpectraMode::Zero),
            other => Err(Error::domain(format!("unknown spectra mode {other:?} (right|left|zero)"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SpectraMode::Right => "right",
            SpectraMode::Left => "left",
            SpectraMode::Zero => "zero",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub weights: Option<WeightSystem>,
    pub depth: usize,
    pub tol: f64,
    pub eps: f64,
    pub seed: u64,
    pub growth_bound: f64,
    pub grid: Option<GridSpec>,
    pub lambdas: Vec<Vec<Complex64>>,
    pub k: Option<usize>,
    pub mode: SpectraMode,
    pub coeffs: Option<FourierElement>,
    pub eta: [BTreeMap<Word, Complex64>; 2],
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            weights: None,
            depth: DEFAULT_DEPTH,
            tol: DEFAULT_TOL,
            eps: DEFAULT_EPS,
            seed: DEFAULT_SEED,
            growth_bound: DEFAULT_GROWTH_BOUND,
            grid: None,
            lambdas: Vec::new(),
            k: None,
            mode: SpectraMode::Right,
            coeffs: None,
            eta: [BTreeMap::new(), BTreeMap::new()],
        }
    }
}

/// Values given on the command line; each replaces the document's.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub depth: Option<usize>,
    pub tol: Option<f64>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub lambda: Option<String>,
    pub k: Option<usize>,
    pub mode: Option<String>,
    /// Contents of the `--coeffs` file.
    pub coeffs: Option<Value>,
}

/// Parses one complex literal: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::domain(format!("{s:?} is not a complex number (a+bi)"));
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    let unit = |p: &str| match p {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(p),
    };
    if t.is_empty() {
        return Err(bad());
    }
    let z = match t.strip_suffix(['i', 'j']) {
        None => Complex64::new(num(&t)?, 0.0),
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
            match split {
                Some(p) => Complex64::new(num(&body[..p])?, unit(&body[p..])?),
                None => Complex64::new(0.0, unit(body)?),
            }
        }
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

/// Parses a comma-separated λ tuple such as `0.3+0.1i,0.4`.
pub fn parse_lambda(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_complex).collect()
}

fn pair(v: &Value, path: &str) -> Result<Complex64> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::config(path, "expected [re, im]"))?;
    Ok(Complex64::new(
        as_f64(&arr[0], &format!("{path}[0]"))?,
        as_f64(&arr[1], &format!("{path}[1]"))?,
    ))
}

fn lambda_list(v: &Value, path: &str) -> Result<Vec<Vec<Complex64>>> {
    let arr = v.as_array().ok_or_else(|| Error::config(path, "expected a list of λ tuples"))?;
    arr.iter()
        .enumerate()
        .map(|(k, t)| {
            let p = format!("{path}[{k}]");
            match t {
                Value::String(s) => parse_lambda(s).map_err(|e| Error::config(&p, e.to_string())),
                Value::Array(items) => items.iter().enumerate().map(|(j, z)| pair(z, &format!("{p}[{j}]"))).collect(),
                _ => Err(Error::config(&p, "expected a string or a list of [re, im]")),
            }
        })
        .collect()
}

fn coefficient_map(v: &Value, n: usize, path: &str) -> Result<BTreeMap<Word, Complex64>> {
    let obj = object(v, path)?;
    obj.iter()
        .map(|(key, val)| {
            let p = format!("{path}.{key}");
            let w = Word::parse(key, n).map_err(|e| Error::config(&p, e.to_string()))?;
            Ok((w, pair(val, &p)?))
        })
        .collect()
}

fn coefficient_json(m: &BTreeMap<Word, Complex64>, n: usize) -> Value {
    Value::Object(
        m.iter()
            .map(|(w, z)| (w.format(n), Value::from(vec![z.re, z.im])))
            .collect(),
    )
}

/// Reads a configuration document.
pub fn parse_config(doc: &Value) -> Result<RunConfig> {
    let obj = object(doc, "$")?;
    let mut cfg = RunConfig::default();
    if obj.contains_key("family") {
        cfg.weights = Some(weights_from_json(doc, "$")?);
        return Ok(cfg);
    }
    reject_unknown(obj, &RUN_KEYS, "$")?;
    if let Some(w) = obj.get("weights") {
        cfg.weights = Some(weights_from_json(w, "$.weights")?);
    }
    if let Some(v) = obj.get("depth") {
        cfg.depth = as_usize(v, "$.depth")?;
    }
    if let Some(v) = obj.get("tol") {
        cfg.tol = as_f64(v, "$.tol")?;
    }
    if let Some(v) = obj.get("eps") {
        cfg.eps = as_f64(v, "$.eps")?;
    }
    if let Some(v) = obj.get("seed") {
        cfg.seed = v.as_u64().ok_or_else(|| Error::config("$.seed", "expected a non-negative integer"))?;
    }
    if let Some(v) = obj.get("growth_bound") {
        cfg.growth_bound = as_f64(v, "$.growth_bound")?;
    }
    if let Some(v) = obj.get("grid") {
        let s = v.as_str().ok_or_else(|| Error::config("$.grid", "expected \"lo:hi:step\""))?;
        cfg.grid = Some(GridSpec::parse(s).map_err(|e| Error::config("$.grid", e.to_string()))?);
    }
    if let Some(v) = obj.get("lambda") {
        cfg.lambdas = lambda_list(v, "$.lambda")?;
    }
    if let Some(v) = obj.get("k") {
        cfg.k = Some(as_usize(v, "$.k")?);
    }
    for (slot, key) in ["eta1", "eta2"].into_iter().enumerate() {
        if let Some(v) = obj.get(key) {
            cfg.eta[slot] = coefficient_map(v, 2, &format!("$.{key}"))?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(d) = o.depth {
            self.depth = d;
        }
        if let Some(t) = o.tol {
            self.tol = t;
        }
        if let Some(e) = o.eps {
            self.eps = e;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(g) = &o.grid {
            self.grid = Some(GridSpec::parse(g)?);
        }
        if let Some(l) = &o.lambda {
            self.lambdas = vec![parse_lambda(l)?];
        }
        if let Some(k) = o.k {
            self.k = Some(k);
        }
        if let Some(m) = &o.mode {
            self.mode = SpectraMode::parse(m)?;
        }
        if let Some(doc) = &o.coeffs {
            let n = self
                .weights
                .as_ref()
                .map(WeightSystem::n)
                .ok_or_else(|| Error::precondition("--coeffs needs a weight system from --config"))?;
            self.coeffs = Some(FourierElement::from_json(doc, n, "$coeffs")?);
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::config("$.depth", "depth must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::config("$.tol", "tolerance must be positive"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::config("$.eps", "eps must lie in (0, 1)"));
        }
        if !(self.growth_bound >= 0.0 && self.growth_bound.is_finite()) {
            return Err(Error::config("$.growth_bound", "expected a finite nonnegative number"));
        }
        if let Some(ws) = &self.weights {
            for (k, l) in self.lambdas.iter().enumerate() {
                if l.len() != ws.n() {
                    return Err(Error::config(
                        format!("$.lambda[{k}]"),
                        format!("expected {} components, got {}", ws.n(), l.len()),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The weight system, or a precondition error naming the command.
    pub fn require_weights(&self, command: &str) -> Result<&WeightSystem> {
        self.weights
            .as_ref()
            .ok_or_else(|| Error::precondition(format!("`{command}` needs a weight system (--config)")))
    }

    /// The fully resolved configuration, for embedding in reports.
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("weights".into(), self.weights.as_ref().map_or(Value::Null, weights_to_json));
        out.insert("depth".into(), self.depth.into());
        out.insert("tol".into(), self.tol.into());
        out.insert("eps".into(), self.eps.into());
        out.insert("seed".into(), self.seed.into());
        out.insert("growth_bound".into(), self.growth_bound.into());
        out.insert(
            "grid".into(),
            self.grid
                .map_or(Value::Null, |g| format!("{}:{}:{}", g.lo, g.hi, g.step).into()),
        );
        out.insert(
            "lambda".into(),
            Value::Array(
                self.lambdas
                    .iter()
                    .map(|l| Value::Array(l.iter().map(|z| Value::from(vec![z.re, z.im])).collect()))
                    .collect(),
            ),
        );
        out.insert("k".into(), self.k.map_or(Value::Null, Value::from));
        out.insert("mode".into(), self.mode.as_str().into());
        out.insert("coeffs".into(), self.coeffs.as_ref().map_or(Value::Null, FourierElement::to_json));
        out.insert("eta1".into(), coefficient_json(&self.eta[0], 2));
        out.insert("eta2".into(), coefficient_json(&self.eta[1], 2));
        Value::Object(out)
    }
}

//! JSON form of a weight system.
//!
//! ```json
//! {"n": 2, "family": "periodic", "period": 2,
//!  "remainders": {"1:e": 1, "2:e": 1, "1:1": 2, "2:1": 2, "1:2": 2, "2:2": 2}}
//! ```
//!
//! Families and their fields:
//! `constant` (`value`), `scaled` (`scales`), `finite_perturbation`
//! (`cutoff`, `table`, `tail`), `periodic` (`period`, `remainders`),
//! `two_letter_m` (`m`, `c`), and `right_weights` (`cutoff`, `table`,
//! `tail`, `depth`), which describes the right weights `μ` and is turned
//! into left weights tabulated to `depth`. Table keys are `"i:w"`.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::words::Word;

use super::{lambda_from_mu, Family, RightWeights, WeightSystem};

pub(crate) fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::config(path, "expected an object"))
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::config(format!("{path}.{key}"), "missing field"))
}

pub(crate) fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::config(format!("{path}.{key}"), "unknown field"));
        }
    }
    Ok(())
}

pub(crate) fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::config(path, "expected a number"))
}

pub(crate) fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::config(path, "expected a non-negative integer"))
}

fn positive_list(v: &Value, n: usize, path: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| Error::config(path, "expected an array"))?;
    if arr.len() != n {
        return Err(Error::config(path, format!("expected {n} entries, found {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(k, x)| as_f64(x, &format!("{path}[{k}]")))
        .collect()
}

/// Parses a key `"i:w"` into the letter and the word.
pub fn parse_key(key: &str, n: usize) -> Result<(u8, Word)> {
    let (i, w) = key
        .split_once(':')
        .ok_or_else(|| Error::domain(format!("table key {key:?} is not of the form \"i:w\"")))?;
    let i: u8 = i
        .parse()
        .map_err(|_| Error::domain(format!("table key {key:?} has a bad letter")))?;
    if i == 0 || i as usize > n {
        return Err(Error::domain(format!("table key {key:?} has a letter outside 1..={n}")));
    }
    Ok((i, Word::parse(w, n)?))
}

fn table(v: &Value, n: usize, path: &str) -> Result<Vec<((u8, Word), f64)>> {
    let obj = object(v, path)?;
    obj.iter()
        .map(|(k, x)| {
            let p = format!("{path}.{k}");
            let key = parse_key(k, n).map_err(|e| Error::config(&p, e.to_string()))?;
            Ok((key, as_f64(x, &p)?))
        })
        .collect()
}

fn in_path<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(path, other.to_string()),
    })
}

/// Reads a weight system; `path` prefixes error locations.
pub fn weights_from_json(v: &Value, path: &str) -> Result<WeightSystem> {
    let obj = object(v, path)?;
    let n = as_usize(field(obj, "n", path)?, &format!("{path}.n"))?;
    let family = field(obj, "family", path)?
        .as_str()
        .ok_or_else(|| Error::config(format!("{path}.family"), "expected a string"))?;
    let p = |k: &str| format!("{path}.{k}");
    match family {
        "constant" => {
            reject_unknown(obj, &["n", "family", "value"], path)?;
            let value = as_f64(field(obj, "value", path)?, &p("value"))?;
            in_path(WeightSystem::constant(n, value), path)
        }
        "scaled" => {
            reject_unknown(obj, &["n", "family", "scales"], path)?;
            let scales = positive_list(field(obj, "scales", path)?, n, &p("scales"))?;
            in_path(WeightSystem::scaled(scales), path)
        }
        "finite_perturbation" => {
            reject_unknown(obj, &["n", "family", "cutoff", "table", "tail"], path)?;
            let cutoff = as_usize(field(obj, "cutoff", path)?, &p("cutoff"))?;
            let entries = table(field(obj, "table", path)?, n, &p("table"))?;
            let tail = positive_list(field(obj, "tail", path)?, n, &p("tail"))?;
            in_path(WeightSystem::finite_perturbation(cutoff, entries, tail), path)
        }
        "periodic" => {
            reject_unknown(obj, &["n", "family", "period", "remainders"], path)?;
            let period = as_usize(field(obj, "period", path)?, &p("period"))?;
            let entries = table(field(obj, "remainders", path)?, n, &p("remainders"))?;
            in_path(WeightSystem::periodic(n, period, entries), path)
        }
        "two_letter_m" => {
            reject_unknown(obj, &["n", "family", "m", "c"], path)?;
            if n != 2 {
                return Err(Error::config(p("n"), "two_letter_m requires n = 2"));
            }
            let m = as_f64(field(obj, "m", path)?, &p("m"))?;
            let c = as_f64(field(obj, "c", path)?, &p("c"))?;
            in_path(WeightSystem::two_letter_m(m, c), path)
        }
        "right_weights" => {
            reject_unknown(obj, &["n", "family", "cutoff", "table", "tail", "depth"], path)?;
            let cutoff = as_usize(field(obj, "cutoff", path)?, &p("cutoff"))?;
            let entries = table(field(obj, "table", path)?, n, &p("table"))?;
            let tail = positive_list(field(obj, "tail", path)?, n, &p("tail"))?;
            let depth = as_usize(field(obj, "depth", path)?, &p("depth"))?;
            let rw = in_path(RightWeights::new(cutoff, entries, tail), path)?;
            in_path(lambda_from_mu(&rw, depth), path)
        }
        other => Err(Error::config(p("family"), format!("unknown family {other:?}"))),
    }
}

/// A JSON description of the system, for echoing in reports. Tabulated
/// systems list their table up to its depth.
pub fn weights_to_json(ws: &WeightSystem) -> Value {
    let n = ws.n();
    let listing = |depth: usize, only_letter_words: bool| {
        let mut m = Map::new();
        for ((i, w), v) in ws.table_up_to(depth) {
            if !only_letter_words || w.len() <= depth {
                m.insert(format!("{i}:{}", w.format(n)), Value::from(v));
            }
        }
        Value::Object(m)
    };
    let mut out = Map::new();
    out.insert("n".into(), n.into());
    out.insert("family".into(), ws.family_name().into());
    match ws.family() {
        Family::Constant { value } => {
            out.insert("value".into(), (*value).into());
        }
        Family::Scaled { scales } => {
            out.insert("scales".into(), scales.clone().into());
        }
        Family::FinitePerturbation { cutoff, tail, .. } => {
            out.insert("cutoff".into(), (*cutoff).into());
            out.insert("table".into(), listing(*cutoff, true));
            out.insert("tail".into(), tail.clone().into());
        }
        Family::Periodic { period, .. } => {
            out.insert("period".into(), (*period).into());
            out.insert("remainders".into(), listing(period - 1, true));
        }
        Family::TwoLetterM { m, c } => {
            out.insert("m".into(), (*m).into());
            out.insert("c".into(), (*c).into());
        }
        Family::Tabulated { depth, .. } => {
            out.insert("depth".into(), (*depth).into());
            out.insert("table".into(), listing(*depth, true));
        }
    }
    Value::Object(out)
}

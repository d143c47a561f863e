//! Flat `key = value` scenario files.
//!
//! ```text
//! # two balanced paths with a controlled flip
//! paths = 2
//! probabilities = [0.5, 0.5]
//! phases = [0, 0]
//! detector_dim = 2
//! detector_initial = 0
//! detector_unitary.0 = [[1, 0], [0, 1]]
//! detector_unitary.1 = [[0, 1], [1, 0]]
//! interference = [[1, 0], [0, 1]]
//! p = 0.5
//! theta = 0
//! kappa0 = [0.5, 0]
//! ```
//!
//! Values are JSON. A complex number is a real number or a `[re, im]` pair; a
//! matrix is an array of rows. `phases`, `detector_initial`, `theta` and
//! `kappa0` are optional.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{CliError, Result};
use switchlab_core::{ComplexMatrix, PathPreparation, SwitchScenario, WhichPathInteraction};

struct Entry {
    line: usize,
    value: Value,
}

fn is_known_key(key: &str) -> bool {
    matches!(
        key,
        "paths" | "probabilities" | "phases" | "detector_dim" | "detector_initial" | "interference" | "p" | "theta" | "kappa0"
    ) || key.strip_prefix("detector_unitary.").is_some_and(|i| i.parse::<usize>().is_ok())
}

fn tokenize(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| CliError::Parse { line, message: "expected `key = value`".into() })?;
        let key = key.trim();
        if !is_known_key(key) {
            return Err(CliError::Parse { line, message: format!("unknown key `{key}`") });
        }
        let value: Value = serde_json::from_str(value.trim())
            .map_err(|e| CliError::Parse { line, message: format!("value of `{key}`: {e}") })?;
        if out.insert(key.to_string(), Entry { line, value }).is_some() {
            return Err(CliError::Parse { line, message: format!("duplicate key `{key}`") });
        }
    }
    Ok(out)
}

fn bad(entry: &Entry, field: &str, what: &str) -> CliError {
    CliError::Parse { line: entry.line, message: format!("`{field}` must be {what}") }
}

fn get<'a>(map: &'a BTreeMap<String, Entry>, field: &str) -> Result<&'a Entry> {
    map.get(field).ok_or_else(|| CliError::field(field, "missing"))
}

fn as_real(v: &Value) -> Option<f64> {
    v.as_f64().filter(|x| x.is_finite())
}

fn as_count(entry: &Entry, field: &str) -> Result<usize> {
    entry.value.as_u64().map(|n| n as usize).ok_or_else(|| bad(entry, field, "a non-negative integer"))
}

fn as_real_entry(entry: &Entry, field: &str) -> Result<f64> {
    as_real(&entry.value).ok_or_else(|| bad(entry, field, "a finite number"))
}

fn as_complex(v: &Value) -> Option<Complex64> {
    if let Some(x) = as_real(v) {
        return Some(Complex64::new(x, 0.0));
    }
    match v.as_array()?.as_slice() {
        [re, im] => Some(Complex64::new(as_real(re)?, as_real(im)?)),
        _ => None,
    }
}

fn as_real_vec(entry: &Entry, field: &str) -> Result<Vec<f64>> {
    let arr = entry.value.as_array().ok_or_else(|| bad(entry, field, "an array of numbers"))?;
    arr.iter().map(|v| as_real(v).ok_or_else(|| bad(entry, field, "an array of numbers"))).collect()
}

fn as_matrix(entry: &Entry, field: &str, dim: usize) -> Result<ComplexMatrix> {
    let what = format!("a {dim}x{dim} array of rows");
    let rows = entry.value.as_array().ok_or_else(|| bad(entry, field, &what))?;
    if rows.len() != dim {
        return Err(bad(entry, field, &what));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == dim).ok_or_else(|| bad(entry, field, &what))?;
        for v in row {
            data.push(as_complex(v).ok_or_else(|| bad(entry, field, "made of numbers or [re, im] pairs"))?);
        }
    }
    Ok(ComplexMatrix::new(dim, dim, data)?)
}

/// Parses and validates a scenario file body.
pub fn parse_config_str(text: &str) -> Result<SwitchScenario> {
    let map = tokenize(text)?;
    let n = as_count(get(&map, "paths")?, "paths")?;
    let probabilities = as_real_vec(get(&map, "probabilities")?, "probabilities")?;
    let phases = match map.get("phases") {
        Some(e) => as_real_vec(e, "phases")?,
        None => vec![0.0; probabilities.len()],
    };
    if probabilities.len() != n {
        return Err(CliError::field("probabilities", format!("{} entries for {n} paths", probabilities.len())));
    }
    let d = as_count(get(&map, "detector_dim")?, "detector_dim")?;
    if d == 0 {
        return Err(CliError::field("detector_dim", "must be at least 1"));
    }
    let d0 = match map.get("detector_initial") {
        Some(e) => as_count(e, "detector_initial")?,
        None => 0,
    };
    let mut unitaries = Vec::with_capacity(n);
    for i in 0..n {
        let key = format!("detector_unitary.{i}");
        unitaries.push(as_matrix(get(&map, &key)?, &key, d)?);
    }
    if let Some((key, entry)) = map
        .iter()
        .find(|(k, _)| k.strip_prefix("detector_unitary.").and_then(|i| i.parse::<usize>().ok()).is_some_and(|i| i >= n))
    {
        return Err(CliError::Parse { line: entry.line, message: format!("`{key}` exceeds the {n} paths") });
    }
    let interference = as_matrix(get(&map, "interference")?, "interference", n)?;
    let p = as_real_entry(get(&map, "p")?, "p")?;
    let theta = match map.get("theta") {
        Some(e) => as_real_entry(e, "theta")?,
        None => 0.0,
    };
    let kappa0 = match map.get("kappa0") {
        Some(e) => Some(as_complex(&e.value).ok_or_else(|| bad(e, "kappa0", "a number or [re, im] pair"))?),
        None => None,
    };

    let preparation = PathPreparation::new(probabilities, phases)?;
    let interaction = WhichPathInteraction::new(d, unitaries, d0)?;
    Ok(SwitchScenario::new(preparation, interaction, interference, p, theta, kappa0)?)
}

pub fn parse_config_file(path: &Path) -> Result<SwitchScenario> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use switchlab_core::Error;

    const REALIZATION: &str = "\
# controlled flip
paths = 2
probabilities = [0.5, 0.5]
detector_dim = 2
detector_unitary.0 = [[1, 0], [0, 1]]
detector_unitary.1 = [[0, 1], [1, 0]]
interference = [[[1, 0], 0], [0, [1, 0]]]
p = 0.5
";

    #[test]
    fn parses_minimal_file() {
        let scn = parse_config_str(REALIZATION).unwrap();
        assert_eq!(scn.path_count(), 2);
        assert_eq!(scn.detector_dim(), 2);
        assert_eq!(scn.theta(), 0.0);
        assert!(scn.has_pure_order());
    }

    #[test]
    fn kappa_bound_is_validated() {
        let text = format!("{REALIZATION}kappa0 = [0.5, 0.1]\n");
        match parse_config_str(&text).unwrap_err() {
            CliError::Core(Error::Validation { field, .. }) => assert_eq!(field, "kappa0"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn reports_line_of_malformed_value() {
        let text = REALIZATION.replace("p = 0.5", "p = [0.5");
        match parse_config_str(&text).unwrap_err() {
            CliError::Parse { line, .. } => assert_eq!(line, 8),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(matches!(parse_config_str("colour = 1").unwrap_err(), CliError::Parse { line: 1, .. }));
        let dup = format!("{REALIZATION}p = 0.25\n");
        assert!(matches!(parse_config_str(&dup).unwrap_err(), CliError::Parse { line: 9, .. }));
    }

    #[test]
    fn missing_field_is_named() {
        let text = REALIZATION.replace("detector_unitary.1 = [[0, 1], [1, 0]]\n", "");
        match parse_config_str(&text).unwrap_err() {
            CliError::Field { field, .. } => assert_eq!(field, "detector_unitary.1"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn non_unitary_marking_is_rejected() {
        let text = REALIZATION.replace("[[0, 1], [1, 0]]", "[[0, 1], [1, 1]]");
        match parse_config_str(&text).unwrap_err() {
            CliError::Core(Error::Validation { field, .. }) => assert_eq!(field, "detector_unitary.1"),
            e => panic!("unexpected {e}"),
        }
    }
}

//! `--potential` specs:
//!
//! ```text
//! zero
//! well:a=<radius>
//! power:c=<coefficient>,k=<exponent>      V = c r^k
//! coulomb2d:Z=<strength>                  V = -Z/r
//! table:<path>                            CSV rows "r,V" ('#' comments)
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use radial_gate_core::origin::{PotentialSpec, TabulatedPotential};

use crate::error::CliError;

fn params<'a>(body: &'a str, allowed: &[&str]) -> Result<BTreeMap<&'a str, f64>, CliError> {
    let mut out = BTreeMap::new();
    for part in body.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            CliError::Args(format!("potential parameter '{part}' is not key=value"))
        })?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(CliError::Args(format!(
                "unknown potential parameter '{key}' (expected {})",
                allowed.join(", ")
            )));
        }
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Args(format!(
                "potential parameter {key}: '{value}' is not a number"
            ))
        })?;
        if out.insert(key, value).is_some() {
            return Err(CliError::Args(format!(
                "potential parameter '{key}' given twice"
            )));
        }
    }
    for key in allowed {
        if !out.contains_key(key) {
            return Err(CliError::Args(format!(
                "potential is missing parameter '{key}'"
            )));
        }
    }
    Ok(out)
}

pub fn parse(spec: &str) -> Result<PotentialSpec, CliError> {
    let spec = spec.trim();
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    let p = match kind {
        "zero" if body.is_empty() => PotentialSpec::Zero,
        "well" => PotentialSpec::well(params(body, &["a"])?["a"])?,
        "power" => {
            let p = params(body, &["c", "k"])?;
            PotentialSpec::power_law(p["c"], p["k"])?
        }
        "coulomb2d" => PotentialSpec::coulomb_2d(params(body, &["Z"])?["Z"])?,
        "table" if !body.is_empty() => PotentialSpec::Tabulated(read_table(Path::new(body))?),
        _ => {
            return Err(CliError::Args(format!(
                "unrecognised potential '{spec}' (zero | well:a= | power:c=,k= | coulomb2d:Z= | table:<path>)"
            )))
        }
    };
    Ok(p)
}

fn read_table(path: &Path) -> Result<TabulatedPotential, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let (mut r, mut v) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::Args(format!(
                "{} row {}: expected 'r,V'",
                path.display(),
                i + 1
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                CliError::Args(format!(
                    "{} row {}: '{s}' is not a number",
                    path.display(),
                    i + 1
                ))
            })
        };
        r.push(num(&record[0])?);
        v.push(num(&record[1])?);
    }
    Ok(TabulatedPotential::new(r, v)?)
}

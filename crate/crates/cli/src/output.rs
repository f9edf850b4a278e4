//! CSV and JSON emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::run::Row;
use crate::scenario::Format;
use crate::CliError;

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "CLICKSTAT_OUT_DIR";

pub const HEADER: [&str; 14] = [
    "grid_value",
    "set_id",
    "criterion",
    "value",
    "stderr",
    "verdict",
    "state",
    "model",
    "eta",
    "dark",
    "bins",
    "levels",
    "modes",
    "total_photons",
];

/// 17 significant digits; `nan`, `inf` and `-inf` spelled out.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn fields(r: &Row) -> Vec<String> {
    let opt = |v: Option<u32>| v.map(|b| b.to_string()).unwrap_or_default();
    vec![
        fmt_float(r.grid_value),
        r.set_id.clone(),
        r.criterion.name().to_string(),
        fmt_float(r.value),
        r.stderr.map(fmt_float).unwrap_or_default(),
        r.verdict.to_string(),
        r.state.clone(),
        r.model.clone(),
        fmt_float(r.eta),
        fmt_float(r.dark),
        opt(r.bins),
        opt(r.levels),
        r.modes.to_string(),
        r.total_photons.map(fmt_float).unwrap_or_default(),
    ]
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&fields(r).join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[Row]) -> String {
    let items: Vec<Value> = rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, Value> = HEADER
                .iter()
                .zip(fields(r))
                .map(|(k, v)| (k.to_string(), Value::String(v)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!(items)).expect("serializable rows");
    s.push('\n');
    s
}

/// Output directory: the environment override, else the scenario's path,
/// else `out`.
pub fn output_dir(configured: Option<&str>) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from(configured.unwrap_or("out")),
    }
}

/// Writes one file per `(set, criterion)`, rows in their given order.
pub fn write_grouped(dir: &Path, prefix: &str, rows: &[Row], format: Format) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut groups: BTreeMap<(String, &'static str), Vec<Row>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.set_id.clone(), r.criterion.name()))
            .or_default()
            .push(r.clone());
    }
    let mut paths = Vec::new();
    for ((set, crit), group) in groups {
        let set = if set == "-" { "all".to_string() } else { set };
        let (ext, body) = match format {
            Format::Csv => ("csv", to_csv(&group)),
            Format::Json => ("json", to_json(&group)),
        };
        let path = dir.join(format!("{prefix}_{set}_{crit}.{ext}"));
        fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        paths.push(path);
    }
    Ok(paths)
}

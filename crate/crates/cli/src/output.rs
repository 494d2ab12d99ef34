//! Results files and run manifests.

use std::path::{Path, PathBuf};

use qentangle_core::table::{Cell, Table};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) if x.is_finite() => json!(x),
        Cell::Num(_) | Cell::Empty => Value::Null,
        Cell::Int(i) => json!(i),
        Cell::Bool(b) => json!(b),
        Cell::Text(s) => json!(s),
    }
}

/// One JSON object per row, keyed by column name.
pub fn table_json(table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut m = Map::new();
            for (k, c) in table.header.iter().zip(row) {
                m.insert(k.clone(), cell_json(c));
            }
            Value::Object(m)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render(table: &Table, format: &str) -> String {
    match format {
        "json" => table_json(table),
        _ => table.to_csv(),
    }
}

/// `out` when set, otherwise `<command>.<format>` under `dir`.
pub fn results_path(cfg: &RunConfig, dir: &Path) -> PathBuf {
    match cfg.opt_text("out") {
        Some(p) => PathBuf::from(p),
        None => dir.join(format!("{}.{}", cfg.command.name(), cfg.text("format"))),
    }
}

/// The results path with `.manifest.json` appended.
pub fn manifest_path(results: &Path) -> PathBuf {
    let mut name = results.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    results.with_file_name(name)
}

/// Resolved config, toolkit version and run status.
pub fn manifest(cfg: &RunConfig, results: &Path, rows: usize, failure: Option<&str>) -> String {
    let file = results.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let v = json!({
        "tool": "qentangle",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.name(),
        "config": cfg.to_json(),
        "results": file,
        "rows": rows,
        "status": if failure.is_some() { "validation-failed" } else { "ok" },
        "failure": failure,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("manifest serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_rows_keep_columns_and_null_missing_cells() {
        let mut t = Table::new(&["b", "x", "ok"]);
        t.push(vec![Cell::Num(0.5), Cell::Empty, Cell::Bool(true)]);
        let v: Value = serde_json::from_str(&table_json(&t)).unwrap();
        assert_eq!(v, json!([{"b": 0.5, "x": null, "ok": true}]));
    }

    #[test]
    fn manifest_sits_next_to_results() {
        assert_eq!(manifest_path(Path::new("runs/chsh.csv")), PathBuf::from("runs/chsh.csv.manifest.json"));
    }
}

use std::fs;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// One CSV table with its JSON counterpart.
pub struct Report {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub data: Value,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Report {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            data: Value::Null,
            notes: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn with_data<T: Serialize>(mut self, data: &T) -> Result<Self> {
        self.data = serde_json::to_value(data)?;
        Ok(self)
    }

    pub fn csv_body(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| escape(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn fail_count(&self) -> usize {
        self.rows.iter().filter(|r| r.iter().any(|c| c == "FAIL")).count()
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Writes `<name>.csv` and `<name>.json` into the output directory and
/// returns the CSV body.
pub fn emit(cfg: &RunConfig, command: &str, report: &Report, started: Instant) -> Result<String> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let wall = started.elapsed().as_secs_f64();
    let hash = cfg.hash();
    let mut csv = format!(
        "# pilab {command}\n# config-hash: {hash}\n# config: {}\n# wall-time-s: {wall:.3}\n",
        serde_json::to_string(cfg)?
    );
    for n in &report.notes {
        csv.push_str(&format!("# note: {n}\n"));
    }
    let body = report.csv_body();
    csv.push_str(&body);
    let csv_path = cfg.out.join(format!("{}.csv", report.name));
    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| Value::Object(report.header.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect()))
        .collect();
    let doc = json!({
        "meta": {
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": cfg,
            "config_hash": hash,
            "wall_time_s": wall,
            "notes": report.notes,
        },
        "rows": rows,
        "data": report.data,
    });
    let json_path = cfg.out.join(format!("{}.json", report.name));
    fs::write(&json_path, serde_json::to_string_pretty(&doc)?).with_context(|| format!("writing {}", json_path.display()))?;
    Ok(body)
}

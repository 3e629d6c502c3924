//! CSV tables, run manifests and gnuplot recipes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::numerics::CdfTable;
use crate::study::StudyConfig;

pub const CSV_HEADER: &str = "value,cdf,series_label,unit";

/// Renders labelled CDFs as `value,cdf,series_label,unit` rows, one per
/// sample. Floats use Rust's shortest round-trip formatting, so identical
/// tables always give identical bytes.
pub fn cdf_csv(series: &[(String, &CdfTable)]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (label, table) in series {
        let unit = table.unit().label();
        for (value, p) in table.points() {
            writeln!(out, "{value},{p},{label},{unit}").expect("writing to a String");
        }
    }
    out
}

/// Parses a file produced by [`cdf_csv`] back into (value, cdf, label, unit).
pub fn read_cdf_csv(text: &str) -> Result<Vec<(f64, f64, String, String)>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("missing CSV header".into());
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(format!("row {}: expected 4 columns", i + 2));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 2));
            Ok((num(cols[0])?, num(cols[1])?, cols[2].to_string(), cols[3].to_string()))
        })
        .collect()
}

/// gnuplot script drawing every series of `csv_name` as a step CDF.
pub fn plot_recipe(csv_name: &str, labels: &[String], xlabel: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# columns: 1 value, 2 cdf, 3 series_label, 4 unit");
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set key left top");
    let _ = writeln!(out, "set xlabel '{xlabel}'");
    let _ = writeln!(out, "set ylabel 'CDF'");
    let _ = writeln!(out, "set yrange [0:1]");
    let _ = writeln!(out, "series = \"{}\"", labels.join(" "));
    let _ = writeln!(
        out,
        "plot for [s in series] '{csv_name}' every ::1 using 1:(strcol(3) eq s ? $2 : NaN) with steps title s"
    );
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    /// Seconds.
    pub wall_clock: f64,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: &StudyConfig, elapsed: Duration, outputs: &[PathBuf]) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            config_hash: config_hash(config),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            wall_clock: elapsed.as_secs_f64(),
            output_paths: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }
}

/// SHA-256 of the canonical JSON form of the resolved configuration. The
/// worker count is not part of it.
pub fn config_hash(config: &StudyConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Writes `<stem>.csv`, `<stem>.gp` and `<stem>.manifest.json` under `dir`.
pub fn write_outputs(
    dir: &Path,
    stem: &str,
    csv: &str,
    recipe: &str,
    manifest_for: impl FnOnce(&[PathBuf]) -> RunManifest,
) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let gp_path = dir.join(format!("{stem}.gp"));
    fs::write(&csv_path, csv)?;
    fs::write(&gp_path, recipe)?;
    let outputs = vec![csv_path, gp_path];
    let manifest = manifest_for(&outputs);
    let manifest_path = dir.join(format!("{stem}.manifest.json"));
    fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n",
    )?;
    let mut all = outputs;
    all.push(manifest_path);
    Ok(all)
}

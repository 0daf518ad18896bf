use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Status;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub file: String,
    pub dataset: String,
    pub status: Option<Status>,
    pub lane: Option<String>,
    pub secs: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub dataset: String,
    pub unknown: usize,
    pub not_euclidean: usize,
    pub euclidean: usize,
    pub errors: usize,
}

/// PrefLib files are named `<dataset>-<instance>.soc`; anything else is its own dataset.
pub fn dataset_of(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match stem.split_once('-') {
        Some((d, _)) => d.to_string(),
        None => stem,
    }
}

/// Per-dataset counts followed by a total row, as a Markdown table.
pub fn summarize(records: &[BatchRecord]) -> (Vec<DatasetRow>, String) {
    let mut by: BTreeMap<String, DatasetRow> = BTreeMap::new();
    for r in records {
        let row = by.entry(r.dataset.clone()).or_insert_with(|| DatasetRow {
            dataset: r.dataset.clone(),
            ..Default::default()
        });
        match r.status {
            Some(Status::Euclidean) => row.euclidean += 1,
            Some(Status::NotEuclidean) => row.not_euclidean += 1,
            Some(Status::Unknown) => row.unknown += 1,
            None => row.errors += 1,
        }
    }
    let rows: Vec<DatasetRow> = by.into_values().collect();
    let mut md = String::from("| dataset | unknown | not 2-Euclidean | 2-Euclidean | errors |\n");
    md.push_str("|---|---:|---:|---:|---:|\n");
    let mut total = DatasetRow {
        dataset: "total".into(),
        ..Default::default()
    };
    for r in &rows {
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} |",
            r.dataset, r.unknown, r.not_euclidean, r.euclidean, r.errors
        );
        total.unknown += r.unknown;
        total.not_euclidean += r.not_euclidean;
        total.euclidean += r.euclidean;
        total.errors += r.errors;
    }
    let _ = writeln!(
        md,
        "| total | {} | {} | {} | {} |",
        total.unknown, total.not_euclidean, total.euclidean, total.errors
    );
    (rows, md)
}

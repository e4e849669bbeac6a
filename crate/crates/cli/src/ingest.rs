//! CSV ingestion: a leading timestamp column followed by one numeric column
//! per series. Timestamps may be clock times, RFC 3339 timestamps, or bare
//! integers (seconds); they must land exactly on the tick grid. Empty cells
//! become NaN and are handled by the symbolization rule's NaN policy.

use std::collections::BTreeSet;
use std::path::Path;

use rtm_core::{TimeSeries, Tick};

use crate::config::{parse_time_text, seconds_to_ticks};
use crate::error::CliError;

/// Read one CSV file into per-column raw series.
pub fn read_csv(path: &Path, resolution_seconds: u64) -> Result<Vec<TimeSeries>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() < 2 {
        return Err(CliError::Parse(format!(
            "{}: need a timestamp column and at least one series column",
            path.display()
        )));
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_owned).collect();
    let mut columns: Vec<Vec<(Tick, f64)>> = vec![Vec::new(); names.len()];

    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let line = row_idx + 2; // 1-based, after the header
        if record.len() != headers.len() {
            return Err(CliError::Parse(format!(
                "{}:{line}: expected {} fields, found {}",
                path.display(),
                headers.len(),
                record.len()
            )));
        }
        let stamp = &record[0];
        let seconds = parse_time_text(stamp).ok_or_else(|| {
            CliError::Parse(format!(
                "{}:{line}: cannot parse timestamp {stamp:?}",
                path.display()
            ))
        })?;
        let tick = seconds_to_ticks(seconds, resolution_seconds, "timestamp")
            .map_err(|e| CliError::Parse(format!("{}:{line}: {e}", path.display())))?;
        for (col, cell) in record.iter().skip(1).enumerate() {
            let value = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse::<f64>().map_err(|_| {
                    CliError::Parse(format!(
                        "{}:{line}: column {:?} has a non-numeric value {cell:?}",
                        path.display(),
                        names[col]
                    ))
                })?
            };
            columns[col].push((tick, value));
        }
    }

    names
        .into_iter()
        .zip(columns)
        .map(|(name, samples)| {
            if samples.is_empty() {
                return Err(CliError::Parse(format!(
                    "{}: series {name:?} has no rows",
                    path.display()
                )));
            }
            TimeSeries::new(name, samples).map_err(CliError::from)
        })
        .collect()
}

/// Read several CSV files; series names must not repeat across files.
pub fn read_csv_files(paths: &[std::path::PathBuf], resolution_seconds: u64) -> Result<Vec<TimeSeries>, CliError> {
    let mut all = Vec::new();
    let mut seen = BTreeSet::new();
    for path in paths {
        for series in read_csv(path, resolution_seconds)? {
            if !seen.insert(series.name.clone()) {
                return Err(CliError::Config(format!(
                    "series {:?} appears in more than one input file",
                    series.name
                )));
            }
            all.push(series);
        }
    }
    Ok(all)
}

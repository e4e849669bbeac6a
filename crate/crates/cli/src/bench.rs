//! Pruning-mode sweep: mine the same database under every pruning mode,
//! check that all modes emit the same patterns, and report per-mode work.

use std::time::Instant;

use serde::Serialize;

use rtm_core::miner::{mine, MinedPattern, MiningConfig, PruningMode};
use rtm_core::oracle::diff_patterns;
use rtm_core::SequenceDatabase;

use crate::error::CliError;
use crate::memory;

/// One sweep row.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub mode: String,
    pub wall_ms: u128,
    /// Process peak RSS after the run, in KiB (high-water mark; grows
    /// monotonically across rows, so only the first row isolates one mode).
    pub peak_rss_kib: Option<u64>,
    pub patterns: usize,
    /// Total event combinations proposed across levels.
    pub groups_generated: usize,
    /// Total relation assignments whose support was computed.
    pub candidates_checked: usize,
}

/// Mine `db` once per pruning mode. Every mode must emit exactly the same
/// patterns; any divergence is an internal-consistency failure.
pub fn sweep(db: &SequenceDatabase, base: &MiningConfig) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::with_capacity(PruningMode::ALL_MODES.len());
    let mut reference: Option<(PruningMode, Vec<MinedPattern>)> = None;
    for mode in PruningMode::ALL_MODES {
        let cfg = MiningConfig {
            pruning: mode,
            // Witness collection costs the same in every mode; keep the
            // sweep about candidate work.
            emit_witnesses: false,
            keep_all_witnesses: false,
            ..base.clone()
        };
        let started = Instant::now();
        let outcome = mine(db, &cfg)?;
        let wall_ms = started.elapsed().as_millis();
        match &reference {
            Some((ref_mode, ref_patterns)) => {
                let diffs = diff_patterns(ref_patterns, &outcome.patterns);
                if !diffs.is_empty() {
                    return Err(CliError::ModeMismatch {
                        left: ref_mode.name().to_owned(),
                        right: mode.name().to_owned(),
                        diffs,
                    });
                }
            }
            None => reference = Some((mode, outcome.patterns.clone())),
        }
        rows.push(BenchRow {
            mode: mode.name().to_owned(),
            wall_ms,
            peak_rss_kib: memory::peak_rss_kib(),
            patterns: outcome.patterns.len(),
            groups_generated: outcome.levels.iter().map(|l| l.groups_generated).sum(),
            candidates_checked: outcome.levels.iter().map(|l| l.candidates_checked).sum(),
        });
    }
    Ok(rows)
}

/// Plain-text table for the terminal.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<8} {:>9} {:>10} {:>9} {:>11} {:>13}\n",
        "mode", "wall_ms", "rss_kib", "patterns", "groups", "candidates"
    ));
    for row in rows {
        let rss = row
            .peak_rss_kib
            .map(|k| k.to_string())
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<8} {:>9} {:>10} {:>9} {:>11} {:>13}\n",
            row.mode, row.wall_ms, rss, row.patterns, row.groups_generated, row.candidates_checked
        ));
    }
    out
}

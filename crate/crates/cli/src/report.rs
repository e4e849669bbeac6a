//! Report rendering. A report is a line stream: one line per single event,
//! one per mined pattern (sorted by level, then canonical key), one metrics
//! line, and one closing timing line. Every line except the timing line is a
//! pure function of the input data and configuration, so two runs with the
//! same config and seed produce byte-identical reports once the timing line
//! is stripped (see [`strip_volatile`]).

use serde::Serialize;

use rtm_core::miner::{LevelStats, MinedPattern, MiningConfig, MiningOutcome, SingleEvent};
use rtm_core::{SeqId, SequenceDatabase};

use crate::config::{ReportFormat, RunConfig};
use crate::error::CliError;

/// Volatile run measurements; these land only on the timing line.
#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub wall_ms: u128,
    /// Process peak RSS in KiB (high-water mark, i.e. an upper estimate).
    pub peak_rss_kib: Option<u64>,
    pub finished_at: String,
}

/// Resolved parameters echoed into the metrics line.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub delta: f64,
    pub epsilon: i64,
    pub d_overlap: i64,
    pub max_events: Option<usize>,
    pub pruning: String,
    pub strict_siblings: bool,
    pub threads: usize,
    pub seed: Option<u64>,
    pub resolution_seconds: u64,
}

impl ConfigEcho {
    pub fn new(run: &RunConfig, mining: &MiningConfig, threads: usize) -> Self {
        ConfigEcho {
            sigma_min: mining.sigma_min,
            sigma_max: mining.sigma_max,
            delta: mining.delta,
            epsilon: mining.relation.epsilon(),
            d_overlap: mining.relation.d_overlap(),
            max_events: mining.max_events,
            pruning: mining.pruning.name().to_owned(),
            strict_siblings: mining.strict_siblings,
            threads,
            seed: run.seed,
            resolution_seconds: run.resolution_seconds,
        }
    }
}

#[derive(Serialize)]
struct SingleLine<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    level: usize,
    event: &'a str,
    support: usize,
    fraction: f64,
}

#[derive(Serialize)]
struct WitnessEntry {
    sequence: SeqId,
    /// Instance bindings: per tuple, one `[[xs, xe], [ys, ye]]` pair per
    /// relation triple in canonical order.
    tuples: Vec<Vec<[[i64; 2]; 2]>>,
}

#[derive(Serialize)]
struct PatternLine<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    level: usize,
    key: String,
    events: Vec<&'a str>,
    relations: Vec<char>,
    glyphs: String,
    support: usize,
    fraction: f64,
    confidence: f64,
    sequences: &'a [SeqId],
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<WitnessEntry>>,
}

#[derive(Serialize)]
struct TimingLine<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(flatten)]
    timing: &'a Timing,
}

// LevelStats lives in the core crate, which stays serde-free for its
// algorithmic types; mirror it for serialization.
#[derive(Serialize)]
#[serde(remote = "LevelStats")]
struct LevelStatsDef {
    level: usize,
    pool_size: usize,
    groups_generated: usize,
    groups_surviving: usize,
    candidates_checked: usize,
    patterns_stored: usize,
    patterns_emitted: usize,
}

fn witness_entries(pattern: &MinedPattern) -> Option<Vec<WitnessEntry>> {
    pattern.witnesses.as_ref().map(|per_seq| {
        pattern
            .sequences
            .iter()
            .zip(per_seq)
            .map(|(&sequence, tuples)| WitnessEntry {
                sequence,
                tuples: tuples
                    .iter()
                    .map(|tuple| {
                        tuple
                            .iter()
                            .map(|(x, y)| [[x.start(), x.end()], [y.start(), y.end()]])
                            .collect()
                    })
                    .collect(),
            })
            .collect()
    })
}

fn single_line(event: &SingleEvent) -> SingleLine<'_> {
    SingleLine {
        kind: "single",
        level: 1,
        event: event.symbol.label(),
        support: event.support,
        fraction: event.fraction,
    }
}

fn pattern_line(mined: &MinedPattern) -> PatternLine<'_> {
    PatternLine {
        kind: "pattern",
        level: mined.pattern.len(),
        key: mined.pattern.canonical_key(),
        events: mined.pattern.events().iter().map(|s| s.label()).collect(),
        relations: mined.pattern.relations().iter().map(|r| r.code()).collect(),
        glyphs: mined.pattern.display_glyphs(),
        support: mined.support,
        fraction: mined.fraction,
        confidence: mined.confidence,
        sequences: &mined.sequences,
        witnesses: witness_entries(mined),
    }
}

/// Render the full report in the requested format.
pub fn render(
    db: &SequenceDatabase,
    outcome: &MiningOutcome,
    echo: &ConfigEcho,
    timing: &Timing,
    format: ReportFormat,
) -> Result<String, CliError> {
    match format {
        ReportFormat::Jsonl => render_jsonl(db, outcome, echo, timing),
        ReportFormat::Tsv => render_tsv(db, outcome, echo, timing),
    }
}

fn metrics_json(db: &SequenceDatabase, outcome: &MiningOutcome, echo: &ConfigEcho) -> Result<String, CliError> {
    // Serialize levels through the local mirror.
    #[derive(Serialize)]
    struct Wrap<'a>(#[serde(with = "LevelStatsDef")] &'a LevelStats);
    let levels: Vec<serde_json::Value> = outcome
        .levels
        .iter()
        .map(|l| serde_json::to_value(Wrap(l)))
        .collect::<Result<_, _>>()?;
    let line = serde_json::json!({
        "type": "metrics",
        "sequences": db.len(),
        "alphabet": db.alphabet.len(),
        "single_events": outcome.single_events.len(),
        "patterns": outcome.patterns.len(),
        "levels": levels,
        "config": serde_json::to_value(echo)?,
    });
    Ok(serde_json::to_string(&line)?)
}

fn render_jsonl(
    db: &SequenceDatabase,
    outcome: &MiningOutcome,
    echo: &ConfigEcho,
    timing: &Timing,
) -> Result<String, CliError> {
    let mut out = String::new();
    for event in &outcome.single_events {
        out.push_str(&serde_json::to_string(&single_line(event))?);
        out.push('\n');
    }
    for mined in &outcome.patterns {
        out.push_str(&serde_json::to_string(&pattern_line(mined))?);
        out.push('\n');
    }
    out.push_str(&metrics_json(db, outcome, echo)?);
    out.push('\n');
    out.push_str(&serde_json::to_string(&TimingLine {
        kind: "timing",
        timing,
    })?);
    out.push('\n');
    Ok(out)
}

fn tsv_field(s: &str) -> String {
    // Labels cannot contain whitespace, keys use single spaces; tabs and
    // newlines cannot occur, so TSV needs no quoting.
    debug_assert!(!s.contains('\t') && !s.contains('\n'));
    s.to_owned()
}

fn render_tsv(
    db: &SequenceDatabase,
    outcome: &MiningOutcome,
    echo: &ConfigEcho,
    timing: &Timing,
) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str("type\tlevel\tkey\tglyphs\tsupport\tfraction\tconfidence\tsequences\n");
    for event in &outcome.single_events {
        out.push_str(&format!(
            "single\t1\t{}\t{}\t{}\t{}\t\t\n",
            tsv_field(event.symbol.label()),
            tsv_field(event.symbol.label()),
            event.support,
            event.fraction,
        ));
    }
    for mined in &outcome.patterns {
        let seqs = mined
            .sequences
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "pattern\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            mined.pattern.len(),
            tsv_field(&mined.pattern.canonical_key()),
            tsv_field(&mined.pattern.display_glyphs()),
            mined.support,
            mined.fraction,
            mined.confidence,
            seqs,
        ));
    }
    out.push_str("# metrics ");
    out.push_str(&metrics_json(db, outcome, echo)?);
    out.push('\n');
    out.push_str("# timing ");
    out.push_str(&serde_json::to_string(&TimingLine {
        kind: "timing",
        timing,
    })?);
    out.push('\n');
    Ok(out)
}

/// Drop the volatile timing line so reports can be compared byte-for-byte.
pub fn strip_volatile(report: &str) -> String {
    report
        .lines()
        .filter(|line| {
            if line.starts_with("# timing ") {
                return false;
            }
            if line.starts_with('{') {
                if let Ok(value) = serde_json::from_str::<serde_json::Value>(line) {
                    return value.get("type").and_then(|t| t.as_str()) != Some("timing");
                }
            }
            true
        })
        .map(|line| format!("{line}\n"))
        .collect()
}

/// Short human summary for the terminal.
pub fn human_summary(db: &SequenceDatabase, outcome: &MiningOutcome, timing: &Timing) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "sequences: {}   alphabet: {}   single events in band: {}\n",
        db.len(),
        db.alphabet.len(),
        outcome.single_events.len()
    ));
    let max_level = outcome.patterns.iter().map(|p| p.pattern.len()).max();
    match max_level {
        Some(level) => out.push_str(&format!(
            "patterns: {} (up to {} events)\n",
            outcome.patterns.len(),
            level
        )),
        None => out.push_str("patterns: 0\n"),
    }
    const SHOWN: usize = 20;
    for mined in outcome.patterns.iter().take(SHOWN) {
        out.push_str(&format!(
            "  {}   support {}/{} ({:.3})   confidence {:.3}\n",
            mined.pattern.display_glyphs(),
            mined.support,
            db.len(),
            mined.fraction,
            mined.confidence,
        ));
    }
    if outcome.patterns.len() > SHOWN {
        out.push_str(&format!("  ... {} more\n", outcome.patterns.len() - SHOWN));
    }
    match timing.peak_rss_kib {
        Some(kib) => out.push_str(&format!(
            "wall: {} ms   peak rss: ~{} KiB (process high-water mark)\n",
            timing.wall_ms, kib
        )),
        None => out.push_str(&format!("wall: {} ms\n", timing.wall_ms)),
    }
    out
}

//! Run orchestration: assemble the sequence database from the configured
//! input, mine it, optionally cross-check against the exhaustive miner, and
//! render the report.

use std::time::Instant;

use rtm_core::miner::{mine, MiningOutcome};
use rtm_core::oracle::{diff_patterns, oracle_mine};
use rtm_core::transform::{windowed_sequence_db, Bin, NanPolicy, SymbolizationRule};
use rtm_core::{Alphabet, SequenceDatabase, SymbolicSeries};

use crate::config::{InputSpec, NanSpec, RuleSpec, RunConfig};
use crate::error::CliError;
use crate::report::{self, ConfigEcho, Timing};
use crate::synth::PlantedPattern;
use crate::{dbfile, ingest, memory, synth};

/// Everything a run produces. Writing the report to its destination is the
/// caller's job; side outputs (`database_out`, `dump_structures`) are written
/// here because they are part of the configured run.
#[derive(Debug)]
pub struct RunOutput {
    pub db: SequenceDatabase,
    pub outcome: MiningOutcome,
    pub report: String,
    pub summary: String,
    /// Ground truth when the input was synthetic.
    pub planted: Vec<PlantedPattern>,
}

fn rule_from_spec(spec: &RuleSpec) -> SymbolizationRule {
    SymbolizationRule {
        series: spec.series.clone(),
        prefix: spec.prefix.clone(),
        bins: spec
            .bins
            .iter()
            .map(|b| Bin {
                upper: b.upper,
                label: b.label.clone(),
            })
            .collect(),
        nan_policy: match spec.nan {
            NanSpec::Reject => NanPolicy::Reject,
            NanSpec::CarryForward => NanPolicy::CarryForward,
        },
    }
}

/// Default rule for a series without one: 0.5 threshold, labels
/// `{series}Off` / `{series}On`.
fn default_rule(series: &str) -> Result<SymbolizationRule, CliError> {
    Ok(SymbolizationRule::threshold(series, 0.5, "Off", "On")?)
}

fn assemble_csv(config: &RunConfig) -> Result<(SequenceDatabase, Vec<PlantedPattern>), CliError> {
    let InputSpec::Csv { paths } = &config.input else {
        unreachable!("caller checked the input kind");
    };
    let series = ingest::read_csv_files(paths, config.resolution_seconds)?;
    let mut alphabet = Alphabet::new();
    let mut symbolic: Vec<SymbolicSeries> = Vec::with_capacity(series.len());
    for ts in &series {
        let rule = match config.symbolization.iter().find(|r| r.series == ts.name) {
            Some(spec) => rule_from_spec(spec),
            None => default_rule(&ts.name)?,
        };
        symbolic.push(rtm_core::symbolize(ts, &rule, &mut alphabet)?);
    }
    for rule in &config.symbolization {
        if !series.iter().any(|ts| ts.name == rule.series) {
            return Err(CliError::Config(format!(
                "symbolization rule for unknown series {:?}",
                rule.series
            )));
        }
    }
    let window = config
        .window
        .as_ref()
        .expect("validated: csv input has a window")
        .resolve(config.resolution_seconds, "window")?;
    let origin = match &config.origin {
        Some(o) => o.resolve(config.resolution_seconds, "origin")?,
        None => 0,
    };
    let db = windowed_sequence_db(
        &symbolic,
        window,
        origin,
        alphabet,
        config.resolution_seconds,
    )?;
    Ok((db, Vec::new()))
}

/// Build the sequence database (and synthetic ground truth, when any) for a
/// run configuration without mining it.
pub fn assemble(config: &RunConfig) -> Result<(SequenceDatabase, Vec<PlantedPattern>), CliError> {
    match &config.input {
        InputSpec::Csv { .. } => assemble_csv(config),
        InputSpec::Synthetic(spec) => {
            let relation = config.mining_config()?.relation;
            let generated = synth::generate(spec, config.seed.unwrap_or(0), &relation)?;
            Ok((generated.db, generated.planted))
        }
        InputSpec::Database { path } => Ok((dbfile::load(path)?, Vec::new())),
    }
}

fn dump_structures(outcome: &MiningOutcome, path: &std::path::Path) -> Result<(), CliError> {
    let dump = serde_json::json!({
        "level1": outcome.hlh1.dump(),
        "levels": outcome.structures.iter().map(|s| s.dump()).collect::<Vec<_>>(),
    });
    std::fs::write(path, serde_json::to_string_pretty(&dump)?)?;
    Ok(())
}

/// Execute a validated run configuration end to end.
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let mining = config.mining_config()?;
    let threads = config.threads.unwrap_or(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(format!("cannot build thread pool: {e}")))?;

    let (db, planted) = assemble(config)?;
    if let Some(path) = &config.database_out {
        dbfile::save(&db, path)?;
    }

    let started = Instant::now();
    let outcome = pool.install(|| mine(&db, &mining))?;
    let wall_ms = started.elapsed().as_millis();

    if config.oracle_check {
        let expected = oracle_mine(&db, &mining, u128::from(config.oracle_budget))?;
        let diffs = diff_patterns(&outcome.patterns, &expected);
        if !diffs.is_empty() {
            return Err(CliError::OracleMismatch(diffs));
        }
    }

    if let Some(path) = &config.dump_structures {
        dump_structures(&outcome, path)?;
    }

    let timing = Timing {
        wall_ms,
        peak_rss_kib: memory::peak_rss_kib(),
        finished_at: chrono::Utc::now().to_rfc3339(),
    };
    let echo = ConfigEcho::new(config, &mining, threads);
    let report = report::render(&db, &outcome, &echo, &timing, config.format)?;
    let summary = report::human_summary(&db, &outcome, &timing);

    Ok(RunOutput {
        db,
        outcome,
        report,
        summary,
        planted,
    })
}

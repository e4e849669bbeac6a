//! Run configuration: a single JSON document (or CLI flags merged on top)
//! describing where the data comes from, how it is symbolized and windowed,
//! and which mining parameters apply.

use std::path::PathBuf;
use std::str::FromStr;

use chrono::{DateTime, NaiveTime};
use serde::{Deserialize, Serialize};

use rtm_core::miner::{MiningConfig, PruningMode};
use rtm_core::{RelationConfig, Tick};

use crate::error::CliError;
use crate::synth::SyntheticSpec;

fn default_resolution() -> u64 {
    60
}

fn default_sigma_min() -> f64 {
    0.1
}

fn default_sigma_max() -> f64 {
    0.5
}

fn default_delta() -> f64 {
    0.5
}

fn default_d_overlap() -> i64 {
    1
}

fn default_max_events() -> Option<usize> {
    Some(5)
}

fn default_oracle_budget() -> u64 {
    1 << 26
}

/// Where the event instances come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    /// CSV files with a leading timestamp column and one numeric column per series.
    Csv { paths: Vec<PathBuf> },
    /// A seeded generator that plants patterns into random noise.
    Synthetic(SyntheticSpec),
    /// A previously saved sequence database (JSON).
    Database { path: PathBuf },
}

/// One discretization bin: samples strictly below `upper` (and not claimed by an
/// earlier bin) map to `label`. The last bin must leave `upper` unset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinSpec {
    #[serde(default)]
    pub upper: Option<f64>,
    pub label: String,
}

/// How to treat NaN samples (empty CSV cells become NaN).
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NanSpec {
    #[default]
    Reject,
    CarryForward,
}

/// Per-series symbolization rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleSpec {
    pub series: String,
    /// Symbol label prefix; defaults to the series name.
    #[serde(default)]
    pub prefix: Option<String>,
    pub bins: Vec<BinSpec>,
    #[serde(default)]
    pub nan: NanSpec,
}

/// A point or span on the tick axis. JSON numbers are ticks; strings are
/// parsed as durations ("35m"), clock times ("07:00"), or timestamps
/// (RFC 3339) and converted at the configured resolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TickOrText {
    Ticks(i64),
    Text(String),
}

impl TickOrText {
    /// Resolve to ticks. `what` names the field for error messages.
    pub fn resolve(&self, resolution_seconds: u64, what: &str) -> Result<Tick, CliError> {
        match self {
            TickOrText::Ticks(t) => Ok(*t),
            TickOrText::Text(s) => {
                let seconds = parse_time_text(s)
                    .ok_or_else(|| CliError::Parse(format!("{what}: cannot parse {s:?}")))?;
                seconds_to_ticks(seconds, resolution_seconds, what)
            }
        }
    }
}

/// Mining parameters as they appear in a config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiningSpec {
    #[serde(default = "default_sigma_min")]
    pub sigma_min: f64,
    #[serde(default = "default_sigma_max")]
    pub sigma_max: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub epsilon: i64,
    #[serde(default = "default_d_overlap")]
    pub d_overlap: i64,
    #[serde(default = "default_max_events")]
    pub max_events: Option<usize>,
    #[serde(default)]
    pub pruning: PruningSpec,
    #[serde(default)]
    pub strict_siblings: bool,
}

impl Default for MiningSpec {
    fn default() -> Self {
        MiningSpec {
            sigma_min: default_sigma_min(),
            sigma_max: default_sigma_max(),
            delta: default_delta(),
            epsilon: 0,
            d_overlap: default_d_overlap(),
            max_events: default_max_events(),
            pruning: PruningSpec::default(),
            strict_siblings: false,
        }
    }
}

/// Pruning mode as a config/CLI token: "none", "apriori", "trans", or "all".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruningSpec {
    None,
    Apriori,
    Trans,
    #[default]
    All,
}

impl From<PruningSpec> for PruningMode {
    fn from(spec: PruningSpec) -> PruningMode {
        match spec {
            PruningSpec::None => PruningMode::NoPrune,
            PruningSpec::Apriori => PruningMode::Apriori,
            PruningSpec::Trans => PruningMode::Trans,
            PruningSpec::All => PruningMode::All,
        }
    }
}

impl FromStr for PruningSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(PruningSpec::None),
            "apriori" => Ok(PruningSpec::Apriori),
            "trans" => Ok(PruningSpec::Trans),
            "all" => Ok(PruningSpec::All),
            other => Err(format!(
                "unknown pruning mode {other:?} (expected none, apriori, trans, or all)"
            )),
        }
    }
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Jsonl,
    Tsv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(ReportFormat::Jsonl),
            "tsv" => Ok(ReportFormat::Tsv),
            other => Err(format!("unknown format {other:?} (expected jsonl or tsv)")),
        }
    }
}

/// The full run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: InputSpec,
    /// Seconds per tick for timestamp/window conversions.
    #[serde(default = "default_resolution")]
    pub resolution_seconds: u64,
    /// Per-series rules; a CSV series without one gets a 0.5 threshold
    /// rule with labels Off/On prefixed by the series name.
    #[serde(default)]
    pub symbolization: Vec<RuleSpec>,
    /// Window width; required for CSV input.
    #[serde(default)]
    pub window: Option<TickOrText>,
    /// Start of the first window; defaults to tick 0.
    #[serde(default)]
    pub origin: Option<TickOrText>,
    #[serde(default)]
    pub mining: MiningSpec,
    /// Report destination; stdout when unset.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
    /// Re-mine with the exhaustive checker and fail on any divergence.
    #[serde(default)]
    pub oracle_check: bool,
    /// Work bound for the exhaustive checker (symbols^cap * sequences).
    #[serde(default = "default_oracle_budget")]
    pub oracle_budget: u64,
    /// Seed for synthetic input.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Save the assembled sequence database here before mining.
    #[serde(default)]
    pub database_out: Option<PathBuf>,
    #[serde(default)]
    pub emit_witnesses: bool,
    #[serde(default)]
    pub keep_all_witnesses: bool,
    /// Worker threads; defaults to 1 so runs are reproducible by default.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Dump the lookup structures (levels 1..k) as JSON to this path.
    #[serde(default)]
    pub dump_structures: Option<PathBuf>,
}

impl RunConfig {
    /// Parse a JSON config document.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load from a file. Relative input paths inside the document are taken
    /// relative to the config file's directory.
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_json(&text)?;
        if let Some(base) = path.parent() {
            cfg.rebase_inputs(base);
        }
        Ok(cfg)
    }

    /// Resolve relative input paths against `base`. Output paths are left
    /// alone: they are conventionally relative to the working directory.
    pub fn rebase_inputs(&mut self, base: &std::path::Path) {
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.input {
            InputSpec::Csv { paths } => paths.iter_mut().for_each(rebase),
            InputSpec::Database { path } => rebase(path),
            InputSpec::Synthetic(_) => {}
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.resolution_seconds == 0 {
            return Err(CliError::Config("resolution_seconds must be positive".into()));
        }
        if let Some(threads) = self.threads {
            if threads == 0 {
                return Err(CliError::Config("threads must be positive".into()));
            }
        }
        if matches!(self.input, InputSpec::Csv { .. }) && self.window.is_none() {
            return Err(CliError::Config("csv input requires a window".into()));
        }
        if let InputSpec::Csv { paths } = &self.input {
            if paths.is_empty() {
                return Err(CliError::Config("csv input requires at least one path".into()));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for rule in &self.symbolization {
            if !seen.insert(rule.series.as_str()) {
                return Err(CliError::Config(format!(
                    "duplicate symbolization rule for series {:?}",
                    rule.series
                )));
            }
        }
        self.mining_config()?.validate()?;
        Ok(())
    }

    /// The miner-facing view of the mining parameters.
    pub fn mining_config(&self) -> Result<MiningConfig, CliError> {
        let m = &self.mining;
        let relation = RelationConfig::new(m.epsilon, m.d_overlap)?;
        Ok(MiningConfig {
            sigma_min: m.sigma_min,
            sigma_max: m.sigma_max,
            delta: m.delta,
            relation,
            max_events: m.max_events,
            pruning: m.pruning.into(),
            strict_siblings: m.strict_siblings,
            emit_witnesses: self.emit_witnesses,
            keep_all_witnesses: self.keep_all_witnesses,
        })
    }
}

/// Parse a time text into seconds. Accepts durations ("90s", "35m", "2h",
/// "1d"), clock times ("07:00", "07:00:30"), RFC 3339 timestamps
/// (as seconds since the Unix epoch), and bare integers (seconds).
pub fn parse_time_text(s: &str) -> Option<i64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Ok(n) = s.parse::<i64>() {
        return Some(n);
    }
    if let Some((value, unit)) = s.split_at_checked(s.len() - 1) {
        let scale = match unit {
            "s" => Some(1),
            "m" => Some(60),
            "h" => Some(3600),
            "d" => Some(86_400),
            _ => None,
        };
        if let (Some(scale), Ok(n)) = (scale, value.parse::<i64>()) {
            return n.checked_mul(scale);
        }
    }
    for fmt in ["%H:%M:%S", "%H:%M"] {
        if let Ok(t) = NaiveTime::parse_from_str(s, fmt) {
            use chrono::Timelike;
            return Some(i64::from(t.num_seconds_from_midnight()));
        }
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.timestamp());
    }
    None
}

/// Convert seconds to ticks, requiring exact divisibility so no instant
/// silently shifts off the grid.
pub fn seconds_to_ticks(seconds: i64, resolution_seconds: u64, what: &str) -> Result<Tick, CliError> {
    let res = i64::try_from(resolution_seconds)
        .map_err(|_| CliError::Config(format!("{what}: resolution {resolution_seconds} overflows")))?;
    if seconds % res != 0 {
        return Err(CliError::Parse(format!(
            "{what}: {seconds}s is not a multiple of the {res}s resolution"
        )));
    }
    Ok(seconds / res)
}

//! Seeded synthetic corpora: random background noise with optional planted
//! interval arrangements at exact sequence supports. Planted labels never
//! appear in the noise alphabet, so a planted arrangement occurs in exactly
//! the sequences chosen for it — which the generator re-verifies by direct
//! scan before handing the database out.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rtm_core::{
    classify_intervals, classify_relation, Alphabet, EventInstance, Interval, Relation,
    RelationConfig, SeqId, SequenceDatabase, Symbol, TemporalPattern, TemporalSequence, Tick,
};

use crate::error::CliError;

fn default_noise_per_sequence() -> usize {
    30
}

fn default_span() -> i64 {
    1000
}

fn default_max_duration() -> i64 {
    20
}

/// One arrangement to plant: parallel `labels`/`intervals` describe the
/// template (starts must be non-decreasing and every ordered pair must
/// classify under the run's relation parameters); `support` is the exact
/// number of sequences that receive a randomly translated copy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub labels: Vec<String>,
    pub intervals: Vec<(Tick, Tick)>,
    pub support: usize,
}

/// Synthetic corpus shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub sequences: usize,
    /// Size of the background alphabet (`bg00`, `bg01`, ...).
    pub symbols: usize,
    #[serde(default = "default_noise_per_sequence")]
    pub noise_per_sequence: usize,
    /// Every instance fits inside `[0, span]`.
    #[serde(default = "default_span")]
    pub span: Tick,
    /// Background instance durations are uniform in `1..=max_duration`.
    #[serde(default = "default_max_duration")]
    pub max_duration: Tick,
    #[serde(default)]
    pub planted: Vec<PlantedSpec>,
}

/// A planted arrangement after generation: the pattern it realizes and the
/// sequences that received it.
#[derive(Debug, Clone)]
pub struct PlantedPattern {
    pub pattern: TemporalPattern,
    pub sequences: Vec<SeqId>,
}

impl PlantedPattern {
    pub fn support(&self) -> usize {
        self.sequences.len()
    }
}

/// A generated corpus plus the ground truth that went into it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub db: SequenceDatabase,
    pub planted: Vec<PlantedPattern>,
}

impl SyntheticSpec {
    fn validate(&self, relation: &RelationConfig) -> Result<(), CliError> {
        if self.sequences == 0 {
            return Err(CliError::Config("synthetic: sequences must be positive".into()));
        }
        if self.noise_per_sequence > 0 && self.symbols == 0 {
            return Err(CliError::Config(
                "synthetic: background noise needs a non-empty alphabet".into(),
            ));
        }
        if self.span < 2 {
            return Err(CliError::Config("synthetic: span must be at least 2".into()));
        }
        if self.max_duration < 1 || self.max_duration > self.span {
            return Err(CliError::Config(format!(
                "synthetic: max_duration must lie in 1..={}, got {}",
                self.span, self.max_duration
            )));
        }
        for (index, plant) in self.planted.iter().enumerate() {
            plant.validate(index, self, relation)?;
        }
        // Labels may repeat inside one arrangement (repeated events are
        // legitimate) but not across arrangements: sharing would break the
        // exact-support guarantee.
        for (i, a) in self.planted.iter().enumerate() {
            for b in &self.planted[i + 1..] {
                if let Some(shared) = a.labels.iter().find(|l| b.labels.contains(l)) {
                    return Err(CliError::Config(format!(
                        "synthetic: label {shared:?} appears in more than one planted arrangement"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl PlantedSpec {
    fn validate(
        &self,
        index: usize,
        spec: &SyntheticSpec,
        relation: &RelationConfig,
    ) -> Result<(), CliError> {
        let at = format!("synthetic: planted[{index}]");
        if self.labels.len() != self.intervals.len() {
            return Err(CliError::Config(format!(
                "{at}: {} labels but {} intervals",
                self.labels.len(),
                self.intervals.len()
            )));
        }
        if self.labels.len() < 2 {
            return Err(CliError::Config(format!(
                "{at}: an arrangement needs at least 2 events"
            )));
        }
        if self.support == 0 || self.support > spec.sequences {
            return Err(CliError::Config(format!(
                "{at}: support {} must lie in 1..={}",
                self.support, spec.sequences
            )));
        }
        let mut min_start = Tick::MAX;
        let mut max_end = Tick::MIN;
        for (i, &(start, end)) in self.intervals.iter().enumerate() {
            let iv = Interval::new(start, end)
                .map_err(|e| CliError::Config(format!("{at}: interval {i}: {e}")))?;
            min_start = min_start.min(iv.start());
            max_end = max_end.max(iv.end());
            if i > 0 && self.intervals[i - 1].0 > start {
                return Err(CliError::Config(format!(
                    "{at}: interval starts must be non-decreasing"
                )));
            }
        }
        if max_end - min_start > spec.span {
            return Err(CliError::Config(format!(
                "{at}: template spans {} ticks but sequences only span {}",
                max_end - min_start,
                spec.span
            )));
        }
        // Every ordered pair must land in a relation, otherwise the template
        // does not define a complete pattern.
        for i in 0..self.intervals.len() {
            for j in (i + 1)..self.intervals.len() {
                let a = Interval::new(self.intervals[i].0, self.intervals[i].1).expect("checked");
                let b = Interval::new(self.intervals[j].0, self.intervals[j].1).expect("checked");
                let rel = classify_intervals(&a, &b, relation)
                    .map_err(|e| CliError::Config(format!("{at}: events {i},{j}: {e}")))?;
                if rel.is_none() {
                    return Err(CliError::Config(format!(
                        "{at}: events {i} {a} and {j} {b} are in no relation at \
                         epsilon={}, minimal overlap={}",
                        relation.epsilon(),
                        relation.d_overlap()
                    )));
                }
            }
        }
        Ok(())
    }

    fn pattern(
        &self,
        alphabet: &mut Alphabet,
        relation: &RelationConfig,
    ) -> Result<TemporalPattern, CliError> {
        let events: Vec<Symbol> = self
            .labels
            .iter()
            .map(|l| alphabet.intern(l))
            .collect::<Result<_, _>>()?;
        let mut relations: Vec<Relation> = Vec::new();
        for i in 0..self.intervals.len() {
            for j in (i + 1)..self.intervals.len() {
                let a = Interval::new(self.intervals[i].0, self.intervals[i].1)?;
                let b = Interval::new(self.intervals[j].0, self.intervals[j].1)?;
                relations.push(
                    classify_intervals(&a, &b, relation)?
                        .expect("validated: every template pair classifies"),
                );
            }
        }
        Ok(TemporalPattern::new(events, relations)?)
    }
}

/// Generate a corpus. Deterministic in (`spec`, `seed`, `relation`): the same
/// inputs always produce byte-identical databases.
pub fn generate(
    spec: &SyntheticSpec,
    seed: u64,
    relation: &RelationConfig,
) -> Result<Generated, CliError> {
    spec.validate(relation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphabet = Alphabet::new();
    let width = if spec.symbols <= 100 { 2 } else { 4 };
    let noise_symbols: Vec<Symbol> = (0..spec.symbols)
        .map(|i| alphabet.intern(&format!("bg{i:0width$}")))
        .collect::<Result<_, _>>()?;
    for plant in &spec.planted {
        for label in &plant.labels {
            // Only background symbols have been interned so far.
            if alphabet.get(label).is_some() {
                return Err(CliError::Config(format!(
                    "synthetic: planted label {label:?} collides with the background alphabet"
                )));
            }
        }
    }

    let mut per_sequence: Vec<Vec<EventInstance>> = vec![Vec::new(); spec.sequences];
    for instances in per_sequence.iter_mut() {
        for _ in 0..spec.noise_per_sequence {
            let symbol = noise_symbols[rng.random_range(0..noise_symbols.len())].clone();
            let duration = rng.random_range(1..=spec.max_duration);
            let start = rng.random_range(0..=spec.span - duration);
            instances.push(EventInstance::new(
                symbol,
                Interval::new(start, start + duration).expect("duration >= 1"),
            ));
        }
    }

    let mut planted_out = Vec::with_capacity(spec.planted.len());
    for plant in &spec.planted {
        let pattern = plant.pattern(&mut alphabet, relation)?;
        let min_start = plant.intervals.iter().map(|&(s, _)| s).min().expect("non-empty");
        let max_end = plant.intervals.iter().map(|&(_, e)| e).max().expect("non-empty");
        let mut targets = sample(&mut rng, spec.sequences, plant.support).into_vec();
        targets.sort_unstable();
        for &target in &targets {
            let shift = rng.random_range(-min_start..=spec.span - max_end);
            for (symbol, &(start, end)) in pattern.events().iter().zip(&plant.intervals) {
                per_sequence[target].push(EventInstance::new(
                    symbol.clone(),
                    Interval::new(start + shift, end + shift).expect("template validated"),
                ));
            }
        }
        planted_out.push(PlantedPattern {
            pattern,
            sequences: targets.iter().map(|&t| t as SeqId + 1).collect(),
        });
    }

    let db = SequenceDatabase::from_instances(alphabet, per_sequence, 1);

    // Exclusive labels make accidental extra occurrences impossible; verify
    // anyway so a generator bug cannot silently skew ground truth.
    for planted in &planted_out {
        let scanned = scan_support(&db, &planted.pattern, relation)?;
        if scanned != planted.sequences {
            return Err(CliError::Internal(format!(
                "planted arrangement {:?} scans to sequences {scanned:?} but was planted into {:?}",
                planted.pattern.canonical_key(),
                planted.sequences
            )));
        }
    }

    Ok(Generated {
        db,
        planted: planted_out,
    })
}

/// Independent support scan: the sequences in which every relation triple of
/// `pattern` is realized by some instance pair.
pub fn scan_support(
    db: &SequenceDatabase,
    pattern: &TemporalPattern,
    relation: &RelationConfig,
) -> Result<Vec<SeqId>, CliError> {
    let mut out = Vec::new();
    for seq in db.sequences() {
        if supports(seq, pattern, relation)? {
            out.push(seq.id());
        }
    }
    Ok(out)
}

fn supports(
    seq: &TemporalSequence,
    pattern: &TemporalPattern,
    relation: &RelationConfig,
) -> Result<bool, CliError> {
    let events = pattern.events();
    for i in 0..events.len() {
        for j in (i + 1)..events.len() {
            let wanted = pattern.relation_between(i, j);
            let mut found = false;
            'pairs: for (xi, x) in seq.instances().iter().enumerate() {
                if x.symbol != events[i] {
                    continue;
                }
                for (yi, y) in seq.instances().iter().enumerate() {
                    if xi == yi || y.symbol != events[j] || x.start() > y.start() {
                        continue;
                    }
                    if classify_relation(x, y, relation)? == Some(wanted) {
                        found = true;
                        break 'pairs;
                    }
                }
            }
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

//! Hierarchical lookup hash structures: the miner's working storage.
//!
//! Level 1 ([`Hlh1`]) indexes single events — for each symbol, the sequences
//! it occurs in and its instances per sequence. Levels k >= 2 ([`Hlhk`])
//! group patterns by their event combination: each group records the
//! sequences where all of its events co-occur plus the patterns stored for
//! it, keyed by canonical pattern text. Group keys are symbol multisets
//! (sorted by symbol id); the patterns inside carry their own event order.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::model::{EventInstance, SeqId, Symbol, TemporalPattern};

#[derive(Debug, Error, PartialEq)]
pub enum HlhError {
    #[error("pattern levels start at 2, got {0}")]
    BadLevel(usize),
    #[error("instances for {symbol:?} must arrive in sequence order: got sequence {got} after {last}")]
    OutOfOrderInsert {
        symbol: String,
        got: SeqId,
        last: SeqId,
    },
    #[error("instances within a sequence must arrive chronologically")]
    UnorderedInstances,
    #[error("group of {got} events registered in a level-{level} structure")]
    WrongArity { level: usize, got: usize },
    #[error("group {0:?} registered without supporting sequences")]
    EmptyGroup(String),
    #[error("group sequence lists must be strictly increasing")]
    UnsortedSequences,
    #[error("group {0:?} is already registered")]
    DuplicateGroup(String),
    #[error("group {0:?} is not registered")]
    UnknownGroup(String),
    #[error("pattern events do not form the group they are stored under")]
    EventsMismatch,
    #[error("pattern claims sequence {0} outside its group's sequences")]
    ForeignSequence(SeqId),
    #[error("a different pattern is already stored under key {0:?}")]
    ConflictingPattern(String),
}

fn strictly_increasing(seqs: &[SeqId]) -> bool {
    seqs.windows(2).all(|w| w[0] < w[1])
}

/// One instance pair backing a relation triple: (left instance, right
/// instance), left starting no later than right.
pub type WitnessPair = (EventInstance, EventInstance);

/// One full instance binding for a pattern: a pair per relation triple, in
/// the pattern's triple order.
pub type WitnessTuple = Vec<WitnessPair>;

/// A pattern held in a level-k structure: its supporting sequences (sorted),
/// its all-confidence, and optionally one instance binding per supporting
/// sequence (aligned with `sequences`).
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRecord {
    pub pattern: TemporalPattern,
    pub sequences: Vec<SeqId>,
    pub confidence: f64,
    pub witnesses: Option<Vec<WitnessTuple>>,
}

impl PatternRecord {
    pub fn support(&self) -> usize {
        self.sequences.len()
    }
}

#[derive(Debug, Clone, Default)]
struct SymbolEntry {
    sequences: Vec<SeqId>,
    /// Aligned with `sequences`; each inner list is chronological.
    instances: Vec<Vec<EventInstance>>,
}

/// Level-1 structure: symbol -> sequences -> instances.
#[derive(Debug, Clone, Default)]
pub struct Hlh1 {
    entries: BTreeMap<Symbol, SymbolEntry>,
}

impl Hlh1 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index a whole database. Sequences are visited in id order, instances
    /// chronologically, so inserts cannot go out of order.
    pub fn build(db: &crate::transform::SequenceDatabase) -> Self {
        let mut hlh = Self::new();
        for seq in db.sequences() {
            for inst in seq.instances() {
                hlh.insert(seq.id, inst.clone())
                    .expect("database sequences are ordered");
            }
        }
        hlh
    }

    /// Append one instance. Per symbol, sequence ids must be nondecreasing
    /// and instances within a sequence chronological.
    pub fn insert(&mut self, seq: SeqId, instance: EventInstance) -> Result<(), HlhError> {
        let entry = self.entries.entry(instance.symbol.clone()).or_default();
        match entry.sequences.last() {
            Some(&last) if last > seq => {
                return Err(HlhError::OutOfOrderInsert {
                    symbol: instance.symbol.label().to_string(),
                    got: seq,
                    last,
                })
            }
            Some(&last) if last == seq => {
                let bucket = entry.instances.last_mut().expect("aligned lists");
                if bucket
                    .last()
                    .is_some_and(|prev| prev.sort_key() > instance.sort_key())
                {
                    return Err(HlhError::UnorderedInstances);
                }
                bucket.push(instance);
            }
            _ => {
                entry.sequences.push(seq);
                entry.instances.push(vec![instance]);
            }
        }
        Ok(())
    }

    /// Sequences containing `symbol`, sorted ascending.
    pub fn sequences(&self, symbol: &Symbol) -> &[SeqId] {
        self.entries
            .get(symbol)
            .map(|e| e.sequences.as_slice())
            .unwrap_or(&[])
    }

    /// Instances of `symbol` in `seq`, chronological.
    pub fn instances(&self, symbol: &Symbol, seq: SeqId) -> &[EventInstance] {
        self.entries
            .get(symbol)
            .and_then(|e| {
                let i = e.sequences.binary_search(&seq).ok()?;
                Some(e.instances[i].as_slice())
            })
            .unwrap_or(&[])
    }

    /// Number of sequences containing `symbol`.
    pub fn support(&self, symbol: &Symbol) -> usize {
        self.sequences(symbol).len()
    }

    /// Indexed symbols in id order.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dump(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(symbol, entry)| {
                let per_seq: Vec<Value> = entry
                    .sequences
                    .iter()
                    .zip(&entry.instances)
                    .map(|(seq, instances)| {
                        json!({
                            "sequence": seq,
                            "intervals": instances
                                .iter()
                                .map(|e| json!([e.start(), e.end()]))
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({
                    "event": symbol.label(),
                    "support": entry.sequences.len(),
                    "occurrences": per_seq,
                })
            })
            .collect();
        json!({ "level": 1, "events": entries })
    }
}

/// Sorted-multiset key for an event combination.
pub fn group_key(events: &[Symbol]) -> Vec<Symbol> {
    let mut key = events.to_vec();
    key.sort();
    key
}

fn key_label(key: &[Symbol]) -> String {
    key.iter()
        .map(|s| s.label())
        .collect::<Vec<_>>()
        .join(",")
}

/// One event combination with its co-occurrence sequences and stored
/// patterns.
#[derive(Debug, Clone)]
pub struct EventGroup {
    events: Vec<Symbol>,
    sequences: Vec<SeqId>,
    patterns: BTreeMap<String, PatternRecord>,
}

impl EventGroup {
    /// The combination, sorted by symbol id.
    pub fn events(&self) -> &[Symbol] {
        &self.events
    }

    /// Sequences where every event of the combination occurs.
    pub fn sequences(&self) -> &[SeqId] {
        &self.sequences
    }

    pub fn patterns(&self) -> impl Iterator<Item = &PatternRecord> {
        self.patterns.values()
    }

    pub fn pattern(&self, key: &str) -> Option<&PatternRecord> {
        self.patterns.get(key)
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }
}

/// Level-k structure (k >= 2): event combination -> group.
#[derive(Debug, Clone)]
pub struct Hlhk {
    level: usize,
    groups: BTreeMap<Vec<Symbol>, EventGroup>,
}

impl Hlhk {
    pub fn new(level: usize) -> Result<Self, HlhError> {
        if level < 2 {
            return Err(HlhError::BadLevel(level));
        }
        Ok(Hlhk {
            level,
            groups: BTreeMap::new(),
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Register an event combination together with its co-occurrence
    /// sequences. Groups with no sequences are rejected rather than stored.
    pub fn register_group(
        &mut self,
        events: &[Symbol],
        sequences: Vec<SeqId>,
    ) -> Result<(), HlhError> {
        if events.len() != self.level {
            return Err(HlhError::WrongArity {
                level: self.level,
                got: events.len(),
            });
        }
        let key = group_key(events);
        if sequences.is_empty() {
            return Err(HlhError::EmptyGroup(key_label(&key)));
        }
        if !strictly_increasing(&sequences) {
            return Err(HlhError::UnsortedSequences);
        }
        if self.groups.contains_key(&key) {
            return Err(HlhError::DuplicateGroup(key_label(&key)));
        }
        self.groups.insert(
            key.clone(),
            EventGroup {
                events: key,
                sequences,
                patterns: BTreeMap::new(),
            },
        );
        Ok(())
    }

    /// Store a pattern under its (already registered) group. Storing the
    /// same record twice is a no-op; storing a different record under an
    /// existing key is an error.
    pub fn store_pattern(&mut self, record: PatternRecord) -> Result<(), HlhError> {
        let key = group_key(record.pattern.events());
        if key.len() != self.level {
            return Err(HlhError::WrongArity {
                level: self.level,
                got: key.len(),
            });
        }
        let group = self
            .groups
            .get_mut(&key)
            .ok_or_else(|| HlhError::UnknownGroup(key_label(&key)))?;
        if group.events != key {
            return Err(HlhError::EventsMismatch);
        }
        if !strictly_increasing(&record.sequences) {
            return Err(HlhError::UnsortedSequences);
        }
        if let Some(&foreign) = record
            .sequences
            .iter()
            .find(|s| group.sequences.binary_search(s).is_err())
        {
            return Err(HlhError::ForeignSequence(foreign));
        }
        let pattern_key = record.pattern.canonical_key();
        match group.patterns.get(&pattern_key) {
            Some(existing) if *existing == record => Ok(()),
            Some(_) => Err(HlhError::ConflictingPattern(pattern_key)),
            None => {
                group.patterns.insert(pattern_key, record);
                Ok(())
            }
        }
    }

    pub fn group(&self, events: &[Symbol]) -> Option<&EventGroup> {
        self.groups.get(&group_key(events))
    }

    /// Co-occurrence sequences of a combination, if registered.
    pub fn group_sequences(&self, events: &[Symbol]) -> Option<&[SeqId]> {
        self.group(events).map(|g| g.sequences())
    }

    /// Stored pattern lookup by exact events + canonical key.
    pub fn pattern(&self, events: &[Symbol], key: &str) -> Option<&PatternRecord> {
        self.group(events)?.pattern(key)
    }

    /// Groups in key order (deterministic).
    pub fn groups(&self) -> impl Iterator<Item = &EventGroup> {
        self.groups.values()
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.groups.values().map(|g| g.patterns.len()).sum()
    }

    pub fn dump(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .values()
            .map(|group| {
                let patterns: Vec<Value> = group
                    .patterns
                    .values()
                    .map(|record| {
                        json!({
                            "pattern": record.pattern.canonical_key(),
                            "sequences": record.sequences,
                            "confidence": record.confidence,
                        })
                    })
                    .collect();
                json!({
                    "events": group.events.iter().map(|s| s.label()).collect::<Vec<_>>(),
                    "sequences": group.sequences,
                    "patterns": patterns,
                })
            })
            .collect();
        json!({ "level": self.level, "groups": groups })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Alphabet, Interval, Relation};

    fn pattern(alphabet: &mut Alphabet, left: &str, rel: Relation, right: &str) -> TemporalPattern {
        TemporalPattern::new(
            vec![
                alphabet.intern(left).unwrap(),
                alphabet.intern(right).unwrap(),
            ],
            vec![rel],
        )
        .unwrap()
    }

    #[test]
    fn hlh1_indexes_appliance_db() {
        let db = crate::fixtures::appliance_db();
        let hlh = Hlh1::build(&db);
        assert_eq!(hlh.len(), 8);
        let by_label = |label: &str| {
            let symbol = db.alphabet.get(label).unwrap();
            hlh.sequences(&symbol).to_vec()
        };
        assert_eq!(by_label("SOff"), vec![1, 2, 3, 4]);
        assert_eq!(by_label("TOff"), vec![1, 2, 3, 4]);
        assert_eq!(by_label("WOff"), vec![1, 2, 3, 4]);
        assert_eq!(by_label("IOn"), vec![1, 3]);
        assert_eq!(by_label("SOn"), vec![2]);
        assert_eq!(by_label("TOn"), vec![2, 4]);
        assert_eq!(by_label("WOn"), vec![2, 4]);
        assert_eq!(by_label("IOff"), vec![2, 4]);

        let t_on = db.alphabet.get("TOn").unwrap();
        let instances = hlh.instances(&t_on, 4);
        assert_eq!(instances.len(), 1);
        assert_eq!(
            (instances[0].start(), instances[0].end()),
            (525, 530)
        );
        assert!(hlh.instances(&t_on, 1).is_empty());
    }

    #[test]
    fn hlh1_rejects_out_of_order_sequences() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.intern("A").unwrap();
        let mut hlh = Hlh1::new();
        let inst = |s, e| EventInstance::new(a.clone(), Interval::new(s, e).unwrap());
        hlh.insert(2, inst(0, 5)).unwrap();
        assert!(matches!(
            hlh.insert(1, inst(0, 5)),
            Err(HlhError::OutOfOrderInsert { got: 1, last: 2, .. })
        ));
        hlh.insert(2, inst(3, 9)).unwrap();
        assert!(matches!(
            hlh.insert(2, inst(0, 5)),
            Err(HlhError::UnorderedInstances)
        ));
    }

    #[test]
    fn group_registration_and_lookup() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.intern("A").unwrap();
        let b = alphabet.intern("B").unwrap();
        let mut hlh = Hlhk::new(2).unwrap();
        assert_eq!(Hlhk::new(1).unwrap_err(), HlhError::BadLevel(1));

        // The key is a multiset: registration order of events is irrelevant.
        hlh.register_group(&[b.clone(), a.clone()], vec![1, 3]).unwrap();
        assert_eq!(hlh.group_sequences(&[a.clone(), b.clone()]), Some(&[1, 3][..]));
        assert!(matches!(
            hlh.register_group(&[a.clone(), b.clone()], vec![1]),
            Err(HlhError::DuplicateGroup(_))
        ));
        assert!(matches!(
            hlh.register_group(&[a.clone()], vec![1]),
            Err(HlhError::WrongArity { level: 2, got: 1 })
        ));
        assert!(matches!(
            hlh.register_group(&[a.clone(), a.clone()], vec![]),
            Err(HlhError::EmptyGroup(_))
        ));
        assert!(matches!(
            hlh.register_group(&[a.clone(), a.clone()], vec![3, 1]),
            Err(HlhError::UnsortedSequences)
        ));
    }

    #[test]
    fn pattern_store_validates_and_is_idempotent() {
        let mut alphabet = Alphabet::new();
        let p = pattern(&mut alphabet, "A", Relation::Follows, "B");
        let q = pattern(&mut alphabet, "A", Relation::Contains, "B");
        let mut hlh = Hlhk::new(2).unwrap();
        let record = PatternRecord {
            pattern: p.clone(),
            sequences: vec![1],
            confidence: 0.5,
            witnesses: None,
        };

        assert!(matches!(
            hlh.store_pattern(record.clone()),
            Err(HlhError::UnknownGroup(_))
        ));
        hlh.register_group(p.events(), vec![1, 3]).unwrap();
        hlh.store_pattern(record.clone()).unwrap();
        // Same record again: fine. Different record, same key: rejected.
        hlh.store_pattern(record.clone()).unwrap();
        let conflicting = PatternRecord {
            sequences: vec![1, 3],
            ..record.clone()
        };
        assert!(matches!(
            hlh.store_pattern(conflicting),
            Err(HlhError::ConflictingPattern(_))
        ));
        // A sequence outside the group's co-occurrence list is impossible.
        let foreign = PatternRecord {
            pattern: q,
            sequences: vec![2],
            confidence: 0.5,
            witnesses: None,
        };
        assert!(matches!(
            hlh.store_pattern(foreign),
            Err(HlhError::ForeignSequence(2))
        ));

        assert_eq!(hlh.pattern_count(), 1);
        assert_eq!(hlh.group_count(), 1);
        assert!(hlh.pattern(p.events(), "A F B").is_some());
        assert!(hlh.pattern(p.events(), "A C B").is_none());
    }

    #[test]
    fn dumps_are_json_objects() {
        let db = crate::fixtures::appliance_db();
        let hlh1 = Hlh1::build(&db);
        let dump = hlh1.dump();
        assert_eq!(dump["level"], 1);
        assert_eq!(dump["events"].as_array().unwrap().len(), 8);

        let mut alphabet = Alphabet::new();
        let p = pattern(&mut alphabet, "A", Relation::Follows, "B");
        let mut hlh2 = Hlhk::new(2).unwrap();
        hlh2.register_group(p.events(), vec![1]).unwrap();
        hlh2.store_pattern(PatternRecord {
            pattern: p,
            sequences: vec![1],
            confidence: 1.0,
            witnesses: None,
        })
        .unwrap();
        let dump = hlh2.dump();
        assert_eq!(dump["level"], 2);
        assert_eq!(
            dump["groups"][0]["patterns"][0]["pattern"],
            "A F B"
        );
    }
}

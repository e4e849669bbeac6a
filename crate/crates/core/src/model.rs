//! Core data model: intervals, symbols, event instances, and the three
//! buffered interval relations (Follows / Contains / Overlaps) that temporal
//! patterns are built from.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Discrete time unit. All intervals and relation parameters are expressed in
/// ticks; the mapping from wall-clock time to ticks is decided at ingestion.
pub type Tick = i64;

/// 1-based, dense sequence identifier within a database.
pub type SeqId = u32;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("interval needs start < end, got [{start}, {end}]")]
    EmptyInterval { start: Tick, end: Tick },
    #[error("epsilon must be >= 0, got {0}")]
    NegativeEpsilon(Tick),
    #[error("minimal overlap must be >= 1 tick, got {0}")]
    NonPositiveOverlap(Tick),
    #[error("minimal overlap {d_overlap} must exceed 2 * epsilon ({epsilon}); relations would not be mutually exclusive")]
    OverlapWithinTolerance { d_overlap: Tick, epsilon: Tick },
    #[error("instance pair out of chronological order: left starts at {left}, right starts at {right}")]
    UnorderedPair { left: Tick, right: Tick },
    #[error("a temporal pattern needs at least 2 events, got {0}")]
    TooFewEvents(usize),
    #[error("{events} events need {expected} relations, got {got}")]
    RelationCountMismatch {
        events: usize,
        expected: usize,
        got: usize,
    },
    #[error("event intervals must be sorted and pairwise disjoint: [{prev_start}, {prev_end}] then [{start}, {end}]")]
    OverlappingIntervals {
        prev_start: Tick,
        prev_end: Tick,
        start: Tick,
        end: Tick,
    },
    #[error("event must have at least one interval")]
    NoIntervals,
    #[error("symbol label {0:?} is invalid: labels must be non-empty and free of whitespace and ';'")]
    BadLabel(String),
}

/// Half-open-ish time span `[start, end]` with `start < end`. Boundary ticks
/// are shared between adjacent intervals; durations are `end - start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    start: Tick,
    end: Tick,
}

impl Interval {
    pub fn new(start: Tick, end: Tick) -> Result<Self, ModelError> {
        if start >= end {
            return Err(ModelError::EmptyInterval { start, end });
        }
        Ok(Interval { start, end })
    }

    pub fn start(&self) -> Tick {
        self.start
    }

    pub fn end(&self) -> Tick {
        self.end
    }

    pub fn duration(&self) -> Tick {
        self.end - self.start
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Interned event symbol, e.g. `TOn` for "toaster on". Identity (equality,
/// ordering, hashing) is the intern id handed out by the owning [`Alphabet`];
/// the label is carried along for display.
#[derive(Debug, Clone)]
pub struct Symbol {
    id: u32,
    label: Arc<str>,
}

impl Symbol {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl std::hash::Hash for Symbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Symbol interner. Labels are unique; ids are dense in insertion order, which
/// also fixes the tie-break order used when sorting instances.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    labels: Vec<Arc<str>>,
    index: HashMap<Arc<str>, u32>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern `label`, returning the existing symbol if already known.
    ///
    /// Labels must be non-empty and must not contain whitespace or `;`:
    /// canonical pattern keys are whitespace/semicolon-delimited and would
    /// stop being injective otherwise.
    pub fn intern(&mut self, label: &str) -> Result<Symbol, ModelError> {
        if label.is_empty() || label.contains(|c: char| c.is_whitespace() || c == ';') {
            return Err(ModelError::BadLabel(label.to_string()));
        }
        if let Some(&id) = self.index.get(label) {
            return Ok(Symbol {
                id,
                label: self.labels[id as usize].clone(),
            });
        }
        let id = self.labels.len() as u32;
        let label: Arc<str> = Arc::from(label);
        self.labels.push(label.clone());
        self.index.insert(label.clone(), id);
        Ok(Symbol { id, label })
    }

    pub fn get(&self, label: &str) -> Option<Symbol> {
        self.index.get(label).map(|&id| Symbol {
            id,
            label: self.labels[id as usize].clone(),
        })
    }

    pub fn by_id(&self, id: u32) -> Option<Symbol> {
        self.labels.get(id as usize).map(|label| Symbol {
            id,
            label: label.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// All symbols in id order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.labels.iter().enumerate().map(|(id, label)| Symbol {
            id: id as u32,
            label: label.clone(),
        })
    }
}

/// One occurrence of a symbol over an interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventInstance {
    pub symbol: Symbol,
    pub interval: Interval,
}

impl EventInstance {
    pub fn new(symbol: Symbol, interval: Interval) -> Self {
        EventInstance { symbol, interval }
    }

    pub fn start(&self) -> Tick {
        self.interval.start()
    }

    pub fn end(&self) -> Tick {
        self.interval.end()
    }

    /// Sort key for sequences: chronological by start, ties by end, then by
    /// symbol id.
    pub fn sort_key(&self) -> (Tick, Tick, u32) {
        (self.start(), self.end(), self.symbol.id())
    }
}

impl fmt::Display for EventInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.symbol, self.interval)
    }
}

/// A symbol together with every interval it occupies in one source series.
/// Intervals are sorted and pairwise disjoint (they come from maximal runs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEvent {
    pub symbol: Symbol,
    pub intervals: Vec<Interval>,
}

impl TemporalEvent {
    pub fn new(symbol: Symbol, intervals: Vec<Interval>) -> Result<Self, ModelError> {
        if intervals.is_empty() {
            return Err(ModelError::NoIntervals);
        }
        for pair in intervals.windows(2) {
            if pair[1].start() < pair[0].end() || pair[1].start() < pair[0].start() {
                return Err(ModelError::OverlappingIntervals {
                    prev_start: pair[0].start(),
                    prev_end: pair[0].end(),
                    start: pair[1].start(),
                    end: pair[1].end(),
                });
            }
        }
        Ok(TemporalEvent { symbol, intervals })
    }
}

/// Group instances by symbol into temporal events, one per distinct symbol,
/// returned in symbol-id order.
pub fn group_into_events(instances: &[EventInstance]) -> Result<Vec<TemporalEvent>, ModelError> {
    let mut by_symbol: std::collections::BTreeMap<Symbol, Vec<Interval>> =
        std::collections::BTreeMap::new();
    for inst in instances {
        by_symbol
            .entry(inst.symbol.clone())
            .or_default()
            .push(inst.interval);
    }
    by_symbol
        .into_iter()
        .map(|(symbol, mut intervals)| {
            intervals.sort();
            TemporalEvent::new(symbol, intervals)
        })
        .collect()
}

/// Temporal relation between two chronologically ordered instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Follows,
    Contains,
    Overlaps,
}

pub const RELATIONS: [Relation; 3] = [Relation::Follows, Relation::Contains, Relation::Overlaps];

impl Relation {
    /// One-letter code used in canonical pattern keys and reports.
    pub fn code(&self) -> char {
        match self {
            Relation::Follows => 'F',
            Relation::Contains => 'C',
            Relation::Overlaps => 'O',
        }
    }

    /// Display glyph for human-readable summaries.
    pub fn glyph(&self) -> &'static str {
        match self {
            Relation::Follows => "\u{2192}",  // →
            Relation::Contains => "\u{227d}", // ≽
            Relation::Overlaps => "\u{226c}", // ≬
        }
    }

    pub fn from_code(c: char) -> Option<Relation> {
        match c {
            'F' => Some(Relation::Follows),
            'C' => Some(Relation::Contains),
            'O' => Some(Relation::Overlaps),
            _ => None,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Relation::Follows => 0,
            Relation::Contains => 1,
            Relation::Overlaps => 2,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Tolerance parameters for relation classification.
///
/// `epsilon` buffers endpoint comparisons against sampling jitter; `d_overlap`
/// is the smallest overlap that counts as a real crossing. `d_overlap > 2 *
/// epsilon` keeps the three relations mutually exclusive (together with
/// instance durations exceeding `2 * epsilon` when `epsilon > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationConfig {
    epsilon: Tick,
    d_overlap: Tick,
}

impl RelationConfig {
    pub fn new(epsilon: Tick, d_overlap: Tick) -> Result<Self, ModelError> {
        if epsilon < 0 {
            return Err(ModelError::NegativeEpsilon(epsilon));
        }
        if d_overlap < 1 {
            return Err(ModelError::NonPositiveOverlap(d_overlap));
        }
        if d_overlap <= 2 * epsilon {
            return Err(ModelError::OverlapWithinTolerance { d_overlap, epsilon });
        }
        Ok(RelationConfig { epsilon, d_overlap })
    }

    pub fn epsilon(&self) -> Tick {
        self.epsilon
    }

    pub fn d_overlap(&self) -> Tick {
        self.d_overlap
    }
}

impl Default for RelationConfig {
    /// Exact endpoint matching, 1-tick minimal overlap.
    fn default() -> Self {
        RelationConfig {
            epsilon: 0,
            d_overlap: 1,
        }
    }
}

/// Evaluate the three relation predicates independently, indexed as
/// `[follows, contains, overlaps]`. The caller must present `a` and `b` in
/// chronological order (`a.start() <= b.start()`).
///
/// For chronologically ordered pairs the predicates are mutually exclusive
/// whenever `d_overlap > 2 * epsilon` and (for `epsilon > 0`) both durations
/// exceed `2 * epsilon`; gaps where none of the three holds are possible.
pub fn relation_predicates(a: &Interval, b: &Interval, cfg: &RelationConfig) -> [bool; 3] {
    let eps = cfg.epsilon;
    let follows = a.end() - eps <= b.start();
    let contains = a.start() <= b.start() && a.end() + eps >= b.end();
    let overlaps =
        a.start() < b.start() && a.end() + eps < b.end() && a.end() - b.start() >= cfg.d_overlap + eps;
    [follows, contains, overlaps]
}

/// Classify the relation between two chronologically ordered intervals.
///
/// Predicates are tested in the fixed order Contains, Overlaps, Follows and
/// the first match wins, so classification stays deterministic even for
/// degenerate inputs outside the mutual-exclusivity guards. Returns `None`
/// when no relation holds (e.g. a gap shorter than `d_overlap`).
pub fn classify_intervals(
    a: &Interval,
    b: &Interval,
    cfg: &RelationConfig,
) -> Result<Option<Relation>, ModelError> {
    if a.start() > b.start() {
        // Caller bug: relation semantics are only defined left-to-right.
        return Err(ModelError::UnorderedPair {
            left: a.start(),
            right: b.start(),
        });
    }
    let [follows, contains, overlaps] = relation_predicates(a, b, cfg);
    Ok(if contains {
        Some(Relation::Contains)
    } else if overlaps {
        Some(Relation::Overlaps)
    } else if follows {
        Some(Relation::Follows)
    } else {
        None
    })
}

/// Classify the relation between two chronologically ordered event instances.
pub fn classify_relation(
    e_i: &EventInstance,
    e_j: &EventInstance,
    cfg: &RelationConfig,
) -> Result<Option<Relation>, ModelError> {
    classify_intervals(&e_i.interval, &e_j.interval, cfg)
}

/// One relation of a pattern: `left` happens-in-relation-to `right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationTriple {
    pub relation: Relation,
    pub left: Symbol,
    pub right: Symbol,
}

impl fmt::Display for RelationTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.relation.code(), self.right)
    }
}

/// Index of the relation between event positions `i < j` in the flat relation
/// list of an `n`-event pattern (pairs ordered lexicographically by `(i, j)`).
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// An `n`-event temporal pattern: an ordered event list plus one relation per
/// event pair `(i, j)`, `i < j`, in lexicographic pair order.
///
/// The first event of each pair is the chronologically earlier one, so the
/// event order encodes the arrangement the pattern asks for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemporalPattern {
    events: Vec<Symbol>,
    relations: Vec<Relation>,
}

impl TemporalPattern {
    pub fn new(events: Vec<Symbol>, relations: Vec<Relation>) -> Result<Self, ModelError> {
        let n = events.len();
        if n < 2 {
            return Err(ModelError::TooFewEvents(n));
        }
        let expected = n * (n - 1) / 2;
        if relations.len() != expected {
            return Err(ModelError::RelationCountMismatch {
                events: n,
                expected,
                got: relations.len(),
            });
        }
        Ok(TemporalPattern { events, relations })
    }

    /// Two-event pattern `left <relation> right`.
    pub fn pair(relation: Relation, left: Symbol, right: Symbol) -> Self {
        TemporalPattern {
            events: vec![left, right],
            relations: vec![relation],
        }
    }

    pub fn events(&self) -> &[Symbol] {
        &self.events
    }

    /// Number of events; also the mining level the pattern belongs to.
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation_between(&self, i: usize, j: usize) -> Relation {
        self.relations[pair_index(i, j, self.events.len())]
    }

    /// Relation triples in canonical `(i, j)` order.
    pub fn triples(&self) -> Vec<RelationTriple> {
        let n = self.events.len();
        let mut out = Vec::with_capacity(self.relations.len());
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(RelationTriple {
                    relation: self.relations[pair_index(i, j, n)],
                    left: self.events[i].clone(),
                    right: self.events[j].clone(),
                });
            }
        }
        out
    }

    /// Extend by one event: `new_relations[i]` is the relation between event
    /// `i` and the new last event.
    pub fn extended(&self, event: Symbol, new_relations: &[Relation]) -> Result<Self, ModelError> {
        let n = self.events.len();
        if new_relations.len() != n {
            return Err(ModelError::RelationCountMismatch {
                events: n + 1,
                expected: (n + 1) * n / 2,
                got: self.relations.len() + new_relations.len(),
            });
        }
        let mut events = self.events.clone();
        events.push(event);
        let m = n + 1;
        let mut relations = vec![Relation::Follows; m * (m - 1) / 2];
        for i in 0..n {
            for j in (i + 1)..n {
                relations[pair_index(i, j, m)] = self.relations[pair_index(i, j, n)];
            }
        }
        for (i, &r) in new_relations.iter().enumerate() {
            relations[pair_index(i, n, m)] = r;
        }
        Ok(TemporalPattern { events, relations })
    }

    /// Canonical string key, e.g. `"SOn C TOn"` or `"S C T;S C W;T C W"`.
    /// Triples are rendered in `(i, j)` order and joined by `;`. Keys are
    /// injective over (event list, relation assignment) because labels cannot
    /// contain whitespace or `;`.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        let n = self.events.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if !out.is_empty() {
                    out.push(';');
                }
                let r = self.relations[pair_index(i, j, n)];
                out.push_str(self.events[i].label());
                out.push(' ');
                out.push(r.code());
                out.push(' ');
                out.push_str(self.events[j].label());
            }
        }
        out
    }

    /// Human-readable form using relation glyphs instead of letter codes.
    pub fn display_glyphs(&self) -> String {
        let n = self.events.len();
        let mut parts = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let r = self.relations[pair_index(i, j, n)];
                parts.push(format!(
                    "{} {} {}",
                    self.events[i],
                    r.glyph(),
                    self.events[j]
                ));
            }
        }
        parts.join("; ")
    }
}

/// Canonical key of a pattern; see [`TemporalPattern::canonical_key`].
pub fn canonical_pattern_key(pattern: &TemporalPattern) -> String {
    pattern.canonical_key()
}

impl fmt::Display for TemporalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(alphabet: &mut Alphabet, label: &str) -> Symbol {
        alphabet.intern(label).unwrap()
    }

    fn inst(alphabet: &mut Alphabet, label: &str, start: Tick, end: Tick) -> EventInstance {
        EventInstance::new(sym(alphabet, label), Interval::new(start, end).unwrap())
    }

    #[test]
    fn interval_rejects_empty_and_reversed() {
        assert!(Interval::new(5, 5).is_err());
        assert!(Interval::new(7, 3).is_err());
        assert_eq!(Interval::new(3, 7).unwrap().duration(), 4);
    }

    #[test]
    fn relation_config_invariants() {
        assert!(RelationConfig::new(-1, 5).is_err());
        assert!(RelationConfig::new(0, 0).is_err());
        assert!(RelationConfig::new(2, 4).is_err()); // d_overlap == 2 * eps
        assert!(RelationConfig::new(2, 5).is_ok());
    }

    #[test]
    fn classify_equal_start_containment() {
        // Two instances starting together: the longer one contains the other.
        let mut a = Alphabet::new();
        let son = inst(&mut a, "SOn", 455, 465);
        let ton = inst(&mut a, "TOn", 455, 460);
        let cfg = RelationConfig::default();
        assert_eq!(
            classify_relation(&son, &ton, &cfg).unwrap(),
            Some(Relation::Contains)
        );
    }

    #[test]
    fn classify_meet_is_follows() {
        let cfg = RelationConfig::default();
        let a = Interval::new(0, 10).unwrap();
        let b = Interval::new(10, 20).unwrap();
        assert_eq!(
            classify_intervals(&a, &b, &cfg).unwrap(),
            Some(Relation::Follows)
        );
    }

    #[test]
    fn classify_real_crossing_is_overlaps() {
        let cfg = RelationConfig::new(0, 2).unwrap();
        let a = Interval::new(0, 10).unwrap();
        let b = Interval::new(5, 20).unwrap();
        assert_eq!(
            classify_intervals(&a, &b, &cfg).unwrap(),
            Some(Relation::Overlaps)
        );
    }

    #[test]
    fn classify_short_crossing_is_no_relation() {
        // Overlap of 1 tick < d_overlap, not a follow (still running), not a
        // containment: the pair relates in no way.
        let cfg = RelationConfig::new(0, 2).unwrap();
        let a = Interval::new(0, 10).unwrap();
        let b = Interval::new(9, 20).unwrap();
        assert_eq!(classify_intervals(&a, &b, &cfg).unwrap(), None);
    }

    #[test]
    fn classify_rejects_unordered_input() {
        let cfg = RelationConfig::default();
        let a = Interval::new(5, 10).unwrap();
        let b = Interval::new(0, 20).unwrap();
        assert_eq!(
            classify_intervals(&a, &b, &cfg),
            Err(ModelError::UnorderedPair { left: 5, right: 0 })
        );
    }

    #[test]
    fn epsilon_buffers_endpoints() {
        // With eps = 2 a 1-tick spill past the end still counts as contained.
        let cfg = RelationConfig::new(2, 5).unwrap();
        let a = Interval::new(0, 10).unwrap();
        let b = Interval::new(3, 11).unwrap();
        assert_eq!(
            classify_intervals(&a, &b, &cfg).unwrap(),
            Some(Relation::Contains)
        );
        // And a start that trails the previous end by <= eps still follows.
        let c = Interval::new(9, 20).unwrap();
        assert_eq!(
            classify_intervals(&a, &c, &cfg).unwrap(),
            Some(Relation::Follows)
        );
    }

    #[test]
    fn canonical_key_two_events() {
        let mut a = Alphabet::new();
        let p = TemporalPattern::pair(
            Relation::Contains,
            sym(&mut a, "SOn"),
            sym(&mut a, "TOn"),
        );
        assert_eq!(p.canonical_key(), "SOn C TOn");
        assert_eq!(canonical_pattern_key(&p), "SOn C TOn");
    }

    #[test]
    fn canonical_key_three_events() {
        let mut a = Alphabet::new();
        let (s, t, w) = (sym(&mut a, "S"), sym(&mut a, "T"), sym(&mut a, "W"));
        let p = TemporalPattern::new(
            vec![s, t, w],
            vec![Relation::Contains, Relation::Contains, Relation::Contains],
        )
        .unwrap();
        assert_eq!(p.canonical_key(), "S C T;S C W;T C W");
    }

    #[test]
    fn canonical_key_orders_follow_then_contains() {
        let mut a = Alphabet::new();
        let (t, w) = (sym(&mut a, "TOn"), sym(&mut a, "TOff"));
        let p = TemporalPattern::pair(Relation::Follows, t, w);
        assert_eq!(p.canonical_key(), "TOn F TOff");
    }

    #[test]
    fn extension_places_relations_at_pair_positions() {
        let mut a = Alphabet::new();
        let (s, t, w) = (sym(&mut a, "A"), sym(&mut a, "B"), sym(&mut a, "C"));
        let p2 = TemporalPattern::pair(Relation::Follows, s.clone(), t.clone());
        let p3 = p2
            .extended(w.clone(), &[Relation::Contains, Relation::Overlaps])
            .unwrap();
        assert_eq!(p3.relation_between(0, 1), Relation::Follows);
        assert_eq!(p3.relation_between(0, 2), Relation::Contains);
        assert_eq!(p3.relation_between(1, 2), Relation::Overlaps);
        assert_eq!(p3.canonical_key(), "A F B;A C C;B O C");
    }

    #[test]
    fn pattern_validation() {
        let mut a = Alphabet::new();
        let s = sym(&mut a, "A");
        assert!(matches!(
            TemporalPattern::new(vec![s.clone()], vec![]),
            Err(ModelError::TooFewEvents(1))
        ));
        assert!(matches!(
            TemporalPattern::new(vec![s.clone(), s.clone()], vec![]),
            Err(ModelError::RelationCountMismatch { .. })
        ));
    }

    #[test]
    fn alphabet_rejects_bad_labels() {
        let mut a = Alphabet::new();
        assert!(a.intern("").is_err());
        assert!(a.intern("two words").is_err());
        assert!(a.intern("semi;colon").is_err());
        assert!(a.intern("TOn").is_ok());
    }

    #[test]
    fn alphabet_interning_is_stable() {
        let mut a = Alphabet::new();
        let first = a.intern("X").unwrap();
        let again = a.intern("X").unwrap();
        assert_eq!(first, again);
        assert_eq!(a.get("X"), Some(first.clone()));
        assert_eq!(a.by_id(first.id()), Some(first));
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn temporal_event_rejects_overlap() {
        let mut a = Alphabet::new();
        let s = sym(&mut a, "A");
        let bad = TemporalEvent::new(
            s.clone(),
            vec![Interval::new(0, 10).unwrap(), Interval::new(5, 15).unwrap()],
        );
        assert!(bad.is_err());
        let good = TemporalEvent::new(
            s,
            vec![Interval::new(0, 10).unwrap(), Interval::new(12, 15).unwrap()],
        );
        assert!(good.is_ok());
    }

    #[test]
    fn group_into_events_collects_per_symbol() {
        let mut a = Alphabet::new();
        let instances = vec![
            inst(&mut a, "TOn", 455, 460),
            inst(&mut a, "TOn", 525, 530),
            inst(&mut a, "SOn", 455, 465),
        ];
        let events = group_into_events(&instances).unwrap();
        assert_eq!(events.len(), 2);
        // TOn interned first, so it sorts first by id.
        assert_eq!(events[0].symbol.label(), "TOn");
        assert_eq!(events[0].intervals.len(), 2);
        assert_eq!(events[1].symbol.label(), "SOn");
    }

    #[test]
    fn pair_index_is_lexicographic() {
        // n = 4: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
        let idx: Vec<usize> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| pair_index(i, j, 4))
            .collect();
        assert_eq!(idx, vec![0, 1, 2, 3, 4, 5]);
    }
}

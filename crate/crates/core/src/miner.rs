//! The rare-pattern miner.
//!
//! A temporal pattern is *rare* when its support (number of supporting
//! sequences) sits inside a band `[sigma_min, sigma_max]` of the database
//! size and its all-confidence — support divided by the largest support among
//! its events — clears a floor `delta`. A sequence supports a pattern when
//! every relation triple of the pattern is witnessed by some instance pair in
//! that sequence; triples are matched independently, so the support set of a
//! pattern is exactly the intersection of its triples' two-event support
//! sets.
//!
//! Mining proceeds level by level. Level 2 scans instance pairs per ordered
//! symbol pair and memoizes, for each (left, right, relation), the supporting
//! sequence set plus one witness pair per sequence. Level k extends stored
//! (k-1)-patterns by one chronologically-last event; the new pattern's
//! support is computed exactly from the stored prefix support and the
//! memoized two-event sets, never by rescanning instances. Two prune
//! families can be toggled independently ([`PruningMode`]): support/
//! confidence bounds on event combinations (apriori-style), and
//! transitivity-based narrowing that only proposes relation assignments
//! backed by stored sibling patterns and stored two-event patterns. Pruning
//! never changes what is stored or emitted — only how much work finding it
//! takes.
//!
//! Patterns are *stored* when they pass `sigma_min` and `delta` (upper-bound
//! filtering while growing would break extension soundness: a rare pattern's
//! sub-patterns can be arbitrarily common) and *emitted* when they also pass
//! `sigma_max`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::hlh::{group_key, Hlh1, HlhError, Hlhk, PatternRecord, WitnessPair, WitnessTuple};
use crate::model::{
    classify_relation, pair_index, ModelError, Relation, RelationConfig, SeqId, Symbol,
    TemporalPattern, RELATIONS,
};
use crate::transform::SequenceDatabase;

#[derive(Debug, Error, PartialEq)]
pub enum MinerError {
    #[error("support band must satisfy 0 < sigma_min <= sigma_max <= 1, got [{min}, {max}]")]
    BadSupportBand { min: f64, max: f64 },
    #[error("confidence floor must lie in [0, 1], got {0}")]
    BadConfidenceFloor(f64),
    #[error("patterns need at least 2 events, so the event cap must be >= 2, got {0}")]
    BadEventCap(usize),
    #[error("confidence of a pattern with no events is undefined")]
    NoEvents,
    #[error("confidence is undefined over an event with zero support")]
    ZeroSupportEvent,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Storage(#[from] HlhError),
}

/// Which prune families run. Every mode yields identical stored and emitted
/// patterns; modes differ only in the work spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PruningMode {
    /// Exhaustive candidate enumeration.
    NoPrune,
    /// Support/confidence bounds on event combinations.
    Apriori,
    /// Transitivity narrowing through stored siblings and two-event patterns.
    Trans,
    /// Both families.
    #[default]
    All,
}

impl PruningMode {
    pub fn apriori(self) -> bool {
        matches!(self, PruningMode::Apriori | PruningMode::All)
    }

    pub fn trans(self) -> bool {
        matches!(self, PruningMode::Trans | PruningMode::All)
    }

    pub fn name(self) -> &'static str {
        match self {
            PruningMode::NoPrune => "none",
            PruningMode::Apriori => "apriori",
            PruningMode::Trans => "trans",
            PruningMode::All => "all",
        }
    }

    pub const ALL_MODES: [PruningMode; 4] = [
        PruningMode::NoPrune,
        PruningMode::Apriori,
        PruningMode::Trans,
        PruningMode::All,
    ];
}

impl std::fmt::Display for PruningMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PruningMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(PruningMode::NoPrune),
            "apriori" => Ok(PruningMode::Apriori),
            "trans" => Ok(PruningMode::Trans),
            "all" => Ok(PruningMode::All),
            other => Err(format!(
                "unknown pruning mode {other:?} (expected none, apriori, trans, or all)"
            )),
        }
    }
}

/// Mining parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    /// Lower support bound as a fraction of the database size.
    pub sigma_min: f64,
    /// Upper support bound (rarity cap) as a fraction of the database size.
    pub sigma_max: f64,
    /// All-confidence floor.
    pub delta: f64,
    pub relation: RelationConfig,
    /// Cap on pattern length. `None` runs until a level stores nothing —
    /// which may never happen when instance pairs can back arbitrarily long
    /// patterns (e.g. two equal instances of one symbol), so leave the cap
    /// on unless the data is known to bound pattern growth.
    pub max_events: Option<usize>,
    pub pruning: PruningMode,
    /// Additionally require every (k-1)-event sub-pattern of a candidate to
    /// be stored before computing its support (transitivity modes only).
    /// Never changes the result; occasionally saves intersections.
    pub strict_siblings: bool,
    /// Attach one instance binding per supporting sequence to each pattern.
    pub emit_witnesses: bool,
    /// Emit every instance binding (capped) instead of one.
    pub keep_all_witnesses: bool,
}

/// Most bindings a single (pattern, sequence) keeps under
/// `keep_all_witnesses`; the cross product over triples explodes quickly.
pub const WITNESS_CAP: usize = 64;

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            sigma_min: 0.1,
            sigma_max: 0.5,
            delta: 0.5,
            relation: RelationConfig::default(),
            max_events: Some(5),
            pruning: PruningMode::All,
            strict_siblings: false,
            emit_witnesses: false,
            keep_all_witnesses: false,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), MinerError> {
        if !(self.sigma_min > 0.0 && self.sigma_min <= self.sigma_max && self.sigma_max <= 1.0) {
            return Err(MinerError::BadSupportBand {
                min: self.sigma_min,
                max: self.sigma_max,
            });
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(MinerError::BadConfidenceFloor(self.delta));
        }
        if let Some(cap) = self.max_events {
            if cap < 2 {
                return Err(MinerError::BadEventCap(cap));
            }
        }
        Ok(())
    }

    /// Smallest supporting-sequence count that passes `sigma_min`. At least
    /// 1: nothing with empty support is ever stored.
    pub fn min_count(&self, db_len: usize) -> usize {
        ((self.sigma_min * db_len as f64).ceil() as usize).max(1)
    }

    /// Largest supporting-sequence count that passes `sigma_max`.
    pub fn max_count(&self, db_len: usize) -> usize {
        (self.sigma_max * db_len as f64).floor() as usize
    }

    /// Does `support / denominator` clear the confidence floor?
    pub fn conf_ok(&self, support: usize, denominator: usize) -> bool {
        support as f64 >= self.delta * denominator as f64
    }
}

/// Sequences in which every one of `events` occurs, by direct scan.
pub fn co_occurrence(db: &SequenceDatabase, events: &[Symbol]) -> Vec<SeqId> {
    db.sequences()
        .iter()
        .filter(|seq| {
            events
                .iter()
                .all(|e| seq.instances().iter().any(|inst| &inst.symbol == e))
        })
        .map(|seq| seq.id)
        .collect()
}

/// All-confidence: pattern support over the largest of its events' supports.
/// A single-event "pattern" therefore has confidence 1 against its own
/// support.
pub fn all_confidence(
    pattern_support: usize,
    event_supports: &[usize],
) -> Result<f64, MinerError> {
    let den = *event_supports.iter().max().ok_or(MinerError::NoEvents)?;
    if den == 0 {
        return Err(MinerError::ZeroSupportEvent);
    }
    Ok(pattern_support as f64 / den as f64)
}

/// A single event that cleared the support band.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleEvent {
    pub symbol: Symbol,
    pub support: usize,
    pub fraction: f64,
}

/// An emitted pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct MinedPattern {
    pub pattern: TemporalPattern,
    pub support: usize,
    /// Support over database size.
    pub fraction: f64,
    pub confidence: f64,
    pub sequences: Vec<SeqId>,
    /// Instance bindings per supporting sequence (aligned with `sequences`);
    /// one tuple each, or up to [`WITNESS_CAP`] under `keep_all_witnesses`.
    pub witnesses: Option<Vec<Vec<WitnessTuple>>>,
}

/// Work counters for one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelStats {
    pub level: usize,
    /// Events eligible to extend patterns into this level.
    pub pool_size: usize,
    /// Distinct event combinations proposed.
    pub groups_generated: usize,
    /// Combinations registered after co-occurrence / bound checks.
    pub groups_surviving: usize,
    /// Relation assignments whose support was actually computed.
    pub candidates_checked: usize,
    pub patterns_stored: usize,
    pub patterns_emitted: usize,
}

/// Everything a mining run produces.
#[derive(Debug, Clone)]
pub struct MiningOutcome {
    /// Single events inside the support band, in symbol order.
    pub single_events: Vec<SingleEvent>,
    /// Emitted patterns, sorted by (length, canonical key).
    pub patterns: Vec<MinedPattern>,
    /// Per-level work counters, levels 2..
    pub levels: Vec<LevelStats>,
    pub hlh1: Hlh1,
    /// Level-k structures (index 0 is level 2). Stored contents ignore
    /// `sigma_max` by design.
    pub structures: Vec<Hlhk>,
}

/// Per ordered symbol pair: for each relation, the supporting sequences and
/// the first witnessing instance pair per sequence (both aligned).
#[derive(Debug, Clone, Default)]
struct PairScan {
    seqs: [Vec<SeqId>; 3],
    witnesses: [Vec<WitnessPair>; 3],
}

fn intersect(a: &[SeqId], b: &[SeqId]) -> Vec<SeqId> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersect_all(lists: &[&[SeqId]]) -> Vec<SeqId> {
    match lists.split_first() {
        None => Vec::new(),
        Some((first, rest)) => {
            let mut acc = first.to_vec();
            for list in rest {
                if acc.is_empty() {
                    break;
                }
                acc = intersect(&acc, list);
            }
            acc
        }
    }
}

/// Scan one ordered symbol pair over `co` sequences: enumerate instance
/// pairs (x of `a`, y of `b`) with distinct instances and `x` starting no
/// later than `y`, classify each, and collect per-relation sequence sets.
/// Ties on start are enumerated from both sides (by the symmetric call with
/// `a` and `b` swapped), so an instance pair starting together can witness a
/// pattern in either event order.
fn scan_ordered_pair(
    hlh1: &Hlh1,
    a: &Symbol,
    b: &Symbol,
    co: &[SeqId],
    rcfg: &RelationConfig,
) -> PairScan {
    let mut out = PairScan::default();
    for &seq in co {
        let xs = hlh1.instances(a, seq);
        let ys = hlh1.instances(b, seq);
        for (ix, x) in xs.iter().enumerate() {
            for (iy, y) in ys.iter().enumerate() {
                if a == b && ix == iy {
                    continue;
                }
                if x.start() > y.start() {
                    continue;
                }
                let relation = classify_relation(x, y, rcfg).expect("pair is start-ordered");
                if let Some(r) = relation.map(|rel| rel.index()) {
                    if out.seqs[r].last() != Some(&seq) {
                        out.seqs[r].push(seq);
                        out.witnesses[r].push((x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Lazily-filled memo of [`PairScan`]s keyed by ordered symbol-id pair.
#[derive(Debug, Default)]
struct Rel2 {
    memo: HashMap<(u32, u32), PairScan>,
}

impl Rel2 {
    fn insert(&mut self, a: &Symbol, b: &Symbol, scan: PairScan) {
        self.memo.insert((a.id(), b.id()), scan);
    }

    fn ensure(
        &mut self,
        hlh1: &Hlh1,
        a: &Symbol,
        b: &Symbol,
        rcfg: &RelationConfig,
    ) -> &PairScan {
        self.memo.entry((a.id(), b.id())).or_insert_with(|| {
            let co = intersect(hlh1.sequences(a), hlh1.sequences(b));
            scan_ordered_pair(hlh1, a, b, &co, rcfg)
        })
    }

    fn get(&self, a: &Symbol, b: &Symbol) -> &PairScan {
        self.memo
            .get(&(a.id(), b.id()))
            .expect("pair scan was ensured before use")
    }
}

fn max_single_support(hlh1: &Hlh1, events: &[Symbol]) -> usize {
    events
        .iter()
        .map(|e| hlh1.support(e))
        .max()
        .unwrap_or(0)
}

/// The (k-1)-event sub-pattern left after deleting one position.
fn sub_pattern(pattern: &TemporalPattern, drop: usize) -> TemporalPattern {
    let kept: Vec<usize> = (0..pattern.len()).filter(|&i| i != drop).collect();
    let events: Vec<Symbol> = kept.iter().map(|&i| pattern.events()[i].clone()).collect();
    let mut relations = Vec::with_capacity(kept.len() * (kept.len() - 1) / 2);
    for i in 0..kept.len() {
        for j in (i + 1)..kept.len() {
            relations.push(pattern.relation_between(kept[i], kept[j]));
        }
    }
    TemporalPattern::new(events, relations).expect("sub-pattern of a valid pattern is valid")
}

/// Relation assignments for the new triples (i, k-1), i = 0..k-1, proposed
/// for extending `prefix` by `next`.
fn propose_assignments(
    cfg: &MiningConfig,
    prefix: &PatternRecord,
    next: &Symbol,
    prev: &Hlhk,
    ph2: &Hlhk,
) -> Vec<Vec<Relation>> {
    let k_minus_1 = prefix.pattern.len();
    if !cfg.pruning.trans() {
        // Full cartesian product over the new triples.
        let mut out: Vec<Vec<Relation>> = vec![Vec::new()];
        for _ in 0..k_minus_1 {
            out = out
                .into_iter()
                .flat_map(|partial| {
                    RELATIONS.iter().map(move |&r| {
                        let mut next_partial = partial.clone();
                        next_partial.push(r);
                        next_partial
                    })
                })
                .collect();
        }
        return out;
    }

    // Transitivity narrowing. A qualifying extension induces two stored
    // sub-patterns: the sibling (prefix minus its last event, plus `next`
    // last) fixes the relations (i, k-1) for i < k-2, and a stored two-event
    // pattern "last R next" fixes the final triple. Enumerate exactly those.
    let prefix_events = prefix.pattern.events();
    let last = &prefix_events[k_minus_1 - 1];
    let mut sibling_events: Vec<Symbol> = prefix_events[..k_minus_1 - 1].to_vec();
    sibling_events.push(next.clone());

    let last_pair_relations: Vec<Relation> = match ph2.group(&[last.clone(), next.clone()]) {
        None => return Vec::new(),
        Some(group) => RELATIONS
            .iter()
            .copied()
            .filter(|r| {
                let key = format!("{} {} {}", last.label(), r.code(), next.label());
                group.pattern(&key).is_some()
            })
            .collect(),
    };
    if last_pair_relations.is_empty() {
        return Vec::new();
    }

    let mut out = Vec::new();
    if k_minus_1 == 1 {
        unreachable!("extension starts from two-event patterns");
    }
    if k_minus_1 == 2 {
        // No sibling beyond the two-event pattern (omega_1, next) itself.
        let Some(group) = prev.group(&sibling_events) else {
            return Vec::new();
        };
        for sibling in group.patterns() {
            if sibling.pattern.events() != sibling_events {
                continue;
            }
            for &r in &last_pair_relations {
                out.push(vec![sibling.pattern.relation_between(0, 1), r]);
            }
        }
        return out;
    }

    let Some(group) = prev.group(&sibling_events) else {
        return Vec::new();
    };
    for sibling in group.patterns() {
        if sibling.pattern.events() != sibling_events {
            continue;
        }
        // Shared prefix triples must agree with the pattern being extended.
        let shared = k_minus_1 - 1;
        let compatible = (0..shared).all(|i| {
            ((i + 1)..shared).all(|j| {
                sibling.pattern.relation_between(i, j) == prefix.pattern.relation_between(i, j)
            })
        });
        if !compatible {
            continue;
        }
        for &r in &last_pair_relations {
            let mut assignment: Vec<Relation> = (0..shared)
                .map(|i| sibling.pattern.relation_between(i, shared))
                .collect();
            assignment.push(r);
            out.push(assignment);
        }
    }
    out
}

/// Bindings for every triple of `pattern` in `seq`, as a capped cross
/// product over per-triple witness pairs.
fn all_witness_tuples(
    hlh1: &Hlh1,
    pattern: &TemporalPattern,
    seq: SeqId,
    rcfg: &RelationConfig,
) -> Vec<WitnessTuple> {
    let mut per_triple: Vec<Vec<WitnessPair>> = Vec::new();
    for triple in pattern.triples() {
        let xs = hlh1.instances(&triple.left, seq);
        let ys = hlh1.instances(&triple.right, seq);
        let same = triple.left == triple.right;
        let mut pairs = Vec::new();
        for (ix, x) in xs.iter().enumerate() {
            for (iy, y) in ys.iter().enumerate() {
                if same && ix == iy {
                    continue;
                }
                if x.start() > y.start() {
                    continue;
                }
                if classify_relation(x, y, rcfg).expect("pair is start-ordered")
                    == Some(triple.relation)
                {
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
        per_triple.push(pairs);
    }
    // Odometer over per-triple choices, lexicographic, capped.
    let mut tuples = Vec::new();
    let mut idx = vec![0usize; per_triple.len()];
    'outer: loop {
        tuples.push(
            idx.iter()
                .zip(&per_triple)
                .map(|(&i, pairs)| pairs[i].clone())
                .collect(),
        );
        if tuples.len() >= WITNESS_CAP {
            break;
        }
        for slot in (0..idx.len()).rev() {
            idx[slot] += 1;
            if idx[slot] < per_triple[slot].len() {
                continue 'outer;
            }
            idx[slot] = 0;
        }
        break;
    }
    tuples
}

fn emit(
    record: &PatternRecord,
    db_len: usize,
    cfg: &MiningConfig,
    hlh1: &Hlh1,
) -> MinedPattern {
    let witnesses = if cfg.emit_witnesses {
        if cfg.keep_all_witnesses {
            Some(
                record
                    .sequences
                    .iter()
                    .map(|&seq| all_witness_tuples(hlh1, &record.pattern, seq, &cfg.relation))
                    .collect(),
            )
        } else {
            record
                .witnesses
                .as_ref()
                .map(|per_seq| per_seq.iter().map(|tuple| vec![tuple.clone()]).collect())
        }
    } else {
        None
    };
    MinedPattern {
        pattern: record.pattern.clone(),
        support: record.support(),
        fraction: record.support() as f64 / db_len as f64,
        confidence: record.confidence,
        sequences: record.sequences.clone(),
        witnesses,
    }
}

/// Mine the database. See the module docs for semantics; the result is
/// identical across [`PruningMode`]s and deterministic for a fixed input and
/// configuration.
pub fn mine(db: &SequenceDatabase, cfg: &MiningConfig) -> Result<MiningOutcome, MinerError> {
    cfg.validate()?;
    let hlh1 = Hlh1::build(db);
    let n = db.len();
    let min_count = cfg.min_count(n);
    let max_count = cfg.max_count(n);

    // Single events. The extension pool ignores sigma_max: an event commoner
    // than the cap can still participate in rare patterns.
    let pool1: Vec<Symbol> = hlh1
        .symbols()
        .filter(|s| hlh1.support(s) >= min_count)
        .cloned()
        .collect();
    let single_events: Vec<SingleEvent> = pool1
        .iter()
        .filter(|s| hlh1.support(s) <= max_count)
        .map(|s| SingleEvent {
            symbol: s.clone(),
            support: hlh1.support(s),
            fraction: hlh1.support(s) as f64 / n as f64,
        })
        .collect();

    let mut rel2 = Rel2::default();
    let mut emitted: Vec<MinedPattern> = Vec::new();
    let mut levels: Vec<LevelStats> = Vec::new();
    let mut structures: Vec<Hlhk> = Vec::new();

    // Level 2: scan ordered symbol pairs.
    let mut stats2 = LevelStats {
        level: 2,
        pool_size: pool1.len(),
        ..LevelStats::default()
    };
    let mut hlh2 = Hlhk::new(2)?;
    let mut jobs: Vec<(Symbol, Symbol, Vec<SeqId>)> = Vec::new();
    for (ai, a) in pool1.iter().enumerate() {
        for b in &pool1[ai..] {
            stats2.groups_generated += 1;
            let co = intersect(hlh1.sequences(a), hlh1.sequences(b));
            if co.is_empty() {
                continue;
            }
            if cfg.pruning.apriori() {
                let den = max_single_support(&hlh1, &[a.clone(), b.clone()]);
                if co.len() < min_count || !cfg.conf_ok(co.len(), den) {
                    continue;
                }
            }
            hlh2.register_group(&[a.clone(), b.clone()], co.clone())?;
            stats2.groups_surviving += 1;
            jobs.push((a.clone(), b.clone(), co.clone()));
            if a != b {
                jobs.push((b.clone(), a.clone(), co));
            }
        }
    }
    let scans: Vec<PairScan> = jobs
        .par_iter()
        .map(|(a, b, co)| scan_ordered_pair(&hlh1, a, b, co, &cfg.relation))
        .collect();
    for ((a, b, _), scan) in jobs.iter().zip(scans) {
        let den = max_single_support(&hlh1, &[a.clone(), b.clone()]);
        for &relation in &RELATIONS {
            stats2.candidates_checked += 1;
            let seqs = &scan.seqs[relation.index()];
            if seqs.len() < min_count || !cfg.conf_ok(seqs.len(), den) {
                continue;
            }
            let record = PatternRecord {
                pattern: TemporalPattern::new(vec![a.clone(), b.clone()], vec![relation])?,
                sequences: seqs.clone(),
                confidence: seqs.len() as f64 / den as f64,
                witnesses: cfg.emit_witnesses.then(|| {
                    scan.witnesses[relation.index()]
                        .iter()
                        .map(|pair| vec![pair.clone()])
                        .collect()
                }),
            };
            hlh2.store_pattern(record.clone())?;
            stats2.patterns_stored += 1;
            if record.support() <= max_count {
                emitted.push(emit(&record, n, cfg, &hlh1));
                stats2.patterns_emitted += 1;
            }
        }
        rel2.insert(a, b, scan);
    }
    levels.push(stats2);
    structures.push(hlh2);

    // Levels k >= 3: extend stored patterns by one last event.
    let mut k = 3;
    loop {
        let prev = structures.last().expect("level 2 exists");
        if prev.groups().all(|g| g.pattern_count() == 0) {
            break;
        }
        if cfg.max_events.is_some_and(|cap| k > cap) {
            break;
        }

        let pool: Vec<Symbol> = if cfg.pruning.trans() {
            let mut set: BTreeSet<Symbol> = BTreeSet::new();
            for group in prev.groups().filter(|g| g.pattern_count() > 0) {
                set.extend(group.events().iter().cloned());
            }
            set.into_iter().collect()
        } else {
            pool1.clone()
        };

        let mut stats = LevelStats {
            level: k,
            pool_size: pool.len(),
            ..LevelStats::default()
        };

        // Propose and filter event combinations.
        let mut candidate_keys: BTreeSet<Vec<Symbol>> = BTreeSet::new();
        for group in prev.groups().filter(|g| g.pattern_count() > 0) {
            for s in &pool {
                let mut key = group.events().to_vec();
                key.push(s.clone());
                candidate_keys.insert(group_key(&key));
            }
        }
        stats.groups_generated = candidate_keys.len();

        let mut hlhk = Hlhk::new(k)?;
        let mut surviving: BTreeMap<Vec<Symbol>, usize> = BTreeMap::new();
        for key in &candidate_keys {
            let mut distinct: Vec<&Symbol> = key.iter().collect();
            distinct.dedup();
            let lists: Vec<&[SeqId]> = distinct.iter().map(|s| hlh1.sequences(s)).collect();
            let co = intersect_all(&lists);
            if co.is_empty() {
                continue;
            }
            let den = max_single_support(&hlh1, key);
            if cfg.pruning.apriori() && (co.len() < min_count || !cfg.conf_ok(co.len(), den)) {
                continue;
            }
            hlhk.register_group(key, co)?;
            surviving.insert(key.clone(), den);
            stats.groups_surviving += 1;
        }

        // Extend each stored pattern by each pool event.
        let mut records: Vec<PatternRecord> = Vec::new();
        let ph2 = &structures[0];
        for group in prev.groups() {
            for prefix in group.patterns() {
                let prefix_events = prefix.pattern.events().to_vec();
                for s in &pool {
                    let mut key = prefix_events.clone();
                    key.push(s.clone());
                    let key = group_key(&key);
                    let Some(&den) = surviving.get(&key) else {
                        continue;
                    };
                    for assignment in propose_assignments(cfg, prefix, s, prev, ph2) {
                        stats.candidates_checked += 1;
                        let mut seqs = prefix.sequences.clone();
                        for (i, &relation) in assignment.iter().enumerate() {
                            if seqs.is_empty() {
                                break;
                            }
                            let scan = rel2.ensure(&hlh1, &prefix_events[i], s, &cfg.relation);
                            seqs = intersect(&seqs, &scan.seqs[relation.index()]);
                        }
                        if seqs.len() < min_count || !cfg.conf_ok(seqs.len(), den) {
                            continue;
                        }
                        let pattern = prefix.pattern.extended(s.clone(), &assignment)?;
                        if cfg.strict_siblings && cfg.pruning.trans() {
                            let all_subs_stored = (0..pattern.len() - 1).all(|drop| {
                                let sub = sub_pattern(&pattern, drop);
                                prev.pattern(sub.events(), &sub.canonical_key()).is_some()
                            });
                            if !all_subs_stored {
                                continue;
                            }
                        }
                        let witnesses = cfg.emit_witnesses.then(|| {
                            seqs.iter()
                                .map(|&seq| {
                                    assemble_witness(
                                        &rel2, prefix, &assignment, s, seq, k,
                                    )
                                })
                                .collect()
                        });
                        records.push(PatternRecord {
                            pattern,
                            sequences: seqs.clone(),
                            confidence: seqs.len() as f64 / den as f64,
                            witnesses,
                        });
                    }
                }
            }
        }
        for record in records {
            hlhk.store_pattern(record.clone())?;
            stats.patterns_stored += 1;
            if record.support() <= max_count {
                emitted.push(emit(&record, n, cfg, &hlh1));
                stats.patterns_emitted += 1;
            }
        }
        levels.push(stats);
        structures.push(hlhk);
        k += 1;
    }

    emitted.sort_by_cached_key(|p| (p.pattern.len(), p.pattern.canonical_key()));
    Ok(MiningOutcome {
        single_events,
        patterns: emitted,
        levels,
        hlh1,
        structures,
    })
}

/// Witness tuple for an extended pattern in `seq`: prefix triples reuse the
/// prefix pattern's binding; each new triple (i, k-1) takes the memoized
/// first witness of its two-event set. Triples stay in canonical order.
fn assemble_witness(
    rel2: &Rel2,
    prefix: &PatternRecord,
    assignment: &[Relation],
    next: &Symbol,
    seq: SeqId,
    k: usize,
) -> WitnessTuple {
    let prefix_tuple = {
        let pos = prefix
            .sequences
            .binary_search(&seq)
            .expect("extension support is a subset of prefix support");
        &prefix.witnesses.as_ref().expect("witnesses enabled")[pos]
    };
    let prefix_events = prefix.pattern.events();
    let mut tuple = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            if j < k - 1 {
                tuple.push(prefix_tuple[pair_index(i, j, k - 1)].clone());
            } else {
                let scan = rel2.get(&prefix_events[i], next);
                let r = assignment[i].index();
                let pos = scan.seqs[r]
                    .binary_search(&seq)
                    .expect("supporting sequence has a witness");
                tuple.push(scan.witnesses[r][pos].clone());
            }
        }
    }
    tuple
}

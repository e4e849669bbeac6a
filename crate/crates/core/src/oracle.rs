//! Brute-force reference miner.
//!
//! Enumerates every ordered event tuple (with repetition) up to the event
//! cap and every relation assignment over its triples, computing supports by
//! direct scans of the database. It shares only the data model and the
//! relation classifier with the optimized miner — no lookup structures, no
//! memoized level-2 scans, no candidate generation — so agreement between
//! the two is meaningful evidence, not a shared bug. Exhaustive enumeration
//! is exponential; a workload budget refuses inputs it cannot afford.

use std::collections::HashMap;

use thiserror::Error;

use crate::miner::{MinedPattern, MinerError, MiningConfig};
use crate::model::{
    classify_relation, ModelError, Relation, RelationConfig, SeqId, Symbol, TemporalPattern,
    RELATIONS,
};
use crate::transform::SequenceDatabase;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("exhaustive enumeration needs an event cap; set max_events")]
    NeedsBound,
    #[error("oracle workload {required} exceeds the budget {budget}; shrink the database, the alphabet, or the event cap")]
    Budget { required: u128, budget: u128 },
    #[error(transparent)]
    Config(#[from] MinerError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Sequences containing `symbol`, by direct scan.
fn scan_support(db: &SequenceDatabase, symbol: &Symbol) -> Vec<SeqId> {
    db.sequences()
        .iter()
        .filter(|seq| seq.instances().iter().any(|i| &i.symbol == symbol))
        .map(|seq| seq.id)
        .collect()
}

/// For the ordered symbol pair (a, b): per relation, the sequences holding a
/// witnessing instance pair. Instance pairs are enumerated over distinct
/// positions with the left instance starting no later than the right one, so
/// equal starts are seen in both orientations.
fn realized_sets(
    db: &SequenceDatabase,
    a: &Symbol,
    b: &Symbol,
    rcfg: &RelationConfig,
) -> [Vec<SeqId>; 3] {
    let mut sets: [Vec<SeqId>; 3] = Default::default();
    for seq in db.sequences() {
        let instances = seq.instances();
        for (i, x) in instances.iter().enumerate() {
            if &x.symbol != a {
                continue;
            }
            for (j, y) in instances.iter().enumerate() {
                if i == j || &y.symbol != b || x.start() > y.start() {
                    continue;
                }
                let relation =
                    classify_relation(x, y, rcfg).expect("pair is start-ordered");
                if let Some(r) = relation {
                    let set = &mut sets[r.index()];
                    if set.last() != Some(&seq.id) {
                        set.push(seq.id);
                    }
                }
            }
        }
    }
    sets
}

fn intersect(a: &[SeqId], b: &[SeqId]) -> Vec<SeqId> {
    let mut out = Vec::new();
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

struct Oracle<'a> {
    db: &'a SequenceDatabase,
    cfg: &'a MiningConfig,
    symbols: Vec<Symbol>,
    support: HashMap<u32, usize>,
    realized: HashMap<(u32, u32), [Vec<SeqId>; 3]>,
    min_count: usize,
    max_count: usize,
    out: Vec<MinedPattern>,
}

impl Oracle<'_> {
    fn realized(&mut self, a: &Symbol, b: &Symbol) -> &[Vec<SeqId>; 3] {
        let key = (a.id(), b.id());
        if !self.realized.contains_key(&key) {
            let sets = realized_sets(self.db, a, b, &self.cfg.relation);
            self.realized.insert(key, sets);
        }
        &self.realized[&key]
    }

    /// Fill triple slots of `tuple` in (i, j) order, intersecting realized
    /// sequence sets; a dead branch is abandoned as soon as the running set
    /// is empty, which cannot lose qualifying patterns because sigma_min
    /// keeps empty support from ever qualifying.
    fn assign(
        &mut self,
        tuple: &[Symbol],
        slots: &[(usize, usize)],
        slot: usize,
        relations: &mut Vec<Relation>,
        seqs: &[SeqId],
    ) -> Result<(), ModelError> {
        if slot == slots.len() {
            let support = seqs.len();
            if support < self.min_count || support > self.max_count {
                return Ok(());
            }
            let den = tuple
                .iter()
                .map(|s| self.support[&s.id()])
                .max()
                .expect("tuple is nonempty");
            if (support as f64) < self.cfg.delta * den as f64 {
                return Ok(());
            }
            self.out.push(MinedPattern {
                pattern: TemporalPattern::new(tuple.to_vec(), relations.clone())?,
                support,
                fraction: support as f64 / self.db.len() as f64,
                confidence: support as f64 / den as f64,
                sequences: seqs.to_vec(),
                witnesses: None,
            });
            return Ok(());
        }
        let (i, j) = slots[slot];
        for r in RELATIONS {
            let narrowed = {
                let sets = self.realized(&tuple[i].clone(), &tuple[j].clone());
                intersect(seqs, &sets[r.index()])
            };
            if narrowed.is_empty() {
                continue;
            }
            relations.push(r);
            self.assign(tuple, slots, slot + 1, relations, &narrowed)?;
            relations.pop();
        }
        Ok(())
    }

    fn tuples(&mut self, len: usize, tuple: &mut Vec<Symbol>) -> Result<(), ModelError> {
        if tuple.len() == len {
            let slots: Vec<(usize, usize)> = (0..len)
                .flat_map(|i| ((i + 1)..len).map(move |j| (i, j)))
                .collect();
            let all: Vec<SeqId> = (1..=self.db.len() as SeqId).collect();
            let mut relations = Vec::with_capacity(slots.len());
            return self.assign(&tuple.clone(), &slots, 0, &mut relations, &all);
        }
        for s in self.symbols.clone() {
            tuple.push(s);
            self.tuples(len, tuple)?;
            tuple.pop();
        }
        Ok(())
    }
}

/// Mine by exhaustive enumeration. Requires an event cap and a workload
/// budget of at least `|alphabet|^cap * |database|`. The result matches
/// [`crate::miner::mine`]'s emitted patterns (sorted by length, then
/// canonical key); witnesses are not produced.
pub fn oracle_mine(
    db: &SequenceDatabase,
    cfg: &MiningConfig,
    budget: u128,
) -> Result<Vec<MinedPattern>, OracleError> {
    cfg.validate().map_err(OracleError::Config)?;
    let Some(cap) = cfg.max_events else {
        return Err(OracleError::NeedsBound);
    };

    let mut symbols: Vec<Symbol> = Vec::new();
    for seq in db.sequences() {
        for inst in seq.instances() {
            if !symbols.contains(&inst.symbol) {
                symbols.push(inst.symbol.clone());
            }
        }
    }
    symbols.sort();

    let required = (symbols.len() as u128)
        .checked_pow(cap as u32)
        .and_then(|t| t.checked_mul(db.len() as u128))
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(OracleError::Budget { required, budget });
    }

    let n = db.len();
    let support: HashMap<u32, usize> = symbols
        .iter()
        .map(|s| (s.id(), scan_support(db, s).len()))
        .collect();
    let mut oracle = Oracle {
        db,
        cfg,
        symbols,
        support,
        realized: HashMap::new(),
        min_count: ((cfg.sigma_min * n as f64).ceil() as usize).max(1),
        max_count: (cfg.sigma_max * n as f64).floor() as usize,
        out: Vec::new(),
    };
    for len in 2..=cap {
        oracle.tuples(len, &mut Vec::new())?;
    }
    let mut out = oracle.out;
    out.sort_by_cached_key(|p| (p.pattern.len(), p.pattern.canonical_key()));
    Ok(out)
}

/// Human-readable differences between two emitted-pattern lists, empty when
/// they agree. Compares canonical keys, supporting sequences, and confidence
/// (exact bits); witnesses are ignored.
pub fn diff_patterns(left: &[MinedPattern], right: &[MinedPattern]) -> Vec<String> {
    let index = |list: &[MinedPattern]| -> Vec<(String, Vec<SeqId>, u64)> {
        let mut v: Vec<_> = list
            .iter()
            .map(|p| {
                (
                    p.pattern.canonical_key(),
                    p.sequences.clone(),
                    p.confidence.to_bits(),
                )
            })
            .collect();
        v.sort();
        v
    };
    let (l, r) = (index(left), index(right));
    let mut diffs = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < l.len() || j < r.len() {
        match (l.get(i), r.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                if a.1 != b.1 {
                    diffs.push(format!(
                        "{}: sequences differ: {:?} vs {:?}",
                        a.0, a.1, b.1
                    ));
                } else if a.2 != b.2 {
                    diffs.push(format!(
                        "{}: confidence differs: {} vs {}",
                        a.0,
                        f64::from_bits(a.2),
                        f64::from_bits(b.2)
                    ));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                diffs.push(format!("only in left: {} {:?}", a.0, a.1));
                i += 1;
            }
            (Some(_), Some(b)) => {
                diffs.push(format!("only in right: {} {:?}", b.0, b.1));
                j += 1;
            }
            (Some(a), None) => {
                diffs.push(format!("only in left: {} {:?}", a.0, a.1));
                i += 1;
            }
            (None, Some(b)) => {
                diffs.push(format!("only in right: {} {:?}", b.0, b.1));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    diffs
}

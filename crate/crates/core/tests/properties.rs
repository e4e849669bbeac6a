//! Randomized cross-module properties: relation exclusivity, miner/oracle
//! agreement, support and confidence monotonicity, witness soundness.

use proptest::prelude::*;

use rtm_core::miner::{mine, MiningConfig, PruningMode};
use rtm_core::model::{
    classify_relation, relation_predicates, Alphabet, EventInstance, Interval,
    RelationConfig, SeqId, Symbol, TemporalPattern,
};
use rtm_core::oracle::{diff_patterns, oracle_mine};
use rtm_core::transform::SequenceDatabase;

/// (symbol index, start, duration) triples per sequence.
type RawSeqs = Vec<Vec<(usize, i64, i64)>>;

fn build_db(n_symbols: usize, raw: RawSeqs) -> SequenceDatabase {
    let mut alphabet = Alphabet::new();
    let symbols: Vec<Symbol> = (0..n_symbols)
        .map(|i| alphabet.intern(&format!("E{i}")).unwrap())
        .collect();
    let per_sequence = raw
        .into_iter()
        .map(|instances| {
            instances
                .into_iter()
                .map(|(s, start, dur)| {
                    EventInstance::new(
                        symbols[s].clone(),
                        Interval::new(start, start + dur).unwrap(),
                    )
                })
                .collect()
        })
        .collect();
    SequenceDatabase::from_instances(alphabet, per_sequence, 60)
}

fn db_strategy() -> impl Strategy<Value = SequenceDatabase> {
    (2usize..=5, 1usize..=6).prop_flat_map(|(n_symbols, n_seqs)| {
        proptest::collection::vec(
            proptest::collection::vec((0..n_symbols, 0i64..40, 1i64..12), 0..8),
            n_seqs,
        )
        .prop_map(move |raw| build_db(n_symbols, raw))
    })
}

fn config_strategy() -> impl Strategy<Value = MiningConfig> {
    (
        prop_oneof![Just(0.15), Just(0.34), Just(0.5)],
        prop_oneof![Just(0.6), Just(0.8), Just(1.0)],
        prop_oneof![Just(0.0), Just(0.3), Just(0.7)],
        prop_oneof![Just((0i64, 1i64)), Just((1, 3)), Just((2, 5))],
    )
        .prop_map(|(sigma_min, sigma_max, delta, (epsilon, d_overlap))| MiningConfig {
            sigma_min,
            sigma_max,
            delta,
            relation: RelationConfig::new(epsilon, d_overlap).unwrap(),
            max_events: Some(3),
            ..MiningConfig::default()
        })
}

/// Independent test-side support scan: a sequence supports a pattern when
/// every triple is witnessed by some start-ordered pair of distinct
/// instances.
fn scan_pattern_support(
    db: &SequenceDatabase,
    pattern: &TemporalPattern,
    rcfg: &RelationConfig,
) -> Vec<SeqId> {
    db.sequences()
        .iter()
        .filter(|seq| {
            pattern.triples().iter().all(|t| {
                let instances = seq.instances();
                instances.iter().enumerate().any(|(i, x)| {
                    x.symbol == t.left
                        && instances.iter().enumerate().any(|(j, y)| {
                            i != j
                                && y.symbol == t.right
                                && x.start() <= y.start()
                                && classify_relation(x, y, rcfg).unwrap() == Some(t.relation)
                        })
                })
            })
        })
        .map(|seq| seq.id)
        .collect()
}

fn scan_symbol_support(db: &SequenceDatabase, symbol: &Symbol) -> usize {
    db.sequences()
        .iter()
        .filter(|seq| seq.instances().iter().any(|i| &i.symbol == symbol))
        .count()
}

/// The sub-pattern left after deleting one event position.
fn drop_position(pattern: &TemporalPattern, drop: usize) -> TemporalPattern {
    let kept: Vec<usize> = (0..pattern.len()).filter(|&i| i != drop).collect();
    let events = kept.iter().map(|&i| pattern.events()[i].clone()).collect();
    let mut relations = Vec::new();
    for a in 0..kept.len() {
        for b in (a + 1)..kept.len() {
            relations.push(pattern.relation_between(kept[a], kept[b]));
        }
    }
    TemporalPattern::new(events, relations).unwrap()
}

fn confidence_of(db: &SequenceDatabase, pattern: &TemporalPattern, support: usize) -> f64 {
    let den = pattern
        .events()
        .iter()
        .map(|e| scan_symbol_support(db, e))
        .max()
        .unwrap();
    support as f64 / den as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// At most one relation can hold for a start-ordered interval pair —
    /// unconditionally at zero tolerance, and with every duration longer
    /// than twice the tolerance otherwise.
    #[test]
    fn relations_are_mutually_exclusive(
        a_start in -50i64..50,
        a_dur in 1i64..30,
        gap in 0i64..30,
        b_dur in 1i64..30,
        epsilon in 0i64..3,
        extra in 1i64..4,
    ) {
        let d_overlap = 2 * epsilon + extra;
        let cfg = RelationConfig::new(epsilon, d_overlap).unwrap();
        let a = Interval::new(a_start, a_start + a_dur + 2 * epsilon).unwrap();
        let b_start = a_start + gap;
        let b = Interval::new(b_start, b_start + b_dur + 2 * epsilon).unwrap();
        let hits = relation_predicates(&a, &b, &cfg)
            .iter()
            .filter(|&&p| p)
            .count();
        prop_assert!(hits <= 1, "{a} vs {b} matched {hits} relations");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every pruning mode emits exactly the oracle's patterns.
    #[test]
    fn miner_matches_oracle(db in db_strategy(), base in config_strategy()) {
        let want = oracle_mine(&db, &base, 1 << 24).unwrap();
        for mode in PruningMode::ALL_MODES {
            let cfg = MiningConfig { pruning: mode, ..base.clone() };
            let got = mine(&db, &cfg).unwrap();
            let diffs = diff_patterns(&got.patterns, &want);
            prop_assert!(
                diffs.is_empty(),
                "mode {mode} diverges from the oracle:\n{}",
                diffs.join("\n")
            );
        }
    }

    /// Emitted supports are exactly the direct-scan supports, shrink when a
    /// pattern grows, and confidence never rises with growth.
    #[test]
    fn support_and_confidence_are_anti_monotone(
        db in db_strategy(),
        base in config_strategy(),
    ) {
        let out = mine(&db, &base).unwrap();
        for mined in &out.patterns {
            let scanned = scan_pattern_support(&db, &mined.pattern, &base.relation);
            prop_assert_eq!(&scanned, &mined.sequences, "stored support must match a scan");
            let conf = confidence_of(&db, &mined.pattern, mined.support);
            prop_assert_eq!(conf.to_bits(), mined.confidence.to_bits());

            if mined.pattern.len() > 2 {
                for drop in 0..mined.pattern.len() {
                    let sub = drop_position(&mined.pattern, drop);
                    let sub_support = scan_pattern_support(&db, &sub, &base.relation);
                    prop_assert!(
                        mined.sequences.iter().all(|s| sub_support.contains(s)),
                        "support of {} is not contained in its sub-pattern {}",
                        mined.pattern.canonical_key(),
                        sub.canonical_key()
                    );
                    let sub_conf = confidence_of(&db, &sub, sub_support.len());
                    prop_assert!(
                        sub_conf >= mined.confidence,
                        "confidence rose from sub-pattern {} ({sub_conf}) to {} ({})",
                        sub.canonical_key(),
                        mined.pattern.canonical_key(),
                        mined.confidence
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Each witness pair classifies to its triple's relation, with matching
    /// symbols, inside the right sequence.
    #[test]
    fn witnesses_are_sound(db in db_strategy(), base in config_strategy()) {
        let cfg = MiningConfig { emit_witnesses: true, ..base };
        let out = mine(&db, &cfg).unwrap();
        for mined in &out.patterns {
            let witnesses = mined.witnesses.as_ref().unwrap();
            prop_assert_eq!(witnesses.len(), mined.sequences.len());
            let triples = mined.pattern.triples();
            for (seq, per_seq) in mined.sequences.iter().zip(witnesses) {
                for tuple in per_seq {
                    prop_assert_eq!(tuple.len(), triples.len());
                    for (pair, triple) in tuple.iter().zip(&triples) {
                        prop_assert_eq!(&pair.0.symbol, &triple.left);
                        prop_assert_eq!(&pair.1.symbol, &triple.right);
                        let got = classify_relation(&pair.0, &pair.1, &cfg.relation).unwrap();
                        prop_assert_eq!(got, Some(triple.relation));
                        let seq_instances = db.sequence(*seq).unwrap().instances();
                        prop_assert!(seq_instances.contains(&pair.0));
                        prop_assert!(seq_instances.contains(&pair.1));
                    }
                }
            }
        }
    }
}

/// Relation totality does not hold: at zero tolerance a pair can satisfy no
/// relation at all (a short crossing below the overlap floor). Freezing this
/// keeps anyone from "simplifying" the classifier into a total function.
#[test]
fn gaps_between_relations_exist() {
    let cfg = RelationConfig::new(0, 2).unwrap();
    let a = Interval::new(0, 10).unwrap();
    let b = Interval::new(9, 20).unwrap();
    assert_eq!(relation_predicates(&a, &b, &cfg), [false, false, false]);
}

/// A miner result and an oracle result disagree loudly, not silently, when
/// configurations differ.
#[test]
fn diff_catches_configuration_skew() {
    let db = build_db(2, vec![vec![(0, 0, 10), (1, 0, 10)], vec![(0, 0, 5)]]);
    let tight = MiningConfig {
        sigma_min: 0.5,
        sigma_max: 1.0,
        delta: 0.0,
        max_events: Some(2),
        ..MiningConfig::default()
    };
    // A cap below 1/N empties the report entirely.
    let loose = MiningConfig {
        sigma_min: 0.25,
        sigma_max: 0.4,
        ..tight.clone()
    };
    let a = mine(&db, &tight).unwrap().patterns;
    let b = oracle_mine(&db, &loose, 1 << 20).unwrap();
    assert!(!diff_patterns(&a, &b).is_empty());
    let b = oracle_mine(&db, &tight, 1 << 20).unwrap();
    assert!(diff_patterns(&a, &b).is_empty());
}

/// Self-pairs: two instances of one symbol in one sequence can back a
/// pattern whose events repeat, and both the miner and the oracle see it.
#[test]
fn repeated_event_patterns_agree() {
    let db = build_db(
        2,
        vec![
            vec![(0, 0, 20), (0, 5, 10), (1, 0, 8)],
            vec![(0, 3, 9), (0, 3, 9)],
        ],
    );
    let cfg = MiningConfig {
        sigma_min: 0.5,
        sigma_max: 1.0,
        delta: 0.0,
        max_events: Some(3),
        ..MiningConfig::default()
    };
    let want = oracle_mine(&db, &cfg, 1 << 20).unwrap();
    assert!(
        want.iter()
            .any(|p| p.pattern.canonical_key() == "E0 C E0"),
        "oracle must see the self-contained pair"
    );
    for mode in PruningMode::ALL_MODES {
        let got = mine(&db, &MiningConfig { pruning: mode, ..cfg.clone() }).unwrap();
        let diffs = diff_patterns(&got.patterns, &want);
        assert!(diffs.is_empty(), "mode {mode}:\n{}", diffs.join("\n"));
    }
}

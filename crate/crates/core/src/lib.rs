//! Rare temporal pattern mining over interval sequences.
//!
//! The pipeline has two phases. [`transform`] turns raw numeric time series
//! into a temporal sequence database: samples are symbolized through value
//! bins, merged into event instances (symbol + interval), and cut into fixed
//! windows. [`miner`] then searches that database for *rare* temporal
//! patterns — conjunctions of pairwise interval relations (follows, contains,
//! overlaps) whose support lies in a band `[sigma_min, sigma_max]` and whose
//! all-confidence clears a floor `delta` — using hierarchical lookup hash
//! structures ([`hlh`]) and two prune families (apriori-style support/
//! confidence filtering and transitivity-based candidate narrowing).
//!
//! [`oracle`] holds an independent brute-force miner used to cross-check the
//! optimized search on small inputs.

#[cfg(test)]
pub(crate) mod fixtures;
pub mod hlh;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod transform;

pub use model::{
    classify_intervals, classify_relation, pair_index, relation_predicates, Alphabet,
    EventInstance, Interval, ModelError, Relation, RelationConfig, RelationTriple, SeqId, Symbol,
    TemporalEvent, TemporalPattern, Tick, RELATIONS,
};
pub use transform::{
    build_sequence_db, extract_instances, symbolize, windowed_sequence_db, Bin, NanPolicy,
    SequenceDatabase, SymbolicSeries, SymbolizationRule, TemporalSequence, TimeSeries,
    TransformError,
};

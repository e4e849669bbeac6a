//! Benchmark crate; see `benches/mining.rs`.

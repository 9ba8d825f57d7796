//! Criterion benchmarks for `raney-core`; see `benches/core.rs`.

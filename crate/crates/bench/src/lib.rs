//! Criterion benchmarks for the filtering and generation paths; see `benches/`.

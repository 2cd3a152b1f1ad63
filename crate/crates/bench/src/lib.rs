//! Criterion benchmarks for generation, construction and the oracle; see `benches/`.

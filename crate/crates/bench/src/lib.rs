//! Criterion benchmarks for `lucaslp-core`; see `benches/`.

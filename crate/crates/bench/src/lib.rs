//! Criterion benchmarks for basesem; see `benches/`.

//! Criterion benchmarks of the core algorithms; see `benches/`.

//! Criterion benchmarks for `rexosc-core`; see `benches/`.

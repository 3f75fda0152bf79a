//! Criterion benchmarks for the `digold-core` kernels; see `benches/`.

//! Criterion benchmarks for the ripbound kernels; see `benches/`.

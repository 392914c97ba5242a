//! Criterion benchmarks of the algebra kernels; see `benches/kernels.rs`.

//! Criterion benchmarks for the exact solver, the oracles and the checker.
//! Run with `cargo bench -p cgstp-bench`.

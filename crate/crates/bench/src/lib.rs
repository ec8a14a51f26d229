//! Benchmark-only crate; see `benches/checkers.rs`.

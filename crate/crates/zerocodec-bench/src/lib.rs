//! Benchmark-only crate; see `benches/codecs.rs`.

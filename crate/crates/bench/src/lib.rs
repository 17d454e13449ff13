//! Benchmarks for pgd-core live in benches/.

//! Benchmarks for the exact kernels.

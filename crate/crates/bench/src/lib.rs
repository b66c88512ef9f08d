//! Benchmark-only crate; see `benches/kernels.rs`.
//!
//! Deterministic inputs for the benchmarks live here so the numbers are
//! comparable across runs.

use thetacert_core::SymMatrix;

/// Reproducible dense symmetric test matrix with entries in [-1, 1).
pub fn test_matrix(dim: usize) -> SymMatrix {
    let mut state = 0x9e3779b97f4a7c15u64 ^ (dim as u64);
    let mut next = move || {
        // splitmix64
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z as f64 / u64::MAX as f64) * 2.0 - 1.0
    };
    SymMatrix::from_fn(dim, |_, _| next())
}

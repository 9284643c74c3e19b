//! Tolerances and order-stable reductions.
//!
//! Verified quantities are either integers (compared exactly) or algebraic
//! numbers evaluated as sums of at most ~4*10^6 unit-modulus terms in double
//! precision; 1e-9 relative covers the accumulated rounding with two orders
//! of margin. Float reductions that feed reports are summed in a fixed chunk
//! order so repeated runs are byte-identical.

use num_complex::Complex64;
use rayon::prelude::*;

/// Relative tolerance used for every float assertion in the crate.
pub const TOL: f64 = 1e-9;

/// `|a - b| <= TOL * max(scale, |a|, |b|, 1)`.
pub fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TOL * scale.abs().max(a.abs()).max(b.abs()).max(1.0)
}

pub fn cclose(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= TOL * scale.abs().max(a.norm()).max(b.norm()).max(1.0)
}

const CHUNK: usize = 1 << 14;

/// Parallel sum with a deterministic reduction order.
pub fn par_sum_f64<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    if n <= CHUNK {
        return (0..n).map(&term).sum();
    }
    let partials: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(&term).sum::<f64>()
        })
        .collect();
    partials.iter().sum()
}

/// Parallel complex sum with a deterministic reduction order.
pub fn par_sum_c64<F>(n: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    if n <= CHUNK {
        return (0..n).map(&term).sum();
    }
    let partials: Vec<Complex64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(&term).sum::<Complex64>()
        })
        .collect();
    partials.iter().sum()
}

/// Parallel integer sum (exact, order-free).
pub fn par_sum_u64<F>(n: usize, term: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    (0..n).into_par_iter().map(term).sum()
}

//! Order-preserving map helpers and deterministic reductions.
//!
//! With the `parallel` feature the maps run on the rayon pool; without it they
//! run sequentially. Output order never depends on scheduling, and reductions
//! run a compensated sum over the collected values in index order, so results
//! are identical across thread counts.

use accurate::sum::Sum2;
use accurate::traits::*;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Compensated sum in iteration order; exact whenever the partial sums of
/// dyadic inputs are representable.
pub fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Sum2::zero();
    for v in values {
        acc += v;
    }
    acc.sum()
}

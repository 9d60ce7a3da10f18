//! Deterministic data-parallel helpers.
//!
//! Every reduction splits its input into fixed-size chunks, reduces each chunk
//! sequentially and then folds the chunk results in index order. The result is
//! therefore bit-identical for any thread count, and identical to the build
//! without the `parallel` feature.

use num_complex::Complex64;

/// Number of items reduced sequentially inside one parallel task.
pub const CHUNK: usize = 256;

/// Ordered complex sum of `f` over `items`.
pub fn sum_complex<T, F>(items: &[T], f: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Complex64 + Sync,
{
    let chunk_sum = |chunk: &[T]| chunk.iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + f(x));
    chunk_results(items, chunk_sum)
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
}

/// Ordered real sum of `f` over `items`.
pub fn sum_real<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let chunk_sum = |chunk: &[T]| chunk.iter().fold(0.0, |acc, x| acc + f(x));
    chunk_results(items, chunk_sum)
        .into_iter()
        .fold(0.0, |acc, x| acc + x)
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn chunk_results<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&[T]) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_chunks(CHUNK).map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.chunks(CHUNK).map(f).collect()
    }
}

//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without it
//! they are plain iterator loops. Reductions go through fixed-size chunks that
//! are combined in index order, so results are bitwise identical whichever
//! backend or thread count is used.

/// Chunk length used by ordered reductions.
pub const REDUCE_CHUNK: usize = 4096;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every element in place.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    items.par_iter_mut().for_each(f);
    #[cfg(not(feature = "parallel"))]
    items.iter_mut().for_each(f);
}

/// Applies `f(index, chunk)` to consecutive mutable chunks of length `len`.
pub fn for_each_chunk_mut<T, F>(items: &mut [T], len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    items
        .par_chunks_mut(len)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    items.chunks_mut(len).enumerate().for_each(|(i, c)| f(i, c));
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..n).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return (0..n).map(f).collect();
}

/// Maps `f` over the elements of a slice, preserving order.
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return items.iter().map(f).collect();
}

/// Maps `f` over fixed chunks of `items` and returns the per-chunk results in
/// chunk order. Callers fold the returned vector sequentially.
pub fn map_chunks<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_chunks(REDUCE_CHUNK).map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return items.chunks(REDUCE_CHUNK).map(f).collect();
}

/// Ordered sum of `f` over `items`.
pub fn sum_by<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    map_chunks(items, |c| c.iter().map(&f).sum::<f64>())
        .into_iter()
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_sum_matches_sequential_chunking() {
        let xs: Vec<f64> = (0..20_000).map(|i| (i as f64).sin() * 1e-3).collect();
        let expected: f64 = xs
            .chunks(REDUCE_CHUNK)
            .map(|c| c.iter().sum::<f64>())
            .sum();
        assert_eq!(sum_by(&xs, |x| *x).to_bits(), expected.to_bits());
    }

    #[test]
    fn map_range_keeps_order() {
        assert_eq!(map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}

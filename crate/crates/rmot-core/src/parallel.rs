//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the loops fan out over rayon;
//! without it they run in place. Callers are written so the output is
//! bit-identical either way: each index owns its random stream and results
//! are collected in index order before any reduction.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, preserving index order in the output.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
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

/// Maps `f` over the items of a slice, preserving order.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_indexed_matches_sequential_reference() {
        let got = map_indexed(1000, |i| (i as u64).wrapping_mul(2654435761));
        let want: Vec<u64> = (0..1000).map(|i| (i as u64).wrapping_mul(2654435761)).collect();
        assert_eq!(got, want);
    }
}

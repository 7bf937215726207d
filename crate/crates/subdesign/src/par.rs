//! Order-preserving index maps, parallel when the `parallel` feature is on.

/// Computes `f(i)` for `i in 0..n`, returning results in index order regardless of
/// how the work was scheduled.
pub fn map_indices<T, F>(n: u128, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u128) -> T + Sync + Send,
{
    let n = u64::try_from(n).expect("index space exceeds u64");
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(|i| f(i as u128)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(|i| f(i as u128)).collect()
    }
}

//! Data-parallel replica/profile mapping with a sequential fallback.
//!
//! Results are collected in index order, so the output (and anything
//! folded from it in order) is bit-identical whether the work ran on one
//! thread or many.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n` in parallel when the `parallel` feature is on.
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
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

/// Always-sequential variant, kept public so benchmarks can compare the
/// two paths directly under the same feature set.
pub fn indexed_map_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = |i: usize| {
            let mut x = 1.0f64;
            for k in 1..50 {
                x = x * (i as f64 + 1.0).sqrt() / (k as f64) + 0.3;
            }
            x
        };
        let a = indexed_map(257, f);
        let b = indexed_map_seq(257, f);
        assert_eq!(a, b);
    }
}

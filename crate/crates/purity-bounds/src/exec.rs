//! Execution helpers with a fixed reduction shape.
//!
//! Both entry points build the same computation tree whether or not the
//! `parallel` feature is enabled; rayon only changes which thread runs a
//! subtree. Floating-point reductions therefore produce bit-identical
//! results in sequential and parallel builds.

/// Map `f` over `0..n` preserving index order.
pub(crate) fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

const LEAF: usize = 256;

/// Pairwise map-reduce over `lo..hi`: split at the midpoint down to runs
/// of at most [`LEAF`] indices, fold each run left-to-right, combine the
/// halves. The tree depends only on the range, never on thread timing.
pub(crate) fn pairwise_reduce<T, M, C>(lo: usize, hi: usize, map: &M, combine: &C) -> T
where
    T: Send,
    M: Fn(usize) -> T + Sync,
    C: Fn(T, T) -> T + Sync,
{
    debug_assert!(lo < hi);
    if hi - lo <= LEAF {
        let mut acc = map(lo);
        for i in lo + 1..hi {
            acc = combine(acc, map(i));
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    #[cfg(feature = "parallel")]
    {
        let (a, b) = rayon::join(
            || pairwise_reduce(lo, mid, map, combine),
            || pairwise_reduce(mid, hi, map, combine),
        );
        combine(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let a = pairwise_reduce(lo, mid, map, combine);
        let b = pairwise_reduce(mid, hi, map, combine);
        combine(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_collect_preserves_order() {
        let v = map_collect(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
    }

    #[test]
    fn pairwise_reduce_matches_known_sum() {
        let s: u64 = pairwise_reduce(0, 10_001, &|i| i as u64, &|a, b| a + b);
        assert_eq!(s, 10_000 * 10_001 / 2);
    }

    #[test]
    fn pairwise_tree_shape_is_range_only() {
        // Same float sum irrespective of leaf boundaries having run in
        // any order; compare against an explicitly sequential rebuild of
        // the same tree.
        fn seq_tree(lo: usize, hi: usize) -> f64 {
            if hi - lo <= LEAF {
                return (lo..hi).map(|i| 1.0 / (i as f64 + 1.0)).fold(0.0, |a, b| a + b);
            }
            let mid = lo + (hi - lo) / 2;
            seq_tree(lo, mid) + seq_tree(mid, hi)
        }
        let par: f64 = pairwise_reduce(0, 100_000, &|i| 1.0 / (i as f64 + 1.0), &|a, b| a + b);
        assert_eq!(par.to_bits(), seq_tree(0, 100_000).to_bits());
    }
}

//! Data-parallel map with a sequential twin.
//!
//! With the `parallel` feature (default) `map` fans out over rayon's global
//! pool; without it, `map` degrades to the sequential loop. `map_seq` is
//! always sequential so benchmarks can compare the two in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every item, in parallel when the feature allows.
pub fn map<I, R, F>(items: Vec<I>, f: F) -> Vec<R>
where
    I: Send,
    R: Send,
    F: Fn(I) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential twin of `map`, independent of the feature flag.
pub fn map_seq<I, R, F>(items: Vec<I>, f: F) -> Vec<R>
where
    F: Fn(I) -> R,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_maps_agree() {
        let sq = |n: u64| n * n;
        let input: Vec<u64> = (0..100).collect();
        assert_eq!(map(input.clone(), sq), map_seq(input, sq));
    }
}

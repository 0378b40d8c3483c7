//! Runs a function over independent inputs. With the `parallel` feature the
//! work is spread over the rayon pool; otherwise it runs in order. Output
//! order always matches input order.

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Whether [`map`] runs in parallel in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

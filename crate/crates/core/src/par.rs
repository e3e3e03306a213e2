//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the helpers fan out over rayon's
//! global pool. Without it, or inside [`sequential`], they run in order on the
//! calling thread. Callers only ever reduce results with order-independent
//! exact operations, so both paths produce identical values.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every helper in this module forced onto the current thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    struct Restore(bool);
    impl Drop for Restore {
        fn drop(&mut self) {
            FORCE_SEQUENTIAL.with(|flag| flag.set(self.0));
        }
    }
    let previous = FORCE_SEQUENTIAL.with(|flag| flag.replace(true));
    let _restore = Restore(previous);
    f()
}

/// True when the helpers will dispatch to rayon.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(Cell::get)
}

/// `(0..len).map(f).collect()`, possibly in parallel. Output order is preserved.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && len > 1 {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

/// `items.iter().map(f).collect()`, possibly in parallel. Output order is preserved.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Splits `0..len` into contiguous chunks of at most `chunk` indices.
pub fn chunks(len: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    let mut out = Vec::with_capacity(len.div_ceil(chunk) as usize);
    let mut start = 0;
    while start < len {
        let end = (start + chunk).min(len);
        out.push((start, end));
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_scope_restores_flag() {
        let before = is_parallel();
        sequential(|| assert!(!is_parallel()));
        assert_eq!(is_parallel(), before);
    }

    #[test]
    fn map_range_preserves_order() {
        let par = map_range(100, |i| i * i);
        let seq = sequential(|| map_range(100, |i| i * i));
        assert_eq!(par, seq);
        assert_eq!(par[7], 49);
    }

    #[test]
    fn chunking_covers_range() {
        assert_eq!(chunks(10, 4), vec![(0, 4), (4, 8), (8, 10)]);
        assert!(chunks(0, 4).is_empty());
    }
}

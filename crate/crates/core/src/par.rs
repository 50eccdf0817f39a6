//! Execution policy for the data-parallel loops.
//!
//! Every parallel loop here is an indexed map whose results are collected in
//! index order, so the outcome never depends on scheduling.

/// Selects how per-cell and per-face loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Serial,
    /// Rayon work-stealing pool. Falls back to serial when the crate is
    /// built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Serial
        }
    }
}

impl Execution {
    /// Whether loops actually run on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `(0..n).map(f).collect()`, possibly in parallel.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Runs three independent closures, concurrently when parallel.
    pub fn join3<A, B, C, RA, RB, RC>(self, a: A, b: B, c: C) -> (RA, RB, RC)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        C: FnOnce() -> RC + Send,
        RA: Send,
        RB: Send,
        RC: Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            let (ra, (rb, rc)) = rayon::join(a, || rayon::join(b, c));
            return (ra, rb, rc);
        }
        (a(), b(), c())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        for exec in [Execution::Serial, Execution::Parallel] {
            let v = exec.map(1000, |i| i * i);
            assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        }
    }

    #[test]
    fn join3_returns_in_argument_order() {
        let (a, b, c) = Execution::Parallel.join3(|| 1, || "two", || 3.0);
        assert_eq!((a, b, c), (1, "two", 3.0));
    }
}

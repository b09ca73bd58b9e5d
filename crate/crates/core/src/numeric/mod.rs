//! Numerical building blocks shared by the function-theory modules.

pub mod dd;
pub mod elliptic;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod spectral;

use crate::C64;

/// Principal square root; the cut lies on the negative real axis.
#[inline]
pub fn sqrt_p(z: C64) -> C64 {
    z.sqrt()
}

/// Largest modulus in a slice.
pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Worker count: `LOOPSOLITON_THREADS` if set, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("LOOPSOLITON_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Order-preserving parallel map over scoped threads.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = thread_count().min(items.len()).max(1);
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

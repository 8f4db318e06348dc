//! Tiny deterministic data parallelism: fill a vector of row results with a
//! pure per-index function, spreading rows over threads. Results land in
//! index order no matter the thread count, so output never depends on
//! scheduling. DELAUNAY_DEFORM_THREADS caps the worker count.

/// The worker count: the smaller of available parallelism and the
/// DELAUNAY_DEFORM_THREADS override (minimum 1).
pub(crate) fn thread_count() -> usize {
    let avail = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("DELAUNAY_DEFORM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(cap) if cap >= 1 => avail.min(cap),
        _ => avail,
    }
}

/// Computes f(0..n) into a Vec, in parallel, preserving index order.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = thread_count().min(n.max(1));
    if workers <= 1 || n < 2 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = Vec::with_capacity(n);
    out.resize_with(n, || None);
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slots) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (k, slot) in slots.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk + k));
                }
            });
        }
    });
    out.into_iter().map(|s| s.expect("worker filled slot")).collect()
}

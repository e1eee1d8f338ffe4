//! Workbench drivers around `polarforge-core`: configuration and file
//! formats, parallel simulation campaigns, scaling-coefficient training,
//! decoding-threshold search, and the built-in oracle self test.
//!
//! The `polarforge` binary in this crate fronts all of it; everything is
//! also callable as a library, which is how the integration and
//! acceptance suites drive it.

pub mod alphas;
pub mod campaign;
pub mod config;
pub mod files;
pub mod selftest;
pub mod thresholds;

pub use polarforge_core as core;

/// Version string stamped into run manifests.
pub fn version_string() -> String {
    format!("polarforge {}", env!("CARGO_PKG_VERSION"))
}

/// Worker-count resolution: explicit config beats the `POLARFORGE_THREADS`
/// environment variable, which beats the machine's available parallelism.
pub fn resolve_workers(configured: Option<usize>) -> usize {
    if let Some(w) = configured {
        return w.max(1);
    }
    if let Ok(v) = std::env::var("POLARFORGE_THREADS") {
        if let Ok(w) = v.trim().parse::<usize>() {
            if w >= 1 {
                return w;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Build a dedicated rayon pool of the given size.
pub fn make_pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?)
}

//! Decoding-threshold search with words evaluated in parallel.
//!
//! Reproduces the sequential evolution from the core crate exactly: the
//! population, permutations, and sample streams come from the same seeded
//! generator, and word updates are independent, so farming them out
//! changes nothing but wall time.

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use polarforge_core::channel::ebn0_to_sigma;
use polarforge_core::mcde::{
    de_rng, init_population, permute_population, population_stats, DeConfig, DeRun,
};
use polarforge_core::product::{AlphaSchedule, ProductCodeSpec};
use polarforge_core::scl::SclDecoder;

use crate::{make_pool, resolve_workers};

/// Density evolution at one SNR with parallel word updates; bit-identical
/// to [`polarforge_core::mcde::run_de`].
pub fn run_de_parallel(
    spec: &ProductCodeSpec,
    ebn0_db: f64,
    alphas: &AlphaSchedule,
    config: &DeConfig,
    pool: &rayon::ThreadPool,
) -> Result<DeRun> {
    let sigma = ebn0_to_sigma(ebn0_db, spec.rate().value())?;
    let mut rng = de_rng(config.seed);
    let mut pop = init_population(spec, sigma, config.n_samples, &mut rng)?;
    let eps = config.effective_epsilon();
    let mut stats = Vec::with_capacity(config.max_half_iterations);
    let mut converged = false;
    for l in 1..=config.max_half_iterations {
        let code = if l % 2 == 1 {
            spec.row_code()
        } else {
            spec.col_code()
        };
        let n = code.len();
        let alpha = alphas.alpha_for(l);
        permute_population(&mut pop, &mut rng);
        let (l_ch, v) = pop.split_mut();
        pool.install(|| {
            v.par_chunks_mut(n)
                .zip(l_ch.par_chunks(n))
                .try_for_each_init(
                    || SclDecoder::new(code.clone()),
                    |dec, (vc, lc)| {
                        polarforge_core::mcde::evolve_word(
                            dec,
                            lc,
                            vc,
                            alpha,
                            config.list_size,
                            config.escl,
                        )
                    },
                )
        })?;
        pop.advance();
        let s = population_stats(&pop);
        stats.push(s);
        if s.p_neg < eps {
            converged = true;
            break;
        }
    }
    Ok(DeRun {
        ebn0_db,
        stats,
        converged,
    })
}

/// One probed SNR point of a threshold search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbePoint {
    pub ebn0_db: f64,
    pub converged: bool,
    pub half_iterations: usize,
    pub final_p_neg: f64,
}

fn probe(run: &DeRun) -> ProbePoint {
    let last = run.stats.last();
    ProbePoint {
        ebn0_db: run.ebn0_db,
        converged: run.converged,
        half_iterations: run.stats.len(),
        final_p_neg: last.map(|s| s.p_neg).unwrap_or(1.0),
    }
}

/// Threshold search result: either a bracketed threshold with the probe
/// trace, or the diagnostic endpoint runs of an invalid bracket.
#[derive(Debug, Clone)]
pub enum ThresholdOutcome {
    Found {
        threshold_db: f64,
        probes: Vec<ProbePoint>,
    },
    InvalidBracket {
        lo: DeRun,
        hi: DeRun,
    },
}

/// Bisect the decoding threshold between `snr_lo_db` (must diverge) and
/// `snr_hi_db` (must converge) down to `tol_db`, reusing one seed for
/// every probed SNR.
pub fn find_threshold_parallel(
    spec: &ProductCodeSpec,
    alphas: &AlphaSchedule,
    config: &DeConfig,
    snr_lo_db: f64,
    snr_hi_db: f64,
    tol_db: f64,
    workers: Option<usize>,
) -> Result<ThresholdOutcome> {
    anyhow::ensure!(
        snr_hi_db > snr_lo_db && tol_db > 0.0,
        "invalid threshold bracket or tolerance"
    );
    let pool = make_pool(resolve_workers(workers))?;
    let lo_run = run_de_parallel(spec, snr_lo_db, alphas, config, &pool)?;
    let hi_run = run_de_parallel(spec, snr_hi_db, alphas, config, &pool)?;
    if lo_run.converged || !hi_run.converged {
        return Ok(ThresholdOutcome::InvalidBracket {
            lo: lo_run,
            hi: hi_run,
        });
    }
    let mut probes = vec![probe(&lo_run), probe(&hi_run)];
    let mut lo = snr_lo_db;
    let mut hi = snr_hi_db;
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        let run = run_de_parallel(spec, mid, alphas, config, &pool)?;
        probes.push(probe(&run));
        if run.converged {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdOutcome::Found {
        threshold_db: 0.5 * (lo + hi),
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use polarforge_core::mcde::run_de;
    use polarforge_core::polar::PolarCodeSpec;
    use std::sync::Arc;

    fn tiny_square() -> ProductCodeSpec {
        ProductCodeSpec::square(Arc::new(PolarCodeSpec::plain(8, 4, 1.0).unwrap()))
    }

    #[test]
    fn parallel_matches_sequential_bit_exactly() {
        let spec = tiny_square();
        let alphas = AlphaSchedule::constant(0.5).unwrap();
        let cfg = DeConfig::new(2, 512, 6, 99);
        let sequential = run_de(&spec, 2.5, &alphas, &cfg).unwrap();
        for workers in [1usize, 2, 4] {
            let pool = make_pool(workers).unwrap();
            let parallel = run_de_parallel(&spec, 2.5, &alphas, &cfg, &pool).unwrap();
            assert_eq!(parallel.converged, sequential.converged);
            assert_eq!(parallel.stats, sequential.stats);
        }
    }

    #[test]
    fn bisection_finds_and_reports() {
        let spec = tiny_square();
        let alphas = AlphaSchedule::constant(0.5).unwrap();
        let cfg = DeConfig::new(2, 512, 12, 17);
        match find_threshold_parallel(&spec, &alphas, &cfg, -2.0, 8.0, 0.1, Some(2)).unwrap() {
            ThresholdOutcome::Found {
                threshold_db,
                probes,
            } => {
                assert!((-2.0..8.0).contains(&threshold_db));
                assert!(probes.len() >= 3);
            }
            ThresholdOutcome::InvalidBracket { .. } => panic!("bracket should be valid"),
        }
        match find_threshold_parallel(&spec, &alphas, &cfg, 6.0, 8.0, 0.1, Some(2)).unwrap() {
            ThresholdOutcome::InvalidBracket { lo, hi } => {
                assert!(lo.converged);
                assert!(hi.converged);
            }
            ThresholdOutcome::Found { .. } => panic!("bracket should be invalid"),
        }
    }
}

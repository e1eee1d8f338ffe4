//! Parallel error-rate campaigns with deterministic, worker-count
//! independent results.
//!
//! Frames are processed in fixed-size batches of consecutive frame
//! indices; each frame derives its generator from `(seed, SNR index,
//! frame index)` and the per-batch outcome is a pure count reduction, so
//! the stop decision lands on the same batch boundary no matter how the
//! frames were scheduled.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use polarforge_core::channel::{ebn0_to_sigma, CerPoint};
use polarforge_core::product::{AlphaSchedule, ProductCodeSpec, ProductDecoder, SoftMode};
use polarforge_core::sim::{derive_rng, run_frame, StopRule};

use crate::{make_pool, resolve_workers};

/// Fully resolved campaign parameters.
#[derive(Clone)]
pub struct CampaignSetup {
    pub spec: ProductCodeSpec,
    pub list_size: usize,
    pub soft_mode: SoftMode,
    pub alphas: AlphaSchedule,
    pub max_half_iterations: usize,
    pub seed: u64,
    pub stop: StopRule,
    pub batch_size: u64,
    pub workers: Option<usize>,
}

/// Run the campaign over the given Eb/N0 points.
pub fn run_cer(setup: &CampaignSetup, snrs: &[f64]) -> Result<Vec<CerPoint>> {
    if snrs.is_empty() {
        bail!("snr list must not be empty");
    }
    if setup.batch_size == 0 || setup.stop.max_frames == 0 {
        bail!("batch size and frame budget must be positive");
    }
    let pool = make_pool(resolve_workers(setup.workers))?;
    let rate = setup.spec.rate().value();
    let mut points = Vec::with_capacity(snrs.len());
    for (snr_idx, &ebn0_db) in snrs.iter().enumerate() {
        let sigma = ebn0_to_sigma(ebn0_db, rate).context("snr conversion")?;
        let mut frames = 0u64;
        let mut frame_errors = 0u64;
        let mut bit_errors = 0u64;
        while frames < setup.stop.max_frames
            && frame_errors < setup.stop.min_frame_errors
        {
            let start = frames;
            let end = (start + setup.batch_size).min(setup.stop.max_frames);
            let (err, bits) = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map_init(
                        || {
                            ProductDecoder::new(
                                setup.spec.clone(),
                                setup.list_size,
                                setup.soft_mode,
                            )
                        },
                        |dec, frame| -> Result<(u64, u64)> {
                            let mut rng =
                                derive_rng(setup.seed, &[snr_idx as u64, frame]);
                            let res = run_frame(
                                dec,
                                sigma,
                                &setup.alphas,
                                setup.max_half_iterations,
                                &mut rng,
                            )?;
                            Ok((u64::from(res.frame_error), res.bit_errors))
                        },
                    )
                    .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
            })?;
            frames = end;
            frame_errors += err;
            bit_errors += bits;
        }
        points.push(CerPoint::from_counts(
            ebn0_db,
            frames,
            frame_errors,
            bit_errors,
        ));
    }
    Ok(points)
}

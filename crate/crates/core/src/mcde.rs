//! Monte-Carlo density evolution over decoding half iterations, driven by
//! extrinsic component decoding, plus the threshold bisection built on it.
//!
//! The population tracks paired samples `(l_ch, v)` under the all-zero
//! codeword assumption. Each half iteration permutes the sample order
//! (mixing positions the way the product interleaving would), partitions
//! the samples into component words, runs the extrinsic decoder per word
//! on `l_ch + v`, and replaces `v` with the scaled extrinsic output while
//! the sample's `l_ch` stays put forever.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::ebn0_to_sigma;
use crate::escl::{escl_all_positions, EsclConfig};
use crate::product::{AlphaSchedule, ProductCodeSpec};
use crate::scl::SclDecoder;
use crate::sim::derive_rng;
use crate::{Error, Result};

/// Paired message samples for one half-iteration state.
#[derive(Debug, Clone)]
pub struct MessagePopulation {
    l_ch: Vec<f64>,
    v: Vec<f64>,
    half_iteration: usize,
}

impl MessagePopulation {
    pub fn len(&self) -> usize {
        self.l_ch.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l_ch.is_empty()
    }

    pub fn half_iteration(&self) -> usize {
        self.half_iteration
    }

    pub fn channel_llrs(&self) -> &[f64] {
        &self.l_ch
    }

    pub fn messages(&self) -> &[f64] {
        &self.v
    }

    /// Channel values read-only, messages mutable; for drivers that farm
    /// the word updates out themselves.
    pub fn split_mut(&mut self) -> (&[f64], &mut [f64]) {
        (&self.l_ch, &mut self.v)
    }

    /// Mark one half iteration as applied.
    pub fn advance(&mut self) {
        self.half_iteration += 1;
    }
}

/// Fresh population at noise level `sigma`: channel LLRs drawn from the
/// bit-zero law (Gaussian, mean `2/sigma^2`, variance `4/sigma^2`),
/// messages all zero. The sample count must divide into whole words of
/// both component lengths.
pub fn init_population<R: RngCore>(
    spec: &ProductCodeSpec,
    sigma: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<MessagePopulation> {
    if n_samples == 0
        || n_samples % spec.row_code().len() != 0
        || n_samples % spec.col_code().len() != 0
    {
        return Err(Error::InvalidParameter(
            "sample count must be a positive multiple of both component lengths",
        ));
    }
    let mean = 2.0 / (sigma * sigma);
    let std = libm::sqrt(4.0 / (sigma * sigma));
    let l_ch = (0..n_samples)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            mean + std * g
        })
        .collect();
    Ok(MessagePopulation {
        l_ch,
        v: vec![0.0; n_samples],
        half_iteration: 0,
    })
}

/// Fisher-Yates permutation of the sample order; `(l_ch, v)` pairs move
/// together.
pub fn permute_population<R: RngCore>(pop: &mut MessagePopulation, rng: &mut R) {
    for i in (1..pop.l_ch.len()).rev() {
        let j = rng.random_range(0..=i);
        pop.l_ch.swap(i, j);
        pop.v.swap(i, j);
    }
}

/// Extrinsic update of one word: runs the extrinsic decoder on
/// `l_ch + v` and overwrites `v` with `alpha` times the extrinsic output.
pub fn evolve_word(
    decoder: &mut SclDecoder,
    l_ch: &[f64],
    v: &mut [f64],
    alpha: f64,
    list_size: usize,
    escl: EsclConfig,
) -> Result<()> {
    let l_in: Vec<f64> = l_ch.iter().zip(v.iter()).map(|(a, b)| a + b).collect();
    let w = escl_all_positions(decoder, &l_in, list_size, escl)?;
    for (dst, wi) in v.iter_mut().zip(w) {
        *dst = alpha * wi;
    }
    Ok(())
}

/// One half iteration over the whole population: permute, partition into
/// words of the decoder's block length, update every word.
pub fn evolve_half_iteration<R: RngCore>(
    pop: &mut MessagePopulation,
    alpha: f64,
    decoder: &mut SclDecoder,
    list_size: usize,
    escl: EsclConfig,
    rng: &mut R,
) -> Result<()> {
    let n = decoder.code().len();
    if pop.len() % n != 0 {
        return Err(Error::InvalidParameter(
            "population does not split into whole words",
        ));
    }
    permute_population(pop, rng);
    for (l_ch, v) in pop.l_ch.chunks(n).zip(pop.v.chunks_mut(n)) {
        evolve_word(decoder, l_ch, v, alpha, list_size, escl)?;
    }
    pop.half_iteration += 1;
    Ok(())
}

/// Fraction of messages below zero; exact zeros count as nonnegative.
pub fn error_mass(pop: &MessagePopulation) -> f64 {
    let neg = pop.v.iter().filter(|&&x| x < 0.0).count();
    neg as f64 / pop.v.len() as f64
}

/// Summary of one evolved half iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityStats {
    pub half_iteration: usize,
    pub p_neg: f64,
    pub mean: f64,
    pub var: f64,
    pub count: usize,
}

/// Summary statistics of the current message population.
pub fn population_stats(pop: &MessagePopulation) -> DensityStats {
    let n = pop.v.len() as f64;
    let mean = pop.v.iter().sum::<f64>() / n;
    let var = pop.v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    DensityStats {
        half_iteration: pop.half_iteration,
        p_neg: error_mass(pop),
        mean,
        var,
        count: pop.v.len(),
    }
}

/// Density evolution controls.
#[derive(Debug, Clone, Copy)]
pub struct DeConfig {
    pub list_size: usize,
    pub escl: EsclConfig,
    pub n_samples: usize,
    pub max_half_iterations: usize,
    /// Convergence tolerance on the negative-mass fraction; `None` means
    /// one part in `n_samples`, i.e. literally zero negative samples.
    pub epsilon: Option<f64>,
    pub seed: u64,
}

impl DeConfig {
    pub fn new(list_size: usize, n_samples: usize, max_half_iterations: usize, seed: u64) -> Self {
        DeConfig {
            list_size,
            escl: EsclConfig::default(),
            n_samples,
            max_half_iterations,
            epsilon: None,
            seed,
        }
    }

    pub fn effective_epsilon(&self) -> f64 {
        self.epsilon
            .unwrap_or(1.0 / self.n_samples as f64)
    }
}

/// Generator used by [`run_de`]; exposed so alternative drivers (e.g. a
/// parallel word evaluator) can reproduce its exact sample stream.
pub fn de_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    derive_rng(seed, &[0x4d43_4445])
}

/// Evolution trace and verdict for one SNR point.
#[derive(Debug, Clone)]
pub struct DeRun {
    pub ebn0_db: f64,
    pub stats: Vec<DensityStats>,
    pub converged: bool,
}

/// Run density evolution at one Eb/N0 point until the error mass drops
/// below the tolerance or the iteration budget runs out.
///
/// The Eb/N0 conversion uses the product code rate. Half iterations
/// alternate between the row and column component codes, rows first, with
/// the schedule repeating its last coefficient when it is shorter than the
/// iteration budget.
pub fn run_de(
    spec: &ProductCodeSpec,
    ebn0_db: f64,
    alphas: &AlphaSchedule,
    config: &DeConfig,
) -> Result<DeRun> {
    let sigma = ebn0_to_sigma(ebn0_db, spec.rate().value())?;
    let mut rng = de_rng(config.seed);
    let mut pop = init_population(spec, sigma, config.n_samples, &mut rng)?;
    let mut row_dec = SclDecoder::new(spec.row_code().clone());
    let mut col_dec = SclDecoder::new(spec.col_code().clone());
    let eps = config.effective_epsilon();
    let mut stats = Vec::with_capacity(config.max_half_iterations);
    let mut converged = false;
    for l in 1..=config.max_half_iterations {
        let decoder = if l % 2 == 1 { &mut row_dec } else { &mut col_dec };
        evolve_half_iteration(
            &mut pop,
            alphas.alpha_for(l),
            decoder,
            config.list_size,
            config.escl,
            &mut rng,
        )?;
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

/// Bisect the decoding threshold between a diverging and a converging
/// Eb/N0 endpoint, to the requested dB tolerance; returns the midpoint of
/// the final bracket.
///
/// Every evolution run reuses the same seed, so all SNR points see the
/// same underlying noise realizations.
pub fn find_threshold(
    spec: &ProductCodeSpec,
    alphas: &AlphaSchedule,
    config: &DeConfig,
    snr_lo_db: f64,
    snr_hi_db: f64,
    tol_db: f64,
) -> Result<f64> {
    if !(snr_hi_db > snr_lo_db) || !(tol_db > 0.0) {
        return Err(Error::InvalidParameter("invalid threshold bracket or tolerance"));
    }
    let lo_run = run_de(spec, snr_lo_db, alphas, config)?;
    let hi_run = run_de(spec, snr_hi_db, alphas, config)?;
    if lo_run.converged || !hi_run.converged {
        return Err(Error::InvalidBracket {
            lo_converged: lo_run.converged,
            hi_converged: hi_run.converged,
        });
    }
    let mut lo = snr_lo_db;
    let mut hi = snr_hi_db;
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if run_de(spec, mid, alphas, config)?.converged {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

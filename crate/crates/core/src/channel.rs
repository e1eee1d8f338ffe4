//! BPSK over the binary-input AWGN channel, SNR conversions, and
//! error-rate bookkeeping.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::grid::{BitGrid, LlrGrid};
use crate::{Error, Result};

/// BPSK mapping: bit 0 to +1, bit 1 to -1.
#[inline]
pub fn bpsk(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Noise standard deviation for an Eb/N0 operating point:
/// `sigma = sqrt(1 / (2 rate 10^(ebn0/10)))`.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter("rate must lie in (0, 1]"));
    }
    let ebn0 = libm::pow(10.0, ebn0_db / 10.0);
    Ok(libm::sqrt(1.0 / (2.0 * rate * ebn0)))
}

/// Channel operating point plus the master seed of a simulation.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64, seed: u64) -> Result<Self> {
        Ok(ChannelParams {
            ebn0_db,
            rate,
            sigma: ebn0_to_sigma(ebn0_db, rate)?,
            seed,
        })
    }
}

/// Transmit a codeword grid: BPSK-modulate, add Gaussian noise of the
/// given standard deviation, and scale the observation into channel LLRs
/// `(2 / sigma^2) y`.
pub fn transmit<R: RngCore>(word: &BitGrid, sigma: f64, rng: &mut R) -> LlrGrid {
    let scale = 2.0 / (sigma * sigma);
    let mut out = LlrGrid::zeros(word.rows(), word.cols());
    for r in 0..word.rows() {
        for c in 0..word.cols() {
            let noise: f64 = StandardNormal.sample(rng);
            let y = bpsk(word.get(r, c)) + sigma * noise;
            out.set(r, c, scale * y);
        }
    }
    out
}

/// One Eb/N0 point of an error-rate campaign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CerPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub cer: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl CerPoint {
    pub fn from_counts(ebn0_db: f64, frames: u64, frame_errors: u64, bit_errors: u64) -> Self {
        let cer = frame_errors as f64 / frames as f64;
        let (ci_lo, ci_hi) = wilson_interval(frame_errors, frames);
        CerPoint {
            ebn0_db,
            frames,
            frame_errors,
            bit_errors,
            cer,
            ci_lo,
            ci_hi,
        }
    }
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    (
        ((center - spread) / denom).max(0.0),
        ((center + spread) / denom).min(1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(bpsk(0), 1.0);
        assert_eq!(bpsk(1), -1.0);
        let word: Vec<f64> = [0u8, 1, 1, 0].iter().map(|&b| bpsk(b)).collect();
        assert_eq!(word.len(), 4);
    }

    #[test]
    fn sigma_examples() {
        assert_abs_diff_eq!(ebn0_to_sigma(0.0, 0.5).unwrap(), 1.0, epsilon = 1e-15);
        // rate 51^2/64^2 at 2.0 dB; variance evaluated independently
        let rate = (51.0 * 51.0) / (64.0 * 64.0);
        let sigma = ebn0_to_sigma(2.0, rate).unwrap();
        assert_relative_eq!(sigma * sigma, 0.4968091662804443, max_relative = 1e-12);
        // rate 171^2/256^2 rounds to 0.446
        let rate2 = (171.0 * 171.0) / (256.0 * 256.0);
        assert_abs_diff_eq!(rate2, 0.446, epsilon = 5e-4);
        assert!(ebn0_to_sigma(1.0, 0.0).is_err());
        assert!(ebn0_to_sigma(1.0, -0.3).is_err());
    }

    #[test]
    fn llr_sign_matches_word_at_vanishing_noise() {
        let mut word = BitGrid::zeros(4, 4);
        word.set(0, 0, 1);
        word.set(3, 2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = transmit(&word, 1e-4, &mut rng);
        for r in 0..4 {
            for c in 0..4 {
                let want = bpsk(word.get(r, c));
                assert_eq!(l.get(r, c).signum(), want);
            }
        }
    }

    #[test]
    fn llr_moments_match_gaussian_law() {
        // For bit 0, the channel LLR is Gaussian with mean 2/sigma^2 and
        // variance 4/sigma^2 (mean = variance / 2).
        let sigma = 0.8_f64;
        let word = BitGrid::zeros(1000, 1000);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let l = transmit(&word, sigma, &mut rng);
        let n = l.as_slice().len() as f64;
        let mean: f64 = l.as_slice().iter().sum::<f64>() / n;
        let var: f64 = l.as_slice().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let want_mean = 2.0 / (sigma * sigma);
        let want_var = 4.0 / (sigma * sigma);
        assert!((mean - want_mean).abs() / want_mean < 0.01, "mean {mean}");
        assert!((var - want_var).abs() / want_var < 0.02, "var {var}");
        assert!((mean - var / 2.0).abs() / mean < 0.02, "consistency");
    }

    #[test]
    fn wilson_interval_brackets_estimate() {
        let (lo, hi) = wilson_interval(10, 100);
        assert!(lo < 0.1 && 0.1 < hi);
        assert!(lo > 0.04 && hi < 0.19);
        let (lo0, hi0) = wilson_interval(0, 50);
        assert!(lo0.abs() < 1e-12);
        assert!(hi0 > 0.0 && hi0 < 0.12);
    }

    #[test]
    fn wilson_width_shrinks_like_inverse_sqrt() {
        // Synthetic counts at a fixed proportion: widths scale ~ 1/sqrt(n).
        let p = 0.02;
        let widths: Vec<f64> = [1_000u64, 100_000, 10_000_000]
            .iter()
            .map(|&n| {
                let (lo, hi) = wilson_interval((p * n as f64) as u64, n);
                hi - lo
            })
            .collect();
        let r1 = widths[0] / widths[1];
        let r2 = widths[1] / widths[2];
        assert!((r1 - 10.0).abs() < 1.0, "ratio {r1}");
        assert!((r2 - 10.0).abs() < 1.0, "ratio {r2}");
    }
}

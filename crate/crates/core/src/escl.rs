//! Extrinsic list decoding: soft output for one target position computed
//! from every input except that position.
//!
//! One run yields the extrinsic value of a single position, so producing a
//! full vector costs one list decode per position. That is a factor of the
//! block length over regular list decoding, which is fine for the density
//! evolution analysis this exists for and unsuitable for anything else.

use alloc::vec::Vec;

use crate::math::{clamp_llr, logsumexp2, LN_2};
use crate::scl::{DecodeOutput, DetachRule, SclDecoder};
use crate::Result;

/// Soft-output rule applied to the detached-decode list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EsclSoftRule {
    /// Log-ratio of the sublist masses at the target position, with the
    /// metric-spread fallback when one sublist is empty.
    #[default]
    ListRatio,
    /// Experimental: sublist masses topped up with the pruned codebook
    /// mass. The detached position has no channel prior, so the mass splits
    /// evenly between the two bit values.
    CodebookCorrected,
}

/// Configuration for extrinsic decoding.
#[derive(Debug, Clone, Copy, Default)]
pub struct EsclConfig {
    pub detach: DetachRule,
    pub soft: EsclSoftRule,
}

/// Extrinsic LLR for position `e` (0-based).
///
/// Runs one list decode with the channel connection of `e` removed at the
/// top decoding layer, then reads the target position's soft output off
/// the list. The result is functionally independent of `l_in[e]`.
pub fn escl_extrinsic(
    decoder: &mut SclDecoder,
    l_in: &[f64],
    e: usize,
    list_size: usize,
    config: EsclConfig,
) -> Result<f64> {
    let out = decoder.decode_detached(l_in, list_size, e, config.detach)?;
    Ok(extrinsic_from_list(&out, e, config.soft))
}

/// Extrinsic LLRs for every position: one detached decode each.
pub fn escl_all_positions(
    decoder: &mut SclDecoder,
    l_in: &[f64],
    list_size: usize,
    config: EsclConfig,
) -> Result<Vec<f64>> {
    (0..l_in.len())
        .map(|e| escl_extrinsic(decoder, l_in, e, list_size, config))
        .collect()
}

/// Soft output at one position from a detached-decode list.
pub fn extrinsic_from_list(out: &DecodeOutput, e: usize, rule: EsclSoftRule) -> f64 {
    let mut lse0 = f64::NEG_INFINITY;
    let mut lse1 = f64::NEG_INFINITY;
    for c in &out.candidates {
        if c.codeword[e] == 0 {
            lse0 = logsumexp2(lse0, -c.pm);
        } else {
            lse1 = logsumexp2(lse1, -c.pm);
        }
    }
    if rule == EsclSoftRule::CodebookCorrected && out.log_pruned_mass > f64::NEG_INFINITY {
        // No channel prior at the detached position: split the mass evenly.
        let half = out.log_pruned_mass - LN_2;
        lse0 = logsumexp2(lse0, half);
        lse1 = logsumexp2(lse1, half);
    }
    if lse0 == f64::NEG_INFINITY || lse1 == f64::NEG_INFINITY {
        let pm_min = out.candidates.iter().fold(f64::INFINITY, |a, c| a.min(c.pm));
        let pm_max = out
            .candidates
            .iter()
            .fold(f64::NEG_INFINITY, |a, c| a.max(c.pm));
        let sign = if out.candidates[0].codeword[e] == 0 {
            1.0
        } else {
            -1.0
        };
        return clamp_llr(sign * (pm_max - pm_min));
    }
    clamp_llr(lse0 - lse1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::polar::{PolarCodeSpec, SharedCode};
    use crate::scl::soft_output_pyndiah;
    use alloc::sync::Arc;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dynamic_8_4() -> SharedCode {
        Arc::new(
            PolarCodeSpec::from_text("8 4\n00110001\n00001001\n00000100\n00000011\n").unwrap(),
        )
    }

    #[test]
    fn pass_through_hand_example_length_two() {
        // Full-rate length-2 code, detach the second position: the root
        // check update passes the first input through, the repetition
        // update returns its signed value, and with a list of two the
        // extrinsic magnitude equals that input, for any value at the
        // detached slot.
        let code: SharedCode = Arc::new(PolarCodeSpec::from_text("2 2\n10\n01\n").unwrap());
        let mut dec = SclDecoder::new(code);
        let config = EsclConfig {
            detach: DetachRule::PassThrough,
            soft: EsclSoftRule::ListRatio,
        };
        for a in [-2.0, -0.4, 1.3, 5.0] {
            for junk in [-9.0, 0.0, 4.2] {
                let v = escl_extrinsic(&mut dec, &[a, junk], 1, 2, config).unwrap();
                assert_abs_diff_eq!(v.abs(), a.abs(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn extrinsic_is_invariant_to_target_input() {
        let code = dynamic_8_4();
        let mut dec = SclDecoder::new(code.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for config in [
            EsclConfig::default(),
            EsclConfig {
                detach: DetachRule::PassThrough,
                soft: EsclSoftRule::ListRatio,
            },
            EsclConfig {
                detach: DetachRule::Neutral,
                soft: EsclSoftRule::CodebookCorrected,
            },
        ] {
            for _ in 0..20 {
                let base: Vec<f64> = (0..8).map(|_| rng.random_range(-4.0..4.0)).collect();
                for e in 0..8 {
                    for list_size in [1usize, 2, 4] {
                        let mut probe = base.clone();
                        probe[e] = -10.0;
                        let v0 =
                            escl_extrinsic(&mut dec, &probe, e, list_size, config).unwrap();
                        probe[e] = 0.0;
                        let v1 =
                            escl_extrinsic(&mut dec, &probe, e, list_size, config).unwrap();
                        probe[e] = 10.0;
                        let v2 =
                            escl_extrinsic(&mut dec, &probe, e, list_size, config).unwrap();
                        assert_eq!(v0.to_bits(), v1.to_bits());
                        assert_eq!(v1.to_bits(), v2.to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn full_list_matches_enumeration_oracle() {
        let code = dynamic_8_4();
        let mut dec = SclDecoder::new(code.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..60 {
            let l: Vec<f64> = (0..8).map(|_| rng.random_range(-5.0..5.0)).collect();
            for e in 0..8 {
                let v = escl_extrinsic(&mut dec, &l, e, 16, EsclConfig::default()).unwrap();
                let exact = oracle::extrinsic_llr(&code, &l, e);
                assert_abs_diff_eq!(v, exact, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn repetition_style_code_matches_oracle() {
        // Codewords 00 and 10; the second position never carries
        // information about the first, so its removal leaves an extrinsic
        // value of zero at position 0.
        let code: SharedCode = Arc::new(PolarCodeSpec::from_text("2 1\n10\n").unwrap());
        let mut dec = SclDecoder::new(code.clone());
        for l1 in [-3.0, 0.5, 7.0] {
            let v = escl_extrinsic(&mut dec, &[2.0, l1], 0, 2, EsclConfig::default()).unwrap();
            let exact = oracle::extrinsic_llr(&code, &[2.0, l1], 0);
            assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn matches_plain_soft_output_with_zeroed_input() {
        // With the target input already zero, detaching it changes
        // nothing: the plain list APP at that position equals the
        // extrinsic value.
        let code = dynamic_8_4();
        let mut dec = SclDecoder::new(code.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..30 {
            let mut l: Vec<f64> = (0..8).map(|_| rng.random_range(-4.0..4.0)).collect();
            for e in 0..8 {
                l[e] = 0.0;
                let ext = escl_extrinsic(&mut dec, &l, e, 16, EsclConfig::default()).unwrap();
                let out = dec.decode(&l, 16).unwrap();
                let app = soft_output_pyndiah(&out)[e];
                assert_abs_diff_eq!(ext, app, epsilon = 1e-6);
                l[e] = rng.random_range(-4.0..4.0);
            }
        }
    }

    #[test]
    fn all_positions_matches_single_calls() {
        let code = dynamic_8_4();
        let mut dec = SclDecoder::new(code.clone());
        let l = vec![1.0, -2.0, 0.3, 4.0, -0.7, 2.2, -1.1, 0.9];
        let all = escl_all_positions(&mut dec, &l, 4, EsclConfig::default()).unwrap();
        for (e, &v) in all.iter().enumerate() {
            let single = escl_extrinsic(&mut dec, &l, e, 4, EsclConfig::default()).unwrap();
            assert_eq!(v.to_bits(), single.to_bits());
        }
    }

    #[test]
    fn rejects_out_of_range_target() {
        let code = dynamic_8_4();
        let mut dec = SclDecoder::new(code);
        assert!(escl_extrinsic(&mut dec, &[0.0; 8], 8, 2, EsclConfig::default()).is_err());
    }
}

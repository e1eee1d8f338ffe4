//! Achievable-rate objective for scaled extrinsic messages and its
//! one-dimensional maximizer.
//!
//! The iterative decoder's extrinsic estimates are not true LLRs, so
//! scaling them before reuse helps. The scaling coefficient is chosen to
//! maximize a generalized mutual information estimate between the
//! transmitted symbol and the outgoing message `alpha * w + l_ch`.

use alloc::vec::Vec;

use crate::math::{softplus, LN_2};
use crate::{Error, Result};

/// Paired samples collected from one half iteration: extrinsic estimate
/// `w`, channel LLR `l_ch`, and transmitted BPSK symbol `x` (plus/minus
/// one).
#[derive(Debug, Clone, Default)]
pub struct GmiSamples {
    w: Vec<f64>,
    l_ch: Vec<f64>,
    x: Vec<f64>,
}

impl GmiSamples {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        GmiSamples {
            w: Vec::with_capacity(n),
            l_ch: Vec::with_capacity(n),
            x: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, w: f64, l_ch: f64, x: f64) {
        debug_assert!(x == 1.0 || x == -1.0);
        self.w.push(w);
        self.l_ch.push(l_ch);
        self.x.push(x);
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Rate estimate in bits for a candidate scaling coefficient:
/// `1 - mean(log2(1 + exp(-x (alpha w + l_ch))))`.
///
/// Multiplying by the transmitted symbol folds both bit values onto one
/// branch, which is what makes random-codeword sample sets usable.
pub fn gmi_estimate(samples: &GmiSamples, alpha: f64) -> f64 {
    debug_assert!(!samples.is_empty());
    let mut acc = 0.0;
    for i in 0..samples.len() {
        let l_out = alpha * samples.w[i] + samples.l_ch[i];
        acc += softplus(-samples.x[i] * l_out);
    }
    1.0 - acc / (LN_2 * samples.len() as f64)
}

/// Maximize [`gmi_estimate`] over `alpha` in `[lo, hi]`.
///
/// Coarse scan at step 0.01 followed by golden-section refinement. The
/// objective is concave in `alpha` (each summand is a softplus of an
/// affine function), so the scan bracket contains the global maximum. Ties
/// resolve toward the smaller coefficient; a constant objective returns
/// `lo`.
pub fn maximize_scalar(samples: &GmiSamples, lo: f64, hi: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { have: 0, need: 1 });
    }
    if !(hi > lo) {
        return Err(Error::InvalidParameter("empty search interval"));
    }
    const COARSE_STEP: f64 = 0.01;
    const REFINE_TOL: f64 = 1e-7;

    let steps = libm::ceil((hi - lo) / COARSE_STEP) as usize;
    let mut best_alpha = lo;
    let mut best_value = gmi_estimate(samples, lo);
    for i in 1..=steps {
        let a = (lo + COARSE_STEP * i as f64).min(hi);
        let v = gmi_estimate(samples, a);
        if v > best_value {
            best_value = v;
            best_alpha = a;
        }
    }

    // Golden-section refinement inside the bracketing grid cell; by
    // concavity the maximum lies within one step of the grid winner.
    let mut a = (best_alpha - COARSE_STEP).max(lo);
    let mut b = (best_alpha + COARSE_STEP).min(hi);
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = gmi_estimate(samples, c);
    let mut fd = gmi_estimate(samples, d);
    while b - a > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gmi_estimate(samples, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gmi_estimate(samples, d);
        }
        if fc > best_value {
            best_value = fc;
            best_alpha = c;
        }
        if fd > best_value {
            best_value = fd;
            best_alpha = d;
        }
    }
    Ok(best_alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gmi_grid_argmax;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn perfect_messages_approach_one_bit() {
        let mut s = GmiSamples::new();
        for _ in 0..100 {
            s.push(500.0, 500.0, 1.0);
            s.push(-500.0, -500.0, -1.0);
        }
        assert_relative_eq!(gmi_estimate(&s, 1.0), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn uninformative_messages_give_zero() {
        let mut s = GmiSamples::new();
        for i in 0..10 {
            s.push(0.0, 0.0, if i % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_abs_diff_eq!(gmi_estimate(&s, 0.7), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn single_sample_value() {
        // x = +1, w = 2, l_ch = 1, alpha = 0.5: 1 - log2(1 + e^-2),
        // evaluated independently.
        let mut s = GmiSamples::new();
        s.push(2.0, 1.0, 1.0);
        assert_relative_eq!(
            gmi_estimate(&s, 0.5),
            0.8168815879184038,
            max_relative = 1e-14
        );
    }

    #[test]
    fn maximizer_matches_fine_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for case in 0..20 {
            let n = 400 + 40 * case;
            let spread = 0.5 + 0.15 * case as f64;
            let mut s = GmiSamples::with_capacity(n);
            for _ in 0..n {
                let x: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let g: f64 = StandardNormal.sample(&mut rng);
                let h: f64 = StandardNormal.sample(&mut rng);
                let w = x * (1.2 + spread * g);
                let l_ch = x * (0.8 + 0.9 * h);
                s.push(w, l_ch, x);
            }
            let found = maximize_scalar(&s, 0.0, 2.0).unwrap();
            let grid = gmi_grid_argmax(&s, 0.0, 2.0, 1e-4);
            assert!(
                (found - grid).abs() <= 1e-4,
                "case {case}: {found} vs grid {grid}"
            );
        }
    }

    #[test]
    fn degenerate_flat_objective_returns_interval_minimum() {
        let mut s = GmiSamples::new();
        for i in 0..50 {
            s.push(0.0, 0.4, if i % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_eq!(maximize_scalar(&s, 0.0, 2.0).unwrap(), 0.0);
        assert_eq!(maximize_scalar(&s, 0.25, 2.0).unwrap(), 0.25);
    }

    #[test]
    fn consistent_gaussian_messages_need_no_scaling() {
        // LLR-consistent extrinsic and channel messages (variance equal to
        // twice the mean) are already true LLRs, so the optimum scaling is
        // one.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = GmiSamples::with_capacity(200_000);
        let mw = 3.0_f64;
        let mc = 2.0_f64;
        for _ in 0..200_000 {
            let x: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let g: f64 = StandardNormal.sample(&mut rng);
            let h: f64 = StandardNormal.sample(&mut rng);
            let w = x * (mw + (2.0 * mw).sqrt() * g);
            let l_ch = x * (mc + (2.0 * mc).sqrt() * h);
            s.push(w, l_ch, x);
        }
        let alpha = maximize_scalar(&s, 0.0, 2.0).unwrap();
        assert!((alpha - 1.0).abs() <= 0.05, "alpha {alpha}");
    }

    #[test]
    fn maximizer_dominates_every_grid_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut s = GmiSamples::new();
        for _ in 0..500 {
            let x: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let g: f64 = StandardNormal.sample(&mut rng);
            s.push(x * (2.0 + 2.0 * g), x * 1.5, x);
        }
        let alpha = maximize_scalar(&s, 0.0, 2.0).unwrap();
        let best = gmi_estimate(&s, alpha);
        let mut a = 0.0;
        while a <= 2.0 {
            assert!(gmi_estimate(&s, a) <= best + 1e-10);
            a += 0.01;
        }
    }

    #[test]
    fn empty_sample_set_is_an_error() {
        let s = GmiSamples::new();
        assert!(matches!(
            maximize_scalar(&s, 0.0, 2.0),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn gmi_is_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut s = GmiSamples::new();
        for _ in 0..200 {
            let x: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            s.push(rng.random_range(-30.0..30.0), rng.random_range(-9.0..9.0), x);
        }
        for a in [0.0, 0.3, 1.0, 2.0] {
            assert!(gmi_estimate(&s, a) <= 1.0);
        }
    }
}

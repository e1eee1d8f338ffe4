//! Overflow-safe scalar helpers for LLR-domain arithmetic.
//!
//! Everything operates in natural-log units. The helpers route through
//! `libm` so the crate builds without `std` and produces identical results
//! on every platform.

/// Saturation magnitude for LLRs entering and leaving the decoders.
///
/// Chosen far above the operating range of the simulated channels so that
/// clipping is inactive in normal operation; it only guards `tanh`/`exp`
/// against overflow on adversarial inputs.
pub const LLR_CLIP: f64 = 40.0;

pub(crate) const LN_2: f64 = core::f64::consts::LN_2;

/// `ln(1 + exp(x))` without overflow for large `|x|`.
#[inline]
pub fn softplus(x: f64) -> f64 {
    let cap = if x > 0.0 { x } else { 0.0 };
    cap + libm::log1p(libm::exp(-libm::fabs(x)))
}

/// Logistic function `1 / (1 + exp(-x))`, the probability of the bit value
/// whose LLR is `x`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

/// `ln sigmoid(x)`, stable on both tails.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    -softplus(-x)
}

/// `ln(exp(a) + exp(b))` with empty summands encoded as `-inf`.
#[inline]
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = if a > b { a } else { b };
    m + libm::log1p(libm::exp(-libm::fabs(a - b)))
}

/// Check-node (box-plus) combination of two LLRs.
///
/// Algebraically equal to `2 atanh(tanh(a/2) tanh(b/2))` but computed as
/// `sgn(a) sgn(b) min(|a|,|b|) + ln1p(e^{-|a+b|}) - ln1p(e^{-|a-b|})`, which
/// stays finite and exact for saturated inputs.
#[inline]
pub fn check_combine(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let mag = if libm::fabs(a) < libm::fabs(b) {
        libm::fabs(a)
    } else {
        libm::fabs(b)
    };
    sign * mag + libm::log1p(libm::exp(-libm::fabs(a + b)))
        - libm::log1p(libm::exp(-libm::fabs(a - b)))
}

/// Repetition-node combination: adds `a` (sign-flipped when the decided bit
/// `s` is one) onto `b`.
#[inline]
pub fn bit_combine(a: f64, b: f64, s: u8) -> f64 {
    if s == 0 {
        a + b
    } else {
        b - a
    }
}

/// Clamp an LLR to the internal saturation range.
#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_CLIP, LLR_CLIP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn naive_softplus(x: f64) -> f64 {
        (1.0 + x.exp()).ln()
    }

    fn tanh_form(a: f64, b: f64) -> f64 {
        2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh()
    }

    #[test]
    fn softplus_matches_naive_form() {
        for x in [-30.0, -5.0, -1.0, 0.0, 0.3, 2.0, 10.0, 30.0] {
            assert_relative_eq!(softplus(x), naive_softplus(x), max_relative = 1e-12);
        }
        assert_eq!(softplus(f64::NEG_INFINITY), 0.0);
        assert_eq!(softplus(f64::INFINITY), f64::INFINITY);
        assert_relative_eq!(softplus(800.0), 800.0);
    }

    #[test]
    fn sigmoid_halves_and_sums_to_one() {
        assert_eq!(sigmoid(0.0), 0.5);
        for x in [-25.0, -3.0, 0.7, 12.0] {
            assert_relative_eq!(sigmoid(x) + sigmoid(-x), 1.0, max_relative = 1e-14);
            assert_relative_eq!(log_sigmoid(x), sigmoid(x).ln(), max_relative = 1e-12);
        }
    }

    #[test]
    fn logsumexp_handles_empty_operands() {
        assert_eq!(logsumexp2(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(logsumexp2(f64::NEG_INFINITY, 1.5), 1.5);
        assert_relative_eq!(
            logsumexp2(-1.0, -2.0),
            ((-1.0f64).exp() + (-2.0f64).exp()).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn check_combine_matches_tanh_product_rule() {
        // Hand value for the pair (-1, +3); hyperbolic form evaluated
        // independently below confirms it.
        assert_relative_eq!(check_combine(-1.0, 3.0), -0.8912219168748373, max_relative = 1e-12);
        let cases = [
            (0.3, 0.9),
            (-1.0, 3.0),
            (-2.5, -0.1),
            (7.0, -7.0),
            (12.0, 15.0),
            (0.0, 4.0),
        ];
        for (a, b) in cases {
            // The hyperbolic form loses precision for large arguments, so
            // compare relatively.
            assert_relative_eq!(check_combine(a, b), tanh_form(a, b), max_relative = 1e-11);
        }
        // Saturated inputs stay finite where the tanh product would hit 1.0.
        let f = check_combine(40.0, 40.0);
        assert!(f.is_finite() && f > 39.0);
        assert_eq!(check_combine(0.0, 31.0), 0.0);
    }

    #[test]
    fn bit_combine_signs() {
        assert_eq!(bit_combine(2.0, 5.0, 0), 7.0);
        assert_eq!(bit_combine(2.0, 5.0, 1), 3.0);
        assert_eq!(bit_combine(-1.0, 3.0, 1), 4.0);
    }
}

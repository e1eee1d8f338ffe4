//! Component-code abstraction: encoding, validity checking, and rate
//! bookkeeping for one precoded polar code.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::gf2::{
    derive_constraints, kron_power, polar_transform, BitMatrix, FrozenStructure, PositionKind,
    PrecodingMatrix,
};
use crate::{Error, Result};

/// Exact code rate as a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeRate {
    pub num: usize,
    pub den: usize,
}

impl CodeRate {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// One precoded polar component code.
///
/// Holds the precoding matrix, the sequential frozen/dynamic-frozen layout
/// derived from it, and the cached Kronecker power of the kernel. Immutable
/// after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct PolarCodeSpec {
    precoding: PrecodingMatrix,
    frozen: FrozenStructure,
    kernel: BitMatrix,
}

impl PolarCodeSpec {
    pub fn new(precoding: PrecodingMatrix) -> Result<Self> {
        let frozen = derive_constraints(&precoding)?;
        let kernel = kron_power(precoding.stages())?;
        Ok(PolarCodeSpec {
            precoding,
            frozen,
            kernel,
        })
    }

    /// Parse a precoding matrix in the ASCII exchange format and build the
    /// spec from it.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(PrecodingMatrix::parse(text)?)
    }

    /// Plain polar fallback construction: unit-row precoding over the `dim`
    /// most reliable positions under a Bhattacharyya-parameter recursion at
    /// the given design SNR. No dynamic-frozen bits are produced.
    pub fn plain(len: usize, dim: usize, design_ebn0_db: f64) -> Result<Self> {
        if !len.is_power_of_two() || len == 0 {
            return Err(Error::InvalidParameter("block length must be a power of two"));
        }
        if dim == 0 || dim > len {
            return Err(Error::InvalidParameter("dimension must be in 1..=N"));
        }
        let mut pivots = reliability_order(len, dim as f64 / len as f64, design_ebn0_db);
        pivots.truncate(dim);
        pivots.sort_unstable();
        let mut m = BitMatrix::zeros(dim, len);
        for (r, &p) in pivots.iter().enumerate() {
            m.set(r, p, 1);
        }
        Self::new(PrecodingMatrix::from_matrix(m)?)
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        self.precoding.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Info length `k`.
    pub fn dim(&self) -> usize {
        self.precoding.dim()
    }

    /// `log2 N`.
    pub fn stages(&self) -> u32 {
        self.precoding.stages()
    }

    pub fn precoding(&self) -> &PrecodingMatrix {
        &self.precoding
    }

    pub fn frozen(&self) -> &FrozenStructure {
        &self.frozen
    }

    /// Cached `K^(log2 N)`.
    pub fn kernel(&self) -> &BitMatrix {
        &self.kernel
    }

    pub fn rate(&self) -> CodeRate {
        CodeRate {
            num: self.dim(),
            den: self.len(),
        }
    }

    /// Encode info bits: `u = a * P`, then the in-place polar transform.
    ///
    /// The transform is the `O(N log N)` butterfly rather than a dense
    /// multiply; the cached kernel matrix exists for cross-checks.
    pub fn encode(&self, a: &[u8]) -> Result<Vec<u8>> {
        let mut u = self.precoding.map_info(a)?;
        polar_transform(&mut u);
        Ok(u)
    }

    /// Recover the `u`-domain vector of a codeword (involution).
    pub fn codeword_to_u(&self, c: &[u8]) -> Result<Vec<u8>> {
        if c.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: c.len(),
            });
        }
        let mut u = c.to_vec();
        polar_transform(&mut u);
        Ok(u)
    }

    /// True iff `c` transforms back to a `u` vector that satisfies every
    /// frozen and dynamic-frozen constraint.
    pub fn is_valid_codeword(&self, c: &[u8]) -> Result<bool> {
        let u = self.codeword_to_u(c)?;
        self.frozen.check(&u)
    }

    /// Solve `a` from a constraint-satisfying `u` vector by back
    /// substitution over the pivot columns.
    pub fn recover_info(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: u.len(),
            });
        }
        let pivots = self.precoding.pivots();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by_key(|&r| pivots[r]);
        let mut a = vec![0u8; self.dim()];
        for &r in &order {
            let pivot = pivots[r];
            let mut v = u[pivot];
            for &r2 in &order {
                if r2 != r && pivots[r2] < pivot && self.precoding.matrix().get(r2, pivot) == 1 {
                    v ^= a[r2];
                }
            }
            a[r] = v;
        }
        Ok(a)
    }

    /// Count of frozen plus dynamic-frozen positions strictly after each
    /// position; entry `i` covers `i+1..N`. Used by the list decoder's
    /// pruned-mass bookkeeping.
    pub(crate) fn constraint_suffix_counts(&self) -> Vec<u32> {
        let n = self.len();
        let mut counts = vec![0u32; n];
        let mut acc = 0u32;
        for i in (0..n).rev() {
            counts[i] = acc;
            if !matches!(self.frozen.kind(i), PositionKind::Info(_)) {
                acc += 1;
            }
        }
        counts
    }
}

/// Shared handle used by decoders and the product layer.
pub type SharedCode = Arc<PolarCodeSpec>;

/// Natural-order Bhattacharyya parameters after `log2 len` kernel stages,
/// returned as position indices sorted from most to least reliable.
fn reliability_order(len: usize, rate: f64, design_ebn0_db: f64) -> Vec<usize> {
    // biAWGN initial parameter exp(-Es/N0) with Es/N0 = rate * Eb/N0.
    let esn0 = rate * libm::pow(10.0, design_ebn0_db / 10.0);
    let mut z = vec![libm::exp(-esn0)];
    while z.len() < len {
        let m = z.len();
        let mut next = vec![0.0; 2 * m];
        for (i, &zi) in z.iter().enumerate() {
            next[i] = 2.0 * zi - zi * zi;
            next[i + m] = zi * zi;
        }
        z = next;
    }
    let mut order: Vec<usize> = (0..len).collect();
    // Stable tie-break on the index keeps the construction deterministic.
    order.sort_by(|&a, &b| z[a].partial_cmp(&z[b]).unwrap().then(a.cmp(&b)));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::gf2_mul;

    fn dynamic_test_code_8_4() -> PolarCodeSpec {
        // (8,4) with pivots {2,4,5,6} (0-based) and two dynamic-frozen
        // positions: u_3 = u_2 and u_7 = u_2 ^ u_4 ^ u_6.
        PolarCodeSpec::from_text("8 4\n00110001\n00001001\n00000100\n00000011\n").unwrap()
    }

    #[test]
    fn dynamic_test_code_layout() {
        let spec = dynamic_test_code_8_4();
        let fs = spec.frozen();
        assert_eq!(fs.kind(0), &PositionKind::Frozen);
        assert_eq!(fs.kind(1), &PositionKind::Frozen);
        assert_eq!(fs.kind(2), &PositionKind::Info(0));
        assert_eq!(fs.kind(3), &PositionKind::DynamicFrozen(vec![2]));
        assert_eq!(fs.kind(4), &PositionKind::Info(1));
        assert_eq!(fs.kind(5), &PositionKind::Info(2));
        assert_eq!(fs.kind(6), &PositionKind::Info(3));
        assert_eq!(fs.kind(7), &PositionKind::DynamicFrozen(vec![2, 4, 6]));
    }

    #[test]
    fn encode_zero_is_zero() {
        let spec = dynamic_test_code_8_4();
        assert_eq!(spec.encode(&[0, 0, 0, 0]).unwrap(), vec![0u8; 8]);
    }

    #[test]
    fn encode_single_row_identity_matrix() {
        let spec = PolarCodeSpec::from_text("2 1\n10\n").unwrap();
        assert_eq!(spec.encode(&[1]).unwrap(), vec![1, 0]);
        assert_eq!(spec.rate(), CodeRate { num: 1, den: 2 });
    }

    #[test]
    fn encode_dynamic_example_by_hand() {
        // a = (1,1): u = row0 ^ row1 = 1100, c = u K = 0100
        // (rows 1 and 2 of the 4x4 kernel XOR to that).
        let spec = PolarCodeSpec::from_text("4 2\n1010\n0110\n").unwrap();
        let c = spec.encode(&[1, 1]).unwrap();
        assert_eq!(spec.codeword_to_u(&c).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(c, vec![0, 1, 0, 0]);
        // cross-check against the dense kernel product
        let u = spec.precoding().map_info(&[1, 1]).unwrap();
        assert_eq!(gf2_mul(&u, spec.kernel()).unwrap(), c);
    }

    #[test]
    fn every_encoded_word_is_valid() {
        let spec = dynamic_test_code_8_4();
        for word in 0..16u8 {
            let a: Vec<u8> = (0..4).map(|i| (word >> i) & 1).collect();
            let c = spec.encode(&a).unwrap();
            assert!(spec.is_valid_codeword(&c).unwrap());
            let u = spec.codeword_to_u(&c).unwrap();
            assert_eq!(spec.recover_info(&u).unwrap(), a);
        }
        assert!(spec.is_valid_codeword(&[0u8; 8]).unwrap());
    }

    #[test]
    fn codebook_is_injective_and_linear() {
        let spec = dynamic_test_code_8_4();
        let mut seen: Vec<Vec<u8>> = Vec::new();
        let words: Vec<Vec<u8>> = (0..16u8)
            .map(|w| (0..4).map(|i| (w >> i) & 1).collect())
            .collect();
        for a in &words {
            let c = spec.encode(a).unwrap();
            assert!(!seen.contains(&c), "codebook collision");
            seen.push(c);
        }
        for a in &words {
            for b in &words {
                let ab: Vec<u8> = a.iter().zip(b).map(|(x, y)| x ^ y).collect();
                let sum: Vec<u8> = spec
                    .encode(a)
                    .unwrap()
                    .iter()
                    .zip(&spec.encode(b).unwrap())
                    .map(|(x, y)| x ^ y)
                    .collect();
                assert_eq!(spec.encode(&ab).unwrap(), sum);
            }
        }
    }

    #[test]
    fn single_bit_flips_are_detected() {
        // Exhaustive over all codewords and all single flips; both test
        // codes here have minimum distance >= 2.
        for spec in [
            dynamic_test_code_8_4(),
            PolarCodeSpec::plain(16, 8, 1.0).unwrap(),
        ] {
            for word in 0..(1u32 << spec.dim()) {
                let a: Vec<u8> = (0..spec.dim()).map(|i| ((word >> i) & 1) as u8).collect();
                let mut c = spec.encode(&a).unwrap();
                for j in 0..spec.len() {
                    c[j] ^= 1;
                    assert!(!spec.is_valid_codeword(&c).unwrap());
                    c[j] ^= 1;
                }
            }
        }
    }

    #[test]
    fn rates_are_exact() {
        assert_eq!(
            PolarCodeSpec::plain(64, 51, 2.0).unwrap().rate(),
            CodeRate { num: 51, den: 64 }
        );
        assert_eq!(
            PolarCodeSpec::plain(256, 171, 2.0).unwrap().rate(),
            CodeRate { num: 171, den: 256 }
        );
    }

    #[test]
    fn plain_construction_prefers_late_positions() {
        let spec = PolarCodeSpec::plain(8, 4, 1.0).unwrap();
        let info = spec.frozen().info_positions();
        // Position N-1 is always the most reliable; position 0 the least.
        assert!(info.contains(&7));
        assert!(!info.contains(&0));
        assert_eq!(spec.constraint_suffix_counts()[7], 0);
    }

    #[test]
    fn suffix_counts_count_frozen_and_dynamic() {
        let spec = dynamic_test_code_8_4();
        // kinds: F F I D I I I D  -> suffix counts from each position
        assert_eq!(
            spec.constraint_suffix_counts(),
            vec![3, 2, 2, 1, 1, 1, 1, 0]
        );
    }

    #[test]
    fn degenerate_single_bit_code() {
        let mut m = BitMatrix::zeros(1, 1);
        m.set(0, 0, 1);
        let spec = PolarCodeSpec::new(PrecodingMatrix::from_matrix(m).unwrap()).unwrap();
        assert_eq!(spec.encode(&[1]).unwrap(), vec![1]);
        assert!(spec.is_valid_codeword(&[1]).unwrap());
    }
}

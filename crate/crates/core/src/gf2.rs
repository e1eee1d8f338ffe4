//! GF(2) linear algebra for polar component codes.
//!
//! Bit matrices are stored row-major in packed 64-bit words so that
//! Kronecker powers of the polarization kernel stay cache-resident at the
//! block lengths used here. Vectors are plain `&[u8]` of `{0,1}` entries;
//! they are short and the decoders consume them bit by bit anyway.
//!
//! Index convention: `u`, `c`, and precoding-matrix columns all use the
//! natural (non-bit-reversed) ordering throughout the crate. Public
//! interfaces that mention positions are 0-based unless stated otherwise.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest accepted Kronecker exponent; `2^13 x 2^13` bits is 8 MiB.
pub const MAX_KRON_EXPONENT: u32 = 13;

/// Dense GF(2) matrix, row-major, bits packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix with the given shape. Dimensions must be positive.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        debug_assert!(r < self.rows && c < self.cols);
        ((self.words[r * self.words_per_row + c / 64] >> (c % 64)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.words[r * self.words_per_row + c / 64];
        if bit & 1 == 1 {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Number of one-entries in the whole matrix.
    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Row `r` expanded to one byte per bit.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }
}

impl core::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `n`-fold Kronecker power of the 2x2 lower-triangular polarization kernel.
///
/// `n = 0` yields the 1x1 identity. Rejects exponents past
/// [`MAX_KRON_EXPONENT`] to bound memory.
pub fn kron_power(n: u32) -> Result<BitMatrix> {
    if n > MAX_KRON_EXPONENT {
        return Err(Error::KronExponentTooLarge {
            requested: n,
            max: MAX_KRON_EXPONENT,
        });
    }
    let mut m = BitMatrix::zeros(1, 1);
    m.set(0, 0, 1);
    for _ in 0..n {
        let half = m.rows();
        let mut next = BitMatrix::zeros(2 * half, 2 * half);
        for i in 0..half {
            for j in 0..half {
                if m.get(i, j) == 1 {
                    next.set(i, j, 1);
                    next.set(i + half, j, 1);
                    next.set(i + half, j + half, 1);
                }
            }
        }
        m = next;
    }
    Ok(m)
}

/// GF(2) vector-matrix product `v * M`.
pub fn gf2_mul(v: &[u8], m: &BitMatrix) -> Result<Vec<u8>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: v.len(),
        });
    }
    let mut acc = vec![0u64; m.words_per_row];
    for (r, &bit) in v.iter().enumerate() {
        if bit & 1 == 1 {
            for (a, w) in acc.iter_mut().zip(m.row_words(r)) {
                *a ^= w;
            }
        }
    }
    Ok((0..m.cols())
        .map(|c| ((acc[c / 64] >> (c % 64)) & 1) as u8)
        .collect())
}

/// In-place polar transform `x -> x * K^(log2 len)` over GF(2).
///
/// The transform is an involution, so the same routine maps `u` to the
/// codeword and the codeword back to `u`. `bits.len()` must be a power of
/// two (1 is allowed).
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        let mut start = 0;
        while start < n {
            for j in start..start + h {
                bits[j] ^= bits[j + h];
            }
            start += 2 * h;
        }
        h *= 2;
    }
}

/// Per-position decoding role derived from a precoding matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositionKind {
    /// Free position carrying information; the payload is the row index of
    /// the pivot that lands here.
    Info(usize),
    /// Position pinned to zero.
    Frozen,
    /// Position equal to the XOR of the listed earlier info positions
    /// (0-based, strictly smaller, sorted ascending).
    DynamicFrozen(Vec<usize>),
}

/// Sequentially decodable frozen/dynamic-frozen layout of a component code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenStructure {
    kinds: Vec<PositionKind>,
    info_positions: Vec<usize>,
}

impl FrozenStructure {
    pub fn kinds(&self) -> &[PositionKind] {
        &self.kinds
    }

    #[inline]
    pub fn kind(&self, pos: usize) -> &PositionKind {
        &self.kinds[pos]
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// Info positions in ascending order (equals the sorted pivot set).
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn info_count(&self) -> usize {
        self.info_positions.len()
    }

    /// Sequentially fill a full `u` vector from the values at the info
    /// positions, given in ascending position order.
    pub fn expand(&self, info_values: &[u8]) -> Result<Vec<u8>> {
        if info_values.len() != self.info_positions.len() {
            return Err(Error::DimensionMismatch {
                expected: self.info_positions.len(),
                got: info_values.len(),
            });
        }
        let mut u = vec![0u8; self.kinds.len()];
        let mut next_info = 0;
        for (i, kind) in self.kinds.iter().enumerate() {
            u[i] = match kind {
                PositionKind::Info(_) => {
                    let v = info_values[next_info];
                    next_info += 1;
                    v
                }
                PositionKind::Frozen => 0,
                PositionKind::DynamicFrozen(deps) => {
                    deps.iter().fold(0, |acc, &d| acc ^ u[d])
                }
            };
        }
        Ok(u)
    }

    /// True iff `u` satisfies every frozen and dynamic-frozen constraint.
    pub fn check(&self, u: &[u8]) -> Result<bool> {
        if u.len() != self.kinds.len() {
            return Err(Error::DimensionMismatch {
                expected: self.kinds.len(),
                got: u.len(),
            });
        }
        for (i, kind) in self.kinds.iter().enumerate() {
            match kind {
                PositionKind::Info(_) => {}
                PositionKind::Frozen => {
                    if u[i] != 0 {
                        return Ok(false);
                    }
                }
                PositionKind::DynamicFrozen(deps) => {
                    let want = deps.iter().fold(0, |acc, &d| acc ^ u[d]);
                    if u[i] != want {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `k x N` GF(2) precoding matrix with first-one pivots.
///
/// The pivot of each row is the column of its leftmost one; pivots are
/// required to be pairwise distinct, which makes every conforming matrix
/// sequentially decodable without reordering. Matrices produced under a
/// different row normal form must be Gaussian-reduced to this one first
/// (row operations keep the row space, hence the code).
#[derive(Debug, Clone)]
pub struct PrecodingMatrix {
    dim: usize,
    len: usize,
    stages: u32,
    matrix: BitMatrix,
    pivots: Vec<usize>,
}

impl PrecodingMatrix {
    /// Build from an explicit bit matrix, validating the pivot structure.
    ///
    /// Accepts any power-of-two width including 1 (the degenerate
    /// single-bit code used by channel sanity checks); the text format
    /// handled by [`PrecodingMatrix::parse`] starts at width 2.
    pub fn from_matrix(matrix: BitMatrix) -> Result<Self> {
        let len = matrix.cols();
        let dim = matrix.rows();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter("block length must be a power of two"));
        }
        if dim > len {
            return Err(Error::InvalidParameter("more rows than columns"));
        }
        let mut pivots = Vec::with_capacity(dim);
        for r in 0..dim {
            let pivot = (0..len).find(|&c| matrix.get(r, c) == 1);
            match pivot {
                None => return Err(Error::InvalidParameter("zero row in precoding matrix")),
                Some(p) => {
                    if pivots.contains(&p) {
                        return Err(Error::InvalidParameter("duplicate pivot column"));
                    }
                    pivots.push(p);
                }
            }
        }
        Ok(PrecodingMatrix {
            dim,
            len,
            stages: len.trailing_zeros(),
            matrix,
            pivots,
        })
    }

    /// Parse the ASCII exchange format.
    ///
    /// Line 1 holds `<N> <k>`; the next `k` lines hold `N` characters from
    /// `{0,1}` each (row `r` of the matrix). Line ends are
    /// whitespace-tolerant and trailing blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse {
                line: 1,
                reason: "empty input".to_string(),
            })?;
        let mut it = header.split_whitespace();
        let len: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                reason: "expected \"<N> <k>\"".to_string(),
            })?;
        let dim: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                reason: "expected \"<N> <k>\"".to_string(),
            })?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: 1,
                reason: "trailing tokens after \"<N> <k>\"".to_string(),
            });
        }
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Parse {
                line: 1,
                reason: format!("block length {len} is not a power of two >= 2"),
            });
        }
        if dim == 0 || dim > len {
            return Err(Error::Parse {
                line: 1,
                reason: format!("invalid dimension k={dim} for N={len}"),
            });
        }

        let mut matrix = BitMatrix::zeros(dim, len);
        let mut pivots: Vec<usize> = Vec::with_capacity(dim);
        for r in 0..dim {
            let (idx, raw) = lines.next().ok_or_else(|| Error::Parse {
                line: r + 2,
                reason: "missing matrix row".to_string(),
            })?;
            let line_no = idx + 1;
            let row = raw.trim();
            if row.len() != len {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("expected {len} characters, got {}", row.len()),
                });
            }
            let mut pivot = None;
            for (c, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => {
                        matrix.set(r, c, 1);
                        if pivot.is_none() {
                            pivot = Some(c);
                        }
                    }
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            let pivot = pivot.ok_or_else(|| Error::Parse {
                line: line_no,
                reason: "zero row".to_string(),
            })?;
            if pivots.contains(&pivot) {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("duplicate pivot column {}", pivot + 1),
                });
            }
            pivots.push(pivot);
        }
        for (idx, rest) in lines {
            if !rest.trim().is_empty() {
                return Err(Error::Parse {
                    line: idx + 1,
                    reason: "unexpected content after last matrix row".to_string(),
                });
            }
        }
        Ok(PrecodingMatrix {
            dim,
            len,
            stages: len.trailing_zeros(),
            matrix,
            pivots,
        })
    }

    /// Info length `k`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `log2 N`.
    pub fn stages(&self) -> u32 {
        self.stages
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Pivot column of each row, in row order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Map info bits to the `u`-domain vector `a * P`.
    pub fn map_info(&self, a: &[u8]) -> Result<Vec<u8>> {
        gf2_mul(a, &self.matrix)
    }
}

impl core::str::FromStr for PrecodingMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PrecodingMatrix::parse(s)
    }
}

// Word-packed position set used while substituting rows into each other.
struct PosSet {
    words: Vec<u64>,
}

impl PosSet {
    fn new(len: usize) -> Self {
        PosSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn toggle(&mut self, pos: usize) {
        self.words[pos / 64] ^= 1 << (pos % 64);
    }

    fn xor_in(&mut self, other: &PosSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                out.push(wi * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Convert a precoding matrix into sequential decoding constraints.
///
/// Pivot columns become [`PositionKind::Info`]. Every other column `j`
/// equals the XOR of the rows with a one in `j`; forward substitution
/// rewrites those rows as XORs of `u`-values at pivot positions strictly
/// left of `j`. An empty combination freezes the position to zero.
pub fn derive_constraints(p: &PrecodingMatrix) -> Result<FrozenStructure> {
    let len = p.len();
    let dim = p.dim();
    let m = p.matrix();

    // Row order sorted by pivot so substitutions only reference solved rows.
    let mut row_order: Vec<usize> = (0..dim).collect();
    row_order.sort_by_key(|&r| p.pivots()[r]);

    // subst[r] = set of info positions whose u-values XOR to a_r.
    let mut subst: Vec<Option<PosSet>> = (0..dim).map(|_| None).collect();
    for &r in &row_order {
        let pivot = p.pivots()[r];
        let mut set = PosSet::new(len);
        set.toggle(pivot);
        for &r2 in &row_order {
            if r2 != r && p.pivots()[r2] < pivot && m.get(r2, pivot) == 1 {
                set.xor_in(subst[r2].as_ref().expect("solved in pivot order"));
            }
        }
        subst[r] = Some(set);
    }

    let mut kinds = Vec::with_capacity(len);
    let mut info_positions = Vec::with_capacity(dim);
    for j in 0..len {
        if let Some(r) = p.pivots().iter().position(|&pv| pv == j) {
            kinds.push(PositionKind::Info(r));
            info_positions.push(j);
            continue;
        }
        let mut combo = PosSet::new(len);
        for r in 0..dim {
            if m.get(r, j) == 1 {
                combo.xor_in(subst[r].as_ref().expect("all rows solved"));
            }
        }
        let deps = combo.positions();
        if let Some(&max) = deps.last() {
            // First-one pivots guarantee dependencies point backward.
            assert!(max < j, "dependency at or after constrained position");
        }
        if deps.is_empty() {
            kinds.push(PositionKind::Frozen);
        } else {
            kinds.push(PositionKind::DynamicFrozen(deps));
        }
    }
    Ok(FrozenStructure {
        kinds,
        info_positions,
    })
}

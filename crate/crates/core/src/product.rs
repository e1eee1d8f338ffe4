//! Iterative two-dimensional product decoding: alternating row and column
//! half iterations with extrinsic extraction, scaling, and early stopping.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{BitGrid, LlrGrid};
use crate::polar::{CodeRate, PolarCodeSpec, SharedCode};
use crate::scl::{soft_output_codebook, soft_output_pyndiah, SclDecoder};
use crate::{Error, Result};

/// Which soft-output generator the component decoder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoftMode {
    /// List-only soft output with the metric-spread fallback.
    Pyndiah,
    /// Codebook-aware soft output (list masses plus pruned mass).
    Soscl,
}

/// Two-dimensional product code: rows encoded by `row_code`, columns by
/// `col_code`. The stored array is `col_code.len()` rows by
/// `row_code.len()` columns.
#[derive(Debug, Clone)]
pub struct ProductCodeSpec {
    row_code: SharedCode,
    col_code: SharedCode,
}

impl ProductCodeSpec {
    pub fn new(row_code: SharedCode, col_code: SharedCode) -> Self {
        ProductCodeSpec { row_code, col_code }
    }

    /// Square product of one component code.
    pub fn square(code: SharedCode) -> Self {
        ProductCodeSpec {
            row_code: code.clone(),
            col_code: code,
        }
    }

    pub fn row_code(&self) -> &SharedCode {
        &self.row_code
    }

    pub fn col_code(&self) -> &SharedCode {
        &self.col_code
    }

    /// Array height (column-code length).
    pub fn rows(&self) -> usize {
        self.col_code.len()
    }

    /// Array width (row-code length).
    pub fn cols(&self) -> usize {
        self.row_code.len()
    }

    pub fn info_rows(&self) -> usize {
        self.col_code.dim()
    }

    pub fn info_cols(&self) -> usize {
        self.row_code.dim()
    }

    pub fn rate(&self) -> CodeRate {
        CodeRate {
            num: self.row_code.dim() * self.col_code.dim(),
            den: self.row_code.len() * self.col_code.len(),
        }
    }
}

/// Encode a `k2 x k1` info array: rows first, then columns. For linear
/// component codes the two orders commute.
pub fn encode_product(spec: &ProductCodeSpec, info: &BitGrid) -> Result<BitGrid> {
    if info.rows() != spec.info_rows() || info.cols() != spec.info_cols() {
        return Err(Error::DimensionMismatch {
            expected: spec.info_rows() * spec.info_cols(),
            got: info.rows() * info.cols(),
        });
    }
    let mut out = BitGrid::zeros(spec.rows(), spec.cols());
    for r in 0..info.rows() {
        let encoded = spec.row_code.encode(info.row(r))?;
        out.row_mut(r)[..].copy_from_slice(&encoded);
    }
    for c in 0..spec.cols() {
        let col: Vec<u8> = (0..info.rows()).map(|r| out.get(r, c)).collect();
        let encoded = spec.col_code.encode(&col)?;
        out.set_col(c, &encoded);
    }
    Ok(out)
}

/// True iff every row is a row-code codeword and every column a
/// column-code codeword.
pub fn check_product_valid(spec: &ProductCodeSpec, word: &BitGrid) -> Result<bool> {
    if word.rows() != spec.rows() || word.cols() != spec.cols() {
        return Err(Error::DimensionMismatch {
            expected: spec.rows() * spec.cols(),
            got: word.rows() * word.cols(),
        });
    }
    for r in 0..word.rows() {
        if !spec.row_code.is_valid_codeword(word.row(r))? {
            return Ok(false);
        }
    }
    for c in 0..word.cols() {
        if !spec.col_code.is_valid_codeword(&word.col(c))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recover the `k2 x k1` info array from a valid product codeword by
/// inverting the column encoding, then the row encoding.
pub fn extract_info(spec: &ProductCodeSpec, word: &BitGrid) -> Result<BitGrid> {
    if word.rows() != spec.rows() || word.cols() != spec.cols() {
        return Err(Error::DimensionMismatch {
            expected: spec.rows() * spec.cols(),
            got: word.rows() * word.cols(),
        });
    }
    let mut mid = BitGrid::zeros(spec.info_rows(), spec.cols());
    for c in 0..spec.cols() {
        let u = spec.col_code.codeword_to_u(&word.col(c))?;
        let a = spec.col_code.recover_info(&u)?;
        mid.set_col(c, &a);
    }
    let mut info = BitGrid::zeros(spec.info_rows(), spec.info_cols());
    for r in 0..spec.info_rows() {
        let u = spec.row_code.codeword_to_u(mid.row(r))?;
        let a = spec.row_code.recover_info(&u)?;
        info.row_mut(r).copy_from_slice(&a);
    }
    Ok(info)
}

/// Per-half-iteration extrinsic scaling coefficients, each in `(0, 2]`.
///
/// A decode running longer than the schedule repeats the last coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSchedule {
    values: Vec<f64>,
}

impl AlphaSchedule {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("alpha schedule must not be empty"));
        }
        if values.iter().any(|&a| !(a > 0.0 && a <= 2.0)) {
            return Err(Error::InvalidParameter("alpha values must lie in (0, 2]"));
        }
        Ok(AlphaSchedule { values })
    }

    /// Constant schedule of length one.
    pub fn constant(alpha: f64) -> Result<Self> {
        Self::new(vec![alpha])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficient for 1-based half iteration `l`; repeats the final entry
    /// past the end of the schedule.
    pub fn alpha_for(&self, half_iteration: usize) -> f64 {
        debug_assert!(half_iteration >= 1);
        let idx = (half_iteration - 1).min(self.values.len() - 1);
        self.values[idx]
    }
}

/// Elementwise extrinsic scaling.
pub fn scale(l_e: &LlrGrid, alpha: f64) -> LlrGrid {
    debug_assert!(alpha > 0.0);
    l_e.scaled(alpha)
}

/// Half-iteration direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rows,
    Cols,
}

/// Outputs of one half iteration.
#[derive(Debug, Clone)]
pub struct HalfIterationOutput {
    /// A-posteriori LLRs, reconstructed as `L_e + L_ch + L_a` so the
    /// extrinsic identity holds bit-exactly.
    pub l_app: LlrGrid,
    /// Extrinsic LLRs `L_app - L_ch - L_a`.
    pub l_e: LlrGrid,
    /// Hard decisions on `L_app` (negative decides one, ties decide zero).
    pub hard: BitGrid,
}

/// Decode stop status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// The hard decision passed the full row/column validity check.
    ValidCodeword,
    /// The iteration budget ran out.
    MaxIterations,
}

/// Outcome of an iterative product decode.
#[derive(Debug, Clone)]
pub struct DecodeReport {
    pub hard: BitGrid,
    pub status: DecodeStatus,
    pub half_iterations_used: usize,
    /// Validity-check outcome after each executed half iteration.
    pub validity: Vec<bool>,
}

/// Iterative decoder instance holding per-thread component decoders.
pub struct ProductDecoder {
    spec: ProductCodeSpec,
    row_dec: SclDecoder,
    col_dec: SclDecoder,
    list_size: usize,
    soft_mode: SoftMode,
}

impl ProductDecoder {
    pub fn new(spec: ProductCodeSpec, list_size: usize, soft_mode: SoftMode) -> Self {
        let row_dec = SclDecoder::new(spec.row_code().clone());
        let col_dec = SclDecoder::new(spec.col_code().clone());
        ProductDecoder {
            spec,
            row_dec,
            col_dec,
            list_size,
            soft_mode,
        }
    }

    pub fn spec(&self) -> &ProductCodeSpec {
        &self.spec
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn soft_mode(&self) -> SoftMode {
        self.soft_mode
    }

    /// One pass of component decoding over all rows or all columns.
    ///
    /// Per line: decode `L_ch + L_a`, emit the chosen soft output, extract
    /// the extrinsic part, and rebuild `L_app = L_e + L_ch + L_a` in that
    /// exact association order. Lines are independent; the result does not
    /// depend on the order they are processed in.
    pub fn half_iteration(
        &mut self,
        l_ch: &LlrGrid,
        l_a: &LlrGrid,
        direction: Direction,
    ) -> Result<HalfIterationOutput> {
        let (rows, cols) = (self.spec.rows(), self.spec.cols());
        if l_ch.rows() != rows || l_ch.cols() != cols || l_a.rows() != rows || l_a.cols() != cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: l_ch.rows() * l_ch.cols(),
            });
        }
        let mut l_e = LlrGrid::zeros(rows, cols);
        match direction {
            Direction::Rows => {
                let mut l_in = vec![0.0; cols];
                for r in 0..rows {
                    for j in 0..cols {
                        l_in[j] = l_ch.get(r, j) + l_a.get(r, j);
                    }
                    let raw = decode_line(
                        &mut self.row_dec,
                        &l_in,
                        self.list_size,
                        self.soft_mode,
                    )?;
                    for j in 0..cols {
                        l_e.set(r, j, raw[j] - l_ch.get(r, j) - l_a.get(r, j));
                    }
                }
            }
            Direction::Cols => {
                let mut l_in = vec![0.0; rows];
                for c in 0..cols {
                    for i in 0..rows {
                        l_in[i] = l_ch.get(i, c) + l_a.get(i, c);
                    }
                    let raw = decode_line(
                        &mut self.col_dec,
                        &l_in,
                        self.list_size,
                        self.soft_mode,
                    )?;
                    for i in 0..rows {
                        l_e.set(i, c, raw[i] - l_ch.get(i, c) - l_a.get(i, c));
                    }
                }
            }
        }
        let mut l_app = LlrGrid::zeros(rows, cols);
        let mut hard = BitGrid::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let app = reconstruct_app(l_e.get(r, c), l_ch.get(r, c), l_a.get(r, c));
                l_app.set(r, c, app);
                hard.set(r, c, u8::from(app < 0.0));
            }
        }
        Ok(HalfIterationOutput { l_app, l_e, hard })
    }

    /// Full iterative decode: rows first, alternating directions, with the
    /// validity check after every half iteration and early stop on a valid
    /// product word. The a-priori grid starts at zero and is refreshed with
    /// the scaled extrinsic output of each half iteration.
    pub fn decode(
        &mut self,
        l_ch: &LlrGrid,
        alphas: &AlphaSchedule,
        max_half_iterations: usize,
    ) -> Result<DecodeReport> {
        if max_half_iterations == 0 {
            return Err(Error::InvalidParameter(
                "need at least one half iteration",
            ));
        }
        let mut l_a = LlrGrid::zeros(self.spec.rows(), self.spec.cols());
        let mut validity = Vec::with_capacity(max_half_iterations);
        let mut last: Option<HalfIterationOutput> = None;
        for l in 1..=max_half_iterations {
            let direction = if l % 2 == 1 {
                Direction::Rows
            } else {
                Direction::Cols
            };
            let out = self.half_iteration(l_ch, &l_a, direction)?;
            let valid = check_product_valid(&self.spec, &out.hard)?;
            validity.push(valid);
            if valid {
                return Ok(DecodeReport {
                    hard: out.hard,
                    status: DecodeStatus::ValidCodeword,
                    half_iterations_used: l,
                    validity,
                });
            }
            l_a = scale(&out.l_e, alphas.alpha_for(l));
            last = Some(out);
        }
        let out = last.expect("at least one half iteration ran");
        Ok(DecodeReport {
            hard: out.hard,
            status: DecodeStatus::MaxIterations,
            half_iterations_used: max_half_iterations,
            validity,
        })
    }
}

/// `L_app` reassembly; one shared association order so tests can rebuild
/// the identical floating-point value.
#[inline]
pub fn reconstruct_app(l_e: f64, l_ch: f64, l_a: f64) -> f64 {
    (l_e + l_ch) + l_a
}

fn decode_line(
    dec: &mut SclDecoder,
    l_in: &[f64],
    list_size: usize,
    soft_mode: SoftMode,
) -> Result<Vec<f64>> {
    let out = dec.decode(l_in, list_size)?;
    Ok(match soft_mode {
        SoftMode::Pyndiah => soft_output_pyndiah(&out),
        SoftMode::Soscl => soft_output_codebook(&out, l_in),
    })
}

/// Convenience constructor for a square product of one component spec.
pub fn square_product(code: PolarCodeSpec) -> ProductCodeSpec {
    ProductCodeSpec::square(Arc::new(code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::PolarCodeSpec;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tiny_spec() -> ProductCodeSpec {
        // (8,4) precoded rows, (4,2) plain columns
        let row = Arc::new(
            PolarCodeSpec::from_text("8 4\n00110001\n00001001\n00000100\n00000011\n").unwrap(),
        );
        let col = Arc::new(PolarCodeSpec::plain(4, 2, 1.0).unwrap());
        ProductCodeSpec::new(row, col)
    }

    fn random_info(spec: &ProductCodeSpec, rng: &mut ChaCha8Rng) -> BitGrid {
        let mut g = BitGrid::zeros(spec.info_rows(), spec.info_cols());
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                g.set(r, c, rng.random_range(0..2u8));
            }
        }
        g
    }

    fn noiseless_llrs(word: &BitGrid) -> LlrGrid {
        let mut l = LlrGrid::zeros(word.rows(), word.cols());
        for r in 0..word.rows() {
            for c in 0..word.cols() {
                l.set(r, c, if word.get(r, c) == 0 { 40.0 } else { -40.0 });
            }
        }
        l
    }

    #[test]
    fn all_zero_info_encodes_to_all_zero() {
        let spec = tiny_spec();
        let info = BitGrid::zeros(spec.info_rows(), spec.info_cols());
        let cw = encode_product(&spec, &info).unwrap();
        assert!(cw.as_slice().iter().all(|&b| b == 0));
        assert!(check_product_valid(&spec, &cw).unwrap());
    }

    #[test]
    fn row_column_encoding_commutes() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let info = random_info(&spec, &mut rng);
            let rows_first = encode_product(&spec, &info).unwrap();

            // columns first, then rows
            let mut tmp = BitGrid::zeros(spec.rows(), spec.info_cols());
            for c in 0..spec.info_cols() {
                let col: Vec<u8> = (0..spec.info_rows()).map(|r| info.get(r, c)).collect();
                tmp.set_col(c, &spec.col_code().encode(&col).unwrap());
            }
            let mut cols_first = BitGrid::zeros(spec.rows(), spec.cols());
            for r in 0..spec.rows() {
                let encoded = spec.row_code().encode(tmp.row(r)).unwrap();
                cols_first.row_mut(r).copy_from_slice(&encoded);
            }
            assert_eq!(rows_first, cols_first);
        }
    }

    #[test]
    fn encoded_words_pass_row_and_column_checks() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
            for r in 0..spec.rows() {
                assert!(spec.row_code().is_valid_codeword(cw.row(r)).unwrap());
            }
            for c in 0..spec.cols() {
                assert!(spec.col_code().is_valid_codeword(&cw.col(c)).unwrap());
            }
        }
    }

    #[test]
    fn info_extraction_inverts_encoding() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let info = random_info(&spec, &mut rng);
            let cw = encode_product(&spec, &info).unwrap();
            assert_eq!(extract_info(&spec, &cw).unwrap(), info);
        }
    }

    #[test]
    fn single_flip_invalidates() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
        for r in 0..spec.rows() {
            for c in 0..spec.cols() {
                let bit = cw.get(r, c);
                cw.set(r, c, bit ^ 1);
                assert!(!check_product_valid(&spec, &cw).unwrap());
                cw.set(r, c, bit);
            }
        }
        assert!(check_product_valid(&spec, &cw).unwrap());
    }

    #[test]
    fn alpha_schedule_validates_and_extends() {
        assert!(AlphaSchedule::new(vec![]).is_err());
        assert!(AlphaSchedule::new(vec![0.0]).is_err());
        assert!(AlphaSchedule::new(vec![2.5]).is_err());
        let s = AlphaSchedule::new(vec![0.9, 0.5]).unwrap();
        assert_eq!(s.alpha_for(1), 0.9);
        assert_eq!(s.alpha_for(2), 0.5);
        assert_eq!(s.alpha_for(17), 0.5);
    }

    #[test]
    fn scale_examples() {
        let g = LlrGrid::from_rows(1, 2, vec![2.0, -1.0]);
        assert_eq!(scale(&g, 1.0).as_slice(), &[2.0, -1.0]);
        assert_eq!(scale(&g, 0.5).as_slice(), &[1.0, -0.5]);
        assert_abs_diff_eq!(scale(&g, 0.96).get(0, 0), 1.92, epsilon = 1e-15);
    }

    #[test]
    fn noiseless_half_iteration_recovers_word() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
        let l_ch = noiseless_llrs(&cw);
        let l_a = LlrGrid::zeros(spec.rows(), spec.cols());
        let mut dec = ProductDecoder::new(spec.clone(), 4, SoftMode::Soscl);
        let out = dec.half_iteration(&l_ch, &l_a, Direction::Rows).unwrap();
        assert_eq!(out.hard, cw);
        assert!(out.l_e.all_finite());
    }

    #[test]
    fn extrinsic_identity_is_bit_exact() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut dec = ProductDecoder::new(spec.clone(), 2, SoftMode::Pyndiah);
        for _ in 0..5 {
            let cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
            let mut l_ch = noiseless_llrs(&cw);
            // moderate noise
            for v in l_ch.as_mut_slice() {
                *v = *v * 0.05 + rng.random_range(-2.0..2.0);
            }
            let mut l_a = LlrGrid::zeros(spec.rows(), spec.cols());
            for v in l_a.as_mut_slice() {
                *v = rng.random_range(-1.0..1.0);
            }
            for dir in [Direction::Rows, Direction::Cols] {
                let out = dec.half_iteration(&l_ch, &l_a, dir).unwrap();
                for r in 0..spec.rows() {
                    for c in 0..spec.cols() {
                        let rebuilt =
                            reconstruct_app(out.l_e.get(r, c), l_ch.get(r, c), l_a.get(r, c));
                        assert_eq!(rebuilt.to_bits(), out.l_app.get(r, c).to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn half_iteration_rows_match_component_decoder() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut dec = ProductDecoder::new(spec.clone(), 4, SoftMode::Soscl);
        let mut l_ch = LlrGrid::zeros(spec.rows(), spec.cols());
        for v in l_ch.as_mut_slice() {
            *v = rng.random_range(-3.0..3.0);
        }
        let l_a = LlrGrid::zeros(spec.rows(), spec.cols());
        let out = dec.half_iteration(&l_ch, &l_a, Direction::Rows).unwrap();
        let mut row_dec = SclDecoder::new(spec.row_code().clone());
        for r in 0..spec.rows() {
            let l_in: Vec<f64> = (0..spec.cols()).map(|c| l_ch.get(r, c)).collect();
            let component = row_dec.decode(&l_in, 4).unwrap();
            let app = crate::scl::soft_output_codebook(&component, &l_in);
            for c in 0..spec.cols() {
                assert_abs_diff_eq!(out.l_app.get(r, c), app[c], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn noiseless_decode_stops_after_one_half_iteration() {
        let spec = tiny_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
        let l_ch = noiseless_llrs(&cw);
        let mut dec = ProductDecoder::new(spec, 4, SoftMode::Soscl);
        let alphas = AlphaSchedule::constant(0.5).unwrap();
        let report = dec.decode(&l_ch, &alphas, 20).unwrap();
        assert_eq!(report.status, DecodeStatus::ValidCodeword);
        assert_eq!(report.half_iterations_used, 1);
        assert_eq!(report.hard, cw);
        assert_eq!(report.validity, vec![true]);
    }

    #[test]
    fn early_stop_is_sound_and_deterministic() {
        let spec = tiny_spec();
        let alphas = AlphaSchedule::constant(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut dec = ProductDecoder::new(spec.clone(), 2, SoftMode::Soscl);
        for _ in 0..30 {
            let cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
            let mut l_ch = noiseless_llrs(&cw);
            for v in l_ch.as_mut_slice() {
                *v = *v * 0.08 + rng.random_range(-4.0..4.0);
            }
            let report = dec.decode(&l_ch, &alphas, 8).unwrap();
            if report.status == DecodeStatus::ValidCodeword {
                assert!(check_product_valid(&spec, &report.hard).unwrap());
                assert!(report.validity[report.half_iterations_used - 1]);
            } else {
                assert_eq!(report.half_iterations_used, 8);
                assert!(report.validity.iter().all(|&v| !v));
            }
            // bit-for-bit reproducibility
            let again = dec.decode(&l_ch, &alphas, 8).unwrap();
            assert_eq!(again.hard, report.hard);
            assert_eq!(again.status, report.status);
            assert_eq!(again.half_iterations_used, report.half_iterations_used);
        }
    }

    #[test]
    fn high_snr_mostly_stops_early() {
        let spec = tiny_spec();
        let alphas = AlphaSchedule::constant(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut dec = ProductDecoder::new(spec.clone(), 4, SoftMode::Soscl);
        let mut stopped = 0;
        let total = 40;
        for _ in 0..total {
            let cw = encode_product(&spec, &random_info(&spec, &mut rng)).unwrap();
            let mut l_ch = noiseless_llrs(&cw);
            for v in l_ch.as_mut_slice() {
                *v = *v * 0.2 + rng.random_range(-1.0..1.0);
            }
            let report = dec.decode(&l_ch, &alphas, 20).unwrap();
            if report.status == DecodeStatus::ValidCodeword {
                stopped += 1;
                assert_eq!(report.hard, cw);
            }
        }
        assert!(stopped >= total * 9 / 10, "only {stopped}/{total} stopped early");
    }

    #[test]
    fn decode_rejects_zero_budget() {
        let spec = tiny_spec();
        let mut dec = ProductDecoder::new(spec.clone(), 2, SoftMode::Pyndiah);
        let l_ch = LlrGrid::zeros(spec.rows(), spec.cols());
        let alphas = AlphaSchedule::constant(1.0).unwrap();
        assert!(dec.decode(&l_ch, &alphas, 0).is_err());
    }
}

//! Rectangular bit and LLR arrays for the product-code layer.
//!
//! Grids are row-major with `rows` = the column-code length and `cols` =
//! the row-code length, i.e. each stored row is one row-code word.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major grid of bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitGrid {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BitGrid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitGrid {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols);
        BitGrid { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        self.data[r * self.cols + c] = bit;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn set_col(&mut self, c: usize, bits: &[u8]) {
        assert_eq!(bits.len(), self.rows);
        for (r, &b) in bits.iter().enumerate() {
            self.set(r, c, b);
        }
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    /// Count of positions where the two grids differ.
    pub fn hamming_distance(&self, other: &BitGrid) -> usize {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Row-major grid of real-valued LLRs.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrGrid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl LlrGrid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LlrGrid {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        LlrGrid { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn set_col(&mut self, c: usize, vals: &[f64]) {
        assert_eq!(vals.len(), self.rows);
        for (r, &v) in vals.iter().enumerate() {
            self.set(r, c, v);
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Elementwise multiply by a scalar.
    pub fn scaled(&self, alpha: f64) -> LlrGrid {
        LlrGrid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

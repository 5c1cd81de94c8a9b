//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words, bit `i` living in word `i / 64` at
//! position `i % 64`. Everything here is exact Gaussian elimination; there
//! are no probabilistic shortcuts.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid hex string {0:?}")]
    InvalidHex(String),
    #[error("hex value does not fit in {0} bits")]
    HexOverflow(usize),
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// The standard basis vector with a single one at `bit`.
    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len <= 64` whose bit `i` is bit `i` of `value`.
    ///
    /// Bits of `value` above `len` are discarded.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64, "from_u64 needs len <= 64, got {len}");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = value & mask;
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "to_u64 needs len <= 64, got {}", self.len);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * 64 + t)
            })
        })
    }

    fn check_len(&self, other: &Self) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    /// Componentwise XOR.
    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.xor_unchecked(other);
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &Self) -> Result<(), Gf2Error> {
        self.check_len(other)?;
        self.xor_unchecked(other);
        Ok(())
    }

    /// XOR for callers that have already established equal lengths.
    pub(crate) fn xor_unchecked(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Standard bilinear form: parity of the componentwise product.
    pub fn dot(&self, other: &Self) -> Result<bool, Gf2Error> {
        self.check_len(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        let mut out = Self::zeros(len);
        for i in self.ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start, true);
        }
        out
    }

    /// Lowercase hex with `0x` prefix. Bit `i` carries weight `2^i`; the
    /// string has exactly `ceil(len / 4)` digits (at least one).
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits + 2);
        s.push_str("0x");
        for d in (0..digits).rev() {
            let mut nibble = 0u8;
            for k in 0..4 {
                let i = 4 * d + k;
                if i < self.len && self.get(i) {
                    nibble |= 1 << k;
                }
            }
            s.push(char::from_digit(nibble as u32, 16).expect("nibble < 16"));
        }
        s
    }

    /// Parses the output of [`BitVector::to_hex`]. Any digit count is
    /// accepted as long as the value fits in `len` bits.
    pub fn from_hex(len: usize, text: &str) -> Result<Self, Gf2Error> {
        let body = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .ok_or_else(|| Gf2Error::InvalidHex(text.to_string()))?;
        if body.is_empty() {
            return Err(Gf2Error::InvalidHex(text.to_string()));
        }
        let mut v = Self::zeros(len);
        for (d, ch) in body.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Gf2Error::InvalidHex(text.to_string()))?;
            for k in 0..4 {
                if nibble >> k & 1 == 1 {
                    let i = 4 * d + k;
                    if i >= len {
                        return Err(Gf2Error::HexOverflow(len));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A matrix over GF(2) stored as a list of row vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Matrix with no rows (the canonical form of the zero subspace).
    pub fn empty(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                out.rows[c].set(r, true);
            }
        }
        out
    }

    /// `M · v` where `v` has `col_count` entries.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot_unchecked(v) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        self.rows.iter().filter(|r| basis.insert(r)).count()
    }

    /// Reduced row-echelon form with zero rows dropped.
    ///
    /// The pivot of a row is its lowest set column; rows are sorted by pivot
    /// and every pivot column contains exactly one nonzero entry.
    pub fn rref(&self) -> Self {
        let mut rows: Vec<BitVector> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for row in &self.rows {
            let mut v = row.clone();
            for (p, b) in pivots.iter().zip(&rows) {
                if v.get(*p) {
                    v.xor_unchecked(b);
                }
            }
            if let Some(p) = v.first_one() {
                for b in rows.iter_mut() {
                    if b.get(p) {
                        b.xor_unchecked(&v);
                    }
                }
                rows.push(v);
                pivots.push(p);
            }
        }
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&k| pivots[k]);
        Self {
            cols: self.cols,
            rows: order.into_iter().map(|k| rows[k].clone()).collect(),
        }
    }

    /// Basis of `{x : M x = 0}`, one vector per non-pivot column.
    pub fn null_space(&self) -> Vec<BitVector> {
        let reduced = self.rref();
        let pivots: Vec<usize> = reduced
            .rows
            .iter()
            .map(|r| r.first_one().expect("rref rows are nonzero"))
            .collect();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut x = BitVector::unit(self.cols, free);
                for (row, &p) in reduced.rows.iter().zip(&pivots) {
                    if row.get(free) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// An incrementally built echelon basis.
///
/// Each stored row is reduced against all earlier rows, so rows can be
/// popped in LIFO order to undo insertions.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<(usize, BitVector)>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut v = v.clone();
        for (p, b) in &self.rows {
            if v.get(*p) {
                v.xor_unchecked(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns `false` when it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }

    pub fn truncate(&mut self, dim: usize) {
        self.rows.truncate(dim);
    }

    pub fn vectors(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter().map(|(_, v)| v)
    }

    /// Every vector of the span, in a deterministic order.
    pub fn span_elements(&self) -> Vec<BitVector> {
        let mut out = vec![BitVector::zeros(self.len)];
        for (_, b) in &self.rows {
            let extra: Vec<BitVector> = out
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w.xor_unchecked(b);
                    w
                })
                .collect();
            out.extend(extra);
        }
        out
    }
}

/// Componentwise sum of two vectors.
pub fn add(x: &BitVector, y: &BitVector) -> Result<BitVector, Gf2Error> {
    x.add(y)
}

/// Row rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Whether `v` is a linear combination of `basis`.
pub fn in_span(v: &BitVector, basis: &[BitVector]) -> Result<bool, Gf2Error> {
    let mut eb = EchelonBasis::new(v.len());
    for b in basis {
        if b.len() != v.len() {
            return Err(Gf2Error::DimensionMismatch {
                expected: v.len(),
                found: b.len(),
            });
        }
        eb.insert(b);
    }
    Ok(eb.contains(v))
}

/// Canonical basis of the span: reduced row-echelon form without zero rows.
///
/// Two lists span the same subspace iff their canonical forms are equal.
/// `cols` is needed to give the empty list a well-defined shape.
pub fn subspace_canonical(cols: usize, basis: &[BitVector]) -> Result<BitMatrix, Gf2Error> {
    Ok(BitMatrix::from_rows(cols, basis.to_vec())?.rref())
}

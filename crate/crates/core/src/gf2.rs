//! Packed-bit exact linear algebra over F2.
//!
//! This is the computational substrate for coboundary matrices, cocycle and
//! coboundary spaces, and for the exact minimum-weight coset search used by
//! cofilling and cosystole computations. Vectors are packed into `u64`
//! words; all results are deterministic (bases in reduced echelon form,
//! ties in the coset search broken lexicographically on the bit order).

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, Zero};
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coset enumeration budget exceeded: subspace dimension {dim} > budget {budget}")]
    Budget { dim: usize, budget: usize },
}

/// A fixed-length bit vector over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vec {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vec {
    pub fn zero(len: usize) -> Self {
        Gf2Vec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zero(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zero(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b != 0);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        assert_eq!(self.len, other.len, "xor of vectors of different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Gf2Vec) -> Gf2Vec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Scalar product over F2.
    pub fn dot(&self, other: &Gf2Vec) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Lexicographic order on the bit string b_0 b_1 ... b_{n-1} (0 < 1).
    pub fn lex_cmp(&self, other: &Gf2Vec) -> Ordering {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                let diff = a ^ b;
                let bit = diff.trailing_zeros();
                let a_bit = a >> bit & 1;
                return if a_bit == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }

    pub fn bits_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vec({})", self.bits_string())
    }
}

/// A dense F2 matrix stored row-major as packed bit rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf2Vec>,
}

impl Gf2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows, cols, data: vec![Gf2Vec::zero(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Gf2Vec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols);
        }
        Gf2Matrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r].set(c, v);
    }

    pub fn row(&self, r: usize) -> &Gf2Vec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> Gf2Vec {
        let mut v = Gf2Vec::zero(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix-vector product (x has length `cols`).
    pub fn mul_vec(&self, x: &Gf2Vec) -> Gf2Vec {
        assert_eq!(x.len(), self.cols, "mul_vec length mismatch");
        let mut out = Gf2Vec::zero(self.rows);
        for r in 0..self.rows {
            if self.data[r].dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Gf2Matrix::zero(self.rows, other.cols);
        for c in 0..other.cols {
            let col = other.column(c);
            for r in 0..self.rows {
                if self.data[r].dot(&col) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Gf2Vec::is_zero)
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| m.get(r, col));
            let Some(pr) = pivot_row else { continue };
            m.data.swap(row, pr);
            let pivot = m.data[row].clone();
            for r in 0..m.rows {
                if r != row && m.get(r, col) {
                    m.data[r].xor_assign(&pivot);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A particular solution of `M x = b`, or None if `b` is not in the image.
    /// Free variables are set to zero, so the result is deterministic.
    pub fn solve(&self, b: &Gf2Vec) -> Result<Option<Gf2Vec>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        // Eliminate on the augmented matrix [M | b].
        let mut aug = Gf2Matrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = Gf2Vec::zero(self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            if red.get(row, self.cols) {
                x.set(pc, true);
            }
        }
        debug_assert_eq!(&self.mul_vec(&x), b);
        Ok(Some(x))
    }

    /// Basis of the kernel, one vector per free column, in ascending order of
    /// the free column index (deterministic reduced form).
    pub fn kernel_basis(&self) -> Vec<Gf2Vec> {
        let (red, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = Gf2Vec::zero(self.cols);
            v.set(free, true);
            for (row, &pc) in pivots.iter().enumerate() {
                if red.get(row, free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space in reduced echelon form.
    pub fn image_basis(&self) -> Vec<Gf2Vec> {
        let (red, pivots) = self.transpose().rref();
        (0..pivots.len()).map(|r| red.data[r].clone()).collect()
    }

    pub fn rows_as_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let line: Vec<&str> =
                (0..self.cols).map(|c| if self.get(r, c) { "1" } else { "0" }).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{})", self.rows, self.cols)
    }
}

/// An echelonized spanning set supporting fast membership tests.
pub struct Echelon {
    rows: Vec<Gf2Vec>,
    pivots: Vec<usize>,
    len: usize,
}

impl Echelon {
    pub fn from_vectors(len: usize, vectors: &[Gf2Vec]) -> Self {
        let mut e = Echelon { rows: Vec::new(), pivots: Vec::new(), len };
        for v in vectors {
            e.insert(v.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; the residual is zero iff `v` is
    /// in the span.
    pub fn reduce(&self, v: &Gf2Vec) -> Gf2Vec {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    fn insert(&mut self, v: Gf2Vec) -> bool {
        assert_eq!(v.len(), self.len);
        let r = self.reduce(&v);
        match r.first_one() {
            None => false,
            Some(p) => {
                // Keep rows reduced above the new pivot as well.
                for row in &mut self.rows {
                    if row.get(p) {
                        row.xor_assign(&r);
                    }
                }
                let pos = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
                self.rows.insert(pos, r);
                self.pivots.insert(pos, p);
                true
            }
        }
    }

    /// Standard unit vectors at non-pivot coordinates: a deterministic basis
    /// of a complement of the span.
    pub fn complement_units(&self) -> Vec<Gf2Vec> {
        let pivot_set: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        (0..self.len).filter(|i| !pivot_set.contains(i)).map(|i| Gf2Vec::unit(self.len, i)).collect()
    }
}

/// Per-cell weights of one dimension, prepared for fast exact summation.
///
/// Weights are brought to a common denominator; when the scaled integer
/// weights fit in u64 the coset search accumulates in machine integers,
/// otherwise it falls back to direct rational sums. Both paths are exact.
pub struct WeightTable {
    rats: Vec<Rat>,
    fast: Option<(Vec<u64>, BigInt)>,
}

impl WeightTable {
    pub fn new(rats: Vec<Rat>) -> Self {
        use num::Integer;
        let mut denom = BigInt::from(1);
        for r in &rats {
            denom = denom.lcm(r.denom());
        }
        let mut scaled = Vec::with_capacity(rats.len());
        let mut fits = true;
        for r in &rats {
            let s: BigInt = r.numer() * (&denom / r.denom());
            match u64::try_from(&s) {
                Ok(v) => scaled.push(v),
                Err(_) => {
                    fits = false;
                    break;
                }
            }
        }
        let fast = if fits { Some((scaled, denom)) } else { None };
        WeightTable { rats, fast }
    }

    pub fn len(&self) -> usize {
        self.rats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rats.is_empty()
    }

    pub fn weight_rat(&self, i: usize) -> &Rat {
        &self.rats[i]
    }

    /// Exact weighted support size of `v`.
    pub fn weigh(&self, v: &Gf2Vec) -> Rat {
        assert_eq!(v.len(), self.rats.len());
        match &self.fast {
            Some((scaled, denom)) => {
                let mut acc: u128 = 0;
                for (i, w) in scaled.iter().enumerate() {
                    if v.get(i) {
                        acc += *w as u128;
                    }
                }
                Rat::new(BigInt::from(acc), denom.clone())
            }
            None => {
                let mut acc = Rat::zero();
                for i in 0..v.len() {
                    if v.get(i) {
                        acc += &self.rats[i];
                    }
                }
                acc
            }
        }
    }
}

/// Exact minimum of `‖alpha + v‖` over `v` in the span of `basis`, together
/// with one minimizer. Ties are broken by the lexicographically smallest bit
/// vector. Enumeration is exhaustive over the 2^dim subspace elements via a
/// Gray code; dimensions above `budget` are rejected.
pub fn coset_min_weight(
    basis: &[Gf2Vec],
    alpha: &Gf2Vec,
    weights: &WeightTable,
    budget: usize,
) -> Result<(Rat, Gf2Vec), Gf2Error> {
    let dim = basis.len();
    // 62 caps the Gray-code counter; any budget beyond it is unusable anyway.
    if dim > budget.min(62) {
        return Err(Gf2Error::Budget { dim, budget: budget.min(62) });
    }
    for b in basis {
        if b.len() != alpha.len() {
            return Err(Gf2Error::DimensionMismatch { expected: alpha.len(), got: b.len() });
        }
    }
    let mut current = alpha.clone();
    let mut best_vec = current.clone();
    let mut best_w = weights.weigh(&current);
    let total: u64 = 1u64 << dim;
    for g in 1..total {
        let flip = g.trailing_zeros() as usize;
        current.xor_assign(&basis[flip]);
        let w = weights.weigh(&current);
        if w < best_w || (w == best_w && current.lex_cmp(&best_vec) == Ordering::Less) {
            best_w = w;
            best_vec = current.clone();
        }
    }
    Ok((best_w, best_vec))
}

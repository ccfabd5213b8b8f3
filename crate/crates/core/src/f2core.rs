//! Linear algebra over F₂.
//!
//! Vectors are packed into a `u64` (coordinate `j` is bit `j`), so every
//! ambient space handled here has dimension at most 64. Column `j` of a
//! matrix is bit `j` of each row word.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;

#[inline]
fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn parity(x: u64) -> u8 {
    (x.count_ones() & 1) as u8
}

/// Packs a 0/1 coordinate slice into a word.
pub fn pack(bits: &[u8]) -> Result<u64> {
    if bits.len() > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim: bits.len(), max: MAX_DIM });
    }
    let mut w = 0u64;
    for (j, &b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => w |= 1 << j,
            _ => return Err(Error::Precondition(format!("entry {b} is not 0 or 1"))),
        }
    }
    Ok(w)
}

pub fn unpack(w: u64, n: usize) -> Vec<u8> {
    (0..n).map(|j| ((w >> j) & 1) as u8).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_DIM, "at most {MAX_DIM} columns");
        F2Matrix { cols, rows: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DIM, "at most {MAX_DIM} columns");
        F2Matrix { cols: n, rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    /// Builds a matrix from packed row words; bits at or above `cols` are rejected.
    pub fn from_words(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: cols, max: MAX_DIM });
        }
        if rows.iter().any(|&r| r & !mask(cols) != 0) {
            return Err(Error::Precondition("row word has bits beyond the column count".into()));
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn from_bits(cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut words = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch { expected: cols, found: r.len() });
            }
            words.push(pack(r)?);
        }
        Self::from_words(cols, words)
    }

    /// Parses rows of `0`/`1` characters, one row per line.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let cols = lines.first().map_or(0, |l| l.len());
        let rows: Vec<Vec<u8>> = lines
            .iter()
            .map(|l| l.bytes().map(|c| c.wrapping_sub(b'0')).collect())
            .collect();
        Self::from_bits(cols, &rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        ((self.rows[r] >> c) & 1) as u8
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        assert!(c < self.cols);
        if v & 1 == 1 {
            self.rows[r] |= 1 << c;
        } else {
            self.rows[r] &= !(1 << c);
        }
    }

    pub fn row(&self, r: usize) -> u64 {
        self.rows[r]
    }

    pub fn words(&self) -> &[u64] {
        &self.rows
    }

    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|&w| unpack(w, self.cols)).collect()
    }

    pub fn transpose(&self) -> Self {
        assert!(self.rows.len() <= MAX_DIM, "transpose needs at most {MAX_DIM} rows");
        let mut t = vec![0u64; self.cols];
        for (i, &w) in self.rows.iter().enumerate() {
            let mut x = w;
            while x != 0 {
                let j = x.trailing_zeros() as usize;
                t[j] |= 1 << i;
                x &= x - 1;
            }
        }
        F2Matrix { cols: self.rows.len(), rows: t }
    }

    /// `self · x`, with `x` a column vector packed as a word.
    pub fn mul_vec(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | ((parity(r & x) as u64) << i))
    }

    /// Row vector times matrix: XOR of the rows selected by `coeffs`.
    pub fn combine_rows(&self, coeffs: u64) -> u64 {
        let mut acc = 0;
        let mut c = coeffs;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            acc ^= self.rows[i];
            c &= c - 1;
        }
        acc
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.nrows() {
            return Err(Error::ShapeMismatch { expected: self.cols, found: other.nrows() });
        }
        let rows = self.rows.iter().map(|&r| other.combine_rows(r)).collect();
        Ok(F2Matrix { cols: other.cols, rows })
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.cols || self.nrows() != other.nrows() {
            return Err(Error::ShapeMismatch { expected: self.nrows(), found: other.nrows() });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect();
        Ok(F2Matrix { cols: self.cols, rows })
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &w in &self.rows {
            for j in 0..self.cols {
                f.write_str(if (w >> j) & 1 == 1 { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; the nonzero rows come first.
    pub matrix: F2Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form. Pivot columns increase down the rows and each
/// pivot column is zero outside its own row.
pub fn rref(m: &F2Matrix) -> Rref {
    let mut rows = m.rows.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        let bit = 1u64 << c;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pr;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Rref { matrix: F2Matrix { cols: m.cols, rows }, rank: r, pivots }
}

/// Null space `{x : m·x = 0}`.
pub fn kernel(m: &F2Matrix) -> F2Subspace {
    let red = rref(m);
    let pivot_set: u64 = red.pivots.iter().fold(0, |a, &p| a | (1 << p));
    let mut basis = Vec::new();
    for f in (0..m.cols).filter(|&c| pivot_set & (1 << c) == 0) {
        let mut v = 1u64 << f;
        for (i, &p) in red.pivots.iter().enumerate() {
            if red.matrix.rows[i] & (1 << f) != 0 {
                v |= 1 << p;
            }
        }
        basis.push(v);
    }
    F2Subspace::span(m.cols, basis)
}

/// A subspace of F₂ⁿ held in canonical reduced echelon form.
///
/// The pivot of a basis row is its lowest set bit; rows are sorted by pivot
/// and every pivot bit is clear in all other rows. Two subspaces are equal
/// as point sets exactly when their representations are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Subspace {
    ambient_dim: usize,
    basis: Vec<u64>,
}

impl F2Subspace {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM);
        F2Subspace { ambient_dim: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, (0..n).map(|i| 1u64 << i))
    }

    pub fn span(n: usize, vectors: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Self::zero(n);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// Canonical representative of `v` modulo the subspace.
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &b in &self.basis {
            if v & b & b.wrapping_neg() != 0 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: u64) -> bool {
        assert!(v & !mask(self.ambient_dim) == 0, "vector outside the ambient space");
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let low = v & v.wrapping_neg();
        for b in self.basis.iter_mut() {
            if *b & low != 0 {
                *b ^= v;
            }
        }
        let pos = self.basis.partition_point(|&b| (b & b.wrapping_neg()) < low);
        self.basis.insert(pos, v);
        true
    }

    pub fn with(&self, v: u64) -> Self {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn is_subspace_of(&self, other: &F2Subspace) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }

    /// All 2^dim elements, in order of their coefficient vectors.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        assert!(self.dim() < 32, "too many elements to list");
        (0u64..1 << self.dim()).map(move |c| {
            let mut acc = 0;
            let mut x = c;
            while x != 0 {
                acc ^= self.basis[x.trailing_zeros() as usize];
                x &= x - 1;
            }
            acc
        })
    }

    pub fn matrix(&self) -> F2Matrix {
        F2Matrix { cols: self.ambient_dim, rows: self.basis.clone() }
    }

    /// Applies a linear map given by its matrix (acting on column vectors).
    pub fn image(&self, g: &F2Matrix) -> F2Subspace {
        F2Subspace::span(g.nrows(), self.basis.iter().map(|&b| g.mul_vec(b)))
    }

    /// Packs the canonical basis into one integer, `bits` bits per row.
    /// Valid whenever `dim * bits <= 128`.
    pub fn packed_key(&self) -> u128 {
        let bits = self.ambient_dim.max(1);
        assert!(self.dim() * bits <= 128, "subspace too large for a packed key");
        self.basis.iter().fold(0u128, |acc, &b| (acc << bits) | b as u128)
    }
}

/// Byte string determined by the point set of `s` alone.
pub fn canonical_key(s: &F2Subspace) -> Vec<u8> {
    let width = s.ambient_dim.div_ceil(8);
    let mut out = Vec::with_capacity(2 + width * s.dim());
    out.push(s.ambient_dim as u8);
    out.push(s.dim() as u8);
    for &b in &s.basis {
        out.extend_from_slice(&b.to_le_bytes()[..width]);
    }
    out
}

/// Grows subspaces one dimension at a time from `start` up to `target_dim`.
///
/// `candidates` proposes vectors that may extend a given subspace; `filter`
/// must be hereditary (closed under taking subspaces) for the result to be
/// complete. The output is sorted and duplicate free.
pub fn grow_subspaces<C, F>(start: Vec<F2Subspace>, target_dim: usize, candidates: C, filter: F) -> Vec<F2Subspace>
where
    C: Fn(&F2Subspace) -> Vec<u64>,
    F: Fn(&F2Subspace) -> bool,
{
    let mut level: Vec<F2Subspace> = start.into_iter().filter(|s| filter(s)).collect();
    level.sort();
    level.dedup();
    while level.first().is_some_and(|s| s.dim() < target_dim) {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for s in &level {
            let mut reps: Vec<u64> = candidates(s).into_iter().map(|v| s.reduce(v)).filter(|&v| v != 0).collect();
            reps.sort_unstable();
            reps.dedup();
            for v in reps {
                let t = s.with(v);
                if !seen.contains(&t) && filter(&t) {
                    seen.insert(t.clone());
                    next.push(t);
                }
            }
        }
        next.sort();
        level = next;
    }
    level.retain(|s| s.dim() == target_dim);
    level
}

/// Every `k`-dimensional subspace of F₂^`ambient_dim` passing a hereditary filter.
pub fn enumerate_subspaces<F>(ambient_dim: usize, k: usize, filter: F) -> Result<Vec<F2Subspace>>
where
    F: Fn(&F2Subspace) -> bool,
{
    if k > ambient_dim {
        return Err(Error::Precondition(format!("k = {k} exceeds ambient dimension {ambient_dim}")));
    }
    if ambient_dim > 24 {
        return Err(Error::DimensionTooLarge { dim: ambient_dim, max: 24 });
    }
    let all: Vec<u64> = (1..1u64 << ambient_dim).collect();
    Ok(grow_subspaces(vec![F2Subspace::zero(ambient_dim)], k, |_| all.clone(), filter))
}

/// Gaussian binomial coefficient `[n choose k]` at q = 2.
pub fn gaussian_binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> F2Matrix {
        F2Matrix::parse(text).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = F2Matrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);

        let z = F2Matrix::zeros(2, 4);
        let r = rref(&z);
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);

        let r = rref(&m("1100\n0110\n1010"));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix, m("1010\n0110\n0000"));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&F2Matrix::identity(5)).dim(), 0);
        assert_eq!(kernel(&F2Matrix::zeros(1, 3)), F2Subspace::full(3));
        let k = kernel(&m("1111"));
        assert_eq!(k.dim(), 3);
        let evens: Vec<u64> = (0..16u64).filter(|v| v.count_ones() % 2 == 0).collect();
        let mut elems: Vec<u64> = k.elements().collect();
        elems.sort_unstable();
        assert_eq!(elems, evens);
    }

    #[test]
    fn canonical_key_examples() {
        let a = F2Subspace::span(2, [0b01, 0b10]);
        let b = F2Subspace::span(2, [0b11, 0b10]);
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert_ne!(canonical_key(&F2Subspace::span(3, [0b001])), canonical_key(&F2Subspace::span(3, [0b010])));
        let keys: HashSet<Vec<u8>> = (1..8u64).map(|v| canonical_key(&F2Subspace::span(3, [v]))).collect();
        assert_eq!(keys.len(), 7);
    }

    #[test]
    fn canonical_key_is_complete_up_to_dim5() {
        for n in 1..=5usize {
            let mut by_points: std::collections::HashMap<Vec<u64>, Vec<u8>> = Default::default();
            let mut keys = HashSet::new();
            for k in 0..=n {
                for s in enumerate_subspaces(n, k, |_| true).unwrap() {
                    let mut pts: Vec<u64> = s.elements().collect();
                    pts.sort_unstable();
                    let key = canonical_key(&s);
                    assert!(keys.insert(key.clone()));
                    assert!(by_points.insert(pts, key).is_none());
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_gaussian_binomials() {
        assert_eq!(enumerate_subspaces(3, 1, |_| true).unwrap().len(), 7);
        assert_eq!(enumerate_subspaces(4, 2, |_| true).unwrap().len(), 35);
        let zero = enumerate_subspaces(4, 0, |_| true).unwrap();
        assert_eq!(zero, vec![F2Subspace::zero(4)]);
        for n in 0..=6u32 {
            for k in 0..=n {
                let got = enumerate_subspaces(n as usize, k as usize, |_| true).unwrap().len();
                assert_eq!(got as u128, gaussian_binomial(n, k), "n={n} k={k}");
            }
        }
        assert!(enumerate_subspaces(2, 3, |_| true).is_err());
    }

    #[test]
    fn hereditary_filter_restricts_enumeration() {
        // Subspaces of F₂⁴ inside the even-weight hyperplane.
        let even = |s: &F2Subspace| s.basis().iter().all(|b| b.count_ones() % 2 == 0);
        assert_eq!(enumerate_subspaces(4, 2, even).unwrap().len(), 7);
    }

    #[test]
    fn transpose_and_products() {
        let a = m("110\n011");
        let t = a.transpose();
        assert_eq!(t, m("10\n11\n01"));
        assert_eq!(a.mul(&t).unwrap(), m("01\n10"));
        assert_eq!(a.mul_vec(0b111), 0b00);
        assert_eq!(a.mul_vec(0b001), 0b01);
        assert_eq!(a.to_string(), "110\n011\n");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn matrix() -> impl Strategy<Value = F2Matrix> {
        (1usize..10, 1usize..12).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u64..(1 << c), r).prop_map(move |rows| F2Matrix::from_words(c, rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent(a in matrix()) {
            let once = rref(&a);
            let twice = rref(&once.matrix);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn rank_nullity(a in matrix()) {
            let k = kernel(&a);
            prop_assert_eq!(a.rank() + k.dim(), a.ncols());
            for &b in k.basis() {
                prop_assert_eq!(a.mul_vec(b), 0);
            }
        }

        #[test]
        fn span_is_order_independent(vs in proptest::collection::vec(0u64..256, 0..8)) {
            let a = F2Subspace::span(8, vs.iter().copied());
            let b = F2Subspace::span(8, vs.iter().rev().copied());
            prop_assert_eq!(canonical_key(&a), canonical_key(&b));
            for &v in &vs {
                prop_assert!(a.contains(v));
            }
        }
    }
}

//! Exact linear algebra over prime fields.
//!
//! Residues are stored as `u32` in `[0, p)`. Pivoting always takes the first
//! nonzero entry, so bases are reproducible. Over GF(2) elimination runs on
//! bit-packed rows.

use std::fmt;

use serde::Serialize;

use crate::bitmatrix::BinaryMatrix;
use crate::error::{Error, Result};

/// Coordinates of a vector; residues in `[0, p)`.
pub type FieldVector = Vec<u32>;

/// Largest modulus accepted; keeps products inside `u64`.
const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::domain(format!("modulus {p} too large")));
        }
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p as u64 - 2)
    }

    /// `a * x + y` coordinate-wise, in place on `y`.
    fn axpy(&self, a: u32, x: &[u32], y: &mut [u32]) {
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.add(*yi, self.mul(a, xi));
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p;
        }
        m
    }

    /// Rows of integers, reduced mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("rows of unequal length"));
        }
        let data = rows.iter().flatten().map(|&x| field.reduce(x)).collect();
        Ok(FieldMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn from_binary(field: PrimeField, m: &BinaryMatrix) -> Self {
        let mut out = Self::zeros(field, m.rows(), m.cols());
        for (r, c) in m.coords() {
            out.data[r * m.cols() + c] = 1 % field.p;
        }
        out
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<FieldVector> {
        if v.len() != self.cols {
            return Err(Error::domain(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % self.field.p as u64);
                acc as u32
            })
            .collect())
    }

    /// Reduced row echelon form; bit-packed over GF(2).
    pub fn rref(&self) -> Rref {
        if self.field.p == 2 {
            self.rref_gf2()
        } else {
            self.rref_generic()
        }
    }

    /// Reduced row echelon form by plain Gauss-Jordan elimination.
    pub fn rref_generic(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            for x in &mut m.data[r * m.cols..(r + 1) * m.cols] {
                *x = f.mul(*x, inv);
            }
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                let a = m.get(i, c);
                if i != r && a != 0 {
                    let cols = m.cols;
                    f.axpy(f.neg(a), &pivot_row, &mut m.data[i * cols..(i + 1) * cols]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: pivots.len(), pivots }
    }

    fn rref_gf2(&self) -> Rref {
        let words = self.cols.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|r| {
                let mut w = vec![0u64; words];
                for (c, &x) in self.row(r).iter().enumerate() {
                    if x != 0 {
                        w[c / 64] |= 1 << (c % 64);
                    }
                }
                w
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (wi, bit) = (c / 64, 1u64 << (c % 64));
            let Some(pr) = (r..self.rows).find(|&i| rows[i][wi] & bit != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let pivot = std::mem::take(&mut rows[r]);
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[wi] & bit != 0 {
                    // columns before wi are already zero in the pivot row
                    for (x, &y) in row[wi..].iter_mut().zip(&pivot[wi..]) {
                        *x ^= y;
                    }
                }
            }
            rows[r] = pivot;
            pivots.push(c);
            r += 1;
        }
        let mut m = Self::zeros(self.field, self.rows, self.cols);
        for (i, w) in rows.iter().enumerate() {
            for c in 0..self.cols {
                m.data[i * self.cols + c] = ((w[c / 64] >> (c % 64)) & 1) as u32;
            }
        }
        Rref { matrix: m, rank: pivots.len(), pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right nullspace, one vector per free column (ascending).
    pub fn kernel_basis(&self) -> Vec<FieldVector> {
        let Rref { matrix: rm, pivots, .. } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(rm.get(i, free));
                }
                v
            })
            .collect()
    }
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn normalize(field: PrimeField, v: &mut [u32]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let inv = field.inv(lead);
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
    }
}

/// Projective representatives of the span of independent vectors.
///
/// Coefficient tuples with leading coefficient 1 are numbered consecutively:
/// first by the position of the leading 1, then as base-p numbers in the
/// remaining coordinates. Any sub-range of `0..len()` can be generated on its
/// own, so disjoint ranges cover each class exactly once.
#[derive(Clone, Debug)]
pub struct ProjectiveSpan {
    field: PrimeField,
    basis: Vec<FieldVector>,
    dim: usize,
}

pub fn enumerate_projective(field: PrimeField, basis: &[FieldVector]) -> ProjectiveSpan {
    ProjectiveSpan {
        field,
        dim: basis.first().map_or(0, Vec::len),
        basis: basis.to_vec(),
    }
}

impl ProjectiveSpan {
    /// `(p^d - 1)/(p - 1)`.
    pub fn len(&self) -> u128 {
        let p = self.field.p as u128;
        (0..self.basis.len()).map(|j| p.pow(j as u32)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coefficients of the representative numbered `idx`.
    pub fn coefficients(&self, mut idx: u128) -> Vec<u32> {
        let d = self.basis.len();
        let p = self.field.p as u128;
        let mut c = vec![0u32; d];
        for lead in 0..d {
            let block = p.pow((d - 1 - lead) as u32);
            if idx < block {
                c[lead] = 1;
                for slot in c[lead + 1..].iter_mut().rev() {
                    *slot = (idx % p) as u32;
                    idx /= p;
                }
                return c;
            }
            idx -= block;
        }
        panic!("projective index out of range");
    }

    fn combine(&self, coeffs: &[u32]) -> FieldVector {
        let mut v = vec![0u32; self.dim];
        for (b, &a) in self.basis.iter().zip(coeffs) {
            if a != 0 {
                self.field.axpy(a, b, &mut v);
            }
        }
        normalize(self.field, &mut v);
        v
    }

    pub fn iter(&self) -> ProjectiveIter<'_> {
        self.range(0, self.len())
    }

    /// Representatives numbered `start..end`.
    pub fn range(&self, start: u128, end: u128) -> ProjectiveIter<'_> {
        let end = end.min(self.len());
        ProjectiveIter {
            span: self,
            next: start.min(end),
            end,
            coeffs: (start < end).then(|| self.coefficients(start)),
        }
    }
}

pub struct ProjectiveIter<'a> {
    span: &'a ProjectiveSpan,
    next: u128,
    end: u128,
    coeffs: Option<Vec<u32>>,
}

impl Iterator for ProjectiveIter<'_> {
    type Item = FieldVector;

    fn next(&mut self) -> Option<FieldVector> {
        if self.next >= self.end {
            return None;
        }
        let c = self.coeffs.as_mut()?;
        let v = self.span.combine(c);
        self.next += 1;
        if self.next < self.end {
            advance(c, self.span.field.p);
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.end - self.next).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// Steps to the next coefficient tuple in numbering order.
fn advance(c: &mut [u32], p: u32) {
    let lead = c.iter().position(|&x| x != 0).expect("nonzero tuple");
    for i in (lead + 1..c.len()).rev() {
        c[i] += 1;
        if c[i] < p {
            return;
        }
        c[i] = 0;
    }
    // tail exhausted: leading 1 moves right, tail zero
    c[lead] = 0;
    c[lead + 1] = 1;
}

//! Exact linear algebra over a prime field `F_p`.
//!
//! Everything else in the crate is expressed through [`Mat`]. Module elements
//! are row vectors and operators act by right multiplication, so for a right
//! module the action matrices satisfy `rho(a) * rho(b) == rho(a * b)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus. Limited to `p < 2^31` so products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub(crate) fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn sub(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + self.0 as u64 - b as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub(crate) fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub(crate) fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// The residue of an integer count (e.g. a group order) in `F_p`.
    pub fn residue(self, n: usize) -> u32 {
        (n as u64 % self.0 as u64) as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: Prime,
    value: u32,
}

impl Fp {
    pub fn new(p: Prime, v: i64) -> Self {
        Fp { p, value: p.reduce(v) }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { p, value: 0 }
    }

    pub fn one(p: Prime) -> Self {
        Fp { p, value: 1 % p.0 }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        self.p.inv(self.value).map(|value| Fp { p: self.p, value })
    }

    pub fn pow(self, e: u64) -> Self {
        Fp { p: self.p, value: self.p.pow(self.value, e) }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        assert_eq!(self.p, o.p, "modulus mismatch");
        Fp { p: self.p, value: self.p.add(self.value, o.value) }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        assert_eq!(self.p, o.p, "modulus mismatch");
        Fp { p: self.p, value: self.p.sub(self.value, o.value) }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        assert_eq!(self.p, o.p, "modulus mismatch");
        Fp { p: self.p, value: self.p.mul(self.value, o.value) }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { p: self.p, value: self.p.sub(0, self.value) }
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of [`Mat::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// A consistent solution of `a * x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Mat,
    /// Column vectors spanning `ker a`.
    pub nullspace: Vec<Mat>,
}

impl Mat {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p.0;
        }
        m
    }

    pub fn scalar(p: Prime, n: usize, c: u32) -> Self {
        Mat::identity(p, n).scale(c)
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::Dimension(format!("row {i} has length {} but row 0 has length {c}", row.len())));
            }
            data.extend(row.iter().map(|&v| p.reduce(v)));
        }
        Ok(Mat { p, rows: r, cols: c, data })
    }

    pub fn from_vec(p: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        let data = data.into_iter().map(|v| v % p.0).collect();
        Mat { p, rows, cols, data }
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p.0);
            }
        }
        Mat { p, rows, cols, data }
    }

    pub fn row_vector(p: Prime, v: &[u32]) -> Self {
        Mat::from_vec(p, 1, v.len(), v.to_vec())
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.0;
    }

    pub fn entry(&self, i: usize, j: usize) -> Fp {
        Fp { p: self.p, value: self.get(i, j) }
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, c: u32) -> Mat {
        let p = self.p;
        Mat { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| p.mul(v, c)).collect() }
    }

    /// `self + c * other`, in place.
    pub fn add_scaled(&mut self, other: &Mat, c: u32) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add_scaled");
        let p = self.p;
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = p.add(*a, p.mul(b, c));
        }
    }

    /// Matrix product. Panics on an inner-dimension mismatch.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        assert_eq!(self.p, other.p, "modulus mismatch");
        let p = self.p.0 as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = (*o + a * b as u64) % p;
                }
            }
        }
        Mat { p: self.p, rows: self.rows, cols: other.cols, data: out.into_iter().map(|v| v as u32).collect() }
    }

    /// Row vector times matrix, on a plain slice.
    pub fn apply_row(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let p = self.p.0 as u64;
        let mut out = vec![0u64; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o = (*o + a as u64 * b as u64) % p;
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    /// Kronecker product with block layout `a[i][j] * b`.
    pub fn kron(&self, other: &Mat) -> Result<Mat> {
        if self.p != other.p {
            return Err(Error::Modulus(self.p.0, other.p.0));
        }
        let p = self.p;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Ok(Mat::from_fn(p, r, c, |i, j| p.mul(self.get(i / other.rows, j / other.cols), other.get(i % other.rows, j % other.cols))))
    }

    pub fn hstack(blocks: &[&Mat]) -> Mat {
        let first = blocks.first().expect("hstack of nothing");
        let rows = first.rows;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(first.p, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + off + j] = b.get(i, j);
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&Mat]) -> Mat {
        let first = blocks.first().expect("vstack of nothing");
        let cols = first.cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Mat { p: first.p, rows, cols, data }
    }

    pub fn block_diag(p: Prime, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            out.set_block(ro, co, b);
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.p, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.p, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    /// Flattens row-major into a single row vector.
    pub fn flatten(&self) -> Mat {
        Mat { p: self.p, rows: 1, cols: self.data.len(), data: self.data.clone() }
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Mat {
        assert_eq!(rows * cols, self.data.len());
        Mat { p: self.p, rows, cols, data: self.data.clone() }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = p.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j);
                m.data[r * m.cols + j] = p.mul(v, inv);
            }
            let (cols, pivot_row) = (m.cols, m.row(r)[c..].to_vec());
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                let row = &mut m.data[i * cols + c..(i + 1) * cols];
                for (a, &b) in row.iter_mut().zip(&pivot_row) {
                    *a = p.sub(*a, p.mul(f, b));
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Column vectors spanning `{x : self * x = 0}`, one per free column.
    pub fn nullspace(&self) -> Vec<Mat> {
        let Rref { reduced, pivots, .. } = self.rref();
        let p = self.p;
        let is_pivot: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        (0..self.cols)
            .filter(|&f| is_pivot[f].is_none())
            .map(|f| {
                let mut x = Mat::zeros(p, self.cols, 1);
                x.data[f] = 1;
                for (c, r) in is_pivot.iter().enumerate() {
                    if let Some(r) = r {
                        x.data[c] = p.sub(0, reduced.get(*r, f));
                    }
                }
                x
            })
            .collect()
    }

    /// Rows spanning `{v : v * self = 0}`, stacked into a matrix in reduced echelon form.
    pub fn left_kernel(&self) -> Mat {
        let basis = self.transpose().nullspace();
        if basis.is_empty() {
            return Mat::zeros(self.p, 0, self.rows);
        }
        let refs: Vec<Mat> = basis.iter().map(|b| b.transpose()).collect();
        let refs: Vec<&Mat> = refs.iter().collect();
        Mat::vstack(&refs).row_basis()
    }

    /// Echelon basis of the row space (nonzero rows of the rref).
    pub fn row_basis(&self) -> Mat {
        let r = self.rref();
        r.reduced.block(0, 0, r.rank, self.cols)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Mat::hstack(&[self, &Mat::identity(self.p, n)]);
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.reduced.block(0, n, n, n))
    }

    /// Solves `self * x = b`. Returns `None` when inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Solution>> {
        if self.rows != b.rows {
            return Err(Error::Dimension(format!("solve: a has {} rows, b has {}", self.rows, b.rows)));
        }
        if self.p != b.p {
            return Err(Error::Modulus(self.p.0, b.p.0));
        }
        let n = self.cols;
        let aug = Mat::hstack(&[self, b]);
        let r = aug.rref();
        if r.pivots.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.p, n, b.cols);
        for (row, &c) in r.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[c * b.cols + j] = r.reduced.get(row, n + j);
            }
        }
        Ok(Some(Solution { particular: x, nullspace: self.nullspace() }))
    }

    /// Solves `x * self = b` (row convention). Returns `None` when inconsistent.
    pub fn solve_left(&self, b: &Mat) -> Result<Option<Mat>> {
        Ok(self.transpose().solve(&b.transpose())?.map(|s| s.particular.transpose()))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} mod {}]", self.rows, self.cols, self.p)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs)
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        let mut out = self.clone();
        out.add_scaled(rhs, self.p.0 - 1);
        out
    }
}

/// Stacks row vectors (each a `1 x n` matrix or any matrix) into one matrix.
pub(crate) fn stack_rows(p: Prime, cols: usize, rows: impl IntoIterator<Item = Vec<u32>>) -> Mat {
    let mut data = Vec::new();
    let mut n = 0;
    for r in rows {
        assert_eq!(r.len(), cols);
        data.extend(r);
        n += 1;
    }
    Mat::from_vec(p, n, cols, data)
}

/// Echelon basis of all `ms x mt` matrices `X` with `a * X == X * b` for every pair.
///
/// The candidate space is cut down one constraint pair at a time, so the
/// linear systems shrink as soon as the first few constraints bite.
pub fn intertwiners<'a>(p: Prime, ms: usize, mt: usize, pairs: impl IntoIterator<Item = (&'a Mat, &'a Mat)>) -> Vec<Mat> {
    let n = ms * mt;
    let mut cands = Mat::identity(p, n);
    for (a, b) in pairs {
        if cands.rows() == 0 {
            break;
        }
        let residuals = stack_rows(
            p,
            n,
            (0..cands.rows()).map(|k| {
                let x = Mat::from_vec(p, ms, mt, cands.row(k).to_vec());
                (&a.matmul(&x) - &x.matmul(b)).data
            }),
        );
        let combos = residuals.left_kernel();
        cands = if combos.rows() == 0 { Mat::zeros(p, 0, n) } else { combos.matmul(&cands) };
    }
    let basis = cands.row_basis();
    (0..basis.rows()).map(|k| Mat::from_vec(p, ms, mt, basis.row(k).to_vec())).collect()
}

/// JSON form of a matrix: `{"p": 5, "cols": 2, "rows": [[1, 2], [3, 4]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatJson {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub rows: Vec<Vec<i64>>,
}

impl From<&Mat> for MatJson {
    fn from(m: &Mat) -> Self {
        MatJson {
            p: m.p.0 as u64,
            cols: Some(m.cols),
            rows: m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect(),
        }
    }
}

impl TryFrom<MatJson> for Mat {
    type Error = Error;
    fn try_from(j: MatJson) -> Result<Mat> {
        let p = Prime::new(j.p)?;
        let mut m = Mat::from_rows(p, &j.rows)?;
        if let Some(c) = j.cols {
            if j.rows.is_empty() {
                m = Mat::zeros(p, 0, c);
            } else if c != m.cols {
                return Err(Error::Dimension(format!("declared {c} columns, found {}", m.cols)));
            }
        }
        Ok(m)
    }
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatJson::deserialize(d)?;
        Mat::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn empty_matrix_is_invertible() {
        let p = Prime::new(5).unwrap();
        assert_eq!(Mat::zeros(p, 0, 0).inverse(), Some(Mat::zeros(p, 0, 0)));
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(7).is_ok());
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f5 = p(5);
        let a = Fp::new(f5, 3);
        let b = Fp::new(f5, -1);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a * b).value(), 2);
        assert_eq!((a - b).value(), 4);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert!(Fp::zero(f5).inv().is_none());
        assert_eq!((-a).value(), 2);
    }

    #[test]
    fn rref_rank_one() {
        let m = Mat::from_rows(p(5), &[[1, 2], [2, 4]]).unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.reduced, Mat::from_rows(p(5), &[[1, 2], [0, 0]]).unwrap());
    }

    #[test]
    fn rref_identity_and_zero() {
        assert_eq!(Mat::identity(p(7), 3).rref().rank, 3);
        let z = Mat::zeros(p(7), 2, 3).rref();
        assert_eq!(z.rank, 0);
        assert!(z.pivots.is_empty());
    }

    #[test]
    fn solve_examples() {
        let f5 = p(5);
        let a = Mat::from_rows(f5, &[[1, 1], [0, 0]]).unwrap();
        let b = Mat::from_rows(f5, &[[3], [0]]).unwrap();
        let s = a.solve(&b).unwrap().expect("consistent");
        assert_eq!(&a * &s.particular, b);
        assert_eq!(s.nullspace.len(), 1);
        assert!((&a * &s.nullspace[0]).is_zero());

        let id = Mat::identity(f5, 3);
        let b = Mat::from_rows(f5, &[[1, 4], [2, 0], [3, 3]]).unwrap();
        let s = id.solve(&b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.nullspace.is_empty());

        let a = Mat::from_rows(f5, &[[0]]).unwrap();
        let b = Mat::from_rows(f5, &[[1]]).unwrap();
        assert!(a.solve(&b).unwrap().is_none());

        let bad = Mat::zeros(f5, 3, 1);
        assert!(matches!(a.solve(&bad), Err(Error::Dimension(_))));
    }

    #[test]
    fn kron_examples() {
        let f5 = p(5);
        let two = Mat::from_rows(f5, &[[2]]).unwrap();
        assert_eq!(two.kron(&Mat::identity(f5, 2)).unwrap(), Mat::scalar(f5, 2, 2));
        assert!(Mat::identity(f5, 2).kron(&Mat::identity(f5, 3)).unwrap().is_identity());
        let m = Mat::from_rows(f5, &[[1, 2], [2, 4]]).unwrap();
        assert_eq!(m.kron(&Mat::identity(f5, 2)).unwrap().rank(), 2);
        assert!(matches!(m.kron(&Mat::identity(p(7), 1)), Err(Error::Modulus(5, 7))));
    }

    #[test]
    fn inverse_and_left_kernel() {
        let f7 = p(7);
        let m = Mat::from_rows(f7, &[[2, 1], [1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let s = Mat::from_rows(f7, &[[1, 2], [2, 4]]).unwrap();
        assert!(s.inverse().is_none());
        let k = s.left_kernel();
        assert_eq!(k.rows(), 1);
        assert!((&k * &s).is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let m = Mat::from_rows(p(5), &[[1, 2, 3], [4, 0, 1]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"p":5,"cols":3,"rows":[[1,2,3],[4,0,1]]}"#);
        let back: Mat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let empty: Mat = serde_json::from_str(r#"{"p":5,"cols":3,"rows":[]}"#).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 3));
    }
}

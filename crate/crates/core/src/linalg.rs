//! Dense linear algebra over F_p.
//!
//! Everything in the crate bottoms out here: Hom spaces, kernels, images and
//! splittings are all computed by row reduction of small dense matrices.
//! Zero-row and zero-column matrices are legal and behave as zero objects.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::field::PrimeField;

/// A dense row-major matrix with entries in a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`Mat::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Mat[{}x{} over F_{}]",
            self.rows,
            self.cols,
            self.field.p()
        )?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major integer entries, reducing them mod p.
    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, entries: &[i64]) -> Mat {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count does not match shape"
        );
        Mat {
            field,
            rows,
            cols,
            data: entries.iter().map(|&x| field.reduce(x)).collect(),
        }
    }

    /// Builds a matrix from already-reduced row-major residues.
    pub fn from_residues(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        debug_assert!(data.iter().all(|&x| x < field.p()));
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Mat {
        let mut m = Mat::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p());
        self.data[r * self.cols + c] = v;
    }
    pub fn entries(&self) -> &[u32] {
        &self.data
    }
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let p = self.field.p() as u64;
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                }
            }
            for (c, a) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = (a % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: u32) -> Mat {
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Mat, s: u32) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, f.mul(s, b)))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut m = Mat::zeros(self.field, self.rows, cols);
        for r in 0..self.rows {
            m.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut m = Mat::zeros(self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            m.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.data[r * self.cols + c];
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form with pivot columns. Deterministic: pivots are
    /// taken left to right, the first nonzero row below the current one is
    /// swapped up.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    m.data.swap(r * cols + k, pr * cols + k);
                }
            }
            let inv = f.inv(m.data[r * cols + c]);
            for k in c..cols {
                m.data[r * cols + k] = f.mul(m.data[r * cols + k], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = m.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for k in c..cols {
                    let v = m.data[r * cols + k];
                    if v != 0 {
                        m.data[i * cols + k] = f.add(m.data[i * cols + k], f.mul(neg, v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Matrix whose columns form a basis of the kernel; `cols - rank` columns.
    pub fn nullspace(&self) -> Mat {
        let f = self.field;
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Mat::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            basis.data[fc * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = reduced.get(i, fc);
                basis.data[pc * free.len() + j] = f.neg(v);
            }
        }
        basis
    }

    /// Solves `self * x = b`. Returns `Ok(None)` if the system is inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>, Error> {
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.rows, b.cols),
                found: (b.rows, b.cols),
            });
        }
        let aug = self.hstack(b);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = reduced.get(i, self.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square full-rank matrix.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Mat::identity(self.field, n));
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(reduced.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// True when some power of the matrix vanishes.
    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.pow(self.rows.max(1)).is_zero()
    }

    /// Columns forming a basis of the column space (a subset of the original
    /// columns, the pivot columns).
    pub fn column_space(&self) -> Mat {
        let piv = self.rref().pivots;
        self.select_columns(&piv)
    }

    /// A left inverse `L` with `L * self = I` for a matrix of full column
    /// rank; `None` otherwise.
    pub fn left_inverse(&self) -> Option<Mat> {
        let k = self.cols;
        let rows = self.transpose().rref().pivots;
        if rows.len() < k {
            return None;
        }
        let square = self.select_rows(&rows).inverse()?;
        let mut l = Mat::zeros(self.field, k, self.rows);
        for (j, &r) in rows.iter().enumerate() {
            for i in 0..k {
                l.set(i, r, square.get(i, j));
            }
        }
        Some(l)
    }

    /// Rows spanning the linear forms that vanish on the column space.
    pub fn annihilator(&self) -> Mat {
        self.transpose().nullspace().transpose()
    }

    /// Basis (as columns) of the intersection of two column spaces.
    pub fn intersect(&self, other: &Mat) -> Mat {
        let ann = self.annihilator().vstack(&other.annihilator());
        ann.nullspace()
    }

    /// Extends the independent columns of `self` to a basis of the ambient
    /// space by appending standard basis vectors; returns only the appended
    /// complement columns.
    pub fn complement(&self) -> Mat {
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n));
        let piv = aug.rref().pivots;
        let extra: Vec<usize> = piv.into_iter().filter(|&c| c >= self.cols).collect();
        aug.select_columns(&extra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_identity() {
        let id = Mat::identity(f(5), 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank(), 3);
    }

    #[test]
    fn rref_zero() {
        let z = Mat::zeros(f(3), 2, 4);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_over_f2() {
        let m = Mat::from_i64(f(2), 2, 2, &[1, 1, 1, 1]);
        let r = m.rref();
        assert_eq!(r.reduced, Mat::from_i64(f(2), 2, 2, &[1, 1, 0, 0]));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = Mat::from_i64(f(7), 3, 2, &[1, 2, 3, 4, 5, 6]);
        let x = Mat::identity(f(7), 3).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn nullspace_of_zero() {
        assert_eq!(Mat::zeros(f(3), 2, 3).nullspace().cols(), 3);
    }

    #[test]
    fn inconsistent_system() {
        let a = Mat::from_i64(f(3), 2, 2, &[1, 0, 0, 0]);
        let b = Mat::from_i64(f(3), 2, 1, &[0, 1]);
        assert!(a.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_shape_mismatch() {
        let a = Mat::identity(f(3), 2);
        let b = Mat::zeros(f(3), 3, 1);
        assert!(a.solve(&b).is_err());
    }

    #[test]
    fn invertibility() {
        assert!(Mat::identity(f(2), 4).is_invertible());
        assert!(!Mat::zeros(f(2), 1, 1).is_invertible());
        assert!(!Mat::zeros(f(2), 1, 2).is_invertible());
        let m = Mat::from_i64(f(2), 2, 2, &[1, 1, 0, 1]);
        assert_eq!(m.inverse().unwrap(), m);
    }

    #[test]
    fn empty_matrices_are_zero_objects() {
        let a = Mat::zeros(f(5), 0, 3);
        let b = Mat::zeros(f(5), 3, 0);
        assert_eq!(a.mul(&b).rows(), 0);
        assert_eq!(b.mul(&a), Mat::zeros(f(5), 3, 3));
        assert_eq!(a.nullspace().cols(), 3);
        assert!(Mat::zeros(f(5), 0, 0).inverse().is_some());
    }

    #[test]
    fn left_inverse_and_intersection() {
        let a = Mat::from_i64(f(3), 3, 2, &[1, 0, 2, 1, 0, 1]);
        let l = a.left_inverse().unwrap();
        assert_eq!(l.mul(&a), Mat::identity(f(3), 2));
        let e1 = Mat::from_i64(f(3), 3, 1, &[1, 0, 0]);
        let e12 = Mat::from_i64(f(3), 3, 2, &[1, 0, 0, 1, 0, 0]);
        assert_eq!(e12.intersect(&a).cols(), 1);
        assert_eq!(
            e1.intersect(&Mat::from_i64(f(3), 3, 1, &[0, 1, 0])).cols(),
            0
        );
    }

    fn arb_mat() -> impl Strategy<Value = Mat> {
        (
            prop::sample::select(vec![2u32, 3, 5, 7]),
            0usize..6,
            0usize..6,
        )
            .prop_flat_map(|(p, r, c)| {
                prop::collection::vec(0..p, r * c)
                    .prop_map(move |d| Mat::from_residues(PrimeField::new(p).unwrap(), r, c, d))
            })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_mat()) {
            let once = m.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once.clone());
        }

        #[test]
        fn rank_nullity(m in arb_mat()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.cols(), m.cols());
            prop_assert!(m.mul(&ns).is_zero());
        }

        #[test]
        fn solve_reproduces_rhs(m in arb_mat(), seed in 0u64..1000) {
            // b is built in the column space so a solution must exist
            let fld = m.field();
            let xs: Vec<u32> = (0..m.cols()).map(|i| ((seed as usize * 31 + i * 7) as u32) % fld.p()).collect();
            let b = Mat::from_columns(fld, m.rows(), &[m.mul_vec(&xs)]);
            let x = m.solve(&b).unwrap().unwrap();
            prop_assert_eq!(m.mul(&x), b);
        }

        #[test]
        fn inverse_is_two_sided(m in arb_mat()) {
            if let Some(inv) = m.inverse() {
                prop_assert_eq!(m.mul(&inv), Mat::identity(m.field(), m.rows()));
                prop_assert_eq!(inv.mul(&m), Mat::identity(m.field(), m.rows()));
            } else {
                prop_assert!(!m.is_invertible());
            }
        }
    }
}

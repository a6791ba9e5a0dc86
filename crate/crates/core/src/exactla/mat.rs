use std::fmt;

use crate::error::{Error, Result};

use super::field::Prime;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} mod {}]", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Mat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(p: Prime, n: usize, c: u64) -> Self {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % p.get();
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| p.reduce(x)))
            .collect();
        Ok(Mat {
            p,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_data(p: Prime, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % p.get()).collect();
        Ok(Mat {
            p,
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p.get());
            }
        }
        Mat {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(p: Prime, rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Mat::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i] % p.get();
            }
        }
        m
    }

    pub fn column_vector(p: Prime, v: &[u64]) -> Self {
        Mat::from_cols(p, v.len(), &[v.to_vec()])
    }

    #[inline]
    pub fn prime(&self) -> Prime {
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
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p.get();
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same(&self, other: &Mat) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Modulus(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p.get();
        let mut out = vec![0u64; self.rows * other.cols];
        // Accumulate without reduction while the sum stays below 2^63.
        let bound = (u64::MAX >> 1) / ((p - 1) * (p - 1)).max(1);
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            let mut pending = 0u64;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
                pending += 1;
                if pending >= bound {
                    for o in orow.iter_mut() {
                        *o %= p;
                    }
                    pending = 0;
                }
            }
            for o in orow.iter_mut() {
                *o %= p;
            }
        }
        Ok(Mat {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    /// Matrix product; panics on shape mismatch (a programming error).
    pub fn mul(&self, other: &Mat) -> Mat {
        self.try_mul(other).expect("matrix product")
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "sum shape");
        assert_eq!(self.p, other.p);
        let p = self.p;
        Mat {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "difference shape");
        assert_eq!(self.p, other.p);
        let p = self.p;
        Mat {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.p.get() - 1)
    }

    pub fn scale(&self, c: u64) -> Mat {
        let p = self.p;
        let c = c % p.get();
        Mat {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| p.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: u64, other: &Mat) {
        assert_eq!(self.shape(), other.shape(), "axpy shape");
        let p = self.p;
        let c = c % p.get();
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = (*a + c * b) % p.get();
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn pow(&self, mut e: u32) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn hstack(p: Prime, rows: usize, parts: &[&Mat]) -> Mat {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack rows");
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(p: Prime, cols: usize, parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack cols");
            out.set_block(off, 0, m);
            off += m.rows;
        }
        out
    }

    pub fn block_diag(p: Prime, parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block bounds");
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.p, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.p, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.p, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    /// Row-major flattening into a column vector of length rows*cols.
    pub fn flatten(&self) -> Vec<u64> {
        self.data.clone()
    }

    pub fn unflatten(p: Prime, rows: usize, cols: usize, v: &[u64]) -> Mat {
        Mat::from_data(p, rows, cols, v.to_vec()).expect("unflatten length")
    }

    /// Reduced row echelon form with deterministic pivoting (first nonzero
    /// entry scanning columns left to right).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let pm = p.get();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = p.inv(self.data[r * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    let x = &mut self.data[r * cols + j];
                    *x = *x * inv % pm;
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let prow = &prow[c..];
            for chunk in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
                let f = chunk[c];
                if f == 0 {
                    continue;
                }
                let nf = pm - f;
                for (x, &y) in chunk[c..].iter_mut().zip(prow) {
                    *x = (*x + nf * y) % pm;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Eliminate on the smaller orientation.
        if self.rows > self.cols {
            self.transpose().rref_in_place_count()
        } else {
            self.clone().rref_in_place_count()
        }
    }

    fn rref_in_place_count(mut self) -> usize {
        self.rref_in_place().len()
    }

    /// Columns form a basis of the right null space.
    pub fn kernel_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let pm = self.p.get();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.data[f * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                k.data[pc * free.len() + j] = (pm - v) % pm;
            }
        }
        k
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn image_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Some X with self * X = b, or None. Errors only on shape mismatch.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>> {
        self.check_same(b)?;
        if self.rows != b.rows {
            return Err(Error::Dimension(format!(
                "solve: a has {} rows, b has {}",
                self.rows, b.rows
            )));
        }
        let n = self.cols;
        let aug = Mat::hstack(self.p, self.rows, &[self, b]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.p, n, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = r.get(i, n + j);
            }
        }
        debug_assert_eq!(self.mul(&x), *b);
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Mat::hstack(self.p, n, &[self, &Mat::identity(self.p, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// L with L * self = I, for a matrix of full column rank.
    pub fn left_inverse(&self) -> Option<Mat> {
        let t = self.transpose();
        let id = Mat::identity(self.p, self.cols);
        t.solve(&id).ok().flatten().map(|x| x.transpose())
    }

    /// A basis (as columns) of the span of the columns, in reduced form.
    pub fn column_span(&self) -> Mat {
        let (r, pivots) = self.transpose().rref();
        r.block(0, 0, pivots.len(), self.rows).transpose()
    }

    /// True when every column of `other` lies in the column span of `self`.
    pub fn spans(&self, other: &Mat) -> bool {
        if other.cols == 0 {
            return true;
        }
        let both = Mat::hstack(self.p, self.rows, &[self, other]);
        both.rank() == self.rank()
    }
}

/// Projection onto the quotient of F_p^n by the column span of `sub`, and a
/// section of it. `proj` has kernel exactly span(sub) and `proj * section = I`.
pub fn quotient_structure(p: Prime, n: usize, sub: &Mat) -> Result<(Mat, Mat)> {
    if sub.rows() != n {
        return Err(Error::Dimension(format!(
            "subspace given in {} coordinates, ambient is {n}",
            sub.rows()
        )));
    }
    // Pivots of [sub | I] beyond the sub block pick standard vectors that
    // complete a basis of sub into one of the ambient space.
    let aug = Mat::hstack(p, n, &[sub, &Mat::identity(p, n)]);
    let (_, pivots) = aug.rref();
    let sub_pivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < sub.cols()).collect();
    let complement: Vec<usize> = pivots
        .iter()
        .copied()
        .filter(|&c| c >= sub.cols())
        .map(|c| c - sub.cols())
        .collect();
    let q = complement.len();
    let section = Mat::from_fn(p, n, q, |i, j| u64::from(complement[j] == i));
    let basis = Mat::hstack(p, n, &[&sub.select_cols(&sub_pivots), &section]);
    let inv = basis
        .inverse()
        .ok_or_else(|| Error::Internal("completed basis not invertible".into()))?;
    let r = sub_pivots.len();
    let proj = inv.block(r, 0, q, n);
    Ok((proj, section))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Mat::identity(p(5), 2);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1]));
        let z = Mat::zeros(p(5), 3, 4);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let m = Mat::from_rows(p(5), &[vec![1, 2], vec![2, 4]]).unwrap();
        let want = Mat::from_rows(p(5), &[vec![1, 2], vec![0, 0]]).unwrap();
        assert_eq!(m.rref(), (want, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Mat::identity(p(3), 4).kernel_basis().cols(), 0);
        assert_eq!(Mat::zeros(p(3), 3, 3).kernel_basis().cols(), 3);
        let m = Mat::from_rows(p(3), &[vec![1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // Enumerate F_3^2: exactly the multiples of (1,2) are killed.
        let mut killed = 0;
        for a in 0..3 {
            for b in 0..3 {
                if (a + b) % 3 == 0 {
                    killed += 1;
                }
            }
        }
        assert_eq!(killed, 3);
        assert_eq!(k.col(0), vec![2, 1]);
    }

    #[test]
    fn solve_examples() {
        let b = Mat::from_rows(p(7), &[vec![3, 1], vec![4, 0]]).unwrap();
        assert_eq!(Mat::identity(p(7), 2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Mat::zeros(p(7), 2, 2).solve(&b).unwrap(), None);
        let a = Mat::from_rows(p(7), &[vec![1, 1], vec![0, 1]]).unwrap();
        let rhs = Mat::from_rows(p(7), &[vec![2], vec![3]]).unwrap();
        // Brute force over F_7^2.
        let mut found = vec![];
        for x in 0..7u64 {
            for y in 0..7u64 {
                if (x + y) % 7 == 2 && y == 3 {
                    found.push((x, y));
                }
            }
        }
        assert_eq!(found, vec![(6, 3)]);
        let x = a.solve(&rhs).unwrap().unwrap();
        assert_eq!(x.col(0), vec![6, 3]);
        assert!(a.solve(&Mat::zeros(p(7), 3, 1)).is_err());
    }

    #[test]
    fn quotient_examples() {
        let (proj, sec) = quotient_structure(p(2), 3, &Mat::zeros(p(2), 3, 0)).unwrap();
        assert_eq!(proj, Mat::identity(p(2), 3));
        assert_eq!(sec, Mat::identity(p(2), 3));
        let (proj, _) = quotient_structure(p(2), 2, &Mat::identity(p(2), 2)).unwrap();
        assert_eq!(proj.rows(), 0);
        let sub = Mat::from_rows(p(2), &[vec![1], vec![1]]).unwrap();
        let (proj, sec) = quotient_structure(p(2), 2, &sub).unwrap();
        assert_eq!(proj.rows(), 1);
        assert!(proj.mul(&sub).is_zero());
        assert_eq!(proj.mul(&sec), Mat::identity(p(2), 1));
        // Kernel by enumeration over F_2^2 is {00, 11}.
        let mut kernel = vec![];
        for a in 0..2 {
            for b in 0..2 {
                let v = Mat::column_vector(p(2), &[a, b]);
                if proj.mul(&v).is_zero() {
                    kernel.push((a, b));
                }
            }
        }
        assert_eq!(kernel, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn dependent_sub_columns_are_tolerated() {
        let sub = Mat::from_rows(p(5), &[vec![1, 2], vec![1, 2], vec![0, 0]]).unwrap();
        let (proj, sec) = quotient_structure(p(5), 3, &sub).unwrap();
        assert_eq!(proj.rows(), 2);
        assert!(proj.mul(&sub).is_zero());
        assert_eq!(proj.mul(&sec), Mat::identity(p(5), 2));
    }

    #[test]
    fn inverse_and_left_inverse() {
        let a = Mat::from_rows(p(11), &[vec![2, 3], vec![1, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(p(11), 2));
        let tall = Mat::from_rows(p(11), &[vec![1, 0], vec![2, 1], vec![3, 5]]).unwrap();
        let l = tall.left_inverse().unwrap();
        assert_eq!(l.mul(&tall), Mat::identity(p(11), 2));
        assert!(Mat::zeros(p(11), 2, 2).inverse().is_none());
    }
}

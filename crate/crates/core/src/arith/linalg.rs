//! Dense matrices over exact fields: row reduction, rank, kernels, solving.
//!
//! Generic over [`Scalar`], implemented for the rationals and for elements of
//! cyclotomic fields. Scalars that need context (the cyclotomic conductor)
//! produce zeros and ones from an existing element.

use std::fmt::Debug;

use num::{One, Zero};

use super::rational::Q;

pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv_ref(&self) -> Option<Self>;
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Rational matrix.
pub type QMatrix = Matrix<Q>;

impl<T: Scalar> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn identity_like(n: usize, exemplar: &T) -> Self {
        let mut m = Self::filled(n, n, exemplar.zero_like());
        for i in 0..n {
            m[(i, i)] = exemplar.one_like();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Rows must be non-empty and of equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul_ref(s)).collect() }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg_ref()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let zero = self.zero_exemplar(o);
        let mut out = Self::filled(self.rows, o.cols, zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero_elem() {
                        continue;
                    }
                    let v = out[(i, j)].add_ref(&a.mul_ref(b));
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v.first().map(|x| x.zero_like()).unwrap_or_else(|| self.data[0].zero_like());
                for (j, vj) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero_elem() && !vj.is_zero_elem() {
                        acc = acc.add_ref(&a.mul_ref(vj));
                    }
                }
                acc
            })
            .collect()
    }

    fn zero_exemplar(&self, o: &Self) -> T {
        self.data
            .first()
            .or_else(|| o.data.first())
            .expect("cannot infer scalar context of an empty product")
            .zero_like()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero_elem()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].inv_ref().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self[(r, j)].mul_ref(&inv);
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero_elem() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero_elem() {
                        continue;
                    }
                    let v = self[(i, j)].sub_ref(&f.mul_ref(&self[(r, j)]));
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of the right kernel {v : A v = 0}; `exemplar` supplies the
    /// scalar context when the matrix has no rows.
    pub fn nullspace_with(&self, exemplar: &T) -> Vec<Vec<T>> {
        let zero = exemplar.zero_like();
        let one = exemplar.one_like();
        if self.rows == 0 {
            return (0..self.cols)
                .map(|k| (0..self.cols).map(|j| if j == k { one.clone() } else { zero.clone() }).collect())
                .collect();
        }
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = one.clone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r[(row, f)].neg_ref();
                }
                v
            })
            .collect()
    }

    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let ex = self.data.first().expect("nullspace of an empty matrix needs nullspace_with").clone();
        self.nullspace_with(&ex)
    }

    /// Basis of the column space, taken from the original columns at pivot positions.
    pub fn column_space(&self) -> Vec<Vec<T>> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|c| self.column(c)).collect()
    }

    /// Solves A X = B; `None` if inconsistent. Returns one particular solution.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let mut aug = Self::from_fn(self.rows, self.cols + b.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[(i, j - self.cols)].clone()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let zero = b.data.first().or(self.data.first())?.zero_like();
        let mut x = Self::filled(self.cols, b.cols, zero);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = aug[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let id = Self::identity_like(self.rows, &self.data[0]);
        let (_, pivots) = self.rref();
        if pivots.len() < self.rows {
            return None;
        }
        self.solve(&id)
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        assert!(self.rows > 0, "determinant of an empty matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.data[0].one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero_elem()) else {
                return self.data[0].zero_like();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg_ref();
            }
            let piv = m[(c, c)].clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv_ref().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero_elem() {
                    continue;
                }
                let f = m[(i, c)].mul_ref(&inv);
                for j in c..n {
                    let v = m[(i, j)].sub_ref(&f.mul_ref(&m[(c, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square() && self.rows > 0);
        (1..self.rows).fold(self[(0, 0)].clone(), |acc, i| acc.add_ref(&self[(i, i)]))
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[Self], exemplar: &T) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::filled(n, m, exemplar.zero_like());
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Serialized as a list of rows of "p/q" strings.
impl serde::Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.to_rows().iter().map(|r| r.iter().map(super::rational::fmt_q).collect()).collect();
        rows.serialize(s)
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Q::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::identity_like(n, &Q::zero())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| super::rational::q(x)).collect()).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.to_rows().iter().map(|r| r.iter().map(super::rational::to_f64).collect()).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && *self == self.transpose().neg()
    }
}

/// Basis of the intersection-free sum span(vectors) via RREF rows (canonical).
pub fn row_space_basis<T: Scalar>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    if vectors.is_empty() || vectors[0].is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vectors.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

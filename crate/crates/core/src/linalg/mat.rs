use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major real matrix. Every operator symbol of the workbench
/// (ad, Ad, projections, inclusions, l_p, ...) is stored as one of these.
#[derive(Clone, PartialEq)]
pub struct LinearMap<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> LinearMap<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
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
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_f64_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| T::lit(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(n_rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
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

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "apply: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let r = &self.data[i * self.cols..(i + 1) * self.cols];
                r.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Applies the transpose without forming it.
    pub fn apply_transpose(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "apply_transpose: dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            if vi == T::zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += self[(i, j)] * vi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Operator 1-norm (max column sum).
    pub fn norm1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), |m, x| m.max(x))
    }

    pub fn norm_fro(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Writes `b` at the rows/cols given by index lists.
    pub fn set_selected(&mut self, rows: &[usize], cols: &[usize], b: &Self) {
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                self[(r, c)] = b[(i, j)];
            }
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                other[(i - self.rows, j)]
            }
        })
    }

    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    /// Skew-symmetry defect max|A + A^T|.
    pub fn skew_residual(&self) -> T {
        let mut r = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                r = r.max((self[(i, j)] + self[(j, i)]).abs());
            }
        }
        r
    }

    pub fn sym_residual(&self) -> T {
        let mut r = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        r
    }

    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "max_diff: shape mismatch");
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn lu(&self) -> Result<Lu<T>> {
        Lu::new(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.lu()?.inverse()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        Ok(self.lu()?.solve(b))
    }

    pub fn det(&self) -> Result<T> {
        match Lu::new(self) {
            Ok(lu) => Ok(lu.det()),
            Err(Error::Singular) => Ok(T::zero()),
            Err(e) => Err(e),
        }
    }

    /// 1-norm condition number; infinite when singular.
    pub fn condition(&self) -> T {
        if self.rows == 0 {
            return T::one();
        }
        match self.inverse() {
            Ok(inv) => self.norm1() * inv.norm1(),
            Err(_) => T::infinity(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> LinearMap<U> {
        LinearMap {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| U::lit(x.as_f64())).collect(),
        }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.as_f64()).collect()).collect()
    }
}

impl<T> Index<(usize, usize)> for LinearMap<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for LinearMap<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for LinearMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinearMap {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| format!("{:>12.6e}", x.as_f64())).collect();
            writeln!(f, "  {}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

macro_rules! elementwise {
    ($tr:ident, $m:ident, $op:tt, $atr:ident, $am:ident) => {
        impl<'a, T: Scalar> $tr<&'a LinearMap<T>> for &'a LinearMap<T> {
            type Output = LinearMap<T>;
            fn $m(self, rhs: &'a LinearMap<T>) -> LinearMap<T> {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
                LinearMap {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a $op b).collect(),
                }
            }
        }
        impl<T: Scalar> $tr<LinearMap<T>> for LinearMap<T> {
            type Output = LinearMap<T>;
            fn $m(self, rhs: LinearMap<T>) -> LinearMap<T> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, T: Scalar> $tr<&'a LinearMap<T>> for LinearMap<T> {
            type Output = LinearMap<T>;
            fn $m(self, rhs: &'a LinearMap<T>) -> LinearMap<T> {
                (&self).$m(rhs)
            }
        }
        impl<'a, T: Scalar> $atr<&'a LinearMap<T>> for LinearMap<T> {
            fn $am(&mut self, rhs: &'a LinearMap<T>) {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
                for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = *a $op b;
                }
            }
        }
    };
}

elementwise!(Add, add, +, AddAssign, add_assign);
elementwise!(Sub, sub, -, SubAssign, sub_assign);

impl<'a, T: Scalar> Mul<&'a LinearMap<T>> for &'a LinearMap<T> {
    type Output = LinearMap<T>;
    fn mul(self, rhs: &'a LinearMap<T>) -> LinearMap<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Mul<LinearMap<T>> for LinearMap<T> {
    type Output = LinearMap<T>;
    fn mul(self, rhs: LinearMap<T>) -> LinearMap<T> {
        self.matmul(&rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a LinearMap<T>> for LinearMap<T> {
    type Output = LinearMap<T>;
    fn mul(self, rhs: &'a LinearMap<T>) -> LinearMap<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Neg for LinearMap<T> {
    type Output = LinearMap<T>;
    fn neg(self) -> LinearMap<T> {
        self.map(|x| -x)
    }
}

impl<'a, T: Scalar> Neg for &'a LinearMap<T> {
    type Output = LinearMap<T>;
    fn neg(self) -> LinearMap<T> {
        self.map(|x| -x)
    }
}

/// LU factorisation with partial pivoting.
#[derive(Clone)]
pub struct Lu<T> {
    lu: LinearMap<T>,
    perm: Vec<usize>,
    sign: T,
}

impl<T: Scalar> fmt::Debug for Lu<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lu").field("lu", &self.lu).field("perm", &self.perm).finish()
    }
}

impl<T: Scalar> Lu<T> {
    pub fn new(a: &LinearMap<T>) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let scale = a.norm_max();
        let tiny = scale * T::epsilon() * T::count(n.max(1));
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny || best == T::zero() {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.perm.len();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)] * x[k];
                x[i] -= l;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)] * x[k];
                x[i] -= u;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_mat(&self, b: &LinearMap<T>) -> LinearMap<T> {
        let mut out = LinearMap::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j));
            out.set_column(j, &x);
        }
        out
    }

    pub fn inverse(&self) -> Result<LinearMap<T>> {
        let n = self.perm.len();
        let inv = self.solve_mat(&LinearMap::identity(n));
        if inv.is_finite() {
            Ok(inv)
        } else {
            Err(Error::Singular)
        }
    }

    pub fn det(&self) -> T {
        let n = self.perm.len();
        (0..n).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }
}

/// Least-squares solution of `a x = b` by Householder QR, with the residual norm.
pub fn least_squares<T: Scalar>(a: &LinearMap<T>, b: &[T]) -> (Vec<T>, T) {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m);
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let steps = n.min(m);
    let scale = a.norm_max().max(T::min_positive_value());
    let mut rank_ok = vec![true; n];
    for k in 0..steps {
        let norm = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<T>().sqrt();
        if norm <= scale * T::epsilon() * T::count(m.max(1)) {
            rank_ok[k] = false;
            continue;
        }
        let alpha = if r[(k, k)] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|&x| x * x).sum::<T>();
        if vnorm2 == T::zero() {
            continue;
        }
        for j in k..n {
            let dot = (k..m).map(|i| v[i - k] * r[(i, j)]).sum::<T>();
            let f = (dot + dot) / vnorm2;
            for i in k..m {
                r[(i, j)] -= f * v[i - k];
            }
        }
        let dot = (k..m).map(|i| v[i - k] * qtb[i]).sum::<T>();
        let f = (dot + dot) / vnorm2;
        for i in k..m {
            qtb[i] -= f * v[i - k];
        }
    }
    let mut x = vec![T::zero(); n];
    for k in (0..steps).rev() {
        if !rank_ok[k] || r[(k, k)].abs() <= scale * T::epsilon() * T::count(m.max(1)) {
            continue;
        }
        let mut s = qtb[k];
        for j in k + 1..n {
            s -= r[(k, j)] * x[j];
        }
        x[k] = s / r[(k, k)];
    }
    let ax = a.apply(&x);
    let res = ax.iter().zip(b).map(|(&p, &q)| (p - q) * (p - q)).sum::<T>().sqrt();
    (x, res)
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

pub fn vadd<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn vsub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn vscale<T: Scalar>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

pub fn vnorm_max<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

pub fn vnorm2<T: Scalar>(a: &[T]) -> T {
    a.iter().map(|&x| x * x).sum::<T>().sqrt()
}

pub fn basis_vector<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

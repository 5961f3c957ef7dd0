use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Dense 3-index array. Holds associators φ ∈ ∧³𝔤, cocycle tensors
/// (ϖ[i][j][k] = (ϖ_{e_i})_{jk}) and structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T> {
    dims: [usize; 3],
    data: Vec<T>,
    alternating: bool,
}

impl<T: Scalar> Tensor3<T> {
    pub fn zeros(a: usize, b: usize, c: usize) -> Self {
        Self { dims: [a, b, c], data: vec![T::zero(); a * b * c], alternating: false }
    }

    pub fn cube(n: usize) -> Self {
        Self::zeros(n, n, n)
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut t = Self::zeros(dims[0], dims[1], dims[2]);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    t[(i, j, k)] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Alternating tensor built from entries with i<j<k, extended by sign.
    pub fn alternating_from(n: usize, entries: &[(usize, usize, usize, T)]) -> Self {
        let mut t = Self::cube(n);
        for &(i, j, k, v) in entries {
            t.set_alternating(i, j, k, v);
        }
        t.alternating = true;
        t
    }

    /// Sets all six permutations of (i,j,k) with signs.
    pub fn set_alternating(&mut self, i: usize, j: usize, k: usize, v: T) {
        if i == j || j == k || i == k {
            return;
        }
        self[(i, j, k)] = v;
        self[(j, k, i)] = v;
        self[(k, i, j)] = v;
        self[(j, i, k)] = -v;
        self[(i, k, j)] = -v;
        self[(k, j, i)] = -v;
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn is_alternating_flagged(&self) -> bool {
        self.alternating
    }

    pub fn with_alternating_flag(mut self, flag: bool) -> Self {
        self.alternating = flag;
        self
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn norm_max(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!(self.dims, other.dims);
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        Self { dims: self.dims, data: self.data.iter().map(|&x| x * s).collect(), alternating: self.alternating }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims);
        Self {
            dims: self.dims,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
            alternating: self.alternating && other.alternating,
        }
    }

    /// Largest defect of total antisymmetry.
    pub fn alternation_residual(&self) -> T {
        let [a, b, c] = self.dims;
        if a != b || b != c {
            return T::infinity();
        }
        let mut r = T::zero();
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    let v = self[(i, j, k)];
                    r = r.max((v + self[(j, i, k)]).abs());
                    r = r.max((v + self[(i, k, j)]).abs());
                    r = r.max((v - self[(j, k, i)]).abs());
                }
            }
        }
        r
    }

    /// Total antisymmetrisation (1/6 Σ sign).
    pub fn antisymmetrized(&self) -> Self {
        let n = self.dims[0];
        let six = T::lit(6.0);
        let mut t = Self::from_fn(self.dims, |i, j, k| {
            (self[(i, j, k)] + self[(j, k, i)] + self[(k, i, j)]
                - self[(j, i, k)]
                - self[(i, k, j)]
                - self[(k, j, i)])
                / six
        });
        let _ = n;
        t.alternating = true;
        t
    }

    /// ⟨ξ⊗η⊗ζ, t⟩.
    pub fn contract3(&self, x: &[T], y: &[T], z: &[T]) -> T {
        let [a, b, c] = self.dims;
        let mut s = T::zero();
        for i in 0..a {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..b {
                let xy = x[i] * y[j];
                if xy == T::zero() {
                    continue;
                }
                let base = (i * b + j) * c;
                for k in 0..c {
                    s += xy * self.data[base + k] * z[k];
                }
            }
        }
        s
    }

    /// ⟨ξ⊗η⊗1, t⟩, a vector in the third slot.
    pub fn contract12(&self, x: &[T], y: &[T]) -> Vec<T> {
        let [a, b, c] = self.dims;
        let mut out = vec![T::zero(); c];
        for i in 0..a {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..b {
                let xy = x[i] * y[j];
                if xy == T::zero() {
                    continue;
                }
                let base = (i * b + j) * c;
                for k in 0..c {
                    out[k] += xy * self.data[base + k];
                }
            }
        }
        out
    }

    /// Applies a linear map to each slot: (w⊗w⊗w) t.
    pub fn transform(&self, w: &super::LinearMap<T>) -> Self {
        let n = self.dims[0];
        let m = w.rows();
        assert_eq!(w.cols(), n);
        // one slot at a time
        let mut t1 = Self::zeros(m, n, n);
        for a in 0..m {
            for i in 0..n {
                let wa = w[(a, i)];
                if wa == T::zero() {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        t1[(a, j, k)] += wa * self[(i, j, k)];
                    }
                }
            }
        }
        let mut t2 = Self::zeros(m, m, n);
        for a in 0..m {
            for b in 0..m {
                for j in 0..n {
                    let wb = w[(b, j)];
                    if wb == T::zero() {
                        continue;
                    }
                    for k in 0..n {
                        t2[(a, b, k)] += wb * t1[(a, j, k)];
                    }
                }
            }
        }
        let mut t3 = Self::zeros(m, m, m);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let mut s = T::zero();
                    for k in 0..n {
                        s += w[(c, k)] * t2[(a, b, k)];
                    }
                    t3[(a, b, c)] = s;
                }
            }
        }
        t3.alternating = self.alternating;
        t3
    }

    pub fn cast<U: Scalar>(&self) -> Tensor3<U> {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(|x| U::lit(x.as_f64())).collect(),
            alternating: self.alternating,
        }
    }
}

impl<T> Index<(usize, usize, usize)> for Tensor3<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &T {
        &self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }
}

impl<T> IndexMut<(usize, usize, usize)> for Tensor3<T> {
    #[inline]
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut T {
        &mut self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }
}

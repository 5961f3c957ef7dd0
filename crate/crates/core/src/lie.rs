//! Lie algebras as structure constants.
//!
//! `c[(i, j, k)]` is the coefficient of e_k in [e_i, e_j]. Dual spaces always
//! use the dual basis, so the pairing is the identity matrix.

use crate::error::{Error, Result};
use crate::linalg::{least_squares, BlockSplit, LinearMap, Tensor3};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<T> {
    names: Vec<String>,
    c: Tensor3<T>,
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

impl<T: Scalar> LieAlgebra<T> {
    /// From a structure tensor, which must be antisymmetric in its first two slots.
    pub fn from_tensor(names: Vec<String>, c: Tensor3<T>) -> Result<Self> {
        let [a, b, d] = c.dims();
        if a != b || b != d || names.len() != a {
            return Err(Error::DimensionMismatch(format!("structure tensor {a}x{b}x{d} for {} names", names.len())));
        }
        let mut worst = T::zero();
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    worst = worst.max((c[(i, j, k)] + c[(j, i, k)]).abs());
                }
            }
        }
        if worst > T::lit(1e-12) {
            return Err(Error::DimensionMismatch(format!("bracket is not antisymmetric ({:.3e})", worst.as_f64())));
        }
        Ok(Self { names, c })
    }

    /// Stores the tensor as given. Used for candidate brackets whose axioms
    /// are certified afterwards.
    pub fn from_tensor_raw(names: Vec<String>, c: Tensor3<T>) -> Self {
        assert_eq!(names.len(), c.dims()[0]);
        Self { names, c }
    }

    /// From [e_i, e_j] = Σ v e_k entries given for i < j.
    pub fn from_brackets(names: Vec<String>, entries: &[(usize, usize, usize, T)]) -> Result<Self> {
        let n = names.len();
        let mut c = Tensor3::cube(n);
        for &(i, j, k, v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::DimensionMismatch(format!("bracket index ({i},{j},{k}) out of range {n}")));
            }
            if i == j {
                return Err(Error::DimensionMismatch(format!("diagonal bracket entry ({i},{i},{k})")));
            }
            let (a, b, s) = if i < j { (i, j, v) } else { (j, i, -v) };
            c[(a, b, k)] += s;
            c[(b, a, k)] -= s;
        }
        Ok(Self { names, c })
    }

    pub fn abelian(n: usize) -> Self {
        Self { names: default_names(n), c: Tensor3::cube(n) }
    }

    /// sl2 on the basis (h, e, f): [h,e]=2e, [h,f]=−2f, [e,f]=h.
    pub fn sl2() -> Self {
        let two = T::lit(2.0);
        Self::from_brackets(
            vec!["h".into(), "e".into(), "f".into()],
            &[(0, 1, 1, two), (0, 2, 2, -two), (1, 2, 0, T::one())],
        )
        .expect("sl2 table")
    }

    /// so(3) ≅ su(2): [e_i, e_j] = ε_ijk e_k.
    pub fn so3() -> Self {
        Self::from_brackets(
            vec!["x".into(), "y".into(), "z".into()],
            &[(0, 1, 2, T::one()), (1, 2, 0, T::one()), (2, 0, 1, T::one())],
        )
        .expect("so3 table")
    }

    /// Structure constants of the span of the given matrices under commutators.
    /// The matrices must be linearly independent and closed under brackets.
    pub fn from_matrix_basis(names: Vec<String>, mats: &[LinearMap<T>]) -> Result<Self> {
        let n = mats.len();
        if n == 0 {
            return Ok(Self::abelian(0));
        }
        let size = mats[0].rows() * mats[0].cols();
        let cols: Vec<Vec<T>> = mats.iter().map(|m| m.as_slice().to_vec()).collect();
        let basis = LinearMap::from_columns(size, &cols);
        let mut c = Tensor3::cube(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let comm = &(&mats[i] * &mats[j]) - &(&mats[j] * &mats[i]);
                let (x, res) = least_squares(&basis, comm.as_slice());
                if res > T::lit(1e-10) * (T::one() + comm.norm_max()) {
                    return Err(Error::DimensionMismatch(format!("matrices not closed under commutator ({:.3e})", res.as_f64())));
                }
                for k in 0..n {
                    c[(i, j, k)] = x[k];
                    c[(j, i, k)] = -x[k];
                }
            }
        }
        Self::from_tensor(if names.len() == n { names } else { default_names(n) }, c)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure(&self) -> &Tensor3<T> {
        &self.c
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn bracket(&self, x: &[T], y: &[T]) -> Vec<T> {
        self.c.contract12(x, y)
    }

    /// Matrix of ad_x: (ad_x)_{kj} = Σ_i x_i c_{ijk}.
    pub fn ad(&self, x: &[T]) -> LinearMap<T> {
        let n = self.dim();
        let mut m = LinearMap::zeros(n, n);
        for i in 0..n {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += x[i] * self.c[(i, j, k)];
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> LinearMap<T> {
        LinearMap::from_fn(self.dim(), self.dim(), |k, j| self.c[(i, j, k)])
    }

    /// Coadjoint action on the dual basis: −ad_xᵀ.
    pub fn coad(&self, x: &[T]) -> LinearMap<T> {
        -self.ad(x).transpose()
    }

    pub fn killing_form(&self) -> LinearMap<T> {
        let n = self.dim();
        let ads: Vec<_> = (0..n).map(|i| self.ad_basis(i)).collect();
        LinearMap::from_fn(n, n, |i, j| (&ads[i] * &ads[j]).trace())
    }

    /// max over basis triples of ‖[[e_i,e_j],e_k] + cyclic‖.
    pub fn jacobi_residual(&self) -> T {
        let n = self.dim();
        let ads: Vec<_> = (0..n).map(|i| self.ad_basis(i)).collect();
        // ad_[x,y] − [ad_x, ad_y] vanishes iff Jacobi holds
        let mut worst = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let xy: Vec<T> = (0..n).map(|k| self.c[(i, j, k)]).collect();
                let lhs = self.ad(&xy);
                let rhs = &(&ads[i] * &ads[j]) - &(&ads[j] * &ads[i]);
                worst = worst.max(lhs.max_diff(&rhs));
            }
        }
        worst
    }

    pub fn antisymmetry_residual(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.c[(i, j, k)] + self.c[(j, i, k)]).abs());
                }
            }
        }
        worst
    }

    /// Rank deficiency of the Killing form signals non-semisimplicity.
    pub fn is_semisimple(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        let k = self.killing_form();
        let scale = T::one().max(k.norm_max());
        match k.lu() {
            Ok(lu) => lu.det().abs() > T::lit(1e-10) * scale.powi(n as i32),
            Err(_) => false,
        }
    }

    /// Expression of the algebra in the basis given by the columns of w:
    /// [x, y]' = w⁻¹[wx, wy].
    pub fn change_basis(&self, w: &LinearMap<T>) -> Result<Self> {
        let winv = w.inverse().map_err(|_| Error::SingularMap)?;
        let n = self.dim();
        let cols: Vec<Vec<T>> = (0..n).map(|j| w.column(j)).collect();
        let mut c = Tensor3::cube(n);
        for i in 0..n {
            for j in 0..n {
                let b = winv.apply(&self.bracket(&cols[i], &cols[j]));
                for k in 0..n {
                    c[(i, j, k)] = b[k];
                }
            }
        }
        Ok(Self { names: default_names(n), c })
    }

    /// Restriction of the bracket to the span of `idx`, projected along the
    /// remaining basis vectors.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let c = Tensor3::from_fn([m, m, m], |a, b, d| self.c[(idx[a], idx[b], idx[d])]);
        Self { names: idx.iter().map(|&i| self.names[i].clone()).collect(), c }
    }

    /// Direct sum of two algebras.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut c = Tensor3::cube(n + m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i, j, k)] = self.c[(i, j, k)];
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    c[(n + i, n + j, n + k)] = other.c[(i, j, k)];
                }
            }
        }
        let names = self.names.iter().chain(other.names.iter()).cloned().collect();
        Self { names, c }
    }

    pub fn cast<U: Scalar>(&self) -> LieAlgebra<U> {
        LieAlgebra { names: self.names.clone(), c: self.c.cast() }
    }
}

/// 𝔤 = 𝔩 ⊕ 𝔪 as index sets of the basis.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ReductiveDecomposition {
    pub split: BlockSplit,
}

impl ReductiveDecomposition {
    pub fn new(dim: usize, l: Vec<usize>, m: Vec<usize>) -> Result<Self> {
        Ok(Self { split: BlockSplit::new(dim, l, m)? })
    }

    /// 𝔩 spanned by the first `k` basis vectors.
    pub fn leading(dim: usize, k: usize) -> Self {
        Self { split: BlockSplit::leading(dim, k) }
    }

    pub fn l(&self) -> &[usize] {
        self.split.first()
    }

    pub fn m(&self) -> &[usize] {
        self.split.second()
    }

    pub fn dim(&self) -> usize {
        self.split.ambient()
    }
}

/// Residuals of [𝔩,𝔩] ⊆ 𝔩 and [𝔩,𝔪] ⊆ 𝔪.
pub fn check_reductive<T: Scalar>(g: &LieAlgebra<T>, d: &ReductiveDecomposition) -> Report {
    let c = g.structure();
    let mut closure = T::zero();
    let mut ideal = T::zero();
    for &a in d.l() {
        for &b in d.l() {
            for &k in d.m() {
                closure = closure.max(c[(a, b, k)].abs());
            }
        }
        for &b in d.m() {
            for &k in d.l() {
                ideal = ideal.max(c[(a, b, k)].abs());
            }
        }
    }
    let mut r = Report::new();
    r.push(Check::at_most("l subalgebra", closure.as_f64(), 1e-12));
    r.push(Check::at_most("[l,m] in m", ideal.as_f64(), 1e-12));
    r
}

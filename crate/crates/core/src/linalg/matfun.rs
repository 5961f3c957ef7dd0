use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex;

use super::series::{entire_series_apply, entire_series_frechet, PowerSeries};
use super::{eigen_decompose, spectrum, LinearMap};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigenvalues closer than this to iπℤ* are rejected by `matfun_f`.
pub const SINGULAR_TOL: f64 = 1e-8;
/// Largest eigenvector condition number accepted by the eigen evaluator.
pub const EIGEN_COND_MAX: f64 = 1e8;

/// Distance from a set of eigenvalues to the lattice iπℤ \ {0}.
pub fn singular_set_distance<T: Scalar>(eigs: &[Complex<T>]) -> T {
    let pi = T::lit(PI);
    let mut d = T::infinity();
    for l in eigs {
        let mut k = (l.im / pi).round();
        if k == T::zero() {
            k = if l.im < T::zero() { -T::one() } else { T::one() };
        }
        let dist = Complex::new(l.re, l.im - k * pi).norm();
        d = d.min(dist);
    }
    d
}

/// coth z − 1/z for complex z, with the Taylor branch near zero.
pub fn f_scalar<T: Scalar>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(1e-3) {
        let z2 = z * z;
        let c1 = T::one() / T::lit(3.0);
        let c3 = -T::one() / T::lit(45.0);
        let c5 = T::lit(2.0) / T::lit(945.0);
        let c7 = -T::one() / T::lit(4725.0);
        return z * (Complex::new(c1, T::zero()) + z2 * (Complex::new(c3, T::zero()) + z2 * (Complex::new(c5, T::zero()) + z2 * c7)));
    }
    coth_complex(z) - Complex::new(T::one(), T::zero()) / z
}

/// coth evaluated without overflow for large real parts.
pub fn coth_complex<T: Scalar>(z: Complex<T>) -> Complex<T> {
    if z.re < T::zero() {
        return -coth_complex(-z);
    }
    let one = Complex::new(T::one(), T::zero());
    let e = (z * T::lit(-2.0)).exp();
    (one + e) / (one - e)
}

pub fn tanh_complex<T: Scalar>(z: Complex<T>) -> Complex<T> {
    if z.re < T::zero() {
        return -tanh_complex(-z);
    }
    let one = Complex::new(T::one(), T::zero());
    let e = (z * T::lit(-2.0)).exp();
    (one - e) / (one + e)
}

/// Applies a scalar function through an eigen-decomposition. Fails when A is
/// not diagonalizable or the eigenvector basis is too ill-conditioned.
pub fn matfun_eigen<T: Scalar>(a: &LinearMap<T>, f: impl Fn(Complex<T>) -> Complex<T>) -> Result<LinearMap<T>> {
    match eigen_decompose(a)? {
        Some(ed) if ed.condition < T::lit(EIGEN_COND_MAX) => Ok(ed.apply_fn(f).0),
        Some(ed) => Err(Error::EvaluationFailed(format!("eigenvector condition {:.3e}", ed.condition.as_f64()))),
        None => Err(Error::EvaluationFailed("matrix is not diagonalizable".into())),
    }
}

fn zeta_even(s: usize) -> f64 {
    match s {
        2 => PI * PI / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        8 => PI.powi(8) / 9450.0,
        _ => {
            // direct sum plus an Euler–Maclaurin tail
            let n = 64usize;
            let sf = s as f64;
            let mut acc = 0.0;
            for k in (1..n).rev() {
                acc += (k as f64).powf(-sf);
            }
            let nf = n as f64;
            acc + nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf) + sf * nf.powf(-sf - 1.0) / 12.0
                - sf * (sf + 1.0) * (sf + 2.0) * nf.powf(-sf - 3.0) / 720.0
        }
    }
}

fn bernoulli_coeffs() -> &'static [f64] {
    static CELL: OnceLock<Vec<f64>> = OnceLock::new();
    CELL.get_or_init(|| {
        // F(πw)/1 = Σ_k (−1)^{k+1} 2ζ(2k)/π · w^{2k−1}
        let len = 20_002;
        let mut c = vec![0.0; len];
        for k in 1..len / 2 {
            let z = if k > 30 { 1.0 } else { zeta_even(2 * k) };
            let sgn = if k % 2 == 1 { 1.0 } else { -1.0 };
            c[2 * k - 1] = sgn * 2.0 * z / PI;
        }
        c
    })
}

/// F(A) by the Bernoulli series, valid for spectral radius below 0.95π.
pub fn matfun_f_series<T: Scalar>(a: &LinearMap<T>) -> Result<LinearMap<T>> {
    let coeffs: Vec<T> = bernoulli_coeffs().iter().map(|&c| T::lit(c)).collect();
    let series = PowerSeries::new(coeffs, Some(T::one()));
    let pi = T::lit(PI);
    entire_series_apply(&series, &a.scale(T::one() / pi)).map_err(|e| match e {
        Error::RadiusExceeded { radius, limit } => Error::RadiusExceeded { radius: radius * PI, limit: limit * PI },
        other => other,
    })
}

/// F(A) = N(A)·Q(A)⁻¹ with N = (z cosh z − sinh z)/z² and Q = sinh z/z.
pub fn matfun_f_quotient<T: Scalar>(a: &LinearMap<T>) -> Result<LinearMap<T>> {
    let q = entire_series_apply(&PowerSeries::sinh_over_z(), a)?;
    let num = entire_series_apply(&PowerSeries::f_numerator(), a)?;
    let lu = q.transpose().lu().map_err(|_| Error::SpectrumOnSingularSet { distance: 0.0 })?;
    // N Q⁻¹ = (Q⁻ᵀ Nᵀ)ᵀ
    Ok(lu.solve_mat(&num.transpose()).transpose())
}

/// F(z) = coth z − 1/z applied to A.
///
/// Eigen evaluator when A is diagonalizable with a well-conditioned basis
/// (F(0) = 0 on the kernel), otherwise the Bernoulli series.
pub fn matfun_f<T: Scalar>(a: &LinearMap<T>) -> Result<LinearMap<T>> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(LinearMap::zeros(0, 0));
    }
    let eigs = spectrum(a)?;
    let dist = singular_set_distance(&eigs);
    let scale = T::one().max(a.norm_max());
    if dist < T::lit(SINGULAR_TOL) * scale {
        return Err(Error::SpectrumOnSingularSet { distance: dist.as_f64() });
    }
    if let Some(ed) = eigen_decompose(a)? {
        if ed.condition < T::lit(EIGEN_COND_MAX) {
            return Ok(ed.apply_fn(f_scalar).0);
        }
    }
    let rho = eigs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    if rho < T::lit(0.95 * PI) {
        return matfun_f_series(a);
    }
    Err(Error::EvaluationFailed(
        "non-diagonalizable argument with spectral radius at least 0.95*pi".into(),
    ))
}

/// Max difference between the eigen and series evaluators, when both apply.
pub fn matfun_f_cross_check<T: Scalar>(a: &LinearMap<T>) -> Result<Option<T>> {
    let ed = match eigen_decompose(a)? {
        Some(ed) if ed.condition < T::lit(EIGEN_COND_MAX) => ed,
        _ => return Ok(None),
    };
    let series = match matfun_f_series(a) {
        Ok(s) => s,
        Err(Error::RadiusExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(ed.apply_fn(f_scalar).0.max_diff(&series)))
}

/// F(A) and its Fréchet derivative in direction E.
pub fn matfun_f_frechet<T: Scalar>(a: &LinearMap<T>, e: &LinearMap<T>) -> Result<(LinearMap<T>, LinearMap<T>)> {
    let f = matfun_f(a)?;
    let (q, dq) = entire_series_frechet(&PowerSeries::sinh_over_z(), a, e)?;
    let (_, dn) = entire_series_frechet(&PowerSeries::f_numerator(), a, e)?;
    let rhs = &dn - &(&f * &dq);
    let lu = q.transpose().lu().map_err(|_| Error::SpectrumOnSingularSet { distance: 0.0 })?;
    Ok((f, lu.solve_mat(&rhs.transpose()).transpose()))
}

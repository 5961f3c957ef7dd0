use super::LinearMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_TERMS: usize = 10_000;
const STORED: usize = 400;

/// A power series Σ c_k z^k with a declared radius of convergence.
///
/// Stored coefficients past the end are zero; the built-in entire series keep
/// 400 terms, which is exact in double precision for ‖A‖ up to about 100.
#[derive(Clone, Debug)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
    radius: Option<T>,
}

fn factorials(n: usize) -> Vec<f64> {
    // 1/k! for k < n, underflowing to zero gracefully
    let mut out = Vec::with_capacity(n);
    let mut f = 1.0f64;
    for k in 0..n {
        if k > 0 {
            f /= k as f64;
        }
        out.push(f);
    }
    out
}

impl<T: Scalar> PowerSeries<T> {
    /// User supplied coefficients. `radius = None` declares an entire series.
    pub fn new(coeffs: Vec<T>, radius: Option<T>) -> Self {
        Self { coeffs, radius }
    }

    fn from_fn(f: impl Fn(usize, &[f64]) -> f64) -> Self {
        let inv = factorials(STORED + 4);
        Self { coeffs: (0..STORED).map(|k| T::lit(f(k, &inv))).collect(), radius: None }
    }

    pub fn exp() -> Self {
        Self::from_fn(|k, inv| inv[k])
    }

    /// exp(−z)
    pub fn exp_neg() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 0 { inv[k] } else { -inv[k] })
    }

    pub fn cosh() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 0 { inv[k] } else { 0.0 })
    }

    pub fn sinh() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 1 { inv[k] } else { 0.0 })
    }

    /// sinh(z)/z
    pub fn sinh_over_z() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 0 { inv[k + 1] } else { 0.0 })
    }

    /// (cosh(z) − 1)/z
    pub fn cosh_minus_one_over_z() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 1 { inv[k + 1] } else { 0.0 })
    }

    /// (sinh(z) − z)/z²
    pub fn sinh_minus_z_over_z2() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 1 { inv[k + 2] } else { 0.0 })
    }

    /// (1 − e^{−z})/z
    pub fn one_minus_exp_neg_over_z() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 0 { inv[k + 1] } else { -inv[k + 1] })
    }

    /// (e^z − 1)/z
    pub fn exp_minus_one_over_z() -> Self {
        Self::from_fn(|k, inv| inv[k + 1])
    }

    /// (z cosh z − sinh z)/z², the numerator of F(z) = coth z − 1/z over sinh(z)/z.
    pub fn f_numerator() -> Self {
        Self::from_fn(|k, inv| if k % 2 == 1 { (k + 1) as f64 * inv[k + 2] } else { 0.0 })
    }

    pub fn radius(&self) -> Option<T> {
        self.radius
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Scalar evaluation, same truncation rule as the matrix case.
    pub fn eval_scalar(&self, z: T) -> Result<T> {
        let m = entire_series_apply(self, &LinearMap::from_fn(1, 1, |_, _| z))?;
        Ok(m[(0, 0)])
    }

    fn tail_small(&self, k: usize, pow_norm: T, a_norm: T, result_norm: T) -> bool {
        let tol = trunc_tol::<T>() * (T::one() + result_norm);
        let mut an = T::one();
        for j in 0..4 {
            if self.coeff(k + j).abs() * pow_norm * an >= tol {
                return false;
            }
            an *= a_norm;
        }
        true
    }

    // ‖D_{k+j}‖ ≤ ‖A‖^j ‖D_k‖ + j ‖E‖ ‖A‖^{j-1} ‖A^k‖
    fn deriv_tail_small(&self, k: usize, pn: T, dn: T, a_norm: T, e_norm: T, result_norm: T) -> bool {
        let tol = trunc_tol::<T>() * (T::one() + result_norm);
        let mut aj1 = T::one();
        for j in 1..5 {
            let bound = aj1 * a_norm * dn + T::count(j) * e_norm * aj1 * pn;
            if self.coeff(k + j).abs() * bound >= tol {
                return false;
            }
            aj1 *= a_norm;
        }
        true
    }

    fn check_radius(&self, a: &LinearMap<T>) -> Result<()> {
        if let Some(r) = self.radius {
            let rho = super::spectral_radius(a)?;
            let limit = T::lit(0.95) * r;
            if rho >= limit {
                return Err(Error::RadiusExceeded { radius: rho.as_f64(), limit: limit.as_f64() });
            }
        }
        Ok(())
    }

    fn exhausted(&self, k: usize) -> bool {
        self.radius.is_none() && k >= self.coeffs.len()
    }
}

/// Σ c_k A^k, truncated once k ≥ ‖A‖₁ and the next four term bounds are
/// below 1e-16·(1+‖result‖).
pub fn entire_series_apply<T: Scalar>(series: &PowerSeries<T>, a: &LinearMap<T>) -> Result<LinearMap<T>> {
    let n = a.ensure_square()?;
    series.check_radius(a)?;
    let a_norm = a.norm1();
    let mut result = LinearMap::identity(n).scale(series.coeff(0));
    let mut pow = LinearMap::identity(n);
    for k in 1..MAX_TERMS {
        if series.exhausted(k) {
            return Ok(result);
        }
        pow = &pow * a;
        let pn = pow.norm1();
        if pn == T::zero() {
            return Ok(result);
        }
        let c = series.coeff(k);
        if c != T::zero() {
            result += &pow.scale(c);
        }
        if T::count(k) >= a_norm && series.tail_small(k + 1, pn * a_norm, a_norm, result.norm1()) {
            return Ok(result);
        }
    }
    Err(Error::EvaluationFailed("series did not converge within 10000 terms".into()))
}

/// Value and Fréchet derivative of Σ c_k A^k in direction E.
pub fn entire_series_frechet<T: Scalar>(
    series: &PowerSeries<T>,
    a: &LinearMap<T>,
    e: &LinearMap<T>,
) -> Result<(LinearMap<T>, LinearMap<T>)> {
    let n = a.ensure_square()?;
    if e.rows() != n || e.cols() != n {
        return Err(Error::DimensionMismatch("direction shape".into()));
    }
    series.check_radius(a)?;
    let a_norm = a.norm1();
    let e_norm = e.norm1();
    let mut value = LinearMap::identity(n).scale(series.coeff(0));
    let mut deriv = LinearMap::zeros(n, n);
    let mut pow = LinearMap::identity(n);
    let mut dpow = LinearMap::zeros(n, n);
    for k in 1..MAX_TERMS {
        if series.exhausted(k) {
            return Ok((value, deriv));
        }
        // D_k = A D_{k-1} + E A^{k-1}
        dpow = &(a * &dpow) + &(e * &pow);
        pow = &pow * a;
        let pn = pow.norm1();
        let dn = dpow.norm1();
        if pn == T::zero() && dn == T::zero() {
            return Ok((value, deriv));
        }
        let c = series.coeff(k);
        if c != T::zero() {
            value += &pow.scale(c);
            deriv += &dpow.scale(c);
        }
        if T::count(k) >= a_norm
            && series.tail_small(k + 1, pn * a_norm, a_norm, value.norm1())
            && series.deriv_tail_small(k, pn, dn, a_norm, e_norm, deriv.norm1())
        {
            return Ok((value, deriv));
        }
    }
    Err(Error::EvaluationFailed("series did not converge within 10000 terms".into()))
}

fn squarings<T: Scalar>(a: &LinearMap<T>) -> i32 {
    let nrm = a.norm1();
    let mut s = 0;
    let mut v = nrm;
    while v > T::lit(0.5) && s < 60 {
        v /= T::lit(2.0);
        s += 1;
    }
    s
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm<T: Scalar>(a: &LinearMap<T>) -> Result<LinearMap<T>> {
    a.ensure_square()?;
    let s = squarings(a);
    let scaled = a.scale(T::lit(0.5f64.powi(s)));
    let mut x = entire_series_apply(&PowerSeries::exp(), &scaled)?;
    for _ in 0..s {
        x = &x * &x;
    }
    Ok(x)
}

/// exp(A) together with its Fréchet derivative in direction E.
pub fn expm_frechet<T: Scalar>(a: &LinearMap<T>, e: &LinearMap<T>) -> Result<(LinearMap<T>, LinearMap<T>)> {
    a.ensure_square()?;
    let s = squarings(a);
    let f = T::lit(0.5f64.powi(s));
    let (mut x, mut l) = entire_series_frechet(&PowerSeries::exp(), &a.scale(f), &e.scale(f))?;
    for _ in 0..s {
        l = &(&x * &l) + &(&l * &x);
        x = &x * &x;
    }
    Ok((x, l))
}

// 1e-16 in double precision; a tenth of machine epsilon for narrower types
fn trunc_tol<T: Scalar>() -> T {
    T::lit(1e-16).max(T::epsilon() * T::lit(0.1))
}

use super::series::{entire_series_apply, entire_series_frechet, PowerSeries};
use super::{vadd, vscale, vsub, BlockSplit, LinearMap};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::scalar::Scalar;

/// Condition bound for the diagonal blocks in the off-diagonal inverse lemma.
pub const BLOCK_COND_MAX: f64 = 1e12;

/// eps^{1/3}·(1 + ‖p‖).
pub fn default_step<T: Scalar>(p: &[T]) -> T {
    let nrm = p.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    T::epsilon().cbrt() * (T::one() + nrm)
}

/// Central difference (f(p+hα) − f(p−hα))/(2h).
pub fn finite_diff<T: Scalar>(
    f: impl Fn(&[T]) -> Result<LinearMap<T>>,
    p: &[T],
    dir: &[T],
    step: Option<T>,
) -> Result<LinearMap<T>> {
    let h = step.unwrap_or_else(|| default_step(p));
    let eval = |q: Vec<T>| {
        f(&q).map_err(|e| match e {
            Error::OutOfDomain(s) | Error::DomainViolation(s) => Error::DomainViolation(s),
            Error::SpectrumOnSingularSet { distance } => Error::DomainViolation(format!("singular spectrum at distance {distance:.3e}")),
            other => other,
        })
    };
    let plus = eval(vadd(p, &vscale(dir, h)))?;
    let minus = eval(vsub(p, &vscale(dir, h)))?;
    Ok((&plus - &minus).scale(T::one() / (h + h)))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ad_pow_apply<T: Scalar>(g: &LieAlgebra<T>, x: &[T], k: usize, v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    for _ in 0..k {
        out = g.bracket(x, &out);
    }
    out
}

/// d_x(ad_x^n)(u) v = Σ_{i=0}^{n−1} C(n, i+1) [ad_x^i u, ad_x^{n−i−1} v].
pub fn d_ad_power<T: Scalar>(g: &LieAlgebra<T>, x: &[T], u: &[T], v: &[T], n: usize) -> Vec<T> {
    assert!(n >= 1, "d_ad_power needs n >= 1");
    let mut out = vec![T::zero(); g.dim()];
    for i in 0..n {
        let a = ad_pow_apply(g, x, i, u);
        let b = ad_pow_apply(g, x, n - i - 1, v);
        out = vadd(&out, &vscale(&g.bracket(&a, &b), T::lit(binomial(n, i + 1))));
    }
    out
}

/// The same derivative by the product rule: Σ_{i=0}^{n−1} ad_x^i [u, ad_x^{n−i−1} v].
pub fn d_ad_power_direct<T: Scalar>(g: &LieAlgebra<T>, x: &[T], u: &[T], v: &[T], n: usize) -> Vec<T> {
    assert!(n >= 1, "d_ad_power_direct needs n >= 1");
    let mut out = vec![T::zero(); g.dim()];
    for i in 0..n {
        let inner = g.bracket(u, &ad_pow_apply(g, x, n - i - 1, v));
        out = vadd(&out, &ad_pow_apply(g, x, i, &inner));
    }
    out
}

/// Residuals of the sinh/cosh commutator identities at x with S = sinh ad_x/ad_x, C = (cosh ad_x − 1)/ad_x:
///
/// d_x S(a)b − d_x S(b)a = [C a, S b] + [S a, C b]
/// d_x C(a)b − d_x C(b)a = [S a, S b] + [C a, C b]
///
/// where d_x F(a) is the derivative of F along x + t a. Derivatives are exact Fréchet derivatives.
pub fn sinh_cosh_identity_residuals<T: Scalar>(g: &LieAlgebra<T>, x: &[T], a: &[T], b: &[T]) -> Result<(T, T)> {
    let (adx, ada, adb) = (g.ad(x), g.ad(a), g.ad(b));
    let sh = PowerSeries::sinh_over_z();
    let ch = PowerSeries::cosh_minus_one_over_z();
    let (s, ds_a) = entire_series_frechet(&sh, &adx, &ada)?;
    let (_, ds_b) = entire_series_frechet(&sh, &adx, &adb)?;
    let (c, dc_a) = entire_series_frechet(&ch, &adx, &ada)?;
    let (_, dc_b) = entire_series_frechet(&ch, &adx, &adb)?;
    let (sa, sb, ca, cb) = (s.apply(a), s.apply(b), c.apply(a), c.apply(b));
    let lhs_s = vsub(&ds_a.apply(b), &ds_b.apply(a));
    let rhs_s = vadd(&g.bracket(&ca, &sb), &g.bracket(&sa, &cb));
    let lhs_c = vsub(&dc_a.apply(b), &dc_b.apply(a));
    let rhs_c = vadd(&g.bracket(&sa, &sb), &g.bracket(&ca, &cb));
    let gap = |u: &[T], v: &[T]| u.iter().zip(v).fold(T::zero(), |m, (p, q)| m.max((*p - *q).abs()));
    Ok((gap(&lhs_s, &rhs_s), gap(&lhs_c, &rhs_c)))
}

/// (1 − e^{−ad_x})/ad_x, the right factor of the differential of exp.
pub fn dexp_factor<T: Scalar>(g: &LieAlgebra<T>, x: &[T]) -> Result<LinearMap<T>> {
    entire_series_apply(&PowerSeries::one_minus_exp_neg_over_z(), &g.ad(x))
}

/// Both sides of (p f i)⁻¹ p f i′ = −p f⁻¹ i′ (p′ f⁻¹ i′)⁻¹ for E = F ⊕ F′.
pub fn offdiag_inverse_sides<T: Scalar>(f: &LinearMap<T>, split: &BlockSplit) -> Result<(LinearMap<T>, LinearMap<T>)> {
    f.ensure_square()?;
    if split.ambient() != f.rows() {
        return Err(Error::DimensionMismatch("split does not match map".into()));
    }
    let finv = f.inverse().map_err(|_| Error::SingularMap)?;
    let (a, b) = (split.first(), split.second());
    let pfi = f.select(a, a);
    let pfi2 = f.select(a, b);
    let q = finv.select(a, b);
    let q2 = finv.select(b, b);
    for blk in [&pfi, &q2] {
        let cond = blk.condition();
        if !(cond < T::lit(BLOCK_COND_MAX)) {
            return Err(Error::SingularBlock { condition: cond.as_f64() });
        }
    }
    let lhs = pfi.lu().map_err(|_| Error::SingularBlock { condition: f64::INFINITY })?.solve_mat(&pfi2);
    let q2inv = q2.inverse().map_err(|_| Error::SingularBlock { condition: f64::INFINITY })?;
    let rhs = -(&q * &q2inv);
    Ok((lhs, rhs))
}

pub fn offdiag_inverse_identity_residual<T: Scalar>(f: &LinearMap<T>, split: &BlockSplit) -> Result<T> {
    let (l, r) = offdiag_inverse_sides(f, split)?;
    Ok(l.max_diff(&r))
}

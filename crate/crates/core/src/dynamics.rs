//! Dynamical ℓ-matrices l : U ⊆ 𝔩* → 𝒜(𝔤*, 𝔤) as evaluable fields.
//!
//! Points p ∈ 𝔩* are coordinate vectors on the dual basis of the 𝔩 indices of
//! the reductive decomposition, in the order given by `decomp.l()`. The
//! section s : 𝔩* → 𝔤* extends by zero on 𝔪.
//!
//! Every field carries an exact derivative; finite differences are only used
//! as a cross-check.

use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition};
use crate::linalg::{
    dot, entire_series_frechet, expm, expm_frechet, finite_diff, least_squares, matfun_f, matfun_f_frechet,
    offdiag_inverse_identity_residual, singular_set_distance, spectrum, vnorm_max, BlockSplit, LinearMap, PowerSeries,
    Tensor3,
};
use crate::poly::PolyMap;
use crate::qbia::{build_double, check_morphism, compatibility_flags, invert, DoubleAlgebra, QuasiBialgebra, STRUCT_TOL};
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::twist::apply_twist;

/// Quantitative margins for the open conditions defining U.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margins {
    /// Minimal distance of the spectrum to iπℤ*.
    pub spectral: f64,
    /// Maximal condition number of p_𝔤 Ad_{e^{−sp}} i_𝔤.
    pub cond_max: f64,
}

impl Default for Margins {
    fn default() -> Self {
        Self { spectral: 1e-6, cond_max: 1e10 }
    }
}

/// Outcome of a domain query, with the measured quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainStatus {
    pub inside: bool,
    /// Distance used by the membership test (𝔩 ⊕ 𝔩* for ℓcan, 𝔡 for rAM).
    pub spectral_distance: f64,
    /// Distance of the spectrum of ad^𝔡_{sp} on the full double, for comparison.
    pub double_spectral_distance: f64,
    pub condition: f64,
}

impl DomainStatus {
    fn everywhere() -> Self {
        Self { inside: true, spectral_distance: f64::INFINITY, double_spectral_distance: f64::INFINITY, condition: 1.0 }
    }
}

fn spectral_distance<T: Scalar>(a: &LinearMap<T>) -> f64 {
    match spectrum(a) {
        Ok(ev) => singular_set_distance(&ev).as_f64(),
        Err(_) => 0.0,
    }
}

/// rAM_p = F(ad^𝔡_p) restricted to 𝔤* → 𝔤, for a cocommutative G.
#[derive(Clone)]
pub struct RamData<T: Scalar> {
    double: DoubleAlgebra<T>,
}

impl<T: Scalar> RamData<T> {
    pub fn new(q: &QuasiBialgebra<T>) -> Result<Self> {
        let w = q.varpi.norm_max();
        if w != T::zero() {
            return Err(Error::PreconditionFailed { what: "rAM needs a cocommutative quasi-bialgebra".into(), residual: w.as_f64() });
        }
        Ok(Self { double: build_double(q) })
    }

    fn ad_p(&self, p: &[T]) -> LinearMap<T> {
        let n = self.double.half();
        let mut x = vec![T::zero(); 2 * n];
        x[n..].copy_from_slice(p);
        self.double.ad(&x)
    }

    fn status(&self, p: &[T], m: &Margins) -> DomainStatus {
        let d = spectral_distance(&self.ad_p(p));
        DomainStatus { inside: d > m.spectral, spectral_distance: d, double_spectral_distance: d, condition: 1.0 }
    }

    fn eval(&self, p: &[T]) -> Result<LinearMap<T>> {
        let n = self.double.half();
        Ok(matfun_f(&self.ad_p(p))?.block(0, n, n, n))
    }

    fn deriv(&self, p: &[T], v: &[T]) -> Result<LinearMap<T>> {
        let n = self.double.half();
        let (_, d) = matfun_f_frechet(&self.ad_p(p), &self.ad_p(v))?;
        Ok(d.block(0, n, n, n))
    }
}

/// Data for ℓcan_p(sα + ξ) = rAM_p α − (p_𝔤 Ad_{e^{−sp}} i_𝔤)⁻¹ p_𝔤 Ad_{e^{−sp}} ξ.
#[derive(Clone)]
pub struct LcanData<T: Scalar> {
    big: DoubleAlgebra<T>,
    small: RamData<T>,
    l: Vec<usize>,
    m: Vec<usize>,
}

/// (𝔩, [,]_𝔩, 0, p_𝔩⁽³⁾φ)
pub fn restricted_cocommutative<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> QuasiBialgebra<T> {
    let l = d.l();
    let k = l.len();
    let phi = Tensor3::from_fn([k, k, k], |a, b, c| q.phi[(l[a], l[b], l[c])]);
    QuasiBialgebra { g: q.g.restrict(l), varpi: Tensor3::cube(k), phi: phi.with_alternating_flag(true), decomp: None }
}

impl<T: Scalar> LcanData<T> {
    pub fn new(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<Self> {
        let (compatible, canonical) = compatibility_flags(q, d);
        if !(compatible && canonical) {
            return Err(Error::NotCanonicalCompatible(
                crate::qbia::check_compatibility(q, d).failures().iter().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "),
            ));
        }
        Ok(Self {
            big: build_double(q),
            small: RamData::new(&restricted_cocommutative(q, d))?,
            l: d.l().to_vec(),
            m: d.m().to_vec(),
        })
    }

    fn sp(&self, p: &[T]) -> Vec<T> {
        let n = self.big.half();
        let mut x = vec![T::zero(); 2 * n];
        for (j, &a) in self.l.iter().enumerate() {
            x[n + a] = p[j];
        }
        x
    }

    fn blocks(x: &LinearMap<T>, n: usize, m: &[usize]) -> (LinearMap<T>, LinearMap<T>) {
        let g: Vec<usize> = (0..n).collect();
        let mcols: Vec<usize> = m.iter().map(|&c| n + c).collect();
        (x.select(&g, &g), x.select(&g, &mcols))
    }

    fn status(&self, p: &[T], mg: &Margins) -> DomainStatus {
        let d = spectral_distance(&self.small.ad_p(p));
        let n = self.big.half();
        let big = self.big.ad(&self.sp(p));
        let cond = match expm(&-&big) {
            Ok(x) => Self::blocks(&x, n, &self.m).0.condition().as_f64(),
            Err(_) => f64::INFINITY,
        };
        DomainStatus {
            inside: d > mg.spectral && cond < mg.cond_max,
            spectral_distance: d,
            double_spectral_distance: spectral_distance(&big),
            condition: cond,
        }
    }

    fn assemble(&self, fs: &LinearMap<T>, mcols: &LinearMap<T>) -> LinearMap<T> {
        let n = self.big.half();
        let all: Vec<usize> = (0..n).collect();
        let mut out = LinearMap::zeros(n, n);
        out.set_selected(&self.l, &self.l, fs);
        out.set_selected(&all, &self.m, mcols);
        out
    }

    fn eval(&self, p: &[T]) -> Result<LinearMap<T>> {
        let n = self.big.half();
        let fs = self.small.eval(p)?;
        let x = expm(&-&self.big.ad(&self.sp(p)))?;
        let (b, tm) = Self::blocks(&x, n, &self.m);
        let lu = b.lu().map_err(|_| Error::OutOfDomain("p_g Ad_{e^{-sp}} i_g is singular".into()))?;
        Ok(self.assemble(&fs, &-&lu.solve_mat(&tm)))
    }

    /// d(B⁻¹T) = B⁻¹ dT − B⁻¹ dB B⁻¹ T.
    fn deriv(&self, p: &[T], v: &[T]) -> Result<LinearMap<T>> {
        let n = self.big.half();
        let dfs = self.small.deriv(p, v)?;
        let a = -&self.big.ad(&self.sp(p));
        let e = -&self.big.ad(&self.sp(v));
        let (x, dx) = expm_frechet(&a, &e)?;
        let (b, tm) = Self::blocks(&x, n, &self.m);
        let (db, dtm) = Self::blocks(&dx, n, &self.m);
        let lu = b.lu().map_err(|_| Error::OutOfDomain("p_g Ad_{e^{-sp}} i_g is singular".into()))?;
        let binv_tm = lu.solve_mat(&tm);
        let dm = &lu.solve_mat(&(&db * &binv_tm)) - &lu.solve_mat(&dtm);
        Ok(self.assemble(&dfs, &dm))
    }
}

/// σ_p = e^{Σ₁(p)} ⋯ e^{Σ_r(p)} with polynomial Σ_k : 𝔩* → 𝔤, Σ_k(0) = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge<T: Scalar> {
    pub factors: Vec<PolyMap<T>>,
}

/// Ad_σ, R = r_{σ⁻¹}T_pσ and their derivatives along a direction.
pub struct GaugeJet<T: Scalar> {
    pub ad: LinearMap<T>,
    pub r: LinearMap<T>,
    pub d_ad: LinearMap<T>,
    pub d_r: LinearMap<T>,
}

impl<T: Scalar> Gauge<T> {
    pub fn identity() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn exponential(sigma: PolyMap<T>) -> Self {
        Self { factors: vec![sigma] }
    }

    /// The pointwise product σ'σ with σ' = self.
    pub fn then_left_of(&self, sigma: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(sigma.factors.iter().cloned());
        Self { factors }
    }

    /// Max of ‖Σ(0)‖ and of the infinitesimal equivariance defect
    /// dΣ_p(ad_zᵀ p) + [z, Σ_p] over z ∈ 𝔩 and the given points.
    pub fn equivariance_defect(&self, g: &LieAlgebra<T>, d: &ReductiveDecomposition, points: &[Vec<T>]) -> T {
        let l = d.l();
        let mut worst = T::zero();
        for s in &self.factors {
            worst = worst.max(vnorm_max(&s.eval(&vec![T::zero(); l.len()])));
            for p in points {
                let val = s.eval(p);
                for &z in l {
                    let dir = coad_direction(g, d, z, p);
                    let mut zv = vec![T::zero(); g.dim()];
                    zv[z] = T::one();
                    let lhs = s.directional(p, &dir);
                    let br = g.bracket(&zv, &val);
                    for i in 0..lhs.len() {
                        worst = worst.max((lhs[i] + br[i]).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn jet(&self, g: &LieAlgebra<T>, p: &[T], v: &[T]) -> Result<GaugeJet<T>> {
        let n = g.dim();
        let k = p.len();
        let phi = PowerSeries::exp_minus_one_over_z();
        let mut ad = LinearMap::identity(n);
        let mut d_ad = LinearMap::zeros(n, n);
        let mut r = LinearMap::zeros(n, k);
        let mut d_r = LinearMap::zeros(n, k);
        for s in &self.factors {
            let x = g.ad(&s.eval(p));
            let jac = s.jacobian(p);
            let dx = g.ad(&jac.apply(v));
            let (a, da) = expm_frechet(&x, &dx)?;
            let (f, df) = entire_series_frechet(&phi, &x, &dx)?;
            let rk = &f * &jac;
            let drk = &(&df * &jac) + &(&f * &s.jacobian_derivative(p, v));
            // R_{σ τ} = R_σ + Ad_σ R_τ
            r = &r + &(&ad * &rk);
            d_r = &(&d_r + &(&d_ad * &rk)) + &(&ad * &drk);
            let new_ad = &ad * &a;
            d_ad = &(&d_ad * &a) + &(&ad * &da);
            ad = new_ad;
        }
        Ok(GaugeJet { ad, r, d_ad, d_r })
    }
}

/// ad^𝔩_zᵀ p in 𝔩* coordinates, for z a basis index of 𝔩.
pub fn coad_direction<T: Scalar>(g: &LieAlgebra<T>, d: &ReductiveDecomposition, z: usize, p: &[T]) -> Vec<T> {
    let l = d.l();
    let c = g.structure();
    // (ad_zᵀ p)_j = Σ_k c[z, l_j, l_k] p_k
    (0..l.len()).map(|j| (0..l.len()).fold(T::zero(), |s, kk| s + c[(z, l[j], l[kk])] * p[kk])).collect()
}

#[derive(Clone)]
pub enum FieldKind<T: Scalar> {
    Zero,
    Constant(LinearMap<T>),
    Ram(Box<RamData<T>>),
    Lcan(Box<LcanData<T>>),
    /// inner + t
    Shift { inner: Box<LMatrixField<T>>, t: LinearMap<T> },
    /// Entries of l_p in row-major order.
    Poly(PolyMap<T>),
    /// Ad_σ l Ad_σᵀ + θ^σ + π_σ with π_σ = Ad_σ t Ad_σᵀ − t for ϖ = ∂t.
    Gauged { inner: Box<LMatrixField<T>>, gauge: Gauge<T>, exact_t: Option<LinearMap<T>> },
}

/// A map l : U → 𝒜(𝔤*, 𝔤) together with the structure it is tested against.
#[derive(Clone)]
pub struct LMatrixField<T: Scalar> {
    pub kind: FieldKind<T>,
    pub q: QuasiBialgebra<T>,
    pub decomp: ReductiveDecomposition,
    pub margins: Margins,
}

impl<T: Scalar> LMatrixField<T> {
    fn with_kind(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, kind: FieldKind<T>) -> Self {
        Self { kind, q: q.clone(), decomp: d.clone(), margins: Margins::default() }
    }

    pub fn zero(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Self {
        Self::with_kind(q, d, FieldKind::Zero)
    }

    pub fn constant(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, t: LinearMap<T>) -> Result<Self> {
        let r = t.skew_residual();
        if r > T::lit(1e-12) * T::one().max(t.norm_max()) {
            return Err(Error::NotSkew(r.as_f64()));
        }
        Ok(Self::with_kind(q, d, FieldKind::Constant(t)))
    }

    /// rAM on U ⊆ 𝔤* for a cocommutative G, with 𝔩 = 𝔤.
    pub fn ram(q: &QuasiBialgebra<T>) -> Result<Self> {
        let d = ReductiveDecomposition::leading(q.dim(), q.dim());
        Ok(Self::with_kind(q, &d, FieldKind::Ram(Box::new(RamData::new(q)?))))
    }

    pub fn lcan(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<Self> {
        Ok(Self::with_kind(q, d, FieldKind::Lcan(Box::new(LcanData::new(q, d)?))))
    }

    /// ℓcan(G^ρ) + ρ, tested against G.
    pub fn lcan_plus_rho(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, rho: &LinearMap<T>) -> Result<Self> {
        let qr = apply_twist(q, rho)?;
        let inner = Self::lcan(&qr, d)?;
        Ok(Self::with_kind(q, d, FieldKind::Shift { inner: Box::new(inner), t: rho.clone() }))
    }

    /// Polynomial field; `poly` has values in row-major n×n matrices.
    pub fn polynomial(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, poly: PolyMap<T>) -> Result<Self> {
        let n = q.dim();
        if poly.out_dim() != n * n || poly.vars() != d.l().len() {
            return Err(Error::DimensionMismatch("polynomial field shape".into()));
        }
        Ok(Self::with_kind(q, d, FieldKind::Poly(poly)))
    }

    /// The field p ↦ l_p + t regarded as a field for `target`.
    pub fn shifted(&self, t: &LinearMap<T>, target: &QuasiBialgebra<T>) -> Self {
        Self {
            kind: FieldKind::Shift { inner: Box::new(self.clone()), t: t.clone() },
            q: target.clone(),
            decomp: self.decomp.clone(),
            margins: self.margins,
        }
    }

    pub fn with_margins(mut self, m: Margins) -> Self {
        self.margins = m;
        self
    }

    pub fn p_dim(&self) -> usize {
        self.decomp.l().len()
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn status(&self, p: &[T]) -> DomainStatus {
        match &self.kind {
            FieldKind::Zero | FieldKind::Constant(_) | FieldKind::Poly(_) => DomainStatus::everywhere(),
            FieldKind::Ram(r) => r.status(p, &self.margins),
            FieldKind::Lcan(c) => c.status(p, &self.margins),
            FieldKind::Shift { inner, .. } | FieldKind::Gauged { inner, .. } => inner.status(p),
        }
    }

    pub fn in_domain(&self, p: &[T]) -> bool {
        p.len() == self.p_dim() && self.status(p).inside
    }

    fn guard(&self, p: &[T]) -> Result<()> {
        if p.len() != self.p_dim() {
            return Err(Error::DimensionMismatch(format!("point of dimension {} for l* of dimension {}", p.len(), self.p_dim())));
        }
        let s = self.status(p);
        if !s.inside {
            return Err(Error::OutOfDomain(format!(
                "spectral distance {:.3e}, condition {:.3e}",
                s.spectral_distance, s.condition
            )));
        }
        Ok(())
    }

    pub fn eval(&self, p: &[T]) -> Result<LinearMap<T>> {
        self.guard(p)?;
        self.eval_raw(p)
    }

    /// d_p l(v).
    pub fn deriv(&self, p: &[T], v: &[T]) -> Result<LinearMap<T>> {
        self.guard(p)?;
        self.deriv_raw(p, v)
    }

    fn eval_raw(&self, p: &[T]) -> Result<LinearMap<T>> {
        let n = self.dim();
        match &self.kind {
            FieldKind::Zero => Ok(LinearMap::zeros(n, n)),
            FieldKind::Constant(t) => Ok(t.clone()),
            FieldKind::Ram(r) => r.eval(p),
            FieldKind::Lcan(c) => c.eval(p),
            FieldKind::Shift { inner, t } => Ok(&inner.eval_raw(p)? + t),
            FieldKind::Poly(poly) => Ok(LinearMap::from_rows(&poly.eval(p).chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>())),
            FieldKind::Gauged { inner, gauge, exact_t } => {
                let j = gauge.jet(&self.q.g, p, &vec![T::zero(); p.len()])?;
                let l = inner.eval_raw(p)?;
                let s = self.selection();
                let adt = j.ad.transpose();
                let mut out = &(&(&j.ad * &l) * &adt) + &(&(&(&j.r * &s) * &adt) - &(&s.transpose() * &j.r.transpose()));
                if let Some(t) = exact_t {
                    out = &out + &(&(&(&j.ad * t) * &adt) - t);
                }
                Ok(out)
            }
        }
    }

    fn deriv_raw(&self, p: &[T], v: &[T]) -> Result<LinearMap<T>> {
        let n = self.dim();
        match &self.kind {
            FieldKind::Zero | FieldKind::Constant(_) => Ok(LinearMap::zeros(n, n)),
            FieldKind::Ram(r) => r.deriv(p, v),
            FieldKind::Lcan(c) => c.deriv(p, v),
            FieldKind::Shift { inner, .. } => inner.deriv_raw(p, v),
            FieldKind::Poly(poly) => {
                Ok(LinearMap::from_rows(&poly.directional(p, v).chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>()))
            }
            FieldKind::Gauged { inner, gauge, exact_t } => {
                let j = gauge.jet(&self.q.g, p, v)?;
                let l = inner.eval_raw(p)?;
                let dl = inner.deriv_raw(p, v)?;
                let s = self.selection();
                let (adt, dadt) = (j.ad.transpose(), j.d_ad.transpose());
                let conj = &(&(&(&j.d_ad * &l) * &adt) + &(&(&j.ad * &dl) * &adt)) + &(&(&j.ad * &l) * &dadt);
                let theta = &(&(&(&j.d_r * &s) * &adt) + &(&(&j.r * &s) * &dadt)) - &(&s.transpose() * &j.d_r.transpose());
                let mut out = &conj + &theta;
                if let Some(t) = exact_t {
                    out = &out + &(&(&(&j.d_ad * t) * &adt) + &(&(&j.ad * t) * &dadt));
                }
                Ok(out)
            }
        }
    }

    /// i* : 𝔤* → 𝔩* as a k × n matrix.
    fn selection(&self) -> LinearMap<T> {
        let l = self.decomp.l();
        LinearMap::from_fn(l.len(), self.dim(), |j, i| if l[j] == i { T::one() } else { T::zero() })
    }

    /// l_p and d_p l along each coordinate direction of 𝔩*.
    pub fn jet(&self, p: &[T]) -> Result<(LinearMap<T>, Vec<LinearMap<T>>)> {
        self.guard(p)?;
        let k = self.p_dim();
        let val = self.eval_raw(p)?;
        let mut ds = Vec::with_capacity(k);
        for j in 0..k {
            let mut e = vec![T::zero(); k];
            e[j] = T::one();
            ds.push(self.deriv_raw(p, &e)?);
        }
        Ok((val, ds))
    }
}

/// G-ϖ-cocycle check for gauge transforms: ϖ = 0, or ϖ = ∂t for the supplied t.
fn exact_cocycle_defect<T: Scalar>(q: &QuasiBialgebra<T>, t: Option<&LinearMap<T>>) -> T {
    let n = q.dim();
    let mut worst = T::zero();
    for i in 0..n {
        let w = q.varpi_basis(i);
        let want = match t {
            Some(t) => {
                let ad = q.g.ad_basis(i);
                &(&ad * t) + &(t * &ad.transpose())
            }
            None => LinearMap::zeros(n, n),
        };
        worst = worst.max(w.max_diff(&want));
    }
    worst
}

/// Deterministic probe points for polynomial equivariance checks.
fn probe_points<T: Scalar>(k: usize) -> Vec<Vec<T>> {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    (0..4).map(|_| (0..k).map(|_| T::lit(r.gen_range(-0.7..0.7))).collect()).collect()
}

use rand::SeedableRng;

/// l^σ_p = Ad_{σ_p} l_p Ad_{σ_p}ᵀ + θ^σ_p + π_{σ_p}.
pub fn gauge_transform<T: Scalar>(field: &LMatrixField<T>, gauge: &Gauge<T>, exact_t: Option<&LinearMap<T>>) -> Result<LMatrixField<T>> {
    let defect = exact_cocycle_defect(&field.q, exact_t);
    if defect > T::lit(STRUCT_TOL) {
        return Err(Error::UnsupportedCocycle(defect.as_f64()));
    }
    let k = field.p_dim();
    for s in &gauge.factors {
        if s.vars() != k || s.out_dim() != field.dim() {
            return Err(Error::DimensionMismatch("gauge polynomial shape".into()));
        }
    }
    let eq = gauge.equivariance_defect(&field.q.g, &field.decomp, &probe_points(k));
    if eq > T::lit(1e-10) {
        return Err(Error::NonEquivariantSigma(eq.as_f64()));
    }
    Ok(LMatrixField {
        kind: FieldKind::Gauged { inner: Box::new(field.clone()), gauge: gauge.clone(), exact_t: exact_t.cloned() },
        q: field.q.clone(),
        decomp: field.decomp.clone(),
        margins: field.margins,
    })
}

/// CDYBE residual tensor R(a,b,c) over basis covectors:
/// Cycl(⟨ζ, d_pl(i*ξ)η⟩ − ⟨ζ,[l_pξ, l_pη]⟩ − ⟨ζ, ϖ_{l_pξ}η⟩) − φ(ξ,η,ζ).
pub fn cdybe_tensor<T: Scalar>(field: &LMatrixField<T>, p: &[T]) -> Result<Tensor3<T>> {
    let (l, ds) = field.jet(p)?;
    Ok(cdybe_cyclic_from_jet(&field.q, &field.decomp, &l, &ds))
}

fn lpos(d: &ReductiveDecomposition, a: usize) -> Option<usize> {
    d.l().iter().position(|&x| x == a)
}

fn cdybe_cyclic_from_jet<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, l: &LinearMap<T>, ds: &[LinearMap<T>]) -> Tensor3<T> {
    let n = q.dim();
    let cols: Vec<Vec<T>> = (0..n).map(|a| l.column(a)).collect();
    let wl: Vec<LinearMap<T>> = cols.iter().map(|c| q.varpi_at(c)).collect();
    let mut single = Tensor3::cube(n);
    for a in 0..n {
        let da = lpos(d, a).map(|j| &ds[j]);
        for b in 0..n {
            let br = q.g.bracket(&cols[a], &cols[b]);
            for c in 0..n {
                let dterm = da.map(|m| m[(c, b)]).unwrap_or(T::zero());
                single[(a, b, c)] = dterm - br[c] - wl[a][(c, b)];
            }
        }
    }
    Tensor3::from_fn([n, n, n], |a, b, c| single[(a, b, c)] + single[(b, c, a)] + single[(c, a, b)] - q.phi[(a, b, c)])
}

/// The 𝔡-bracket form V(ξ,η) ∈ 𝔤 of the CDYBE, for basis covectors, as V[(a,b,·)].
fn cdybe_bracket_from_jet<T: Scalar>(
    q: &QuasiBialgebra<T>,
    dbl: &DoubleAlgebra<T>,
    d: &ReductiveDecomposition,
    l: &LinearMap<T>,
    ds: &[LinearMap<T>],
) -> Tensor3<T> {
    let n = q.dim();
    let lift_g = |x: &[T]| {
        let mut v = vec![T::zero(); 2 * n];
        v[..n].copy_from_slice(x);
        v
    };
    let covec = |a: usize| {
        let mut v = vec![T::zero(); 2 * n];
        v[n + a] = T::one();
        v
    };
    let cols: Vec<Vec<T>> = (0..n).map(|a| l.column(a)).collect();
    let mut out = Tensor3::cube(n);
    for a in 0..n {
        for b in 0..n {
            let mut v = vec![T::zero(); n];
            // d_pl(i*ξ)η − d_pl(i*η)ξ − i d_p⟨ξ, l η⟩
            if let Some(j) = lpos(d, a) {
                for c in 0..n {
                    v[c] += ds[j][(c, b)];
                }
            }
            if let Some(j) = lpos(d, b) {
                for c in 0..n {
                    v[c] -= ds[j][(c, a)];
                }
            }
            for (j, &z) in d.l().iter().enumerate() {
                v[z] -= ds[j][(a, b)];
            }
            let br = q.g.bracket(&cols[a], &cols[b]);
            let x1 = dbl.bracket(&lift_g(&cols[a]), &covec(b));
            let x2 = dbl.bracket(&covec(a), &lift_g(&cols[b]));
            let x3 = dbl.bracket(&covec(a), &covec(b));
            let dual_sum: Vec<T> = (0..n).map(|i| x1[n + i] + x2[n + i] + x3[n + i]).collect();
            let lterm = l.apply(&dual_sum);
            for c in 0..n {
                v[c] += -br[c] + lterm[c] - x1[c] - x2[c] - x3[c];
                out[(a, b, c)] = v[c];
            }
        }
    }
    out
}

/// Both CDYBE forms, their agreement, and the exact-vs-FD derivative check.
pub fn cdybe_residual<T: Scalar>(field: &LMatrixField<T>, p: &[T], tol: f64) -> Result<Report> {
    let (l, ds) = field.jet(p)?;
    let cyc = cdybe_cyclic_from_jet(&field.q, &field.decomp, &l, &ds);
    let dbl = build_double(&field.q);
    let vec_form = cdybe_bracket_from_jet(&field.q, &dbl, &field.decomp, &l, &ds);
    let fd = derivative_fd_check(field, p, &ds)?;
    let mut r = Report::new();
    r.push(Check::at_most("cdybe cyclic", cyc.norm_max().as_f64(), tol));
    r.push(Check::at_most("cdybe bracket", vec_form.norm_max().as_f64(), tol));
    r.push(Check::at_most("forms agree", cyc.max_diff(&vec_form).as_f64(), 1e-9));
    r.push(Check::at_most("skew", l.skew_residual().as_f64(), 1e-10));
    r.push(Check::at_most("derivative fd cross-check", fd.as_f64(), 1e-6));
    Ok(r)
}

/// max_j ‖exact ∂_j l − central FD‖ / max(1, ‖∂_j l‖).
pub fn derivative_fd_check<T: Scalar>(field: &LMatrixField<T>, p: &[T], ds: &[LinearMap<T>]) -> Result<T> {
    let k = field.p_dim();
    let mut worst = T::zero();
    for (j, dj) in ds.iter().enumerate().take(k) {
        let mut e = vec![T::zero(); k];
        e[j] = T::one();
        let fd = finite_diff(|x: &[T]| field.eval(x), p, &e, None)?;
        worst = worst.max(fd.max_diff(dj) / T::one().max(dj.norm_max()));
    }
    Ok(worst)
}

/// ‖d_pl(ad_zᵀp) + ϖ_z + ad_z l_p + l_p ad_zᵀ‖ for z the `j`-th basis vector of 𝔩.
pub fn equivariance_residual<T: Scalar>(field: &LMatrixField<T>, p: &[T], j: usize) -> Result<T> {
    let z = field.decomp.l()[j];
    let dir = coad_direction(&field.q.g, &field.decomp, z, p);
    let l = field.eval(p)?;
    let dl = field.deriv(p, &dir)?;
    let ad = field.q.g.ad_basis(z);
    let lhs = &(&(&dl + &field.q.varpi_basis(z)) + &(&ad * &l)) + &(&l * &ad.transpose());
    Ok(lhs.norm_max())
}

pub fn equivariance_max<T: Scalar>(field: &LMatrixField<T>, p: &[T]) -> Result<T> {
    let mut worst = T::zero();
    for j in 0..field.p_dim() {
        worst = worst.max(equivariance_residual(field, p, j)?);
    }
    Ok(worst)
}

/// Rejection sample of points in U inside the box [−radius, radius]^k.
pub fn sample_domain<T: Scalar>(field: &LMatrixField<T>, rng: &mut impl Rng, count: usize, radius: f64) -> Vec<Vec<T>> {
    let k = field.p_dim();
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 1000 * count.max(1) {
        tries += 1;
        let p: Vec<T> = (0..k).map(|_| T::lit(rng.gen_range(-radius..radius))).collect();
        if field.in_domain(&p) {
            out.push(p);
        }
    }
    out
}

/// Closed form for (𝔤, 0, φ) compatible with 𝔩 ⊕ 𝔪:
/// ℓcan_p(sα + ξ) = (coth ad_{sp} − 1/ad_{sp}) sα + tanh ad_{sp} ξ.
pub fn lcan_closed_form<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, p: &[T]) -> Result<LinearMap<T>> {
    if q.varpi.norm_max() != T::zero() {
        return Err(Error::PreconditionFailed { what: "closed form needs varpi = 0".into(), residual: q.varpi.norm_max().as_f64() });
    }
    let n = q.dim();
    let dbl = build_double(q);
    let mut x = vec![T::zero(); 2 * n];
    for (j, &a) in d.l().iter().enumerate() {
        x[n + a] = p[j];
    }
    let m = dbl.ad(&x);
    let f = matfun_f(&m)?;
    let e = expm(&m)?;
    let ei = expm(&-&m)?;
    let sinh = (&e - &ei).scale(T::lit(0.5));
    let cosh = (&e + &ei).scale(T::lit(0.5));
    let tanh = cosh.lu().map_err(|_| Error::OutOfDomain("cosh ad_sp is singular".into()))?.solve_mat(&sinh);
    let mut out = LinearMap::zeros(n, n);
    for a in 0..n {
        let src = if d.l().contains(&a) { &f } else { &tanh };
        for i in 0..n {
            out[(i, a)] = src[(i, n + a)];
        }
    }
    Ok(out)
}

/// 𝔤★_{q0} with its bracket.
#[derive(Clone, Debug)]
pub struct VertexDualAlgebra<T: Scalar> {
    pub q0: Vec<T>,
    /// Columns are i(z) + ξ in 𝔤 ⊕ 𝔤*.
    pub basis: LinearMap<T>,
    pub algebra: LieAlgebra<T>,
    pub l_q0: LinearMap<T>,
}

/// [i(z)+ξ, i(z′)+ξ′]★ from its defining expression.
pub fn bracket_on_gstar<T: Scalar>(q: &QuasiBialgebra<T>, lq: &LinearMap<T>, x: &[T], y: &[T]) -> Vec<T> {
    let n = q.dim();
    let (z, xi) = (&x[..n], &x[n..]);
    let (z2, xi2) = (&y[..n], &y[n..]);
    let g = &q.g;
    let ad_z = g.ad(z);
    let ad_z2 = g.ad(z2);
    let lxi = lq.apply(xi);
    let lxi2 = lq.apply(xi2);
    let mut top = g.bracket(z, z2);
    let add = |acc: &mut Vec<T>, v: Vec<T>, s: T| {
        for (a, b) in acc.iter_mut().zip(v) {
            *a += s * b;
        }
    };
    let one = T::one();
    add(&mut top, q.varpi_at(z).apply(xi2), one);
    add(&mut top, ad_z.apply(&lxi2), one);
    add(&mut top, lq.apply(&ad_z.apply_transpose(xi2)), one);
    add(&mut top, q.varpi_at(z2).apply(xi), -one);
    add(&mut top, ad_z2.apply(&lxi), -one);
    add(&mut top, lq.apply(&ad_z2.apply_transpose(xi)), -one);
    add(&mut top, g.bracket(&lxi, &lxi2), one);
    add(&mut top, lq.apply(&g.ad(&lxi).apply_transpose(xi2)), one);
    add(&mut top, lq.apply(&g.ad(&lxi2).apply_transpose(xi)), -one);
    add(&mut top, q.varpi_at(&lxi).apply(xi2), one);
    add(&mut top, q.varpi_at(&lxi2).apply(xi), -one);
    // ⟨ξ, ϖ_{l•}ξ′⟩ has component c equal to ⟨ξ, ϖ_{l e^c} ξ′⟩
    let wl: Vec<T> = (0..n).map(|c| dot(xi, &q.varpi_at(&lq.column(c)).apply(xi2))).collect();
    add(&mut top, wl, -one);
    let phi: Vec<T> = (0..n).map(|c| (0..n).fold(T::zero(), |s, a| s + (0..n).fold(T::zero(), |s2, b| s2 + xi[a] * xi2[b] * q.phi[(a, b, c)]))).collect();
    add(&mut top, phi, one);
    let mut bot = vec![T::zero(); n];
    add(&mut bot, ad_z.apply_transpose(xi2), -one);
    add(&mut bot, ad_z2.apply_transpose(xi), one);
    add(&mut bot, q.varpi_pair(xi, xi2), -one);
    add(&mut bot, g.ad(&lxi).apply_transpose(xi2), -one);
    add(&mut bot, g.ad(&lxi2).apply_transpose(xi), one);
    top.extend(bot);
    top
}

/// Builds 𝔤★_{q0} and certifies it against the double of G^{l_{q0}}.
pub fn vertex_dual<T: Scalar>(field: &LMatrixField<T>, q0: &[T]) -> Result<(VertexDualAlgebra<T>, Report)> {
    let lq = field.eval(q0)?;
    let q = &field.q;
    let d = &field.decomp;
    let n = q.dim();
    let mut cols = Vec::with_capacity(n);
    for &z in d.l() {
        let dir = coad_direction(&q.g, d, z, q0);
        let mut v = vec![T::zero(); 2 * n];
        v[z] = T::one();
        for (j, &a) in d.l().iter().enumerate() {
            v[n + a] = dir[j];
        }
        cols.push(v);
    }
    for &c in d.m() {
        let mut v = vec![T::zero(); 2 * n];
        v[n + c] = T::one();
        cols.push(v);
    }
    let basis = LinearMap::from_columns(2 * n, &cols);
    let twisted = crate::twist::twist_unchecked(q, &lq);
    let dq = build_double(&twisted);
    let mut c = Tensor3::cube(n);
    let mut closure = T::zero();
    let mut agree = T::zero();
    for i in 0..n {
        for j in 0..n {
            let b = bracket_on_gstar(q, &lq, &cols[i], &cols[j]);
            let b2 = dq.bracket(&cols[i], &cols[j]);
            for k in 0..2 * n {
                agree = agree.max((b[k] - b2[k]).abs());
            }
            let (coef, res) = least_squares(&basis, &b);
            closure = closure.max(res);
            for k in 0..n {
                c[(i, j, k)] = coef[k];
            }
        }
    }
    let names = d
        .l()
        .iter()
        .map(|&z| format!("{}*", q.g.names()[z]))
        .chain(d.m().iter().map(|&m| format!("e^{}", q.g.names()[m])))
        .collect();
    let algebra = LieAlgebra::from_tensor_raw(names, c);
    let iso = (&(&basis.transpose() * &dq.pairing) * &basis).norm_max();
    let mut r = Report::new();
    r.push(Check::at_most("closure", closure.as_f64(), STRUCT_TOL));
    r.push(Check::at_most("jacobi", algebra.jacobi_residual().as_f64(), STRUCT_TOL));
    r.push(Check::at_most("antisymmetry", algebra.antisymmetry_residual().as_f64(), STRUCT_TOL));
    r.push(Check::at_most("lagrangian", iso.as_f64(), STRUCT_TOL));
    r.push(Check::at_most("matches twisted double", agree.as_f64(), STRUCT_TOL));
    Ok((VertexDualAlgebra { q0: q0.to_vec(), basis, algebra, l_q0: lq }, r))
}

/// max over samples of ‖ℓcan^{G⁻}_p + ℓcan^G_{−p}‖.
pub fn lcan_inversion_check<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, samples: &[Vec<T>]) -> Result<T> {
    let a = LMatrixField::lcan(q, d)?;
    let b = LMatrixField::lcan(&invert(q), d)?;
    let mut worst = T::zero();
    for p in samples {
        let mp: Vec<T> = p.iter().map(|&x| -x).collect();
        worst = worst.max((&b.eval(p)? + &a.eval(&mp)?).norm_max());
    }
    Ok(worst)
}

/// max over samples of ‖ψ ℓcan^{G1}_p ψᵀ − ℓcan^{G2}_p‖.
pub fn lcan_morphism_transport_check<T: Scalar>(
    psi: &LinearMap<T>,
    g1: &QuasiBialgebra<T>,
    d1: &ReductiveDecomposition,
    g2: &QuasiBialgebra<T>,
    d2: &ReductiveDecomposition,
    samples: &[Vec<T>],
) -> Result<T> {
    let rep = check_morphism(psi, g1, g2);
    if !rep.pass() {
        let worst = rep.failures().iter().map(|c| c.residual).fold(0.0, f64::max);
        return Err(Error::PreconditionFailed { what: "psi is not a quasi-bialgebra morphism".into(), residual: worst });
    }
    // ψ is the identity on 𝔩 and maps 𝔪₁ into 𝔪₂
    let mut fix = T::zero();
    if d1.l() != d2.l() {
        return Err(Error::PreconditionFailed { what: "l index sets differ".into(), residual: f64::INFINITY });
    }
    for &z in d1.l() {
        for i in 0..psi.rows() {
            let want = if i == z { T::one() } else { T::zero() };
            fix = fix.max((psi[(i, z)] - want).abs());
        }
    }
    for &u in d1.m() {
        for &z in d2.l() {
            fix = fix.max(psi[(z, u)].abs());
        }
    }
    if fix > T::lit(STRUCT_TOL) {
        return Err(Error::PreconditionFailed { what: "psi does not respect the decompositions".into(), residual: fix.as_f64() });
    }
    let a = LMatrixField::lcan(g1, d1)?;
    let b = LMatrixField::lcan(g2, d2)?;
    let mut worst = T::zero();
    for p in samples {
        let lhs = &(psi * &a.eval(p)?) * &psi.transpose();
        worst = worst.max(lhs.max_diff(&b.eval(p)?));
    }
    Ok(worst)
}

/// Ad_{e^{−sp}}(ℓcan_p ξ + ξ) = (p_𝔤* Ad_{e^{sp}} i_𝔤*)⁻¹ ξ for ξ ∈ 𝔩^⊥.
pub fn ad_twist_identity_check<T: Scalar>(field: &LMatrixField<T>, p: &[T], xi: &[T]) -> Result<Report> {
    let n = field.dim();
    for &a in field.decomp.l() {
        if xi[a] != T::zero() {
            return Err(Error::PreconditionFailed { what: "xi must lie in l^perp".into(), residual: xi[a].abs().as_f64() });
        }
    }
    let l = field.eval(p)?;
    let dbl = build_double(&field.q);
    let mut sp = vec![T::zero(); 2 * n];
    for (j, &a) in field.decomp.l().iter().enumerate() {
        sp[n + a] = p[j];
    }
    let adsp = dbl.ad(&sp);
    let xm = expm(&-&adsp)?;
    let xp = expm(&adsp)?;
    let mut v = l.apply(xi);
    v.extend_from_slice(xi);
    let lhs = xm.apply(&v);
    let gd: Vec<usize> = (n..2 * n).collect();
    let g: Vec<usize> = (0..n).collect();
    let blk = xp.select(&gd, &gd);
    let rhs = blk.solve(xi).map_err(|_| Error::OutOfDomain("p_g* Ad_{e^{sp}} i_g* is singular".into()))?;
    let membership = vnorm_max(&lhs[..n]);
    let eq = (0..n).fold(T::zero(), |m, i| m.max((lhs[n + i] - rhs[i]).abs()));
    // ℓcan_p ξ = p_𝔤 Ad_{e^{sp}} (p_𝔤* Ad_{e^{sp}} i_𝔤*)⁻¹ ξ
    let alt = xp.select(&g, &gd).apply(&rhs);
    let lxi = l.apply(xi);
    let skew_form = (0..n).fold(T::zero(), |m, i| m.max((lxi[i] - alt[i]).abs()));
    let split = BlockSplit::leading(2 * n, n);
    let od = offdiag_inverse_identity_residual(&xm, &split)?;
    let mut r = Report::new();
    r.push(Check::at_most("membership in g*", membership.as_f64(), 1e-10));
    r.push(Check::at_most("ad+twist equality", eq.as_f64(), 1e-10));
    r.push(Check::at_most("lcan via inverse block", skew_form.as_f64(), 1e-10));
    r.push(Check::at_most("offdiag identity", od.as_f64(), 1e-10));
    Ok(r)
}

/// CDYBE residual of l + ε t for each ε.
pub fn sensitivity_curve<T: Scalar>(field: &LMatrixField<T>, p: &[T], t: &LinearMap<T>, eps: &[T]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(eps.len());
    for &e in eps {
        let f = field.shifted(&t.scale(e), &field.q);
        out.push((e.as_f64(), cdybe_tensor(&f, p)?.norm_max().as_f64()));
    }
    Ok(out)
}

/// |R(l, G) − R(l − t, G^t)| at p.
pub fn twist_shift_residual<T: Scalar>(field: &LMatrixField<T>, t: &LinearMap<T>, p: &[T]) -> Result<T> {
    let qt = crate::twist::twist_unchecked(&field.q, t);
    let shifted = field.shifted(&-t, &qt);
    Ok(cdybe_tensor(field, p)?.max_diff(&cdybe_tensor(&shifted, p)?))
}

/// ‖p_𝔪 ℓcan_p sα‖ and ‖p_𝔩 ℓcan_p ξ‖ over basis α ∈ 𝔩*, ξ ∈ 𝔩^⊥.
pub fn lcan_block_inclusions<T: Scalar>(field: &LMatrixField<T>, p: &[T]) -> Result<(T, T)> {
    let l = field.eval(p)?;
    let (li, mi) = (field.decomp.l(), field.decomp.m());
    Ok((l.select(mi, li).norm_max(), l.select(li, mi).norm_max()))
}

/// ‖Ad_g l_p Ad_gᵀ − l_{Ad_{g⁻¹}ᵀ p}‖ for g = exp(t·z), z ∈ 𝔩 in 𝔩 coordinates.
pub fn group_equivariance_residual<T: Scalar>(field: &LMatrixField<T>, p: &[T], z: &[T], t: T) -> Result<T> {
    let g = &field.q.g;
    let li = field.decomp.l();
    let mut zv = vec![T::zero(); g.dim()];
    for (j, &a) in li.iter().enumerate() {
        zv[a] = z[j] * t;
    }
    let ad = g.ad(&zv);
    let adg = expm(&ad)?;
    let small = ad.select(li, li);
    let q = expm(&-&small.transpose())?.apply(p);
    let lhs = &(&adg * &field.eval(p)?) * &adg.transpose();
    Ok(lhs.max_diff(&field.eval(&q)?))
}

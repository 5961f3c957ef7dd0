//! Duality over 𝔩: the dual quasi-bialgebra G★, the algebroid N(U), its
//! trivialization T and the consistency identity −T* ∘ ôp = T★.
//!
//! Fibers of N(U) = U × 𝔩 × 𝔤* are pairs (k-vector in 𝔩, n-vector in 𝔤*).
//! Elements of 𝔤★₀ = 𝔩 ⊕ 𝔩^⊥ use coordinates (𝔩 basis, then e^c for c ∈ 𝔪).
//! Sections are handled through their 1-jets at a point, which is all the
//! brackets need.

use crate::dynamics::{coad_direction, vertex_dual, LMatrixField};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition};
use crate::linalg::{
    entire_series_apply, entire_series_frechet, expm, expm_frechet, least_squares, signature, LinearMap, PowerSeries,
    Tensor3,
};
use crate::poly::PolyMap;
use crate::qbia::{
    bracket_morphism_residual, build_double, check_compatibility, check_quasi_bialgebra, extract_by_indices, invert,
    omega_bracket, op_map, quasi_triple_extract, transport, DoubleAlgebra, ManinQuasiTriple, QuasiBialgebra, STRUCT_TOL,
};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

fn dual_precondition<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<()> {
    let mut w = T::zero();
    for &z in d.l() {
        w = w.max(q.varpi_basis(z).norm_max());
    }
    if w > T::lit(STRUCT_TOL) {
        return Err(Error::PreconditionFailed { what: "varpi_l = 0".into(), residual: w.as_f64() });
    }
    let mut f = T::zero();
    for &a in d.m() {
        for &b in d.m() {
            for &c in d.m() {
                f = f.max(q.phi[(a, b, c)].abs());
            }
        }
    }
    if f > T::lit(STRUCT_TOL) {
        return Err(Error::PreconditionFailed { what: "phi = 0 mod l".into(), residual: f.as_f64() });
    }
    Ok(())
}

/// Indices of 𝔤★ = 𝔩 ⊕ 𝔩^⊥ and of 𝔪^⊥ ⊕ 𝔪 inside 𝔡 = 𝔤 ⊕ 𝔤*.
fn star_indices(d: &ReductiveDecomposition) -> (Vec<usize>, Vec<usize>) {
    let n = d.dim();
    let g: Vec<usize> = d.l().iter().copied().chain(d.m().iter().map(|&c| n + c)).collect();
    let h: Vec<usize> = d.l().iter().map(|&a| n + a).chain(d.m().iter().copied()).collect();
    (g, h)
}

/// G★ = (G_(𝔡, 𝔩⊕𝔩^⊥, 𝔪^⊥⊕𝔪))⁻ with decomposition 𝔩 ⊕ 𝔩^⊥ (𝔩 first).
pub fn dual_qbia<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<(QuasiBialgebra<T>, ReductiveDecomposition)> {
    dual_precondition(q, d)?;
    let dbl = build_double(q);
    let (g, h) = star_indices(d);
    let star = invert(&extract_by_indices(&dbl, &g, &h)?);
    let k = d.l().len();
    let ds = ReductiveDecomposition::leading(q.dim(), k);
    Ok((star.with_decomp(ds.clone()), ds))
}

/// Quasi-bialgebra axioms and canonical compatibility of G★.
pub fn certify_dual<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<Report> {
    let (s, ds) = dual_qbia(q, d)?;
    let mut r = check_quasi_bialgebra(&s);
    r.extend(check_compatibility(&s, &ds));
    Ok(r)
}

/// ‖(G★)★ − G^op‖ after reordering (G★)★ back to the indices of G.
pub fn double_dual_check<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<T> {
    let (s1, d1) = dual_qbia(q, d)?;
    let (s2, _) = dual_qbia(&s1, &d1)?;
    let n = q.dim();
    let order: Vec<usize> = d.l().iter().chain(d.m()).copied().collect();
    // s2 coordinate j is the G-basis vector order[j]
    let perm = LinearMap::from_fn(n, n, |i, j| if order[j] == i { T::one() } else { T::zero() });
    let back = transport(&s2, &perm, false)?;
    let gop = transport(q, &op_map(d), false)?;
    Ok(back.max_diff(&gop))
}

/// Smallest t with ϖ = ad t + t adᵀ in the least-squares sense, and the residual.
pub fn exactness_residual<T: Scalar>(q: &QuasiBialgebra<T>) -> (LinearMap<T>, T) {
    let n = q.dim();
    // unknowns: t_{ab}, a < b
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    let rows = n * n * n;
    let mut a = LinearMap::zeros(rows, pairs.len().max(1));
    let mut rhs = vec![T::zero(); rows];
    for (col, &(x, y)) in pairs.iter().enumerate() {
        let mut t = LinearMap::zeros(n, n);
        t[(x, y)] = T::one();
        t[(y, x)] = -T::one();
        for i in 0..n {
            let ad = q.g.ad_basis(i);
            let ex = &(&ad * &t) + &(&t * &ad.transpose());
            for j in 0..n {
                for k in 0..n {
                    a[(i * n * n + j * n + k, col)] = ex[(j, k)];
                }
            }
        }
    }
    for i in 0..n {
        let w = q.varpi_basis(i);
        for j in 0..n {
            for k in 0..n {
                rhs[i * n * n + j * n + k] = w[(j, k)];
            }
        }
    }
    let (x, res) = least_squares(&a, &rhs);
    let mut t = LinearMap::zeros(n, n);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        t[(i, j)] = x[col];
        t[(j, i)] = -x[col];
    }
    (t, res)
}

/// 1-jet of a section of N(U) at a point: value (z, ξ) and ∂_j along each
/// coordinate of 𝔩* (columns of dz, dxi).
#[derive(Clone, Debug)]
pub struct NuJet<T: Scalar> {
    pub z: Vec<T>,
    pub xi: Vec<T>,
    pub dz: LinearMap<T>,
    pub dxi: LinearMap<T>,
}

impl<T: Scalar> NuJet<T> {
    pub fn constant(z: Vec<T>, xi: Vec<T>) -> Self {
        let k = z.len();
        let n = xi.len();
        Self { z, xi, dz: LinearMap::zeros(k, k), dxi: LinearMap::zeros(n, k) }
    }

    /// Jet at p of a polynomial section.
    pub fn of_poly(z: &PolyMap<T>, xi: &PolyMap<T>, p: &[T]) -> Self {
        Self { z: z.eval(p), xi: xi.eval(p), dz: z.jacobian(p), dxi: xi.jacobian(p) }
    }

    /// f · s for f(p) = f0 + ⟨df, p − p0⟩ evaluated at p0.
    pub fn times(&self, f0: T, df: &[T]) -> Self {
        let outer = |v: &[T]| LinearMap::from_fn(v.len(), df.len(), |i, j| v[i] * df[j]);
        Self {
            z: self.z.iter().map(|&x| x * f0).collect(),
            xi: self.xi.iter().map(|&x| x * f0).collect(),
            dz: &self.dz.scale(f0) + &outer(&self.z),
            dxi: &self.dxi.scale(f0) + &outer(&self.xi),
        }
    }
}

fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

fn vdiff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
}

/// Matrices of ad_{sp} needed by T, θ and φ_p.
struct AdMats<T: Scalar> {
    a: LinearMap<T>,
    s: LinearMap<T>,
    sh: LinearMap<T>,
    ep: LinearMap<T>,
}

/// The trivialization T of N(U) for ℓcan, with the fiber algebroid data.
#[derive(Clone)]
pub struct Trivialization<T: Scalar> {
    pub field: LMatrixField<T>,
    pub dbl: DoubleAlgebra<T>,
    /// 𝔤★₀ in (𝔩, e^𝔪) coordinates.
    pub star0: LieAlgebra<T>,
}

impl<T: Scalar> Trivialization<T> {
    pub fn new(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition) -> Result<Self> {
        let field = LMatrixField::lcan(q, d)?;
        let k = d.l().len();
        let (v, _) = vertex_dual(&field, &vec![T::zero(); k])?;
        Ok(Self { dbl: build_double(q), star0: v.algebra, field })
    }

    fn n(&self) -> usize {
        self.field.dim()
    }

    fn k(&self) -> usize {
        self.field.p_dim()
    }

    fn l(&self) -> &[usize] {
        self.field.decomp.l()
    }

    fn m(&self) -> &[usize] {
        self.field.decomp.m()
    }

    fn ad_sp(&self, p: &[T]) -> LinearMap<T> {
        let n = self.n();
        let mut x = vec![T::zero(); 2 * n];
        for (j, &a) in self.l().iter().enumerate() {
            x[n + a] = p[j];
        }
        self.dbl.ad(&x)
    }

    fn guard(&self, p: &[T]) -> Result<()> {
        if !self.field.in_domain(p) {
            return Err(Error::OutOfDomain(format!("{:?}", self.field.status(p))));
        }
        Ok(())
    }

    fn mats(&self, p: &[T]) -> Result<AdMats<T>> {
        let m = self.ad_sp(p);
        Ok(AdMats {
            a: entire_series_apply(&PowerSeries::sinh_minus_z_over_z2(), &m)?,
            s: entire_series_apply(&PowerSeries::sinh_over_z(), &m)?,
            sh: entire_series_apply(&PowerSeries::sinh(), &m)?,
            ep: expm(&m)?,
        })
    }

    /// Derivatives of the same matrices along v ∈ 𝔩*.
    fn dmats(&self, p: &[T], v: &[T]) -> Result<AdMats<T>> {
        let m = self.ad_sp(p);
        let e = self.ad_sp(v);
        Ok(AdMats {
            a: entire_series_frechet(&PowerSeries::sinh_minus_z_over_z2(), &m, &e)?.1,
            s: entire_series_frechet(&PowerSeries::sinh_over_z(), &m, &e)?.1,
            sh: entire_series_frechet(&PowerSeries::sinh(), &m, &e)?.1,
            ep: expm_frechet(&m, &e)?.1,
        })
    }

    /// T as a (k+n)×(k+n) matrix from (α, 𝔤★₀ coords) to (𝔩, 𝔤*), built
    /// linearly from the matrices, plus the out-of-𝔩 leakage of its 𝔩 slot.
    fn t_from(&self, mm: &AdMats<T>) -> (LinearMap<T>, T) {
        let (n, k) = (self.n(), self.k());
        let (l, m) = (self.l().to_vec(), self.m().to_vec());
        let mut t = LinearMap::zeros(k + n, k + n);
        let mut leak = T::zero();
        let idx_l = |v: &[T]| l.iter().map(|&a| v[a]).collect::<Vec<T>>();
        let off_l = |v: &[T]| m.iter().map(|&c| v[c]).chain(v[n..].iter().copied()).fold(T::zero(), |a, x| a.max(x.abs()));
        for (j, &a) in l.iter().enumerate() {
            // α = e^j: (A sα, S sα)
            let ca = mm.a.column(n + a);
            let cs = mm.s.column(n + a);
            leak = leak.max(off_l(&ca));
            for (i, x) in idx_l(&ca).into_iter().enumerate() {
                t[(i, j)] = x;
            }
            for i in 0..n {
                t[(k + i, j)] = cs[n + i];
            }
            // z = e_a: (−S z, −sinh z)
            let sz = mm.s.column(a);
            let hz = mm.sh.column(a);
            leak = leak.max(off_l(&sz));
            for (i, x) in idx_l(&sz).into_iter().enumerate() {
                t[(i, k + j)] = -x;
            }
            for i in 0..n {
                t[(k + i, k + j)] = -hz[n + i];
            }
        }
        for (c, &u) in m.iter().enumerate() {
            // ξ = e^u: (0, −p_𝔤* e^{M} ξ)
            let col = mm.ep.column(n + u);
            for i in 0..n {
                t[(k + i, 2 * k + c)] = -col[n + i];
            }
        }
        (t, leak)
    }

    /// T_p and the leakage of its 𝔩-slot out of 𝔩.
    pub fn t_matrix(&self, p: &[T]) -> Result<(LinearMap<T>, T)> {
        self.guard(p)?;
        Ok(self.t_from(&self.mats(p)?))
    }

    pub fn t_derivative(&self, p: &[T], v: &[T]) -> Result<LinearMap<T>> {
        self.guard(p)?;
        Ok(self.t_from(&self.dmats(p, v)?).0)
    }

    /// T_p⁻¹(z, sα + ξ) = (α − ad*_z p, (sinh−ad)/(ad sinh) sα − z − (p_𝔤* Ad_{e^{sp}} i_𝔤*)⁻¹ ξ).
    pub fn t_inverse_matrix(&self, p: &[T]) -> Result<LinearMap<T>> {
        self.guard(p)?;
        let (n, k) = (self.n(), self.k());
        let (l, m) = (self.l().to_vec(), self.m().to_vec());
        let mm = self.mats(p)?;
        let s_lu = mm.s.lu().map_err(|_| Error::OutOfDomain("sinh ad_sp / ad_sp is singular".into()))?;
        let a_over_s = s_lu.solve_mat(&mm.a);
        let gd: Vec<usize> = (n..2 * n).collect();
        let blk = mm.ep.select(&gd, &gd);
        let blk_lu = blk.lu().map_err(|_| Error::OutOfDomain("p_g* Ad_{e^{sp}} i_g* is singular".into()))?;
        let mut t = LinearMap::zeros(k + n, k + n);
        // input z = e_{l_j}
        for j in 0..k {
            let dir = coad_direction(&self.field.q.g, &self.field.decomp, l[j], p);
            for i in 0..k {
                t[(i, j)] = -dir[i];
            }
            t[(k + j, j)] = -T::one();
        }
        // input covector e^a
        for a in 0..n {
            if let Some(j) = l.iter().position(|&x| x == a) {
                t[(j, k + a)] = T::one();
                let col = a_over_s.column(n + a);
                for (i, &b) in l.iter().enumerate() {
                    t[(k + i, k + a)] = col[b];
                }
            } else {
                let mut e = vec![T::zero(); n];
                e[a] = T::one();
                let y = blk_lu.solve(&e);
                for (c, &u) in m.iter().enumerate() {
                    t[(2 * k + c, k + a)] = -y[u];
                }
            }
        }
        Ok(t)
    }

    /// ‖T_p T_p⁻¹ − 1‖ together with ‖T_p⁻¹T_p − 1‖.
    pub fn inverse_residual(&self, p: &[T]) -> Result<T> {
        let (t, _) = self.t_matrix(p)?;
        let ti = self.t_inverse_matrix(p)?;
        let id = LinearMap::identity(t.rows());
        Ok((&t * &ti).max_diff(&id).max((&ti * &t).max_diff(&id)))
    }

    pub fn anchor(&self, p: &[T], z: &[T], xi: &[T]) -> Vec<T> {
        let k = self.k();
        let mut out: Vec<T> = self.l().iter().map(|&a| xi[a]).collect();
        for (j, &a) in self.l().iter().enumerate() {
            if z[j] != T::zero() {
                let dir = coad_direction(&self.field.q.g, &self.field.decomp, a, p);
                for i in 0..k {
                    out[i] -= z[j] * dir[i];
                }
            }
        }
        out
    }

    fn embed_l(&self, z: &[T]) -> Vec<T> {
        let mut v = vec![T::zero(); self.n()];
        for (j, &a) in self.l().iter().enumerate() {
            v[a] = z[j];
        }
        v
    }

    /// [s, s′]^{N(U)} at p from the 1-jets of both sections.
    pub fn nu_bracket(&self, p: &[T], s1: &NuJet<T>, s2: &NuJet<T>) -> Result<(Vec<T>, Vec<T>)> {
        let (l, ds) = self.field.jet(p)?;
        let q = &self.field.q;
        let n = self.n();
        let a1 = self.anchor(p, &s1.z, &s1.xi);
        let a2 = self.anchor(p, &s2.z, &s2.xi);
        let z1 = self.embed_l(&s1.z);
        let z2 = self.embed_l(&s2.z);
        // 𝔩 slot
        let br = q.g.bracket(&z1, &z2);
        let d21 = s2.dz.apply(&a1);
        let d12 = s1.dz.apply(&a2);
        let top: Vec<T> = (0..self.k())
            .map(|j| d21[j] - d12[j] - br[self.l()[j]] + crate::linalg::dot(&s1.xi, &ds[j].apply(&s2.xi)))
            .collect();
        // 𝔤* slot
        let l1 = l.apply(&s1.xi);
        let l2 = l.apply(&s2.xi);
        let e21 = s2.dxi.apply(&a1);
        let e12 = s1.dxi.apply(&a2);
        let t1 = q.g.ad(&z1).apply_transpose(&s2.xi);
        let t2 = q.g.ad(&z2).apply_transpose(&s1.xi);
        let w = q.varpi_pair(&s1.xi, &s2.xi);
        let t3 = q.g.ad(&l1).apply_transpose(&s2.xi);
        let t4 = q.g.ad(&l2).apply_transpose(&s1.xi);
        let bot: Vec<T> = (0..n).map(|i| e21[i] - e12[i] + t1[i] - t2[i] + w[i] + t3[i] - t4[i]).collect();
        Ok((top, bot))
    }

    /// Jet of T applied to a trivial-algebroid section (X, x) given by its jet.
    fn t_jet(&self, p: &[T], x: &[T], dx: &LinearMap<T>) -> Result<NuJet<T>> {
        let (k, n) = (self.k(), self.n());
        let (t, _) = self.t_matrix(p)?;
        let val = t.apply(x);
        let mut dz = LinearMap::zeros(k, k);
        let mut dxi = LinearMap::zeros(n, k);
        for j in 0..k {
            let mut e = vec![T::zero(); k];
            e[j] = T::one();
            let dt = self.t_derivative(p, &e)?;
            let col: Vec<T> = (0..k + n).map(|i| dt.row(i).iter().zip(x).fold(T::zero(), |s, (a, b)| s + *a * *b)).collect();
            let tc = t.apply(&dx.column(j));
            for i in 0..k {
                dz[(i, j)] = col[i] + tc[i];
            }
            for i in 0..n {
                dxi[(i, j)] = col[k + i] + tc[k + i];
            }
        }
        Ok(NuJet { z: val[..k].to_vec(), xi: val[k..].to_vec(), dz, dxi })
    }

    /// Jet at p of T applied to the polynomial section (X, x) of U × 𝔩* × 𝔤★₀.
    pub fn t_section_jet(&self, p: &[T], s: &TrivialSection<T>) -> Result<NuJet<T>> {
        let mut v = s.x.eval(p);
        v.extend(s.v.eval(p));
        let jac = s.x.jacobian(p).vstack(&s.v.jacobian(p));
        self.t_jet(p, &v, &jac)
    }

    /// Trivial-algebroid bracket ([X,X′], X·x′ − X′·x + [x,x′]★₀) at p.
    pub fn trivial_bracket(&self, p: &[T], s1: &TrivialSection<T>, s2: &TrivialSection<T>) -> Vec<T> {
        let (x1, x2) = (s1.x.eval(p), s2.x.eval(p));
        let vf: Vec<T> = crate::linalg::vsub(&s2.x.jacobian(p).apply(&x1), &s1.x.jacobian(p).apply(&x2));
        let br = self.star0.bracket(&s1.v.eval(p), &s2.v.eval(p));
        let d21 = s2.v.jacobian(p).apply(&x1);
        let d12 = s1.v.jacobian(p).apply(&x2);
        let mut out = vf;
        out.extend((0..self.n()).map(|i| d21[i] - d12[i] + br[i]));
        out
    }

    /// max of bracket- and anchor-morphism residuals of T over section pairs.
    pub fn morphism_residuals(&self, p: &[T], sections: &[TrivialSection<T>]) -> Result<(T, T)> {
        let k = self.k();
        let jets: Vec<NuJet<T>> = sections.iter().map(|s| self.t_section_jet(p, s)).collect::<Result<_>>()?;
        let (t, _) = self.t_matrix(p)?;
        let mut br = T::zero();
        let mut an = T::zero();
        for (i, si) in sections.iter().enumerate() {
            an = an.max(vdiff(&self.anchor(p, &jets[i].z, &jets[i].xi), &si.x.eval(p)));
            for (j, sj) in sections.iter().enumerate() {
                let lhs = t.apply(&self.trivial_bracket(p, si, sj));
                let (a, b) = self.nu_bracket(p, &jets[i], &jets[j])?;
                br = br.max(vdiff(&lhs[..k], &a)).max(vdiff(&lhs[k..], &b));
            }
        }
        Ok((br, an))
    }

    /// θ(p, α) as a jet, for a constant α.
    pub fn theta_jet(&self, p: &[T], alpha: &[T]) -> Result<NuJet<T>> {
        self.guard(p)?;
        let (k, n) = (self.k(), self.n());
        let mut sa = vec![T::zero(); 2 * n];
        for (j, &a) in self.l().iter().enumerate() {
            sa[n + a] = alpha[j];
        }
        let pick = |a: &LinearMap<T>, s: &LinearMap<T>| -> (Vec<T>, Vec<T>) {
            let va = a.apply(&sa);
            let vs = s.apply(&sa);
            (self.l().iter().map(|&x| va[x]).collect(), vs[n..].to_vec())
        };
        let mm = self.mats(p)?;
        let (z, xi) = pick(&mm.a, &mm.s);
        let mut dz = LinearMap::zeros(k, k);
        let mut dxi = LinearMap::zeros(n, k);
        for j in 0..k {
            let mut e = vec![T::zero(); k];
            e[j] = T::one();
            let dm = self.dmats(p, &e)?;
            let (a, b) = pick(&dm.a, &dm.s);
            dz.set_column(j, &a);
            dxi.set_column(j, &b);
        }
        Ok(NuJet { z, xi, dz, dxi })
    }

    /// Anchor, flatness and ψ-compatibility residuals of θ at p.
    pub fn theta_report(&self, p: &[T], alphas: &[Vec<T>], xs: &[PolyMap<T>]) -> Result<Report> {
        let k = self.k();
        let thetas: Vec<NuJet<T>> = alphas.iter().map(|a| self.theta_jet(p, a)).collect::<Result<_>>()?;
        let mut anchor = T::zero();
        let mut flat = T::zero();
        let mut compat = T::zero();
        for (a, th) in alphas.iter().zip(&thetas) {
            anchor = anchor.max(vdiff(&self.anchor(p, &th.z, &th.xi), a));
            for th2 in &thetas {
                let (u, v) = self.nu_bracket(p, th, th2)?;
                flat = flat.max(max_abs(&u)).max(max_abs(&v));
            }
            for x in xs {
                // [θα, ψX] = ψ(dX(α)) with ψX = T(0, X)
                let sec = TrivialSection { x: PolyMap::zero(k, k), v: x.clone() };
                let psi = self.t_section_jet(p, &sec)?;
                let (u, v) = self.nu_bracket(p, th, &psi)?;
                let mut dxa = vec![T::zero(); k];
                dxa.extend(x.jacobian(p).apply(a));
                let want = self.t_matrix(p)?.0.apply(&dxa);
                compat = compat.max(vdiff(&u, &want[..k])).max(vdiff(&v, &want[k..]));
            }
        }
        let mut r = Report::new();
        r.push(Check::at_most("theta anchor", anchor.as_f64(), 1e-12));
        r.push(Check::at_most("theta flatness", flat.as_f64(), 1e-9));
        r.push(Check::at_most("theta psi compatibility", compat.as_f64(), 1e-9));
        Ok(r)
    }

    /// φ_p = Ad_{e^{−sp}} τ_{l_p} from 𝔤★_p (vertex-dual basis) to 𝔤★₀ coordinates.
    pub fn phi_p(&self, p: &[T]) -> Result<(LinearMap<T>, Report)> {
        self.guard(p)?;
        let (n, k) = (self.n(), self.k());
        let (vp, _) = vertex_dual(&self.field, p)?;
        let lp = &vp.l_q0;
        let m = self.ad_sp(p);
        let em = expm(&-&m)?;
        let mm = self.mats(p)?;
        let s_lu = mm.s.lu().map_err(|_| Error::OutOfDomain("sinh ad_sp / ad_sp is singular".into()))?;
        let gd: Vec<usize> = (n..2 * n).collect();
        let blk = mm.ep.select(&gd, &gd);
        let mut out = LinearMap::zeros(n, n);
        let mut leak = T::zero();
        let mut display = T::zero();
        for j in 0..n {
            let x = vp.basis.column(j);
            let lx = lp.apply(&x[n..]);
            let mut tau = x.clone();
            for i in 0..n {
                tau[i] += lx[i];
            }
            let y = em.apply(&tau);
            for (i, &a) in self.l().iter().enumerate() {
                out[(i, j)] = y[a];
                leak = leak.max(y[n + a].abs());
            }
            for (c, &u) in self.m().iter().enumerate() {
                out[(k + c, j)] = y[n + u];
                leak = leak.max(y[u].abs());
            }
            // closed-form images: (ad/sinh ad) z and (p_𝔤* Ad_{e^{sp}} i_𝔤*)⁻¹ ξ
            let want = if j < k {
                let mut e = vec![T::zero(); 2 * n];
                e[self.l()[j]] = T::one();
                s_lu.solve(&e)
            } else {
                let mut e = vec![T::zero(); n];
                e[self.m()[j - k]] = T::one();
                let sol = blk.solve(&e).map_err(|_| Error::OutOfDomain("p_g* Ad_{e^{sp}} i_g* is singular".into()))?;
                let mut v = vec![T::zero(); n];
                v.extend(sol);
                v
            };
            display = display.max(vdiff(&y, &want));
        }
        let mut r = Report::new();
        r.push(Check::at_most("image in l + l^perp", leak.as_f64(), 1e-10));
        r.push(Check::at_most("closed-form images", display.as_f64(), 1e-10));
        r.push(Check::at_most("intertwining", bracket_morphism_residual(&out, &vp.algebra, &self.star0).as_f64(), 1e-9));
        Ok((out, r))
    }
}

/// A section (X, x) of U × 𝔩* × 𝔤★₀ with polynomial components.
#[derive(Clone, Debug)]
pub struct TrivialSection<T: Scalar> {
    pub x: PolyMap<T>,
    pub v: PolyMap<T>,
}

/// Constant and degree-1 monomial sections: (e_j, 0), (p_i e_j, 0), (0, e_c), (0, p_i e_c).
pub fn section_basis<T: Scalar>(k: usize, n: usize) -> Vec<TrivialSection<T>> {
    let mut out = Vec::new();
    let unit = |len: usize, i: usize| {
        let mut v = vec![T::zero(); len];
        v[i] = T::one();
        v
    };
    let mono = |i: Option<usize>| {
        let mut e = vec![0u32; k];
        if let Some(i) = i {
            e[i] = 1;
        }
        e
    };
    for deg in std::iter::once(None).chain((0..k).map(Some)) {
        for j in 0..k {
            let mut x = PolyMap::zero(k, k);
            x.push(mono(deg), unit(k, j));
            out.push(TrivialSection { x, v: PolyMap::zero(k, n) });
        }
        for c in 0..n {
            let mut v = PolyMap::zero(k, n);
            v.push(mono(deg), unit(n, c));
            out.push(TrivialSection { x: PolyMap::zero(k, k), v });
        }
    }
    out
}

/// −T*_p(α, z+u) = (A sα − S z, S sα − sinh z + p_𝔤 Ad_{e^{−sp}} u) with the
/// second slot as a vector of 𝔡, on inputs (α, z, u) ∈ 𝔩* × 𝔩 × 𝔪.
fn minus_t_star<T: Scalar>(tr: &Trivialization<T>, p: &[T]) -> Result<(LinearMap<T>, LinearMap<T>)> {
    let (n, k) = (tr.n(), tr.k());
    let (l, m) = (tr.l().to_vec(), tr.m().to_vec());
    let mm = tr.mats(p)?;
    let em = expm(&-&tr.ad_sp(p))?;
    let mut top = LinearMap::zeros(k, k + n);
    let mut bot = LinearMap::zeros(2 * n, k + n);
    for (j, &a) in l.iter().enumerate() {
        let ca = mm.a.column(n + a);
        let cs = mm.s.column(n + a);
        let sz = mm.s.column(a);
        let hz = mm.sh.column(a);
        for (i, &b) in l.iter().enumerate() {
            top[(i, j)] = ca[b];
            top[(i, k + j)] = -sz[b];
        }
        for i in 0..2 * n {
            bot[(i, j)] = cs[i];
            bot[(i, k + j)] = -hz[i];
        }
    }
    for (c, &u) in m.iter().enumerate() {
        let col = em.column(u);
        for i in 0..n {
            bot[(i, 2 * k + c)] = col[i];
        }
    }
    Ok((top, bot))
}

/// max over samples of ‖−T*_p ∘ ôp − T★_p‖ under the canonical identification 𝔡★ ≃ 𝔡.
pub fn duality_theorem_check<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, samples: &[Vec<T>]) -> Result<T> {
    let (n, k) = (q.dim(), d.l().len());
    let tr = Trivialization::new(q, d)?;
    let (qs, ds) = dual_qbia(q, d)?;
    let trs = Trivialization::new(&qs, &ds)?;
    // (𝔤★)* coordinate j ↦ e^{l_j} for j < k and e_{m_{j−k}} for j ≥ k
    let ident = LinearMap::from_fn(2 * n, n, |i, j| {
        let target = if j < k { n + d.l()[j] } else { d.m()[j - k] };
        if i == target {
            T::one()
        } else {
            T::zero()
        }
    });
    let mut op = LinearMap::identity(k + n);
    for c in 0..n - k {
        op[(2 * k + c, 2 * k + c)] = -T::one();
    }
    let mut worst = T::zero();
    for p in samples {
        let (top, bot) = minus_t_star(&tr, p)?;
        let (ts, _) = trs.t_matrix(p)?;
        let top = &top * &op;
        let bot = &bot * &op;
        let ts_top = ts.block(0, 0, k, k + n);
        let ts_bot = &ident * &ts.block(k, 0, n, k + n);
        worst = worst.max(top.max_diff(&ts_top)).max(bot.max_diff(&ts_bot));
    }
    Ok(worst)
}

/// Orthonormal basis of the column space of a.
fn column_space<T: Scalar>(a: &LinearMap<T>, tol: T) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    for j in 0..a.cols() {
        let mut v = a.column(j);
        for _ in 0..2 {
            for b in &basis {
                let c = crate::linalg::dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * *y;
                }
            }
        }
        let nv = crate::linalg::vnorm2(&v);
        if nv > tol {
            basis.push(v.iter().map(|&x| x / nv).collect());
        }
    }
    basis
}

/// Outcome of the symmetric-space duality at the Lie algebra level.
#[derive(Clone, Debug)]
pub struct SymmetricDual<T: Scalar> {
    /// G = G_(𝔤^ℂ, 𝔤, i𝔤) in a basis adapted to σ (𝔨 first).
    pub q: QuasiBialgebra<T>,
    pub decomp: ReductiveDecomposition,
    pub dual: QuasiBialgebra<T>,
    /// Killing signatures (positive, negative, zero).
    pub signature_g: (usize, usize, usize),
    pub signature_dual: (usize, usize, usize),
    pub dual_semisimple: bool,
    pub report: Report,
}

/// 𝔤^ℂ as a real algebra with basis (e_i, i e_i) and pairing Im B.
pub fn complexification<T: Scalar>(g: &LieAlgebra<T>) -> (LieAlgebra<T>, LinearMap<T>) {
    let n = g.dim();
    let c = g.structure();
    let mut cd = Tensor3::cube(2 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = c[(i, j, k)];
                cd[(i, j, k)] = v;
                cd[(n + i, n + j, k)] = -v;
                cd[(i, n + j, n + k)] = v;
                cd[(n + i, j, n + k)] = v;
            }
        }
    }
    let names = g.names().iter().cloned().chain(g.names().iter().map(|s| format!("i{s}"))).collect();
    let b = g.killing_form();
    let z = LinearMap::zeros(n, n);
    (LieAlgebra::from_tensor_raw(names, cd), LinearMap::from_blocks(&z, &b, &b, &z))
}

pub fn symmetric_dual<T: Scalar>(g: &LieAlgebra<T>, sigma: &LinearMap<T>) -> Result<SymmetricDual<T>> {
    if !g.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let n = g.dim();
    let inv = (sigma * sigma).max_diff(&LinearMap::identity(n));
    let aut = bracket_morphism_residual(sigma, g, g);
    if inv.max(aut) > T::lit(STRUCT_TOL) {
        return Err(Error::NotInvolution(inv.max(aut).as_f64()));
    }
    let half = T::lit(0.5);
    let plus = (&LinearMap::identity(n) + sigma).scale(half);
    let minus = (&LinearMap::identity(n) - sigma).scale(half);
    let tol = T::lit(1e-8);
    let kb = column_space(&plus, tol);
    let pb = column_space(&minus, tol);
    let k = kb.len();
    let cols: Vec<Vec<T>> = kb.into_iter().chain(pb).collect();
    let w = LinearMap::from_columns(n, &cols);
    let names: Vec<String> = (0..n).map(|j| if j < k { format!("k{j}") } else { format!("p{}", j - k) }).collect();
    let ga = g.change_basis(&w)?.with_names(names);
    let decomp = ReductiveDecomposition::new(n, (0..k).collect(), (k..n).collect())?;
    let (dc, pairing) = complexification(&ga);
    let mq = ManinQuasiTriple {
        d: &dc,
        pairing: &pairing,
        g_basis: crate::qbia::basis_columns(2 * n, &(0..n).collect::<Vec<_>>()),
        h_basis: crate::qbia::basis_columns(2 * n, &(n..2 * n).collect::<Vec<_>>()),
    };
    let q = quasi_triple_extract(&mq, Some(ga.names().to_vec()))?.with_decomp(decomp.clone());
    let target = omega_bracket(&ga, &ga.killing_form())?.scale(-T::one());
    let (dual, _) = dual_qbia(&q, &decomp)?;
    let stol = T::lit(1e-9);
    let signature_g = signature(&ga.killing_form(), stol)?;
    let signature_dual = signature(&dual.g.killing_form(), stol)?;
    let dual_semisimple = dual.g.is_semisimple();
    let mut report = Report::new();
    report.push(Check::at_most("cocommutative", q.varpi.norm_max().as_f64(), STRUCT_TOL));
    report.push(Check::at_most("phi = -<Omega,Omega>", q.phi.max_diff(&target).as_f64(), STRUCT_TOL));
    report.extend(check_quasi_bialgebra(&dual));
    report.push(Check::at_most("dual semisimple", if dual_semisimple { 0.0 } else { 1.0 }, 0.0));
    Ok(SymmetricDual { q, decomp, dual, signature_g, signature_dual, dual_semisimple, report })
}

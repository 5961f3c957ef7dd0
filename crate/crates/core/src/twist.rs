//! Twists G ↦ G^t by skew maps t : 𝔤* → 𝔤.

use crate::error::{Error, Result};
use crate::lie::ReductiveDecomposition;
use crate::linalg::{LinearMap, Tensor3};
use crate::qbia::{bracket_morphism_residual, build_double, jacobi_1_residual_tensor, QuasiBialgebra, STRUCT_TOL};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

/// Skew map 𝔤* → 𝔤.
#[derive(Clone, Debug)]
pub struct Twist<T: Scalar> {
    t: LinearMap<T>,
}

impl<T: Scalar> Twist<T> {
    pub fn new(t: LinearMap<T>) -> Result<Self> {
        let r = t.skew_residual();
        if !(r <= T::lit(1e-12) * T::one().max(t.norm_max())) {
            return Err(Error::NotSkew(r.as_f64()));
        }
        Ok(Self { t })
    }

    pub fn zero(n: usize) -> Self {
        Self { t: LinearMap::zeros(n, n) }
    }

    pub fn matrix(&self) -> &LinearMap<T> {
        &self.t
    }

    pub fn neg(&self) -> Self {
        Self { t: -&self.t }
    }
}

/// ϖ^t_x = ϖ_x + ad_x t + t ad_xᵀ and
/// φ^t(ξ,η,ζ) = φ(ξ,η,ζ) + Cycl ⟨ζ, [tξ, tη] + ϖ_{tξ} η⟩.
pub fn apply_twist<T: Scalar>(q: &QuasiBialgebra<T>, t: &LinearMap<T>) -> Result<QuasiBialgebra<T>> {
    let t = Twist::new(t.clone())?;
    Ok(twist_unchecked(q, t.matrix()))
}

/// Same formulas without the skewness gate.
pub fn twist_unchecked<T: Scalar>(q: &QuasiBialgebra<T>, t: &LinearMap<T>) -> QuasiBialgebra<T> {
    let n = q.dim();
    let mut varpi = q.varpi.clone();
    for i in 0..n {
        let ad = q.g.ad_basis(i);
        let ex = &(&ad * t) + &(t * &ad.transpose());
        for j in 0..n {
            for k in 0..n {
                varpi[(i, j, k)] += ex[(j, k)];
            }
        }
    }
    let tcols: Vec<Vec<T>> = (0..n).map(|a| t.column(a)).collect();
    // u[(a, b, c)] = ⟨e^c, [t e^a, t e^b] + ϖ_{t e^a} e^b⟩
    let mut u = Tensor3::cube(n);
    for a in 0..n {
        let wa = q.varpi_at(&tcols[a]);
        for b in 0..n {
            let br = q.g.bracket(&tcols[a], &tcols[b]);
            for c in 0..n {
                u[(a, b, c)] = br[c] + wa[(c, b)];
            }
        }
    }
    let mut phi = q.phi.clone();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                phi[(a, b, c)] += u[(a, b, c)] + u[(b, c, a)] + u[(c, a, b)];
            }
        }
    }
    QuasiBialgebra { g: q.g.clone(), varpi, phi: phi.with_alternating_flag(true), decomp: q.decomp.clone() }
}

/// τ_t(x + ξ) = x + tξ + ξ, from the double of G^t to the double of G.
pub fn tau_map<T: Scalar>(t: &LinearMap<T>) -> LinearMap<T> {
    let n = t.rows();
    let mut m = LinearMap::identity(2 * n);
    m.set_block(0, n, t);
    m
}

/// Intertwining, isometry and inverse residuals of τ_t.
pub fn tau_residuals<T: Scalar>(q: &QuasiBialgebra<T>, t: &LinearMap<T>) -> Report {
    let n = q.dim();
    let d = build_double(q);
    let dt = build_double(&twist_unchecked(q, t));
    let tau = tau_map(t);
    let iso = (&(&tau.transpose() * &d.pairing) * &tau).max_diff(&dt.pairing);
    let inv = (&tau * &tau_map(&-t)).max_diff(&LinearMap::identity(2 * n));
    let mut r = Report::new();
    r.push(Check::at_most("tau bracket", bracket_morphism_residual(&tau, &dt.d, &d.d).as_f64(), STRUCT_TOL));
    r.push(Check::at_most("tau isometry", iso.as_f64(), STRUCT_TOL));
    r.push(Check::at_most("tau inverse", inv.as_f64(), STRUCT_TOL));
    r
}

/// max over basis (x, ξ, η, ζ) of the change of the first Jacobi expression under the twist.
pub fn first_condition_invariance<T: Scalar>(q: &QuasiBialgebra<T>, t: &LinearMap<T>) -> T {
    let a = jacobi_1_residual_tensor(q);
    let b = jacobi_1_residual_tensor(&twist_unchecked(q, t));
    a.iter().zip(&b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
}

/// Membership of t in the moduli variety M_{G,𝔩,𝔪}.
pub fn moduli_membership<T: Scalar>(q: &QuasiBialgebra<T>, d: &ReductiveDecomposition, t: &LinearMap<T>) -> Report {
    let (l, m) = (d.l(), d.m());
    let n = q.dim();
    let mut r = Report::new();
    r.push(Check::at_most("t skew", t.skew_residual().as_f64(), 1e-12));
    // 𝔪^⊥ = span{e^b : b ∈ 𝔩}, 𝔩^⊥ = span{e^c : c ∈ 𝔪}
    let mut kills = T::zero();
    for i in 0..n {
        for &b in l {
            kills = kills.max(t[(i, b)].abs());
        }
    }
    let mut into_m = T::zero();
    for &a in l {
        for &c in m {
            into_m = into_m.max(t[(a, c)].abs());
        }
    }
    let mut eq = T::zero();
    for &z in l {
        let ad = q.g.ad_basis(z);
        eq = eq.max((&(&ad * t) + &(t * &ad.transpose())).norm_max());
    }
    let qt = twist_unchecked(q, t);
    let mut modl = T::zero();
    for &a in m {
        for &b in m {
            for &c in m {
                modl = modl.max(qt.phi[(a, b, c)].abs());
            }
        }
    }
    r.push(Check::at_most("t m^perp = 0", kills.as_f64(), STRUCT_TOL));
    r.push(Check::at_most("t l^perp in m", into_m.as_f64(), STRUCT_TOL));
    r.push(Check::at_most("t l-equivariant", eq.as_f64(), STRUCT_TOL));
    r.push(Check::at_most("phi^t = 0 mod l", modl.as_f64(), STRUCT_TOL));
    r
}

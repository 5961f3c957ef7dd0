mod common;

use common::sl2_cocommutative;
use lqb::duality::*;
use lqb::dynamics::{cdybe_residual, LMatrixField};
use lqb::error::Error;
use lqb::lie::{LieAlgebra, ReductiveDecomposition};
use lqb::linalg::LinearMap;
use lqb::poly::PolyMap;
use lqb::qbia::QuasiBialgebra;
use lqb::twist::apply_twist;

fn cartan() -> ReductiveDecomposition {
    ReductiveDecomposition::new(3, vec![0], vec![1, 2]).unwrap()
}

fn r_ef(s: f64) -> LinearMap<f64> {
    let mut t = LinearMap::zeros(3, 3);
    t[(2, 1)] = s;
    t[(1, 2)] = -s;
    t
}

fn entries() -> Vec<(QuasiBialgebra<f64>, ReductiveDecomposition)> {
    vec![
        (sl2_cocommutative(0.25), cartan()),
        (apply_twist(&sl2_cocommutative(0.25), &r_ef(0.5)).unwrap(), cartan()),
    ]
}

fn assert_report(r: &lqb::Report) {
    assert!(r.pass(), "{:?}", r.failures());
}

#[test]
fn abelian_dual_is_abelian() {
    let q = QuasiBialgebra::trivial(LieAlgebra::<f64>::abelian(3));
    let d = ReductiveDecomposition::leading(3, 1);
    let (s, _) = dual_qbia(&q, &d).unwrap();
    assert_eq!(s.g.structure().norm_max(), 0.0);
    assert_eq!(s.varpi.norm_max(), 0.0);
    assert_eq!(s.phi.norm_max(), 0.0);
    assert_eq!(double_dual_check(&q, &d).unwrap(), 0.0);
}

#[test]
fn dual_is_certified_and_double_dual_is_op() {
    for (q, d) in entries() {
        assert_report(&certify_dual(&q, &d).unwrap());
        let r = double_dual_check(&q, &d).unwrap();
        assert!(r <= 1e-10, "{r}");
    }
}

#[test]
fn dual_precondition() {
    // 𝔩 = span(e): φ = κ h∧e∧f is of type 𝔩𝔪𝔪, so the dual exists
    let d = ReductiveDecomposition::new(3, vec![1], vec![0, 2]).unwrap();
    assert!(dual_qbia(&sl2_cocommutative(0.25), &d).is_ok());
    // an 𝔪𝔪𝔪 associator is rejected
    let q3 = QuasiBialgebra::cocommutative(
        LieAlgebra::<f64>::abelian(3),
        lqb::linalg::Tensor3::alternating_from(3, &[(0, 1, 2, 1.0)]),
    )
    .unwrap();
    let d3 = ReductiveDecomposition::new(3, vec![], vec![0, 1, 2]).unwrap();
    assert!(matches!(dual_qbia(&q3, &d3), Err(Error::PreconditionFailed { .. })));
    // ϖ_𝔩 ≠ 0 is rejected
    let qt = apply_twist(&sl2_cocommutative(0.25), &r_ef(0.5)).unwrap();
    let de = ReductiveDecomposition::new(3, vec![1], vec![0, 2]).unwrap();
    assert!(matches!(dual_qbia(&qt, &de), Err(Error::PreconditionFailed { .. })));
}

#[test]
fn lcan_of_dual_solves_cdybe() {
    for (q, d) in entries() {
        let (s, ds) = dual_qbia(&q, &d).unwrap();
        let f = LMatrixField::lcan(&s, &ds).unwrap();
        for p in [0.3, -0.6] {
            assert_report(&cdybe_residual(&f, &[p], 1e-8).unwrap());
        }
    }
}

#[test]
fn trivialization_inverse_and_p0() {
    for (q, d) in entries() {
        let tr = Trivialization::new(&q, &d).unwrap();
        let (t0, _) = tr.t_matrix(&[0.0]).unwrap();
        // T_0(α, z+ξ) = (−z, sα − ξ)
        let mut want = LinearMap::zeros(4, 4);
        want[(0, 1)] = -1.0;
        want[(1, 0)] = 1.0;
        want[(2, 2)] = -1.0;
        want[(3, 3)] = -1.0;
        assert!(t0.max_diff(&want) <= 1e-14, "{:?}", t0);
        for p in [0.35, -0.9] {
            let (_, leak) = tr.t_matrix(&[p]).unwrap();
            assert!(leak <= 1e-10);
            assert!(tr.inverse_residual(&[p]).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn trivialization_is_algebroid_morphism() {
    for (q, d) in entries() {
        let tr = Trivialization::new(&q, &d).unwrap();
        let secs = section_basis::<f64>(1, 3);
        for p in [0.35, -0.9] {
            let (br, an) = tr.morphism_residuals(&[p], &secs).unwrap();
            assert!(br <= 1e-8, "bracket {br}");
            assert!(an <= 1e-14, "anchor {an}");
        }
    }
}

#[test]
fn nu_bracket_basic_properties() {
    let (q, d) = entries().remove(1);
    let tr = Trivialization::new(&q, &d).unwrap();
    let p = [0.4];
    let a = NuJet::of_poly(&PolyMap::constant(1, vec![0.7]), &PolyMap::constant(1, vec![0.1, -0.3, 0.5]), &p);
    let mut zl = PolyMap::zero(1, 1);
    zl.push(vec![1], vec![1.0]);
    let mut xl = PolyMap::zero(1, 3);
    xl.push(vec![1], vec![0.2, 0.9, -0.4]);
    xl.push(vec![0], vec![0.0, 0.3, 0.0]);
    let b = NuJet::of_poly(&zl, &xl, &p);
    let (u1, v1) = tr.nu_bracket(&p, &a, &b).unwrap();
    let (u2, v2) = tr.nu_bracket(&p, &b, &a).unwrap();
    for (x, y) in u1.iter().chain(&v1).zip(u2.iter().chain(&v2)) {
        assert!((x + y).abs() <= 1e-12);
    }
    // Leibniz: [a, f b] = f [a, b] + (a(a)·df) b
    let (f0, df) = (1.3, [0.8]);
    let fb = b.times(f0, &df);
    let (u3, v3) = tr.nu_bracket(&p, &a, &fb).unwrap();
    let anc = tr.anchor(&p, &a.z, &a.xi);
    let af = anc[0] * df[0];
    for (i, &x) in u3.iter().enumerate() {
        assert!((x - (f0 * u1[i] + af * b.z[i])).abs() <= 1e-10);
    }
    for (i, &x) in v3.iter().enumerate() {
        assert!((x - (f0 * v1[i] + af * b.xi[i])).abs() <= 1e-10);
    }
    // anchor is i*ξ − ad*_z p; on the abelian 𝔩 = ℝh the coadjoint term vanishes
    assert!((anc[0] - 0.1).abs() <= 1e-15);
}

#[test]
fn theta_is_flat_and_compatible() {
    for (q, d) in entries() {
        let tr = Trivialization::new(&q, &d).unwrap();
        let mut lin = PolyMap::zero(1, 3);
        lin.push(vec![1], vec![0.5, -0.2, 0.7]);
        let xs = vec![PolyMap::constant(1, vec![1.0, 0.0, 0.0]), PolyMap::constant(1, vec![0.0, 1.0, 0.0]), lin];
        for p in [0.35, -0.9] {
            assert_report(&tr.theta_report(&[p], &[vec![1.0], vec![-0.4]], &xs).unwrap());
        }
        let th = tr.theta_jet(&[0.0], &[1.0]).unwrap();
        assert!(th.z[0].abs() <= 1e-15 && (th.xi[0] - 1.0).abs() <= 1e-15);
    }
}

#[test]
fn phi_p_is_isomorphism() {
    for (q, d) in entries() {
        let tr = Trivialization::new(&q, &d).unwrap();
        let (id, _) = tr.phi_p(&[0.0]).unwrap();
        assert!(id.max_diff(&LinearMap::identity(3)) <= 1e-14);
        for p in [0.35, -0.9] {
            assert_report(&tr.phi_p(&[p]).unwrap().1);
        }
    }
}

#[test]
fn duality_identity() {
    let samples: Vec<Vec<f64>> = (0..10).map(|i| vec![-1.2 + 0.25 * i as f64]).collect();
    for (q, d) in entries() {
        let r = duality_theorem_check(&q, &d, &samples).unwrap();
        assert!(r <= 1e-9, "{r}");
    }
    let q = QuasiBialgebra::trivial(LieAlgebra::<f64>::abelian(2));
    let d = ReductiveDecomposition::leading(2, 1);
    assert_eq!(duality_theorem_check(&q, &d, &[vec![0.3]]).unwrap(), 0.0);
}

#[test]
fn symmetric_dual_sl2() {
    let g = LieAlgebra::<f64>::sl2();
    // Cartan involution X ↦ −Xᵀ: h ↦ −h, e ↦ −f, f ↦ −e
    let sigma = LinearMap::from_f64_rows(&[&[-1.0, 0.0, 0.0], &[0.0, 0.0, -1.0], &[0.0, -1.0, 0.0]]);
    let s = symmetric_dual(&g, &sigma).unwrap();
    assert_report(&s.report);
    assert_eq!(s.signature_g, (2, 1, 0));
    assert_eq!(s.signature_dual, (0, 3, 0));
    assert!(s.dual_semisimple);
    assert!(double_dual_check(&s.q, &s.decomp).unwrap() <= 1e-10);
    let samples: Vec<Vec<f64>> = (0..5).map(|i| vec![-0.8 + 0.4 * i as f64]).collect();
    assert!(duality_theorem_check(&s.q, &s.decomp, &samples).unwrap() <= 1e-9);
}

#[test]
fn symmetric_dual_identity_involution() {
    let g = LieAlgebra::<f64>::so3();
    let s = symmetric_dual(&g, &LinearMap::identity(3)).unwrap();
    assert!(s.decomp.m().is_empty());
    assert_eq!(s.signature_dual, s.signature_g);
    let b = s.dual.g.structure().max_diff(s.q.g.structure());
    assert!(b <= 1e-12, "{b}");
}

#[test]
fn symmetric_dual_errors() {
    let g = LieAlgebra::<f64>::sl2();
    let not_inv = LinearMap::diagonal(&[1.0, 2.0, 0.5]);
    assert!(matches!(symmetric_dual(&g, &not_inv), Err(Error::NotInvolution(_))));
    let ab = LieAlgebra::<f64>::abelian(2);
    assert!(matches!(symmetric_dual(&ab, &LinearMap::identity(2)), Err(Error::NotSemisimple)));
}

#[test]
fn exactness_of_cocycles() {
    let t = r_ef(0.5);
    let q = apply_twist(&sl2_cocommutative(0.25), &t).unwrap();
    let (t2, res) = exactness_residual(&q);
    assert!(res <= 1e-10);
    assert!(t2.max_diff(&t) <= 1e-10);
}

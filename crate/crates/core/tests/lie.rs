mod common;

use common::*;
use lqb::lie::{check_reductive, LieAlgebra, ReductiveDecomposition};
use lqb::linalg::{dot, LinearMap};
use proptest::prelude::*;

#[test]
fn abelian_bracket_vanishes() {
    let g = LieAlgebra::<f64>::abelian(4);
    let mut r = rng(0);
    let (x, y) = (random_vec(&mut r, 4, 1.0), random_vec(&mut r, 4, 1.0));
    assert!(g.bracket(&x, &y).iter().all(|&v| v == 0.0));
    assert_eq!(g.killing_form(), LinearMap::zeros(4, 4));
    assert!(!g.is_semisimple());
}

#[test]
fn sl2_table() {
    let g = LieAlgebra::<f64>::sl2();
    assert_eq!(g.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), vec![0.0, 2.0, 0.0]);
    assert_eq!(g.bracket(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]), vec![0.0, 0.0, -2.0]);
    assert_eq!(g.bracket(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]), vec![1.0, 0.0, 0.0]);
    let x = [0.3, -1.2, 0.7];
    assert!(g.bracket(&x, &x).iter().all(|v| v.abs() < 1e-16));
    assert!(g.jacobi_residual() == 0.0);
    assert!(g.is_semisimple());
}

#[test]
fn ad_h_is_diagonal() {
    let g = LieAlgebra::<f64>::sl2();
    assert_eq!(g.ad(&[1.0, 0.0, 0.0]), LinearMap::diagonal(&[0.0, 2.0, -2.0]));
    assert_eq!(g.ad(&[0.0; 3]), LinearMap::zeros(3, 3));
}

#[test]
fn sl2_killing_values() {
    let k = LieAlgebra::<f64>::sl2().killing_form();
    assert_eq!(k[(0, 0)], 8.0);
    assert_eq!(k[(1, 2)], 4.0);
    assert_eq!(k[(2, 1)], 4.0);
    assert_eq!(k[(1, 1)], 0.0);
    assert_eq!(k[(0, 1)], 0.0);
    let k3 = LieAlgebra::<f64>::so3().killing_form();
    assert_eq!(k3, LinearMap::diagonal(&[-2.0, -2.0, -2.0]));
}

#[test]
fn reductive_splits() {
    let g = LieAlgebra::<f64>::sl2();
    let cartan = ReductiveDecomposition::new(3, vec![0], vec![1, 2]).unwrap();
    assert!(check_reductive(&g, &cartan).pass());
    let borel_like = ReductiveDecomposition::new(3, vec![1], vec![0, 2]).unwrap();
    let rep = check_reductive(&g, &borel_like);
    // [e, f] = h ∈ 𝔪 is fine, [e, h] = −2e ∉ 𝔪 is not
    assert!(!rep.get("[l,m] in m").unwrap().pass);
    assert!(rep.get("l subalgebra").unwrap().pass);
    let ab = LieAlgebra::<f64>::abelian(3);
    assert!(check_reductive(&ab, &borel_like).pass());
    assert!(ReductiveDecomposition::new(3, vec![0, 1], vec![1, 2]).is_err());
}

#[test]
fn matrix_basis_recovers_sl2() {
    let h = LinearMap::from_f64_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let e = LinearMap::from_f64_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let f = LinearMap::from_f64_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let g = LieAlgebra::from_matrix_basis(vec!["h".into(), "e".into(), "f".into()], &[h, e, f]).unwrap();
    assert!(g.structure().max_diff(LieAlgebra::<f64>::sl2().structure()) <= 1e-14);
}

#[test]
fn change_basis_is_an_isomorphism() {
    let g = LieAlgebra::<f64>::sl2();
    let mut r = rng(3);
    let w = &LinearMap::identity(3) + &random_matrix(&mut r, 3, 0.5);
    let gw = g.change_basis(&w).unwrap();
    // w : gw → g is a bracket morphism
    assert!(lqb::qbia::bracket_morphism_residual(&w, &gw, &g) <= 1e-12);
    assert!(gw.jacobi_residual() <= 1e-12);
}

#[test]
fn bad_tables_rejected() {
    assert!(LieAlgebra::<f64>::from_brackets(vec!["a".into()], &[(0, 0, 0, 1.0)]).is_err());
    assert!(LieAlgebra::<f64>::from_brackets(vec!["a".into(), "b".into()], &[(0, 5, 0, 1.0)]).is_err());
    let mut c = lqb::linalg::Tensor3::<f64>::cube(2);
    c[(0, 1, 0)] = 1.0;
    assert!(LieAlgebra::from_tensor(vec!["a".into(), "b".into()], c).is_err());
}

#[test]
fn non_jacobi_table_detected() {
    // [e0,e1]=e2, [e1,e2]=e0, [e0,e2]=e0 breaks Jacobi
    let g = LieAlgebra::<f64>::from_brackets(
        vec!["a".into(), "b".into(), "c".into()],
        &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 0, 1.0)],
    )
    .unwrap();
    assert!(g.jacobi_residual() > 1e-3);
}

proptest! {
    #[test]
    fn coadjoint_is_minus_transpose(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let g = if seed % 2 == 0 { LieAlgebra::<f64>::sl2() } else { LieAlgebra::so3() };
        let (x, y, xi) = (random_vec(&mut r, 3, 1.0), random_vec(&mut r, 3, 1.0), random_vec(&mut r, 3, 1.0));
        let lhs = dot(&g.coad(&x).apply(&xi), &y) + dot(&xi, &g.bracket(&x, &y));
        prop_assert!(lhs.abs() <= 1e-13);
    }

    #[test]
    fn killing_invariance(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let g = if seed % 2 == 0 { LieAlgebra::<f64>::sl2() } else { LieAlgebra::so3() };
        let b = g.killing_form();
        prop_assert!(b.sym_residual() == 0.0);
        let (x, y, z) = (random_vec(&mut r, 3, 1.0), random_vec(&mut r, 3, 1.0), random_vec(&mut r, 3, 1.0));
        let v = dot(&g.bracket(&x, &y), &b.apply(&z)) + dot(&y, &b.apply(&g.bracket(&x, &z)));
        prop_assert!(v.abs() <= 1e-10);
    }

    #[test]
    fn bracket_bilinear_antisymmetric(seed in 0u64..10_000, s in -2.0f64..2.0) {
        let mut r = rng(seed);
        let g = LieAlgebra::<f64>::sl2();
        let (x, y, z) = (random_vec(&mut r, 3, 1.0), random_vec(&mut r, 3, 1.0), random_vec(&mut r, 3, 1.0));
        let xy = g.bracket(&x, &y);
        let yx = g.bracket(&y, &x);
        let sxz: Vec<f64> = x.iter().zip(&z).map(|(a, b)| s * a + b).collect();
        let lin = g.bracket(&sxz, &y);
        let zy = g.bracket(&z, &y);
        for k in 0..3 {
            prop_assert!((xy[k] + yx[k]).abs() <= 1e-14);
            prop_assert!((lin[k] - s * xy[k] - zy[k]).abs() <= 1e-12);
        }
    }
}

#![allow(dead_code)]

use lqb::linalg::{LinearMap, Tensor3};
use lqb::qbia::{omega_bracket, QuasiBialgebra};
use lqb::lie::LieAlgebra;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(r: &mut impl Rng, n: usize, s: f64) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-s..s)).collect()
}

pub fn random_matrix(r: &mut impl Rng, n: usize, s: f64) -> LinearMap<f64> {
    LinearMap::from_fn(n, n, |_, _| r.gen_range(-s..s))
}

pub fn random_skew(r: &mut impl Rng, n: usize, s: f64) -> LinearMap<f64> {
    let a = random_matrix(r, n, s);
    (&a - &a.transpose()).scale(0.5)
}

pub fn random_alternating(r: &mut impl Rng, n: usize, s: f64) -> Tensor3<f64> {
    let mut t = Tensor3::cube(n);
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                t.set_alternating(a, b, c, r.gen_range(-s..s));
            }
        }
    }
    t
}

/// (sl2, 0, κ⟨Ω,Ω⟩) with the Killing form.
pub fn sl2_cocommutative(kappa: f64) -> QuasiBialgebra<f64> {
    let g = LieAlgebra::<f64>::sl2();
    let om = omega_bracket(&g, &g.killing_form()).unwrap().scale(kappa);
    QuasiBialgebra::cocommutative(g, om).unwrap()
}

//! Vector-valued polynomials in a few real variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LinearMap;
use crate::scalar::Scalar;

/// One monomial: coefficient vector times Π p_i^{exps[i]}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial<T> {
    pub exps: Vec<u32>,
    pub coeff: Vec<T>,
}

/// Polynomial map ℝ^vars → ℝ^out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyMap<T> {
    vars: usize,
    out: usize,
    terms: Vec<Monomial<T>>,
}

fn pow_i<T: Scalar>(x: T, k: u32) -> T {
    let mut r = T::one();
    for _ in 0..k {
        r *= x;
    }
    r
}

impl<T: Scalar> PolyMap<T> {
    pub fn zero(vars: usize, out: usize) -> Self {
        Self { vars, out, terms: Vec::new() }
    }

    pub fn new(vars: usize, out: usize, terms: Vec<Monomial<T>>) -> Result<Self> {
        for t in &terms {
            if t.exps.len() != vars || t.coeff.len() != out {
                return Err(Error::DimensionMismatch(format!(
                    "monomial with {} exponents / {} coefficients, expected {vars} / {out}",
                    t.exps.len(),
                    t.coeff.len()
                )));
            }
        }
        Ok(Self { vars, out, terms })
    }

    /// p ↦ A p.
    pub fn linear(a: &LinearMap<T>) -> Self {
        let (out, vars) = (a.rows(), a.cols());
        let terms = (0..vars)
            .map(|j| {
                let mut exps = vec![0; vars];
                exps[j] = 1;
                Monomial { exps, coeff: a.column(j) }
            })
            .collect();
        Self { vars, out, terms }
    }

    pub fn constant(vars: usize, c: Vec<T>) -> Self {
        let out = c.len();
        Self { vars, out, terms: vec![Monomial { exps: vec![0; vars], coeff: c }] }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn terms(&self) -> &[Monomial<T>] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exps.iter().sum()).max().unwrap_or(0)
    }

    pub fn push(&mut self, exps: Vec<u32>, coeff: Vec<T>) {
        assert_eq!(exps.len(), self.vars);
        assert_eq!(coeff.len(), self.out);
        self.terms.push(Monomial { exps, coeff });
    }

    pub fn scale(&self, s: T) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Monomial { exps: t.exps.clone(), coeff: t.coeff.iter().map(|&c| c * s).collect() })
            .collect();
        Self { vars: self.vars, out: self.out, terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.vars, self.out), (o.vars, o.out));
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Self { vars: self.vars, out: self.out, terms }
    }

    /// Mixed partial ∂^{orders} of one monomial's scalar part at p.
    fn mono_partial(exps: &[u32], p: &[T], orders: &[u32]) -> T {
        let mut v = T::one();
        for i in 0..exps.len() {
            let (e, o) = (exps[i], orders[i]);
            if o > e {
                return T::zero();
            }
            let mut fall = T::one();
            for k in 0..o {
                fall *= T::count((e - k) as usize);
            }
            v *= fall * pow_i(p[i], e - o);
        }
        v
    }

    fn accumulate(&self, p: &[T], orders: &[u32], acc: &mut [T], w: T) {
        for t in &self.terms {
            let s = Self::mono_partial(&t.exps, p, orders) * w;
            if s != T::zero() {
                for (a, &c) in acc.iter_mut().zip(&t.coeff) {
                    *a += s * c;
                }
            }
        }
    }

    pub fn eval(&self, p: &[T]) -> Vec<T> {
        let mut acc = vec![T::zero(); self.out];
        self.accumulate(p, &vec![0; self.vars], &mut acc, T::one());
        acc
    }

    /// Jacobian, out × vars.
    pub fn jacobian(&self, p: &[T]) -> LinearMap<T> {
        let mut m = LinearMap::zeros(self.out, self.vars);
        for j in 0..self.vars {
            let mut o = vec![0; self.vars];
            o[j] = 1;
            let mut acc = vec![T::zero(); self.out];
            self.accumulate(p, &o, &mut acc, T::one());
            m.set_column(j, &acc);
        }
        m
    }

    /// Directional derivative of the jacobian: column j is ∂_v ∂_j f(p).
    pub fn jacobian_derivative(&self, p: &[T], v: &[T]) -> LinearMap<T> {
        let mut m = LinearMap::zeros(self.out, self.vars);
        for j in 0..self.vars {
            let mut acc = vec![T::zero(); self.out];
            for i in 0..self.vars {
                if v[i] == T::zero() {
                    continue;
                }
                let mut o = vec![0; self.vars];
                o[j] += 1;
                o[i] += 1;
                self.accumulate(p, &o, &mut acc, v[i]);
            }
            m.set_column(j, &acc);
        }
        m
    }

    pub fn directional(&self, p: &[T], v: &[T]) -> Vec<T> {
        self.jacobian(p).apply(v)
    }

    pub fn cast<U: Scalar>(&self) -> PolyMap<U> {
        PolyMap {
            vars: self.vars,
            out: self.out,
            terms: self
                .terms
                .iter()
                .map(|t| Monomial { exps: t.exps.clone(), coeff: t.coeff.iter().map(|c| U::lit(c.as_f64())).collect() })
                .collect(),
        }
    }
}

use num_complex::Complex;

use super::LinearMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 1-based square work array for the Hessenberg QR sweep.
struct Work<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Scalar> Work<T> {
    fn from(m: &LinearMap<T>) -> Self {
        let n = m.rows();
        let mut a = vec![T::zero(); (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                a[(i + 1) * (n + 1) + j + 1] = m[(i, j)];
            }
        }
        Self { n, a }
    }
    #[inline]
    fn g(&self, i: usize, j: usize) -> T {
        self.a[i * (self.n + 1) + j]
    }
    #[inline]
    fn s(&mut self, i: usize, j: usize, v: T) {
        let n = self.n;
        self.a[i * (n + 1) + j] = v;
    }
}

fn sign<T: Scalar>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Reduction to upper Hessenberg form by stabilised elimination.
fn elmhes<T: Scalar>(w: &mut Work<T>) {
    let n = w.n;
    if n < 3 {
        return;
    }
    for m in 2..n {
        let mut x = T::zero();
        let mut i = m;
        for j in m..=n {
            if w.g(j, m - 1).abs() > x.abs() {
                x = w.g(j, m - 1);
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = w.g(i, j);
                w.s(i, j, w.g(m, j));
                w.s(m, j, t);
            }
            for j in 1..=n {
                let t = w.g(j, i);
                w.s(j, i, w.g(j, m));
                w.s(j, m, t);
            }
        }
        if x != T::zero() {
            for i in (m + 1)..=n {
                let mut y = w.g(i, m - 1);
                if y != T::zero() {
                    y /= x;
                    w.s(i, m - 1, y);
                    for j in m..=n {
                        let v = w.g(i, j) - y * w.g(m, j);
                        w.s(i, j, v);
                    }
                    for j in 1..=n {
                        let v = w.g(j, m) + y * w.g(j, i);
                        w.s(j, m, v);
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i > j + 1 {
                w.s(i, j, T::zero());
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the shifted double-step QR iteration.
fn hqr<T: Scalar>(w: &mut Work<T>) -> Result<Vec<Complex<T>>> {
    let n = w.n;
    let mut wr = vec![T::zero(); n + 1];
    let mut wi = vec![T::zero(); n + 1];
    let mut anorm = T::zero();
    for i in 1..=n {
        for j in (if i > 1 { i - 1 } else { 1 })..=n {
            anorm += w.g(i, j).abs();
        }
    }
    let half = T::lit(0.5);
    let mut nn = n as isize;
    let mut t = T::zero();
    let (mut p, mut q, mut r);
    let (mut x, mut y, mut z);
    let mut wv;
    while nn >= 1 {
        let mut its = 0;
        let mut l: isize;
        loop {
            l = nn;
            while l >= 2 {
                let lu = l as usize;
                let mut s = w.g(lu - 1, lu - 1).abs() + w.g(lu, lu).abs();
                if s == T::zero() {
                    s = anorm;
                }
                if w.g(lu, lu - 1).abs() + s == s {
                    w.s(lu, lu - 1, T::zero());
                    break;
                }
                l -= 1;
            }
            let nnu = nn as usize;
            x = w.g(nnu, nnu);
            if l == nn {
                wr[nnu] = x + t;
                wi[nnu] = T::zero();
                nn -= 1;
            } else {
                y = w.g(nnu - 1, nnu - 1);
                wv = w.g(nnu, nnu - 1) * w.g(nnu - 1, nnu);
                if l == nn - 1 {
                    p = half * (y - x);
                    q = p * p + wv;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= T::zero() {
                        z = p + sign(z, p);
                        wr[nnu - 1] = x + z;
                        wr[nnu] = x + z;
                        if z != T::zero() {
                            wr[nnu] = x - wv / z;
                        }
                        wi[nnu - 1] = T::zero();
                        wi[nnu] = T::zero();
                    } else {
                        wr[nnu - 1] = x + p;
                        wr[nnu] = x + p;
                        wi[nnu - 1] = -z;
                        wi[nnu] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return Err(Error::EigenConvergence);
                    }
                    if its == 10 || its == 20 || its == 40 {
                        t += x;
                        for i in 1..=nnu {
                            let v = w.g(i, i) - x;
                            w.s(i, i, v);
                        }
                        let s = w.g(nnu, nnu - 1).abs() + w.g(nnu - 1, nnu - 2).abs();
                        x = T::lit(0.75) * s;
                        y = x;
                        wv = T::lit(-0.4375) * s * s;
                    }
                    its += 1;
                    let lu = l as usize;
                    let mut m = nnu - 2;
                    loop {
                        z = w.g(m, m);
                        r = x - z;
                        let s0 = y - z;
                        p = (r * s0 - wv) / w.g(m + 1, m) + w.g(m, m + 1);
                        q = w.g(m + 1, m + 1) - z - r - s0;
                        r = w.g(m + 2, m + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == lu {
                            break;
                        }
                        let u = w.g(m, m - 1).abs() * (q.abs() + r.abs());
                        let v = p.abs() * (w.g(m - 1, m - 1).abs() + z.abs() + w.g(m + 1, m + 1).abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nnu {
                        w.s(i, i - 2, T::zero());
                        if i != m + 2 {
                            w.s(i, i - 3, T::zero());
                        }
                    }
                    let mut k = m;
                    while k + 1 <= nnu {
                        if k != m {
                            p = w.g(k, k - 1);
                            q = w.g(k + 1, k - 1);
                            r = T::zero();
                            if k != nnu - 1 {
                                r = w.g(k + 2, k - 1);
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != T::zero() {
                            if k == m {
                                if l as usize != m {
                                    let v = -w.g(k, k - 1);
                                    w.s(k, k - 1, v);
                                }
                            } else {
                                w.s(k, k - 1, -s * x);
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nnu {
                                p = w.g(k, j) + q * w.g(k + 1, j);
                                if k != nnu - 1 {
                                    p += r * w.g(k + 2, j);
                                    let v = w.g(k + 2, j) - p * z;
                                    w.s(k + 2, j, v);
                                }
                                let v = w.g(k + 1, j) - p * y;
                                w.s(k + 1, j, v);
                                let v = w.g(k, j) - p * x;
                                w.s(k, j, v);
                            }
                            let mmin = if nnu < k + 3 { nnu } else { k + 3 };
                            for i in lu..=mmin {
                                p = x * w.g(i, k) + y * w.g(i, k + 1);
                                if k != nnu - 1 {
                                    p += z * w.g(i, k + 2);
                                    let v = w.g(i, k + 2) - p * r;
                                    w.s(i, k + 2, v);
                                }
                                let v = w.g(i, k + 1) - p * q;
                                w.s(i, k + 1, v);
                                let v = w.g(i, k) - p;
                                w.s(i, k, v);
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}

/// Complex eigenvalues with multiplicity, sorted by (real, imaginary) part.
pub fn spectrum<T: Scalar>(a: &LinearMap<T>) -> Result<Vec<Complex<T>>> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(vec![]);
    }
    if !a.is_finite() {
        return Err(Error::EigenConvergence);
    }
    let scale = a.norm_max();
    if scale == T::zero() {
        return Ok(vec![Complex::new(T::zero(), T::zero()); n]);
    }
    let mut w = Work::from(&a.scale(T::one() / scale));
    elmhes(&mut w);
    let mut ev: Vec<Complex<T>> = hqr(&mut w)?.into_iter().map(|c| c * scale).collect();
    ev.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(ev)
}

pub fn spectral_radius<T: Scalar>(a: &LinearMap<T>) -> Result<T> {
    Ok(spectrum(a)?.iter().fold(T::zero(), |m, c| m.max(c.norm())))
}

/// Dense complex matrix used only inside eigen-based evaluation.
#[derive(Clone, Debug)]
pub struct CMat<T> {
    pub n: usize,
    pub data: Vec<Complex<T>>,
}

impl<T: Scalar> CMat<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        let n = self.n;
        self.data[i * n + j] = v;
    }
    pub fn from_real(a: &LinearMap<T>) -> Self {
        let n = a.rows();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, Complex::new(a[(i, j)], T::zero()));
            }
        }
        m
    }
    pub fn norm1(&self) -> T {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).norm()).sum::<T>())
            .fold(T::zero(), |m, x| m.max(x))
    }
    pub fn matmul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::zeros(n);
        for i in 0..n {
            inv.set(i, i, Complex::new(T::one(), T::zero()));
        }
        let scale = self.data.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        for k in 0..n {
            let mut p = k;
            let mut best = a.get(k, k).norm();
            for i in k + 1..n {
                if a.get(i, k).norm() > best {
                    best = a.get(i, k).norm();
                    p = i;
                }
            }
            if best <= scale * T::epsilon() {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, t);
                    let t = inv.get(k, j);
                    inv.set(k, j, inv.get(p, j));
                    inv.set(p, j, t);
                }
            }
            let piv = a.get(k, k);
            for j in 0..n {
                a.set(k, j, a.get(k, j) / piv);
                inv.set(k, j, inv.get(k, j) / piv);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a.get(i, k);
                if f == Complex::new(T::zero(), T::zero()) {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - f * a.get(k, j));
                    inv.set(i, j, inv.get(i, j) - f * inv.get(k, j));
                }
            }
        }
        Ok(inv)
    }
}

/// Null space of a complex square matrix by complete-pivoting elimination.
/// Pivots below `tol` are treated as zero.
fn null_space<T: Scalar>(m: &CMat<T>, tol: T) -> Vec<Vec<Complex<T>>> {
    let n = m.n;
    let mut a = m.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for k in 0..n {
        let (mut bi, mut bj, mut best) = (k, k, T::zero());
        for i in k..n {
            for j in k..n {
                let v = a.get(i, j).norm();
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if best <= tol {
            break;
        }
        for j in 0..n {
            let t = a.get(k, j);
            a.set(k, j, a.get(bi, j));
            a.set(bi, j, t);
        }
        for i in 0..n {
            let t = a.get(i, k);
            a.set(i, k, a.get(i, bj));
            a.set(i, bj, t);
        }
        col_perm.swap(k, bj);
        let piv = a.get(k, k);
        for j in 0..n {
            a.set(k, j, a.get(k, j) / piv);
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a.get(i, k);
            for j in 0..n {
                a.set(i, j, a.get(i, j) - f * a.get(k, j));
            }
        }
        rank += 1;
    }
    // reduced form [I R; 0 0] in permuted columns; null vectors are (-R e_j, e_j)
    let mut out = Vec::new();
    for free in rank..n {
        let mut v = vec![Complex::new(T::zero(), T::zero()); n];
        v[col_perm[free]] = Complex::new(T::one(), T::zero());
        for piv in 0..rank {
            v[col_perm[piv]] = -a.get(piv, free);
        }
        let nrm = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
        for c in v.iter_mut() {
            *c = *c / nrm;
        }
        out.push(v);
    }
    out
}

/// Eigen-decomposition A = V diag(λ) V⁻¹ when A is diagonalizable.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<Complex<T>>,
    pub vectors: CMat<T>,
    pub inverse: CMat<T>,
    pub condition: T,
}

/// Attempts a diagonalisation; returns `None` when eigenvectors are deficient.
pub fn eigen_decompose<T: Scalar>(a: &LinearMap<T>) -> Result<Option<EigenDecomposition<T>>> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(Some(EigenDecomposition {
            values: vec![],
            vectors: CMat::zeros(0),
            inverse: CMat::zeros(0),
            condition: T::one(),
        }));
    }
    let ev = spectrum(a)?;
    let scale = a.norm_max().max(T::min_positive_value());
    let cluster_tol = T::lit(1e-6) * scale.max(T::one());
    // group eigenvalues into clusters
    let mut clusters: Vec<(Complex<T>, usize)> = Vec::new();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        for j in i + 1..n {
            if !used[j] && (ev[j] - ev[i]).norm() < cluster_tol {
                used[j] = true;
                members.push(j);
            }
        }
        let mut mean = Complex::new(T::zero(), T::zero());
        for &m in &members {
            mean = mean + ev[m];
        }
        mean = mean / T::count(members.len());
        clusters.push((mean, members.len()));
    }
    let ca = CMat::from_real(a);
    let rank_tol = T::lit(1e-9) * scale.max(T::one());
    let mut vecs: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    let mut vals = Vec::with_capacity(n);
    for &(lam, mult) in &clusters {
        let mut shifted = ca.clone();
        for i in 0..n {
            shifted.set(i, i, shifted.get(i, i) - lam);
        }
        let ns = null_space(&shifted, rank_tol);
        if ns.len() < mult {
            return Ok(None);
        }
        for v in ns.into_iter().take(mult) {
            vecs.push(v);
            vals.push(lam);
        }
    }
    let mut v = CMat::zeros(n);
    for (j, col) in vecs.iter().enumerate() {
        for i in 0..n {
            v.set(i, j, col[i]);
        }
    }
    let inv = match v.inverse() {
        Ok(x) => x,
        Err(_) => return Ok(None),
    };
    let condition = v.norm1() * inv.norm1();
    Ok(Some(EigenDecomposition { values: vals, vectors: v, inverse: inv, condition }))
}

impl<T: Scalar> EigenDecomposition<T> {
    /// V diag(f(λ)) V⁻¹, returned as a real matrix together with the largest discarded imaginary part.
    pub fn apply_fn(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> (LinearMap<T>, T) {
        let n = self.values.len();
        let fl: Vec<Complex<T>> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = LinearMap::zeros(n, n);
        let mut imag = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    s = s + self.vectors.get(i, k) * fl[k] * self.inverse.get(k, j);
                }
                out[(i, j)] = s.re;
                imag = imag.max(s.im.abs());
            }
        }
        (out, imag)
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<T: Scalar>(a: &LinearMap<T>) -> Result<Vec<T>> {
    let n = a.ensure_square()?;
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..i {
            let avg = (m[(i, j)] + m[(j, i)]) * T::lit(0.5);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let scale = m.norm_max().max(T::min_positive_value());
    for _sweep in 0..100 {
        let off: T = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| m[(i, j)] * m[(i, j)]).sum();
        if off.sqrt() <= T::epsilon() * scale * T::lit(1e-2) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= T::min_positive_value() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (apq + apq);
                let t = sign(T::one(), theta) / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(ev)
}

/// (positive, negative, zero) counts of a symmetric form's eigenvalues.
pub fn signature<T: Scalar>(a: &LinearMap<T>, tol: T) -> Result<(usize, usize, usize)> {
    let ev = symmetric_eigenvalues(a)?;
    let scale = a.norm_max().max(T::one());
    let mut s = (0, 0, 0);
    for x in ev {
        if x > tol * scale {
            s.0 += 1;
        } else if x < -tol * scale {
            s.1 += 1;
        } else {
            s.2 += 1;
        }
    }
    Ok(s)
}

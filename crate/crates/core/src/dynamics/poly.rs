//! Univariate polynomials over the rationals.

use std::fmt;

use num::complex::Complex64;
use num::{BigInt, Integer, One, Signed, Zero};

use crate::rational::{to_f64, Q};

/// Coefficients from the constant term up; never has a trailing zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear(r: Q) -> Self {
        Self::new(vec![-r, Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here as well.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len() - 1;
        let lead = d.leading();
        if r.len() <= dn {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Q::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dn);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// `Some(q)` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Q::is_integer)
    }

    /// Integer coefficients with content one and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(Signed::is_negative) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let unit = abs.is_one();
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `phi(k)`
fn totient(k: u64) -> u64 {
    let (mut n, mut result, mut p) = (k, k, 2);
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Cyclotomic polynomials `Phi_k` for every `k` with `phi(k) <= max_degree`.
fn cyclotomics(max_degree: usize) -> Vec<(u64, Poly)> {
    let mut out: Vec<(u64, Poly)> = Vec::new();
    // phi(k) >= sqrt(k / 2)
    let bound = 2 * (max_degree as u64).pow(2) + 2;
    for k in 1..=bound {
        if totient(k) as usize > max_degree {
            continue;
        }
        let mut p = Poly::new({
            let mut c = vec![Q::zero(); k as usize + 1];
            c[0] = -Q::one();
            c[k as usize] = Q::one();
            c
        });
        for (d, phi) in &out {
            if k % d == 0 {
                p = p.exact_div(phi).expect("cyclotomic divisor");
            }
        }
        out.push((k, p));
    }
    out
}

/// Splits a monic squarefree polynomial into its cyclotomic part and the rest.
pub fn split_cyclotomic(p: &Poly) -> (Poly, Poly) {
    let mut rest = p.clone();
    let mut cyc = Poly::constant(Q::one());
    if !p.is_integral() {
        return (cyc, rest);
    }
    for (_, phi) in cyclotomics(p.degree()) {
        if phi.degree() > rest.degree() {
            continue;
        }
        if let Some(q) = rest.exact_div(&phi) {
            rest = q;
            cyc = cyc.mul(&phi);
        }
    }
    (cyc, rest)
}

/// Sturm sequence of a squarefree polynomial.
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().expect("non-empty").is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|s| !s.is_zero());
        Self { seq }
    }

    pub fn sign_changes(&self, x: &Q) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for s in &self.seq {
            let v = s.eval(x);
            let sign = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if sign != 0 {
                if last != 0 && sign != last {
                    changes += 1;
                }
                last = sign;
            }
        }
        changes
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &Q, b: &Q) -> usize {
        self.sign_changes(a) - self.sign_changes(b)
    }
}

/// `1 + max |a_k / a_n|`: every root has modulus below it.
pub fn cauchy_bound(p: &Poly) -> Q {
    let lead = p.leading().abs();
    let m = p.coeffs[..p.coeffs.len().saturating_sub(1)]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Q::zero(), |a, b| if b > a { b } else { a });
    m + Q::one()
}

/// Disjoint intervals `(a, b]`, one per real root of the squarefree `p`, in increasing
/// order, each of width at most `width`. A rational root is returned as `(r, r)`.
pub fn real_root_intervals(p: &Poly, width: &Q) -> Vec<(Q, Q)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sturm = Sturm::new(p);
    let b = cauchy_bound(p);
    let mut pending = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((a, b)) = pending.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let m = (&a + &b) / Q::from_integer(2.into());
                pending.push((a, m.clone()));
                pending.push((m, b));
            }
        }
    }
    isolated.sort();
    isolated
        .into_iter()
        .map(|(a, b)| refine(p, a, b, width))
        .collect()
}

/// Bisects an isolating interval `(a, b]` down to `width`, never evaluating at `a`.
pub fn refine(p: &Poly, mut a: Q, mut b: Q, width: &Q) -> (Q, Q) {
    let two = Q::from_integer(2.into());
    let mut pb = p.eval(&b);
    if pb.is_zero() {
        return (b.clone(), b);
    }
    while &(&b - &a) > width {
        let m = (&a + &b) / &two;
        let pm = p.eval(&m);
        if pm.is_zero() {
            return (m.clone(), m);
        }
        if pm.is_positive() == pb.is_positive() {
            b = m;
            pb = pm;
        } else {
            a = m;
        }
    }
    (a, b)
}

/// Approximate complex roots (Aberth iteration) of a polynomial with distinct roots.
pub fn approximate_roots(p: &Poly) -> Vec<Complex64> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let lead = to_f64(&p.leading());
    let c: Vec<f64> = p.coeffs.iter().map(|x| to_f64(x) / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let radius = c[..n].iter().map(|x| x.abs()).fold(0.0f64, f64::max).min(1e6) + 1.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, t)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let w = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    // Snap numerically real roots onto the axis so conjugate pairing is clean.
    for r in &mut z {
        if r.im.abs() < 1e-12 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    z
}

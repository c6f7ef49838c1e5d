//! Certification helpers: root inclusion disks, minimal-factor search and a modular
//! irreducibility test.

use num::complex::Complex64;
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use crate::rational::{from_f64, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
struct CQ {
    re: Q,
    im: Q,
}

impl CQ {
    fn from_c64(z: Complex64) -> Self {
        Self {
            re: from_f64(z.re),
            im: from_f64(z.im),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn eval_exact(p: &Poly, z: &CQ) -> CQ {
    let mut acc = CQ {
        re: Q::zero(),
        im: Q::zero(),
    };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

/// Rational `u >= sqrt(s)`.
pub fn sqrt_upper(s: &Q) -> Q {
    sqrt_bound(s, true)
}

/// Rational `0 <= l <= sqrt(s)`.
pub fn sqrt_lower(s: &Q) -> Q {
    sqrt_bound(s, false)
}

fn sqrt_bound(s: &Q, upper: bool) -> Q {
    if !s.is_positive() {
        return Q::zero();
    }
    // Scale into a comfortable floating-point range by powers of four.
    let four = Q::from_integer(4.into());
    let mut scaled = s.clone();
    let mut k: i32 = 0;
    while scaled > Q::from_integer(BigInt::from(1u64 << 60)) {
        scaled /= &four;
        k += 1;
    }
    while scaled < Q::new(BigInt::one(), BigInt::from(1u64 << 60)) {
        scaled *= &four;
        k -= 1;
    }
    let guess = from_f64(to_f64(&scaled).sqrt());
    let mut factor = Q::new(BigInt::from(1u64 << 40) + 1, BigInt::from(1u64 << 40));
    if !upper {
        factor = Q::one() / factor;
    }
    let mut r = guess;
    loop {
        let sq = &r * &r;
        let ok = if upper { sq >= scaled } else { sq <= scaled };
        if ok {
            break;
        }
        r *= &factor;
    }
    let two = Q::from_integer(2.into());
    let scale = if k >= 0 {
        num::pow(two, k as usize)
    } else {
        Q::one() / num::pow(two, (-k) as usize)
    };
    r * scale
}

/// A disk guaranteed (with its companions) to contain the roots of a polynomial.
#[derive(Debug, Clone)]
pub struct RootDisk {
    pub center: Complex64,
    pub radius_upper: Q,
    pub modulus_lower: Q,
    pub modulus_upper: Q,
    /// Disjoint from every other disk, hence holding exactly one root.
    pub isolated: bool,
    /// Disjoint from the real axis: all roots inside are non-real.
    pub off_axis: bool,
}

/// Smith's inclusion disks around distinct approximations of all roots of `p`.
///
/// The union contains every root and each connected component of `m` disks contains
/// exactly `m` roots. Returns `None` if two approximations coincide.
pub fn inclusion_disks(p: &Poly, approx: &[Complex64]) -> Option<Vec<RootDisk>> {
    let n = p.degree();
    if approx.len() != n || n == 0 {
        return None;
    }
    let centers: Vec<CQ> = approx.iter().map(|z| CQ::from_c64(*z)).collect();
    let lead_sq = p.leading() * p.leading();
    let n_sq = Q::from_integer(BigInt::from(n * n));
    let mut disks = Vec::with_capacity(n);
    for (i, zi) in centers.iter().enumerate() {
        let value = eval_exact(p, zi).norm_sq();
        let mut denom = lead_sq.clone();
        for (j, zj) in centers.iter().enumerate() {
            if i != j {
                let d = zi.sub(zj).norm_sq();
                if d.is_zero() {
                    return None;
                }
                denom *= d;
            }
        }
        let radius_sq = &n_sq * value / denom;
        let radius_upper = sqrt_upper(&radius_sq);
        let modulus_sq = zi.norm_sq();
        let modulus_lower = {
            let m = sqrt_lower(&modulus_sq) - &radius_upper;
            if m.is_negative() {
                Q::zero()
            } else {
                m
            }
        };
        let modulus_upper = sqrt_upper(&modulus_sq) + &radius_upper;
        let off_axis = zi.im.abs() > radius_upper;
        disks.push(RootDisk {
            center: approx[i],
            radius_upper,
            modulus_lower,
            modulus_upper,
            isolated: true,
            off_axis,
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = sqrt_lower(&centers[i].sub(&centers[j]).norm_sq());
            if dist <= &disks[i].radius_upper + &disks[j].radius_upper {
                disks[i].isolated = false;
                disks[j].isolated = false;
            }
        }
    }
    Some(disks)
}

/// Groups roots into real singletons and conjugate pairs.
fn conjugate_units(roots: &[Complex64]) -> Option<Vec<Vec<usize>>> {
    let mut used = vec![false; roots.len()];
    let mut units = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].im == 0.0 {
            units.push(vec![i]);
            continue;
        }
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = (roots[a] - roots[i].conj()).norm();
                let db = (roots[b] - roots[i].conj()).norm();
                da.total_cmp(&db)
            })?;
        if (roots[partner] - roots[i].conj()).norm() > 1e-6 * (1.0 + roots[i].norm()) {
            return None;
        }
        used[partner] = true;
        units.push(vec![i, partner]);
    }
    Some(units)
}

fn rounded_product(roots: &[Complex64], chosen: &[usize]) -> Option<Poly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &k in chosen {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * roots[k];
        }
        c = next;
    }
    let mut ints = Vec::with_capacity(c.len());
    for z in c {
        let r = z.re.round();
        if (z.re - r).abs() > 1e-6 * (1.0 + r.abs()) || z.im.abs() > 1e-6 * (1.0 + r.abs()) {
            return None;
        }
        ints.push(BigInt::from(r as i64));
    }
    Some(Poly::from_bigints(&ints))
}

/// The monic integer factor of `p` of least degree that vanishes at `roots[target]`,
/// found by exhaustive search over conjugation-closed root subsets.
///
/// `p` must be monic with integer coefficients and squarefree.
pub fn minimal_factor(p: &Poly, roots: &[Complex64], target: usize) -> Option<Poly> {
    if !p.is_integral() || p.leading() != Q::one() {
        return None;
    }
    let units = conjugate_units(roots)?;
    let home = units.iter().position(|u| u.contains(&target))?;
    let others: Vec<&Vec<usize>> = units
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != home)
        .map(|(_, u)| u)
        .collect();
    if others.len() > 20 {
        return None;
    }
    let mut masks: Vec<u32> = (0..(1u32 << others.len())).collect();
    let degree_of = |m: u32| -> usize {
        (0..others.len())
            .filter(|b| m & (1 << b) != 0)
            .map(|b| others[b].len())
            .sum()
    };
    masks.sort_by_key(|&m| (degree_of(m), m));
    for m in masks {
        let mut chosen = units[home].clone();
        for (b, u) in others.iter().enumerate() {
            if m & (1 << b) != 0 {
                chosen.extend(u.iter().copied());
            }
        }
        let Some(candidate) = rounded_product(roots, &chosen) else {
            continue;
        };
        if p.exact_div(&candidate).is_some() {
            return Some(candidate);
        }
    }
    None
}

fn modp(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut newr) = (p as i128, a as i128);
    let (mut t, mut newt) = (0i128, 1i128);
    while newr != 0 {
        let qt = r / newr;
        (t, newt) = (newt, t - qt * newt);
        (r, newr) = (newr, r - qt * newr);
    }
    (t.rem_euclid(p as i128)) as u64
}

fn rem_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1] * inv % p;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn div_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
    }
    trim(&mut q);
    q
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_p(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod_p(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem_p(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem_p(&mul_p(&result, &b, p), m, p);
        }
        b = rem_p(&mul_p(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Degrees of the irreducible factors of a squarefree monic polynomial over `F_p`.
fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = f.to_vec();
    let mut degrees = Vec::new();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut i = 1;
    while f.len() > 2 * i {
        h = pow_mod_p(&h, p, &f, p);
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        trim(&mut hx);
        let g = gcd_p(&hx, &f, p);
        if g.len() > 1 {
            for _ in 0..(g.len() - 1) / i {
                degrees.push(i);
            }
            f = div_p(&f, &g, p);
            h = rem_p(&h, &f, p);
        }
        i += 1;
    }
    if f.len() > 1 {
        degrees.push(f.len() - 1);
    }
    degrees
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Certifies irreducibility over `Q` of a monic integer polynomial by intersecting the
/// factor-degree patterns it has modulo small primes. `false` means "not certified".
pub fn irreducible_certified(f: &Poly) -> bool {
    let d = f.degree();
    if d <= 1 {
        return d == 1;
    }
    if !f.is_integral() || f.leading() != Q::one() {
        return false;
    }
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.to_integer()).collect();
    // possible[k]: a factor of degree k over Q is still conceivable
    let mut possible = vec![true; d + 1];
    for &p in PRIMES.iter() {
        let fp: Vec<u64> = ints.iter().map(|c| modp(c, p)).collect();
        let deriv: Vec<u64> = fp
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (k as u64 % p) % p)
            .collect();
        if gcd_p(&fp, &deriv, p).len() != 1 {
            continue;
        }
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for deg in factor_degrees(&fp, p) {
            for s in (deg..=d).rev() {
                if sums[s - deg] {
                    sums[s] = true;
                }
            }
        }
        for k in 0..=d {
            possible[k] &= sums[k];
        }
        if (1..d).all(|k| !possible[k]) {
            return true;
        }
    }
    false
}

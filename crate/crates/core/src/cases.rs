//! Worked computations: complete intersections, the Ueno threefold, and the Euler/Picard
//! budget of a blowup tower.

use num::{BigInt, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{frac, q, Q};

/// Chern numbers of a smooth complete intersection threefold in `P^n`, as coefficients
/// of powers of the hyperplane class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CiChern {
    pub c1: i64,
    pub c2: i64,
    /// Coefficient of `h^3` in `c3`.
    pub c3: i64,
    /// `h^3 = prod d_i`.
    pub degree: i64,
    pub euler: i64,
}

fn validate_ci(n: u32, degrees: &[u32]) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "complete intersection threefolds need n >= 4, got {n}"
        )));
    }
    if degrees.len() != (n - 3) as usize {
        return Err(Error::InvalidInput(format!(
            "expected {} degrees for a threefold in P^{n}, got {}",
            n - 3,
            degrees.len()
        )));
    }
    if degrees.contains(&0) {
        return Err(Error::InvalidInput("degrees must be at least 1".into()));
    }
    Ok(())
}

/// Truncated total Chern class `(1+h)^(n+1) / prod (1 + d_i h)` up to `h^3`.
fn ci_series(n: u32, degrees: &[u32]) -> [i64; 4] {
    let mut c = [0i64; 4];
    // binomial(n+1, k)
    let mut b = 1i64;
    for (k, slot) in c.iter_mut().enumerate() {
        *slot = b;
        b = b * (i64::from(n) + 1 - k as i64) / (k as i64 + 1);
    }
    for &d in degrees {
        // multiply by 1/(1 + d h) = sum (-d h)^k
        let d = i64::from(d);
        for k in 1..4 {
            c[k] -= d * c[k - 1];
        }
    }
    c
}

pub fn complete_intersection_chern(n: u32, degrees: &[u32]) -> Result<CiChern> {
    validate_ci(n, degrees)?;
    let n64 = i64::from(n);
    let s: i64 = degrees.iter().map(|&d| i64::from(d)).sum();
    let mut pair_sum = 0i64;
    for (i, &a) in degrees.iter().enumerate() {
        for &b in &degrees[i + 1..] {
            pair_sum += i64::from(a) * i64::from(b);
        }
    }
    let c1 = n64 + 1 - s;
    let c2 = n64 * (n64 + 1) / 2 - pair_sum - (n64 + 1) * s + s * s;
    let c3 = ci_series(n, degrees)[3];
    let degree: i64 = degrees.iter().map(|&d| i64::from(d)).product();
    Ok(CiChern {
        c1,
        c2,
        c3,
        degree,
        euler: c3 * degree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CiC2Report {
    pub c1_coeff: i64,
    pub c2_coeff: i64,
    pub positive: bool,
}

pub fn ci_c2(n: u32, degrees: &[u32]) -> Result<CiC2Report> {
    let c = complete_intersection_chern(n, degrees)?;
    Ok(CiC2Report {
        c1_coeff: c.c1,
        c2_coeff: c.c2,
        positive: c.c2 > 0,
    })
}

/// `g(x) = n(n+1)/2 - (n+1) x + (n-2)/(2(n-3)) x^2`.
pub fn g_quadratic(n: u32, x: &Q) -> Result<Q> {
    if n <= 3 {
        return Err(Error::InvalidInput(format!("g is defined for n >= 4, got {n}")));
    }
    let n = i64::from(n);
    Ok(frac(n * (n + 1), 2) - q(n + 1) * x + frac(n - 2, 2 * (n - 3)) * x * x)
}

fn abs_det_integer(m: &Matrix) -> Result<u64> {
    let det = linalg::determinant(m);
    if !det.is_integer() {
        return Err(Error::InvalidInput("matrix must have integer entries".into()));
    }
    let det: BigInt = det.to_integer().abs();
    det.to_u64()
        .ok_or_else(|| Error::InvalidInput("determinant too large".into()))
}

fn minus_identity(m: &Matrix) -> Result<Matrix> {
    if m.iter().any(|row| row.len() != m.len()) {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= q(1);
    }
    Ok(out)
}

/// Fixed points of `z -> A z` on `R^m / Z^m`: `|det(A - I)|`.
pub fn torus_fixed_points(a: &Matrix) -> Result<u64> {
    let count = abs_det_integer(&minus_identity(a)?)?;
    if count == 0 {
        return Err(Error::Degenerate("det(A - I) = 0: fixed points are not isolated".into()));
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UenoReport {
    pub fixed_points: u64,
    pub period2_points: u64,
    pub singular_points: u64,
    pub chi_quotient: i64,
    pub chi_resolution: i64,
    pub picard_resolution: i64,
    pub identity_check: bool,
}

/// Order of the rotation group acting on each elliptic factor.
const GROUP_ORDER: i64 = 4;
/// Euler characteristic of the exceptional `P^2` over each singular point.
const FIBER_EULER: i64 = 3;

/// `E^3 / <i>` for the square lattice curve `E`, and its crepant resolution.
pub fn ueno_report() -> Result<UenoReport> {
    let rotation = [[0i64, -1], [1, 0]];
    let m = 6;
    let mut a: Matrix = vec![vec![Q::zero(); m]; m];
    for block in 0..m / 2 {
        for (r, row) in rotation.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                a[2 * block + r][2 * block + c] = q(v);
            }
        }
    }
    let fixed = torus_fixed_points(&a)?;
    let a2 = linalg::mat_mul(&a, &a);
    let fixed_by_square = torus_fixed_points(&a2)?;
    let period2 = fixed_by_square - fixed;
    let singular = fixed + period2 / 2;
    // A real torus has Euler characteristic zero.
    let chi_torus = 0i64;
    let special = fixed_by_square as i64;
    let chi_quotient = (chi_torus - special) / GROUP_ORDER + singular as i64;
    let chi_resolution = chi_quotient - singular as i64 + FIBER_EULER * singular as i64;
    // Invariant (1,1)-classes of the torus: all dz_j ^ d(conj z_k).
    let invariant = (m as i64 / 2).pow(2);
    let picard_resolution = invariant + singular as i64;
    Ok(UenoReport {
        fixed_points: fixed,
        period2_points: period2,
        singular_points: singular,
        chi_quotient,
        chi_resolution,
        picard_resolution,
        identity_check: chi_resolution == 2 + 2 * picard_resolution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetReport {
    pub num_blowups: i64,
    /// `chi0 + 2 k - chi = sum 2 g_i` over curve centers.
    pub genus_slack: i64,
    /// Every curve center must be rational.
    pub all_centers_rational_forced: bool,
}

impl BudgetReport {
    /// The case left open even when all centers are rational.
    pub const OPEN_CASE: &'static str =
        "unresolved: rational centers with c1.C = -2 and normal bundle O(-2)+O(-2)";
}

/// Number of blowups and genus slack between a base `(chi0, rho0)` and a target `(chi, rho)`.
pub fn euler_budget(base: (i64, i64), target: (i64, i64)) -> Result<BudgetReport> {
    let (chi0, rho0) = base;
    let (chi, rho) = target;
    if rho < rho0 {
        return Err(Error::InvalidInput(format!(
            "target Picard number {rho} is below the base's {rho0}"
        )));
    }
    let k = rho - rho0;
    let slack = chi0 + 2 * k - chi;
    if slack < 0 {
        return Err(Error::Infeasible(format!(
            "chi = {chi} exceeds the maximum {} reachable with {k} blowups",
            chi0 + 2 * k
        )));
    }
    Ok(BudgetReport {
        num_blowups: k,
        genus_slack: slack,
        all_centers_rational_forced: slack == 0,
    })
}

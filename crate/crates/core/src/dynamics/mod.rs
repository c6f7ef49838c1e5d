//! Lattice actions of automorphisms: validation, dynamical degrees, and the constraints
//! forced on a leading eigenclass.
//!
//! An action is an integer matrix `A` on divisor coordinates, `(A x)_i = sum_j A_ij x_j`.
//! The induced action on curves is `B = P^-1 A^-T P` for the pairing matrix `P`, so that
//! `pair(A x, B y) = pair(x, y)`.

mod certify;
pub mod poly;

use std::fmt;

use num::{BigInt, One, Signed, Zero};

pub use certify::{inclusion_disks, irreducible_certified, minimal_factor, RootDisk};
pub use poly::Poly;

use crate::classes::{CurveClass, DivisorClass};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{frac, q, round_dyadic, to_f64, Q};
use crate::ring::ThreefoldModel;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn to_rational(a: &IntMatrix) -> Matrix {
    a.iter().map(|row| row.iter().map(|&v| q(v)).collect()).collect()
}

fn check_square(a: &IntMatrix, n: usize) -> Result<()> {
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "action matrix",
            expected: n,
            found: a.iter().map(Vec::len).find(|&l| l != n).unwrap_or(a.len()),
        });
    }
    Ok(())
}

/// A necessary lattice-level condition that an action fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Determinant(Q),
    FormNotPreserved {
        indices: (usize, usize, usize),
        names: (String, String, String),
        before: Q,
        after: Q,
    },
    C1NotFixed,
    C2NotFixed,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Determinant(d) => write!(f, "det = {d}"),
            Violation::FormNotPreserved {
                names: (a, b, c),
                before,
                after,
                ..
            } => write!(f, "triple product not preserved at ({a},{b},{c}): {before} -> {after}"),
            Violation::C1NotFixed => f.write_str("c1 not fixed"),
            Violation::C2NotFixed => f.write_str("c2 not fixed"),
        }
    }
}

/// `B = P^-1 A^-T P`; `None` if `A` is singular.
pub fn curve_matrix(model: &ThreefoldModel, a: &IntMatrix) -> Result<Option<Matrix>> {
    check_square(a, model.picard())?;
    let p = model.pairing_matrix();
    let p_inv = linalg::inverse(&p).ok_or_else(|| Error::InvalidModel(vec!["pairing is singular".into()]))?;
    let Some(a_inv) = linalg::inverse(&to_rational(a)) else {
        return Ok(None);
    };
    let b = linalg::mat_mul(&linalg::mat_mul(&p_inv, &linalg::transpose(&a_inv)), &p);
    Ok(Some(b))
}

/// Lists every violated invariant of a candidate action; empty means the action passes.
pub fn validate_action(model: &ThreefoldModel, a: &IntMatrix) -> Result<Vec<Violation>> {
    let n = model.picard();
    check_square(a, n)?;
    let am = to_rational(a);
    let mut out = Vec::new();
    let det = linalg::determinant(&am);
    if det.abs() != Q::one() {
        out.push(Violation::Determinant(det));
    }
    let tensor: Vec<Vec<Vec<Q>>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| model.basis_triple(i, j, k)).collect()).collect())
        .collect();
    // T'(i,j,k) = sum A_ai A_bj A_ck T(a,b,c), contracted one index at a time.
    let contract = |t: &Vec<Vec<Vec<Q>>>, axis: usize| -> Vec<Vec<Vec<Q>>> {
        let mut out = vec![vec![vec![Q::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = Q::zero();
                    for m in 0..n {
                        let (coef, val) = match axis {
                            0 => (&am[m][i], &t[m][j][k]),
                            1 => (&am[m][j], &t[i][m][k]),
                            _ => (&am[m][k], &t[i][j][m]),
                        };
                        if !coef.is_zero() && !val.is_zero() {
                            s += coef * val;
                        }
                    }
                    out[i][j][k] = s;
                }
            }
        }
        out
    };
    let moved = contract(&contract(&contract(&tensor, 0), 1), 2);
    let names = model.divisor_names();
    'outer: for i in 0..n {
        for j in i..n {
            for k in j..n {
                if moved[i][j][k] != tensor[i][j][k] {
                    out.push(Violation::FormNotPreserved {
                        indices: (i, j, k),
                        names: (names[i].clone(), names[j].clone(), names[k].clone()),
                        before: tensor[i][j][k].clone(),
                        after: moved[i][j][k].clone(),
                    });
                    break 'outer;
                }
            }
        }
    }
    if linalg::mat_vec(&am, model.c1().coefficients()) != model.c1().coefficients() {
        out.push(Violation::C1NotFixed);
    }
    match curve_matrix(model, a)? {
        Some(b) if linalg::mat_vec(&b, model.c2().coefficients()) == model.c2().coefficients() => {}
        _ => out.push(Violation::C2NotFixed),
    }
    Ok(out)
}

/// `det(x I - M)` by Berkowitz's division-free recurrence.
pub fn characteristic_polynomial(m: &Matrix) -> Poly {
    let n = m.len();
    // v holds coefficients from the leading one down.
    let mut v = vec![Q::one()];
    for r in 0..n {
        // Toeplitz column: 1, -m_rr, -R C, -R M C, ..., -R M^(r-1) C
        let mut t = vec![Q::one(), -m[r][r].clone()];
        let mut col: Vec<Q> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rc: Q = (0..r).map(|j| &m[r][j] * &col[j]).sum();
            t.push(-rc);
            col = (0..r)
                .map(|i| (0..r).map(|j| &m[i][j] * &col[j]).sum())
                .collect();
        }
        let mut next = vec![Q::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *slot += &t[i - j] * vj;
                }
            }
        }
        v = next;
    }
    v.reverse();
    Poly::new(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominantKind {
    /// The spectral radius is a real root (or its negative) isolated by a Sturm sequence.
    Real,
    /// The spectral radius is attained only by non-real roots; only an enclosing interval
    /// is reported.
    Complex,
    /// Roots of equal or overlapping modulus could not be separated.
    Unresolved,
}

impl DominantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DominantKind::Real => "real",
            DominantKind::Complex => "complex",
            DominantKind::Unresolved => "unresolved",
        }
    }
}

/// A spectral radius: an algebraic number with an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicReal {
    /// Monic integer polynomial vanishing at the value (`None` if not determined).
    pub minimal_polynomial: Option<Poly>,
    /// Irreducibility of `minimal_polynomial` was certified modulo small primes.
    pub minimal_certified: bool,
    pub lower: Q,
    pub upper: Q,
    pub kind: DominantKind,
    /// Multiplicity of the value as a root of the characteristic polynomial.
    pub multiplicity: usize,
}

impl AlgebraicReal {
    fn exact(value: Q, multiplicity: usize) -> Self {
        Self {
            minimal_polynomial: Some(Poly::linear(value.clone())),
            minimal_certified: true,
            lower: value.clone(),
            upper: value,
            kind: DominantKind::Real,
            multiplicity,
        }
    }

    pub fn approx(&self) -> f64 {
        to_f64(&((&self.lower + &self.upper) / q(2)))
    }

    pub fn width(&self) -> Q {
        &self.upper - &self.lower
    }

    pub fn is_certified(&self) -> bool {
        self.kind != DominantKind::Unresolved
    }
}

/// Width target for isolating intervals.
pub fn interval_width() -> Q {
    frac(1, 10_000_000_000)
}

fn multiplicity(p: &Poly, factor: &Poly) -> usize {
    let mut count = 0;
    let mut rest = p.clone();
    while let Some(q) = rest.exact_div(factor) {
        rest = q;
        count += 1;
    }
    count
}

/// Certified spectral radius of a matrix with characteristic polynomial `char_poly`.
pub fn spectral_radius(char_poly: &Poly) -> Result<AlgebraicReal> {
    if char_poly.degree() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let sq = char_poly.squarefree_part();
    let (cyc, rest) = poly::split_cyclotomic(&sq);
    let one_mult = if cyc.degree() > 0 {
        // every cyclotomic root has modulus one
        multiplicity(char_poly, &cyc).max(1)
    } else {
        0
    };
    if rest.degree() == 0 {
        return Ok(AlgebraicReal::exact(Q::one(), one_mult));
    }
    let width = interval_width();
    let real = poly::real_root_intervals(&rest, &width);
    let approx = poly::approximate_roots(&rest);
    let disks = certify::inclusion_disks(&rest, &approx);

    // Largest real root in modulus, as a positive interval, with the polynomial it solves.
    let extreme = real
        .iter()
        .map(|(a, b)| {
            if b.is_positive() || (b.is_zero() && a.is_zero()) {
                (a.clone(), b.clone(), false)
            } else {
                (-b.clone(), -a.clone(), true)
            }
        })
        .max_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));

    let unresolved = |lower: Q, upper: Q| AlgebraicReal {
        minimal_polynomial: None,
        minimal_certified: false,
        lower,
        upper,
        kind: DominantKind::Unresolved,
        multiplicity: 0,
    };

    let Some(disks) = disks else {
        let bound = poly::cauchy_bound(&rest);
        return Ok(unresolved(Q::zero(), bound));
    };
    let all_isolated = disks.iter().all(|d| d.isolated);
    let axis_disks = disks.iter().filter(|d| !d.off_axis).count();
    let clean = all_isolated && axis_disks == real.len();
    let complex_upper = disks
        .iter()
        .filter(|d| !clean || d.off_axis)
        .map(|d| d.modulus_upper.clone())
        .max();
    let complex_lower = disks
        .iter()
        .filter(|d| clean && d.off_axis)
        .map(|d| d.modulus_lower.clone())
        .max();

    let real_dominates = |lo: &Q| complex_upper.as_ref().is_none_or(|u| u < lo);
    if let Some((lo, hi, negated)) = extreme.clone() {
        // roots of modulus one remain below a real root > 1
        let above_one = cyc.degree() == 0 || lo > Q::one();
        if real_dominates(&lo) && above_one {
            let target_poly = if negated { rest.reflect() } else { rest.clone() };
            let target_poly = target_poly.monic();
            if lo == hi {
                let m = multiplicity(char_poly, &Poly::linear(if negated { -lo.clone() } else { lo.clone() }));
                return Ok(AlgebraicReal::exact(lo, m));
            }
            let roots: Vec<_> = approx
                .iter()
                .map(|z| if negated { -z } else { *z })
                .collect();
            let mid = to_f64(&((&lo + &hi) / q(2)));
            let target = (0..roots.len())
                .filter(|&k| roots[k].im == 0.0)
                .min_by(|&a, &b| (roots[a].re - mid).abs().total_cmp(&(roots[b].re - mid).abs()));
            let minimal = target.and_then(|t| certify::minimal_factor(&target_poly, &roots, t));
            let minimal = minimal.filter(|m| {
                // the factor must change sign on the isolating interval
                let (fa, fb) = (m.eval(&lo), m.eval(&hi));
                fb.is_zero() || fa.is_positive() != fb.is_positive()
            });
            let (minimal_certified, mult) = match &minimal {
                Some(m) => {
                    let orig = if negated { m.reflect().monic() } else { m.clone() };
                    (certify::irreducible_certified(m), multiplicity(char_poly, &orig))
                }
                None => (false, 0),
            };
            return Ok(AlgebraicReal {
                minimal_polynomial: minimal,
                minimal_certified,
                lower: lo,
                upper: hi,
                kind: DominantKind::Real,
                multiplicity: mult,
            });
        }
    }
    // Below or at one: the cyclotomic roots dominate.
    if cyc.degree() > 0 {
        let below_one = complex_upper.as_ref().is_none_or(|u| *u < Q::one())
            && extreme.as_ref().is_none_or(|(_, hi, _)| *hi < Q::one());
        if below_one {
            return Ok(AlgebraicReal::exact(Q::one(), one_mult));
        }
    }
    if let Some(lo) = complex_lower {
        let real_hi = extreme.as_ref().map(|e| e.1.clone()).unwrap_or_else(Q::zero);
        let beats_one = cyc.degree() == 0 || lo > Q::one();
        if clean && lo > real_hi && beats_one {
            let upper = complex_upper.expect("off-axis disk present");
            // all off-axis disks whose lower bound is below another's upper bound tie
            return Ok(AlgebraicReal {
                minimal_polynomial: None,
                minimal_certified: false,
                lower: lo,
                upper,
                kind: DominantKind::Complex,
                multiplicity: 0,
            });
        }
    }
    let lo = extreme.map(|e| e.0).unwrap_or_else(Q::zero);
    let hi = disks
        .iter()
        .map(|d| d.modulus_upper.clone())
        .max()
        .unwrap_or_else(|| poly::cauchy_bound(&rest));
    Ok(unresolved(lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport {
    pub divisor_char_poly: Poly,
    pub curve_char_poly: Poly,
    pub lambda1: AlgebraicReal,
    pub lambda2: AlgebraicReal,
    pub entropy: f64,
    /// `lambda1 != lambda2` is certified.
    pub primitive_hint: bool,
    /// `Some(true)` if `lambda1^2 >= lambda2` is certified by the intervals (or exactly),
    /// `Some(false)` if the reverse strict inequality is, `None` if undecided.
    pub log_concave: Option<bool>,
}

fn certified_distinct(a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    if a.upper < b.lower || b.upper < a.lower {
        return a.is_certified() && b.is_certified();
    }
    match (&a.minimal_polynomial, &b.minimal_polynomial) {
        (Some(p), Some(q)) => a.minimal_certified && b.minimal_certified && p != q,
        _ => false,
    }
}

fn log_concavity(l1: &AlgebraicReal, l2: &AlgebraicReal) -> Option<bool> {
    if !l1.is_certified() || !l2.is_certified() {
        return None;
    }
    if &l1.lower * &l1.lower >= l2.upper {
        return Some(true);
    }
    if &l1.upper * &l1.upper < l2.lower {
        return Some(false);
    }
    // Equal values: lambda2 = lambda1^2 exactly when the minimal polynomial of lambda2
    // vanishes at lambda1^2, i.e. m2(x^2) is divisible by m1(x).
    if let (Some(m1), Some(m2)) = (&l1.minimal_polynomial, &l2.minimal_polynomial) {
        let mut squared = vec![Q::zero(); 2 * m2.degree() + 1];
        for (k, c) in m2.coeffs().iter().enumerate() {
            squared[2 * k] = c.clone();
        }
        if l1.minimal_certified && Poly::new(squared).exact_div(m1).is_some() {
            return Some(true);
        }
    }
    None
}

fn report(a: &Matrix, b: &Matrix) -> Result<DegreeReport> {
    let pa = characteristic_polynomial(a);
    let pb = characteristic_polynomial(b);
    let lambda1 = spectral_radius(&pa)?;
    let lambda2 = spectral_radius(&pb)?;
    let entropy = lambda1.approx().max(lambda2.approx()).max(1.0).ln();
    Ok(DegreeReport {
        primitive_hint: certified_distinct(&lambda1, &lambda2),
        log_concave: log_concavity(&lambda1, &lambda2),
        divisor_char_poly: pa,
        curve_char_poly: pb,
        lambda1,
        lambda2,
        entropy,
    })
}

/// Dynamical degrees of a validated action on a model.
pub fn dynamical_degrees(model: &ThreefoldModel, a: &IntMatrix) -> Result<DegreeReport> {
    let violations = validate_action(model, a)?;
    if !violations.is_empty() {
        let list = violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidModel(list));
    }
    let b = curve_matrix(model, a)?.expect("unimodular");
    report(&to_rational(a), &b)
}

/// Dynamical degrees of a unimodular matrix with no model: `lambda2` comes from `A^-T`.
pub fn raw_dynamical_degrees(a: &IntMatrix) -> Result<DegreeReport> {
    let n = a.len();
    check_square(a, n)?;
    let am = to_rational(a);
    let det = linalg::determinant(&am);
    if det.abs() != Q::one() {
        return Err(Error::InvalidInput(format!("matrix is not unimodular: det = {det}")));
    }
    let inv = linalg::inverse(&am).expect("unimodular");
    report(&am, &linalg::transpose(&inv))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalityCheck {
    /// Lists the rational roots found (all of modulus one).
    Consistent { rational_roots: Vec<i64> },
    NotUnimodular { constant: BigInt },
    /// A rational root above one: impossible for a unimodular characteristic polynomial.
    Contradiction { root: Q },
}

/// Rational roots of a monic integer polynomial with constant term `±1` are `±1`, so no
/// rational spectral radius exceeds one.
pub fn rationality_obstruction(p: &Poly) -> Result<RationalityCheck> {
    if p.is_zero() || p.leading() != Q::one() || !p.is_integral() {
        return Err(Error::InvalidInput("polynomial must be monic with integer coefficients".into()));
    }
    let constant = p.coeff(0).to_integer();
    if constant.abs() != BigInt::one() {
        return Ok(RationalityCheck::NotUnimodular { constant });
    }
    let mut rational_roots = Vec::new();
    for r in [1i64, -1] {
        if p.eval(&q(r)).is_zero() {
            rational_roots.push(r);
        }
    }
    if let Some(&r) = rational_roots.iter().find(|r| r.abs() > 1) {
        return Ok(RationalityCheck::Contradiction { root: q(r) });
    }
    Ok(RationalityCheck::Consistent { rational_roots })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenclassStatus {
    Evaluated,
    /// `lambda1 <= 1 + tolerance`.
    EntropyZero,
    NotCertified(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenclassReport {
    pub status: EigenclassStatus,
    pub lambda1: f64,
    /// Leading eigenvector, normalized to max-norm one (not certified nef).
    pub eigenvector: Option<DivisorClass>,
    /// `max |A zeta - lambda zeta|`.
    pub eigen_residual: f64,
    pub residuals: Vec<Residual>,
    pub tolerance: f64,
}

impl EigenclassReport {
    pub fn all_within(&self) -> bool {
        self.residuals.iter().all(|r| r.within)
    }

    pub fn summary(&self) -> String {
        match &self.status {
            EigenclassStatus::Evaluated => {
                if self.all_within() {
                    "all constraints vanish within tolerance".into()
                } else {
                    "some constraints exceed tolerance".into()
                }
            }
            EigenclassStatus::EntropyZero => "no conclusion: entropy zero regime".into(),
            EigenclassStatus::NotCertified(why) => format!("eigenvector not certified: {why}"),
        }
    }
}

/// Bits kept after each inverse-iteration step.
const WORKING_BITS: u32 = 96;

fn leading_eigenvector(a: &Matrix, shift: &Q) -> Option<Vec<Q>> {
    let n = a.len();
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= shift;
    }
    let mut v = vec![Q::one(); n];
    for _ in 0..6 {
        let w = linalg::solve(&shifted, &v)?;
        let scale = w
            .iter()
            .max_by(|x, y| x.abs().cmp(&y.abs()))
            .cloned()
            .filter(|s| !s.is_zero())?;
        v = w.iter().map(|x| round_dyadic(&(x / &scale), WORKING_BITS)).collect();
    }
    Some(v)
}

/// Evaluates the vanishings forced on a leading eigenclass `zeta` of a positive-entropy
/// action: `zeta^2 = 0`, `zeta . c1^2 = 0`, `zeta . c2 = 0`, and `zeta . c1 = 0` when
/// `lambda1 != lambda2`.
pub fn eigenclass_constraints(
    model: &ThreefoldModel,
    a: &IntMatrix,
    tolerance: f64,
) -> Result<EigenclassReport> {
    let degrees = dynamical_degrees(model, a)?;
    let l1 = &degrees.lambda1;
    let mut out = EigenclassReport {
        status: EigenclassStatus::Evaluated,
        lambda1: l1.approx(),
        eigenvector: None,
        eigen_residual: 0.0,
        residuals: Vec::new(),
        tolerance,
    };
    if l1.kind == DominantKind::Real && l1.upper <= Q::one() {
        out.status = EigenclassStatus::EntropyZero;
        return Ok(out);
    }
    if l1.approx() <= 1.0 + tolerance && l1.kind == DominantKind::Real {
        out.status = EigenclassStatus::EntropyZero;
        return Ok(out);
    }
    if l1.kind != DominantKind::Real {
        out.status = EigenclassStatus::NotCertified("leading eigenvalue is not a certified real root".into());
        return Ok(out);
    }
    if l1.multiplicity != 1 {
        out.status = EigenclassStatus::NotCertified(format!(
            "leading eigenvalue has multiplicity {}",
            l1.multiplicity
        ));
        return Ok(out);
    }
    let am = to_rational(a);
    // Spectral radius may be attained at -lambda; pick the sign that is an eigenvalue.
    let mid = (&l1.lower + &l1.upper) / q(2);
    let sign_ok = |s: &Q| degrees.divisor_char_poly.eval(&(s * &l1.lower)).is_positive()
        != degrees.divisor_char_poly.eval(&(s * &l1.upper)).is_positive()
        || degrees.divisor_char_poly.eval(&(s * &l1.upper)).is_zero();
    let shift = if sign_ok(&Q::one()) { mid } else { -mid };
    let Some(zeta) = leading_eigenvector(&am, &shift) else {
        out.status = EigenclassStatus::NotCertified("inverse iteration failed".into());
        return Ok(out);
    };
    let az = linalg::mat_vec(&am, &zeta);
    out.eigen_residual = az
        .iter()
        .zip(&zeta)
        .map(|(x, z)| to_f64(&(x - &shift * z)).abs())
        .fold(0.0, f64::max);
    let zeta = DivisorClass::new(zeta);
    let mut push = |name: &'static str, value: f64| {
        out.residuals.push(Residual {
            name,
            value,
            within: value < tolerance,
        })
    };
    let zz = model.multiply_divisors(&zeta, &zeta)?;
    let max_component = |c: &CurveClass| -> Result<f64> {
        let mut m = 0.0f64;
        for k in 0..model.picard() {
            m = m.max(to_f64(&model.pair(&model.divisor_unit(k), c)?).abs());
        }
        Ok(m)
    };
    push("zeta^2", max_component(&zz)?);
    push("zeta^3", to_f64(&model.pair(&zeta, &zz)?).abs());
    push("zeta.c1^2", to_f64(&model.triple(&zeta, model.c1(), model.c1())?).abs());
    push("zeta.c2", to_f64(&model.pair(&zeta, model.c2())?).abs());
    if degrees.primitive_hint {
        let zc = model.multiply_divisors(&zeta, model.c1())?;
        push("zeta.c1", max_component(&zc)?);
    }
    out.eigenvector = Some(zeta);
    Ok(out)
}

/// A custom model with vanishing products and identity pairing of rank `4 + padding`,
/// carrying the companion matrix of the Salem polynomial `x^4 - x^3 - x^2 - x + 1` padded
/// by the identity; `c1` and `c2` sit in the padding coordinates.
pub fn salem_example(padding: usize) -> Result<(ThreefoldModel, IntMatrix)> {
    use crate::ring::{make_base, BaseSpec, CustomTables};
    let n = 4 + padding;
    let names = |p: &str| (1..=n).map(|k| format!("{p}{k}")).collect::<Vec<_>>();
    let mut pairing = vec![vec![Q::zero(); n]; n];
    for (i, row) in pairing.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    let mut c1 = vec![0i64; n];
    let mut c2 = vec![0i64; n];
    if padding > 0 {
        c1[4] = 2;
        c2[4] = 3;
    }
    let tables = CustomTables {
        label: "salem".into(),
        divisor_names: names("D"),
        curve_names: names("C"),
        mul2: vec![vec![CurveClass::zero(n); n]; n],
        pairing,
        c1: DivisorClass::from_ints(&c1),
        c2: CurveClass::from_ints(&c2),
        euler: 0,
        flags: Default::default(),
    };
    let model = make_base(&BaseSpec::Custom(tables))?;
    // companion of x^4 - x^3 - x^2 - x + 1 (low-to-high: 1, -1, -1, -1, 1)
    let low = [1i64, -1, -1, -1];
    let mut a = vec![vec![0i64; n]; n];
    for i in 1..4 {
        a[i][i - 1] = 1;
    }
    for (i, c) in low.iter().enumerate() {
        a[i][3] = -c;
    }
    for k in 4..n {
        a[k][k] = 1;
    }
    Ok((model, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::blow_up_point;
    use crate::ring::{make_base, BaseSpec};

    #[test]
    fn berkowitz_small() {
        let m = to_rational(&vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(characteristic_polynomial(&m), Poly::from_ints(&[-1, -1, 1]));
        let m = to_rational(&vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 1]]);
        // det(xI - M) = x^3 - 6x^2 + 11x - 7
        assert_eq!(characteristic_polynomial(&m), Poly::from_ints(&[-7, 11, -6, 1]));
    }

    #[test]
    fn identity_action() {
        let model = blow_up_point(&make_base(&BaseSpec::P3).unwrap());
        let id = vec![vec![1, 0], vec![0, 1]];
        assert!(validate_action(&model, &id).unwrap().is_empty());
        let r = dynamical_degrees(&model, &id).unwrap();
        assert_eq!((r.lambda1.lower.clone(), r.lambda1.upper.clone()), (q(1), q(1)));
        assert_eq!(r.entropy, 0.0);
        let e = eigenclass_constraints(&model, &id, 1e-8).unwrap();
        assert_eq!(e.summary(), "no conclusion: entropy zero regime");
    }

    #[test]
    fn violations() {
        let model = make_base(&BaseSpec::P3).unwrap();
        let v = validate_action(&model, &vec![vec![2]]).unwrap();
        assert!(v.contains(&Violation::Determinant(q(2))));
        assert_eq!(v[0].to_string(), "det = 2");
        let x = (0..2).fold(model, |m, _| blow_up_point(&m));
        let swap = vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]];
        assert!(validate_action(&x, &swap).unwrap().is_empty());
        let shear = vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 0, 1]];
        let v = validate_action(&x, &shear).unwrap();
        assert!(v.iter().any(|v| matches!(v, Violation::FormNotPreserved { .. })));
        assert!(validate_action(&x, &vec![vec![1]]).is_err());
    }

    #[test]
    fn golden_raw() {
        let r = raw_dynamical_degrees(&vec![vec![0, 1], vec![1, 1]]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(r.lambda1.minimal_polynomial, Some(Poly::from_ints(&[-1, -1, 1])));
        assert!(r.lambda1.minimal_certified);
        assert!((r.lambda1.approx() - phi).abs() < 1e-10);
        assert!((r.lambda2.approx() - phi).abs() < 1e-10);
        assert!(r.lambda1.width() <= interval_width());
        assert!(!r.primitive_hint);
        assert_eq!(r.log_concave, Some(true));
    }

    #[test]
    fn negative_dominant_root() {
        // eigenvalues -phi and 1/phi
        let r = raw_dynamical_degrees(&vec![vec![0, 1], vec![1, -1]]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.lambda1.approx() - phi).abs() < 1e-10);
        assert_eq!(r.lambda1.minimal_polynomial, Some(Poly::from_ints(&[-1, -1, 1])));
    }

    #[test]
    fn rationality() {
        let consistent = rationality_obstruction(&Poly::from_ints(&[1, -3, 1])).unwrap();
        assert_eq!(consistent, RationalityCheck::Consistent { rational_roots: vec![] });
        assert!(matches!(
            rationality_obstruction(&Poly::from_ints(&[-2, 1])).unwrap(),
            RationalityCheck::NotUnimodular { .. }
        ));
        let p = Poly::from_ints(&[-1, 1]).mul(&Poly::from_ints(&[-1, 1])).mul(&Poly::from_ints(&[1, 1]));
        assert_eq!(
            rationality_obstruction(&p).unwrap(),
            RationalityCheck::Consistent { rational_roots: vec![1, -1] }
        );
        assert!(rationality_obstruction(&Poly::from_ints(&[1, 2])).is_err());
    }

    #[test]
    fn salem_residuals() {
        let (model, a) = salem_example(2).unwrap();
        assert!(validate_action(&model, &a).unwrap().is_empty());
        let r = eigenclass_constraints(&model, &a, 1e-8).unwrap();
        assert_eq!(r.status, EigenclassStatus::Evaluated);
        assert!(r.all_within());
        assert!(r.eigen_residual < 1e-8);
        assert!((r.lambda1 - 1.722_083_805_739_043).abs() < 1e-9);
        let d = dynamical_degrees(&model, &a).unwrap();
        assert!(d.lambda1.minimal_certified);
        assert_eq!(d.lambda1.minimal_polynomial, Some(Poly::from_ints(&[1, -1, -1, -1, 1])));
    }

    #[test]
    fn finite_order_has_radius_one() {
        let r = raw_dynamical_degrees(&vec![vec![0, -1], vec![1, -1]]).unwrap();
        assert_eq!(r.lambda1.lower, q(1));
        assert_eq!(r.lambda1.upper, q(1));
    }
}

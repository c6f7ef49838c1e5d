//! Néron–Severi and curve-class spaces of a threefold with their product and pairing.
//!
//! A [`ThreefoldModel`] stores the divisor-by-divisor products (`mul2`) and the
//! divisor/curve pairing; the triple product is always derived from those two
//! tables, so its full symmetry is a property that can be checked rather than
//! assumed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::Zero;

use crate::cases::complete_intersection_chern;
use crate::classes::{CurveClass, DivisorClass};
use crate::error::{check_len, Error, Result};
use crate::linalg;
use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Divisor,
    Curve,
}

/// Where a basis element came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Origin {
    Base,
    /// Pullback of the element of the same name one step earlier.
    Pullback(String),
    /// Created by the blowup step with this (zero-based) index.
    Exceptional(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub kind: ClassKind,
    pub origin: Origin,
}

impl BasisElement {
    fn base(name: &str, kind: ClassKind) -> Self {
        Self {
            name: name.to_string(),
            kind,
            origin: Origin::Base,
        }
    }
}

/// Hypotheses attached to a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseFlag {
    /// Néron–Severi rank one.
    PicardRankOne,
    /// `c2 . zeta > 0` for every non-zero movable class `zeta`.
    C2MovablePositive,
    /// The model is asserted to satisfy Condition A.
    ConditionA,
    /// The model is asserted to satisfy Condition B.
    ConditionB,
    /// Tables were supplied by the user; the other flags are assertions, not facts.
    UnverifiedHypotheses,
}

impl BaseFlag {
    pub const ALL: [BaseFlag; 5] = [
        BaseFlag::PicardRankOne,
        BaseFlag::C2MovablePositive,
        BaseFlag::ConditionA,
        BaseFlag::ConditionB,
        BaseFlag::UnverifiedHypotheses,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BaseFlag::PicardRankOne => "picard-rank-1",
            BaseFlag::C2MovablePositive => "c2-movable-positive",
            BaseFlag::ConditionA => "condition-a",
            BaseFlag::ConditionB => "condition-b",
            BaseFlag::UnverifiedHypotheses => "unverified-hypotheses",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.as_str() == text)
    }
}

impl fmt::Display for BaseFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Explicit tables for a user-supplied base model.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTables {
    pub label: String,
    pub divisor_names: Vec<String>,
    pub curve_names: Vec<String>,
    /// `mul2[i][j]` is the curve class of `D_i . D_j`.
    pub mul2: Vec<Vec<CurveClass>>,
    /// `pairing[i][a]` is `D_i . C_a`.
    pub pairing: Vec<Vec<Q>>,
    pub c1: DivisorClass,
    pub c2: CurveClass,
    pub euler: i64,
    /// Hypotheses the user asserts for this base.
    pub flags: BTreeSet<BaseFlag>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseSpec {
    P3,
    P2xP1,
    P1Cubed,
    CompleteIntersection { n: u32, degrees: Vec<u32> },
    Custom(CustomTables),
}

impl fmt::Display for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSpec::P3 => f.write_str("p3"),
            BaseSpec::P2xP1 => f.write_str("p2xp1"),
            BaseSpec::P1Cubed => f.write_str("p1cubed"),
            BaseSpec::CompleteIntersection { n, degrees } => {
                let d: Vec<String> = degrees.iter().map(u32::to_string).collect();
                write!(f, "ci({n};{})", d.join(","))
            }
            BaseSpec::Custom(t) => write!(f, "custom({})", t.label),
        }
    }
}

/// Which kind of blowup produced a model from its predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Point,
    Curve {
        /// Center class in the model before the step.
        class: CurveClass,
        genus: u32,
        gamma: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    /// Index of the new exceptional divisor (`E` or `F`).
    pub divisor_index: usize,
    /// Index of the new curve (`L` or `M`).
    pub curve_index: usize,
}

pub(crate) type SparseCurve = Vec<(usize, Q)>;

/// Intersection-theoretic state of a smooth projective threefold.
///
/// Models are immutable; blowups build new models.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreefoldModel {
    pub(crate) label: String,
    pub(crate) divisor_basis: Vec<BasisElement>,
    pub(crate) curve_basis: Vec<BasisElement>,
    /// Non-zero products `D_i . D_j` for `i <= j`, as sparse curve vectors.
    pub(crate) products: BTreeMap<(usize, usize), SparseCurve>,
    /// Non-zero pairings `D_i . C_a`.
    pub(crate) pairing: BTreeMap<(usize, usize), Q>,
    pub(crate) c1: DivisorClass,
    pub(crate) c2: CurveClass,
    pub(crate) euler: i64,
    pub(crate) flags: BTreeSet<BaseFlag>,
    pub(crate) steps: Vec<StepRecord>,
}

fn names(basis: &[BasisElement]) -> Vec<String> {
    basis.iter().map(|b| b.name.clone()).collect()
}

impl ThreefoldModel {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn divisor_basis(&self) -> &[BasisElement] {
        &self.divisor_basis
    }

    pub fn curve_basis(&self) -> &[BasisElement] {
        &self.curve_basis
    }

    pub fn divisor_names(&self) -> Vec<String> {
        names(&self.divisor_basis)
    }

    pub fn curve_names(&self) -> Vec<String> {
        names(&self.curve_basis)
    }

    pub fn divisor_index(&self, name: &str) -> Option<usize> {
        self.divisor_basis.iter().position(|b| b.name == name)
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curve_basis.iter().position(|b| b.name == name)
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn c2(&self) -> &CurveClass {
        &self.c2
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    /// Picard number: the size of the divisor basis.
    pub fn picard(&self) -> usize {
        self.divisor_basis.len()
    }

    pub fn flags(&self) -> &BTreeSet<BaseFlag> {
        &self.flags
    }

    pub fn has_flag(&self, flag: BaseFlag) -> bool {
        self.flags.contains(&flag)
    }

    /// Blowup steps applied since the base model.
    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn divisor_unit(&self, index: usize) -> DivisorClass {
        DivisorClass::unit(self.picard(), index)
    }

    pub fn curve_unit(&self, index: usize) -> CurveClass {
        CurveClass::unit(self.picard(), index)
    }

    pub fn divisor(&self, name: &str) -> Result<DivisorClass> {
        self.divisor_index(name)
            .map(|i| self.divisor_unit(i))
            .ok_or_else(|| Error::InvalidInput(format!("unknown divisor basis element `{name}`")))
    }

    pub fn curve(&self, name: &str) -> Result<CurveClass> {
        self.curve_index(name)
            .map(|i| self.curve_unit(i))
            .ok_or_else(|| Error::InvalidInput(format!("unknown curve basis element `{name}`")))
    }

    /// `D_i . D_j` for basis divisors.
    pub fn basis_product(&self, i: usize, j: usize) -> CurveClass {
        let key = if i <= j { (i, j) } else { (j, i) };
        let mut out = CurveClass::zero(self.picard());
        if let Some(entries) = self.products.get(&key) {
            for (a, c) in entries {
                out.set(*a, c.clone());
            }
        }
        out
    }

    /// `D_i . C_a` for basis elements.
    pub fn basis_pairing(&self, i: usize, a: usize) -> Q {
        self.pairing.get(&(i, a)).cloned().unwrap_or_else(Q::zero)
    }

    /// Dense pairing matrix, rows indexed by divisors and columns by curves.
    pub fn pairing_matrix(&self) -> Vec<Vec<Q>> {
        let n = self.picard();
        let mut m = vec![vec![Q::zero(); n]; n];
        for ((i, a), v) in &self.pairing {
            m[*i][*a] = v.clone();
        }
        m
    }

    /// `T(i, j, k) = pair(D_i . D_j, D_k)` on basis divisors.
    pub fn basis_triple(&self, i: usize, j: usize, k: usize) -> Q {
        let key = if i <= j { (i, j) } else { (j, i) };
        let mut total = Q::zero();
        if let Some(entries) = self.products.get(&key) {
            for (a, c) in entries {
                if let Some(p) = self.pairing.get(&(k, *a)) {
                    total += c * p;
                }
            }
        }
        total
    }

    fn check_divisor(&self, context: &'static str, d: &DivisorClass) -> Result<()> {
        check_len(context, self.picard(), d.len())
    }

    fn check_curve(&self, context: &'static str, c: &CurveClass) -> Result<()> {
        check_len(context, self.picard(), c.len())
    }

    /// Bilinear extension of the stored products.
    pub fn multiply_divisors(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<CurveClass> {
        self.check_divisor("multiply_divisors", d1)?;
        self.check_divisor("multiply_divisors", d2)?;
        let mut out = vec![Q::zero(); self.picard()];
        for ((i, j), entries) in &self.products {
            let (ci, cj) = (&d1.coefficients()[*i], &d2.coefficients()[*j]);
            let mut weight = ci * cj;
            if i != j {
                weight += &d1.coefficients()[*j] * &d2.coefficients()[*i];
            }
            if weight.is_zero() {
                continue;
            }
            for (a, c) in entries {
                out[*a] += &weight * c;
            }
        }
        Ok(CurveClass::new(out))
    }

    pub fn pair(&self, d: &DivisorClass, c: &CurveClass) -> Result<Q> {
        self.check_divisor("pair", d)?;
        self.check_curve("pair", c)?;
        let mut total = Q::zero();
        for ((i, a), v) in &self.pairing {
            let (x, y) = (&d.coefficients()[*i], &c.coefficients()[*a]);
            if !x.is_zero() && !y.is_zero() {
                total += x * y * v;
            }
        }
        Ok(total)
    }

    pub fn triple(&self, d1: &DivisorClass, d2: &DivisorClass, d3: &DivisorClass) -> Result<Q> {
        self.check_divisor("triple", d3)?;
        let product = self.multiply_divisors(d1, d2)?;
        self.pair(d3, &product)
    }

    /// Validates every structural invariant; returns the list of violations.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.picard();
        if self.curve_basis.len() != n {
            out.push(format!(
                "divisor basis has {} elements but curve basis has {}",
                n,
                self.curve_basis.len()
            ));
            return out;
        }
        for (basis, kind) in [(&self.divisor_basis, "divisor"), (&self.curve_basis, "curve")] {
            let mut seen = BTreeSet::new();
            for b in basis.iter() {
                if !seen.insert(b.name.as_str()) {
                    out.push(format!("duplicate {kind} basis name `{}`", b.name));
                }
            }
        }
        if self.c1.len() != n {
            out.push(format!("c1 has {} coordinates, expected {n}", self.c1.len()));
        }
        if self.c2.len() != n {
            out.push(format!("c2 has {} coordinates, expected {n}", self.c2.len()));
        }
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let t = self.basis_triple(i, j, k);
                    let perms = [
                        self.basis_triple(i, k, j),
                        self.basis_triple(j, k, i),
                    ];
                    if perms.iter().any(|p| *p != t) {
                        out.push(format!(
                            "triple product not symmetric on ({}, {}, {})",
                            self.divisor_basis[i].name,
                            self.divisor_basis[j].name,
                            self.divisor_basis[k].name
                        ));
                    }
                }
            }
        }
        if linalg::determinant(&self.pairing_matrix()).is_zero() {
            out.push("pairing matrix is singular".to_string());
        }
        out
    }

    /// Compares the intersection data (bases, tables, Chern classes, Euler number, Picard
    /// number), ignoring label, basis provenance, step history and flags.
    pub fn same_intersection_data(&self, other: &ThreefoldModel) -> bool {
        self.divisor_names() == other.divisor_names()
            && self.curve_names() == other.curve_names()
            && self.products == other.products
            && self.pairing == other.pairing
            && self.c1 == other.c1
            && self.c2 == other.c2
            && self.euler == other.euler
    }

    /// Dense `mul2` table, used for export.
    pub fn mul2_table(&self) -> Vec<Vec<CurveClass>> {
        let n = self.picard();
        (0..n)
            .map(|i| (0..n).map(|j| self.basis_product(i, j)).collect())
            .collect()
    }

    /// Exports the model as custom tables (the inverse of [`make_base`] on `Custom`).
    pub fn to_custom_tables(&self) -> CustomTables {
        CustomTables {
            label: self.label.clone(),
            divisor_names: self.divisor_names(),
            curve_names: self.curve_names(),
            mul2: self.mul2_table(),
            pairing: self.pairing_matrix(),
            c1: self.c1.clone(),
            c2: self.c2.clone(),
            euler: self.euler,
            flags: self
                .flags
                .iter()
                .copied()
                .filter(|f| *f != BaseFlag::UnverifiedHypotheses)
                .collect(),
        }
    }
}

fn sparse(c: &CurveClass) -> SparseCurve {
    c.coefficients()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(a, v)| (a, v.clone()))
        .collect()
}

struct Builder {
    label: String,
    divisors: Vec<&'static str>,
    curves: Vec<&'static str>,
    products: Vec<(usize, usize, Vec<i64>)>,
    pairing: Vec<(usize, usize, i64)>,
    c1: Vec<i64>,
    c2: Vec<i64>,
    euler: i64,
    flags: Vec<BaseFlag>,
}

impl Builder {
    fn build(self) -> ThreefoldModel {
        let n = self.divisors.len();
        let mut products = BTreeMap::new();
        for (i, j, c) in self.products {
            let key = if i <= j { (i, j) } else { (j, i) };
            let class = CurveClass::from_ints(&c);
            debug_assert_eq!(class.len(), n);
            products.insert(key, sparse(&class));
        }
        let pairing = self
            .pairing
            .into_iter()
            .filter(|(_, _, v)| *v != 0)
            .map(|(i, a, v)| ((i, a), q(v)))
            .collect();
        ThreefoldModel {
            label: self.label,
            divisor_basis: self
                .divisors
                .iter()
                .map(|s| BasisElement::base(s, ClassKind::Divisor))
                .collect(),
            curve_basis: self
                .curves
                .iter()
                .map(|s| BasisElement::base(s, ClassKind::Curve))
                .collect(),
            products,
            pairing,
            c1: DivisorClass::from_ints(&self.c1),
            c2: CurveClass::from_ints(&self.c2),
            euler: self.euler,
            flags: self.flags.into_iter().collect(),
            steps: Vec::new(),
        }
    }
}

/// Builds one of the standard base threefolds or validates custom tables.
pub fn make_base(spec: &BaseSpec) -> Result<ThreefoldModel> {
    let model = match spec {
        // h^2 = l, h.l = 1; c(P^3) = (1+h)^4 gives c1 = 4h, c2 = 6h^2.
        BaseSpec::P3 => Builder {
            label: "P3".into(),
            divisors: vec!["h"],
            curves: vec!["l"],
            products: vec![(0, 0, vec![1])],
            pairing: vec![(0, 0, 1)],
            c1: vec![4],
            c2: vec![6],
            euler: 4,
            flags: vec![BaseFlag::PicardRankOne, BaseFlag::C2MovablePositive],
        }
        .build(),
        // A = P2 x pt, B = P1 x P1; f1 = P1 x pt, f2 = pt x P1.
        BaseSpec::P2xP1 => Builder {
            label: "P2xP1".into(),
            divisors: vec!["A", "B"],
            curves: vec!["f1", "f2"],
            products: vec![(0, 1, vec![1, 0]), (1, 1, vec![0, 1])],
            pairing: vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
            c1: vec![2, 3],
            c2: vec![6, 3],
            euler: 6,
            flags: vec![BaseFlag::C2MovablePositive],
        }
        .build(),
        // H_i pulled back from a point of the i-th factor; f_k is the curve along factor k,
        // so H_i . H_j = f_k for {i, j, k} = {1, 2, 3} and H_i . f_k = delta_ik.
        BaseSpec::P1Cubed => Builder {
            label: "P1xP1xP1".into(),
            divisors: vec!["H1", "H2", "H3"],
            curves: vec!["f1", "f2", "f3"],
            products: vec![
                (0, 1, vec![0, 0, 1]),
                (0, 2, vec![0, 1, 0]),
                (1, 2, vec![1, 0, 0]),
            ],
            pairing: vec![(0, 0, 1), (1, 1, 1), (2, 2, 1)],
            c1: vec![2, 2, 2],
            c2: vec![4, 4, 4],
            euler: 8,
            flags: vec![BaseFlag::C2MovablePositive],
        }
        .build(),
        BaseSpec::CompleteIntersection { n, degrees } => {
            let chern = complete_intersection_chern(*n, degrees)?;
            // Curve generator is h^2 itself, so h . h2 = deg X.
            let mut m = Builder {
                label: spec.to_string(),
                divisors: vec!["h"],
                curves: vec!["h2"],
                products: vec![(0, 0, vec![1])],
                pairing: vec![],
                c1: vec![chern.c1],
                c2: vec![chern.c2],
                euler: chern.euler,
                flags: vec![BaseFlag::PicardRankOne, BaseFlag::C2MovablePositive],
            }
            .build();
            m.pairing.insert((0, 0), q(chern.degree));
            m
        }
        BaseSpec::Custom(tables) => return custom_model(tables),
    };
    Ok(model)
}

fn custom_model(t: &CustomTables) -> Result<ThreefoldModel> {
    let n = t.divisor_names.len();
    let mut problems = Vec::new();
    if t.curve_names.len() != n {
        problems.push(format!(
            "size mismatch: {} divisors but {} curves",
            n,
            t.curve_names.len()
        ));
    }
    if t.mul2.len() != n || t.mul2.iter().any(|row| row.len() != n) {
        problems.push(format!("size mismatch: mul2 must be {n}x{n}"));
    } else if t.mul2.iter().flatten().any(|c| c.len() != n) {
        problems.push(format!("size mismatch: mul2 entries must have {n} coordinates"));
    }
    if t.pairing.len() != n || t.pairing.iter().any(|row| row.len() != n) {
        problems.push(format!("size mismatch: pairing must be {n}x{n}"));
    }
    if t.c1.len() != n || t.c2.len() != n {
        problems.push(format!("size mismatch: c1 and c2 must have {n} coordinates"));
    }
    if !problems.is_empty() {
        return Err(Error::InvalidModel(problems));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if t.mul2[i][j] != t.mul2[j][i] {
                problems.push(format!(
                    "mul2 not symmetric: {}.{} != {}.{}",
                    t.divisor_names[i], t.divisor_names[j], t.divisor_names[j], t.divisor_names[i]
                ));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::InvalidModel(problems));
    }
    let mut products = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let s = sparse(&t.mul2[i][j]);
            if !s.is_empty() {
                products.insert((i, j), s);
            }
        }
    }
    let mut pairing = BTreeMap::new();
    for (i, row) in t.pairing.iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            if !v.is_zero() {
                pairing.insert((i, a), v.clone());
            }
        }
    }
    let mut flags = t.flags.clone();
    flags.insert(BaseFlag::UnverifiedHypotheses);
    let model = ThreefoldModel {
        label: t.label.clone(),
        divisor_basis: t
            .divisor_names
            .iter()
            .map(|s| BasisElement::base(s, ClassKind::Divisor))
            .collect(),
        curve_basis: t
            .curve_names
            .iter()
            .map(|s| BasisElement::base(s, ClassKind::Curve))
            .collect(),
        products,
        pairing,
        c1: t.c1.clone(),
        c2: t.c2.clone(),
        euler: t.euler,
        flags,
        steps: Vec::new(),
    };
    let violations = model.invariant_violations();
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(Error::InvalidModel(violations))
    }
}

//! Exact rational linear programming with Farkas certificates.
//!
//! Constraints are affine forms `a . x + b` over free variables, each required to be
//! `>= 0` or `= 0`. [`rational_feasible`] maximizes one variable with a two-phase dense
//! simplex under Bland's rule and returns dual multipliers that can be replayed against
//! the constraint list without trusting the solver.

use std::fmt;

use num::{Signed, Zero};

use crate::error::{check_len, Error, Result};
use crate::rational::{one, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `form >= 0`
    NonNegative,
    /// `form = 0`
    Zero,
}

/// An affine form `coefficients . x + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coefficients: Vec<Q>,
    pub constant: Q,
}

impl LinearForm {
    pub fn new(coefficients: Vec<Q>, constant: Q) -> Self {
        Self {
            coefficients,
            constant,
        }
    }

    pub fn homogeneous(coefficients: Vec<Q>) -> Self {
        Self::new(coefficients, Q::zero())
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        self.coefficients
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (a, x)| acc + a * x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub label: String,
    pub form: LinearForm,
    pub kind: ConstraintKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSystem {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn new(variables: Vec<String>) -> Self {
        Self {
            variables,
            constraints: Vec::new(),
        }
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn push(&mut self, label: impl Into<String>, form: LinearForm, kind: ConstraintKind) {
        self.constraints.push(Constraint {
            label: label.into(),
            form,
            kind,
        });
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.kind == ConstraintKind::Zero)
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints
            .iter()
            .filter(|c| c.kind == ConstraintKind::NonNegative)
    }

    fn validate(&self) -> Result<()> {
        for c in &self.constraints {
            check_len("constraint form", self.variables.len(), c.form.coefficients.len())?;
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, point: &[Q]) -> bool {
        self.constraints.iter().all(|c| {
            let v = c.form.eval(point);
            match c.kind {
                ConstraintKind::NonNegative => !v.is_negative(),
                ConstraintKind::Zero => v.is_zero(),
            }
        })
    }
}

/// One multiplier per constraint, in constraint order. Multipliers of `>= 0` constraints
/// are non-negative; multipliers of equalities may have either sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<Q>,
}

impl Certificate {
    fn combination(&self, system: &ConstraintSystem) -> Option<LinearForm> {
        if self.multipliers.len() != system.constraints.len() {
            return None;
        }
        let n = system.variables.len();
        let mut coefficients = vec![Q::zero(); n];
        let mut constant = Q::zero();
        for (y, c) in self.multipliers.iter().zip(&system.constraints) {
            if c.kind == ConstraintKind::NonNegative && y.is_negative() {
                return None;
            }
            if y.is_zero() {
                continue;
            }
            for (acc, a) in coefficients.iter_mut().zip(&c.form.coefficients) {
                *acc += y * a;
            }
            constant += y * &c.form.constant;
        }
        Some(LinearForm::new(coefficients, constant))
    }

    /// Replays the certificate as a proof of `objective <= bound` and returns the bound.
    ///
    /// Valid when the weighted sum of constraints has variable part exactly `-x_objective`.
    pub fn replay_bound(&self, system: &ConstraintSystem, objective: usize) -> Option<Q> {
        let sum = self.combination(system)?;
        let ok = sum.coefficients.iter().enumerate().all(|(j, a)| {
            if j == objective {
                *a == -one()
            } else {
                a.is_zero()
            }
        });
        ok.then_some(sum.constant)
    }

    /// Replays the certificate as a proof of infeasibility: the weighted sum of
    /// constraints is a negative constant.
    pub fn replay_infeasible(&self, system: &ConstraintSystem) -> bool {
        match self.combination(system) {
            Some(sum) => sum.coefficients.iter().all(Zero::is_zero) && sum.constant.is_negative(),
            None => false,
        }
    }

    /// One line per constraint: `label<TAB>multiplier`, rationals as `p/q`.
    pub fn render(&self, system: &ConstraintSystem) -> String {
        let mut out = String::new();
        for (y, c) in self.multipliers.iter().zip(&system.constraints) {
            out.push_str(&format!("{}\t{}\n", c.label, y));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Q,
        point: Vec<Q>,
        certificate: Certificate,
    },
    Unbounded {
        point: Vec<Q>,
        ray: Vec<Q>,
    },
    Infeasible {
        certificate: Certificate,
    },
}

impl fmt::Display for LpOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpOutcome::Optimal { value, .. } => write!(f, "max = {value}"),
            LpOutcome::Unbounded { .. } => f.write_str("unbounded"),
            LpOutcome::Infeasible { .. } => f.write_str("infeasible"),
        }
    }
}

struct Tableau {
    /// `rows[i]` has `cols + 1` entries; the last one is the right-hand side.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// `z_j - c_j` per column; last entry is the objective value.
    obj: Vec<Q>,
    cols: usize,
}

enum PivotResult {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn set_objective(&mut self, costs: &[Q]) {
        let mut obj: Vec<Q> = costs.iter().map(|c| -c).collect();
        obj.push(Q::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(row) {
                if !t.is_zero() {
                    *o += cb * t;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if p != one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        let nonzero: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Q>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Runs simplex iterations with Bland's rule; `allowed` filters entering columns.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> PivotResult {
        loop {
            let Some(enter) = (0..self.cols).find(|&j| allowed(j) && self.obj[j].is_negative())
            else {
                return PivotResult::Optimal;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let t = &row[enter];
                if !t.is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / t;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return PivotResult::Unbounded(enter),
            }
        }
    }

    fn basic_values(&self) -> Vec<Q> {
        let mut w = vec![Q::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            w[b] = self.rows[i][self.cols].clone();
        }
        w
    }
}

/// Maximizes variable `objective` over the polyhedron described by `system`.
pub fn rational_feasible(system: &ConstraintSystem, objective: usize) -> Result<LpOutcome> {
    system.validate()?;
    let n = system.variables.len();
    if objective >= n {
        return Err(Error::InvalidInput(format!(
            "objective index {objective} out of range for {n} variables"
        )));
    }
    let m = system.constraints.len();
    let geq: Vec<usize> = (0..m)
        .filter(|&i| system.constraints[i].kind == ConstraintKind::NonNegative)
        .collect();
    // columns: p (n) | q (n) | slacks (one per >= row) | artificials (m)
    let slack_start = 2 * n;
    let art_start = slack_start + geq.len();
    let cols = art_start + m;
    let mut slack_of = vec![None; m];
    for (k, &i) in geq.iter().enumerate() {
        slack_of[i] = Some(slack_start + k);
    }
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for (i, c) in system.constraints.iter().enumerate() {
        // a.x + b >= 0  <=>  a.(p - q) - s = -b
        let rhs = -&c.form.constant;
        let sigma = if rhs.is_negative() { -one() } else { one() };
        let mut row = vec![Q::zero(); cols + 1];
        for (j, a) in c.form.coefficients.iter().enumerate() {
            if !a.is_zero() {
                row[j] = &sigma * a;
                row[n + j] = -(&sigma * a);
            }
        }
        if let Some(s) = slack_of[i] {
            row[s] = -sigma.clone();
        }
        row[art_start + i] = one();
        row[cols] = &sigma * rhs;
        signs.push(sigma);
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (art_start..art_start + m).collect(),
        obj: Vec::new(),
        cols,
    };

    // Phase 1: maximize -sum(artificials).
    let mut phase1 = vec![Q::zero(); cols];
    for c in phase1.iter_mut().skip(art_start) {
        *c = -one();
    }
    t.set_objective(&phase1);
    t.run(&|_| true);
    let duals = |t: &Tableau, costs: &[Q]| -> Vec<Q> {
        // pi_i = (z - c)_art_i + c_art_i; y_i = -sigma_i pi_i
        (0..m)
            .map(|i| {
                let pi = &t.obj[art_start + i] + &costs[art_start + i];
                -(&signs[i] * pi)
            })
            .collect()
    };
    if t.obj[cols].is_negative() {
        return Ok(LpOutcome::Infeasible {
            certificate: Certificate {
                multipliers: duals(&t, &phase1),
            },
        });
    }
    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= art_start {
            if let Some(c) = (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    // Phase 2: maximize x_objective = p_obj - q_obj.
    let mut costs = vec![Q::zero(); cols];
    costs[objective] = one();
    costs[n + objective] = -one();
    t.set_objective(&costs);
    let result = t.run(&|j| j < art_start);
    let w = t.basic_values();
    let point: Vec<Q> = (0..n).map(|j| &w[j] - &w[n + j]).collect();
    match result {
        PivotResult::Optimal => Ok(LpOutcome::Optimal {
            value: t.obj[cols].clone(),
            point,
            certificate: Certificate {
                multipliers: duals(&t, &costs),
            },
        }),
        PivotResult::Unbounded(enter) => {
            let mut dir = vec![Q::zero(); cols];
            dir[enter] = one();
            for (i, &b) in t.basis.iter().enumerate() {
                dir[b] = -&t.rows[i][enter];
            }
            let ray = (0..n).map(|j| &dir[j] - &dir[n + j]).collect();
            Ok(LpOutcome::Unbounded { point, ray })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn form(c: &[i64], k: i64) -> LinearForm {
        LinearForm::new(c.iter().map(|&x| q(x)).collect(), q(k))
    }

    #[test]
    fn squeezed_variable() {
        let mut s = ConstraintSystem::new(vec!["a".into()]);
        s.push("a>=0", form(&[1], 0), ConstraintKind::NonNegative);
        s.push("-a>=0", form(&[-1], 0), ConstraintKind::NonNegative);
        match rational_feasible(&s, 0).unwrap() {
            LpOutcome::Optimal {
                value, certificate, ..
            } => {
                assert_eq!(value, q(0));
                assert_eq!(certificate.replay_bound(&s, 0), Some(q(0)));
                assert_eq!(certificate.multipliers, vec![q(0), q(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_ray() {
        let mut s = ConstraintSystem::new(vec!["a".into()]);
        s.push("a>=0", form(&[1], 0), ConstraintKind::NonNegative);
        match rational_feasible(&s, 0).unwrap() {
            LpOutcome::Unbounded { ray, .. } => assert!(ray[0].is_positive()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_certificate() {
        let mut s = ConstraintSystem::new(vec!["a".into(), "b".into()]);
        s.push("a-1>=0", form(&[1, 0], -1), ConstraintKind::NonNegative);
        s.push("a+b=0", form(&[1, 1], 0), ConstraintKind::Zero);
        s.push("b>=0", form(&[0, 1], 0), ConstraintKind::NonNegative);
        match rational_feasible(&s, 0).unwrap() {
            LpOutcome::Infeasible { certificate } => {
                assert!(certificate.replay_infeasible(&s))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounded_optimum_with_offsets() {
        // max x s.t. x + 2y <= 4, x - y <= 1/2, x, y >= 0  ->  x = 5/3
        let mut s = ConstraintSystem::new(vec!["x".into(), "y".into()]);
        s.push("c1", form(&[-1, -2], 4), ConstraintKind::NonNegative);
        s.push("c2", LinearForm::new(vec![q(-1), q(1)], frac(1, 2)), ConstraintKind::NonNegative);
        s.push("x", form(&[1, 0], 0), ConstraintKind::NonNegative);
        s.push("y", form(&[0, 1], 0), ConstraintKind::NonNegative);
        match rational_feasible(&s, 0).unwrap() {
            LpOutcome::Optimal {
                value,
                point,
                certificate,
            } => {
                assert_eq!(value, frac(5, 3));
                assert!(s.is_feasible_point(&point));
                assert_eq!(certificate.replay_bound(&s, 0), Some(frac(5, 3)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        let mut s = ConstraintSystem::new(vec!["a".into()]);
        s.push("bad", form(&[1, 2], 0), ConstraintKind::NonNegative);
        assert!(rational_feasible(&s, 0).is_err());
        let s = ConstraintSystem::new(vec!["a".into()]);
        assert!(rational_feasible(&s, 3).is_err());
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let mut s = ConstraintSystem::new(vec!["a".into()]);
        s.push("a>=0", form(&[1], 0), ConstraintKind::NonNegative);
        s.push("-a>=0", form(&[-1], 0), ConstraintKind::NonNegative);
        let bad = Certificate {
            multipliers: vec![q(1), q(1)],
        };
        assert_eq!(bad.replay_bound(&s, 0), None);
        let negative = Certificate {
            multipliers: vec![q(-1), q(0)],
        };
        assert_eq!(negative.replay_bound(&s, 0), None);
    }
}

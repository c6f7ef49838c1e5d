//! `P3` blown up at `n` general points and then along all lines joining them.
//!
//! For a nef class `zeta = u - sum beta_l E_l - sum alpha_ij F_ij` with `zeta^2 = 0`, the
//! constraints `zeta . c2 = 0` and `zeta . c1^2 = 0` are linear in `deg u`, the `beta_l`
//! and the aggregate `S = sum alpha_ij`. Their coefficients are computed through the
//! blowup engine; extra nef inequalities come from curves through the points. The
//! checker maximizes `deg u` and reports whether zero is forced.

use num::Zero;

use crate::blowup::{blow_up_curve, blow_up_point, line_strict_transform};
use crate::classes::DivisorClass;
use crate::conditions::lp::{
    rational_feasible, Certificate, ConstraintKind, ConstraintSystem, LinearForm, LpOutcome,
};
use crate::error::{Error, Result};
use crate::rational::{frac, one, Q};
use crate::ring::{make_base, BaseSpec, ThreefoldModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P3LinesReport {
    pub n: usize,
    pub forced: bool,
    pub system: ConstraintSystem,
    pub outcome: LpOutcome,
    /// Which family of nef inequalities was used.
    pub regime: &'static str,
}

impl P3LinesReport {
    pub fn verdict(&self) -> &'static str {
        if self.forced {
            "deg(u)=0 forced"
        } else {
            "inconclusive"
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            LpOutcome::Optimal { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    /// Replays the certificate: the weighted constraints must sum to `-deg u <= 0`.
    pub fn certificate_replays(&self) -> bool {
        self.certificate()
            .and_then(|c| c.replay_bound(&self.system, 0))
            .is_some_and(|bound| bound.is_zero())
    }
}

/// Builds `X1` (points) and `X2` (points, then every joining line).
fn models(n: usize) -> Result<(ThreefoldModel, ThreefoldModel)> {
    let x1 = (0..n).fold(make_base(&BaseSpec::P3)?, |m, _| blow_up_point(&m));
    let mut x2 = x1.clone();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let mut center = line_strict_transform(&x1, &[i, j], 1)?;
            center.class = center.class.extended(x2.picard());
            x2 = blow_up_curve(&x2, &center)?;
        }
    }
    Ok((x1, x2))
}

/// Coefficients of `zeta . target` in `(deg u, beta_1.., alpha_ij..)`, where `target`
/// is the linear functional `D -> value(D)` on the basis.
fn coefficients(x2: &ThreefoldModel, n: usize, value: impl Fn(&DivisorClass) -> Result<Q>) -> Result<(Q, Vec<Q>, Vec<Q>)> {
    let h = value(&x2.divisor_unit(0))?;
    let betas = (1..=n)
        .map(|l| value(&x2.divisor_unit(l)).map(|v| -v))
        .collect::<Result<Vec<_>>>()?;
    let alphas = ((n + 1)..x2.picard())
        .map(|k| value(&x2.divisor_unit(k)).map(|v| -v))
        .collect::<Result<Vec<_>>>()?;
    Ok((h, betas, alphas))
}

/// All `alpha` coefficients of a form must agree so they can be aggregated into `S`.
fn uniform(alphas: &[Q], what: &str) -> Result<Q> {
    let first = alphas.first().cloned().unwrap_or_else(Q::zero);
    if alphas.iter().any(|a| *a != first) {
        return Err(Error::Degenerate(format!(
            "{what}: exceptional coefficients are not uniform"
        )));
    }
    Ok(first)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn check_p3_points_lines(n: usize) -> Result<P3LinesReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let (x1, x2) = models(n)?;
    let mut variables = vec!["deg_u".to_string()];
    variables.extend((1..=n).map(|l| format!("beta{l}")));
    variables.push("S".into());
    let width = variables.len();
    let s_index = width - 1;
    let mut system = ConstraintSystem::new(variables);

    let c2 = x2.c2().clone();
    let (h, b, a) = coefficients(&x2, n, |d| x2.pair(d, &c2))?;
    let mut form = vec![Q::zero(); width];
    form[0] = h;
    form[1..=n].clone_from_slice(&b);
    form[s_index] = uniform(&a, "zeta.c2")?;
    system.push("zeta.c2=0", LinearForm::homogeneous(form), ConstraintKind::Zero);

    let c1c1 = x2.multiply_divisors(x2.c1(), x2.c1())?;
    let (h, b, a) = coefficients(&x2, n, |d| x2.pair(d, &c1c1))?;
    let mut form = vec![Q::zero(); width];
    form[0] = h;
    form[1..=n].clone_from_slice(&b);
    form[s_index] = uniform(&a, "zeta.c1^2")?;
    system.push("zeta.c1^2=0", LinearForm::homogeneous(form), ConstraintKind::Zero);

    for (k, name) in system.variables.clone().iter().enumerate() {
        let mut form = vec![Q::zero(); width];
        form[k] = one();
        system.push(format!("{name}>=0"), LinearForm::homogeneous(form), ConstraintKind::NonNegative);
    }

    // zeta . V >= 0 for curves V through the points, evaluated on X1 (V has no M part).
    let push_curve = |system: &mut ConstraintSystem, label: String, points: &[usize], degree: u32| -> Result<()> {
        let v = line_strict_transform(&x1, points, degree)?;
        let (h, b, _) = coefficients(&x1, n, |d| x1.pair(d, &v.class))?;
        let mut form = vec![Q::zero(); width];
        form[0] = h;
        form[1..=n].clone_from_slice(&b);
        system.push(label, LinearForm::homogeneous(form), ConstraintKind::NonNegative);
        Ok(())
    };
    let regime = match n {
        10.. => "aggregate",
        6..=9 => {
            for t in subsets(n, 6) {
                let label = format!(
                    "cubic({})>=0",
                    t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                );
                push_curve(&mut system, label, &t, 3)?;
            }
            "twisted cubics through 6 points"
        }
        4 | 5 => {
            // Stated without a generating family: (n/3) deg u - sum beta >= 0.
            let mut form = vec![-one(); width];
            form[0] = frac(n as i64, 3);
            form[s_index] = Q::zero();
            system.push("rational-normal-curves>=0", LinearForm::homogeneous(form), ConstraintKind::NonNegative);
            "rational normal curves (stated bound)"
        }
        _ => {
            for l in 1..=n {
                push_curve(&mut system, format!("line({l})>=0"), &[l], 1)?;
            }
            "lines through one point"
        }
    };

    let outcome = rational_feasible(&system, 0)?;
    let forced = matches!(&outcome, LpOutcome::Optimal { value, .. } if value.is_zero());
    let report = P3LinesReport {
        n,
        forced,
        system,
        outcome,
        regime,
    };
    if report.forced && !report.certificate_replays() {
        return Err(Error::Degenerate("certificate failed to replay".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn coefficients_match_hand_expansion() {
        for n in 1..=5usize {
            let r = check_p3_points_lines(n).unwrap();
            let lines = (n * (n - 1) / 2) as i64;
            let n = n as i64;
            let c2 = &r.system.constraints[0].form.coefficients;
            assert_eq!(c2[0], q(6 + lines));
            assert!(c2[1..=n as usize].iter().all(|b| *b == q(-(n - 1))));
            assert_eq!(c2[n as usize + 1], q(0));
            let c11 = &r.system.constraints[1].form.coefficients;
            assert_eq!(c11[0], q(16 - lines));
            assert!(c11[1..=n as usize].iter().all(|b| *b == q(n - 5)));
            if lines > 0 {
                assert_eq!(c11[n as usize + 1], q(-2));
            }
        }
    }

    #[test]
    fn small_cases_forced() {
        for n in [1usize, 2, 3, 4, 5, 6, 7] {
            let r = check_p3_points_lines(n).unwrap();
            assert!(r.forced, "n = {n}");
            assert!(r.certificate_replays());
        }
    }

    #[test]
    fn cubic_subsets() {
        assert_eq!(subsets(7, 6).len(), 7);
        assert_eq!(subsets(9, 6).len(), 84);
    }
}

use std::collections::BTreeSet;

use num::{Signed, Zero};
use threefold_core::conditions::lp::{rational_feasible, ConstraintKind, ConstraintSystem, LpOutcome};
use threefold_core::conditions::{all_lines_config, check_generalized, check_p3_points_lines};
use threefold_core::linalg;
use threefold_core::rational::{one, Q};

#[test]
fn forced_for_every_n_up_to_twelve() {
    for n in 1..=12 {
        let r = check_p3_points_lines(n).unwrap();
        assert!(r.forced, "n = {n}: {}", r.outcome);
        assert_eq!(r.verdict(), "deg(u)=0 forced");
        let cert = r.certificate().unwrap();
        assert_eq!(cert.replay_bound(&r.system, 0), Some(Q::zero()));
        for (y, c) in cert.multipliers.iter().zip(&r.system.constraints) {
            if c.kind == ConstraintKind::NonNegative {
                assert!(!y.is_negative());
            }
        }
    }
}

#[test]
fn aggregate_regime_needs_no_extra_inequalities() {
    for n in 10..=12 {
        let r = check_p3_points_lines(n).unwrap();
        assert_eq!(r.regime, "aggregate");
        // two equalities plus one sign constraint per variable
        assert_eq!(r.system.constraints.len(), 2 + r.system.variables.len());
    }
    // the generalized criterion agrees on the threshold
    assert!(check_generalized(&all_lines_config(10)).unwrap().holds());
    assert!(!check_generalized(&all_lines_config(9)).unwrap().holds());
}

/// Subsets of `k` indices out of `m`.
fn choose(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut with_last: Vec<Vec<usize>> = choose(m - 1, k - 1);
    for s in &mut with_last {
        s.push(m - 1);
    }
    let mut out = choose(m - 1, k);
    out.extend(with_last);
    out
}

/// Maximum of `x_0` over the system intersected with `sum x <= 1`, by enumerating the
/// vertices of that bounded polytope (all variables are sign-constrained in the system).
fn vertex_oracle(system: &ConstraintSystem) -> Q {
    let n = system.variables.len();
    let mut rows: Vec<(Vec<Q>, Q)> = system
        .constraints
        .iter()
        .map(|c| (c.form.coefficients.clone(), -c.form.constant.clone()))
        .collect();
    rows.push((vec![-one(); n], -one()));
    let equalities: Vec<usize> = system
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == ConstraintKind::Zero)
        .map(|(i, _)| i)
        .collect();
    let inequalities: Vec<usize> = (0..rows.len()).filter(|i| !equalities.contains(i)).collect();
    let mut best: Option<Q> = None;
    let mut seen = BTreeSet::new();
    let need = n - equalities.len();
    for pick in choose(inequalities.len(), need) {
        let active: Vec<usize> = equalities
            .iter()
            .copied()
            .chain(pick.iter().map(|&k| inequalities[k]))
            .collect();
        let m: Vec<Vec<Q>> = active.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Q> = active.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = linalg::solve(&m, &b) else { continue };
        let feasible = rows.iter().enumerate().all(|(i, (a, rhs))| {
            let v: Q = a.iter().zip(&x).map(|(p, q)| p * q).sum();
            if equalities.contains(&i) {
                v == *rhs
            } else {
                v >= *rhs
            }
        });
        if feasible && seen.insert(x.clone()) {
            if best.as_ref().map_or(true, |b| x[0] > *b) {
                best = Some(x[0].clone());
            }
        }
    }
    best.expect("zero point is a vertex")
}

#[test]
fn simplex_matches_vertex_enumeration_for_ten_points() {
    let r = check_p3_points_lines(10).unwrap();
    assert_eq!(vertex_oracle(&r.system), Q::zero());
    match rational_feasible(&r.system, 0).unwrap() {
        LpOutcome::Optimal { value, .. } => assert_eq!(value, Q::zero()),
        other => panic!("{other:?}"),
    }
}

//! Subcommand implementations. Each takes parsed inputs and returns a [`Report`].

use num::Zero;
use threefold_core::cases::{ci_c2, complete_intersection_chern, euler_budget, ueno_report, BudgetReport};
use threefold_core::conditions::{
    check_c2_positive_tower, check_p3_points_lines, check_picard1, check_tower, TraceEntry,
};
use threefold_core::dynamics::{
    dynamical_degrees, eigenclass_constraints, raw_dynamical_degrees, rationality_obstruction,
    validate_action, AlgebraicReal, DegreeReport, EigenclassStatus, IntMatrix, RationalityCheck,
};
use threefold_core::conditions::lp::LpOutcome;
use threefold_core::{Condition, ConditionVerdict, ThreefoldModel};

use crate::parse::{render_custom, TowerDocument};
use crate::report::{decimal_ceil, interval, Report};
use crate::CliError;

/// Decimal places for interval endpoints.
const DIGITS: u32 = 12;

pub fn ring_show(doc: &TowerDocument) -> Report {
    let m = doc.final_model();
    let mut r = Report::commented();
    let dn = m.divisor_names();
    let cn = m.curve_names();
    r.text(format!("# rho: {}  chi: {}", m.picard(), m.euler()));
    r.text(render_custom(m));
    r.field("label", m.label());
    r.field("rho", m.picard());
    r.field("divisors", dn.join(","));
    r.field("curves", cn.join(","));
    let mul2 = m.mul2_table();
    for i in 0..dn.len() {
        for j in i..dn.len() {
            if !mul2[i][j].is_zero() {
                r.field(format!("product.{}.{}", dn[i], dn[j]), mul2[i][j].display_with(&cn));
            }
        }
    }
    for (i, row) in m.pairing_matrix().iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            if !v.is_zero() {
                r.field(format!("pairing.{}.{}", dn[i], cn[a]), v);
            }
        }
    }
    r.field("c1", m.c1().display_with(&dn));
    r.field("c2", m.c2().display_with(&cn));
    r.field("euler", m.euler());
    let flags: Vec<String> = m.to_custom_tables().flags.iter().map(ToString::to_string).collect();
    r.field("flags", flags.join(","));
    r
}

fn trace_fields(r: &mut Report, prefix: &str, verdict: &ConditionVerdict) {
    let entry = |r: &mut Report, key: String, e: &TraceEntry| {
        r.field(format!("{key}.tag"), e.tag());
        r.field(format!("{key}.note"), &e.note);
        for (name, value) in &e.witnesses {
            r.field(format!("{key}.{name}"), value);
        }
    };
    if let Some(seed) = &verdict.seed {
        entry(r, format!("{prefix}seed"), seed);
    }
    for e in &verdict.trace {
        let step = e.step.map_or_else(|| "base".to_string(), |s| (s + 1).to_string());
        entry(r, format!("{prefix}step.{step}"), e);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Method {
    /// Propagate from the base step by step.
    #[default]
    Propagate,
    /// Use a base with c2 positive on movable classes and one curve of blowups.
    C2Positive,
}

pub fn check(doc: &TowerDocument, condition: Condition, method: Method) -> Result<Report, CliError> {
    let verdict = match method {
        Method::Propagate => check_tower(&doc.tower, condition)?,
        Method::C2Positive => check_c2_positive_tower(&doc.tower, condition)?,
    };
    let mut r = Report::new();
    r.field("condition", condition);
    r.field("verdict", &verdict);
    r.field("status", verdict.status);
    r.field("trace", verdict.trace_tags());
    trace_fields(&mut r, "", &verdict);
    Ok(r)
}

pub fn picard1(doc: &TowerDocument) -> Result<Report, CliError> {
    let report = check_picard1(&doc.tower)?;
    let mut r = Report::new();
    r.field("condition_a", &report.condition_a);
    r.field("condition_b", &report.condition_b);
    for (k, a) in report.alphas.iter().enumerate() {
        r.field(format!("alpha.{}", k + 1), a);
    }
    trace_fields(&mut r, "a.", &report.condition_a);
    trace_fields(&mut r, "b.", &report.condition_b);
    Ok(r)
}

pub fn p3lines(n: usize, show_certificate: bool) -> Result<Report, CliError> {
    let report = check_p3_points_lines(n)?;
    let mut r = Report::new();
    r.field("n", n);
    r.field("regime", report.regime);
    let verdict = if report.forced {
        format!("{}; zero entropy by Condition A", report.verdict())
    } else {
        report.verdict().to_string()
    };
    r.field("verdict", verdict);
    r.field("lp", &report.outcome);
    if let LpOutcome::Optimal { value, .. } = &report.outcome {
        r.field("max_deg_u", value);
    }
    r.field("constraints", report.system.constraints.len());
    if let Some(cert) = report.certificate() {
        r.field("certificate_replays", report.certificate_replays());
        for (y, c) in cert.multipliers.iter().zip(&report.system.constraints) {
            if show_certificate || !y.is_zero() {
                r.field(format!("certificate.{}", c.label), y);
            }
        }
    }
    Ok(r)
}

fn algebraic_fields(r: &mut Report, key: &str, a: &AlgebraicReal) {
    let (lo, hi) = interval(&a.lower, &a.upper, DIGITS);
    r.field(format!("{key}.kind"), a.kind.as_str());
    r.field(format!("{key}.interval"), format!("[{lo}, {hi}]"));
    r.field(format!("{key}.width"), decimal_ceil(&a.width(), DIGITS));
    match &a.minimal_polynomial {
        Some(p) => {
            r.field(format!("{key}.minimal_polynomial"), p);
            r.field(format!("{key}.irreducibility_certified"), a.minimal_certified);
        }
        None => {
            r.field(format!("{key}.minimal_polynomial"), "undetermined");
        }
    }
    r.field(format!("{key}.multiplicity"), a.multiplicity);
}

fn degree_fields(r: &mut Report, d: &DegreeReport) -> Result<(), CliError> {
    r.field("char_poly_divisors", &d.divisor_char_poly);
    r.field("char_poly_curves", &d.curve_char_poly);
    algebraic_fields(r, "lambda1", &d.lambda1);
    algebraic_fields(r, "lambda2", &d.lambda2);
    let ln = |x: &threefold_core::Q| threefold_core::rational::to_f64(x).max(1.0).ln();
    let top_lo = d.lambda1.lower.clone().max(d.lambda2.lower.clone());
    let top_hi = d.lambda1.upper.clone().max(d.lambda2.upper.clone());
    let pad = 1e-12;
    let lo = (ln(&top_lo) - pad).max(0.0);
    let hi = ln(&top_hi) + pad;
    r.field("entropy", format!("[{lo:.12}, {hi:.12}]"));
    r.field("primitive_hint", d.primitive_hint);
    r.field(
        "log_concave",
        d.log_concave.map_or("undecided".to_string(), |b| b.to_string()),
    );
    let check = rationality_obstruction(&d.divisor_char_poly)?;
    let text = match check {
        RationalityCheck::Consistent { rational_roots } => {
            let roots: Vec<String> = rational_roots.iter().map(i64::to_string).collect();
            format!("consistent (rational roots: {})", if roots.is_empty() { "none".into() } else { roots.join(",") })
        }
        RationalityCheck::NotUnimodular { constant } => format!("not unimodular (constant term {constant})"),
        RationalityCheck::Contradiction { root } => format!("contradiction: rational root {root}"),
    };
    r.field("rationality", text);
    Ok(())
}

pub fn dynamics(matrix: &IntMatrix, model: Option<&ThreefoldModel>, tolerance: f64) -> Result<Report, CliError> {
    let mut r = Report::new();
    r.field("size", matrix.len());
    let Some(model) = model else {
        let d = raw_dynamical_degrees(matrix)?;
        r.field("lambda2_source", "inverse transpose");
        degree_fields(&mut r, &d)?;
        return Ok(r);
    };
    let violations = validate_action(model, matrix)?;
    if !violations.is_empty() {
        return Err(CliError::InvalidAction(violations.iter().map(ToString::to_string).collect()));
    }
    r.field("validation", "ok");
    let d = dynamical_degrees(model, matrix)?;
    degree_fields(&mut r, &d)?;
    let e = eigenclass_constraints(model, matrix, tolerance)?;
    r.field("eigenclass", e.summary());
    r.field("tolerance", format!("{tolerance:e}"));
    if e.status == EigenclassStatus::Evaluated {
        if let Some(z) = &e.eigenvector {
            let approx: Vec<String> = z
                .coefficients()
                .iter()
                .map(|c| format!("{:.12}", threefold_core::rational::to_f64(c)))
                .collect();
            r.field("eigenvector", format!("({})", approx.join(", ")));
        }
        r.field("eigen_residual", format!("{:e}", e.eigen_residual));
        for res in &e.residuals {
            let verdict = if res.within { "vanishes" } else { "exceeds tolerance" };
            r.field(format!("residual.{}", res.name), format!("{:e} ({verdict})", res.value));
        }
    }
    Ok(r)
}

pub fn case_ueno() -> Result<Report, CliError> {
    let u = ueno_report()?;
    let mut r = Report::new();
    r.field("fixed_points", u.fixed_points);
    r.field("period2_points", u.period2_points);
    r.field("singular_points", u.singular_points);
    r.field("chi_quotient", u.chi_quotient);
    r.field("chi_resolution", u.chi_resolution);
    r.field("picard_resolution", u.picard_resolution);
    r.field("chi_equals_2_plus_2rho", u.identity_check);
    Ok(r)
}

pub fn case_ci(n: u32, degrees: &[u32]) -> Result<Report, CliError> {
    let c = complete_intersection_chern(n, degrees)?;
    let report = ci_c2(n, degrees)?;
    let mut r = Report::new();
    r.field("n", n);
    r.field("degrees", degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    r.field("c1_coeff", report.c1_coeff);
    r.field("c2_coeff", report.c2_coeff);
    r.field("c3_coeff", c.c3);
    r.field("h3", c.degree);
    r.field("euler", c.euler);
    r.field("c2_positive", report.positive);
    Ok(r)
}

pub fn budget(base: (i64, i64), target: (i64, i64)) -> Result<Report, CliError> {
    let b = euler_budget(base, target)?;
    let mut r = Report::new();
    r.field("num_blowups", b.num_blowups);
    r.field("genus_slack", b.genus_slack);
    r.field("all_centers_rational_forced", b.all_centers_rational_forced);
    if b.all_centers_rational_forced {
        r.field("remaining", BudgetReport::OPEN_CASE);
    }
    Ok(r)
}

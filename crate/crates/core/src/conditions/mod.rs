//! Condition A / Condition B verdicts for blowup towers.
//!
//! The checkers only ever return sufficient-condition verdicts: a tower either satisfies
//! a condition by one of the propagation criteria below or its status is unknown.

mod generalized;
pub mod lp;
mod p3lines;

use std::fmt;

use num::{Integer, Signed, Zero};

pub use generalized::{all_lines_config, check_generalized, GeneralizedConfig, GeneralizedCurve, GeneralizedReport};
pub use p3lines::{check_p3_points_lines, P3LinesReport};

use crate::blowup::{blow_up_curve, gamma, BlowupStep, BlowupTower, CurveCenterSpec};
use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::ring::{BaseFlag, ThreefoldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    A,
    B,
}

impl Condition {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "A" | "a" => Some(Condition::A),
            "B" | "b" => Some(Condition::B),
            _ => None,
        }
    }

    fn flag(self) -> BaseFlag {
        match self {
            Condition::A => BaseFlag::ConditionA,
            Condition::B => BaseFlag::ConditionB,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::A => f.write_str("A"),
            Condition::B => f.write_str("B"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    HoldsByTheorem,
    Unknown,
    HypothesesUnverified,
}

impl VerdictStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictStatus::HoldsByTheorem => "holds-by-theorem",
            VerdictStatus::Unknown => "unknown",
            VerdictStatus::HypothesesUnverified => "hypotheses-unverified",
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The criterion behind a trace entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremTag {
    /// Base of Picard rank one followed by points and disjoint curves.
    PicardOne,
    /// Base with `c2 . zeta > 0` on movable classes.
    C2Positive,
    /// Point blowups preserve both conditions.
    Point,
    /// Curve blowups under one of three geometric hypotheses.
    Curve,
    /// Curve blowups with `c1 . C != 2g - 2` preserve Condition B.
    ConditionBCurve,
    /// Hypothesis asserted by the user, not derived.
    Assumed,
    /// No criterion applied.
    None,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::PicardOne => "T3",
            TheoremTag::C2Positive => "T4",
            TheoremTag::Point => "T5",
            TheoremTag::Curve => "T6",
            TheoremTag::ConditionBCurve => "T7",
            TheoremTag::Assumed => "assumed",
            TheoremTag::None => "none",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// Zero-based blowup step; `None` for statements about the base.
    pub step: Option<usize>,
    pub theorem: TheoremTag,
    pub case: Option<u8>,
    pub witnesses: Vec<(String, Q)>,
    pub note: String,
}

impl TraceEntry {
    fn new(step: Option<usize>, theorem: TheoremTag, note: impl Into<String>) -> Self {
        Self {
            step,
            theorem,
            case: None,
            witnesses: Vec::new(),
            note: note.into(),
        }
    }

    fn case(mut self, case: u8) -> Self {
        self.case = Some(case);
        self
    }

    fn witness(mut self, name: &str, value: Q) -> Self {
        self.witnesses.push((name.to_string(), value));
        self
    }

    /// `T5`, `T7`, or `T6.2` for a numbered case.
    pub fn tag(&self) -> String {
        match self.case {
            Some(c) => format!("{}.{c}", self.theorem),
            None => self.theorem.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub status: VerdictStatus,
    /// How the base was seeded, if it was.
    pub seed: Option<TraceEntry>,
    /// One entry per blowup step that was examined.
    pub trace: Vec<TraceEntry>,
}

impl ConditionVerdict {
    pub fn holds(&self) -> bool {
        self.status == VerdictStatus::HoldsByTheorem
    }

    /// Comma-separated step tags, e.g. `T5,T5,T7`.
    pub fn trace_tags(&self) -> String {
        self.trace
            .iter()
            .map(TraceEntry::tag)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// A verdict seeded directly from the hypotheses recorded on `base`.
    pub fn seed(base: &ThreefoldModel, condition: Condition) -> Self {
        let seed = seed_entry(base, condition);
        let status = if seed.is_some() {
            VerdictStatus::HoldsByTheorem
        } else {
            VerdictStatus::HypothesesUnverified
        };
        Self {
            condition,
            status,
            seed,
            trace: Vec::new(),
        }
    }
}

impl fmt::Display for ConditionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; trace: {}", self.status, self.trace_tags())
    }
}

fn seed_entry(base: &ThreefoldModel, condition: Condition) -> Option<TraceEntry> {
    let asserted = base.has_flag(BaseFlag::UnverifiedHypotheses);
    let suffix = if asserted { " (asserted)" } else { "" };
    if base.has_flag(condition.flag()) {
        return Some(TraceEntry::new(
            None,
            TheoremTag::Assumed,
            format!("base asserted to satisfy Condition {condition}"),
        ));
    }
    if base.has_flag(BaseFlag::PicardRankOne) {
        return Some(TraceEntry::new(
            None,
            TheoremTag::PicardOne,
            format!("Picard rank one base{suffix}: nef zeta with zeta^2 = 0 vanishes"),
        ));
    }
    if base.has_flag(BaseFlag::C2MovablePositive) {
        return Some(TraceEntry::new(
            None,
            TheoremTag::C2Positive,
            format!("c2 positive on non-zero movable classes{suffix}"),
        ));
    }
    None
}

/// Pushes a verdict through one blowup of `model_before`.
///
/// Verdicts that do not currently hold are returned unchanged.
pub fn propagate_condition(
    verdict: &ConditionVerdict,
    model_before: &ThreefoldModel,
    step: &BlowupStep,
) -> ConditionVerdict {
    let mut out = verdict.clone();
    if !verdict.holds() {
        return out;
    }
    let index = Some(model_before.steps().len());
    let entry = match step {
        BlowupStep::Point => Ok(TraceEntry::new(index, TheoremTag::Point, "point blowup")),
        BlowupStep::Curve(center) => curve_criterion(verdict.condition, model_before, center, index),
    };
    match entry {
        Ok(e) => out.trace.push(e),
        Err(e) => {
            out.status = VerdictStatus::Unknown;
            out.trace.push(e);
        }
    }
    out
}

/// `Ok` with the first criterion that applies, or `Err` with an explanatory entry.
fn curve_criterion(
    condition: Condition,
    model: &ThreefoldModel,
    center: &CurveCenterSpec,
    index: Option<usize>,
) -> std::result::Result<TraceEntry, TraceEntry> {
    let invalid = |e: Error| TraceEntry::new(index, TheoremTag::None, format!("invalid center: {e}"));
    let c1_dot_c = model.pair(model.c1(), &center.class).map_err(invalid)?;
    let g = gamma(model, center).map_err(invalid)?;
    let canonical = q(2 * i64::from(center.genus) - 2);
    let base_entry = |tag, note: &str| {
        TraceEntry::new(index, tag, note)
            .witness("c1.C", c1_dot_c.clone())
            .witness("genus", q(i64::from(center.genus)))
            .witness("gamma", g.clone())
    };

    if condition == Condition::B && c1_dot_c != canonical {
        return Ok(base_entry(TheoremTag::ConditionBCurve, "c1.C != 2g-2")
            .witness("2g-2", canonical));
    }
    let odd = c1_dot_c.is_integer() && c1_dot_c.to_integer().is_odd();
    if odd && center.normal_bundle_decomposable == Some(true) {
        return Ok(base_entry(TheoremTag::Curve, "c1.C odd and normal bundle decomposable").case(1));
    }
    if g.is_negative() && center.movable_witness == Some(true) {
        return Ok(base_entry(TheoremTag::Curve, "gamma < 0 and center movable in its class").case(2));
    }
    if let Some(s) = &center.surface {
        let mu = q(i64::from(s.multiplicity));
        let lhs = &s.kappa * q(2);
        let rhs = &mu * &g;
        if lhs < rhs {
            return Ok(base_entry(TheoremTag::Curve, "2 kappa < mu gamma")
                .case(3)
                .witness("kappa", s.kappa.clone())
                .witness("mu", mu));
        }
    }
    let note = if center.genus == 0 && c1_dot_c == q(-2) {
        "no criterion applies; open case: rational center with c1.C = -2"
    } else {
        "no criterion applies"
    };
    Err(base_entry(TheoremTag::None, note))
}

/// Folds [`propagate_condition`] along a tower, seeding from the base flags.
pub fn check_tower(tower: &BlowupTower, condition: Condition) -> Result<ConditionVerdict> {
    let models = tower.evaluate()?;
    let mut verdict = ConditionVerdict::seed(&models[0], condition);
    for (model, step) in models.iter().zip(&tower.steps) {
        verdict = propagate_condition(&verdict, model, step);
    }
    Ok(verdict)
}

/// Number of leading point steps; errors if a point follows a curve.
fn points_then_curves(tower: &BlowupTower) -> Result<usize> {
    let points = tower
        .steps
        .iter()
        .take_while(|s| matches!(s, BlowupStep::Point))
        .count();
    if tower.steps[points..]
        .iter()
        .any(|s| matches!(s, BlowupStep::Point))
    {
        return Err(Error::InvalidInput(
            "tower must blow up all points before any curve".into(),
        ));
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Picard1Report {
    pub condition_a: ConditionVerdict,
    pub condition_b: ConditionVerdict,
    /// Forced coefficient of each curve's exceptional divisor in a nef `zeta` with
    /// `zeta^2 = 0`, in units of the pulled-back generator.
    pub alphas: Vec<Q>,
}

/// Towers over a Picard-rank-one base: points, then pairwise disjoint curves.
///
/// Points are re-read as fibers of curve blowups (`c1 . M = 1`, odd) when a later center
/// passes through them.
pub fn check_picard1(tower: &BlowupTower) -> Result<Picard1Report> {
    let models = tower.evaluate()?;
    let base = &models[0];
    if !base.has_flag(BaseFlag::PicardRankOne) || base.picard() != 1 {
        let unverified = |condition| ConditionVerdict {
            condition,
            status: VerdictStatus::HypothesesUnverified,
            seed: None,
            trace: Vec::new(),
        };
        return Ok(Picard1Report {
            condition_a: unverified(Condition::A),
            condition_b: unverified(Condition::B),
            alphas: Vec::new(),
        });
    }
    let points = points_then_curves(tower)?;
    let generator = base.divisor_unit(0);
    let mut trace = Vec::new();
    let mut alphas = Vec::new();
    // For each point, the base curve of the first center through it.
    let mut on_curve: Vec<Option<CurveCenterSpec>> = vec![None; points];
    for (k, step) in tower.steps.iter().enumerate().skip(points) {
        let BlowupStep::Curve(center) = step else {
            unreachable!("points come first");
        };
        let before = &models[k];
        // Curve class on the base: drop exceptional coordinates.
        let pushed = center.class.truncated(1);
        let h_dot_c = base.pair(&generator, &pushed)?;
        if !h_dot_c.is_positive() {
            return Err(Error::InvalidInput(format!(
                "center at step {} has H.C = {h_dot_c}; expected positive",
                k + 1
            )));
        }
        for (j, slot) in on_curve.iter_mut().enumerate() {
            // L_j sits at curve index j + 1 after the base generator.
            if slot.is_none() && center.class.coefficient(j + 1).is_negative() {
                *slot = Some(CurveCenterSpec::new(pushed.clone(), center.genus));
            }
        }
        let gamma0 = base.pair(base.c1(), &pushed)? + q(2 * i64::from(center.genus) - 2);
        let alpha = if gamma0.is_zero() {
            Q::zero()
        } else {
            let candidate = &h_dot_c * q(2) / &gamma0;
            if candidate.is_negative() {
                Q::zero()
            } else {
                candidate
            }
        };
        let c1_dot_c = before.pair(before.c1(), &center.class)?;
        trace.push(
            TraceEntry::new(Some(k), TheoremTag::PicardOne, "forced alpha is rational")
                .witness("H.C", h_dot_c)
                .witness("gamma0", gamma0)
                .witness("c1.C", c1_dot_c)
                .witness("alpha", alpha.clone()),
        );
        alphas.push(alpha);
    }
    let mut point_entries = Vec::new();
    for (j, through) in on_curve.iter().enumerate() {
        let entry = if let Some(curve) = through {
            // Blowing up the curve first turns the point into a fiber M of F.
            let y = blow_up_curve(base, curve)?;
            let m = y.curve_unit(1);
            let c1_dot_m = y.pair(y.c1(), &m)?;
            TraceEntry::new(Some(j), TheoremTag::Curve, "point read as fiber of a curve blowup")
                .case(1)
                .witness("c1.M", c1_dot_m)
        } else {
            TraceEntry::new(Some(j), TheoremTag::Point, "point blowup")
        };
        point_entries.push(entry);
    }
    point_entries.extend(trace);
    let seed = TraceEntry::new(None, TheoremTag::PicardOne, "Picard rank one base");
    let verdict = |condition| ConditionVerdict {
        condition,
        status: VerdictStatus::HoldsByTheorem,
        seed: Some(seed.clone()),
        trace: point_entries.clone(),
    };
    Ok(Picard1Report {
        condition_a: verdict(Condition::A),
        condition_b: verdict(Condition::B),
        alphas,
    })
}

/// Towers over a base with `c2` positive on movable classes: points, then disjoint curves.
///
/// Condition B always holds; Condition A additionally needs `c1(X1) . D_j <= 2g_j - 2`
/// for every curve, where `X1` is the point blowup.
pub fn check_c2_positive_tower(tower: &BlowupTower, condition: Condition) -> Result<ConditionVerdict> {
    let models = tower.evaluate()?;
    let base = &models[0];
    if !base.has_flag(BaseFlag::C2MovablePositive) {
        return Ok(ConditionVerdict {
            condition,
            status: VerdictStatus::HypothesesUnverified,
            seed: None,
            trace: Vec::new(),
        });
    }
    let points = points_then_curves(tower)?;
    let x1 = &models[points];
    let mut status = VerdictStatus::HoldsByTheorem;
    let mut trace = Vec::new();
    for (k, step) in tower.steps.iter().enumerate() {
        let entry = match step {
            BlowupStep::Point => TraceEntry::new(Some(k), TheoremTag::C2Positive, "point blowup"),
            BlowupStep::Curve(center) => {
                let d = center.class.truncated(x1.picard());
                let c1_dot_d = x1.pair(x1.c1(), &d)?;
                let margin = q(2 * i64::from(center.genus) - 2) - &c1_dot_d;
                let mut e = TraceEntry::new(Some(k), TheoremTag::C2Positive, "curve blowup")
                    .witness("c1(X1).D", c1_dot_d)
                    .witness("margin", margin.clone());
                if condition == Condition::A && margin.is_negative() {
                    status = VerdictStatus::Unknown;
                    e.theorem = TheoremTag::None;
                    e.note = "c1(X1).D > 2g-2; Condition A not granted".into();
                }
                e
            }
        };
        trace.push(entry);
    }
    Ok(ConditionVerdict {
        condition,
        status,
        seed: Some(TraceEntry::new(
            None,
            TheoremTag::C2Positive,
            "c2 positive on non-zero movable classes",
        )),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{blow_up_point, line_strict_transform, SurfaceData};
    use crate::classes::CurveClass;
    use crate::rational::frac;
    use crate::ring::{make_base, BaseSpec};

    fn p3_two_points_line() -> BlowupTower {
        let x1 = blow_up_point(&blow_up_point(&make_base(&BaseSpec::P3).unwrap()));
        let d12 = line_strict_transform(&x1, &[1, 2], 1).unwrap();
        BlowupTower::new(BaseSpec::P3).point().point().curve(d12)
    }

    #[test]
    fn points_propagate() {
        let tower = BlowupTower::new(BaseSpec::P3).point().point().point();
        let v = check_tower(&tower, Condition::A).unwrap();
        assert!(v.holds());
        assert_eq!(v.trace_tags(), "T5,T5,T5");
    }

    #[test]
    fn line_through_two_points() {
        let v = check_tower(&p3_two_points_line(), Condition::B).unwrap();
        assert!(v.holds());
        assert_eq!(v.trace_tags(), "T5,T5,T7");
        assert_eq!(v.trace[2].witnesses[0], ("c1.C".to_string(), q(0)));
        // Condition A has no criterion for this rational curve with c1.C = 0.
        let a = check_tower(&p3_two_points_line(), Condition::A).unwrap();
        assert_eq!(a.status, VerdictStatus::Unknown);
    }

    #[test]
    fn canonical_degree_curve_is_unknown() {
        // c1.C = 2g - 2 = -2: genus 0, c1.C = -2 on P3 blown up at three points on a line
        let x = (0..3).fold(make_base(&BaseSpec::P3).unwrap(), |m, _| blow_up_point(&m));
        let c = line_strict_transform(&x, &[1, 2, 3], 1).unwrap();
        let tower = BlowupTower::new(BaseSpec::P3).point().point().point().curve(c);
        let v = check_tower(&tower, Condition::B).unwrap();
        assert_eq!(v.status, VerdictStatus::Unknown);
        assert!(v.trace[3].note.contains("open case"));
    }

    #[test]
    fn curve_cases() {
        let y = make_base(&BaseSpec::P3).unwrap();
        let seed = ConditionVerdict::seed(&y, Condition::A);
        let line = y.curve("l").unwrap();
        // c1.l = 4 is even: case 1 is unavailable even with decomposable normal bundle.
        let c = CurveCenterSpec::new(line.clone(), 0).decomposable(true);
        let v = propagate_condition(&seed, &y, &BlowupStep::Curve(c));
        assert_eq!(v.status, VerdictStatus::Unknown);
        // gamma = 2 > 0 rules out case 2; a surface with 2 kappa < mu gamma gives case 3.
        let surface = SurfaceData {
            surface: y.divisor("h").unwrap(),
            multiplicity: 2,
            kappa: q(1),
        };
        let c = CurveCenterSpec::new(line, 0).with_surface(surface);
        let v = propagate_condition(&seed, &y, &BlowupStep::Curve(c));
        assert!(v.holds());
        assert_eq!(v.trace_tags(), "T6.3");
        // c1 . f1 = 3 on P2xP1
        let z = make_base(&BaseSpec::P2xP1).unwrap();
        let odd = CurveCenterSpec::new(z.curve("f1").unwrap(), 0).decomposable(true);
        let seed_z = ConditionVerdict::seed(&z, Condition::A);
        let v = propagate_condition(&seed_z, &z, &BlowupStep::Curve(odd.clone()));
        assert_eq!(v.trace_tags(), "T6.1");
        let v = propagate_condition(&seed_z, &z, &BlowupStep::Curve(odd.decomposable(false)));
        assert_eq!(v.status, VerdictStatus::Unknown);
    }

    #[test]
    fn negative_gamma_movable() {
        let x = (0..2).fold(make_base(&BaseSpec::P3).unwrap(), |m, _| blow_up_point(&m));
        let d = line_strict_transform(&x, &[1, 2], 1).unwrap().movable(true);
        let seed = ConditionVerdict {
            condition: Condition::A,
            status: VerdictStatus::HoldsByTheorem,
            seed: None,
            trace: vec![],
        };
        let v = propagate_condition(&seed, &x, &BlowupStep::Curve(d));
        assert_eq!(v.trace_tags(), "T6.2");
    }

    #[test]
    fn picard1_line_and_conic() {
        let y = make_base(&BaseSpec::P3).unwrap();
        let line = CurveCenterSpec::new(y.curve("l").unwrap(), 0);
        let r = check_picard1(&BlowupTower::new(BaseSpec::P3).curve(line)).unwrap();
        assert_eq!(r.alphas, vec![q(1)]);
        assert!(r.condition_a.holds() && r.condition_b.holds());
        let conic = CurveCenterSpec::new(y.curve("l").unwrap().scale(&q(2)), 0);
        let r = check_picard1(&BlowupTower::new(BaseSpec::P3).curve(conic)).unwrap();
        assert_eq!(r.alphas, vec![frac(2, 3)]);
    }

    #[test]
    fn picard1_zero_gamma_and_points() {
        // the point lies on the blown-up line, so it is read as a fiber
        let x = blow_up_point(&make_base(&BaseSpec::P3).unwrap());
        let through = line_strict_transform(&x, &[1], 1).unwrap();
        let tower = BlowupTower::new(BaseSpec::P3).point().curve(through);
        let r = check_picard1(&tower).unwrap();
        assert_eq!(r.condition_a.trace_tags(), "T6.1,T3");
        assert_eq!(r.condition_a.trace[0].witnesses[0].1, q(1));
        assert_eq!(r.alphas, vec![q(1)]);
        let bad = BlowupTower::new(BaseSpec::P3)
            .curve(CurveCenterSpec::new(CurveClass::from_ints(&[-1]), 0));
        assert!(check_picard1(&bad).is_err());
        let misordered = BlowupTower::new(BaseSpec::P3)
            .curve(CurveCenterSpec::new(CurveClass::from_ints(&[1]), 0))
            .point();
        assert!(check_picard1(&misordered).is_err());
        let no_flag = check_picard1(&BlowupTower::new(BaseSpec::P2xP1).point()).unwrap();
        assert_eq!(no_flag.condition_a.status, VerdictStatus::HypothesesUnverified);
    }

    #[test]
    fn c2_positive_margins() {
        let x = (0..2).fold(make_base(&BaseSpec::P3).unwrap(), |m, _| blow_up_point(&m));
        let d = line_strict_transform(&x, &[1, 2], 1).unwrap();
        let tower = BlowupTower::new(BaseSpec::P3).point().point().curve(d);
        assert!(check_c2_positive_tower(&tower, Condition::B).unwrap().holds());
        let a = check_c2_positive_tower(&tower, Condition::A).unwrap();
        assert_eq!(a.status, VerdictStatus::Unknown);
        // genus 3 and c1(X1).D = 2: 2 <= 4
        let y = make_base(&BaseSpec::P3).unwrap();
        let mut class = y.curve("l").unwrap().extended(2);
        class.set(1, q(-1));
        let c = CurveCenterSpec::new(class, 3);
        let tower = BlowupTower::new(BaseSpec::P3).point().curve(c);
        let a = check_c2_positive_tower(&tower, Condition::A).unwrap();
        assert!(a.holds());
        assert_eq!(a.trace[1].witnesses[1].1, q(2));
    }
}

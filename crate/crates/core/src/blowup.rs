//! Blowups at points and along smooth curves.
//!
//! Conventions for a curve blowup `pi: X -> Y` with center `C`, exceptional divisor `F`
//! and fiber `M`:
//!
//! * an old curve class `c` maps to `pi^!(c)`: same coordinates, zero on `M`;
//!   it satisfies `F . pi^!(c) = 0` and `pi^*d . pi^!(c) = d . c`;
//! * `pi^*d . F = (d . C) M`, `F . F = -pi^!(C) + gamma M`, `F . M = -1`,
//!   where `gamma = c1(Y) . C + 2g - 2`.
//!
//! These give `F^3 = -gamma` and `pi_*(F . F) = -C`. Point blowups use
//! `pi^*d . E = 0`, `E . E = -L`, `E . L = -1`.

use std::fmt;

use num::Zero;

use crate::classes::{CurveClass, DivisorClass};
use crate::error::{check_len, Error, Result};
use crate::rational::{q, Q};
use crate::ring::{
    make_base, BaseSpec, BasisElement, ClassKind, Origin, SparseCurve, StepKind, StepRecord,
    ThreefoldModel,
};

/// A hypersurface containing the center, used by the third curve-blowup criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    pub surface: DivisorClass,
    /// Multiplicity of the center in the surface.
    pub multiplicity: u32,
    /// `S . C`.
    pub kappa: Q,
}

/// A smooth curve to blow up, with optional geometric assertions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCenterSpec {
    pub class: CurveClass,
    pub genus: u32,
    /// Labels (exceptional divisor names) of earlier centers this one is asserted disjoint from.
    pub disjoint_from: Vec<String>,
    pub normal_bundle_decomposable: Option<bool>,
    /// Normalized ruled-surface invariant of the exceptional divisor.
    pub tau0: Option<i64>,
    pub surface: Option<SurfaceData>,
    /// Asserts the center is not the only effective curve in its class.
    pub movable_witness: Option<bool>,
}

impl CurveCenterSpec {
    pub fn new(class: CurveClass, genus: u32) -> Self {
        Self {
            class,
            genus,
            disjoint_from: Vec::new(),
            normal_bundle_decomposable: None,
            tau0: None,
            surface: None,
            movable_witness: None,
        }
    }

    pub fn decomposable(mut self, value: bool) -> Self {
        self.normal_bundle_decomposable = Some(value);
        self
    }

    pub fn movable(mut self, value: bool) -> Self {
        self.movable_witness = Some(value);
        self
    }

    pub fn with_tau0(mut self, tau0: i64) -> Self {
        self.tau0 = Some(tau0);
        self
    }

    pub fn with_surface(mut self, surface: SurfaceData) -> Self {
        self.surface = Some(surface);
        self
    }

    pub fn with_disjoint_from(mut self, labels: Vec<String>) -> Self {
        self.disjoint_from = labels;
        self
    }

    /// Checks the spec against the model it will be applied to.
    pub fn validate(&self, model: &ThreefoldModel) -> Result<()> {
        check_len("curve center class", model.picard(), self.class.len())?;
        if self.class.is_zero() {
            return Err(Error::InvalidInput("curve center class is zero".into()));
        }
        if let Some(s) = &self.surface {
            check_len("surface class", model.picard(), s.surface.len())?;
            if s.multiplicity == 0 {
                return Err(Error::InvalidInput("surface multiplicity must be at least 1".into()));
            }
            let computed = model.pair(&s.surface, &self.class)?;
            if computed != s.kappa {
                return Err(Error::InvalidInput(format!(
                    "kappa = {} does not match S.C = {computed}",
                    s.kappa
                )));
            }
        }
        for label in &self.disjoint_from {
            if model.divisor_index(label).is_none() {
                return Err(Error::InvalidInput(format!(
                    "disjoint_from refers to unknown center `{label}`"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupStep {
    Point,
    Curve(CurveCenterSpec),
}

impl fmt::Display for BlowupStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupStep::Point => f.write_str("point"),
            BlowupStep::Curve(c) => write!(f, "curve(genus {})", c.genus),
        }
    }
}

/// A base model followed by an ordered list of blowups.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupTower {
    pub base: BaseSpec,
    pub steps: Vec<BlowupStep>,
}

impl BlowupTower {
    pub fn new(base: BaseSpec) -> Self {
        Self {
            base,
            steps: Vec::new(),
        }
    }

    pub fn point(mut self) -> Self {
        self.steps.push(BlowupStep::Point);
        self
    }

    pub fn curve(mut self, center: CurveCenterSpec) -> Self {
        self.steps.push(BlowupStep::Curve(center));
        self
    }

    /// One model per prefix: the base first, the full blowup last.
    pub fn evaluate(&self) -> Result<Vec<ThreefoldModel>> {
        let mut models = vec![make_base(&self.base)?];
        for step in &self.steps {
            let current = models.last().expect("base model present");
            let next = apply_step(current, step)?;
            models.push(next);
        }
        Ok(models)
    }

    pub fn final_model(&self) -> Result<ThreefoldModel> {
        Ok(self.evaluate()?.pop().expect("base model present"))
    }
}

pub fn apply_step(model: &ThreefoldModel, step: &BlowupStep) -> Result<ThreefoldModel> {
    match step {
        BlowupStep::Point => Ok(blow_up_point(model)),
        BlowupStep::Curve(c) => blow_up_curve(model, c),
    }
}

fn fresh_index(model: &ThreefoldModel, divisor_prefix: &str, curve_prefix: &str, start: usize) -> usize {
    let mut k = start.max(1);
    while model.divisor_index(&format!("{divisor_prefix}{k}")).is_some()
        || model.curve_index(&format!("{curve_prefix}{k}")).is_some()
    {
        k += 1;
    }
    k
}

/// Copies `model` into a model with one more divisor and one more curve basis element.
fn extend(
    model: &ThreefoldModel,
    divisor_name: String,
    curve_name: String,
    kind: StepKind,
) -> ThreefoldModel {
    let n = model.picard();
    let step_index = model.steps.len();
    let pulled = |b: &BasisElement| BasisElement {
        name: b.name.clone(),
        kind: b.kind,
        origin: Origin::Pullback(b.name.clone()),
    };
    let mut divisor_basis: Vec<_> = model.divisor_basis.iter().map(pulled).collect();
    divisor_basis.push(BasisElement {
        name: divisor_name,
        kind: ClassKind::Divisor,
        origin: Origin::Exceptional(step_index),
    });
    let mut curve_basis: Vec<_> = model.curve_basis.iter().map(pulled).collect();
    curve_basis.push(BasisElement {
        name: curve_name,
        kind: ClassKind::Curve,
        origin: Origin::Exceptional(step_index),
    });
    let mut steps = model.steps.clone();
    steps.push(StepRecord {
        kind,
        divisor_index: n,
        curve_index: n,
    });
    ThreefoldModel {
        label: model.label.clone(),
        divisor_basis,
        curve_basis,
        products: model.products.clone(),
        pairing: model.pairing.clone(),
        c1: model.c1.extended(n + 1),
        c2: model.c2.extended(n + 1),
        euler: model.euler,
        flags: Default::default(),
        steps,
    }
}

fn blown_up_label(model: &ThreefoldModel) -> String {
    let base = model.label.split(" [").next().unwrap_or_default();
    format!("{base} [{} blowups]", model.steps.len() + 1)
}

/// Blowup at a point.
pub fn blow_up_point(model: &ThreefoldModel) -> ThreefoldModel {
    let n = model.picard();
    let points_so_far = model
        .steps
        .iter()
        .filter(|s| s.kind == StepKind::Point)
        .count();
    let k = fresh_index(model, "E", "L", points_so_far + 1);
    let mut out = extend(model, format!("E{k}"), format!("L{k}"), StepKind::Point);
    // pi^*d . E = 0 and pi^*d . L = 0 need no entries.
    out.products.insert((n, n), vec![(n, q(-1))]);
    out.pairing.insert((n, n), q(-1));
    out.c1.set(n, q(-2));
    out.euler = model.euler + 2;
    out.label = blown_up_label(model);
    out
}

/// `gamma = c1 . C + 2g - 2`, the degree of the normal bundle of the center.
pub fn gamma(model: &ThreefoldModel, center: &CurveCenterSpec) -> Result<Q> {
    check_len("curve center class", model.picard(), center.class.len())?;
    if center.class.is_zero() {
        return Err(Error::InvalidInput("curve center class is zero".into()));
    }
    Ok(model.pair(model.c1(), &center.class)? + q(2 * i64::from(center.genus) - 2))
}

/// Blowup along a smooth curve.
pub fn blow_up_curve(model: &ThreefoldModel, center: &CurveCenterSpec) -> Result<ThreefoldModel> {
    center.validate(model)?;
    let n = model.picard();
    let g = gamma(model, center)?;
    let c1_dot_c = model.pair(model.c1(), &center.class)?;
    let curves_so_far = model
        .steps
        .iter()
        .filter(|s| matches!(s.kind, StepKind::Curve { .. }))
        .count();
    let k = fresh_index(model, "F", "M", curves_so_far + 1);
    let mut out = extend(
        model,
        format!("F{k}"),
        format!("M{k}"),
        StepKind::Curve {
            class: center.class.clone(),
            genus: center.genus,
            gamma: g.clone(),
        },
    );
    // pi^*D_i . F = (D_i . C) M
    for i in 0..n {
        let d_dot_c = model.pair(&model.divisor_unit(i), &center.class)?;
        if !d_dot_c.is_zero() {
            out.products.insert((i, n), vec![(n, d_dot_c)]);
        }
    }
    // F . F = -pi^!(C) + gamma M
    let mut ff: SparseCurve = center
        .class
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(a, v)| (a, -v))
        .collect();
    if !g.is_zero() {
        ff.push((n, g));
    }
    out.products.insert((n, n), ff);
    out.pairing.insert((n, n), q(-1));
    // c1 = pi^*c1 - F;  c2 = pi^!(c2 + C) - (c1 . C) M
    out.c1.set(n, q(-1));
    let c2 = (model.c2() + &center.class).extended(n + 1);
    out.c2 = c2;
    out.c2.set(n, -c1_dot_c);
    out.euler = model.euler + 2 - 2 * i64::from(center.genus);
    out.label = blown_up_label(model);
    Ok(out)
}

fn check_related(before: &ThreefoldModel, after: &ThreefoldModel) -> Result<()> {
    let k = before.steps.len();
    let related = after.steps.len() == k + 1
        && after.steps[..k] == before.steps[..]
        && after.picard() == before.picard() + 1
        && after.divisor_basis[..before.picard()]
            .iter()
            .zip(&before.divisor_basis)
            .all(|(a, b)| a.name == b.name)
        && after.curve_basis[..before.picard()]
            .iter()
            .zip(&before.curve_basis)
            .all(|(a, b)| a.name == b.name);
    if related {
        Ok(())
    } else {
        Err(Error::NotRelated(format!(
            "`{}` ({} steps) is not a single blowup of `{}` ({} steps)",
            after.label(),
            after.steps.len(),
            before.label(),
            k
        )))
    }
}

/// `pi^*` on divisors.
pub fn pullback_divisor(
    before: &ThreefoldModel,
    after: &ThreefoldModel,
    d: &DivisorClass,
) -> Result<DivisorClass> {
    check_related(before, after)?;
    check_len("pullback_divisor", before.picard(), d.len())?;
    Ok(d.extended(after.picard()))
}

/// `pi_*` on divisors: drops the exceptional coordinate.
pub fn pushforward_divisor(
    before: &ThreefoldModel,
    after: &ThreefoldModel,
    d: &DivisorClass,
) -> Result<DivisorClass> {
    check_related(before, after)?;
    check_len("pushforward_divisor", after.picard(), d.len())?;
    Ok(d.truncated(before.picard()))
}

/// `pi^!` on curves.
pub fn pullback_curve(
    before: &ThreefoldModel,
    after: &ThreefoldModel,
    c: &CurveClass,
) -> Result<CurveClass> {
    check_related(before, after)?;
    check_len("pullback_curve", before.picard(), c.len())?;
    Ok(c.extended(after.picard()))
}

/// `pi_*` on curves: `pi_* M = 0` (or `pi_* L = 0`).
pub fn pushforward_curve(
    before: &ThreefoldModel,
    after: &ThreefoldModel,
    c: &CurveClass,
) -> Result<CurveClass> {
    check_related(before, after)?;
    check_len("pushforward_curve", after.picard(), c.len())?;
    Ok(c.truncated(before.picard()))
}

/// Strict transform of a degree-`degree` rational curve of `P^3` passing once through each
/// of the listed blown-up points (one-based point indices): `degree l - sum L_i`.
pub fn line_strict_transform(
    model: &ThreefoldModel,
    point_indices: &[usize],
    degree: u32,
) -> Result<CurveCenterSpec> {
    if degree == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let l = model
        .curve_index("l")
        .ok_or_else(|| Error::InvalidInput("model is not a blowup of P3 (no `l`)".into()))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut class = CurveClass::zero(model.picard());
    class.set(l, q(i64::from(degree)));
    for &i in point_indices {
        if !seen.insert(i) {
            return Err(Error::InvalidInput(format!("repeated point index {i}")));
        }
        let idx = model
            .curve_index(&format!("L{i}"))
            .ok_or_else(|| Error::InvalidInput(format!("point index {i} is out of range")))?;
        class.set(idx, q(-1));
    }
    Ok(CurveCenterSpec::new(class, 0))
}

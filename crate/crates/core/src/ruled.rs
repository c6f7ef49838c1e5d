//! Intersection numbers on the exceptional ruled surface of a curve blowup.
//!
//! `F -> C` is a ruled surface with fiber `M`. For an effective curve `C0` in `F`
//! with `C0 . C0 = tau` and `C0 . M = mu > 0`, the restriction `e = [F]|_F` is
//! numerically `-(1/mu) C0 + (tau/mu^2 + gamma)/2 M`, obtained from `e . M = -1`
//! and `e . e = -gamma`.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{frac, q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuledSurfaceData {
    /// `C0 . C0`
    pub tau: Q,
    /// `C0 . M`
    pub mu: u32,
    pub gamma: Q,
    /// Normalized invariant, when known.
    pub tau0: Option<i64>,
}

/// `F . C0` and the `(C0, M)` coordinates of `F . F` restricted to `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionProducts {
    pub f_dot_c0: Q,
    pub ff_c0_coeff: Q,
    pub ff_m_coeff: Q,
}

pub fn section_and_ff(data: &RuledSurfaceData) -> Result<SectionProducts> {
    if data.mu == 0 {
        return Err(Error::Degenerate("C0 . M = 0: the section is degenerate".into()));
    }
    let mu = q(i64::from(data.mu));
    let half = frac(1, 2);
    let f_dot_c0 = &half * (&data.gamma * &mu - &data.tau / &mu);
    let ff_c0_coeff = -(Q::from_integer(1.into()) / &mu);
    let ff_m_coeff = &half * (&data.tau / (&mu * &mu) + &data.gamma);
    Ok(SectionProducts {
        f_dot_c0,
        ff_c0_coeff,
        ff_m_coeff,
    })
}

/// Outcome of testing `V = a C0 + b M` on a ruled surface with `tau0 >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveCurveCheck {
    /// Whether `(a, b)` lies in the range allowed for an effective curve.
    pub admissible: bool,
    /// `V . V = a^2 tau0 + 2ab`
    pub self_int: Q,
    /// `F . V = e . V` computed with `mu = 1`, `tau = tau0`.
    pub f_dot_v: Q,
}

/// Numerical class test for `V = a C0 + b M` with `C0` the normalized section.
///
/// Admissible classes: `C0`, positive multiples of `M`, and
/// * `tau0 = 0`: `a > 0, b >= 0` (this includes the multiples `a C0`, `a > 1`);
/// * `tau0 > 0`: `a = 1, b >= 0`, or `a >= 2, b >= -a tau0 / 2`.
pub fn effective_curve_check(tau0: i64, gamma: &Q, a: i64, b: &Q) -> Result<EffectiveCurveCheck> {
    if tau0 < 0 {
        return Err(Error::InvalidInput(format!(
            "tau0 = {tau0} < 0 is outside the supported range"
        )));
    }
    let tau0_q = q(tau0);
    let a_q = q(a);
    let is_section = a == 1 && b.is_zero();
    let is_fiber_multiple = a == 0 && b.is_positive();
    let in_range = if tau0 == 0 {
        a > 0 && !b.is_negative()
    } else {
        (a == 1 && !b.is_negative()) || (a >= 2 && *b >= -(&a_q * &tau0_q) / q(2))
    };
    let admissible = is_section || is_fiber_multiple || in_range;
    let self_int = &a_q * &a_q * &tau0_q + q(2) * &a_q * b;
    // e = -C0 + (tau0 + gamma)/2 M, C0.C0 = tau0, C0.M = 1, M.M = 0
    let f_dot_v = -(&a_q * &tau0_q + b) + &a_q * (&tau0_q + gamma) / q(2);
    Ok(EffectiveCurveCheck {
        admissible,
        self_int,
        f_dot_v,
    })
}

//! Numerical hypotheses of the generalized points-and-curves criterion on `P3`.
//!
//! Points `p_1..p_n` are blown up to `X1`, then curves `D_j` with strict-transform classes
//! `deg_j l - sum_l m_lj L_l`. The criterion asks for
//!
//! * `sum_j E_l . D_j <= lambda` for every point,
//! * `(6 + gamma) / lambda > 11/2` where `gamma = sum_j deg_j`,
//! * `(1/2 + 1/lambda) c1(X1) . D_j >= (g_j - 1) / 2` for every curve.
//!
//! Only the hypotheses are checked; when all hold, `deg u = 0` is implied for nef classes
//! with vanishing square, exactly as in the all-lines configuration.

use num::Signed;

use crate::blowup::blow_up_point;
use crate::classes::CurveClass;
use crate::error::{Error, Result};
use crate::rational::{frac, q, Q};
use crate::ring::{make_base, BaseSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedCurve {
    pub degree: u32,
    pub genus: u32,
    /// `E_l . D_j` for `l = 1..n`.
    pub multiplicities: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedConfig {
    pub n: usize,
    pub curves: Vec<GeneralizedCurve>,
    pub lambda: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedReport {
    /// `sum_j E_l . D_j` per point.
    pub row_sums: Vec<Q>,
    pub gamma: Q,
    /// `(6 + gamma) / lambda`.
    pub ratio: Q,
    /// `(1/2 + 1/lambda) c1(X1) . D_j - (g_j - 1) / 2` per curve.
    pub curve_margins: Vec<Q>,
    pub rows_ok: bool,
    pub ratio_ok: bool,
    pub curves_ok: bool,
}

impl GeneralizedReport {
    pub fn holds(&self) -> bool {
        self.rows_ok && self.ratio_ok && self.curves_ok
    }
}

pub fn check_generalized(config: &GeneralizedConfig) -> Result<GeneralizedReport> {
    if !config.lambda.is_positive() {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    let n = config.n;
    let x1 = (0..n).fold(make_base(&BaseSpec::P3)?, |m, _| blow_up_point(&m));
    let mut classes = Vec::with_capacity(config.curves.len());
    for (j, c) in config.curves.iter().enumerate() {
        if c.multiplicities.len() != n {
            return Err(Error::InvalidInput(format!(
                "curve {} lists {} multiplicities for {n} points",
                j + 1,
                c.multiplicities.len()
            )));
        }
        let mut coefficients = vec![q(i64::from(c.degree))];
        coefficients.extend(c.multiplicities.iter().map(|&m| -q(i64::from(m))));
        classes.push(CurveClass::new(coefficients));
    }
    let mut row_sums = Vec::with_capacity(n);
    for l in 1..=n {
        let e = x1.divisor_unit(l);
        let mut sum = q(0);
        for class in &classes {
            sum += x1.pair(&e, class)?;
        }
        row_sums.push(sum);
    }
    let gamma: Q = config.curves.iter().map(|c| q(i64::from(c.degree))).sum();
    let ratio = (q(6) + &gamma) / &config.lambda;
    let weight = frac(1, 2) + q(1) / &config.lambda;
    let mut curve_margins = Vec::with_capacity(classes.len());
    for (c, class) in config.curves.iter().zip(&classes) {
        let c1_dot_d = x1.pair(x1.c1(), class)?;
        curve_margins.push(&weight * c1_dot_d - frac(i64::from(c.genus) - 1, 2));
    }
    Ok(GeneralizedReport {
        rows_ok: row_sums.iter().all(|s| *s <= config.lambda),
        ratio_ok: ratio > frac(11, 2),
        curves_ok: curve_margins.iter().all(|m| !m.is_negative()),
        row_sums,
        gamma,
        ratio,
        curve_margins,
    })
}

/// All lines through pairs of `n` points, with `lambda = n - 1`.
pub fn all_lines_config(n: usize) -> GeneralizedConfig {
    let mut curves = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut multiplicities = vec![0; n];
            multiplicities[i] = 1;
            multiplicities[j] = 1;
            curves.push(GeneralizedCurve {
                degree: 1,
                genus: 0,
                multiplicities,
            });
        }
    }
    GeneralizedConfig {
        n,
        curves,
        lambda: q(n as i64 - 1),
    }
}

//! Numerical checks: Einstein-equation residuals, closed-form versus
//! brute-force curvature, and constancy of pointwise constants.
//!
//! Sample points are evaluated in parallel, but every reduction runs over
//! the collected values in sample order, so reports are bitwise
//! reproducible for a given plan.

mod discrepancy;

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::chart::{CurvatureBundle, MetricChart};
use crate::error::{Error, Result};
use crate::grw::FamilyConstants;
use crate::sampling::{PlanSummary, SamplePlan};
use crate::warped::WarpedProduct;

pub use discrepancy::{
    discrepancies, Agreement, DiscrepancyReport, FamilyDiscrepancy, SignAgreement,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Relative standard deviation below which samples count as constant.
pub const CONSTANCY_REL_STD: f64 = 1e-8;
/// Components smaller than this in magnitude are compared absolutely in
/// [`oracle_diff`], like the `max(1, |g|)` normalisation of residuals.
/// A smaller floor turns roundoff (~1e-14) on components that vanish
/// identically into spurious relative differences.
pub const ORACLE_FLOOR: f64 = 1.0;
pub const DEFAULT_SAMPLES: usize = 100;
pub const ACCEPTANCE_SEED: u64 = 0xC05_305;

/// `max` that lets NaN through, so a broken sample cannot hide.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Format with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constancy {
    pub mean: f64,
    pub std: f64,
    pub is_constant: bool,
}

/// Mean, sample standard deviation, and whether
/// `std ≤ 1e-8 · max(1, |mean|)`.
pub fn constancy(values: &[f64]) -> Result<Constancy> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "constancy needs at least two samples, got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    Ok(Constancy {
        mean,
        std,
        is_constant: std <= CONSTANCY_REL_STD * mean.abs().max(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    pub oracle: f64,
    pub constancy_rel_std: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: DEFAULT_TOLERANCE,
            oracle: DEFAULT_TOLERANCE,
            constancy_rel_std: CONSTANCY_REL_STD,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            residual: tol,
            oracle: tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResidual {
    pub point: Vec<f64>,
    pub max_abs: f64,
    pub max_rel: f64,
}

/// `max_ab |G_ab + Λ̄ g_ab|` and the same normalised by `max(1, max|g_ab|)`.
pub fn residual_at(bundle: &CurvatureBundle, lambda_bar: f64) -> PointResidual {
    let resid = &bundle.einstein + &bundle.metric * lambda_bar;
    let max_abs = resid.amax();
    let scale = bundle.metric.amax().max(1.0);
    PointResidual {
        point: bundle.point.clone(),
        max_abs,
        max_rel: max_abs / scale,
    }
}

/// Coordinate estimate of the cosmological constant at a point,
/// `Λ = −tr(g⁻¹G)/dim`.
pub fn trace_lambda(bundle: &CurvatureBundle) -> f64 {
    // `+ 0.0` turns a negative zero into zero for flat charts
    -bundle.inverse_metric.component_mul(&bundle.einstein).sum() / bundle.dim() as f64 + 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub chart: String,
    pub lambda_bar: f64,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub residual_pass: bool,
    pub lambda_bar_stats: Option<Constancy>,
    pub lambda_fiber_stats: Option<Constancy>,
    pub oracle_diff: Option<f64>,
    pub sign_agreement: Vec<SignAgreement>,
    pub pass: bool,
    pub tolerances: Tolerances,
    pub samples: PlanSummary,
    #[serde(skip)]
    pub coords: Vec<String>,
    #[serde(skip)]
    pub residuals: Vec<PointResidual>,
}

impl VerificationReport {
    fn from_residuals(
        chart: &MetricChart,
        lambda_bar: f64,
        plan: &SamplePlan,
        residuals: Vec<PointResidual>,
        tolerances: Tolerances,
    ) -> Self {
        let max_abs_residual = residuals.iter().map(|r| r.max_abs).fold(0.0, worst);
        let max_rel_residual = residuals.iter().map(|r| r.max_rel).fold(0.0, worst);
        let residual_pass = max_rel_residual <= tolerances.residual;
        VerificationReport {
            chart: chart.name().to_string(),
            lambda_bar,
            max_abs_residual,
            max_rel_residual,
            residual_pass,
            lambda_bar_stats: None,
            lambda_fiber_stats: None,
            oracle_diff: None,
            sign_agreement: Vec::new(),
            pass: residual_pass,
            tolerances,
            samples: plan.summary(),
            coords: chart.coords().to_vec(),
            residuals,
        }
    }

    fn update_pass(&mut self) {
        let oracle_ok = self.oracle_diff.is_none_or(|d| d <= self.tolerances.oracle);
        let constant_ok = self.lambda_bar_stats.is_none_or(|s| s.is_constant);
        self.pass = self.residual_pass && oracle_ok && constant_ok;
    }

    /// Per-point residuals: one column per coordinate, then `max_abs`,
    /// `max_rel`.
    pub fn residuals_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.coords {
            out.push_str(c);
            out.push(',');
        }
        out.push_str("max_abs,max_rel\n");
        for r in &self.residuals {
            for x in &r.point {
                let _ = write!(out, "{},", fmt17(*x));
            }
            let _ = writeln!(out, "{},{}", fmt17(r.max_abs), fmt17(r.max_rel));
        }
        out
    }
}

/// Evaluate `f` at every point in parallel, returning results in point order
/// and the first error in point order.
fn par_eval<T: Send>(
    points: &[Vec<f64>],
    f: impl Fn(&[f64]) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = points.par_iter().map(|p| f(p)).collect();
    results.into_iter().collect()
}

/// Einstein-equation residual `G + Λ̄g` over the plan's points.
pub fn einstein_residual(
    chart: &MetricChart,
    lambda_bar: f64,
    plan: &SamplePlan,
    tolerance: f64,
) -> Result<VerificationReport> {
    let points = plan.points()?;
    let residuals = par_eval(&points, |p| {
        Ok(residual_at(&chart.curvature_bundle(p)?, lambda_bar))
    })?;
    Ok(VerificationReport::from_residuals(
        chart,
        lambda_bar,
        plan,
        residuals,
        Tolerances::uniform(tolerance),
    ))
}

fn relative_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / y.abs().max(ORACLE_FLOOR))
        .fold(0.0, worst)
}

/// Largest relative gap between closed-form and brute-force curvature at
/// one product point, over Ricci, scalar and Einstein components.
pub fn oracle_diff_at(w: &WarpedProduct, point: &[f64], brute: &CurvatureBundle) -> Result<f64> {
    let closed = w.closed_form_curvature(point)?;
    let scalar = (closed.scalar - brute.scalar).abs() / brute.scalar.abs().max(ORACLE_FLOOR);
    Ok(relative_gap(&closed.ricci(), &brute.ricci)
        .max(relative_gap(&closed.einstein(), &brute.einstein))
        .max(scalar))
}

/// Maximum of [`oracle_diff_at`] over the plan.
pub fn oracle_diff(w: &WarpedProduct, plan: &SamplePlan) -> Result<f64> {
    let points = plan.points()?;
    let diffs = par_eval(&points, |p| {
        oracle_diff_at(w, p, &w.product().curvature_bundle(p)?)
    })?;
    Ok(diffs.into_iter().fold(0.0, worst))
}

/// Constancy of the trace estimate `−tr(g⁻¹G)/dim` over the plan.
pub fn coordinate_lambda(chart: &MetricChart, plan: &SamplePlan) -> Result<Constancy> {
    let points = plan.points()?;
    let values = par_eval(&points, |p| Ok(trace_lambda(&chart.curvature_bundle(p)?)))?;
    constancy(&values)
}

/// Pointwise `Λ̄` from the base-side formula, over the base part of each
/// sample.
pub fn lambda_bar_samples(w: &WarpedProduct, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    par_eval(points, |p| w.lambda_bar(&p[..w.m()]))
}

/// Pointwise induced fiber constant over the base part of each sample.
pub fn lambda_fiber_samples(w: &WarpedProduct, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    par_eval(points, |p| {
        Ok(w.fiber_einstein_condition(&p[..w.m()])?.lambda_fiber)
    })
}

/// Largest relative residual of `G_αβ + Λ h_αβ` on the fiber, with `Λ` the
/// induced constant at the sample's base point.
pub fn induced_fiber_residual(w: &WarpedProduct, plan: &SamplePlan) -> Result<f64> {
    let points = plan.points()?;
    let m = w.m();
    let resid = par_eval(&points, |p| {
        let lambda = w.fiber_einstein_condition(&p[..m])?.lambda_fiber;
        Ok(residual_at(&w.fiber().curvature_bundle(&p[m..])?, lambda).max_rel)
    })?;
    Ok(resid.into_iter().fold(0.0, worst))
}

/// Fiber cosmological constant measured on the fiber chart alone.
pub fn fiber_lambda_oracle(w: &WarpedProduct, plan: &SamplePlan) -> Result<Constancy> {
    let points = plan.points()?;
    let m = w.m();
    let values = par_eval(&points, |p| {
        Ok(trace_lambda(&w.fiber().curvature_bundle(&p[m..])?))
    })?;
    constancy(&values)
}

/// How `Λ̄` is chosen for a residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPolicy {
    /// The value printed for the family in the classification theorem.
    Paper,
    /// The coordinate estimate `−tr(g⁻¹G)/dim`, averaged over samples.
    Oracle,
    Explicit(f64),
}

/// Full check of a warped product: residual, closed-form agreement, and
/// constancy of `Λ̄` and the induced fiber constant. When `paper` constants
/// are supplied the report also records sign agreement with the oracle.
pub fn verify_warped(
    w: &WarpedProduct,
    policy: LambdaPolicy,
    paper: Option<FamilyConstants>,
    plan: &SamplePlan,
    tolerances: Tolerances,
) -> Result<VerificationReport> {
    let product = w.product();
    let points = plan.points()?;
    let bundles = par_eval(&points, |p| product.curvature_bundle(p))?;

    let traces: Vec<f64> = bundles.iter().map(trace_lambda).collect();
    let oracle = constancy(&traces)?;
    let lambda_bar = match policy {
        LambdaPolicy::Paper => {
            paper
                .ok_or_else(|| {
                    Error::InvalidArgument("lambda_bar policy \"paper\" needs a warping family".into())
                })?
                .lambda_bar_paper
        }
        LambdaPolicy::Oracle => oracle.mean,
        LambdaPolicy::Explicit(v) => v,
    };

    let residuals = bundles.iter().map(|b| residual_at(b, lambda_bar)).collect();
    let mut report =
        VerificationReport::from_residuals(product, lambda_bar, plan, residuals, tolerances);

    let diffs: Vec<Result<f64>> = points
        .par_iter()
        .zip(bundles.par_iter())
        .map(|(p, b)| oracle_diff_at(w, p, b))
        .collect();
    let diffs = diffs.into_iter().collect::<Result<Vec<_>>>()?;
    report.oracle_diff = Some(diffs.into_iter().fold(0.0, worst));

    if w.m() + w.n() > 2 {
        let mut stats = constancy(&lambda_bar_samples(w, &points)?)?;
        stats.is_constant = stats.std <= tolerances.constancy_rel_std * stats.mean.abs().max(1.0);
        report.lambda_bar_stats = Some(stats);
    }
    let mut fiber_stats = constancy(&lambda_fiber_samples(w, &points)?)?;
    fiber_stats.is_constant =
        fiber_stats.std <= tolerances.constancy_rel_std * fiber_stats.mean.abs().max(1.0);
    report.lambda_fiber_stats = Some(fiber_stats);

    if let Some(paper) = paper {
        let fiber_oracle = fiber_lambda_oracle(w, plan)?;
        report.sign_agreement = vec![
            SignAgreement::compare("lambda_bar", paper.lambda_bar_paper, oracle.mean),
            SignAgreement::compare("lambda_fiber", paper.lambda_fiber_paper, fiber_oracle.mean),
        ];
    }
    report.update_pass();
    Ok(report)
}

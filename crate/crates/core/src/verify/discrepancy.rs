//! Sign findings: published family constants against coordinate evidence.
//!
//! Three tensions are tracked per family:
//!
//! - A: `Λ̄` as stated (and in its `B`-form) against
//!   the coordinate trace estimate and the base-side formula.
//! - B: the stated fiber constant against the `B`-form fiber constant and the
//!   fiber's own Einstein tensor.
//! - C: the printed Laplacian eigenvalue against the one implied by the `Λ̄`
//!   relation.
//!
//! Each row carries residual evidence: the Einstein residual of the family
//! chart with the oracle `Λ̄` and with the stated `Λ̄`.

use serde::Serialize;

use super::{
    constancy, einstein_residual, fiber_lambda_oracle, lambda_bar_samples, lambda_fiber_samples,
    trace_lambda, worst, DEFAULT_TOLERANCE,
};
use crate::error::Result;
use crate::grw::{grw_constants, FamilyKind, FiberKind, GrwFamily};
use crate::sampling::SamplePlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agrees,
    Disagrees,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignAgreement {
    pub quantity: String,
    pub paper: f64,
    pub oracle: f64,
    pub agreement: Agreement,
}

impl SignAgreement {
    /// Values agree in sign when both are zero (to `1e-9` relative) or both
    /// have the same sign.
    pub fn compare(quantity: &str, paper: f64, oracle: f64) -> Self {
        let scale = paper.abs().max(oracle.abs()).max(1.0);
        let sign = |v: f64| {
            if v.abs() <= 1e-9 * scale {
                0
            } else if v > 0.0 {
                1
            } else {
                -1
            }
        };
        let agreement = if sign(paper) == sign(oracle) {
            Agreement::Agrees
        } else {
            Agreement::Disagrees
        };
        SignAgreement {
            quantity: quantity.to_string(),
            paper,
            oracle,
            agreement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyDiscrepancy {
    pub family: GrwFamily,
    pub fiber: FiberKind,
    pub fiber_radius: f64,
    /// Stated in the classification theorem.
    pub lambda_bar_theorem: f64,
    /// `−n(n−1)(B²+2B′)/8`, mean over samples.
    pub lambda_bar_126: f64,
    /// Base-side formula `−((m+n−2)/2m)(nΔf/f − S₁)`, mean over samples.
    pub lambda_bar_base: f64,
    /// `−tr(ḡ⁻¹Ḡ)/(n+1)` from brute-force curvature, mean over samples.
    pub lambda_bar_oracle: f64,
    /// Einstein residual with `Λ̄ = lambda_bar_oracle`.
    pub residual_oracle_sign: f64,
    /// Einstein residual with `Λ̄ = lambda_bar_theorem`.
    pub residual_paper_sign: f64,
    pub lambda_fiber_theorem: f64,
    /// `(n−1)(n−2)f²B′/4`, mean over samples.
    pub lambda_fiber_128: f64,
    /// Induced constant from the base-side formula, mean over samples.
    pub lambda_fiber_induced: f64,
    /// `−tr(h⁻¹G)/n` on the fiber chart.
    pub lambda_fiber_oracle: f64,
    /// Largest `|Δf − μ f|` with `μ` from the `Λ̄` relation.
    pub eigen_residual_derived: f64,
    /// Largest `|Δf − μ f|` with `μ` as printed.
    pub eigen_residual_paper: f64,
    pub lambda_bar_sign: SignAgreement,
    pub lambda_fiber_sign: SignAgreement,
    pub b_form_fiber_sign: SignAgreement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub k: f64,
    pub b: f64,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<FamilyDiscrepancy>,
}

/// Compare published and measured constants for every family with the
/// given parameters, each over its matched Einstein fiber.
pub fn discrepancies(
    n: usize,
    l: f64,
    k: f64,
    b: f64,
    samples: usize,
    seed: u64,
) -> Result<DiscrepancyReport> {
    let rows = FamilyKind::ALL
        .into_iter()
        .map(|kind| family_row(GrwFamily::new(kind, n, k, l, b)?, samples, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscrepancyReport {
        n,
        l,
        k,
        b,
        samples,
        seed,
        rows,
    })
}

fn family_row(family: GrwFamily, samples: usize, seed: u64) -> Result<FamilyDiscrepancy> {
    let w = family.matched_chart()?;
    let (fiber, fiber_radius) = family.matched_fiber();
    let product = w.product();
    let plan = SamplePlan::for_chart(product, samples, seed);
    let points = plan.points()?;
    let paper = family.paper_constants();

    let traces = points
        .iter()
        .map(|p| Ok(trace_lambda(&product.curvature_bundle(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let lambda_bar_oracle = constancy(&traces)?.mean;
    let lambda_bar_base = constancy(&lambda_bar_samples(&w, &points)?)?.mean;
    let lambda_fiber_induced = constancy(&lambda_fiber_samples(&w, &points)?)?.mean;
    let lambda_fiber_oracle = fiber_lambda_oracle(&w, &plan)?.mean;

    let mut bar_126 = Vec::with_capacity(points.len());
    let mut fiber_128 = Vec::with_capacity(points.len());
    let mut eigen_derived = 0.0;
    let mut eigen_paper = 0.0;
    for p in &points {
        let c = grw_constants(w.warp(), family.n, p[0])?;
        bar_126.push(c.lambda_bar_126);
        fiber_128.push(c.lambda_fiber_128);
        let ev = w.eigenvalue_check(lambda_bar_oracle, &p[..1])?;
        eigen_derived = worst(eigen_derived, ev.residual_derived);
        eigen_paper = worst(eigen_paper, ev.residual_paper);
    }
    let lambda_bar_126 = constancy(&bar_126)?.mean;
    let lambda_fiber_128 = constancy(&fiber_128)?.mean;

    let residual_oracle_sign =
        einstein_residual(product, lambda_bar_oracle, &plan, DEFAULT_TOLERANCE)?.max_rel_residual;
    let residual_paper_sign =
        einstein_residual(product, paper.lambda_bar_paper, &plan, DEFAULT_TOLERANCE)?
            .max_rel_residual;

    Ok(FamilyDiscrepancy {
        family,
        fiber,
        fiber_radius,
        lambda_bar_theorem: paper.lambda_bar_paper,
        lambda_bar_126,
        lambda_bar_base,
        lambda_bar_oracle,
        residual_oracle_sign,
        residual_paper_sign,
        lambda_fiber_theorem: paper.lambda_fiber_paper,
        lambda_fiber_128,
        lambda_fiber_induced,
        lambda_fiber_oracle,
        eigen_residual_derived: eigen_derived,
        eigen_residual_paper: eigen_paper,
        lambda_bar_sign: SignAgreement::compare(
            "lambda_bar",
            paper.lambda_bar_paper,
            lambda_bar_oracle,
        ),
        lambda_fiber_sign: SignAgreement::compare(
            "lambda_fiber",
            paper.lambda_fiber_paper,
            lambda_fiber_oracle,
        ),
        b_form_fiber_sign: SignAgreement::compare(
            "lambda_fiber_128",
            lambda_fiber_128,
            lambda_fiber_oracle,
        ),
    })
}

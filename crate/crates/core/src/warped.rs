//! Warped products `M₁ ×_f M₂` with metric `g + f²h`.
//!
//! Base indices `i, j` run over the first `m` product coordinates, fiber
//! indices `α, β` over the last `n`. All base-side quantities (`Δf`,
//! `‖grad f‖²`, `H^f`) come from [`MetricChart::field_calculus`] on the base
//! chart with its own signature, so Riemannian and Lorentzian bases share one
//! code path.

use nalgebra::DMatrix;

use crate::chart::{CurvatureBundle, FieldCalculus, MetricChart};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::sampling::SamplePlan;
use crate::ScalarField;

/// Samples used to check positivity of the warping function at assembly.
pub const POSITIVITY_SAMPLES: usize = 64;
const POSITIVITY_SEED: u64 = 0x5eed_f00d;

#[derive(Debug, Clone)]
pub struct WarpedProduct {
    base: MetricChart,
    fiber: MetricChart,
    warp: ScalarField,
    product: MetricChart,
}

/// Closed-form Ricci, scalar and Einstein blocks of a warped product.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedCurvature {
    pub ric_base: DMatrix<f64>,
    pub ric_mixed: DMatrix<f64>,
    pub ric_fiber: DMatrix<f64>,
    pub scalar: f64,
    pub ein_base: DMatrix<f64>,
    pub ein_mixed: DMatrix<f64>,
    pub ein_fiber: DMatrix<f64>,
}

impl WarpedCurvature {
    fn assemble_blocks(
        base: &DMatrix<f64>,
        mixed: &DMatrix<f64>,
        fiber: &DMatrix<f64>,
    ) -> DMatrix<f64> {
        let (m, n) = (base.nrows(), fiber.nrows());
        let mut out = DMatrix::zeros(m + n, m + n);
        out.view_mut((0, 0), (m, m)).copy_from(base);
        out.view_mut((0, m), (m, n)).copy_from(mixed);
        out.view_mut((m, 0), (n, m)).copy_from(&mixed.transpose());
        out.view_mut((m, m), (n, n)).copy_from(fiber);
        out
    }

    /// Full `(m+n) × (m+n)` Ricci tensor.
    pub fn ricci(&self) -> DMatrix<f64> {
        Self::assemble_blocks(&self.ric_base, &self.ric_mixed, &self.ric_fiber)
    }

    /// Full `(m+n) × (m+n)` Einstein tensor.
    pub fn einstein(&self) -> DMatrix<f64> {
        Self::assemble_blocks(&self.ein_base, &self.ein_mixed, &self.ein_fiber)
    }
}

/// Base-side data at one base point.
#[derive(Debug, Clone)]
pub struct BaseData {
    pub curvature: CurvatureBundle,
    pub warp: FieldCalculus,
}

/// Pointwise values from the fiber Einstein condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberCondition {
    /// Coefficient of `h_αβ` in the fiber Ricci tensor of an exact solution.
    pub ric_coeff: f64,
    /// Induced fiber cosmological constant, `G_αβ = −Λ h_αβ`.
    pub lambda_fiber: f64,
}

/// Residuals of `Δf = μ f` for the eigenvalue obtained from the Λ̄ relation
/// (`derived`) and the eigenvalue as printed in the corollary (`paper`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueResiduals {
    pub residual_derived: f64,
    pub residual_paper: f64,
    pub eigenvalue_derived: f64,
    pub eigenvalue_paper: f64,
}

impl WarpedProduct {
    pub fn assemble(base: MetricChart, fiber: MetricChart, warp: ScalarField) -> Result<Self> {
        if let Some(c) = fiber.coords().iter().find(|c| base.coords().contains(c)) {
            return Err(Error::NameCollision(c.clone()));
        }
        if warp.expr().coords() != base.coords() {
            return Err(Error::InvalidArgument(
                "warping function must be defined over the base coordinates".into(),
            ));
        }
        for x in SamplePlan::for_chart(&base, POSITIVITY_SAMPLES, POSITIVITY_SEED).points()? {
            let value = warp.value(&x)?;
            if !(value > 0.0) {
                return Err(Error::NonPositiveWarp { value, point: x });
            }
        }

        let (m, n) = (base.dim(), fiber.dim());
        let coords: Vec<String> = base
            .coords()
            .iter()
            .chain(fiber.coords())
            .cloned()
            .collect();
        let zero = Expression::constant(0.0, &coords);
        let f_sq = warp.expr().embed(&coords, |i| i).powi(2);
        let mut components = vec![zero; (m + n) * (m + n)];
        for a in 0..m {
            for b in 0..m {
                components[a * (m + n) + b] = base.component(a, b).embed(&coords, |i| i);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let h = fiber.component(a, b);
                if !h.is_zero() {
                    components[(m + a) * (m + n) + m + b] =
                        f_sq.times(&h.embed(&coords, |i| i + m));
                }
            }
        }
        let signature = base
            .signature()
            .iter()
            .chain(fiber.signature())
            .copied()
            .collect();
        let domain = base.domain().product(fiber.domain());
        let coord_refs: Vec<&str> = coords.iter().map(String::as_str).collect();
        let product = MetricChart::new(
            format!("{} x_f {}", base.name(), fiber.name()),
            &coord_refs,
            components,
            signature,
            domain,
        )?;
        Ok(WarpedProduct {
            base,
            fiber,
            warp,
            product,
        })
    }

    pub fn base(&self) -> &MetricChart {
        &self.base
    }

    pub fn fiber(&self) -> &MetricChart {
        &self.fiber
    }

    pub fn warp(&self) -> &ScalarField {
        &self.warp
    }

    pub fn product(&self) -> &MetricChart {
        &self.product
    }

    /// Base dimension `m`.
    pub fn m(&self) -> usize {
        self.base.dim()
    }

    /// Fiber dimension `n`.
    pub fn n(&self) -> usize {
        self.fiber.dim()
    }

    /// Split a product point into base and fiber parts.
    pub fn split<'p>(&self, point: &'p [f64]) -> Result<(&'p [f64], &'p [f64])> {
        if point.len() != self.m() + self.n() {
            return Err(Error::Dimension {
                expected: self.m() + self.n(),
                found: point.len(),
            });
        }
        Ok(point.split_at(self.m()))
    }

    pub fn base_data(&self, x: &[f64]) -> Result<BaseData> {
        let curvature = self.base.curvature_bundle(x)?;
        let warp = self.base.field_calculus(&self.warp, x)?;
        if !(warp.value > 0.0) {
            return Err(Error::NonPositiveWarp {
                value: warp.value,
                point: x.to_vec(),
            });
        }
        Ok(BaseData { curvature, warp })
    }

    /// Ricci, scalar and Einstein components from the warped-product
    /// formulas, using only base and fiber curvature and the field calculus
    /// of `f` on the base.
    pub fn closed_form_curvature(&self, point: &[f64]) -> Result<WarpedCurvature> {
        let (x, y) = self.split(point)?;
        let BaseData {
            curvature: base,
            warp,
        } = self.base_data(x)?;
        let fiber = self.fiber.curvature_bundle(y)?;
        let (m, n) = (self.m(), self.n());
        let nf = n as f64;

        let f = warp.value;
        let lap = warp.laplacian / f;
        let norm = warp.grad_norm_sq / (f * f);
        let h = &fiber.metric;
        let g = &base.metric;
        let s1 = base.scalar;
        let s2 = fiber.scalar;

        let ric_base = &base.ricci - &warp.hessian * (nf / f);
        let ric_fiber = &fiber.ricci - h * ((lap + (nf - 1.0) * norm) * f * f);
        let scalar = s1 + s2 / (f * f) - 2.0 * nf * lap - nf * (nf - 1.0) * norm;

        let ein_base = &base.einstein
            - &warp.hessian * (nf / f)
            - g * (0.5 * (s2 / (f * f) - 2.0 * nf * lap - nf * (nf - 1.0) * norm));
        let ein_fiber = &fiber.einstein
            - h * (f * f * (lap * (1.0 - nf) + 0.5 * s1 + (nf - 1.0) * (2.0 - nf) / 2.0 * norm));

        Ok(WarpedCurvature {
            ric_base,
            ric_mixed: DMatrix::zeros(m, n),
            ric_fiber,
            scalar,
            ein_base,
            ein_mixed: DMatrix::zeros(m, n),
            ein_fiber,
        })
    }

    /// Pointwise `Λ̄ = −((m+n−2)/(2m)) (n Δf/f − S₁)` at a base point.
    pub fn lambda_bar(&self, x: &[f64]) -> Result<f64> {
        let (m, n) = (self.m() as f64, self.n() as f64);
        if self.m() + self.n() <= 2 {
            return Err(Error::InvalidArgument(format!(
                "Λ̄ needs m + n > 2, got m = {m}, n = {n}"
            )));
        }
        let d = self.base_data(x)?;
        Ok(-((m + n - 2.0) / (2.0 * m))
            * (n * d.warp.laplacian / d.warp.value - d.curvature.scalar))
    }

    /// Fiber Ricci coefficient and induced fiber cosmological constant at a
    /// base point.
    pub fn fiber_einstein_condition(&self, x: &[f64]) -> Result<FiberCondition> {
        let (m, n) = (self.m() as f64, self.n() as f64);
        let d = self.base_data(x)?;
        let f = d.warp.value;
        let ric_coeff = f
            * f
            * (d.warp.laplacian / f * (1.0 - n / m)
                + d.curvature.scalar / m
                + (n - 1.0) * d.warp.grad_norm_sq / (f * f));
        Ok(FiberCondition {
            ric_coeff,
            lambda_fiber: -(1.0 - n / 2.0) * ric_coeff,
        })
    }

    pub fn eigenvalue_check(&self, lambda_bar: f64, x: &[f64]) -> Result<EigenvalueResiduals> {
        let (m, n) = (self.m() as f64, self.n() as f64);
        if self.m() + self.n() <= 2 {
            return Err(Error::InvalidArgument(
                "eigenvalue check needs m + n > 2".into(),
            ));
        }
        let d = self.base_data(x)?;
        let s1 = d.curvature.scalar;
        let denom = n * (m + n - 2.0);
        let eigenvalue_derived = ((m + n - 2.0) * s1 - 2.0 * m * lambda_bar) / denom;
        let eigenvalue_paper = (2.0 * m * lambda_bar + (m + n - 2.0) * s1) / denom;
        let f = d.warp.value;
        Ok(EigenvalueResiduals {
            residual_derived: (d.warp.laplacian - eigenvalue_derived * f).abs(),
            residual_paper: (d.warp.laplacian - eigenvalue_paper * f).abs(),
            eigenvalue_derived,
            eigenvalue_paper,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::chart::Domain;

    fn sphere(coords: [&str; 2], r: f64) -> MetricChart {
        MetricChart::diagonal(
            "S2",
            &coords,
            &[
                &format!("{}", r * r),
                &format!("{}*sin({})^2", r * r, coords[0]),
            ],
            vec![1, 1],
            Domain::boxed(vec![(0.3, PI - 0.3), (0.0, 2.0 * PI)]),
        )
        .unwrap()
    }

    fn flat(coords: &[&str]) -> MetricChart {
        MetricChart::flat(
            "flat",
            coords,
            vec![1; coords.len()],
            vec![(-1.0, 1.0); coords.len()],
        )
        .unwrap()
    }

    fn time() -> MetricChart {
        MetricChart::flat("I", &["t"], vec![-1], vec![(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn constant_warp_gives_block_metric() {
        let base = sphere(["a", "b"], 1.0);
        let fiber = flat(&["x", "y"]);
        let f = ScalarField::parse("1", &base).unwrap();
        let w = WarpedProduct::assemble(base, fiber, f).unwrap();
        let g = w.product().metric_at(&[1.0, 0.2, 0.3, 0.4]).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0,
            1.0f64.sin().powi(2),
            1.0,
            1.0,
        ]));
        assert!((g - expected).abs().max() < 1e-15);
        for i in 0..2 {
            for a in 2..4 {
                assert!(w.product().component(i, a).is_zero());
                assert!(w.product().component(a, i).is_zero());
            }
        }
    }

    #[test]
    fn exponential_warp_components() {
        let base = time();
        let f = ScalarField::parse("exp(t/2)", &base).unwrap();
        let w = WarpedProduct::assemble(base, flat(&["x", "y"]), f).unwrap();
        let g = w.product().metric_at(&[0.6, 0.1, -0.3]).unwrap();
        assert!((g[(1, 1)] - 0.6f64.exp()).abs() < 1e-14);
        assert!((g[(2, 2)] - 0.6f64.exp()).abs() < 1e-14);
        assert_eq!(g[(0, 1)], 0.0);
        assert_eq!(g[(1, 2)], 0.0);
        assert_eq!(g[(0, 0)], -1.0);
    }

    #[test]
    fn assembly_errors() {
        let base = time();
        let f = ScalarField::parse("-1", &base).unwrap();
        assert!(matches!(
            WarpedProduct::assemble(base.clone(), flat(&["x"]), f),
            Err(Error::NonPositiveWarp { .. })
        ));
        let f = ScalarField::parse("1", &base).unwrap();
        assert!(matches!(
            WarpedProduct::assemble(base, flat(&["t"]), f),
            Err(Error::NameCollision(_))
        ));
    }

    #[test]
    fn constant_warp_closed_form() {
        let base = sphere(["a", "b"], 1.0);
        let fiber = sphere(["c", "d"], 1.0);
        let f = ScalarField::parse("2", &base).unwrap();
        let w = WarpedProduct::assemble(base, fiber, f).unwrap();
        let p = [1.0, 0.5, 1.3, 2.0];
        let wc = w.closed_form_curvature(&p).unwrap();
        let b = w.base().curvature_bundle(&p[..2]).unwrap();
        let fb = w.fiber().curvature_bundle(&p[2..]).unwrap();
        assert!((&wc.ric_base - &b.ricci).abs().max() < 1e-14);
        assert!((&wc.ric_fiber - &fb.ricci).abs().max() < 1e-14);
        assert!((wc.scalar - (2.0 + 2.0 / 4.0)).abs() < 1e-13);
        assert!(wc.ein_mixed.iter().all(|v| *v == 0.0));
        assert!(wc.ric_mixed.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn closed_form_matches_brute_force_on_small_example() {
        let base = MetricChart::diagonal(
            "B",
            &["u", "v"],
            &["1 + 0.1*v^2", "1"],
            vec![1, 1],
            Domain::boxed(vec![(-1.0, 1.0); 2]),
        )
        .unwrap();
        let fiber = sphere(["c", "d"], 1.0);
        let f = ScalarField::parse("1 + 0.1*u^2", &base).unwrap();
        let w = WarpedProduct::assemble(base, fiber, f).unwrap();
        let p = [0.4, -0.3, 1.1, 0.7];
        let wc = w.closed_form_curvature(&p).unwrap();
        let brute = w.product().curvature_bundle(&p).unwrap();
        assert!((wc.ricci() - &brute.ricci).abs().max() < 1e-10);
        assert!((wc.einstein() - &brute.einstein).abs().max() < 1e-10);
        assert!((wc.scalar - brute.scalar).abs() < 1e-10);
    }

    #[test]
    fn lambda_bar_simple_cases() {
        // constant f over a flat base
        let w = WarpedProduct::assemble(
            flat(&["u", "v"]),
            flat(&["x"]),
            ScalarField::parse("3", &flat(&["u", "v"])).unwrap(),
        )
        .unwrap();
        assert_eq!(w.lambda_bar(&[0.1, 0.2]).unwrap(), 0.0);
        let fc = w.fiber_einstein_condition(&[0.1, 0.2]).unwrap();
        assert_eq!((fc.lambda_fiber, fc.ric_coeff), (0.0, 0.0));

        // unit sphere base, n = 2, f = 1: ((2+2-2)/4)·(0-2)·(-1) = 1
        let base = sphere(["a", "b"], 1.0);
        let f = ScalarField::parse("1", &base).unwrap();
        let w = WarpedProduct::assemble(base, flat(&["x", "y"]), f).unwrap();
        assert!((w.lambda_bar(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        // n = 2 makes the induced fiber constant vanish
        assert_eq!(
            w.fiber_einstein_condition(&[1.0, 0.0])
                .unwrap()
                .lambda_fiber,
            0.0
        );
    }

    #[test]
    fn lambda_bar_exponential_interval() {
        for l in [0.5, 1.0, 2.0] {
            let base = time();
            let f = ScalarField::parse(&format!("exp(t/{l})"), &base).unwrap();
            let w = WarpedProduct::assemble(base, flat(&["x", "y", "z"]), f).unwrap();
            let lb = w.lambda_bar(&[0.3]).unwrap();
            assert!((lb - 3.0 / (l * l)).abs() < 1e-12 * lb.abs());
        }
    }

    #[test]
    fn lambda_bar_needs_three_dimensions() {
        let base = time();
        let f = ScalarField::parse("1", &base).unwrap();
        let w = WarpedProduct::assemble(base, flat(&["x"]), f).unwrap();
        assert!(w.lambda_bar(&[0.0]).is_err());
        assert!(w.eigenvalue_check(0.0, &[0.0]).is_err());
    }

    #[test]
    fn eigenvalue_residuals_for_exponential_warp() {
        let base = time();
        let f = ScalarField::parse("exp(t)", &base).unwrap();
        let w = WarpedProduct::assemble(base, flat(&["x", "y", "z"]), f).unwrap();
        let t = [0.25];
        let lb = w.lambda_bar(&t).unwrap();
        assert!((lb - 3.0).abs() < 1e-12);
        let ev = w.eigenvalue_check(lb, &t).unwrap();
        let fv = 0.25f64.exp();
        assert!(ev.residual_derived < 1e-12);
        assert!((ev.residual_paper - 2.0 * fv).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_for_constant_warp() {
        let base = sphere(["a", "b"], 1.0);
        let f = ScalarField::parse("1.5", &base).unwrap();
        let w = WarpedProduct::assemble(base, flat(&["x", "y"]), f).unwrap();
        let (m, n) = (2.0, 2.0);
        let lb = (m + n - 2.0) * 2.0 / (2.0 * m);
        let ev = w.eigenvalue_check(lb, &[1.0, 0.0]).unwrap();
        assert!(ev.residual_derived < 1e-12);
    }
}

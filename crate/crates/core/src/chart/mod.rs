//! Coordinate charts and brute-force curvature.
//!
//! Everything here works from the metric components of a single chart,
//! differentiated exactly with second-order jets. Index conventions:
//!
//! ```text
//! Γ^k_ij   = ½ g^kl (∂_j g_il + ∂_i g_jl − ∂_l g_ij)
//! R^l_ijk  = ∂_j Γ^l_ik − ∂_k Γ^l_ij + Γ^l_jm Γ^m_ik − Γ^l_km Γ^m_ij
//! R_ij     = R^k_ikj
//! G_ij     = R_ij − ½ S g_ij
//! ```
//!
//! With these the unit n-sphere has `Ric = (n−1) g`.

mod curvature;

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::expr::{Expression, Jet2};

pub use curvature::{CurvatureBundle, FieldCalculus, MetricJet, Tensor3, Tensor4};

/// Points with `|det g|` below this are treated as degenerate.
pub const DEGENERATE_DET: f64 = 1e-12;

/// Default exclusion radius around coordinate singularities.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-2;

/// A neighbourhood of `center + h·period` (h ∈ ℤ, or just `center` when
/// aperiodic) in one coordinate that sampling must avoid.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub coord: usize,
    pub center: f64,
    pub period: Option<f64>,
    pub radius: f64,
}

impl Exclusion {
    pub fn point(coord: usize, center: f64) -> Self {
        Exclusion {
            coord,
            center,
            period: None,
            radius: DEFAULT_EXCLUSION_RADIUS,
        }
    }

    pub fn periodic(coord: usize, center: f64, period: f64) -> Self {
        Exclusion {
            coord,
            center,
            period: Some(period),
            radius: DEFAULT_EXCLUSION_RADIUS,
        }
    }

    pub fn excludes(&self, point: &[f64]) -> bool {
        let d = point[self.coord] - self.center;
        let d = match self.period {
            Some(p) => d - p * (d / p).round(),
            None => d,
        };
        d.abs() < self.radius
    }

    fn shifted(&self, offset: usize) -> Self {
        Exclusion {
            coord: self.coord + offset,
            ..self.clone()
        }
    }
}

/// Admissible sampling region of a chart: a coordinate box minus exclusions.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub bounds: Vec<(f64, f64)>,
    pub exclusions: Vec<Exclusion>,
}

impl Domain {
    pub fn boxed(bounds: Vec<(f64, f64)>) -> Self {
        Domain {
            bounds,
            exclusions: Vec::new(),
        }
    }

    pub fn admits(&self, point: &[f64]) -> bool {
        point.len() == self.bounds.len()
            && point
                .iter()
                .zip(&self.bounds)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
            && !self.exclusions.iter().any(|e| e.excludes(point))
    }

    /// Cartesian product with `other`'s coordinates appended.
    pub fn product(&self, other: &Domain) -> Domain {
        let offset = self.bounds.len();
        Domain {
            bounds: self.bounds.iter().chain(&other.bounds).copied().collect(),
            exclusions: self
                .exclusions
                .iter()
                .cloned()
                .chain(other.exclusions.iter().map(|e| e.shifted(offset)))
                .collect(),
        }
    }
}

/// Metric components as expressions over named coordinates.
///
/// Only the upper triangle is evaluated; the `(j, i)` entry is assumed to
/// equal `(i, j)` and [`MetricChart::check_at`] verifies that it does.
#[derive(Debug, Clone)]
pub struct MetricChart {
    name: String,
    coords: Vec<String>,
    components: Vec<Expression>,
    signature: Vec<i8>,
    domain: Domain,
}

impl MetricChart {
    pub fn new(
        name: impl Into<String>,
        coords: &[&str],
        components: Vec<Expression>,
        signature: Vec<i8>,
        domain: Domain,
    ) -> Result<Self> {
        let dim = coords.len();
        let coords: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        if dim == 0 {
            return Err(Error::InvalidChart(
                "chart needs at least one coordinate".into(),
            ));
        }
        if components.len() != dim * dim {
            return Err(Error::InvalidChart(format!(
                "expected {} metric components, got {}",
                dim * dim,
                components.len()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.coords() != coords.as_slice()) {
            return Err(Error::InvalidChart(format!(
                "component `{c}` is over coordinates {:?}, chart has {coords:?}",
                c.coords()
            )));
        }
        if signature.len() != dim || signature.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidChart(format!(
                "signature {signature:?} must list ±1 for each of {dim} coordinates"
            )));
        }
        if domain.bounds.len() != dim || domain.bounds.iter().any(|(lo, hi)| !(lo <= hi)) {
            return Err(Error::InvalidChart(
                "domain bounds do not match the coordinates".into(),
            ));
        }
        if domain.exclusions.iter().any(|e| e.coord >= dim) {
            return Err(Error::InvalidChart(
                "exclusion refers to a missing coordinate".into(),
            ));
        }
        Ok(MetricChart {
            name: name.into(),
            coords,
            components,
            signature,
            domain,
        })
    }

    /// Parse a full `dim × dim` matrix of component sources.
    pub fn parse(
        name: impl Into<String>,
        coords: &[&str],
        rows: &[&[&str]],
        signature: Vec<i8>,
        domain: Domain,
    ) -> Result<Self> {
        let mut components = Vec::with_capacity(coords.len() * coords.len());
        for row in rows {
            if row.len() != coords.len() {
                return Err(Error::InvalidChart("metric rows must be square".into()));
            }
            for src in *row {
                components.push(Expression::parse(src, coords)?);
            }
        }
        Self::new(name, coords, components, signature, domain)
    }

    /// Diagonal metric from parsed diagonal entries.
    pub fn diagonal(
        name: impl Into<String>,
        coords: &[&str],
        diag: &[&str],
        signature: Vec<i8>,
        domain: Domain,
    ) -> Result<Self> {
        let owned: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let dim = coords.len();
        if diag.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: diag.len(),
            });
        }
        let mut components = vec![Expression::constant(0.0, &owned); dim * dim];
        for (i, src) in diag.iter().enumerate() {
            components[i * dim + i] = Expression::parse(src, coords)?;
        }
        Self::new(name, coords, components, signature, domain)
    }

    /// Flat metric `diag(signature)` over the given box.
    pub fn flat(
        name: impl Into<String>,
        coords: &[&str],
        signature: Vec<i8>,
        bounds: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let diag: Vec<String> = signature.iter().map(|s| format!("{}", s)).collect();
        let diag: Vec<&str> = diag.iter().map(String::as_str).collect();
        Self::diagonal(name, coords, &diag, signature, Domain::boxed(bounds))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        if domain.bounds.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: domain.bounds.len(),
            });
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn component(&self, i: usize, j: usize) -> &Expression {
        &self.components[i * self.dim() + j]
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn metric_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(point)?;
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.component(i, j).eval(point)?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }

    /// Metric with exact first and second partial derivatives at `point`.
    pub fn metric_jet(&self, point: &[f64]) -> Result<MetricJet> {
        self.check_point(point)?;
        let n = self.dim();
        let mut jets = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let c = self.component(i, j);
                let jet = if c.is_zero() {
                    None
                } else {
                    Some(c.eval_jet2(point)?)
                };
                jets.push(((i, j), jet));
            }
        }
        Ok(MetricJet::from_components(point, n, jets))
    }

    /// Check symmetry of the component values, non-degeneracy and the
    /// declared signature at one point.
    pub fn check_at(&self, point: &[f64]) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = self.component(i, j).eval(point)?;
                let b = self.component(j, i).eval(point)?;
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Asymmetric {
                        i,
                        j,
                        point: point.to_vec(),
                    });
                }
            }
        }
        let g = self.metric_at(point)?;
        let det = g.determinant();
        if det.abs() < DEGENERATE_DET {
            return Err(Error::SingularMetric {
                det,
                point: point.to_vec(),
            });
        }
        let found = SymmetricEigen::new(g)
            .eigenvalues
            .iter()
            .filter(|e| **e < 0.0)
            .count();
        let expected = self.signature.iter().filter(|s| **s < 0).count();
        if found != expected {
            return Err(Error::Signature {
                expected,
                found,
                point: point.to_vec(),
            });
        }
        Ok(())
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: point.len(),
            });
        }
        Ok(())
    }

    pub fn christoffel(&self, point: &[f64]) -> Result<Tensor3> {
        Ok(self.metric_jet(point)?.connection()?.christoffel)
    }

    pub fn curvature_bundle(&self, point: &[f64]) -> Result<CurvatureBundle> {
        CurvatureBundle::from_jet(&self.metric_jet(point)?)
    }

    pub fn field_calculus(&self, field: &ScalarField, point: &[f64]) -> Result<FieldCalculus> {
        if field.expr.coords() != self.coords.as_slice() {
            return Err(Error::InvalidArgument(format!(
                "scalar field over {:?} used on chart over {:?}",
                field.expr.coords(),
                self.coords
            )));
        }
        let conn = self.metric_jet(point)?.connection()?;
        let jet = field.expr.eval_jet2(point)?;
        Ok(FieldCalculus::new(&conn, jet))
    }

    /// Constant rescaling `g → c² g`.
    pub fn scaled(&self, factor_sq: f64) -> MetricChart {
        let c = Expression::constant(factor_sq, &self.coords);
        let components = self
            .components
            .iter()
            .map(|e| if e.is_zero() { e.clone() } else { c.times(e) })
            .collect();
        MetricChart {
            name: format!("{}*{factor_sq}", self.name),
            components,
            ..self.clone()
        }
    }
}

impl fmt::Display for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.name, self.coords.join(", "))?;
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let c = self.component(i, j);
                if !c.is_zero() {
                    writeln!(f, "  g[{},{}] = {c}", self.coords[i], self.coords[j])?;
                }
            }
        }
        Ok(())
    }
}

/// A differentiable function over a chart's coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    expr: Expression,
}

impl ScalarField {
    pub fn new(expr: Expression, chart: &MetricChart) -> Result<Self> {
        if expr.coords() != chart.coords() {
            return Err(Error::InvalidArgument(format!(
                "field over {:?} does not match chart coordinates {:?}",
                expr.coords(),
                chart.coords()
            )));
        }
        if let Some(p) = expr.unbound_params().first() {
            return Err(crate::expr::EvalError::Unbound(p.to_string()).into());
        }
        Ok(ScalarField { expr })
    }

    pub fn parse(source: &str, chart: &MetricChart) -> Result<Self> {
        let coords: Vec<&str> = chart.coords().iter().map(String::as_str).collect();
        Self::new(Expression::parse(source, &coords)?, chart)
    }

    pub fn expr(&self) -> &Expression {
        &self.expr
    }

    pub fn value(&self, point: &[f64]) -> Result<f64> {
        Ok(self.expr.eval(point)?)
    }

    pub fn jet(&self, point: &[f64]) -> Result<Jet2> {
        Ok(self.expr.eval_jet2(point)?)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    use super::*;

    pub(crate) fn unit_sphere() -> MetricChart {
        MetricChart::diagonal(
            "S2",
            &["th", "ph"],
            &["1", "sin(th)^2"],
            vec![1, 1],
            Domain {
                bounds: vec![(0.1, PI - 0.1), (0.0, 2.0 * PI)],
                exclusions: vec![],
            },
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn flat_plane_has_no_connection() {
        let chart = MetricChart::flat("R2", &["x", "y"], vec![1, 1], vec![(-1.0, 1.0); 2]).unwrap();
        let gamma = chart.christoffel(&[0.3, -0.7]).unwrap();
        assert!(gamma.data().iter().all(|g| *g == 0.0));
    }

    #[test]
    fn sphere_christoffel_symbols() {
        let chart = unit_sphere();
        let gamma = chart.christoffel(&[FRAC_PI_3, 0.0]).unwrap();
        // Γ^θ_φφ = −sinθ cosθ, Γ^φ_θφ = cotθ
        let s = FRAC_PI_3.sin();
        let c = FRAC_PI_3.cos();
        assert!(close(gamma.get(0, 1, 1), -s * c, 1e-14));
        assert!(close(gamma.get(0, 1, 1), -(3f64.sqrt()) / 4.0, 1e-14));
        assert!(close(gamma.get(1, 0, 1), c / s, 1e-14));
        assert!(close(gamma.get(1, 1, 0), 0.577350269189626, 1e-14));
        assert_eq!(gamma.get(0, 0, 0), 0.0);
    }

    #[test]
    fn exponential_expansion_christoffel() {
        let chart = MetricChart::diagonal(
            "expanding",
            &["t", "x", "y"],
            &["-1", "exp(2*t)", "exp(2*t)"],
            vec![-1, 1, 1],
            Domain::boxed(vec![(-1.0, 1.0); 3]),
        )
        .unwrap();
        let gamma = chart.christoffel(&[0.0, 0.4, 0.1]).unwrap();
        assert!(close(gamma.get(0, 1, 1), 1.0, 1e-15));
        assert!(close(gamma.get(1, 0, 1), 1.0, 1e-15));
    }

    #[test]
    fn flat_space_curvature_vanishes() {
        let chart =
            MetricChart::flat("R3", &["x", "y", "z"], vec![1, 1, 1], vec![(-1.0, 1.0); 3]).unwrap();
        let b = chart.curvature_bundle(&[0.1, 0.2, 0.3]).unwrap();
        assert!(b.riemann.data().iter().all(|r| *r == 0.0));
        assert_eq!(b.scalar, 0.0);
        assert!(b.einstein.iter().all(|g| *g == 0.0));
    }

    #[test]
    fn unit_sphere_is_einstein_with_ric_equal_g() {
        let chart = unit_sphere();
        for p in [[0.4, 0.0], [1.2, 2.0], [2.9, 5.0]] {
            let b = chart.curvature_bundle(&p).unwrap();
            let g = chart.metric_at(&p).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((b.ricci[(i, j)] - g[(i, j)]).abs() < 1e-12);
                    assert!(b.einstein[(i, j)].abs() < 1e-12);
                }
            }
            assert!(close(b.scalar, 2.0, 1e-12));
        }
    }

    #[test]
    fn field_calculus_flat_plane() {
        let chart = MetricChart::flat("R2", &["x", "y"], vec![1, 1], vec![(-2.0, 2.0); 2]).unwrap();
        let psi = ScalarField::parse("x^2 + y^2", &chart).unwrap();
        let fc = chart.field_calculus(&psi, &[1.0, 1.0]).unwrap();
        assert_eq!(fc.laplacian, 4.0);
        assert_eq!(fc.grad_norm_sq, 8.0);
        assert_eq!(fc.hessian, DMatrix::from_diagonal_element(2, 2, 2.0));
    }

    #[test]
    fn field_calculus_lorentzian_interval() {
        let chart = MetricChart::flat("I", &["t"], vec![-1], vec![(-1.0, 1.0)]).unwrap();
        let f = ScalarField::parse("exp(t)", &chart).unwrap();
        let fc = chart.field_calculus(&f, &[0.0]).unwrap();
        assert_eq!(fc.laplacian, -1.0);
        assert_eq!(fc.grad_norm_sq, -1.0);
        assert_eq!(fc.hessian[(0, 0)], 1.0);
    }

    #[test]
    fn sphere_laplacian_of_cos_theta() {
        // (1/sinθ) ∂θ(sinθ ∂θ cosθ) = −2 cosθ
        let chart = unit_sphere();
        let psi = ScalarField::parse("cos(th)", &chart).unwrap();
        let fc = chart.field_calculus(&psi, &[FRAC_PI_4, 1.0]).unwrap();
        assert!(close(fc.laplacian, -2.0 * FRAC_PI_4.cos(), 1e-14));
        assert!((fc.laplacian + std::f64::consts::SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let chart = unit_sphere();
        let err = chart.curvature_bundle(&[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::SingularMetric { .. }));
    }

    #[test]
    fn signature_and_symmetry_checks() {
        let chart = MetricChart::diagonal(
            "bad",
            &["t", "x"],
            &["-1", "1"],
            vec![1, 1],
            Domain::boxed(vec![(0.0, 1.0); 2]),
        )
        .unwrap();
        assert!(matches!(
            chart.check_at(&[0.5, 0.5]),
            Err(Error::Signature {
                expected: 0,
                found: 1,
                ..
            })
        ));
        let skew = MetricChart::parse(
            "skew",
            &["x", "y"],
            &[&["1", "0.1*x"], &["0.1*y", "1"]],
            vec![1, 1],
            Domain::boxed(vec![(0.0, 1.0); 2]),
        )
        .unwrap();
        assert!(matches!(
            skew.check_at(&[0.2, 0.7]),
            Err(Error::Asymmetric { i: 0, j: 1, .. })
        ));
        assert!(skew.check_at(&[0.5, 0.5]).is_ok());
    }

    #[test]
    fn chart_construction_errors() {
        let x = ["x".to_string()];
        let one = Expression::constant(1.0, &x);
        assert!(MetricChart::new(
            "a",
            &["x"],
            vec![one.clone(), one.clone()],
            vec![1],
            Domain::boxed(vec![(0.0, 1.0)])
        )
        .is_err());
        assert!(MetricChart::new(
            "a",
            &["x"],
            vec![one.clone()],
            vec![2],
            Domain::boxed(vec![(0.0, 1.0)])
        )
        .is_err());
        assert!(MetricChart::new(
            "a",
            &["y"],
            vec![one],
            vec![1],
            Domain::boxed(vec![(0.0, 1.0)])
        )
        .is_err());
    }

    #[test]
    fn periodic_exclusions() {
        let e = Exclusion::periodic(0, PI / 2.0, PI);
        assert!(e.excludes(&[PI / 2.0 + 0.005]));
        assert!(e.excludes(&[-PI / 2.0]));
        assert!(e.excludes(&[5.0 * PI / 2.0 - 0.001]));
        assert!(!e.excludes(&[0.0]));
    }
}

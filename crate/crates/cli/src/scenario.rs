//! Scenario files: a strict JSON description of a chart or warped product
//! and how to check it.
//!
//! Unknown keys are rejected everywhere so a misspelt physics parameter
//! cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;
use warpcheck::chart::{Domain, Exclusion, MetricChart};
use warpcheck::fuzz::fuzzed_product;
use warpcheck::grw::{self, standard_fiber, FamilyKind, FiberKind, GrwFamily};
use warpcheck::verify::{LambdaPolicy, Tolerances};
use warpcheck::{Expression, ScalarField, WarpedProduct};

use crate::CliError;

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default)]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub base: Option<BaseSpec>,
    #[serde(default)]
    pub fiber: Option<FiberSpec>,
    #[serde(default)]
    pub warping: Option<WarpingSpec>,
    #[serde(default)]
    pub lambda_bar: Option<LambdaSpec>,
    #[serde(default)]
    pub sampling: SamplingSpec,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    /// Evaluation points for the `curvature` command.
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub classify: Option<ClassifySpec>,
    #[serde(default)]
    pub discrepancies: Option<DiscrepancySpec>,
}

/// Whole products with a fixed construction.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    DeSitter { lambda: f64 },
    Fuzzed { seed: u64, amplitude: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    Builtin(BuiltinBase),
    Custom(CustomChart),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinBase {
    /// `(−1, 1)` with `−dt²`; for a warping family, the family's own interval.
    Interval,
    /// Euclidean square `[−1, 1]²` in `x, y`.
    Flat2,
    /// Flat torus `[0, 2π)²` in `x1, x2`.
    Torus2,
    /// Unit round sphere in `theta, phi`.
    Sphere2,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomChart {
    #[serde(default)]
    pub name: Option<String>,
    pub coords: Vec<String>,
    /// Full square matrix of component expressions.
    pub metric: Vec<Vec<String>>,
    pub signature: Vec<i8>,
    pub bounds: Vec<(f64, f64)>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiberSpec {
    Sphere {
        dim: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Hyperbolic {
        dim: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Flat {
        dim: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Flat 3-space in spherical coordinates `r, th, ph`.
    FlatSpherical,
    /// The Einstein fiber that makes the warping family an exact solution.
    Matched {
        dim: usize,
    },
    Custom(CustomChart),
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpingSpec {
    #[serde(default)]
    pub family: Option<FamilyKind>,
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default = "one", rename = "L")]
    pub l: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub expression: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaSpec {
    Paper,
    Oracle,
    Explicit(f64),
}

impl From<LambdaSpec> for LambdaPolicy {
    fn from(spec: LambdaSpec) -> Self {
        match spec {
            LambdaSpec::Paper => LambdaPolicy::Paper,
            LambdaSpec::Oracle => LambdaPolicy::Oracle,
            LambdaSpec::Explicit(v) => LambdaPolicy::Explicit(v),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the chart's own sampling box.
    #[serde(default)]
    pub bounds: Option<Vec<(f64, f64)>>,
}

fn default_count() -> usize {
    warpcheck::verify::DEFAULT_SAMPLES
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            count: default_count(),
            seed: 0,
            bounds: None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub residual: Option<f64>,
    pub oracle: Option<f64>,
    pub constancy_rel_std: Option<f64>,
}

impl ToleranceSpec {
    pub fn resolve(&self, override_tol: Option<f64>) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            residual: override_tol.or(self.residual).unwrap_or(d.residual),
            oracle: override_tol.or(self.oracle).unwrap_or(d.oracle),
            constancy_rel_std: self.constancy_rel_std.unwrap_or(d.constancy_rel_std),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySpec {
    pub lambda_bar: f64,
    pub n: usize,
    #[serde(default = "one", rename = "L_hint")]
    pub l_hint: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrepancySpec {
    pub n: usize,
    #[serde(default = "one", rename = "L")]
    pub l: f64,
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default)]
    pub b: f64,
}

/// What a scenario describes once built.
pub enum Geometry {
    /// A warped product, with its family when it came from one.
    Warped {
        product: Box<WarpedProduct>,
        family: Option<GrwFamily>,
    },
    /// A bare chart.
    Chart(MetricChart),
}

impl Geometry {
    pub fn chart(&self) -> &MetricChart {
        match self {
            Geometry::Warped { product, .. } => product.product(),
            Geometry::Chart(c) => c,
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if scenario.version != SCENARIO_VERSION {
            return Err(CliError::Config(format!(
                "unsupported scenario version {}, expected {SCENARIO_VERSION}",
                scenario.version
            )));
        }
        Ok(scenario)
    }

    /// Build the chart or product the scenario describes.
    pub fn geometry(&self) -> Result<Geometry, CliError> {
        if let Some(preset) = &self.preset {
            if self.base.is_some() || self.fiber.is_some() || self.warping.is_some() {
                return Err(CliError::Config(
                    "a preset excludes base, fiber and warping".into(),
                ));
            }
            let product = match *preset {
                Preset::DeSitter { lambda } => grw::de_sitter(lambda)?,
                Preset::Fuzzed { seed, amplitude } => fuzzed_product(seed, amplitude)?,
            };
            return Ok(Geometry::Warped {
                product: Box::new(product),
                family: None,
            });
        }

        let family = match &self.warping {
            Some(w) => w.family(self.fiber.as_ref())?,
            None => None,
        };
        let base = match (&self.base, family) {
            (None, Some(f)) | (Some(BaseSpec::Builtin(BuiltinBase::Interval)), Some(f)) => {
                f.base_chart()
            }
            (Some(spec), _) => spec.build()?,
            (None, None) => {
                return Err(CliError::Config(
                    "scenario needs a base, a preset or a warping family".into(),
                ))
            }
        };
        let Some(fiber_spec) = &self.fiber else {
            if self.warping.is_some() {
                return Err(CliError::Config("a warping function needs a fiber".into()));
            }
            return Ok(Geometry::Chart(base));
        };
        let fiber = fiber_spec.build(family)?;
        let warping = self
            .warping
            .as_ref()
            .ok_or_else(|| CliError::Config("a fiber needs a warping function".into()))?;
        let warp = match family {
            Some(f) => ScalarField::new(f.warping(), &base).map_err(|_| {
                CliError::Config("a warping family needs the interval base in `t`".into())
            })?,
            None => warping.field(&base)?,
        };
        let product = WarpedProduct::assemble(base, fiber, warp)?;
        Ok(Geometry::Warped {
            product: Box::new(product),
            family,
        })
    }
}

impl BaseSpec {
    fn build(&self) -> Result<MetricChart, CliError> {
        match self {
            BaseSpec::Builtin(b) => Ok(builtin_base(*b)?),
            BaseSpec::Custom(c) => c.build("base"),
        }
    }
}

fn builtin_base(b: BuiltinBase) -> warpcheck::Result<MetricChart> {
    match b {
        BuiltinBase::Interval => MetricChart::flat("I", &[grw::TIME], vec![-1], vec![(-1.0, 1.0)]),
        BuiltinBase::Flat2 => {
            MetricChart::flat("R2", &["x", "y"], vec![1, 1], vec![(-1.0, 1.0); 2])
        }
        BuiltinBase::Torus2 => {
            MetricChart::flat("T2", &["x1", "x2"], vec![1, 1], vec![(0.0, 2.0 * PI); 2])
        }
        BuiltinBase::Sphere2 => MetricChart::diagonal(
            "S2",
            &["theta", "phi"],
            &["1", "sin(theta)^2"],
            vec![1, 1],
            Domain {
                bounds: vec![(0.15, PI - 0.15), (0.0, 2.0 * PI)],
                exclusions: vec![Exclusion::point(0, 0.0), Exclusion::point(0, PI)],
            },
        ),
    }
}

impl CustomChart {
    fn build(&self, default_name: &str) -> Result<MetricChart, CliError> {
        let dim = self.coords.len();
        if self.metric.len() != dim || self.metric.iter().any(|r| r.len() != dim) {
            return Err(CliError::Config(format!(
                "{default_name} metric must be {dim}×{dim}"
            )));
        }
        if self.bounds.len() != dim || self.signature.len() != dim {
            return Err(CliError::Config(format!(
                "{default_name} needs {dim} bounds and {dim} signature entries"
            )));
        }
        let coords: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        let params: Vec<(&str, f64)> = self.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let mut components = Vec::with_capacity(dim * dim);
        for row in &self.metric {
            for src in row {
                components.push(
                    Expression::parse_bound(src, &coords, &params)
                        .map_err(|e| CliError::expression(src, e))?,
                );
            }
        }
        Ok(MetricChart::new(
            self.name
                .clone()
                .unwrap_or_else(|| default_name.to_string()),
            &coords,
            components,
            self.signature.clone(),
            Domain::boxed(self.bounds.clone()),
        )?)
    }
}

impl FiberSpec {
    fn build(&self, family: Option<GrwFamily>) -> Result<MetricChart, CliError> {
        let standard = |kind, dim, scale| -> Result<MetricChart, CliError> {
            Ok(standard_fiber(kind, dim, scale)?.0)
        };
        match self {
            FiberSpec::Sphere { dim, scale } => standard(FiberKind::Sphere, *dim, *scale),
            FiberSpec::Hyperbolic { dim, scale } => standard(FiberKind::Hyperbolic, *dim, *scale),
            FiberSpec::Flat { dim, scale } => standard(FiberKind::Flat, *dim, *scale),
            FiberSpec::FlatSpherical => Ok(grw::flat_spherical_fiber()),
            FiberSpec::Matched { dim } => {
                let family = family.ok_or_else(|| {
                    CliError::Config("a matched fiber needs a warping family".into())
                })?;
                let (kind, r) = family.matched_fiber();
                standard(kind, *dim, r)
            }
            FiberSpec::Custom(c) => c.build("fiber"),
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            FiberSpec::Sphere { dim, .. }
            | FiberSpec::Hyperbolic { dim, .. }
            | FiberSpec::Flat { dim, .. }
            | FiberSpec::Matched { dim } => Some(*dim),
            FiberSpec::FlatSpherical => Some(3),
            FiberSpec::Custom(c) => Some(c.coords.len()),
        }
    }
}

impl WarpingSpec {
    fn family(&self, fiber: Option<&FiberSpec>) -> Result<Option<GrwFamily>, CliError> {
        match (&self.family, &self.expression) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "warping takes a family or an expression, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "warping needs a family or an expression".into(),
            )),
            (None, Some(_)) => Ok(None),
            (Some(kind), None) => {
                let n = fiber
                    .and_then(FiberSpec::dim)
                    .ok_or_else(|| CliError::Config("a warping family needs a fiber".into()))?;
                Ok(Some(GrwFamily::new(*kind, n, self.k, self.l, self.b)?))
            }
        }
    }

    fn field(&self, base: &MetricChart) -> Result<ScalarField, CliError> {
        let src = self.expression.as_deref().unwrap_or_default();
        let coords: Vec<&str> = base.coords().iter().map(String::as_str).collect();
        let params: Vec<(&str, f64)> = self.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let expr = Expression::parse_bound(src, &coords, &params)
            .map_err(|e| CliError::expression(src, e))?;
        Ok(ScalarField::new(expr, base)?)
    }
}

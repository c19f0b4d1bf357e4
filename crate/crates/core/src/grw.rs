//! Generalized Robertson-Walker spacetimes `−dt² + f(t)² h`.
//!
//! The five warping families, their constants as stated by the
//! classification theorem, the `B = 2f′/f` reduction and the standard
//! Einstein fibers used to realise them.
//!
//! The constants here are reproduced as published. Where the coordinate
//! computation disagrees in sign (see [`crate::verify::discrepancies`]) the
//! disagreement is reported, never corrected in place.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chart::{Domain, Exclusion, MetricChart};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::{ScalarField, WarpedProduct};

/// Name of the time coordinate on the GRW base.
pub const TIME: &str = "t";

/// |Λ̄| below this is classified as zero.
pub const ZERO_LAMBDA: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Exp,
    Cosh,
    Sinh,
    Cos,
    Linear,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Exp,
        FamilyKind::Cosh,
        FamilyKind::Sinh,
        FamilyKind::Cos,
        FamilyKind::Linear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Exp => "exp",
            FamilyKind::Cosh => "cosh",
            FamilyKind::Sinh => "sinh",
            FamilyKind::Cos => "cos",
            FamilyKind::Linear => "linear",
        }
    }

    /// Warping function source over `t` with parameters `k`, `L`, `b`.
    pub fn warping_source(self) -> &'static str {
        match self {
            FamilyKind::Exp => "exp(t/L)/sqrt(k)",
            FamilyKind::Cosh => "cosh((b+t)/L)/sqrt(k)",
            FamilyKind::Sinh => "sinh((b+t)/L)/sqrt(k)",
            FamilyKind::Cos => "cos((b+t)/L)/sqrt(k)",
            FamilyKind::Linear => "(b-t)/L",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown family `{s}` (expected exp, cosh, sinh, cos or linear)"
                ))
            })
    }
}

/// Constants of a family: as printed in the classification theorem, and as
/// measured on coordinates (filled in by the verifier).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyConstants {
    pub lambda_bar_paper: f64,
    pub lambda_fiber_paper: f64,
    pub lambda_bar_oracle: Option<f64>,
    pub lambda_fiber_oracle: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrwFamily {
    pub kind: FamilyKind,
    /// Fiber dimension.
    pub n: usize,
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub b: f64,
}

impl GrwFamily {
    pub fn new(kind: FamilyKind, n: usize, k: f64, l: f64, b: f64) -> Result<Self> {
        if n <= 1 {
            return Err(Error::InvalidArgument(format!(
                "GRW fiber dimension must exceed 1, got {n}"
            )));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "k must be positive, got {k}"
            )));
        }
        if l == 0.0 || !l.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need finite L ≠ 0 and finite b, got L = {l}, b = {b}"
            )));
        }
        Ok(GrwFamily { kind, n, k, l, b })
    }

    pub fn warping(&self) -> Expression {
        Expression::parse_bound(
            self.kind.warping_source(),
            &[TIME],
            &[("k", self.k), ("L", self.l), ("b", self.b)],
        )
        .expect("built-in warping sources parse")
    }

    /// Singular loci of `t`: zeros of `f`.
    pub fn exclusions(&self) -> Vec<Exclusion> {
        match self.kind {
            FamilyKind::Exp | FamilyKind::Cosh => Vec::new(),
            FamilyKind::Sinh => vec![Exclusion::point(0, -self.b)],
            FamilyKind::Cos => vec![Exclusion::periodic(
                0,
                -self.b + self.l * FRAC_PI_2,
                self.l.abs() * PI,
            )],
            FamilyKind::Linear => vec![Exclusion::point(0, self.b)],
        }
    }

    /// Sampling interval for `t` on which `f > 0`, kept away from zeros of
    /// `f`.
    pub fn time_interval(&self) -> (f64, f64) {
        let l = self.l;
        let b = self.b;
        // In terms of u = (b + t)/L, or s = (b − t)/L for Linear.
        let (t0, t1) = match self.kind {
            FamilyKind::Exp => (-l, l),
            FamilyKind::Cosh => (l - b, -l - b),
            FamilyKind::Sinh => (0.1 * l - b, 1.5 * l - b),
            FamilyKind::Cos => (-1.3 * l - b, 1.3 * l - b),
            FamilyKind::Linear => (b - 0.2 * l, b - 2.0 * l),
        };
        (t0.min(t1), t0.max(t1))
    }

    /// The interval `(I, −dt²)` restricted to [`GrwFamily::time_interval`].
    pub fn base_chart(&self) -> MetricChart {
        let domain = Domain {
            bounds: vec![self.time_interval()],
            exclusions: self.exclusions(),
        };
        MetricChart::diagonal(
            format!("I[{}]", self.kind),
            &[TIME],
            &["-1"],
            vec![-1],
            domain,
        )
        .expect("interval chart is valid")
    }

    pub fn warping_field(&self) -> ScalarField {
        ScalarField::new(self.warping(), &self.base_chart()).expect("warping is over t")
    }

    /// Constants as stated by the classification theorem.
    pub fn paper_constants(&self) -> FamilyConstants {
        let n = self.n as f64;
        let l2 = self.l * self.l;
        let bar = n * (n - 1.0) / (2.0 * l2);
        let fiber_k = fiber_numerator(self.n) / (self.k * l2);
        let fiber = fiber_numerator(self.n) / l2;
        let (lambda_bar_paper, lambda_fiber_paper) = match self.kind {
            FamilyKind::Exp => (-bar, 0.0),
            FamilyKind::Cosh => (-bar, -fiber_k),
            FamilyKind::Sinh => (-bar, fiber_k),
            FamilyKind::Cos => (bar, fiber_k),
            FamilyKind::Linear => (0.0, fiber),
        };
        FamilyConstants {
            lambda_bar_paper,
            lambda_fiber_paper,
            lambda_bar_oracle: None,
            lambda_fiber_oracle: None,
        }
    }

    /// Einstein fiber that turns this family into an exact solution: flat
    /// for Exp, a round sphere for Cosh, hyperbolic space otherwise, with
    /// radius `√k·L` (`L` for Linear).
    pub fn matched_fiber(&self) -> (FiberKind, f64) {
        let r = self.k.sqrt() * self.l.abs();
        match self.kind {
            FamilyKind::Exp => (FiberKind::Flat, 1.0),
            FamilyKind::Cosh => (FiberKind::Sphere, r),
            FamilyKind::Sinh | FamilyKind::Cos => (FiberKind::Hyperbolic, r),
            FamilyKind::Linear => (FiberKind::Hyperbolic, self.l.abs()),
        }
    }

    pub fn matched_chart(&self) -> Result<WarpedProduct> {
        let (kind, r) = self.matched_fiber();
        let (fiber, _) = standard_fiber(kind, self.n, r)?;
        family_chart(self, fiber)
    }
}

/// `(n−1)(n−2)/2` computed in integers, so it is exact.
pub fn fiber_numerator(n: usize) -> f64 {
    ((n - 1) * n.saturating_sub(2) / 2) as f64
}

/// `B = 2f′/f` and `B′`.
pub fn b_function(f: &ScalarField, t: f64) -> Result<(f64, f64)> {
    let jet = f.jet(&[t])?;
    let (v, d1, d2) = (jet.value(), jet.grad()[0], jet.hess(0, 0));
    if !(v > 0.0) {
        return Err(Error::NonPositiveWarp {
            value: v,
            point: vec![t],
        });
    }
    let b = 2.0 * d1 / v;
    let bp = 2.0 * (d2 / v - d1 * d1 / (v * v));
    Ok((b, bp))
}

/// Pointwise constants from the `m = 1` reduction written in terms of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrwConstants {
    /// `−n(n−1)(B² + 2B′)/8`
    pub lambda_bar_126: f64,
    /// `(n−1)(n−2) f² B′/4`
    pub lambda_fiber_128: f64,
    /// `−(n−1)(n−2) f² B′/4`, the coefficient of `h` in the fiber Einstein tensor.
    pub ein_fiber_coeff_127: f64,
}

pub fn grw_constants(f: &ScalarField, n: usize, t: f64) -> Result<GrwConstants> {
    if n <= 1 {
        return Err(Error::InvalidArgument(format!(
            "GRW fiber dimension must exceed 1, got {n}"
        )));
    }
    let (b, bp) = b_function(f, t)?;
    let fv = f.value(&[t])?;
    let nf = n as f64;
    let fiber = (nf - 1.0) * (nf - 2.0) * fv * fv * bp / 4.0;
    Ok(GrwConstants {
        lambda_bar_126: -nf * (nf - 1.0) * (b * b + 2.0 * bp) / 8.0,
        lambda_fiber_128: fiber,
        ein_fiber_coeff_127: -fiber,
    })
}

/// Families whose constant `Λ̄` (in the theorem's sign convention) equals
/// `lambda_bar`. `k` and `b` are left at 1 and 0; `l_hint` sets `L` for the
/// flat case where `Λ̄` does not determine it.
pub fn classify(lambda_bar: f64, n: usize, l_hint: f64) -> Result<Vec<GrwFamily>> {
    if n <= 1 {
        return Err(Error::InvalidArgument(format!(
            "GRW fiber dimension must exceed 1, got {n}"
        )));
    }
    if !lambda_bar.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Λ̄ must be finite, got {lambda_bar}"
        )));
    }
    if lambda_bar.abs() <= ZERO_LAMBDA {
        if !(l_hint > 0.0) || !l_hint.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "L hint must be positive, got {l_hint}"
            )));
        }
        return Ok(vec![GrwFamily::new(
            FamilyKind::Linear,
            n,
            1.0,
            l_hint,
            0.0,
        )?]);
    }
    let nf = n as f64;
    let l = (nf * (nf - 1.0) / (2.0 * lambda_bar.abs())).sqrt();
    let kinds: &[FamilyKind] = if lambda_bar < 0.0 {
        &[FamilyKind::Exp, FamilyKind::Cosh, FamilyKind::Sinh]
    } else {
        &[FamilyKind::Cos]
    };
    kinds
        .iter()
        .map(|&kind| GrwFamily::new(kind, n, 1.0, l, 0.0))
        .collect()
}

/// Warped product `(I, −dt²) ×_f (fiber)` for a family.
pub fn family_chart(family: &GrwFamily, fiber: MetricChart) -> Result<WarpedProduct> {
    if fiber.dim() != family.n {
        return Err(Error::Dimension {
            expected: family.n,
            found: fiber.dim(),
        });
    }
    WarpedProduct::assemble(family.base_chart(), fiber, family.warping_field())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberKind {
    Sphere,
    Hyperbolic,
    Flat,
}

/// Standard Einstein fiber of dimension `n` and radius `r`, with its
/// constant `Λ` in `G = −Λh`.
///
/// - Sphere: polar angles `th1…th{n−1}` and azimuth `ph`.
/// - Hyperbolic: upper half-space `(r²/z²)(dy1² + … + dz²)`.
/// - Flat: `r² (dx1² + … + dxn²)`.
pub fn standard_fiber(kind: FiberKind, n: usize, r: f64) -> Result<(MetricChart, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "standard fibers need n ≥ 2, got {n}"
        )));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "fiber radius must be positive, got {r}"
        )));
    }
    let r2 = r * r;
    let constant = fiber_numerator(n) / r2;
    match kind {
        FiberKind::Sphere => {
            let mut coords: Vec<String> = (1..n).map(|i| format!("th{i}")).collect();
            coords.push("ph".into());
            let diag: Vec<String> = (0..n)
                .map(|i| {
                    let mut s = format!("{r2:?}");
                    for c in &coords[..i] {
                        s.push_str(&format!("*sin({c})^2"));
                    }
                    s
                })
                .collect();
            let mut bounds = vec![(0.15, PI - 0.15); n - 1];
            bounds.push((0.0, 2.0 * PI));
            let exclusions = (0..n - 1)
                .flat_map(|i| [Exclusion::point(i, 0.0), Exclusion::point(i, PI)])
                .collect();
            let chart = diag_chart(
                &format!("S{n}({r})"),
                &coords,
                &diag,
                vec![1; n],
                Domain { bounds, exclusions },
            )?;
            Ok((chart, constant))
        }
        FiberKind::Hyperbolic => {
            let mut coords: Vec<String> = (1..n).map(|i| format!("y{i}")).collect();
            coords.push("z".into());
            let entry = format!("{r2:?}/z^2");
            let diag = vec![entry; n];
            let mut bounds = vec![(-1.0, 1.0); n - 1];
            bounds.push((0.5, 2.0));
            let chart = diag_chart(
                &format!("H{n}({r})"),
                &coords,
                &diag,
                vec![1; n],
                Domain::boxed(bounds),
            )?;
            Ok((chart, -constant))
        }
        FiberKind::Flat => {
            let coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let diag = vec![format!("{r2:?}"); n];
            let chart = diag_chart(
                &format!("R{n}"),
                &coords,
                &diag,
                vec![1; n],
                Domain::boxed(vec![(-1.0, 1.0); n]),
            )?;
            Ok((chart, 0.0))
        }
    }
}

fn diag_chart(
    name: &str,
    coords: &[String],
    diag: &[String],
    signature: Vec<i8>,
    domain: Domain,
) -> Result<MetricChart> {
    let coords: Vec<&str> = coords.iter().map(String::as_str).collect();
    let diag: Vec<&str> = diag.iter().map(String::as_str).collect();
    MetricChart::diagonal(name, &coords, &diag, signature, domain)
}

/// Flat 3-space in spherical coordinates `dr² + r²(dθ² + sin²θ dφ²)`.
pub fn flat_spherical_fiber() -> MetricChart {
    MetricChart::diagonal(
        "R3 spherical",
        &["r", "th", "ph"],
        &["1", "r^2", "r^2*sin(th)^2"],
        vec![1, 1, 1],
        Domain {
            bounds: vec![(0.5, 2.0), (0.15, PI - 0.15), (0.0, 2.0 * PI)],
            exclusions: vec![Exclusion::point(1, 0.0), Exclusion::point(1, PI)],
        },
    )
    .expect("flat spherical chart is valid")
}

/// de Sitter space `−dt² + e^{2√(Λ/3) t}(dr² + r²dθ² + r² sin²θ dφ²)` as a
/// warped product.
pub fn de_sitter(lambda: f64) -> Result<WarpedProduct> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "de Sitter needs Λ > 0, got {lambda}"
        )));
    }
    let family = GrwFamily::new(FamilyKind::Exp, 3, 1.0, (3.0 / lambda).sqrt(), 0.0)?;
    family_chart(&family, flat_spherical_fiber())
}

/// The de Sitter product chart.
pub fn de_sitter_chart(lambda: f64) -> Result<MetricChart> {
    Ok(de_sitter(lambda)?.product().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &str) -> ScalarField {
        let chart = MetricChart::flat("I", &[TIME], vec![-1], vec![(-10.0, 10.0)]).unwrap();
        ScalarField::parse(src, &chart).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn b_function_examples() {
        for l in [0.5, 1.0, 3.0] {
            let (b, bp) = b_function(&field(&format!("exp(t/{l})")), 0.7).unwrap();
            assert!(rel(b, 2.0 / l) < 1e-14);
            assert!(bp.abs() < 1e-14);
        }
        // B = −2 tan(t/L)/L, B′ = −2 sec²(t/L)/L² → at 0: (0, −2/L²)
        let (b, bp) = b_function(&field("cos(t/2)/sqrt(3)"), 0.0).unwrap();
        assert_eq!(b, 0.0);
        assert!(rel(bp, -0.5) < 1e-14);
        // B = −2/(b − t)
        let (b, bp) = b_function(&field("(1.5 - t)/1"), 0.5).unwrap();
        assert!(rel(b, -2.0) < 1e-14);
        assert!(rel(bp, -2.0) < 1e-14);
        assert!(b_function(&field("t"), -1.0).is_err());
    }

    #[test]
    fn grw_constant_examples() {
        for n in 2..6 {
            let nf = n as f64;
            let c = grw_constants(&field("cos(t/2)/sqrt(0.5)"), n, 0.4).unwrap();
            assert!(rel(c.lambda_bar_126, nf * (nf - 1.0) / 8.0) < 1e-12);
        }
        let c = grw_constants(&field("exp(t)"), 3, 0.2).unwrap();
        assert!(rel(c.lambda_bar_126, -3.0) < 1e-14);
        assert_eq!(c.lambda_fiber_128, 0.0);

        let c = grw_constants(&field("(0.3 - t)/2"), 4, -1.0).unwrap();
        assert!(c.lambda_bar_126.abs() < 1e-14);
        assert!(rel(c.lambda_fiber_128, -3.0 / 4.0) < 1e-14);
        assert_eq!(c.ein_fiber_coeff_127, -c.lambda_fiber_128);
        assert!(grw_constants(&field("exp(t)"), 1, 0.0).is_err());
    }

    #[test]
    fn classification_branches() {
        let fams = classify(-3.0, 3, 1.0).unwrap();
        let kinds: Vec<_> = fams.iter().map(|f| f.kind).collect();
        assert_eq!(kinds, [FamilyKind::Exp, FamilyKind::Cosh, FamilyKind::Sinh]);
        assert!(fams.iter().all(|f| rel(f.l, 1.0) < 1e-15));

        let fams = classify(3.0, 3, 1.0).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].kind, FamilyKind::Cos);
        assert!(rel(fams[0].l, 1.0) < 1e-15);

        let fams = classify(0.0, 4, 2.5).unwrap();
        assert_eq!(fams[0].kind, FamilyKind::Linear);
        assert_eq!(fams[0].l, 2.5);

        assert!(classify(1.0, 1, 1.0).is_err());
        assert!(classify(0.0, 3, -1.0).is_err());
    }

    #[test]
    fn classified_families_reproduce_their_lambda() {
        for lb in [-7.5, -3.0, 0.4, 6.0] {
            for fam in classify(lb, 4, 1.0).unwrap() {
                assert!(rel(fam.paper_constants().lambda_bar_paper, lb) < 1e-14);
            }
        }
    }

    #[test]
    fn stated_constant_magnitudes() {
        let fam = GrwFamily::new(FamilyKind::Linear, 4, 1.0, 2.0, 0.0).unwrap();
        assert_eq!(fam.paper_constants().lambda_fiber_paper, 3.0 / 4.0);
        assert_eq!(fiber_numerator(4), 3.0);
        let fam = GrwFamily::new(FamilyKind::Cosh, 3, 2.0, 0.5, 0.7).unwrap();
        let c = fam.paper_constants();
        assert_eq!(c.lambda_bar_paper, -12.0);
        assert_eq!(c.lambda_fiber_paper, -2.0);
    }

    #[test]
    fn family_validation() {
        assert!(GrwFamily::new(FamilyKind::Exp, 1, 1.0, 1.0, 0.0).is_err());
        assert!(GrwFamily::new(FamilyKind::Exp, 3, 0.0, 1.0, 0.0).is_err());
        assert!(GrwFamily::new(FamilyKind::Exp, 3, 1.0, 0.0, 0.0).is_err());
        assert_eq!("cosh".parse::<FamilyKind>().unwrap(), FamilyKind::Cosh);
        assert!("tan".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn family_domains_keep_warp_positive() {
        for kind in FamilyKind::ALL {
            for l in [0.5, 1.0, 2.0, -1.0] {
                for b in [0.0, 0.7] {
                    let fam = GrwFamily::new(kind, 3, 0.5, l, b).unwrap();
                    let (t0, t1) = fam.time_interval();
                    let f = fam.warping();
                    for i in 0..=50 {
                        let t = t0 + (t1 - t0) * i as f64 / 50.0;
                        assert!(f.eval(&[t]).unwrap() > 0.0, "{kind} L={l} b={b} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn exclusion_loci() {
        let sinh = GrwFamily::new(FamilyKind::Sinh, 3, 1.0, 1.0, 0.0).unwrap();
        assert!(sinh.base_chart().domain().exclusions[0].excludes(&[0.005]));
        let cos = GrwFamily::new(FamilyKind::Cos, 3, 1.0, 1.0, 0.0).unwrap();
        let ex = &cos.exclusions()[0];
        for h in -2..3 {
            assert!(ex.excludes(&[FRAC_PI_2 + PI * h as f64]));
        }
        assert!(!ex.excludes(&[0.0]));
        let lin = GrwFamily::new(FamilyKind::Linear, 3, 1.0, 1.0, 0.7).unwrap();
        assert!(lin.exclusions()[0].excludes(&[0.7]));
    }

    #[test]
    fn exp_family_with_flat_fiber() {
        let fam = GrwFamily::new(FamilyKind::Exp, 3, 1.0, 1.0, 0.0).unwrap();
        let (fiber, lf) = standard_fiber(FiberKind::Flat, 3, 1.0).unwrap();
        assert_eq!(lf, 0.0);
        let w = family_chart(&fam, fiber).unwrap();
        let g = w.product().metric_at(&[0.5, 0.1, 0.2, 0.3]).unwrap();
        assert!(rel(g[(1, 1)], 1.0f64.exp()) < 1e-15);
        assert_eq!(g[(0, 0)], -1.0);
        let (wrong, _) = standard_fiber(FiberKind::Flat, 2, 1.0).unwrap();
        assert!(matches!(
            family_chart(&fam, wrong),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn standard_fiber_constants_match_brute_force() {
        for n in 2..=4 {
            for (kind, r) in [
                (FiberKind::Sphere, 1.0),
                (FiberKind::Hyperbolic, 1.0),
                (FiberKind::Sphere, 0.7),
                (FiberKind::Flat, 1.0),
            ] {
                let (chart, lambda) = standard_fiber(kind, n, r).unwrap();
                let p: Vec<f64> = chart
                    .domain()
                    .bounds
                    .iter()
                    .map(|(a, b)| 0.3 * a + 0.7 * b)
                    .collect();
                chart.check_at(&p).unwrap();
                let bundle = chart.curvature_bundle(&p).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        let resid = bundle.einstein[(i, j)] + lambda * bundle.metric[(i, j)];
                        assert!(resid.abs() < 1e-10, "{kind:?} n={n}: {resid}");
                    }
                }
            }
        }
        assert_eq!(standard_fiber(FiberKind::Sphere, 3, 1.0).unwrap().1, 1.0);
        assert_eq!(
            standard_fiber(FiberKind::Hyperbolic, 3, 1.0).unwrap().1,
            -1.0
        );
        assert!(standard_fiber(FiberKind::Flat, 1, 1.0).is_err());
    }

    #[test]
    fn de_sitter_construction() {
        let w = de_sitter(3.0).unwrap();
        assert_eq!(w.warp().expr().eval(&[0.4]).unwrap(), 0.4f64.exp());
        assert!(de_sitter(-1.0).is_err());
        assert!(de_sitter_chart(0.0).is_err());
        let chart = de_sitter_chart(3.0).unwrap();
        let p = [0.2, 1.0, std::f64::consts::FRAC_PI_3, 0.5];
        let b = chart.curvature_bundle(&p).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((b.einstein[(i, j)] + 3.0 * b.metric[(i, j)]).abs() < 1e-6);
            }
        }
    }
}

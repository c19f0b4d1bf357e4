//! The four commands.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use warpcheck::chart::Domain;
use warpcheck::grw::{self, FamilyKind, FiberKind};
use warpcheck::verify::{
    self, coordinate_lambda, einstein_residual, fiber_lambda_oracle, fmt17, verify_warped,
    Agreement, DiscrepancyReport, LambdaPolicy, VerificationReport,
};
use warpcheck::{CurvatureBundle, SamplePlan};

use crate::output::{to_json, write};
use crate::scenario::{Geometry, Scenario};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Curvature,
    Verify,
    Classify,
    Discrepancies,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
    /// Human-readable summary for stdout.
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

pub fn run(command: Command, scenario: &Scenario, opts: &Options) -> Result<Outcome, CliError> {
    if opts.samples == Some(0) {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    if let Some(t) = opts.tol {
        if t.is_nan() || t <= 0.0 || t.is_infinite() {
            return Err(CliError::Config(format!(
                "--tol must be a positive number, got {t}"
            )));
        }
    }
    match command {
        Command::Curvature => curvature(scenario, opts),
        Command::Verify => verify_cmd(scenario, opts),
        Command::Classify => classify(scenario, opts),
        Command::Discrepancies => discrepancies(scenario, opts),
    }
}

fn seed(scenario: &Scenario, opts: &Options) -> u64 {
    opts.seed.unwrap_or(scenario.sampling.seed)
}

fn samples(scenario: &Scenario, opts: &Options) -> usize {
    opts.samples.unwrap_or(scenario.sampling.count)
}

fn plan_for(domain: &Domain, scenario: &Scenario, opts: &Options) -> Result<SamplePlan, CliError> {
    let mut plan = SamplePlan::new(domain, samples(scenario, opts), seed(scenario, opts));
    if let Some(bounds) = &scenario.sampling.bounds {
        if bounds.len() != plan.bounds.len() {
            return Err(CliError::Config(format!(
                "sampling bounds have {} entries, the chart has {} coordinates",
                bounds.len(),
                plan.bounds.len()
            )));
        }
        plan.bounds = bounds.clone();
    }
    Ok(plan)
}

#[derive(Serialize)]
struct CurvatureRecord {
    point: Vec<f64>,
    metric: Vec<Vec<f64>>,
    /// `[k][i][j]` for `Γ^k_ij`
    christoffel: Vec<Vec<Vec<f64>>>,
    /// `[l][i][j][k]` for `R^l_ijk`
    riemann: Vec<Vec<Vec<Vec<f64>>>>,
    ricci: Vec<Vec<f64>>,
    scalar: f64,
    einstein: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct CurvatureDocument<'a> {
    chart: &'a str,
    coords: &'a [String],
    points: Vec<CurvatureRecord>,
}

fn rows(n: usize, get: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| get(i, j)).collect())
        .collect()
}

impl CurvatureRecord {
    fn new(b: &CurvatureBundle) -> Self {
        let n = b.dim();
        CurvatureRecord {
            point: b.point.clone(),
            metric: rows(n, |i, j| b.metric[(i, j)]),
            christoffel: (0..n)
                .map(|k| {
                    (0..n)
                        .map(|i| (0..n).map(|j| b.christoffel.get(k, i, j)).collect())
                        .collect()
                })
                .collect(),
            riemann: (0..n)
                .map(|l| {
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| (0..n).map(|k| b.riemann.get(l, i, j, k)).collect())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            ricci: rows(n, |i, j| b.ricci[(i, j)]),
            scalar: b.scalar,
            einstein: rows(n, |i, j| b.einstein[(i, j)]),
        }
    }
}

fn curvature(scenario: &Scenario, opts: &Options) -> Result<Outcome, CliError> {
    let geometry = scenario.geometry()?;
    let chart = geometry.chart();
    let points = if scenario.points.is_empty() {
        plan_for(chart.domain(), scenario, opts)?.points()?
    } else {
        scenario.points.clone()
    };
    let records = points
        .iter()
        .map(|p| Ok(CurvatureRecord::new(&chart.curvature_bundle(p)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let doc = CurvatureDocument {
        chart: chart.name(),
        coords: chart.coords(),
        points: records,
    };
    let json = to_json(&doc);
    write(&opts.out, "curvature.json", &json)?;
    Ok(Outcome {
        pass: true,
        summary: json,
    })
}

fn verify_cmd(scenario: &Scenario, opts: &Options) -> Result<Outcome, CliError> {
    let geometry = scenario.geometry()?;
    let tolerances = scenario.tolerances.resolve(opts.tol);
    let policy: LambdaPolicy = scenario
        .lambda_bar
        .ok_or_else(|| CliError::Config("verify needs a lambda_bar policy".into()))?
        .into();
    let plan = plan_for(geometry.chart().domain(), scenario, opts)?;
    let report = match &geometry {
        Geometry::Warped { product, family } => verify_warped(
            product,
            policy,
            family.map(|f| f.paper_constants()),
            &plan,
            tolerances,
        )?,
        Geometry::Chart(chart) => {
            let lambda_bar = match policy {
                LambdaPolicy::Explicit(v) => v,
                LambdaPolicy::Oracle => coordinate_lambda(chart, &plan)?.mean,
                LambdaPolicy::Paper => {
                    return Err(CliError::Config(
                        "lambda_bar policy \"paper\" needs a warping family".into(),
                    ));
                }
            };
            let mut report = einstein_residual(chart, lambda_bar, &plan, tolerances.residual)?;
            report.tolerances = tolerances;
            report
        }
    };
    write(&opts.out, "report.json", &to_json(&report))?;
    write(&opts.out, "residuals.csv", &report.residuals_csv())?;
    Ok(Outcome {
        pass: report.pass,
        summary: verify_summary(&report),
    })
}

fn verify_summary(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "chart             {}", r.chart);
    let _ = writeln!(s, "lambda_bar        {}", fmt17(r.lambda_bar));
    let _ = writeln!(s, "max_abs_residual  {}", fmt17(r.max_abs_residual));
    let _ = writeln!(s, "max_rel_residual  {}", fmt17(r.max_rel_residual));
    if let Some(d) = r.oracle_diff {
        let _ = writeln!(s, "oracle_diff       {}", fmt17(d));
    }
    if let Some(c) = r.lambda_bar_stats {
        let _ = writeln!(
            s,
            "lambda_bar mean   {} std {} constant {}",
            fmt17(c.mean),
            fmt17(c.std),
            c.is_constant
        );
    }
    for a in &r.sign_agreement {
        let _ = writeln!(
            s,
            "sign {:<13} stated {} oracle {} {:?}",
            a.quantity,
            fmt17(a.paper),
            fmt17(a.oracle),
            a.agreement
        );
    }
    let _ = writeln!(s, "{}", if r.pass { "PASS" } else { "FAIL" });
    s
}

#[derive(Serialize)]
struct FamilyRow {
    kind: FamilyKind,
    n: usize,
    #[serde(rename = "L")]
    l: f64,
    k: f64,
    b: f64,
    fiber: FiberKind,
    fiber_radius: f64,
    lambda_bar_paper: f64,
    lambda_fiber_paper: f64,
    lambda_bar_oracle: f64,
    lambda_fiber_oracle: f64,
}

fn classify(scenario: &Scenario, opts: &Options) -> Result<Outcome, CliError> {
    let spec = scenario
        .classify
        .ok_or_else(|| CliError::Config("classify needs a `classify` section".into()))?;
    let families = grw::classify(spec.lambda_bar, spec.n, spec.l_hint)?;
    let mut table = Vec::with_capacity(families.len());
    for fam in families {
        let w = fam.matched_chart()?;
        let plan = plan_for(w.product().domain(), scenario, opts)?;
        let paper = fam.paper_constants();
        let (fiber, fiber_radius) = fam.matched_fiber();
        table.push(FamilyRow {
            kind: fam.kind,
            n: fam.n,
            l: fam.l,
            k: fam.k,
            b: fam.b,
            fiber,
            fiber_radius,
            lambda_bar_paper: paper.lambda_bar_paper,
            lambda_fiber_paper: paper.lambda_fiber_paper,
            lambda_bar_oracle: coordinate_lambda(w.product(), &plan)?.mean,
            lambda_fiber_oracle: fiber_lambda_oracle(&w, &plan)?.mean,
        });
    }
    write(&opts.out, "families.json", &to_json(&table))?;
    let mut s = format!(
        "{:<7} {:>24} {:>24} {:>24} {:>24} {:>24}\n",
        "family",
        "L",
        "lambda_bar_paper",
        "lambda_fiber_paper",
        "lambda_bar_oracle",
        "lambda_fiber_oracle"
    );
    for r in &table {
        let _ = writeln!(
            s,
            "{:<7} {:>24} {:>24} {:>24} {:>24} {:>24}",
            r.kind.name(),
            fmt17(r.l),
            fmt17(r.lambda_bar_paper),
            fmt17(r.lambda_fiber_paper),
            fmt17(r.lambda_bar_oracle),
            fmt17(r.lambda_fiber_oracle)
        );
    }
    Ok(Outcome {
        pass: true,
        summary: s,
    })
}

fn discrepancies(scenario: &Scenario, opts: &Options) -> Result<Outcome, CliError> {
    let spec = scenario
        .discrepancies
        .ok_or_else(|| CliError::Config("discrepancies needs a `discrepancies` section".into()))?;
    let report = verify::discrepancies(
        spec.n,
        spec.l,
        spec.k,
        spec.b,
        samples(scenario, opts),
        seed(scenario, opts),
    )?;
    write(&opts.out, "discrepancies.json", &to_json(&report))?;
    Ok(Outcome {
        pass: true,
        summary: discrepancy_table(&report),
    })
}

fn discrepancy_table(r: &DiscrepancyReport) -> String {
    let tag = |a: Agreement| match a {
        Agreement::Agrees => "agrees",
        Agreement::Disagrees => "DISAGREES",
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n = {}, L = {}, k = {}, b = {}",
        r.n,
        fmt17(r.l),
        fmt17(r.k),
        fmt17(r.b)
    );
    for row in &r.rows {
        let _ = writeln!(
            s,
            "[{}] fiber {:?} radius {}",
            row.family.kind,
            row.fiber,
            fmt17(row.fiber_radius)
        );
        let _ = writeln!(
            s,
            "  lambda_bar   theorem {}  B-form {}  base formula {}  oracle {}  ({})",
            fmt17(row.lambda_bar_theorem),
            fmt17(row.lambda_bar_126),
            fmt17(row.lambda_bar_base),
            fmt17(row.lambda_bar_oracle),
            tag(row.lambda_bar_sign.agreement)
        );
        let _ = writeln!(
            s,
            "  residual     oracle sign {}  theorem sign {}",
            fmt17(row.residual_oracle_sign),
            fmt17(row.residual_paper_sign)
        );
        let _ = writeln!(
            s,
            "  lambda_fiber theorem {}  B-form {}  induced {}  oracle {}  (theorem {}, B-form {})",
            fmt17(row.lambda_fiber_theorem),
            fmt17(row.lambda_fiber_128),
            fmt17(row.lambda_fiber_induced),
            fmt17(row.lambda_fiber_oracle),
            tag(row.lambda_fiber_sign.agreement),
            tag(row.b_form_fiber_sign.agreement)
        );
        let _ = writeln!(
            s,
            "  eigenvalue   residual derived {}  printed {}",
            fmt17(row.eigen_residual_derived),
            fmt17(row.eigen_residual_paper)
        );
    }
    s
}

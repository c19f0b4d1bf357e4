//! Seeded generators for randomized checks: well-conditioned expressions and
//! perturbed warped products.
//!
//! Everything here is a pure function of the seed so failures reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{Domain, MetricChart};
use crate::error::{Error, Result};
use crate::grw::{standard_fiber, FiberKind};
use crate::{Expression, ScalarField, WarpedProduct};

/// Random expression source over `coords`.
///
/// Denominators, `log` and `sqrt` arguments and rational-power bases are
/// wrapped as `(e^2 + c)` with `c ≥ 1/2`, so the expression is smooth
/// everywhere and its values stay moderate on `[−1, 1]^n` for small depth.
pub fn random_expression(rng: &mut impl Rng, coords: &[&str], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, coords);
    }
    let d = depth - 1;
    match rng.gen_range(0..12) {
        0 => format!(
            "({} + {})",
            random_expression(rng, coords, d),
            random_expression(rng, coords, d)
        ),
        1 => format!(
            "({} - {})",
            random_expression(rng, coords, d),
            random_expression(rng, coords, d)
        ),
        2 | 3 => format!(
            "({} * {})",
            random_expression(rng, coords, d),
            random_expression(rng, coords, d)
        ),
        4 => format!(
            "({} / {})",
            random_expression(rng, coords, d),
            positive(rng, coords, d)
        ),
        5 => {
            let f = ["sin", "cos", "tanh"][rng.gen_range(0..3)];
            format!("{f}({})", random_expression(rng, coords, d))
        }
        6 => {
            let f = ["exp", "sinh", "cosh"][rng.gen_range(0..3)];
            // keep the argument bounded so values stay O(10)
            format!("{f}(tanh({}))", random_expression(rng, coords, d))
        }
        7 => format!("log({})", positive(rng, coords, d)),
        8 => format!("sqrt({})", positive(rng, coords, d)),
        9 => format!("{}^{}", atom(rng, coords, d), rng.gen_range(2..4)),
        10 => {
            let (p, q) = [(1, 2), (-1, 2), (3, 2), (1, 3), (-2, 3)][rng.gen_range(0..5)];
            format!("{}^({p}/{q})", positive(rng, coords, d))
        }
        _ => format!("-{}", atom(rng, coords, d)),
    }
}

/// `count` random expressions over `coords`, each with an evaluation point
/// in `[−1, 1]^n`.
pub fn jet_cases(
    seed: u64,
    count: usize,
    coords: &[&str],
    depth: usize,
) -> Vec<(String, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let src = random_expression(&mut rng, coords, depth);
            let point = coords.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            (src, point)
        })
        .collect()
}

fn leaf(rng: &mut impl Rng, coords: &[&str]) -> String {
    if rng.gen_bool(0.7) {
        coords[rng.gen_range(0..coords.len())].to_string()
    } else {
        format!("{:.3}", rng.gen_range(0.1..2.0))
    }
}

fn atom(rng: &mut impl Rng, coords: &[&str], depth: usize) -> String {
    format!("({})", random_expression(rng, coords, depth))
}

fn positive(rng: &mut impl Rng, coords: &[&str], depth: usize) -> String {
    let c: f64 = rng.gen_range(0.5..2.0);
    format!("({}^2 + {c:.3})", atom(rng, coords, depth))
}

/// A two-dimensional Riemannian base with seeded perturbations of size at
/// most `amplitude`, over a unit round sphere fiber, warped by a perturbed
/// positive function.
///
/// The base metric is `δ + P` with `|P_ij| ≤ amplitude`; for
/// `amplitude ≤ 0.25` it is positive definite on the whole square.
pub fn fuzzed_product(seed: u64, amplitude: f64) -> Result<WarpedProduct> {
    if !(0.0..=0.25).contains(&amplitude) {
        return Err(Error::InvalidArgument(format!(
            "fuzz amplitude must lie in [0, 0.25], got {amplitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wave = |rng: &mut ChaCha8Rng| {
        let a = amplitude * rng.gen_range(0.2..1.0);
        let (p, q, s) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-1.0..1.0),
        );
        let f = ["sin", "cos"][rng.gen_range(0..2)];
        format!("{a:?}*{f}({p:?}*x + {q:?}*y + {s:?})")
    };
    let gxx = format!("1 + {}", wave(&mut rng));
    let gyy = format!("1 + {}", wave(&mut rng));
    let gxy = wave(&mut rng);
    let base = MetricChart::parse(
        format!("fuzz{seed}"),
        &["x", "y"],
        &[&[&gxx, &gxy], &[&gxy, &gyy]],
        vec![1, 1],
        Domain::boxed(vec![(-1.0, 1.0); 2]),
    )?;
    let warp = format!("1.5 + {} + {}", wave(&mut rng), wave(&mut rng));
    let warp = ScalarField::parse(&warp, &base)?;
    let (fiber, _) = standard_fiber(FiberKind::Sphere, 2, 1.0)?;
    WarpedProduct::assemble(base, fiber, warp)
}

/// Step for the central-difference gradient.
pub const FD_GRAD_STEP: f64 = 1e-5;
/// Step for the fourth-order Hessian stencil. Second differences at `1e-5`
/// lose about `ε|f|/h² ≈ 2e-6·|f|` to roundoff, which is too coarse for a
/// `1e-6` comparison.
pub const FD_HESS_STEP: f64 = 1e-3;

/// Largest discrepancy between the exact jet of `expr` at `point` and
/// finite differences, over value, gradient and Hessian entries. Each entry
/// is compared as `|jet − fd| / max(1, |fd|)`.
pub fn jet_fd_gap(expr: &Expression, point: &[f64]) -> Result<f64> {
    let jet = expr.eval_jet2(point)?;
    let n = point.len();
    let at = |shift: &[(usize, f64)]| -> Result<f64> {
        let mut p = point.to_vec();
        for &(i, d) in shift {
            p[i] += d;
        }
        Ok(expr.eval(&p)?)
    };
    let rel = |exact: f64, fd: f64| (exact - fd).abs() / fd.abs().max(1.0);
    let mut gap = rel(jet.value(), expr.eval(point)?);
    let h = FD_GRAD_STEP;
    for i in 0..n {
        let fd = (at(&[(i, h)])? - at(&[(i, -h)])?) / (2.0 * h);
        gap = gap.max(rel(jet.grad()[i], fd));
    }
    let h = FD_HESS_STEP;
    // five-point stencil weights for the first derivative
    let w = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    for i in 0..n {
        for j in i..n {
            let fd = if i == j {
                let c = [
                    (-2.0, -1.0),
                    (-1.0, 16.0),
                    (0.0, -30.0),
                    (1.0, 16.0),
                    (2.0, -1.0),
                ];
                c.iter()
                    .map(|&(s, c)| Ok(c * at(&[(i, s * h)])?))
                    .sum::<Result<f64>>()?
                    / (12.0 * h * h)
            } else {
                let mut acc = 0.0;
                for &(si, wi) in &w {
                    for &(sj, wj) in &w {
                        acc += wi * wj * at(&[(i, si * h), (j, sj * h)])?;
                    }
                }
                acc / (144.0 * h * h)
            };
            gap = gap.max(rel(jet.hess(i, j), fd));
        }
    }
    Ok(gap)
}

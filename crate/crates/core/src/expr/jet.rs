//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries a value together with its gradient and Hessian with
//! respect to a fixed set of variables. Arithmetic propagates all three by
//! the chain rule, so derivatives are exact up to floating-point rounding.

use serde::Serialize;

/// Number types the expression evaluator can run over.
///
/// Unary primitives are expressed through [`Scalar::chain`], which takes the
/// primitive's value and first two derivatives at the current point.
pub trait Scalar: Clone {
    /// True when the type carries derivatives, so primitives that are only
    /// continuous at a point (e.g. `sqrt` at 0) must be rejected there.
    const CARRIES_DERIVATIVES: bool;

    fn constant(value: f64, nvars: usize) -> Self;
    fn variable(value: f64, index: usize, nvars: usize) -> Self;
    fn value(&self) -> f64;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Compose with a scalar function `φ` given `φ(x)`, `φ'(x)`, `φ''(x)`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self;

    fn recip(&self) -> Self {
        let x = self.value();
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }
}

impl Scalar for f64 {
    const CARRIES_DERIVATIVES: bool = false;

    fn constant(value: f64, _nvars: usize) -> Self {
        value
    }
    fn variable(value: f64, _index: usize, _nvars: usize) -> Self {
        value
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn chain(&self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Value, gradient and Hessian of a function of `nvars` variables.
///
/// The Hessian is stored dense and row-major. Only the upper triangle is
/// ever computed; the lower triangle is a copy, so symmetry is bitwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Jet2 {
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

impl Jet2 {
    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.grad.len() + j]
    }

    /// Row-major Hessian.
    pub fn hess_matrix(&self) -> &[f64] {
        &self.hess
    }

    fn from_upper(value: f64, grad: Vec<f64>, mut upper: impl FnMut(usize, usize) -> f64) -> Self {
        let n = grad.len();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let h = upper(i, j);
                hess[i * n + j] = h;
                hess[j * n + i] = h;
            }
        }
        Jet2 { value, grad, hess }
    }
}

impl Scalar for Jet2 {
    const CARRIES_DERIVATIVES: bool = true;

    fn constant(value: f64, nvars: usize) -> Self {
        Jet2 {
            value,
            grad: vec![0.0; nvars],
            hess: vec![0.0; nvars * nvars],
        }
    }

    fn variable(value: f64, index: usize, nvars: usize) -> Self {
        let mut jet = Self::constant(value, nvars);
        jet.grad[index] = 1.0;
        jet
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn add(&self, rhs: &Self) -> Self {
        Jet2 {
            value: self.value + rhs.value,
            grad: zip_with(&self.grad, &rhs.grad, |a, b| a + b),
            hess: zip_with(&self.hess, &rhs.hess, |a, b| a + b),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Jet2 {
            value: self.value - rhs.value,
            grad: zip_with(&self.grad, &rhs.grad, |a, b| a - b),
            hess: zip_with(&self.hess, &rhs.hess, |a, b| a - b),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.nvars();
        let (a, b) = (self, rhs);
        let grad = (0..n)
            .map(|i| a.grad[i] * b.value + a.value * b.grad[i])
            .collect();
        Jet2::from_upper(a.value * b.value, grad, |i, j| {
            a.hess[i * n + j] * b.value
                + a.grad[i] * b.grad[j]
                + a.grad[j] * b.grad[i]
                + a.value * b.hess[i * n + j]
        })
    }

    fn neg(&self) -> Self {
        Jet2 {
            value: -self.value,
            grad: self.grad.iter().map(|g| -g).collect(),
            hess: self.hess.iter().map(|h| -h).collect(),
        }
    }

    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.nvars();
        let grad = self.grad.iter().map(|g| f1 * g).collect();
        Jet2::from_upper(f0, grad, |i, j| {
            f1 * self.hess[i * n + j] + f2 * self.grad[i] * self.grad[j]
        })
    }
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        // x*y at (3, 5)
        let x = Jet2::variable(3.0, 0, 2);
        let y = Jet2::variable(5.0, 1, 2);
        let p = x.mul(&y);
        assert_eq!(p.value(), 15.0);
        assert_eq!(p.grad(), &[5.0, 3.0]);
        assert_eq!(p.hess(0, 1), 1.0);
        assert_eq!(p.hess(1, 0), 1.0);
        assert_eq!(p.hess(0, 0), 0.0);
    }

    #[test]
    fn quotient_matches_hand_derivative() {
        // 1/x at x=2: -1/4, 2/8
        let x = Jet2::variable(2.0, 0, 1);
        let one = Jet2::constant(1.0, 1);
        let q = one.div(&x);
        assert_eq!(q.value(), 0.5);
        assert_eq!(q.grad()[0], -0.25);
        assert_eq!(q.hess(0, 0), 0.25);
    }
}

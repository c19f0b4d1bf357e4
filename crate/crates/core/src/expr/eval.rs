use std::fmt;

use super::{EvalError, Func, Node, Scalar};

pub(crate) struct Evaluator<'a> {
    coords: &'a [String],
    point: &'a [f64],
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(coords: &'a [String], point: &'a [f64]) -> Self {
        Evaluator { coords, point }
    }

    pub(crate) fn eval<T: Scalar>(&self, node: &Node) -> Result<T, EvalError> {
        let n = self.point.len();
        let out = match node {
            Node::Const(c) => T::constant(*c, n),
            Node::Var(i) => T::variable(self.point[*i], *i, n),
            Node::Param(p) => return Err(EvalError::Unbound(p.clone())),
            Node::Neg(a) => self.eval::<T>(a)?.neg(),
            Node::Add(a, b) => self.eval::<T>(a)?.add(&self.eval(b)?),
            Node::Sub(a, b) => self.eval::<T>(a)?.sub(&self.eval(b)?),
            Node::Mul(a, b) => self.eval::<T>(a)?.mul(&self.eval(b)?),
            Node::Div(a, b) => {
                let num: T = self.eval(a)?;
                let den: T = self.eval(b)?;
                if den.value() == 0.0 {
                    return Err(self.domain("division", node, den.value()));
                }
                num.div(&den)
            }
            Node::Pow(a, r) => {
                let x: T = self.eval(a)?;
                let v = x.value();
                if r.is_integer() {
                    let p = r.num();
                    if p < 0 && v == 0.0 {
                        return Err(self.domain("power", node, v));
                    }
                    let pf = p as f64;
                    let p32 = p as i32;
                    x.chain(
                        v.powi(p32),
                        pf * v.powi(p32 - 1),
                        pf * (pf - 1.0) * v.powi(p32 - 2),
                    )
                } else {
                    if v <= 0.0 {
                        return Err(self.domain("power", node, v));
                    }
                    let p = r.to_f64();
                    x.chain(
                        v.powf(p),
                        p * v.powf(p - 1.0),
                        p * (p - 1.0) * v.powf(p - 2.0),
                    )
                }
            }
            Node::Call(f, a) => {
                let x: T = self.eval(a)?;
                let v = x.value();
                match f {
                    Func::Sin => x.chain(v.sin(), v.cos(), -v.sin()),
                    Func::Cos => x.chain(v.cos(), -v.sin(), -v.cos()),
                    Func::Sinh => x.chain(v.sinh(), v.cosh(), v.sinh()),
                    Func::Cosh => x.chain(v.cosh(), v.sinh(), v.cosh()),
                    Func::Tanh => {
                        let t = v.tanh();
                        let s = 1.0 - t * t;
                        x.chain(t, s, -2.0 * t * s)
                    }
                    Func::Exp => {
                        let e = v.exp();
                        x.chain(e, e, e)
                    }
                    Func::Log => {
                        if v <= 0.0 {
                            return Err(self.domain("log", node, v));
                        }
                        x.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
                    }
                    Func::Sqrt => {
                        if v < 0.0 || (T::CARRIES_DERIVATIVES && v == 0.0) {
                            return Err(self.domain("sqrt", node, v));
                        }
                        let s = v.sqrt();
                        x.chain(s, 0.5 / s, -0.25 / (s * v))
                    }
                }
            }
        };
        if !out.value().is_finite() {
            return Err(self.domain("evaluation", node, out.value()));
        }
        Ok(out)
    }

    fn domain(&self, op: &'static str, node: &Node, value: f64) -> EvalError {
        struct Show<'a>(&'a Node, &'a [String]);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(self.1, f)
            }
        }
        EvalError::Domain {
            op,
            subexpr: Show(node, self.coords).to_string(),
            value,
        }
    }
}

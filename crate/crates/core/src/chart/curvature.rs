use nalgebra::DMatrix;
use serde::Serialize;

use super::DEGENERATE_DET;
use crate::error::{Error, Result};
use crate::expr::Jet2;

/// Dense rank-3 array indexed `[a][b][c]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let n = self.dim;
        self.data[(a * n + b) * n + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Dense rank-4 array indexed `[a][b][c][d]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.dim;
        self.data[((a * n + b) * n + c) * n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let n = self.dim;
        self.data[((a * n + b) * n + c) * n + d] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Metric, its first partials `∂_a g_ij` and second partials `∂_a ∂_b g_ij`
/// at one point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub point: Vec<f64>,
    pub g: DMatrix<f64>,
    /// `dg[a]` is `∂_a g`.
    pub dg: Vec<DMatrix<f64>>,
    /// `ddg[a * dim + b]` is `∂_a ∂_b g`.
    pub ddg: Vec<DMatrix<f64>>,
}

impl MetricJet {
    pub(crate) fn from_components(
        point: &[f64],
        n: usize,
        jets: Vec<((usize, usize), Option<Jet2>)>,
    ) -> Self {
        let mut g = DMatrix::zeros(n, n);
        let mut dg = vec![DMatrix::zeros(n, n); n];
        let mut ddg = vec![DMatrix::zeros(n, n); n * n];
        for ((i, j), jet) in jets {
            let Some(jet) = jet else { continue };
            g[(i, j)] = jet.value();
            g[(j, i)] = jet.value();
            for a in 0..n {
                dg[a][(i, j)] = jet.grad()[a];
                dg[a][(j, i)] = jet.grad()[a];
                for b in 0..n {
                    let h = jet.hess(a, b);
                    ddg[a * n + b][(i, j)] = h;
                    ddg[a * n + b][(j, i)] = h;
                }
            }
        }
        MetricJet {
            point: point.to_vec(),
            g,
            dg,
            ddg,
        }
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        let det = self.g.determinant();
        if !(det.abs() >= DEGENERATE_DET) {
            return Err(Error::SingularMetric {
                det,
                point: self.point.clone(),
            });
        }
        self.g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularMetric {
                det,
                point: self.point.clone(),
            })
    }

    /// Christoffel symbols and their first partials.
    pub fn connection(&self) -> Result<Connection> {
        let n = self.dim();
        let ginv = self.inverse()?;

        // Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let first_kind = |l: usize, i: usize, j: usize| {
            0.5 * (self.dg[i][(j, l)] + self.dg[j][(i, l)] - self.dg[l][(i, j)])
        };
        let d_first_kind = |m: usize, l: usize, i: usize, j: usize| {
            0.5 * (self.ddg[m * n + i][(j, l)] + self.ddg[m * n + j][(i, l)]
                - self.ddg[m * n + l][(i, j)])
        };
        // ∂_m g^kl = −g^ka ∂_m g_ab g^bl
        let dginv: Vec<DMatrix<f64>> = self.dg.iter().map(|d| -(&ginv * d * &ginv)).collect();

        let mut christoffel = Tensor3::zeros(n);
        let mut dchristoffel = Tensor4::zeros(n);
        let mut lowered = vec![0.0; n];
        for i in 0..n {
            for j in i..n {
                for (l, slot) in lowered.iter_mut().enumerate() {
                    *slot = first_kind(l, i, j);
                }
                for k in 0..n {
                    let v: f64 = (0..n).map(|l| ginv[(k, l)] * lowered[l]).sum();
                    christoffel.set(k, i, j, v);
                    christoffel.set(k, j, i, v);
                }
                for (m, dginv_m) in dginv.iter().enumerate() {
                    for k in 0..n {
                        let v: f64 = (0..n)
                            .map(|l| {
                                dginv_m[(k, l)] * lowered[l]
                                    + ginv[(k, l)] * d_first_kind(m, l, i, j)
                            })
                            .sum();
                        dchristoffel.set(m, k, i, j, v);
                        dchristoffel.set(m, k, j, i, v);
                    }
                }
            }
        }
        Ok(Connection {
            g: self.g.clone(),
            ginv,
            christoffel,
            dchristoffel,
        })
    }
}

/// Levi-Civita connection at a point.
#[derive(Debug, Clone)]
pub struct Connection {
    pub g: DMatrix<f64>,
    pub ginv: DMatrix<f64>,
    /// `Γ^k_ij` as `[k][i][j]`.
    pub christoffel: Tensor3,
    /// `∂_m Γ^k_ij` as `[m][k][i][j]`.
    pub dchristoffel: Tensor4,
}

/// Curvature of a chart at one point.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub point: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub inverse_metric: DMatrix<f64>,
    /// `Γ^k_ij` as `[k][i][j]`.
    pub christoffel: Tensor3,
    /// `R^l_ijk` as `[l][i][j][k]`.
    pub riemann: Tensor4,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    pub einstein: DMatrix<f64>,
}

impl CurvatureBundle {
    pub fn from_jet(jet: &MetricJet) -> Result<Self> {
        let conn = jet.connection()?;
        let n = jet.dim();
        let gam = &conn.christoffel;
        let dgam = &conn.dchristoffel;

        let mut riemann = Tensor4::zeros(n);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in (j + 1)..n {
                        let quad: f64 = (0..n)
                            .map(|m| {
                                gam.get(l, j, m) * gam.get(m, i, k)
                                    - gam.get(l, k, m) * gam.get(m, i, j)
                            })
                            .sum();
                        let v = dgam.get(j, l, i, k) - dgam.get(k, l, i, j) + quad;
                        riemann.set(l, i, j, k, v);
                        riemann.set(l, i, k, j, -v);
                    }
                }
            }
        }

        let ricci = DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| riemann.get(k, i, k, j)).sum());
        let scalar = conn.ginv.component_mul(&ricci).sum();
        let einstein = &ricci - conn.g.clone() * (0.5 * scalar);
        Ok(CurvatureBundle {
            point: jet.point.clone(),
            metric: conn.g,
            inverse_metric: conn.ginv,
            christoffel: conn.christoffel,
            riemann,
            ricci,
            scalar,
            einstein,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }
}

/// Hessian, Laplacian and squared gradient norm of a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCalculus {
    pub value: f64,
    pub grad: Vec<f64>,
    /// `H_ij = ∂_i ∂_j ψ − Γ^k_ij ∂_k ψ`
    pub hessian: DMatrix<f64>,
    /// `g^ij H_ij`
    pub laplacian: f64,
    /// `g^ij ∂_i ψ ∂_j ψ`
    pub grad_norm_sq: f64,
}

impl FieldCalculus {
    pub(crate) fn new(conn: &Connection, jet: Jet2) -> Self {
        let n = conn.g.nrows();
        let grad = jet.grad().to_vec();
        let hessian = DMatrix::from_fn(n, n, |i, j| {
            jet.hess(i, j)
                - (0..n)
                    .map(|k| conn.christoffel.get(k, i, j) * grad[k])
                    .sum::<f64>()
        });
        let laplacian = conn.ginv.component_mul(&hessian).sum();
        let grad_norm_sq = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| conn.ginv[(i, j)] * grad[i] * grad[j])
            .sum();
        FieldCalculus {
            value: jet.value(),
            grad,
            hessian,
            laplacian,
            grad_norm_sq,
        }
    }
}

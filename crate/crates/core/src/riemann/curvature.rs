//! Levi-Civita connection and curvature from exact metric derivatives.
//!
//! Conventions: `Γ[i][j][k] = Γ^i_{jk}`,
//! `R^i_{jkl} = ∂_k Γ^i_{lj} − ∂_l Γ^i_{kj} + Γ^i_{km} Γ^m_{lj} − Γ^i_{lm} Γ^m_{kj}`
//! so that `R(∂_k, ∂_l) ∂_j = R^i_{jkl} ∂_i`, and `Ric_{ij} = R^k_{ikj}`.

use rayon::prelude::*;

use super::fields::MetricField;
use crate::diffcore::{invert_sym4, Jet3, Point4, Sym4};
use crate::error::{GeomError, Result};

pub type Christoffel = [[[f64; 4]; 4]; 4];
pub type RiemannTensor = [[[[f64; 4]; 4]; 4]; 4];

/// Metric value with its first and second partial derivatives at a point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: Sym4,
    pub inv: Sym4,
    /// `dg[k][i][j] = ∂_k g_ij`
    pub dg: [[[f64; 4]; 4]; 4],
    /// `ddg[k][l][i][j] = ∂_k ∂_l g_ij`
    pub ddg: [[[[f64; 4]; 4]; 4]; 4],
}

impl MetricJet {
    pub fn new<M: MetricField>(metric: &M, x: &Point4) -> Result<Self> {
        let m = metric.components(&Jet3::<4>::seed(x.coords()))?;
        let g = Sym4::from_upper(std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].v)));
        if !g.is_positive_definite() {
            return Err(GeomError::DegenerateMetric(*x.coords()));
        }
        let inv = invert_sym4(&g).map_err(|_| GeomError::DegenerateMetric(*x.coords()))?;
        let dg = std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].g[k])));
        let ddg = std::array::from_fn(|k| {
            std::array::from_fn(|l| std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].h[k][l])))
        });
        Ok(MetricJet { g, inv, dg, ddg })
    }

    /// Christoffel symbols of the first kind `[jk, l] = ½(∂_j g_lk + ∂_k g_lj − ∂_l g_jk)`,
    /// indexed `[l][j][k]`.
    fn first_kind(&self) -> Christoffel {
        let d = &self.dg;
        std::array::from_fn(|l| {
            std::array::from_fn(|j| std::array::from_fn(|k| 0.5 * (d[j][l][k] + d[k][l][j] - d[l][j][k])))
        })
    }

    pub fn christoffel(&self) -> Christoffel {
        let s = self.first_kind();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| std::array::from_fn(|k| (0..4).map(|l| self.inv.get(i, l) * s[l][j][k]).sum()))
        })
    }

    /// `dgamma[m][i][j][k] = ∂_m Γ^i_{jk}`
    fn christoffel_derivative(&self) -> [Christoffel; 4] {
        let s = self.first_kind();
        let dd = &self.ddg;
        std::array::from_fn(|m| {
            // ∂_m g^{il} = −g^{ia} ∂_m g_{ab} g^{bl}
            let dinv: [[f64; 4]; 4] = std::array::from_fn(|i| {
                std::array::from_fn(|l| {
                    let mut acc = 0.0;
                    for a in 0..4 {
                        for b in 0..4 {
                            acc -= self.inv.get(i, a) * self.dg[m][a][b] * self.inv.get(b, l);
                        }
                    }
                    acc
                })
            });
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| {
                        (0..4)
                            .map(|l| {
                                let ds = 0.5 * (dd[m][j][l][k] + dd[m][k][l][j] - dd[m][l][j][k]);
                                dinv[i][l] * s[l][j][k] + self.inv.get(i, l) * ds
                            })
                            .sum()
                    })
                })
            })
        })
    }

    pub fn riemann(&self) -> RiemannTensor {
        let gam = self.christoffel();
        let dgam = self.christoffel_derivative();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| {
                    std::array::from_fn(|l| {
                        let mut r = dgam[k][i][l][j] - dgam[l][i][k][j];
                        for m in 0..4 {
                            r += gam[i][k][m] * gam[m][l][j] - gam[i][l][m] * gam[m][k][j];
                        }
                        r
                    })
                })
            })
        })
    }
}

pub fn christoffel<M: MetricField>(metric: &M, x: &Point4) -> Result<Christoffel> {
    Ok(MetricJet::new(metric, x)?.christoffel())
}

pub fn riemann_tensor<M: MetricField>(metric: &M, x: &Point4) -> Result<RiemannTensor> {
    Ok(MetricJet::new(metric, x)?.riemann())
}

pub fn ricci_from_riemann(r: &RiemannTensor) -> Sym4 {
    let raw: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| r[k][i][k][j]).sum()));
    Sym4::from_upper(std::array::from_fn(|i| {
        std::array::from_fn(|j| 0.5 * (raw[i][j] + raw[j][i]))
    }))
}

pub fn ricci<M: MetricField>(metric: &M, x: &Point4) -> Result<Sym4> {
    Ok(ricci_from_riemann(&riemann_tensor(metric, x)?))
}

pub fn riemann_max_abs(r: &RiemannTensor) -> f64 {
    r.iter().flatten().flatten().flatten().fold(0.0, |a, v| a.max(v.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub point: Point4,
    pub ricci: Sym4,
    pub ricci_max_abs: f64,
    pub riemann_max_abs: f64,
}

pub fn curvature_report<M: MetricField>(metric: &M, x: &Point4) -> Result<CurvatureReport> {
    let r = riemann_tensor(metric, x)?;
    let ricci = ricci_from_riemann(&r);
    Ok(CurvatureReport {
        point: *x,
        ricci_max_abs: ricci.max_abs(),
        riemann_max_abs: riemann_max_abs(&r),
        ricci,
    })
}

/// Curvature reports for every point, evaluated in parallel and returned in
/// input order.
pub fn curvature_campaign<M: MetricField + Sync>(metric: &M, points: &[Point4]) -> Result<Vec<CurvatureReport>> {
    points.par_iter().map(|x| curvature_report(metric, x)).collect()
}

/// Sectional curvature of `span(u, v)` at `x`.
///
/// Rejects planes whose Gram determinant is below `1e-12 · g(u,u) g(v,v)`.
pub fn sectional_curvature<M: MetricField>(metric: &M, x: &Point4, u: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    let jet = MetricJet::new(metric, x)?;
    sectional_from(&jet.g, &jet.riemann(), u, v)
}

pub(crate) fn sectional_from(g: &Sym4, r: &RiemannTensor, u: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    let guu = g.bilinear(u, u);
    let gvv = g.bilinear(v, v);
    let guv = g.bilinear(u, v);
    let gram = guu * gvv - guv * guv;
    if !(gram > 1e-12 * guu * gvv) {
        return Err(GeomError::DegeneratePlane(gram));
    }
    // R(u, v) v
    let ruvv: [f64; 4] = std::array::from_fn(|i| {
        let mut acc = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    acc += r[i][j][k][l] * v[j] * u[k] * v[l];
                }
            }
        }
        acc
    });
    Ok(g.bilinear(&ruvv, u) / gram)
}

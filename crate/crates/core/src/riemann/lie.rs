//! Lie derivatives of metrics along vector fields.

use super::curvature::MetricJet;
use super::fields::{MetricField, VectorField};
use crate::diffcore::{Point4, Sym4};
use crate::error::{GeomError, Result};

/// `(L_X g)_ij = X^k ∂_k g_ij + g_kj ∂_i X^k + g_ik ∂_j X^k`
pub fn lie_derivative_metric<V: VectorField, M: MetricField>(field: &V, metric: &M, x: &Point4) -> Result<Sym4> {
    let jet = MetricJet::new(metric, x)?;
    let (xv, jac) = field.jacobian(x);
    let g = jet.g.entries();
    let raw: [[f64; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4)
                .map(|k| xv[k] * jet.dg[k][i][j] + g[k][j] * jac[k][i] + g[i][k] * jac[k][j])
                .sum()
        })
    });
    Ok(Sym4::from_upper(std::array::from_fn(|i| {
        std::array::from_fn(|j| 0.5 * (raw[i][j] + raw[j][i]))
    })))
}

/// Largest `|L_X g|` entry over the sample.
pub fn killing_residual<V: VectorField, M: MetricField>(field: &V, metric: &M, sample: &[Point4]) -> Result<f64> {
    if sample.is_empty() {
        return Err(GeomError::EmptySample);
    }
    sample.iter().try_fold(0.0f64, |acc, x| {
        Ok(acc.max(lie_derivative_metric(field, metric, x)?.max_abs()))
    })
}

/// Least-squares fit of `L_X g = −4c g` over the sample.
///
/// Returns `(c, residual)` with `residual = max |L_X g + 4c g|`.
pub fn homothety_constant<V: VectorField, M: MetricField>(
    field: &V,
    metric: &M,
    sample: &[Point4],
) -> Result<(f64, f64)> {
    if sample.is_empty() {
        return Err(GeomError::EmptySample);
    }
    let mut pairs = Vec::with_capacity(sample.len());
    let (mut num, mut den) = (0.0, 0.0);
    for x in sample {
        let l = lie_derivative_metric(field, metric, x)?;
        let g = metric.at(x)?;
        for i in 0..4 {
            for j in 0..4 {
                num += l.get(i, j) * g.get(i, j);
                den += g.get(i, j) * g.get(i, j);
            }
        }
        pairs.push((l, g));
    }
    let c = -num / (4.0 * den);
    let residual = pairs.iter().fold(0.0f64, |acc, (l, g)| {
        let mut worst = acc;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((l.get(i, j) + 4.0 * c * g.get(i, j)).abs());
            }
        }
        worst
    });
    Ok((c, residual))
}

//! Gibbons–Hawking ansatz `g = u h + u⁻¹ (dt + A)²` over a flat 3-chart.
//!
//! Coordinates on the total space are `(t, p¹, p², p³)`.

use super::fields::MetricField;
use crate::diffcore::{Jet3, Mat4, Real, ScalarField};
use crate::error::{GeomError, Result};

/// 1-form on a chart of R³.
pub trait OneForm3 {
    fn components<T: Real>(&self, p: &[T; 3]) -> [T; 3];
}

/// Affine scalar `u(p) = u₀ + ⟨∇u, p⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePotential {
    pub constant: f64,
    pub gradient: [f64; 3],
}

impl ScalarField<3> for AffinePotential {
    fn eval<T: Real>(&self, p: &[T; 3]) -> Result<T> {
        Ok((0..3).fold(T::constant(self.constant), |acc, i| {
            acc + p[i].clone() * self.gradient[i]
        }))
    }
}

/// Affine 1-form `A_i(p) = c_i + L_ij p^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineOneForm {
    pub constant: [f64; 3],
    pub linear: [[f64; 3]; 3],
}

impl AffineOneForm {
    pub fn zero() -> Self {
        AffineOneForm {
            constant: [0.0; 3],
            linear: [[0.0; 3]; 3],
        }
    }
}

impl OneForm3 for AffineOneForm {
    fn components<T: Real>(&self, p: &[T; 3]) -> [T; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(T::constant(self.constant[i]), |acc, j| {
                acc + p[j].clone() * self.linear[i][j]
            })
        })
    }
}

/// Closed axis-aligned box in R³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chart3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Chart3 {
    pub fn contains(&self, p: &[f64; 3]) -> bool {
        (0..3).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }

    /// Corners, edge midpoints, face centres and centre: the 3³ grid.
    pub fn probe_grid(&self) -> Vec<[f64; 3]> {
        let axis = |i: usize| [self.lo[i], 0.5 * (self.lo[i] + self.hi[i]), self.hi[i]];
        let mut out = Vec::with_capacity(27);
        for a in axis(0) {
            for b in axis(1) {
                for c in axis(2) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GibbonsHawkingData<U, A> {
    pub potential: U,
    pub connection: A,
    pub chart: Chart3,
}

impl GibbonsHawkingData<AffinePotential, AffineOneForm> {
    /// `u = 1`, `A = 0`: the flat product metric.
    pub fn trivial(chart: Chart3) -> Self {
        GibbonsHawkingData {
            potential: AffinePotential {
                constant: 1.0,
                gradient: [0.0; 3],
            },
            connection: AffineOneForm::zero(),
            chart,
        }
    }

    /// `u = z`, `A = x dy`: satisfies `du = *dA`.
    pub fn linear_monopole(chart: Chart3) -> Self {
        let mut linear = [[0.0; 3]; 3];
        linear[1][0] = 1.0;
        GibbonsHawkingData {
            potential: AffinePotential {
                constant: 0.0,
                gradient: [0.0, 0.0, 1.0],
            },
            connection: AffineOneForm {
                constant: [0.0; 3],
                linear,
            },
            chart,
        }
    }

    /// `u = z`, `A = 0`: violates the monopole equation.
    pub fn unbalanced(chart: Chart3) -> Self {
        GibbonsHawkingData {
            potential: AffinePotential {
                constant: 0.0,
                gradient: [0.0, 0.0, 1.0],
            },
            connection: AffineOneForm::zero(),
            chart,
        }
    }
}

/// Largest component of `du − *dA` at `p`, with `*` the flat Hodge star
/// (so `*dA = curl A`).
pub fn monopole_residual<U: ScalarField<3>, A: OneForm3>(data: &GibbonsHawkingData<U, A>, p: &[f64; 3]) -> Result<f64> {
    if !data.chart.contains(p) {
        return Err(GeomError::OutsideChart(*p));
    }
    let seed = Jet3::<3>::seed(p);
    let du = data.potential.eval(&seed)?.g;
    let a = data.connection.components(&seed);
    // d[i][j] = ∂_j A_i
    let d: [[f64; 3]; 3] = std::array::from_fn(|i| a[i].g);
    let curl = [d[2][1] - d[1][2], d[0][2] - d[2][0], d[1][0] - d[0][1]];
    Ok((0..3).fold(0.0f64, |acc, i| acc.max((du[i] - curl[i]).abs())))
}

/// The 4-metric built from validated Gibbons–Hawking data.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbonsHawkingMetric<U, A> {
    data: GibbonsHawkingData<U, A>,
}

impl<U, A> GibbonsHawkingMetric<U, A> {
    pub fn data(&self) -> &GibbonsHawkingData<U, A> {
        &self.data
    }
}

/// Validates `u > 0` on the chart's probe grid and returns the metric.
pub fn gibbons_hawking_metric<U: ScalarField<3>, A: OneForm3>(
    data: GibbonsHawkingData<U, A>,
) -> Result<GibbonsHawkingMetric<U, A>> {
    for p in data.chart.probe_grid() {
        let u = data.potential.eval::<f64>(&p)?;
        if !(u > 0.0) {
            return Err(GeomError::NonPositivePotential(u));
        }
    }
    Ok(GibbonsHawkingMetric { data })
}

impl<U: ScalarField<3>, A: OneForm3> MetricField for GibbonsHawkingMetric<U, A> {
    fn components<T: Real>(&self, x: &[T; 4]) -> Result<Mat4<T>> {
        let p = [x[1].clone(), x[2].clone(), x[3].clone()];
        let pr = [p[0].re(), p[1].re(), p[2].re()];
        if !self.data.chart.contains(&pr) {
            return Err(GeomError::OutsideChart(pr));
        }
        let u = self.data.potential.eval(&p)?;
        if !(u.re() > 0.0) {
            return Err(GeomError::NonPositivePotential(u.re()));
        }
        let inv_u = u.clone().recip();
        // (dt + A) has components (1, A_1, A_2, A_3)
        let a = self.data.connection.components(&p);
        let w: [T; 4] = [T::one(), a[0].clone(), a[1].clone(), a[2].clone()];
        Ok(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let twist = inv_u.clone() * w[i].clone() * w[j].clone();
                if i == j && i > 0 {
                    twist + u.clone()
                } else {
                    twist
                }
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcore::Point4;
    use crate::riemann::curvature::{curvature_report, riemann_max_abs, riemann_tensor};

    fn chart() -> Chart3 {
        Chart3 {
            lo: [-1.0, -1.0, 1.0],
            hi: [1.0, 1.0, 2.0],
        }
    }

    #[test]
    fn monopole_residuals() {
        let p = [0.3, -0.2, 1.5];
        assert_eq!(
            monopole_residual(&GibbonsHawkingData::trivial(chart()), &p).unwrap(),
            0.0
        );
        assert_eq!(
            monopole_residual(&GibbonsHawkingData::linear_monopole(chart()), &p).unwrap(),
            0.0
        );
        assert_eq!(
            monopole_residual(&GibbonsHawkingData::unbalanced(chart()), &p).unwrap(),
            1.0
        );
        assert!(matches!(
            monopole_residual(&GibbonsHawkingData::trivial(chart()), &[0.0, 0.0, 5.0]),
            Err(GeomError::OutsideChart(_))
        ));
    }

    #[test]
    fn trivial_data_is_flat() {
        let g = gibbons_hawking_metric(GibbonsHawkingData::trivial(chart())).unwrap();
        let r = riemann_tensor(&g, &Point4::new([0.7, 0.1, 0.2, 1.5]).unwrap()).unwrap();
        assert_eq!(riemann_max_abs(&r), 0.0);
    }

    #[test]
    fn monopole_data_is_ricci_flat() {
        let g = gibbons_hawking_metric(GibbonsHawkingData::linear_monopole(chart())).unwrap();
        let rep = curvature_report(&g, &Point4::new([0.0, 0.4, -0.3, 1.2]).unwrap()).unwrap();
        assert!(rep.ricci_max_abs < 1e-8, "{}", rep.ricci_max_abs);
        assert!(rep.riemann_max_abs > 1e-3);
    }

    #[test]
    fn nonpositive_potential_rejected() {
        let bad = Chart3 {
            lo: [-1.0, -1.0, -1.0],
            hi: [1.0, 1.0, 1.0],
        };
        assert!(matches!(
            gibbons_hawking_metric(GibbonsHawkingData::unbalanced(bad)),
            Err(GeomError::NonPositivePotential(_))
        ));
    }
}

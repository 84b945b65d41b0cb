//! The Hawking Taub-NUT family `g_a` on R⁴ and the 1-form ω.

use super::fields::{CovectorField, MetricField};
use crate::diffcore::{Mat4, Point4, Real, Sym4};
use crate::error::{GeomError, Result};

/// The 1-form `ω = −x² dx¹ + x¹ dx² − x⁴ dx³ + x³ dx⁴`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HopfForm;

impl HopfForm {
    pub fn at(&self, x: &Point4) -> [f64; 4] {
        self.eval(x.coords())
    }

    pub fn eval<T: Real>(&self, x: &[T; 4]) -> [T; 4] {
        [-x[1].clone(), x[0].clone(), -x[3].clone(), x[2].clone()]
    }

    /// `ω(v)` at `x`.
    pub fn pair(&self, x: &Point4, v: &[f64; 4]) -> f64 {
        self.at(x).iter().zip(v).map(|(w, c)| w * c).sum()
    }
}

impl CovectorField for HopfForm {
    fn components<T: Real>(&self, x: &[T; 4]) -> Result<[T; 4]> {
        Ok(self.eval(x))
    }
}

/// Hawking Taub-NUT metric with NUT parameter `a ≥ 0` (`a = 0` is flat).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaubNutMetric {
    a: f64,
}

impl TaubNutMetric {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a >= 0.0 {
            Ok(TaubNutMetric { a })
        } else {
            Err(GeomError::InvalidInput(format!(
                "NUT parameter must be finite and >= 0, got {a}"
            )))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `B = a|x|² + 1`
    pub fn conformal_factor<T: Real>(&self, x: &[T; 4]) -> T {
        norm_sq(x) * self.a + 1.0
    }

    /// `μ = 1/B`
    pub fn mu(&self, x: &Point4) -> f64 {
        1.0 / self.conformal_factor(x.coords())
    }

    /// Second printed form: `B g₀ − (a(a|x|² + 2)/B) ω ⊗ ω`. Kept as an
    /// independent cross-check of [`MetricField::components`].
    pub fn closed_form(&self, x: &Point4) -> Sym4 {
        let rho = x.norm_sq();
        let b = self.a * rho + 1.0;
        let coeff = self.a * (self.a * rho + 2.0) / b;
        let w = HopfForm.at(x);
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = -coeff * w[i] * w[j];
            }
            m[i][i] += b;
        }
        Sym4::from_upper(m)
    }
}

fn norm_sq<T: Real>(x: &[T; 4]) -> T {
    x.iter().fold(T::zero(), |acc, c| acc + c.clone().square())
}

impl MetricField for TaubNutMetric {
    /// Matrix form with `B = a|x|² + 1` and `A = a(1 + 1/B)`.
    fn components<T: Real>(&self, x: &[T; 4]) -> Result<Mat4<T>> {
        let b = self.conformal_factor(x);
        let a = (b.clone().recip() + 1.0) * self.a;
        let [x1, x2, x3, x4] = x.clone();
        let ax = |u: &T, v: &T| a.clone() * u.clone() * v.clone();
        let diag = |u: &T| b.clone() - a.clone() * u.clone().square();
        let g11 = diag(&x2);
        let g22 = diag(&x1);
        let g33 = diag(&x4);
        let g44 = diag(&x3);
        let g12 = ax(&x1, &x2);
        let g13 = -ax(&x2, &x4);
        let g14 = ax(&x2, &x3);
        let g23 = ax(&x1, &x4);
        let g24 = -ax(&x1, &x3);
        let g34 = ax(&x3, &x4);
        Ok([
            [g11, g12.clone(), g13.clone(), g14.clone()],
            [g12, g22, g23.clone(), g24.clone()],
            [g13, g23, g33, g34.clone()],
            [g14, g24, g34, g44],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcore::{finite_difference_check, invert_sym4, mat_mul, max_abs};
    use crate::riemann::fields::MetricComponent;

    fn pt(x: [f64; 4]) -> Point4 {
        Point4::new(x).unwrap()
    }

    #[test]
    fn origin_is_identity() {
        for a in [0.0, 0.1, 1.0, 5.0] {
            let g = TaubNutMetric::new(a).unwrap().at(&Point4::ORIGIN).unwrap();
            assert_eq!(g, Sym4::identity());
        }
    }

    #[test]
    fn zero_parameter_is_flat() {
        let g = TaubNutMetric::new(0.0).unwrap().at(&pt([0.3, -1.0, 2.0, 0.5])).unwrap();
        assert_eq!(g, Sym4::identity());
    }

    #[test]
    fn negative_parameter_rejected() {
        assert!(TaubNutMetric::new(-1.0).is_err());
        assert!(TaubNutMetric::new(f64::NAN).is_err());
    }

    #[test]
    fn printed_forms_agree() {
        let m = TaubNutMetric::new(1.0).unwrap();
        let x = pt([1.0, 1.0, 1.0, -1.0]);
        let d = max_abs(&std::array::from_fn(|i| {
            std::array::from_fn(|j| m.at(&x).unwrap().get(i, j) - m.closed_form(&x).get(i, j))
        }));
        assert!(d < 1e-12);
    }

    #[test]
    fn hopf_form_norm_is_radius() {
        let x = pt([0.3, -0.4, 1.2, 0.0]);
        let w = HopfForm.at(&x);
        assert_eq!(w, [0.4, 0.3, -0.0, 1.2]);
        let n: f64 = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((n - x.norm()).abs() < 1e-15);
    }

    #[test]
    fn inverse_round_trip_at_sample_point() {
        let g = TaubNutMetric::new(1.0).unwrap().at(&pt([1.0, 1.0, 1.0, -1.0])).unwrap();
        assert!(g.is_positive_definite());
        let inv = invert_sym4(&g).unwrap();
        let prod = mat_mul(g.entries(), inv.entries());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn g11_first_derivative_matches_central_difference() {
        let m = TaubNutMetric::new(1.0).unwrap();
        let f = MetricComponent { metric: &m, i: 0, j: 0 };
        let dev = finite_difference_check(&f, &[1.0, 0.0, 0.0, 0.0], 1, 1e-5).unwrap();
        assert!(dev < 1e-6, "{dev}");
    }
}

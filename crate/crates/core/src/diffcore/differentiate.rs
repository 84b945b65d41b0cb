//! Exact differentiation of generic scalar fields, plus a central-difference
//! cross-check.

use super::jet::{Jet3, Real};
use crate::error::{GeomError, Result};

/// A smooth scalar function of `N` variables, evaluable with any [`Real`].
pub trait ScalarField<const N: usize> {
    fn eval<T: Real>(&self, p: &[T; N]) -> Result<T>;
}

/// Dense derivative tensor of a given order over `n` variables
/// (`n^order` entries, row-major in the index tuple).
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTensor {
    pub order: usize,
    pub n: usize,
    pub data: Vec<f64>,
}

impl DerivativeTensor {
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.order);
        let flat = idx.iter().fold(0, |acc, &i| acc * self.n + i);
        self.data[flat]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

/// Exact partial derivatives of `field` at `point`. Order 0 returns the
/// value as a one-entry tensor.
pub fn differentiate<F: ScalarField<N>, const N: usize>(
    field: &F,
    point: &[f64; N],
    order: usize,
) -> Result<DerivativeTensor> {
    if order > 3 {
        return Err(GeomError::OrderTooHigh(order));
    }
    if point.iter().any(|c| !c.is_finite()) {
        return Err(GeomError::NonFinite(point.to_vec()));
    }
    let jet = field.eval(&Jet3::<N>::seed(point))?;
    let data = match order {
        0 => vec![jet.v],
        1 => jet.g.to_vec(),
        2 => jet.h.iter().flatten().copied().collect(),
        _ => jet.t.iter().flatten().flatten().copied().collect(),
    };
    Ok(DerivativeTensor { order, n: N, data })
}

/// Largest absolute deviation between the exact derivative tensor and the
/// central-difference estimate built from products of one-dimensional
/// central differences with the given step.
pub fn finite_difference_check<F: ScalarField<N>, const N: usize>(
    field: &F,
    point: &[f64; N],
    order: usize,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) {
        return Err(GeomError::InvalidInput(format!("step must be positive, got {step}")));
    }
    let exact = differentiate(field, point, order)?;
    let denom = (2.0 * step).powi(order as i32);
    let mut worst: f64 = 0.0;
    for (flat, want) in exact.data.iter().enumerate() {
        let idx = unflatten(flat, N, order);
        let mut acc = 0.0;
        for signs in 0..(1usize << order) {
            let mut p = *point;
            let mut sign = 1.0;
            for (bit, &axis) in idx.iter().enumerate() {
                if signs >> bit & 1 == 1 {
                    p[axis] -= step;
                    sign = -sign;
                } else {
                    p[axis] += step;
                }
            }
            acc += sign * field.eval::<f64>(&p)?;
        }
        worst = worst.max((acc / denom - want).abs());
    }
    Ok(worst)
}

fn unflatten(mut flat: usize, n: usize, order: usize) -> Vec<usize> {
    let mut idx = vec![0; order];
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    struct NormSq;
    impl ScalarField<4> for NormSq {
        fn eval<T: Real>(&self, p: &[T; 4]) -> Result<T> {
            Ok(p.iter().fold(T::zero(), |acc, c| acc + c.clone().square()))
        }
    }

    struct Conformal {
        a: f64,
    }
    impl ScalarField<4> for Conformal {
        fn eval<T: Real>(&self, p: &[T; 4]) -> Result<T> {
            Ok(NormSq.eval(p)? * self.a + 1.0)
        }
    }

    struct Constant;
    impl ScalarField<4> for Constant {
        fn eval<T: Real>(&self, _p: &[T; 4]) -> Result<T> {
            Ok(T::constant(3.25))
        }
    }

    #[test]
    fn gradient_of_norm_sq() {
        let d = differentiate(&NormSq, &[1.0, 0.0, 0.0, 0.0], 1).unwrap();
        assert_eq!(d.data, vec![2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn third_derivative_of_quadratic_vanishes() {
        let d = differentiate(&NormSq, &[0.3, -1.2, 2.0, 0.7], 3).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn hessian_of_conformal_factor() {
        let d = differentiate(&Conformal { a: 1.0 }, &[1.0, 1.0, 0.0, 0.0], 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d.get(&[i, j]), if i == j { 2.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn order_four_rejected() {
        assert_eq!(differentiate(&NormSq, &[0.0; 4], 4), Err(GeomError::OrderTooHigh(4)));
    }

    #[test]
    fn fd_check_on_quadratic() {
        let dev = finite_difference_check(&NormSq, &[0.4, 1.1, -0.3, 0.9], 1, 1e-5).unwrap();
        assert!(dev < 1e-9, "{dev}");
    }

    #[test]
    fn fd_check_on_constant() {
        for order in 1..=3 {
            let dev = finite_difference_check(&Constant, &[0.1, 0.2, 0.3, 0.4], order, 1e-3).unwrap();
            assert!(dev < 1e-6, "order {order}: {dev}");
        }
        assert!(finite_difference_check(&Constant, &[0.0; 4], 1, 0.0).is_err());
    }
}

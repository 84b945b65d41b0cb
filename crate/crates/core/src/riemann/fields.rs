use crate::diffcore::{Jet3, Mat4, Point4, Real, ScalarField, Sym4};
use crate::error::{GeomError, Result};

/// Smooth field of symmetric bilinear forms on (a chart of) R⁴.
pub trait MetricField {
    fn components<T: Real>(&self, x: &[T; 4]) -> Result<Mat4<T>>;

    fn at(&self, x: &Point4) -> Result<Sym4> {
        let m = self.components::<f64>(x.coords())?;
        Ok(Sym4::from_upper(m))
    }
}

/// Smooth tangent vector field on R⁴.
pub trait VectorField {
    fn components<T: Real>(&self, x: &[T; 4]) -> [T; 4];

    fn at(&self, x: &Point4) -> [f64; 4] {
        self.components::<f64>(x.coords())
    }

    /// Value and Jacobian `jac[k][i] = ∂_i X^k`.
    fn jacobian(&self, x: &Point4) -> ([f64; 4], [[f64; 4]; 4]) {
        let jets = self.components(&Jet3::<4>::seed(x.coords()));
        (jets.map(|j| j.v), jets.map(|j| j.g))
    }
}

/// Smooth 1-form on R⁴.
pub trait CovectorField {
    fn components<T: Real>(&self, x: &[T; 4]) -> Result<[T; 4]>;
}

impl<M: MetricField> MetricField for &M {
    fn components<T: Real>(&self, x: &[T; 4]) -> Result<Mat4<T>> {
        (*self).components(x)
    }
}

impl<V: VectorField> VectorField for &V {
    fn components<T: Real>(&self, x: &[T; 4]) -> [T; 4] {
        (*self).components(x)
    }
}

/// The Euclidean metric g₀.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlatMetric;

impl MetricField for FlatMetric {
    fn components<T: Real>(&self, _x: &[T; 4]) -> Result<Mat4<T>> {
        Ok(std::array::from_fn(|i| {
            std::array::from_fn(|j| T::constant(if i == j { 1.0 } else { 0.0 }))
        }))
    }
}

/// Affine vector field `X(x) = M x + c` with an arbitrary matrix `M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineField {
    pub matrix: [[f64; 4]; 4],
    pub offset: [f64; 4],
}

impl AffineField {
    pub fn constant(c: [f64; 4]) -> Self {
        AffineField {
            matrix: [[0.0; 4]; 4],
            offset: c,
        }
    }

    /// `κ x^i ∂_i`
    pub fn dilation(kappa: f64) -> Self {
        let mut matrix = [[0.0; 4]; 4];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = kappa;
        }
        AffineField {
            matrix,
            offset: [0.0; 4],
        }
    }

    /// The ω-dual field `(−x², x¹, −x⁴, x³)`.
    pub fn hopf_dual() -> Self {
        let mut matrix = [[0.0; 4]; 4];
        matrix[0][1] = -1.0;
        matrix[1][0] = 1.0;
        matrix[2][3] = -1.0;
        matrix[3][2] = 1.0;
        AffineField {
            matrix,
            offset: [0.0; 4],
        }
    }

    pub fn zero() -> Self {
        Self::constant([0.0; 4])
    }
}

impl VectorField for AffineField {
    fn components<T: Real>(&self, x: &[T; 4]) -> [T; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(T::constant(self.offset[i]), |acc, j| {
                if self.matrix[i][j] == 0.0 {
                    acc
                } else {
                    acc + x[j].clone() * self.matrix[i][j]
                }
            })
        })
    }
}

/// One entry `g_ij` of a metric, viewed as a scalar field (for derivative
/// cross-checks).
pub struct MetricComponent<'a, M> {
    pub metric: &'a M,
    pub i: usize,
    pub j: usize,
}

impl<M: MetricField> ScalarField<4> for MetricComponent<'_, M> {
    fn eval<T: Real>(&self, p: &[T; 4]) -> Result<T> {
        let mut m = self.metric.components(p)?;
        Ok(std::mem::replace(&mut m[self.i][self.j], T::zero()))
    }
}

/// Evaluates `metric` at `x` and requires a positive-definite result.
pub fn positive_form<M: MetricField>(metric: &M, x: &Point4) -> Result<Sym4> {
    let g = metric.at(x)?;
    if g.is_positive_definite() {
        Ok(g)
    } else {
        Err(GeomError::DegenerateMetric(*x.coords()))
    }
}

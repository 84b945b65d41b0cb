//! Killing fields of the flat metric and of the Taub-NUT metrics.
//!
//! Every Euclidean Killing field is affine, `X = Q x + C` with `Q`
//! antisymmetric. Inside that 10-dimensional family the Taub-NUT Killing
//! fields are exactly the `C = 0` rotations commuting with the complex
//! structure behind ω, a 4-parameter family `(m, n, r, s)`.

use crate::diffcore::{nullspace, Matrix, Point4, Real};
use crate::error::{GeomError, Result};
use crate::riemann::{lie_derivative_metric, HopfForm, MetricField, VectorField};
use crate::sampling::sample_ball;

/// Ordering of the ten affine coefficients: the upper triangle of `Q`
/// row by row, then `C`.
pub const COEFFICIENT_NAMES: [&str; 10] = ["Q12", "Q13", "Q14", "Q23", "Q24", "Q34", "C1", "C2", "C3", "C4"];

const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Relative singular-value cutoff for the classification system.
pub const NULLSPACE_TOLERANCE: f64 = 1e-9;

/// Total sample size used to confirm that the solution space is stable.
pub const CONFIRMATION_SAMPLES: usize = 100;

const CONFIRMATION_SEED: u64 = 0x6b69_6c6c;

/// `X^i = Q^i_j x^j + C^i` with `Q` antisymmetric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EuclideanKilling {
    q: [[f64; 4]; 4],
    c: [f64; 4],
}

impl EuclideanKilling {
    /// Rejects `q` unless `q + qᵀ = 0` exactly.
    pub fn new(q: [[f64; 4]; 4], c: [f64; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                if q[i][j] != -q[j][i] {
                    return Err(GeomError::InvalidInput(format!("Q is not antisymmetric at ({i},{j})")));
                }
            }
        }
        Ok(EuclideanKilling { q, c })
    }

    pub fn from_coefficients(coef: &[f64; 10]) -> Self {
        let mut q = [[0.0; 4]; 4];
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            q[i][j] = coef[k];
            q[j][i] = -coef[k];
        }
        EuclideanKilling {
            q,
            c: [coef[6], coef[7], coef[8], coef[9]],
        }
    }

    pub fn coefficients(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            out[k] = self.q[i][j];
        }
        out[6..].copy_from_slice(&self.c);
        out
    }

    pub fn q(&self) -> &[[f64; 4]; 4] {
        &self.q
    }

    pub fn c(&self) -> &[f64; 4] {
        &self.c
    }

    /// Flow matrix `exp(tQ)` (the linear part of the flow; exact flow when `C = 0`).
    pub fn linear_flow(&self, t: f64) -> [[f64; 4]; 4] {
        expm(&self.q.map(|row| row.map(|v| v * t)))
    }
}

impl VectorField for EuclideanKilling {
    fn components<T: Real>(&self, x: &[T; 4]) -> [T; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(T::constant(self.c[i]), |acc, j| {
                if self.q[i][j] == 0.0 {
                    acc
                } else {
                    acc + x[j].clone() * self.q[i][j]
                }
            })
        })
    }
}

/// Parameters of the Taub-NUT Killing family.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TaubNutKillingParams {
    pub m: f64,
    pub n: f64,
    pub r: f64,
    pub s: f64,
}

impl TaubNutKillingParams {
    pub fn new(m: f64, n: f64, r: f64, s: f64) -> Self {
        TaubNutKillingParams { m, n, r, s }
    }

    /// `V_r = r(x⁴∂₁ − x³∂₂ + x²∂₃ − x¹∂₄)`
    pub fn v_r(r: f64) -> Self {
        Self::new(0.0, 0.0, r, 0.0)
    }

    /// `U_s = s(x³∂₁ + x⁴∂₂ − x¹∂₃ − x²∂₄)`
    pub fn u_s(s: f64) -> Self {
        Self::new(0.0, 0.0, 0.0, s)
    }

    /// `W_{m,n} = m(x²∂₁ − x¹∂₂) + n(x⁴∂₃ − x³∂₄)`
    pub fn w_mn(m: f64, n: f64) -> Self {
        Self::new(m, n, 0.0, 0.0)
    }

    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let TaubNutKillingParams { m, n, r, s } = *self;
        [[0.0, m, s, r], [-m, 0.0, -r, s], [-s, r, 0.0, n], [-r, -s, -n, 0.0]]
    }
}

pub fn build_field(params: &TaubNutKillingParams) -> EuclideanKilling {
    EuclideanKilling {
        q: params.matrix(),
        c: [0.0; 4],
    }
}

/// `(L_X ω)_j = X^k ∂_k ω_j + ω_k ∂_j X^k` at `x`.
pub fn lie_derivative_oneform<V: VectorField>(field: &V, x: &Point4) -> [f64; 4] {
    let (xv, jac) = field.jacobian(x);
    let omega = HopfForm.at(x);
    let domega = {
        let jets = HopfForm.eval(&crate::diffcore::Jet3::<4>::seed(x.coords()));
        jets.map(|j| j.g)
    };
    std::array::from_fn(|j| (0..4).map(|k| xv[k] * domega[j][k] + omega[k] * jac[k][j]).sum())
}

/// Result of solving `L_X g = 0` inside the affine family.
#[derive(Clone, Debug, PartialEq)]
pub struct KillingClassification {
    /// Orthonormal basis of the solution space in coefficient coordinates
    /// (see [`COEFFICIENT_NAMES`]).
    pub basis: Vec<[f64; 10]>,
    pub singular_values: Vec<f64>,
    pub sample_size: usize,
}

impl KillingClassification {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Largest distance of a basis vector from the `(m, n, r, s)` pattern
    /// space. Zero when every solution has the Taub-NUT form.
    pub fn pattern_residual(&self) -> f64 {
        self.basis.iter().map(distance_from_pattern).fold(0.0, f64::max)
    }

    /// Largest `|C|` among basis vectors.
    pub fn translation_residual(&self) -> f64 {
        self.basis
            .iter()
            .map(|v| v[6..].iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

/// Orthonormal basis of the Taub-NUT pattern inside coefficient space,
/// ordered `(m, n, s, r)`.
pub fn pattern_basis() -> [[f64; 10]; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = [0.0; 10];
    m[0] = 1.0;
    let mut n = [0.0; 10];
    n[5] = 1.0;
    let mut s = [0.0; 10];
    s[1] = h;
    s[4] = h;
    let mut r = [0.0; 10];
    r[2] = h;
    r[3] = -h;
    [m, n, s, r]
}

/// Norm of the component of `v` orthogonal to the pattern space.
pub fn distance_from_pattern(v: &[f64; 10]) -> f64 {
    let mut rest = *v;
    for e in pattern_basis() {
        let d: f64 = e.iter().zip(v).map(|(a, b)| a * b).sum();
        for (r, a) in rest.iter_mut().zip(e) {
            *r -= d * a;
        }
    }
    rest.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn killing_system<M: MetricField>(metric: &M, sample: &[Point4]) -> Result<Matrix> {
    let basis: Vec<EuclideanKilling> = (0..10)
        .map(|k| {
            let mut e = [0.0; 10];
            e[k] = 1.0;
            EuclideanKilling::from_coefficients(&e)
        })
        .collect();
    let mut m = Matrix::zeros(10 * sample.len(), 10);
    for (p, x) in sample.iter().enumerate() {
        for (col, field) in basis.iter().enumerate() {
            let l = lie_derivative_metric(field, metric, x)?;
            let mut row = 10 * p;
            for i in 0..4 {
                for j in i..4 {
                    m.set(row, col, l.get(i, j));
                    row += 1;
                }
            }
        }
    }
    Ok(m)
}

fn solve_system<M: MetricField>(metric: &M, sample: &[Point4]) -> Result<(Vec<[f64; 10]>, Vec<f64>)> {
    let system = killing_system(metric, sample)?;
    let (mut sigma, _) = crate::diffcore::right_singular_system(&system);
    sigma.sort_by(|a, b| b.total_cmp(a));
    let basis = nullspace(&system, NULLSPACE_TOLERANCE)
        .into_iter()
        .map(|v| std::array::from_fn(|i| v[i]))
        .collect();
    Ok((basis, sigma))
}

/// Solves `L_X g = 0` at every sample point for the ten affine coefficients.
///
/// Requires at least ten points. The answer is then re-derived on the
/// sample extended by seeded points up to [`CONFIRMATION_SAMPLES`]; a drop
/// in dimension means the given sample did not pin the system down.
pub fn classify_killing<M: MetricField>(metric: &M, sample: &[Point4]) -> Result<KillingClassification> {
    if sample.len() < 10 {
        return Err(GeomError::Underdetermined(format!(
            "{} sample point(s) cannot pin down 10 coefficients",
            sample.len()
        )));
    }
    let (basis, singular_values) = solve_system(metric, sample)?;
    if sample.len() < CONFIRMATION_SAMPLES {
        let mut extended = sample.to_vec();
        extended.extend(sample_ball(CONFIRMATION_SEED, CONFIRMATION_SAMPLES - sample.len(), 2.0));
        let (confirm, _) = solve_system(metric, &extended)?;
        if confirm.len() < basis.len() {
            return Err(GeomError::Underdetermined(format!(
                "solution dimension drops from {} to {} when sampling {} points",
                basis.len(),
                confirm.len(),
                CONFIRMATION_SAMPLES
            )));
        }
    }
    Ok(KillingClassification {
        basis,
        singular_values,
        sample_size: sample.len(),
    })
}

/// Matrix exponential by scaling and squaring of a Taylor series.
fn expm(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    use crate::diffcore::mat_mul;
    let norm = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())) * 4.0;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let scaled = a.map(|row| row.map(|v| v * scale));
    let mut term: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }));
    let mut sum = term;
    for k in 1..30 {
        term = mat_mul(&term, &scaled).map(|row| row.map(|v| v / k as f64));
        for i in 0..4 {
            for j in 0..4 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mat_mul(&sum, &sum);
    }
    sum
}

//! Zermelo navigation: Randers metrics from a Riemannian "sea" `g` and a
//! "wind" `V` with `|V|_g < 1`.
//!
//! ```text
//! a_ij = g_ij / λ + V_i V_j / λ²,   b_i = −V_i / λ,   λ = 1 − |V|²_g
//! ```
//!
//! The printed closed forms for the wind norms of `V_r` and `U_s` live here
//! too, but only as claims to be compared against direct contraction; the
//! Randers construction itself always uses the contraction.

use crate::diffcore::{invert_sym4, Mat4, Point4, Real, Sym4};
use crate::error::{GeomError, Result};
use crate::riemann::{CovectorField, MetricField, VectorField};

/// Riemannian metric plus wind.
#[derive(Clone, Debug)]
pub struct NavigationData<M, V> {
    pub metric: M,
    pub wind: V,
}

impl<M: MetricField, V: VectorField> NavigationData<M, V> {
    pub fn new(metric: M, wind: V) -> Self {
        NavigationData { metric, wind }
    }

    /// Lowered wind `V_i = g_ij V^j`.
    pub fn lowered_wind(&self, x: &Point4) -> Result<[f64; 4]> {
        let g = self.metric.at(x)?;
        Ok(g.apply(&self.wind.at(x)))
    }
}

/// Anything that yields Randers data `(a_ij, b_i)` at a point, evaluable
/// with any [`Real`] so the Finsler stack can differentiate through it.
pub trait RandersData {
    fn forms<T: Real>(&self, x: &[T; 4]) -> Result<(Mat4<T>, [T; 4])>;

    /// Validated data at a point: `a` positive-definite and `|b|_a < 1`.
    fn at(&self, x: &Point4) -> Result<(Sym4, [f64; 4])> {
        let (a, b) = self.forms::<f64>(x.coords())?;
        let a = Sym4::from_upper(a);
        if !a.is_positive_definite() {
            return Err(GeomError::DegenerateMetric(*x.coords()));
        }
        let inv = invert_sym4(&a)?;
        let bnorm = inv.bilinear(&b, &b).sqrt();
        if !(bnorm < 1.0) {
            return Err(GeomError::InvalidRanders(bnorm));
        }
        Ok((a, b))
    }
}

/// Explicit Randers metric `F = α + β`.
#[derive(Clone, Debug)]
pub struct RandersMetric<A, B> {
    pub alpha: A,
    pub beta: B,
}

/// The zero 1-form.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroForm;

impl CovectorField for ZeroForm {
    fn components<T: Real>(&self, _x: &[T; 4]) -> Result<[T; 4]> {
        Ok(std::array::from_fn(|_| T::zero()))
    }
}

/// Spatially constant 1-form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantForm(pub [f64; 4]);

impl CovectorField for ConstantForm {
    fn components<T: Real>(&self, _x: &[T; 4]) -> Result<[T; 4]> {
        Ok(self.0.map(T::constant))
    }
}

impl<A: MetricField> RandersMetric<A, ZeroForm> {
    /// `β = 0`: the Riemannian metric `α` seen as a Finsler metric.
    pub fn riemannian(alpha: A) -> Self {
        RandersMetric { alpha, beta: ZeroForm }
    }
}

impl<A: MetricField, B: CovectorField> RandersData for RandersMetric<A, B> {
    fn forms<T: Real>(&self, x: &[T; 4]) -> Result<(Mat4<T>, [T; 4])> {
        Ok((self.alpha.components(x)?, self.beta.components(x)?))
    }
}

impl<M: MetricField, V: VectorField> RandersData for NavigationData<M, V> {
    fn forms<T: Real>(&self, x: &[T; 4]) -> Result<(Mat4<T>, [T; 4])> {
        let g = self.metric.components(x)?;
        let v = self.wind.components(x);
        navigation_forms(&g, &v)
    }
}

/// Generic pointwise forward map; errors when `|V|_g ≥ 1`.
fn navigation_forms<T: Real>(g: &Mat4<T>, v: &[T; 4]) -> Result<(Mat4<T>, [T; 4])> {
    let lowered: [T; 4] =
        std::array::from_fn(|i| (0..4).fold(T::zero(), |acc, j| acc + g[i][j].clone() * v[j].clone()));
    let norm_sq = (0..4).fold(T::zero(), |acc, i| acc + lowered[i].clone() * v[i].clone());
    if !(norm_sq.re() < 1.0) {
        return Err(GeomError::WindTooStrong(norm_sq.re().max(0.0).sqrt()));
    }
    let lambda = -norm_sq + 1.0;
    let inv = lambda.clone().recip();
    let inv2 = inv.clone() * inv.clone();
    let a = std::array::from_fn(|i| {
        std::array::from_fn(|j| g[i][j].clone() * inv.clone() + lowered[i].clone() * lowered[j].clone() * inv2.clone())
    });
    let b = std::array::from_fn(|i| -(lowered[i].clone() * inv.clone()));
    Ok((a, b))
}

/// Forward Zermelo map on pointwise data.
pub fn zermelo_forward(g: &Sym4, v: &[f64; 4]) -> Result<(Sym4, [f64; 4])> {
    let (a, b) = navigation_forms(g.entries(), v)?;
    Ok((Sym4::from_upper(a), b))
}

/// Inverse Zermelo map: `g = ε(a − b⊗b)`, `V^i = −b^i/ε` with
/// `ε = 1 − |b|²_a`.
pub fn zermelo_inverse(a: &Sym4, b: &[f64; 4]) -> Result<(Sym4, [f64; 4])> {
    let inv = invert_sym4(a)?;
    let raised = inv.apply(b);
    let bnorm_sq: f64 = raised.iter().zip(b).map(|(u, v)| u * v).sum();
    if !(bnorm_sq < 1.0) {
        return Err(GeomError::InvalidRanders(bnorm_sq.max(0.0).sqrt()));
    }
    let eps = 1.0 - bnorm_sq;
    let g = Sym4::from_upper(std::array::from_fn(|i| {
        std::array::from_fn(|j| eps * (a.get(i, j) - b[i] * b[j]))
    }));
    Ok((g, raised.map(|c| -c / eps)))
}

pub fn navigation_to_randers<M: MetricField, V: VectorField>(
    nav: &NavigationData<M, V>,
    x: &Point4,
) -> Result<(Sym4, [f64; 4])> {
    zermelo_forward(&nav.metric.at(x)?, &nav.wind.at(x))
}

pub fn randers_to_navigation<R: RandersData>(randers: &R, x: &Point4) -> Result<(Sym4, [f64; 4])> {
    let (a, b) = randers.forms::<f64>(x.coords())?;
    zermelo_inverse(&Sym4::from_upper(a), &b)
}

pub(crate) fn is_zero(y: &[f64; 4]) -> bool {
    y.iter().all(|c| *c == 0.0)
}

/// `F = √(a_ij y^i y^j) + b_i y^i` for any [`Real`].
pub(crate) fn randers_norm<T: Real>(a: &Mat4<T>, b: &[T; 4], y: &[T; 4]) -> T {
    let mut alpha_sq = T::zero();
    let mut beta = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            alpha_sq = alpha_sq + a[i][j].clone() * y[i].clone() * y[j].clone();
        }
        beta = beta + b[i].clone() * y[i].clone();
    }
    alpha_sq.sqrt() + beta
}

/// `F(x, y)`.
pub fn randers_value<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<f64> {
    if is_zero(y) {
        return Err(GeomError::ZeroVector);
    }
    let (a, b) = randers.at(x)?;
    Ok(randers_norm(a.entries(), &b, y))
}

/// `|V|²_g = V^i g_ij V^j` by contraction.
pub fn wind_norm_direct<M: MetricField, V: VectorField>(nav: &NavigationData<M, V>, x: &Point4) -> Result<f64> {
    let g = nav.metric.at(x)?;
    let v = nav.wind.at(x);
    Ok(g.bilinear(&v, &v))
}

/// Printed closed form `μ r² |x|²`, `μ = 1/(a|x|² + 1)`.
pub fn wind_norm_closed_vr(a: f64, r: f64, x: &Point4) -> f64 {
    let rho = x.norm_sq();
    r * r * rho / (a * rho + 1.0)
}

/// Printed closed form for `|U_s|²_{g_a}`, transcribed term by term.
pub fn wind_norm_closed_us(a: f64, s: f64, x: &Point4) -> f64 {
    let [x1, x2, x3, x4] = *x.coords();
    let rho = x.norm_sq();
    let mu = 1.0 / (a * rho + 1.0);
    let prod = x1 * x2 * x3 * x4;
    let p = |v: f64, k: i32| v.powi(k);
    let a2 = a * a;
    let f = -a2 * (p(x1, 2) * p(x4, 4) + p(x2, 4) * p(x3, 2) + p(x2, 2) * p(x3, 4) + p(x1, 4) * p(x4, 2))
        + 3.0
            * a2
            * (p(x1, 2) * p(x2, 4)
                + p(x4, 2) * p(x2, 4)
                + p(x1, 2) * p(x3, 4)
                + p(x3, 2) * p(x4, 4)
                + p(x3, 4) * p(x4, 2)
                + p(x1, 4) * p(x2, 2)
                + p(x2, 2) * p(x4, 4)
                + p(x3, 2) * p(x1, 4))
        + 4.0
            * a
            * (p(x1, 2) * p(x3, 2) - p(x2, 2) * p(x3, 2) + p(x2, 2) * p(x1, 2) + p(x4, 2) * p(x3, 2)
                - p(x4, 2) * p(x1, 2)
                + p(x4, 2) * p(x2, 2))
        + 2.0
            * a2
            * (p(x1, 2) * p(x3, 2) * p(x4, 2)
                + p(x2, 2) * p(x3, 2) * p(x4, 2)
                + p(x1, 2) * p(x2, 2) * p(x3, 2)
                + p(x1, 2) * p(x2, 2) * p(x4, 2));
    let braces = (1.0 + 8.0 * a2 * prod) * rho + 2.0 * a * x.pnorm_pow(4) + a2 * x.pnorm_pow(6) + 16.0 * a * prod + f;
    mu * s * s * braces
}

/// Domain on which a navigation Randers metric is considered.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainSpec {
    /// `|x| < radius`
    Ball(f64),
    WholeSpace,
    /// `|V|²_g < 1` by direct contraction.
    ImplicitNorm,
}

impl DomainSpec {
    pub fn ball(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(DomainSpec::Ball(radius))
        } else {
            Err(GeomError::InvalidInput(format!(
                "ball radius must be finite and positive, got {radius}"
            )))
        }
    }

    /// The printed domain for `V_r`: the ball of radius `1/√(r² − a)` when
    /// `r² > a`, otherwise all of R⁴.
    pub fn printed_vr(a: f64, r: f64) -> Self {
        if r * r > a {
            DomainSpec::Ball(1.0 / (r * r - a).sqrt())
        } else {
            DomainSpec::WholeSpace
        }
    }
}

pub fn domain_contains<M: MetricField, V: VectorField>(
    spec: &DomainSpec,
    nav: &NavigationData<M, V>,
    x: &Point4,
) -> bool {
    match spec {
        DomainSpec::Ball(radius) => x.norm() < *radius,
        DomainSpec::WholeSpace => true,
        DomainSpec::ImplicitNorm => wind_norm_direct(nav, x).is_ok_and(|n| n < 1.0),
    }
}

/// Per-point comparison of a closed-form wind norm with direct contraction.
#[derive(Clone, Debug, PartialEq)]
pub struct NormCrosscheck {
    pub points: usize,
    pub max_abs_diff: f64,
    /// `max |closed − direct| / max(1, |direct|)`
    pub max_rel_diff: f64,
    pub worst_point: Point4,
    pub worst_closed: f64,
    pub worst_direct: f64,
}

pub fn crosscheck_norm<M: MetricField, V: VectorField>(
    nav: &NavigationData<M, V>,
    closed: impl Fn(&Point4) -> f64,
    points: &[Point4],
) -> Result<NormCrosscheck> {
    let mut out = NormCrosscheck {
        points: points.len(),
        max_abs_diff: 0.0,
        max_rel_diff: 0.0,
        worst_point: *points.first().ok_or(GeomError::EmptySample)?,
        worst_closed: 0.0,
        worst_direct: 0.0,
    };
    let mut first = true;
    for x in points {
        let direct = wind_norm_direct(nav, x)?;
        let c = closed(x);
        let diff = (c - direct).abs();
        let rel = diff / direct.abs().max(1.0);
        out.max_abs_diff = out.max_abs_diff.max(diff);
        if first || rel > out.max_rel_diff {
            first = false;
            out.max_rel_diff = rel;
            out.worst_point = *x;
            out.worst_closed = c;
            out.worst_direct = direct;
        }
    }
    Ok(out)
}

//! Curvature of Randers metrics from the Finsler spray.
//!
//! With `F²` treated as a function of `(x, y)`:
//!
//! ```text
//! g_ij  = ½ ∂²F²/∂y^i∂y^j
//! G^i   = ¼ g^{il} ( ∂²F²/∂x^k∂y^l y^k − ∂F²/∂x^l )
//! R^i_k = 2 ∂G^i/∂x^k − y^j ∂²G^i/∂x^j∂y^k + 2 G^j ∂²G^i/∂y^j∂y^k − ∂G^i/∂y^j ∂G^j/∂y^k
//! ```
//!
//! `R^i_k` needs fourth derivatives of `F²`, obtained from one evaluation in
//! a nested second-order jet over the eight variables `(x¹..x⁴, y¹..y⁴)`.

use rand::Rng;
use rayon::prelude::*;

use crate::diffcore::{invert4, Jet2, Mat4, Point4, Real, Sym4};
use crate::error::{GeomError, Result};
use crate::riemann::{homothety_constant, ricci, MetricField, VectorField};
use crate::sampling::{ball_point, unit_vector};
use crate::zermelo::{is_zero, randers_norm, wind_norm_direct, NavigationData, RandersData};

type Outer = Jet2<f64, 8>;
type Nested = Jet2<Outer, 8>;

/// Base point, flagpole `y` and transverse edge `u` spanning the flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flag {
    pub x: Point4,
    pub y: [f64; 4],
    pub u: [f64; 4],
}

impl Flag {
    pub fn new(x: Point4, y: [f64; 4], u: [f64; 4]) -> Result<Self> {
        if is_zero(&y) {
            return Err(GeomError::ZeroVector);
        }
        if y.iter().chain(&u).any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite(y.iter().chain(&u).copied().collect()));
        }
        Ok(Flag { x, y, u })
    }
}

fn f_squared<T: Real, R: RandersData>(randers: &R, x: &[T; 4], y: &[T; 4]) -> Result<T> {
    let (a, b) = randers.forms(x)?;
    let f = randers_norm(&a, &b, y);
    Ok(f.clone() * f)
}

fn check_flagpole<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<()> {
    if is_zero(y) {
        return Err(GeomError::ZeroVector);
    }
    randers.at(x).map(|_| ())
}

/// `g_y = ½ ∂²F²/∂y∂y`.
pub fn fundamental_tensor<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<Sym4> {
    check_flagpole(randers, x, y)?;
    let (a, b) = randers.forms::<f64>(x.coords())?;
    let a: Mat4<Jet2<f64, 4>> = a.map(|row| row.map(Jet2::lift));
    let b: [Jet2<f64, 4>; 4] = b.map(Jet2::lift);
    let f = randers_norm(&a, &b, &Jet2::<f64, 4>::seed(y));
    let f2 = f.clone() * f;
    Ok(Sym4::from_upper(std::array::from_fn(|i| {
        std::array::from_fn(|j| 0.5 * f2.hess(i, j))
    })))
}

/// Spray from a jet of `F²` over `(x, y)`; generic in the coefficient type so
/// the same code yields either plain values or their derivatives.
fn spray_from<S: Real>(f2: &Jet2<S, 8>, y: &[S; 4]) -> Result<[S; 4]> {
    let gy: Mat4<S> = std::array::from_fn(|i| std::array::from_fn(|j| f2.hess(4 + i, 4 + j).clone() * 0.5));
    let ginv = invert4(&gy)?;
    let rhs: [S; 4] = std::array::from_fn(|l| {
        (0..4).fold(-f2.grad(l).clone(), |acc, k| {
            acc + f2.hess(k, 4 + l).clone() * y[k].clone()
        })
    });
    Ok(std::array::from_fn(|i| {
        (0..4).fold(S::zero(), |acc, l| acc + ginv[i][l].clone() * rhs[l].clone()) * 0.25
    }))
}

fn seed_xy(x: &Point4, y: &[f64; 4]) -> [f64; 8] {
    let c = x.coords();
    [c[0], c[1], c[2], c[3], y[0], y[1], y[2], y[3]]
}

/// Spray coefficients `G^i(x, y)`.
pub fn spray_coefficients<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<[f64; 4]> {
    check_flagpole(randers, x, y)?;
    let z = Outer::seed(&seed_xy(x, y));
    let (xs, ys) = split(z);
    let f2 = f_squared(randers, &xs, &ys)?;
    spray_from(&f2, y)
}

fn split<T: Clone>(z: [T; 8]) -> ([T; 4], [T; 4]) {
    (
        std::array::from_fn(|i| z[i].clone()),
        std::array::from_fn(|i| z[4 + i].clone()),
    )
}

/// Everything the flag-curvature and Ricci queries need at one `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FinslerCurvature {
    pub x: Point4,
    pub y: [f64; 4],
    pub f: f64,
    pub gy: Sym4,
    pub spray: [f64; 4],
    /// `r[i][k] = R^i_k`
    pub r: [[f64; 4]; 4],
}

impl FinslerCurvature {
    pub fn ricci(&self) -> f64 {
        (0..4).map(|i| self.r[i][i]).sum()
    }

    /// `R_y(u)`
    pub fn apply(&self, u: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|k| self.r[i][k] * u[k]).sum())
    }

    /// Flag curvature of `span(y, u)` with flagpole `y`.
    pub fn flag_curvature(&self, u: &[f64; 4]) -> Result<f64> {
        let y = &self.y;
        let gyy = self.gy.bilinear(y, y);
        let guu = self.gy.bilinear(u, u);
        let guy = self.gy.bilinear(u, y);
        let denom = gyy * guu - guy * guy;
        if !(denom > 1e-12 * gyy * guu) {
            return Err(GeomError::DegenerateFlag(denom));
        }
        Ok(self.gy.bilinear(&self.apply(u), u) / denom)
    }
}

/// Full curvature evaluation at `(x, y)` through one nested-jet pass.
pub fn finsler_curvature<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<FinslerCurvature> {
    check_flagpole(randers, x, y)?;
    let z = Nested::seed_nested(&seed_xy(x, y));
    let (xs, ys) = split(z);
    let f2 = f_squared(randers, &xs, &ys)?;
    let y_outer: [Outer; 4] = std::array::from_fn(|k| Outer::variable(y[k], 4 + k));
    let g = spray_from(&f2, &y_outer)?;

    let val = |i: usize| *g[i].value();
    let dx = |i: usize, k: usize| *g[i].grad(k);
    let dy = |i: usize, k: usize| *g[i].grad(4 + k);
    let dxdy = |i: usize, j: usize, k: usize| *g[i].hess(j, 4 + k);
    let dydy = |i: usize, j: usize, k: usize| *g[i].hess(4 + j, 4 + k);
    let r = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut acc = 2.0 * dx(i, k);
            for j in 0..4 {
                acc += -y[j] * dxdy(i, j, k) + 2.0 * val(j) * dydy(i, j, k) - dy(i, j) * dy(j, k);
            }
            acc
        })
    });
    let fval = f2.value().value().sqrt();
    let gy = Sym4::from_upper(std::array::from_fn(|i| {
        std::array::from_fn(|j| 0.5 * f2.hess(4 + i, 4 + j).value())
    }));
    Ok(FinslerCurvature {
        x: *x,
        y: *y,
        f: fval,
        gy,
        spray: std::array::from_fn(val),
        r,
    })
}

/// `R^i_k(x, y)`
pub fn riemann_endomorphism<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<[[f64; 4]; 4]> {
    Ok(finsler_curvature(randers, x, y)?.r)
}

pub fn flag_curvature<R: RandersData>(randers: &R, flag: &Flag) -> Result<f64> {
    finsler_curvature(randers, &flag.x, &flag.y)?.flag_curvature(&flag.u)
}

/// `Ric(x, y) = R^i_i`
pub fn finsler_ricci<R: RandersData>(randers: &R, x: &Point4, y: &[f64; 4]) -> Result<f64> {
    Ok(finsler_curvature(randers, x, y)?.ricci())
}

/// Outcome of testing `Ric = 3K F²` on a navigation Randers metric.
#[derive(Clone, Debug, PartialEq)]
pub struct EinsteinReport {
    pub points: Vec<(Point4, [f64; 4])>,
    pub ricci_values: Vec<f64>,
    /// `3K F²` with `K` predicted from the navigation data.
    pub predicted: Vec<f64>,
    pub f_squared: Vec<f64>,
    /// `max |Ric − 3K F²|`
    pub max_residual: f64,
    /// `max |Ric − 3K F²| / F²`
    pub max_relative_residual: f64,
    /// `K = λ/3 − c²` from the homothety constant and the base Einstein constant.
    pub k: f64,
    /// Least-squares fit of `Ric / 3F²` without assuming the prediction.
    pub k_fit: f64,
    /// `max |Ric/(3F²) − k_fit|`
    pub k_deviation: f64,
    /// Homothety constant: `L_V g = −4c g`.
    pub c: f64,
    pub homothety_residual: f64,
    /// `λ` in `Ric_g = λ g`.
    pub base_einstein_constant: f64,
    pub base_einstein_residual: f64,
}

/// Checks the Einstein condition for the Randers metric of `nav`.
///
/// `c` comes from the homothety fit of the wind, `λ` from a fit of the
/// base Ricci tensor to `λ g`; then `K = λ/3 − c²` and every sampled
/// `(x, y)` is compared against `Ric = 3K F²`.
pub fn einstein_check<R, M, V>(
    randers: &R,
    nav: &NavigationData<M, V>,
    sample: &[(Point4, [f64; 4])],
) -> Result<EinsteinReport>
where
    R: RandersData + Sync,
    M: MetricField + Sync,
    V: VectorField + Sync,
{
    if sample.is_empty() {
        return Err(GeomError::EmptySample);
    }
    let xs: Vec<Point4> = sample.iter().map(|(x, _)| *x).collect();
    let (c, homothety_residual) = homothety_constant(&nav.wind, &nav.metric, &xs)?;

    let base: Vec<(Sym4, Sym4)> = xs
        .par_iter()
        .map(|x| Ok((ricci(&nav.metric, x)?, nav.metric.at(x)?)))
        .collect::<Result<_>>()?;
    let (mut num, mut den) = (0.0, 0.0);
    for (ric, g) in &base {
        for i in 0..4 {
            for j in 0..4 {
                num += ric.get(i, j) * g.get(i, j);
                den += g.get(i, j) * g.get(i, j);
            }
        }
    }
    let lambda = num / den;
    let base_einstein_residual = base.iter().fold(0.0f64, |acc, (ric, g)| {
        let mut w = acc;
        for i in 0..4 {
            for j in 0..4 {
                w = w.max((ric.get(i, j) - lambda * g.get(i, j)).abs());
            }
        }
        w
    });
    let k = lambda / 3.0 - c * c;

    let curv: Vec<FinslerCurvature> = sample
        .par_iter()
        .map(|(x, y)| finsler_curvature(randers, x, y))
        .collect::<Result<_>>()?;
    let ricci_values: Vec<f64> = curv.iter().map(FinslerCurvature::ricci).collect();
    let f_squared: Vec<f64> = curv.iter().map(|c| c.f * c.f).collect();
    let predicted: Vec<f64> = f_squared.iter().map(|f2| 3.0 * k * f2).collect();
    let (mut max_residual, mut max_relative_residual) = (0.0f64, 0.0f64);
    for ((ric, pred), f2) in ricci_values.iter().zip(&predicted).zip(&f_squared) {
        let d = (ric - pred).abs();
        max_residual = max_residual.max(d);
        max_relative_residual = max_relative_residual.max(d / f2);
    }
    let k_fit = ricci_values.iter().zip(&f_squared).map(|(r, f2)| r * f2).sum::<f64>()
        / (3.0 * f_squared.iter().map(|f2| f2 * f2).sum::<f64>());
    let k_deviation = ricci_values
        .iter()
        .zip(&f_squared)
        .fold(0.0f64, |acc, (r, f2)| acc.max((r / (3.0 * f2) - k_fit).abs()));

    Ok(EinsteinReport {
        points: sample.to_vec(),
        ricci_values,
        predicted,
        f_squared,
        max_residual,
        max_relative_residual,
        k,
        k_fit,
        k_deviation,
        c,
        homothety_residual,
        base_einstein_constant: lambda,
        base_einstein_residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlagScan {
    /// Flag curvature per input flag; `None` for degenerate flags.
    pub values: Vec<Option<f64>>,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

/// Flag curvature over a set of flags, evaluated in parallel and reduced in
/// input order.
pub fn constancy_scan<R: RandersData + Sync>(randers: &R, flags: &[Flag]) -> Result<FlagScan> {
    if flags.len() < 2 {
        return Err(GeomError::InvalidInput(format!(
            "constancy scan needs at least 2 flags, got {}",
            flags.len()
        )));
    }
    let values: Vec<Option<f64>> = flags
        .par_iter()
        .map(|flag| match flag_curvature(randers, flag) {
            Ok(k) => Ok(Some(k)),
            Err(GeomError::DegenerateFlag(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let valid: Vec<f64> = values.iter().flatten().copied().collect();
    if valid.is_empty() {
        return Err(GeomError::AllFlagsDegenerate);
    }
    let min = valid.iter().copied().fold(f64::INFINITY, f64::min);
    let max = valid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(FlagScan {
        values,
        min,
        max,
        spread: max - min,
    })
}

/// Margin on the wind norm for admissible sample points.
pub const WIND_MARGIN: f64 = 0.95;

/// Draws base points from the ball of the given radius, keeping those with
/// `|V|_g < margin`. Gives up after `100 · n` draws, so the result may be
/// shorter than `n` (empty when the domain is practically unreachable).
pub fn admissible_points<M: MetricField, V: VectorField, G: Rng>(
    nav: &NavigationData<M, V>,
    rng: &mut G,
    n: usize,
    radius: f64,
    margin: f64,
) -> Vec<Point4> {
    let mut out = Vec::with_capacity(n);
    let mut draws = 0;
    while out.len() < n && draws < 100 * n.max(1) {
        draws += 1;
        let x = ball_point(rng, radius);
        if wind_norm_direct(nav, &x).is_ok_and(|w| w.sqrt() < margin) {
            out.push(x);
        }
    }
    out
}

/// `(x, y)` pairs with admissible `x` and `y` uniform on the Euclidean unit
/// sphere.
pub fn sample_flagpoles<M: MetricField, V: VectorField, G: Rng>(
    nav: &NavigationData<M, V>,
    rng: &mut G,
    n: usize,
    radius: f64,
) -> Vec<(Point4, [f64; 4])> {
    admissible_points(nav, rng, n, radius, WIND_MARGIN)
        .into_iter()
        .map(|x| (x, unit_vector(rng)))
        .collect()
}

/// Flags with admissible base point and random unit `y`, `u`.
pub fn sample_flags<M: MetricField, V: VectorField, G: Rng>(
    nav: &NavigationData<M, V>,
    rng: &mut G,
    n: usize,
    radius: f64,
) -> Vec<Flag> {
    admissible_points(nav, rng, n, radius, WIND_MARGIN)
        .into_iter()
        .map(|x| {
            let y = unit_vector(rng);
            let u = unit_vector(rng);
            Flag { x, y, u }
        })
        .collect()
}

//! Truncated Taylor arithmetic.
//!
//! Two carriers are provided:
//!
//! - [`Jet3`] stores a value with all partial derivatives up to total order 3
//!   over `N` independent variables, inline and `Copy`.
//! - [`Jet2`] stores derivatives up to order 2 with a generic coefficient
//!   type. Nesting `Jet2<Jet2<f64, N>, N>` yields every mixed partial up to
//!   total order 4, which is what the Finsler curvature operator consumes
//!   (second derivatives of a spray that itself contains second derivatives
//!   of `F²`).
//!
//! All derivative slots hold true partial derivatives, not Taylor
//! coefficients, so `h[i][j]` is `∂²f/∂z^i∂z^j`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar type that generic field code is evaluated with.
///
/// `f64` is the plain evaluation; jets carry derivatives alongside.
pub trait Real:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(c: f64) -> Self;

    /// Primal (underived) value.
    fn re(&self) -> f64;

    fn sqrt(self) -> Self;

    fn recip(self) -> Self;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn one() -> Self {
        Self::constant(1.0)
    }

    fn square(self) -> Self {
        self.clone() * self
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Real for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }
}

// ---------------------------------------------------------------------------
// Jet3
// ---------------------------------------------------------------------------

/// Value plus exact partial derivatives of total order ≤ 3 in `N` variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet3<const N: usize> {
    pub v: f64,
    pub g: [f64; N],
    pub h: [[f64; N]; N],
    pub t: [[[f64; N]; N]; N],
}

impl<const N: usize> Jet3<N> {
    pub fn constant(v: f64) -> Self {
        Jet3 {
            v,
            g: [0.0; N],
            h: [[0.0; N]; N],
            t: [[[0.0; N]; N]; N],
        }
    }

    /// Independent variable `index` with value `v`.
    pub fn variable(v: f64, index: usize) -> Self {
        assert!(index < N, "variable index {index} out of range for {N} variables");
        let mut j = Self::constant(v);
        j.g[index] = 1.0;
        j
    }

    /// Seeds all `N` coordinates of `point` as independent variables.
    pub fn seed(point: &[f64; N]) -> [Self; N] {
        std::array::from_fn(|i| Self::variable(point[i], i))
    }

    /// Applies a scalar function given its value and first three derivatives
    /// at the primal point.
    fn compose(&self, d0: f64, d1: f64, d2: f64, d3: f64) -> Self {
        let a = self;
        let mut out = Self::constant(d0);
        for i in 0..N {
            out.g[i] = d1 * a.g[i];
        }
        for i in 0..N {
            for j in 0..N {
                out.h[i][j] = d1 * a.h[i][j] + d2 * a.g[i] * a.g[j];
            }
        }
        for i in 0..N {
            for j in 0..N {
                for k in 0..N {
                    out.t[i][j][k] = d1 * a.t[i][j][k]
                        + d2 * (a.h[i][j] * a.g[k] + a.h[i][k] * a.g[j] + a.h[j][k] * a.g[i])
                        + d3 * a.g[i] * a.g[j] * a.g[k];
                }
            }
        }
        out
    }

    fn scale(mut self, c: f64) -> Self {
        self.v *= c;
        self.g.iter_mut().for_each(|x| *x *= c);
        self.h.iter_mut().flatten().for_each(|x| *x *= c);
        self.t.iter_mut().flatten().flatten().for_each(|x| *x *= c);
        self
    }
}

impl<const N: usize> Add for Jet3<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.v += rhs.v;
        for i in 0..N {
            self.g[i] += rhs.g[i];
            for j in 0..N {
                self.h[i][j] += rhs.h[i][j];
                for k in 0..N {
                    self.t[i][j][k] += rhs.t[i][j][k];
                }
            }
        }
        self
    }
}

impl<const N: usize> Neg for Jet3<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Sub for Jet3<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Mul for Jet3<N> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = &self;
        let mut out = Self::constant(a.v * b.v);
        for i in 0..N {
            out.g[i] = a.v * b.g[i] + a.g[i] * b.v;
        }
        for i in 0..N {
            for j in 0..N {
                out.h[i][j] = a.v * b.h[i][j] + a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i];
            }
        }
        for i in 0..N {
            for j in 0..N {
                for k in 0..N {
                    out.t[i][j][k] = a.v * b.t[i][j][k]
                        + a.t[i][j][k] * b.v
                        + a.h[i][j] * b.g[k]
                        + a.h[i][k] * b.g[j]
                        + a.h[j][k] * b.g[i]
                        + a.g[i] * b.h[j][k]
                        + a.g[j] * b.h[i][k]
                        + a.g[k] * b.h[i][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Div for Jet3<N> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<const N: usize> Add<f64> for Jet3<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.v += rhs;
        self
    }
}

impl<const N: usize> Sub<f64> for Jet3<N> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.v -= rhs;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet3<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Div<f64> for Jet3<N> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(1.0 / rhs)
    }
}

impl<const N: usize> Real for Jet3<N> {
    fn constant(c: f64) -> Self {
        Jet3::constant(c)
    }
    fn re(&self) -> f64 {
        self.v
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let d1 = 0.5 / s;
        let d2 = -0.25 / (s * self.v);
        let d3 = 0.375 / (s * self.v * self.v);
        self.compose(s, d1, d2, d3)
    }
    fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r)
    }
}

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

/// Value plus exact first and second partial derivatives in `N` variables,
/// with coefficients of any [`Real`] type.
///
/// Storage is a single heap buffer `[v, g_0..g_N, h_00..h_NN]` so that the
/// nested form stays off the stack.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<S, const N: usize> {
    c: Vec<S>,
}

impl<S: Real, const N: usize> Jet2<S, N> {
    const LEN: usize = 1 + N + N * N;

    fn from_fn(mut f: impl FnMut(usize) -> S) -> Self {
        Jet2 {
            c: (0..Self::LEN).map(&mut f).collect(),
        }
    }

    pub fn lift(v: S) -> Self {
        let mut c = Vec::with_capacity(Self::LEN);
        c.push(v);
        c.resize(Self::LEN, S::zero());
        Jet2 { c }
    }

    /// Independent variable `index` with value `v`.
    pub fn variable(v: S, index: usize) -> Self {
        assert!(index < N, "variable index {index} out of range for {N} variables");
        let mut j = Self::lift(v);
        j.c[1 + index] = S::one();
        j
    }

    pub fn value(&self) -> &S {
        &self.c[0]
    }

    pub fn grad(&self, i: usize) -> &S {
        &self.c[1 + i]
    }

    pub fn hess(&self, i: usize, j: usize) -> &S {
        &self.c[1 + N + i * N + j]
    }

    /// Applies `f` to every stored coefficient (value, gradient, Hessian).
    pub fn map<T: Real>(&self, f: impl Fn(&S) -> T) -> Jet2<T, N> {
        Jet2 {
            c: self.c.iter().map(f).collect(),
        }
    }

    fn compose(&self, d0: S, d1: S, d2: S) -> Self {
        let gi = |i: usize| self.grad(i).clone();
        Self::from_fn(|idx| {
            if idx == 0 {
                d0.clone()
            } else if idx <= N {
                d1.clone() * gi(idx - 1)
            } else {
                let (i, j) = ((idx - 1 - N) / N, (idx - 1 - N) % N);
                d1.clone() * self.hess(i, j).clone() + d2.clone() * gi(i) * gi(j)
            }
        })
    }
}

impl<const N: usize> Jet2<f64, N> {
    pub fn seed(point: &[f64; N]) -> [Self; N] {
        std::array::from_fn(|i| Self::variable(point[i], i))
    }
}

impl<const N: usize> Jet2<Jet2<f64, N>, N> {
    /// Seeds a nested jet: each coordinate is a variable in both the inner
    /// and the outer layer, so inner derivatives can be extracted as outer
    /// jets and differentiated again.
    pub fn seed_nested(point: &[f64; N]) -> [Self; N] {
        std::array::from_fn(|i| {
            let mut j = Self::lift(Jet2::variable(point[i], i));
            j.c[1 + i] = Jet2::constant(1.0);
            j
        })
    }
}

impl<S: Real, const N: usize> Add for Jet2<S, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a = a.clone() + b;
        }
        self
    }
}

impl<S: Real, const N: usize> Sub for Jet2<S, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a = a.clone() - b;
        }
        self
    }
}

impl<S: Real, const N: usize> Neg for Jet2<S, N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.c.iter_mut() {
            *a = -a.clone();
        }
        self
    }
}

impl<S: Real, const N: usize> Mul for Jet2<S, N> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = &self;
        Self::from_fn(|idx| {
            if idx == 0 {
                a.value().clone() * b.value().clone()
            } else if idx <= N {
                let i = idx - 1;
                a.value().clone() * b.grad(i).clone() + a.grad(i).clone() * b.value().clone()
            } else {
                let (i, j) = ((idx - 1 - N) / N, (idx - 1 - N) % N);
                a.value().clone() * b.hess(i, j).clone()
                    + a.hess(i, j).clone() * b.value().clone()
                    + a.grad(i).clone() * b.grad(j).clone()
                    + a.grad(j).clone() * b.grad(i).clone()
            }
        })
    }
}

impl<S: Real, const N: usize> Div for Jet2<S, N> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<S: Real, const N: usize> Add<f64> for Jet2<S, N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.c[0] = self.c[0].clone() + rhs;
        self
    }
}

impl<S: Real, const N: usize> Sub<f64> for Jet2<S, N> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.c[0] = self.c[0].clone() - rhs;
        self
    }
}

impl<S: Real, const N: usize> Mul<f64> for Jet2<S, N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.c.iter_mut() {
            *a = a.clone() * rhs;
        }
        self
    }
}

impl<S: Real, const N: usize> Div<f64> for Jet2<S, N> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl<S: Real, const N: usize> Real for Jet2<S, N> {
    fn constant(c: f64) -> Self {
        Self::lift(S::constant(c))
    }
    fn re(&self) -> f64 {
        self.value().re()
    }
    fn sqrt(self) -> Self {
        let v = self.value().clone();
        let s = v.clone().sqrt();
        let d1 = s.clone().recip() * 0.5;
        let d2 = -(d1.clone() / v) * 0.5;
        self.compose(s, d1, d2)
    }
    fn recip(self) -> Self {
        let r = self.value().clone().recip();
        let d1 = -(r.clone() * r.clone());
        let d2 = r.clone() * r.clone() * r.clone() * 2.0;
        self.compose(r, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<T: Real>(x: &[T; 2]) -> T {
        // x^3 y + 2 x y^2
        x[0].clone().powi(3) * x[1].clone() + x[0].clone() * x[1].clone().square() * 2.0
    }

    #[test]
    fn jet3_polynomial_derivatives() {
        let p = Jet3::<2>::seed(&[1.5, -0.5]);
        let f = poly(&p);
        let (x, y) = (1.5, -0.5);
        assert_eq!(f.v, x * x * x * y + 2.0 * x * y * y);
        assert!((f.g[0] - (3.0 * x * x * y + 2.0 * y * y)).abs() < 1e-14);
        assert!((f.g[1] - (x * x * x + 4.0 * x * y)).abs() < 1e-14);
        assert!((f.h[0][0] - 6.0 * x * y).abs() < 1e-14);
        assert!((f.h[0][1] - (3.0 * x * x + 4.0 * y)).abs() < 1e-14);
        assert!((f.t[0][0][0] - 6.0 * y).abs() < 1e-14);
        assert!((f.t[0][0][1] - 6.0 * x).abs() < 1e-14);
        assert!((f.t[0][1][1] - 4.0).abs() < 1e-14);
        assert_eq!(f.t[1][1][1], 0.0);
    }

    #[test]
    fn jet3_sqrt_and_recip_chain_rule() {
        let x = Jet3::<1>::variable(4.0, 0);
        let s = x.sqrt();
        assert!((s.v - 2.0).abs() < 1e-15);
        assert!((s.g[0] - 0.25).abs() < 1e-15);
        assert!((s.h[0][0] + 1.0 / 32.0).abs() < 1e-15);
        assert!((s.t[0][0][0] - 3.0 / 256.0).abs() < 1e-15);
        let r = x.recip();
        assert!((r.g[0] + 1.0 / 16.0).abs() < 1e-15);
        assert!((r.h[0][0] - 2.0 / 64.0).abs() < 1e-15);
        assert!((r.t[0][0][0] + 6.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn jet2_matches_jet3_on_quotient() {
        let pt = [0.7, -1.2];
        let f3 = {
            let p = Jet3::<2>::seed(&pt);
            (p[0] * p[1] + 3.0) / (p[0] * p[0] + 1.0).sqrt()
        };
        let f2 = {
            let p = Jet2::<f64, 2>::seed(&pt);
            (p[0].clone() * p[1].clone() + 3.0) / (p[0].clone() * p[0].clone() + 1.0).sqrt()
        };
        assert!((f3.v - f2.value()).abs() < 1e-15);
        for i in 0..2 {
            assert!((f3.g[i] - f2.grad(i)).abs() < 1e-14);
            for j in 0..2 {
                assert!((f3.h[i][j] - f2.hess(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn nested_jet_reaches_fourth_order() {
        // f = x^2 y^2 → ∂⁴f/∂x²∂y² = 4
        let p = Jet2::<Jet2<f64, 2>, 2>::seed_nested(&[0.3, 0.8]);
        let f = p[0].clone().square() * p[1].clone().square();
        let inner_xy = f.map(|s| *s.hess(0, 1));
        // ∂²/∂x∂y of (∂²f/∂x∂y = 4xy) = 4
        assert!((inner_xy.hess(0, 1) - 4.0).abs() < 1e-14);
        let inner_xx = f.map(|s| *s.hess(0, 0));
        // ∂²/∂y² of (2 y^2) = 4
        assert!((inner_xx.hess(1, 1) - 4.0).abs() < 1e-14);
        assert!((inner_xx.value() - 2.0 * 0.64).abs() < 1e-15);
        assert_eq!(*inner_xx.hess(0, 0), 0.0);
    }

    #[test]
    fn constant_has_exactly_zero_derivatives() {
        let c = Jet3::<3>::constant(7.0) * Jet3::<3>::constant(2.0);
        assert!(c.g.iter().all(|&x| x == 0.0));
        assert!(c.t.iter().flatten().flatten().all(|&x| x == 0.0));
    }
}

use crate::error::{GeomError, Result};

/// A point of R⁴ with finite coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4([f64; 4]);

impl Point4 {
    pub const ORIGIN: Point4 = Point4([0.0; 4]);

    pub fn new(x: [f64; 4]) -> Result<Self> {
        if x.iter().all(|c| c.is_finite()) {
            Ok(Point4(x))
        } else {
            Err(GeomError::NonFinite(x.to_vec()))
        }
    }

    pub fn coords(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `|x|_k^k = Σ |x^i|^k`
    pub fn pnorm_pow(&self, k: i32) -> f64 {
        self.0.iter().map(|c| c.abs().powi(k)).sum()
    }

    pub fn scaled(&self, s: f64) -> Point4 {
        Point4(self.0.map(|c| c * s))
    }
}

impl TryFrom<[f64; 4]> for Point4 {
    type Error = GeomError;
    fn try_from(x: [f64; 4]) -> Result<Self> {
        Point4::new(x)
    }
}

//! Small dense linear algebra: 4×4 symmetric forms, generic 4×4 solves that
//! work on jets, symmetric eigenvalues and an SVD-based nullspace.

use super::jet::Real;
use crate::error::{GeomError, Result};

pub type Mat4<T> = [[T; 4]; 4];

/// Symmetric 4×4 real matrix. Construction enforces exact symmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym4([[f64; 4]; 4]);

impl Sym4 {
    /// Accepts `m` only if `m[i][j] == m[j][i]` bit-for-bit.
    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                if !m[i][j].is_finite() {
                    return Err(GeomError::NonFinite(m[i].to_vec()));
                }
                if m[i][j] != m[j][i] {
                    return Err(GeomError::InvalidInput(format!(
                        "matrix not symmetric at ({i},{j}): {} vs {}",
                        m[i][j], m[j][i]
                    )));
                }
            }
        }
        Ok(Sym4(m))
    }

    /// Builds from the upper triangle of `m`, mirroring it below the diagonal.
    pub fn from_upper(m: [[f64; 4]; 4]) -> Self {
        Sym4(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i <= j { m[i][j] } else { m[j][i] })
        }))
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        Sym4(m)
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    /// `uᵀ M v`
    pub fn bilinear(&self, u: &[f64; 4], v: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += u[i] * self.0[i][j] * v[j];
            }
        }
        s
    }

    pub fn apply(&self, v: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * v[j]).sum())
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    /// All leading principal minors strictly positive.
    pub fn is_positive_definite(&self) -> bool {
        (1..=4).all(|k| {
            let mut sub = [[0.0; 4]; 4];
            for i in 0..k {
                for j in 0..k {
                    sub[i][j] = self.0[i][j];
                }
            }
            determinant(&sub, k) > 0.0
        })
    }

    /// Eigenvalues in ascending order (cyclic Jacobi).
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut a = self.0;
        for _sweep in 0..64 {
            let off: f64 = (0..4)
                .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off <= 1e-300 {
                break;
            }
            for p in 0..3 {
                for q in p + 1..4 {
                    if a[p][q] == 0.0 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..4 {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..4 {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev = [a[0][0], a[1][1], a[2][2], a[3][3]];
        ev.sort_by(|x, y| x.total_cmp(y));
        ev
    }
}

fn determinant(m: &[[f64; 4]; 4], k: usize) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            for c in col..k {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

pub fn max_abs(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn mat_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

/// Inverse of a positive-definite form.
///
/// Rejected as singular when the smallest eigenvalue magnitude falls below
/// `1e-12` times the largest.
pub fn invert_sym4(m: &Sym4) -> Result<Sym4> {
    let ev = m.eigenvalues();
    let largest = ev.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let smallest = ev.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
    if largest == 0.0 || smallest < 1e-12 * largest {
        return Err(GeomError::Singular {
            ratio: if largest == 0.0 { 0.0 } else { smallest / largest },
        });
    }
    let inv = invert4(m.entries())?;
    Ok(Sym4::from_upper(inv))
}

/// Gauss–Jordan inverse with partial pivoting on primal values. Works for
/// any [`Real`], so derivatives of the inverse come out of the same pass.
pub fn invert4<T: Real>(m: &Mat4<T>) -> Result<Mat4<T>> {
    let mut a: Mat4<T> = m.clone();
    let mut inv: Mat4<T> =
        std::array::from_fn(|i| std::array::from_fn(|j| T::constant(if i == j { 1.0 } else { 0.0 })));
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.re().abs()));
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| a[i][col].re().abs().total_cmp(&a[j][col].re().abs()))
            .unwrap();
        let p = a[piv][col].re();
        if !(p.abs() > 1e-300) || p.abs() < 1e-14 * scale {
            return Err(GeomError::Singular {
                ratio: p.abs() / scale.max(1e-300),
            });
        }
        a.swap(piv, col);
        inv.swap(piv, col);
        let r = a[col][col].clone().recip();
        for c in 0..4 {
            a[col][c] = a[col][c].clone() * r.clone();
            inv[col][c] = inv[col][c].clone() * r.clone();
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let f = a[row][col].clone();
            for c in 0..4 {
                a[row][c] = a[row][c].clone() - f.clone() * a[col][c].clone();
                inv[row][c] = inv[row][c].clone() - f.clone() * inv[col][c].clone();
            }
        }
    }
    Ok(inv)
}

/// Dense row-major real matrix for the nullspace solver.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GeomError::InvalidInput("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Singular values and right singular vectors from one-sided Jacobi.
///
/// Returns `(sigma, v)` where `v[j]` is the right singular vector paired with
/// `sigma[j]`. All `cols` vectors are returned even when `rows < cols`, so
/// the kernel of a wide matrix is complete.
pub fn right_singular_system(m: &Matrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut u: Vec<Vec<f64>> = (0..cols).map(|c| (0..rows).map(|r| m.get(r, c)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|c| (0..cols).map(|r| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let (a, b) = (u[p][k], u[q][k]);
                    u[p][k] = c * a - s * b;
                    u[q][k] = s * a + c * b;
                }
                for k in 0..cols {
                    let (a, b) = (v[p][k], v[q][k]);
                    v[p][k] = c * a - s * b;
                    v[q][k] = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = u.iter().map(|col| dot(col, col).sqrt()).collect();
    (sigma, v)
}

/// Orthonormal basis of the kernel of `system`.
///
/// A right singular vector belongs to the kernel when its singular value is
/// at most `tolerance` times the largest singular value (every vector counts
/// when the matrix is zero).
pub fn nullspace(system: &Matrix, tolerance: f64) -> Vec<Vec<f64>> {
    let (sigma, v) = right_singular_system(system);
    let largest = sigma.iter().fold(0.0f64, |a, &s| a.max(s));
    let mut basis: Vec<(usize, Vec<f64>)> = sigma
        .iter()
        .zip(v)
        .enumerate()
        .filter(|(_, (s, _))| largest == 0.0 || **s <= tolerance * largest)
        .map(|(j, (_, vec))| (j, vec))
        .collect();
    basis.sort_by_key(|(j, _)| *j);
    basis.into_iter().map(|(_, v)| v).collect()
}

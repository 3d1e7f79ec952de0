//! Double-precision complex mirror of [`RatMatrix`] used by the path tracker.

use num_complex::Complex64;
use num_traits::Zero;

use super::matrix::RatMatrix;
use super::rational::to_f64;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CplxMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CplxMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rat(m: &RatMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|r| Complex64::new(to_f64(r), 0.0)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Complex bilinear form `vᵀ M v` (no conjugation).
    pub fn bilinear(&self, v: &[Complex64]) -> Complex64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// Solves `a x = b` in place by LU with partial pivoting. Returns `false`
/// when a pivot underflows (numerically singular matrix).
pub fn lu_solve<const N: usize>(a: &mut [[Complex64; N]; N], b: &mut [Complex64; N]) -> bool {
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return false;
    }
    for col in 0..N {
        let (p, best) = (col..N)
            .map(|r| (r, a[r][col].norm()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= scale * 1e-300 {
            return false;
        }
        a.swap(col, p);
        b.swap(col, p);
        let pivot = a[col][col];
        for r in col + 1..N {
            let factor = a[r][col] / pivot;
            if factor.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= factor * p;
            }
            let delta = factor * b[col];
            b[r] -= delta;
        }
    }
    for row in (0..N).rev() {
        let mut acc = b[row];
        for c in row + 1..N {
            acc -= a[row][c] * b[c];
        }
        b[row] = acc / a[row][row];
    }
    b.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// 1-norm condition number estimate `‖A‖₁ ‖A⁻¹‖₁` via the explicit inverse.
pub fn condition_number<const N: usize>(a: &[[Complex64; N]; N]) -> f64 {
    let norm1 = |m: &[[Complex64; N]; N]| {
        (0..N)
            .map(|c| (0..N).map(|r| m[r][c].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut inv = [[Complex64::zero(); N]; N];
    for c in 0..N {
        let mut lu = *a;
        let mut e = [Complex64::zero(); N];
        e[c] = Complex64::new(1.0, 0.0);
        if !lu_solve(&mut lu, &mut e) {
            return f64::INFINITY;
        }
        for r in 0..N {
            inv[r][c] = e[r];
        }
    }
    norm1(a) * norm1(&inv)
}

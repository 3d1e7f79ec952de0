use std::fmt;
use std::ops::Index;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, serde_rows, Rational};
use super::subsets;
use crate::error::{Error, Result};

/// Dense row-major matrix over exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Exact description of the solution set of `a * x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    Unique(RatMatrix),
    /// `x = particular + nullspace combination` (columns of `b` share the basis).
    Family {
        particular: RatMatrix,
        nullspace: Vec<Vec<Rational>>,
    },
    Inconsistent,
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.pos as i64 - self.neg as i64
    }

    pub fn rank(&self) -> usize {
        self.pos + self.neg
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("well-formed integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diag(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn column_vector(values: Vec<Rational>) -> Self {
        let n = values.len();
        Self {
            rows: n,
            cols: 1,
            entries: values,
        }
    }

    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        if r == 0 || c == 0 {
            return Err(Error::Dimension("empty column set".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if !a.is_zero() {
                        acc += a * other.get(l, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `vᵀ M v` for square `M`.
    pub fn quadratic_form(&self, v: &[Rational]) -> Result<Rational> {
        let mv = self.mul_vec(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack needs equal row counts".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack needs equal column counts".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Exact determinant by Gaussian elimination with nonzero pivoting.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &pivot;
                let (top, bottom) = a.split_at_mut(r);
                for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= &factor * p;
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form and the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(p, row);
            let inv = a[row][col].recip();
            for v in a[row].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = a[row].clone();
            for (r, target) in a.iter_mut().enumerate() {
                if r == row || target[col].is_zero() {
                    continue;
                }
                let factor = target[col].clone();
                for (x, p) in target.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let m = Self::from_rows(a).expect("rref preserves shape");
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        match solve_linear(self, &Self::identity(self.rows))? {
            LinearSolution::Unique(x) if self.is_square() => Ok(x),
            _ => Err(Error::Dimension("matrix is not invertible".into())),
        }
    }

    /// Matrix of all `r`x`r` minors, rows and columns indexed by `r`-subsets
    /// in lexicographic order.
    pub fn exterior_power(&self, r: usize) -> Result<Self> {
        if r == 0 || r > self.rows.min(self.cols) {
            return Err(Error::Dimension(format!(
                "exterior power {r} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let row_sets = subsets(self.rows, r);
        let col_sets = subsets(self.cols, r);
        let mut out = Self::zeros(row_sets.len(), col_sets.len());
        for (a, rs) in row_sets.iter().enumerate() {
            for (b, cs) in col_sets.iter().enumerate() {
                let minor = self.submatrix(rs, cs).det()?;
                out.set(a, b, minor);
            }
        }
        Ok(out)
    }

    /// Inertia of a symmetric matrix via symmetric-pivoted LDLᵀ. When only
    /// zero diagonal entries remain in a nonzero Schur complement, the rest
    /// is counted from the characteristic polynomial.
    pub fn signature(&self) -> Result<Inertia> {
        if !self.is_square() {
            return Err(Error::Dimension("signature of a non-square matrix".into()));
        }
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let mut a = self.to_rows();
        let mut active: Vec<usize> = (0..self.rows).collect();
        let mut inertia = Inertia {
            pos: 0,
            neg: 0,
            zero: 0,
        };
        while !active.is_empty() {
            let Some(slot) = active.iter().position(|&i| !a[i][i].is_zero()) else {
                if active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero())) {
                    inertia.zero += active.len();
                } else {
                    let block = Self::from_rows(
                        active
                            .iter()
                            .map(|&i| active.iter().map(|&j| a[i][j].clone()).collect())
                            .collect(),
                    )?;
                    let rest = signature_by_char_poly(&block)?;
                    inertia.pos += rest.pos;
                    inertia.neg += rest.neg;
                    inertia.zero += rest.zero;
                }
                break;
            };
            let p = active.remove(slot);
            let d = a[p][p].clone();
            if d.is_positive() {
                inertia.pos += 1;
            } else {
                inertia.neg += 1;
            }
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let factor = &a[i][p] / &d;
                for &j in &active {
                    let delta = &factor * &a[p][j];
                    a[i][j] -= delta;
                }
            }
        }
        Ok(inertia)
    }
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`) by
/// the Faddeev–LeVerrier recurrence.
pub fn char_poly(m: &RatMatrix) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::Dimension(
            "characteristic polynomial of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = mk.add(&RatMatrix::identity(n).scale(&coeffs[n + 1 - k]))?;
        mk = m.matmul(&shifted)?;
        let trace: Rational = (0..n).map(|i| mk.get(i, i).clone()).sum();
        coeffs[n - k] = -trace / int(k as i64);
    }
    Ok(coeffs)
}

/// Inertia from Descartes' rule of signs on the characteristic polynomial,
/// exact because a symmetric matrix has only real eigenvalues.
pub fn signature_by_char_poly(m: &RatMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let coeffs = char_poly(m)?;
    let zero = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let sign_changes = |cs: &[Rational]| {
        let signs: Vec<bool> = cs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let pos = sign_changes(&coeffs);
    let flipped: Vec<Rational> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    let neg = sign_changes(&flipped);
    Ok(Inertia { pos, neg, zero })
}

pub fn solve_linear(a: &RatMatrix, b: &RatMatrix) -> Result<LinearSolution> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "system with {} rows but right-hand side with {}",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let aug = a.hstack(b)?;
    let (r, pivots) = aug.rref();
    if pivots.iter().any(|&p| p >= n) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = RatMatrix::zeros(n, b.cols());
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            particular.set(p, j, r.get(i, n + j).clone());
        }
    }
    if pivots.len() == n {
        Ok(LinearSolution::Unique(particular))
    } else {
        Ok(LinearSolution::Family {
            particular,
            nullspace: a.nullspace(),
        })
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{self}")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rows::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = serde_rows::deserialize(d)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

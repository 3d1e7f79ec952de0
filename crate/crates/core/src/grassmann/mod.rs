//! Plücker and dual Plücker coordinates of k-planes in projective n-space.
//!
//! Coordinates are indexed by `(k+1)`-subsets of `{0..n}` in lexicographic
//! order (see [`crate::exactnum::subsets`]).

mod counts;
mod moment;
mod surd;
mod transversals;

use std::ops::Neg;

use num_complex::Complex64;
use num_traits::{Num, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, parse_rational};
use crate::exactnum::{parse_subset_label, subset_label, subsets, RatMatrix, Rational};

pub use counts::{catalan, counts, Counts};
pub use moment::{moment_curve_derivative, moment_osculating_flat};
pub use surd::{QuadraticPlucker, Surd};
pub use transversals::{transversals_to_4_lines, Transversal, Transversals};

/// Projective coordinates of a k-plane in Pⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct PluckerVector<T = Rational> {
    k: usize,
    n: usize,
    coords: Vec<T>,
}

pub type ComplexPlucker = PluckerVector<Complex64>;

impl<T> PluckerVector<T> {
    pub fn new(k: usize, n: usize, coords: Vec<T>) -> Result<Self> {
        if k >= n {
            return Err(Error::Dimension(format!("{k}-planes do not live in P^{n}")));
        }
        let expected = subsets(n + 1, k + 1).len();
        if coords.len() != expected {
            return Err(Error::Dimension(format!(
                "G({k},{n}) has {expected} Plücker coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Self { k, n, coords })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        subsets(self.n + 1, self.k + 1)
    }

    /// Coordinate for a sorted index set.
    pub fn get(&self, subset: &[usize]) -> Option<&T> {
        self.index_sets()
            .iter()
            .position(|s| s == subset)
            .map(|i| &self.coords[i])
    }
}

/// Sorts an index tuple, returning the permutation sign, or `None` when an
/// index repeats (the skew-symmetric coordinate vanishes).
pub(crate) fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = tuple.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

impl<T: Clone + Num + Neg<Output = T>> PluckerVector<T> {
    /// Skew-symmetric access by an arbitrary ordered index tuple.
    pub fn signed(&self, tuple: &[usize]) -> T {
        match sort_with_sign(tuple) {
            None => T::zero(),
            Some((sorted, odd)) => {
                let v = self.get(&sorted).cloned().unwrap_or_else(T::zero);
                if odd {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Values of every quadratic Plücker relation
    /// `Σ_l (-1)^l p[I∖i_l] p[J,i_l]` over `|I| = k+2`, `|J| = k`.
    pub fn relation_values(&self) -> Vec<T> {
        let k = self.k;
        let mut out = Vec::new();
        for big in subsets(self.n + 1, k + 2) {
            for small in subsets(self.n + 1, k) {
                let mut acc = T::zero();
                for (l, &il) in big.iter().enumerate() {
                    let without: Vec<usize> = big
                        .iter()
                        .enumerate()
                        .filter(|&(m, _)| m != l)
                        .map(|(_, &i)| i)
                        .collect();
                    let mut with = small.clone();
                    with.push(il);
                    let term = self.signed(&without) * self.signed(&with);
                    // l is 0-based here, so (-1)^(l+1).
                    if l % 2 == 0 {
                        acc = acc - term;
                    } else {
                        acc = acc + term;
                    }
                }
                out.push(acc);
            }
        }
        out
    }

    /// Columns spanning the plane, recovered from a decomposable vector by
    /// expanding around the first nonzero coordinate.
    pub fn span_columns(&self) -> Result<Vec<Vec<T>>> {
        let sets = self.index_sets();
        let (pivot, base) = self
            .coords
            .iter()
            .zip(&sets)
            .find(|(c, _)| !c.is_zero())
            .ok_or_else(|| Error::DegenerateFlat("zero Plücker vector".into()))?;
        Ok((0..base.len())
            .map(|j| {
                (0..=self.n)
                    .map(|i| {
                        let mut tuple = base.clone();
                        tuple[j] = i;
                        self.signed(&tuple) / pivot.clone()
                    })
                    .collect()
            })
            .collect())
    }
}

impl PluckerVector<Rational> {
    /// Scales so that the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Result<Self> {
        let lead = self
            .coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| Error::DegenerateFlat("zero Plücker vector".into()))?;
        Ok(Self {
            k: self.k,
            n: self.n,
            coords: self.coords.iter().map(|c| c / &lead).collect(),
        })
    }

    pub fn to_complex(&self) -> ComplexPlucker {
        PluckerVector {
            k: self.k,
            n: self.n,
            coords: self
                .coords
                .iter()
                .map(|c| Complex64::new(crate::exactnum::rational::to_f64(c), 0.0))
                .collect(),
        }
    }

    pub fn is_proportional(&self, other: &Self) -> bool {
        match (self.normalized(), other.normalized()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn span(&self) -> Result<ProjFlat> {
        ProjFlat::new(RatMatrix::from_columns(&self.span_columns()?)?)
    }
}

impl ComplexPlucker {
    /// Unit Euclidean norm with the largest-magnitude coordinate rotated to
    /// be real and positive.
    pub fn normalized(&self) -> Self {
        Self {
            k: self.k,
            n: self.n,
            coords: normalize_complex(&self.coords),
        }
    }

    /// Largest |relation value| after normalization.
    pub fn relation_residual(&self) -> f64 {
        self.normalized()
            .relation_values()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn normalize_complex(v: &[Complex64]) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let lead = v.iter().copied().fold(
        Complex64::zero(),
        |best, z| if z.norm() > best.norm() { z } else { best },
    );
    if norm == 0.0 || lead.norm() == 0.0 {
        return v.to_vec();
    }
    let phase = lead.conj() / lead.norm();
    v.iter().map(|z| z * phase / norm).collect()
}

/// Distance between two points of projective space after aligning phases:
/// `min_θ ‖u/‖u‖ − e^{iθ} v/‖v‖‖`.
pub fn projective_distance(u: &[Complex64], v: &[Complex64]) -> f64 {
    let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return f64::INFINITY;
    }
    let inner: Complex64 = v.iter().zip(u).map(|(a, b)| a.conj() * b).sum();
    let phase = if inner.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        inner / inner.norm()
    };
    u.iter()
        .zip(v)
        .map(|(a, b)| (a / nu - b * phase / nv).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest absolute Plücker relation value; zero exactly on the Grassmannian.
pub fn check_plucker_relations(p: &PluckerVector<Rational>) -> Rational {
    p.relation_values()
        .into_iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

/// `Σ_I p_I q_I`: vanishes iff the k-plane with coordinates `p` meets the
/// `(n-k-1)`-plane with dual coordinates `q`.
pub fn incidence<T: Clone + Num>(p: &PluckerVector<T>, q: &PluckerVector<T>) -> Result<T> {
    if p.k != q.k || p.n != q.n {
        return Err(Error::Dimension(format!(
            "incidence between G({},{}) and dual G({},{})",
            p.k, p.n, q.k, q.n
        )));
    }
    Ok(p.coords
        .iter()
        .zip(&q.coords)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
}

/// A k-plane in Pⁿ spanned by the columns of an `(n+1)×(k+1)` matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjFlat {
    span: RatMatrix,
}

impl ProjFlat {
    pub fn new(span: RatMatrix) -> Result<Self> {
        if span.cols() > span.rows() || span.rank() != span.cols() {
            return Err(Error::DegenerateFlat(format!(
                "spanning matrix {}x{} is not of full column rank",
                span.rows(),
                span.cols()
            )));
        }
        Ok(Self { span })
    }

    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        Self::new(RatMatrix::from_columns(columns)?)
    }

    /// Affine k-flat through `point` with the given direction vectors, under
    /// `x ↦ (1, x)`.
    pub fn affine(point: &[Rational], directions: &[Vec<Rational>]) -> Result<Self> {
        let mut columns = Vec::with_capacity(directions.len() + 1);
        columns.push(
            std::iter::once(Rational::from_integer(1.into()))
                .chain(point.iter().cloned())
                .collect(),
        );
        for d in directions {
            if d.len() != point.len() {
                return Err(Error::Dimension("direction and point dimensions differ".into()));
            }
            columns.push(std::iter::once(Rational::zero()).chain(d.iter().cloned()).collect());
        }
        Self::from_columns(&columns)
    }

    /// The line through two points of affine space.
    pub fn affine_line_through(a: &[Rational], b: &[Rational]) -> Result<Self> {
        let d: Vec<Rational> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        Self::affine(a, &[d])
    }

    pub fn span(&self) -> &RatMatrix {
        &self.span
    }

    pub fn k(&self) -> usize {
        self.span.cols() - 1
    }

    pub fn n(&self) -> usize {
        self.span.rows() - 1
    }

    /// Defining hyperplanes: a basis of the annihilator of the span.
    pub fn hyperplanes(&self) -> Result<DualFlat> {
        let kernel = self.span.transpose().nullspace();
        DualFlat::new(RatMatrix::from_columns(&kernel)?)
    }
}

/// An `(n-k-1)`-plane given as the intersection of the `k+1` hyperplanes
/// whose coefficient vectors are the columns of `hyperplanes`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualFlat {
    hyperplanes: RatMatrix,
}

impl DualFlat {
    pub fn new(hyperplanes: RatMatrix) -> Result<Self> {
        if hyperplanes.cols() > hyperplanes.rows() || hyperplanes.rank() != hyperplanes.cols() {
            return Err(Error::DegenerateFlat("hyperplanes are not independent".into()));
        }
        Ok(Self { hyperplanes })
    }

    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        Self::new(RatMatrix::from_columns(columns)?)
    }

    pub fn hyperplanes(&self) -> &RatMatrix {
        &self.hyperplanes
    }

    /// Number of hyperplanes minus one: the `k` of the planes this one is
    /// tested against.
    pub fn k(&self) -> usize {
        self.hyperplanes.cols() - 1
    }

    pub fn n(&self) -> usize {
        self.hyperplanes.rows() - 1
    }

    /// The plane itself, as a spanning flat.
    pub fn kernel(&self) -> Result<ProjFlat> {
        let basis = self.hyperplanes.transpose().nullspace();
        ProjFlat::from_columns(&basis)
    }
}

/// Plücker coordinates of a flat, first nonzero coordinate scaled to 1.
pub fn plucker(f: &ProjFlat) -> Result<PluckerVector> {
    let wedge = f.span.exterior_power(f.span.cols())?;
    PluckerVector::new(f.k(), f.n(), wedge.column(0))?.normalized()
}

/// Dual Plücker coordinates from the defining hyperplanes.
pub fn dual_plucker(f: &DualFlat) -> Result<PluckerVector> {
    let wedge = f.hyperplanes.exterior_power(f.hyperplanes.cols())?;
    PluckerVector::new(f.k(), f.n(), wedge.column(0))?.normalized()
}

/// JSON form `{"kind":"span"|"dual","matrix":[[...]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FlatRepr {
    Span { matrix: RatMatrix },
    Dual { matrix: RatMatrix },
}

impl FlatRepr {
    pub fn dual_flat(&self) -> Result<DualFlat> {
        match self {
            FlatRepr::Span { matrix } => ProjFlat::new(matrix.clone())?.hyperplanes(),
            FlatRepr::Dual { matrix } => DualFlat::new(matrix.clone()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            FlatRepr::Span { matrix } | FlatRepr::Dual { matrix } => matrix.rows() - 1,
        }
    }
}

/// JSON form `{"k":1,"n":3,"coords":{"01":"1/2",...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PluckerJson {
    pub k: usize,
    pub n: usize,
    pub coords: std::collections::BTreeMap<String, String>,
}

impl From<&PluckerVector<Rational>> for PluckerJson {
    fn from(p: &PluckerVector<Rational>) -> Self {
        Self {
            k: p.k,
            n: p.n,
            coords: p
                .index_sets()
                .iter()
                .zip(&p.coords)
                .map(|(s, c)| (subset_label(s), format_rational(c)))
                .collect(),
        }
    }
}

impl TryFrom<&PluckerJson> for PluckerVector<Rational> {
    type Error = Error;

    fn try_from(j: &PluckerJson) -> Result<Self> {
        let sets = subsets(j.n + 1, j.k + 1);
        let mut coords = vec![Rational::zero(); sets.len()];
        for (label, value) in &j.coords {
            let set = parse_subset_label(label).ok_or_else(|| Error::Parse(format!("bad index label {label:?}")))?;
            let pos = sets
                .iter()
                .position(|s| *s == set)
                .ok_or_else(|| Error::Parse(format!("index {label:?} out of range")))?;
            coords[pos] = parse_rational(value)?;
        }
        PluckerVector::new(j.k, j.n, coords)
    }
}

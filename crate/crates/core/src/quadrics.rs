//! Quadric hypersurfaces and the exterior-power tangency condition.
//!
//! A k-plane with Plücker vector `p` is (algebraically) tangent to the
//! quadric `xᵀQx = 0` iff `pᵀ (∧^{k+1} Q) p = 0`; this includes planes lying
//! on the quadric, which [`is_tangent`] reports separately.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CplxMatrix, Inertia, RatMatrix, Rational};
use crate::grassmann::{PluckerVector, ProjFlat};

#[derive(Clone, Debug, PartialEq)]
pub struct Quadric {
    matrix: RatMatrix,
    inertia: Inertia,
    label: Option<String>,
}

impl Quadric {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("quadric matrix must be square".into()));
        }
        if matrix.rows() < 2 {
            return Err(Error::Dimension("quadric needs n >= 1".into()));
        }
        let inertia = matrix.signature()?;
        Ok(Self {
            matrix,
            inertia,
            label: None,
        })
    }

    pub fn diagonal(values: &[Rational]) -> Result<Self> {
        Self::new(RatMatrix::diag(values))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n(&self) -> usize {
        self.matrix.rows() - 1
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    pub fn signature(&self) -> i64 {
        self.inertia.signature()
    }

    pub fn rank(&self) -> usize {
        self.inertia.rank()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        self.matrix.quadratic_form(x)
    }
}

/// `∧^{k+1} Q`, the Gram matrix of the tangency condition for k-planes.
pub fn tangency_form(q: &Quadric, k: usize) -> Result<RatMatrix> {
    if k >= q.n() {
        return Err(Error::OutOfRange(format!("k = {k} for a quadric in P^{}", q.n())));
    }
    let form = q.matrix.exterior_power(k + 1)?;
    debug_assert!(form.is_symmetric());
    Ok(form)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyVerdict {
    pub residual: Rational,
    pub tangent: bool,
    /// The plane lies entirely on the quadric.
    pub contained: bool,
}

pub fn is_tangent(q: &Quadric, p: &PluckerVector) -> Result<TangencyVerdict> {
    if p.n() != q.n() {
        return Err(Error::Dimension(format!(
            "plane in P^{} against quadric in P^{}",
            p.n(),
            q.n()
        )));
    }
    let form = tangency_form(q, p.k())?;
    let residual = form.quadratic_form(p.coords())?;
    let tangent = residual.is_zero();
    let contained = tangent && {
        let span = p.span()?;
        span.span()
            .transpose()
            .matmul(&q.matrix)?
            .matmul(span.span())?
            .is_zero()
    };
    Ok(TangencyVerdict {
        residual,
        tangent,
        contained,
    })
}

/// `|pᵀ F p| / (‖F‖_F ‖p‖²)` for a numeric tangency form `F`.
pub fn tangency_residual_numeric(form: &CplxMatrix, p: &[Complex64]) -> f64 {
    let scale = form.frobenius_norm() * p.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if scale == 0.0 {
        return 0.0;
    }
    form.bilinear(p).norm() / scale
}

/// An affine flat `point + span(directions)` in ℝⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFlat {
    point: Vec<Rational>,
    directions: RatMatrix,
}

impl AffineFlat {
    pub fn new(point: Vec<Rational>, directions: &[Vec<Rational>]) -> Result<Self> {
        let directions = RatMatrix::from_columns(directions)?;
        if directions.rows() != point.len() {
            return Err(Error::Dimension("direction and point dimensions differ".into()));
        }
        if directions.rank() != directions.cols() {
            return Err(Error::DegenerateFlat("directions are linearly dependent".into()));
        }
        Ok(Self { point, directions })
    }

    pub fn line_through(a: &[Rational], b: &[Rational]) -> Result<Self> {
        let d: Vec<Rational> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        Self::new(a.to_vec(), &[d])
    }

    pub fn n(&self) -> usize {
        self.point.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.cols()
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn directions(&self) -> &RatMatrix {
        &self.directions
    }

    pub fn to_proj(&self) -> Result<ProjFlat> {
        let dirs: Vec<Vec<Rational>> = (0..self.dim()).map(|j| self.directions.column(j)).collect();
        ProjFlat::affine(&self.point, &dirs)
    }

    /// Orthogonal projector onto the direction space, `D (DᵀD)⁻¹ Dᵀ`.
    pub fn projector(&self) -> Result<RatMatrix> {
        let d = &self.directions;
        let gram_inv = d.transpose().matmul(d)?.inverse()?;
        d.matmul(&gram_inv)?.matmul(&d.transpose())
    }
}

/// Points at Euclidean distance `r` from `u`, homogenized with `x₀`.
pub fn cylinder(u: &AffineFlat, r: &Rational) -> Result<Quadric> {
    if r.is_negative() {
        return Err(Error::OutOfRange("cylinder radius must be non-negative".into()));
    }
    cylinder_squared(u, &(r * r))
}

/// [`cylinder`] parametrized by the squared radius, so radii with
/// irrational square roots stay exact.
pub fn cylinder_squared(u: &AffineFlat, r_squared: &Rational) -> Result<Quadric> {
    if r_squared.is_negative() {
        return Err(Error::OutOfRange("squared radius must be non-negative".into()));
    }
    let n = u.n();
    let normal = RatMatrix::identity(n).sub(&u.projector()?)?;
    let ma = normal.mul_vec(&u.point)?;
    let ama: Rational = u.point.iter().zip(&ma).map(|(x, y)| x * y).sum();
    let mut q = RatMatrix::zeros(n + 1, n + 1);
    q.set(0, 0, ama - r_squared);
    for (i, m) in ma.iter().enumerate() {
        q.set(0, i + 1, -m.clone());
        q.set(i + 1, 0, -m.clone());
        for j in 0..n {
            q.set(i + 1, j + 1, normal.get(i, j).clone());
        }
    }
    Quadric::new(q)
}

/// `-r² x₀² + x₁² + ⋯ + x_{k+1}² + ε(x_{k+2}² + ⋯ + xₙ²)`.
pub fn perturbed_smooth_quadric(k: usize, n: usize, r: &Rational, eps: &Rational) -> Result<Quadric> {
    let tail = vec![eps.clone(); n.saturating_sub(k + 1)];
    perturbed_smooth_quadric_with(k, n, r, &tail)
}

/// As [`perturbed_smooth_quadric`] with an individual coefficient for each
/// of the trailing `n-k-1` coordinates.
pub fn perturbed_smooth_quadric_with(k: usize, n: usize, r: &Rational, tail: &[Rational]) -> Result<Quadric> {
    if k < 1 || k + 2 > n {
        return Err(Error::OutOfRange(format!("need 1 <= k <= n-2, got k={k}, n={n}")));
    }
    if !r.is_positive() {
        return Err(Error::OutOfRange("radius must be positive".into()));
    }
    if tail.len() != n - k - 1 {
        return Err(Error::Dimension(format!(
            "expected {} perturbation coefficients",
            n - k - 1
        )));
    }
    let mut diag = vec![-(r * r)];
    diag.extend(std::iter::repeat_n(Rational::one(), k + 1));
    diag.extend(tail.iter().cloned());
    Quadric::diagonal(&diag)
}

/// Default perturbation size for [`perturbed_smooth_quadric`].
pub fn default_perturbation() -> Rational {
    crate::exactnum::ratio(1, 1000)
}

/// JSON form `{"n":3,"matrix":[[...]],"label":"Q1"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadricJson {
    pub n: usize,
    pub matrix: RatMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Quadric> for QuadricJson {
    fn from(q: &Quadric) -> Self {
        Self {
            n: q.n(),
            matrix: q.matrix.clone(),
            label: q.label.clone(),
        }
    }
}

impl TryFrom<&QuadricJson> for Quadric {
    type Error = Error;

    fn try_from(j: &QuadricJson) -> Result<Self> {
        if j.matrix.rows() != j.n + 1 {
            return Err(Error::Dimension(format!(
                "quadric in P^{} needs a {}x{} matrix",
                j.n,
                j.n + 1,
                j.n + 1
            )));
        }
        let q = Quadric::new(j.matrix.clone())?;
        Ok(match &j.label {
            Some(l) => q.with_label(l.clone()),
            None => q,
        })
    }
}

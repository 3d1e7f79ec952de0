//! Exact arithmetic in a quadratic extension `Q(√d)`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PluckerVector;
use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, serde_str, serde_vec, to_f64};
use crate::exactnum::Rational;

/// `rational + irrational·√radicand`. The radicand is assumed not to be a
/// rational square unless `irrational` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: Rational,
    pub irrational: Rational,
    pub radicand: Rational,
}

impl Surd {
    pub fn from_rational(r: Rational) -> Self {
        Self {
            rational: r,
            irrational: Rational::zero(),
            radicand: Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> Rational {
        if self.irrational.is_zero() {
            other.radicand.clone()
        } else {
            debug_assert!(other.irrational.is_zero() || other.radicand == self.radicand);
            self.radicand.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            rational: &self.rational + &other.rational,
            irrational: &self.irrational + &other.irrational,
            radicand: self.common_radicand(other),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            rational: -&self.rational,
            irrational: -&self.irrational,
            radicand: self.radicand.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.common_radicand(other);
        Self {
            rational: &self.rational * &other.rational + &self.irrational * &other.irrational * &d,
            irrational: &self.rational * &other.irrational + &self.irrational * &other.rational,
            radicand: d,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let norm = &self.rational * &self.rational - &self.irrational * &self.irrational * &self.radicand;
        if norm.is_zero() {
            return Err(Error::Numerical("inverting zero in a quadratic field".into()));
        }
        Ok(Self {
            rational: &self.rational / &norm,
            irrational: -&self.irrational / &norm,
            radicand: self.radicand.clone(),
        })
    }

    pub fn is_real(&self) -> bool {
        self.irrational.is_zero() || !self.radicand.is_negative()
    }

    pub fn to_complex(&self) -> Complex64 {
        let d = to_f64(&self.radicand);
        let root = Complex64::new(d, 0.0).sqrt();
        Complex64::new(to_f64(&self.rational), 0.0) + root * to_f64(&self.irrational)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            write!(f, "{}", format_rational(&self.rational))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                format_rational(&self.rational),
                format_rational(&self.irrational),
                format_rational(&self.radicand)
            )
        }
    }
}

/// Plücker vector with coordinates in `Q(√radicand)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticPlucker {
    pub k: usize,
    pub n: usize,
    #[serde(with = "serde_str")]
    pub radicand: Rational,
    #[serde(with = "serde_vec")]
    pub rational: Vec<Rational>,
    #[serde(with = "serde_vec")]
    pub irrational: Vec<Rational>,
}

impl QuadraticPlucker {
    pub fn from_rational(p: &PluckerVector<Rational>) -> Self {
        Self {
            k: p.k(),
            n: p.n(),
            radicand: Rational::zero(),
            irrational: vec![Rational::zero(); p.coords().len()],
            rational: p.coords().to_vec(),
        }
    }

    pub fn coords(&self) -> Vec<Surd> {
        self.rational
            .iter()
            .zip(&self.irrational)
            .map(|(a, b)| Surd {
                rational: a.clone(),
                irrational: b.clone(),
                radicand: self.radicand.clone(),
            })
            .collect()
    }

    pub fn from_coords(k: usize, n: usize, radicand: Rational, coords: &[Surd]) -> Self {
        Self {
            k,
            n,
            radicand,
            rational: coords.iter().map(|c| c.rational.clone()).collect(),
            irrational: coords.iter().map(|c| c.irrational.clone()).collect(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.is_rational() || !self.radicand.is_negative()
    }

    pub fn to_rational(&self) -> Option<PluckerVector<Rational>> {
        if self.is_rational() {
            PluckerVector::new(self.k, self.n, self.rational.clone()).ok()
        } else {
            None
        }
    }

    /// Scales so that the first nonzero coordinate is exactly 1.
    pub fn normalized(&self) -> Result<Self> {
        let coords = self.coords();
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::DegenerateFlat("zero Plücker vector".into()))?
            .inv()?;
        let scaled: Vec<Surd> = coords.iter().map(|c| c.mul(&lead)).collect();
        Ok(Self::from_coords(self.k, self.n, self.radicand.clone(), &scaled))
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coords().iter().map(Surd::to_complex).collect()
    }

    /// Exact value of `Σ p_I q_I` against rational dual coordinates.
    pub fn incidence(&self, q: &PluckerVector<Rational>) -> Result<Surd> {
        if q.k() != self.k || q.n() != self.n {
            return Err(Error::Dimension("incidence shape mismatch".into()));
        }
        Ok(self
            .coords()
            .iter()
            .zip(q.coords())
            .fold(Surd::from_rational(Rational::zero()), |acc, (p, qi)| {
                acc.add(&p.mul(&Surd::from_rational(qi.clone())))
            }))
    }

    /// Exact values of every Plücker relation.
    pub fn relation_values(&self) -> Vec<Surd> {
        // Relations are bilinear with integer coefficients, so evaluate the
        // rational and irrational parts separately: for p = a + b√d,
        // R(p) = R(a) + d·R(b) + √d·(R(a+b) - R(a) - R(b)).
        let a = PluckerVector::new(self.k, self.n, self.rational.clone()).expect("valid shape");
        let b = PluckerVector::new(self.k, self.n, self.irrational.clone()).expect("valid shape");
        let sum: Vec<Rational> = self.rational.iter().zip(&self.irrational).map(|(x, y)| x + y).collect();
        let s = PluckerVector::new(self.k, self.n, sum).expect("valid shape");
        let (ra, rb, rs) = (a.relation_values(), b.relation_values(), s.relation_values());
        ra.iter()
            .zip(&rb)
            .zip(&rs)
            .map(|((x, y), z)| Surd {
                rational: x + y * &self.radicand,
                irrational: z - x - y,
                radicand: self.radicand.clone(),
            })
            .collect()
    }
}

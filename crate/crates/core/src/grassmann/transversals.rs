//! Exact common transversals of four lines in P³.
//!
//! The four incidence conditions cut a linear subspace out of P⁵. When it
//! is a pencil, the Klein quadric restricted to it is a binary quadratic
//! whose roots are the transversals; they live in `Q(√disc)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{dual_plucker, PluckerVector, ProjFlat, QuadraticPlucker, Surd};
use crate::error::{Error, Result};
use crate::exactnum::rational::exact_sqrt;
use crate::exactnum::{int, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transversal {
    pub plucker: QuadraticPlucker,
    pub real: bool,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transversals {
    Finite {
        lines: Vec<Transversal>,
    },
    /// The common transversals form a family of the given dimension.
    InfiniteFamily {
        dimension: usize,
    },
}

impl Transversals {
    pub fn lines(&self) -> &[Transversal] {
        match self {
            Transversals::Finite { lines } => lines,
            Transversals::InfiniteFamily { .. } => &[],
        }
    }

    pub fn real_count(&self) -> usize {
        self.lines()
            .iter()
            .filter(|t| t.real)
            .map(|t| t.multiplicity as usize)
            .sum()
    }
}

/// `p01 p23 - p02 p13 + p03 p12`.
fn klein(p: &[Rational]) -> Rational {
    &p[0] * &p[5] - &p[1] * &p[4] + &p[2] * &p[3]
}

fn klein_bilinear(u: &[Rational], v: &[Rational]) -> Rational {
    let sum: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    (klein(&sum) - klein(u) - klein(v)) / int(2)
}

fn combine(s: &Rational, u: &[Rational], t: &Rational, v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| s * a + t * b).collect()
}

fn rational_line(coords: Vec<Rational>, multiplicity: u32) -> Result<Transversal> {
    let p = PluckerVector::new(1, 3, coords)?.normalized()?;
    Ok(Transversal {
        plucker: QuadraticPlucker::from_rational(&p),
        real: true,
        multiplicity,
    })
}

pub fn transversals_to_4_lines(lines: &[ProjFlat]) -> Result<Transversals> {
    if lines.len() != 4 {
        return Err(Error::Dimension(format!("need 4 lines, got {}", lines.len())));
    }
    let mut rows = Vec::with_capacity(4);
    for l in lines {
        if l.k() != 1 || l.n() != 3 {
            return Err(Error::Dimension("transversal solver needs lines in P^3".into()));
        }
        rows.push(dual_plucker(&l.hyperplanes()?)?.into_coords());
    }
    let system = RatMatrix::from_rows(rows)?;
    let basis = system.nullspace();
    if basis.len() >= 3 {
        return Ok(Transversals::InfiniteFamily {
            dimension: basis.len() - 2,
        });
    }
    let (u, v) = (&basis[0], &basis[1]);
    let a = klein(u);
    let b = klein_bilinear(u, v);
    let c = klein(v);
    // a s² + 2b st + c t² = 0 on p = s u + t v.
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(Transversals::InfiniteFamily { dimension: 1 });
    }
    let one = int(1);
    let mut out = Vec::new();
    if a.is_zero() {
        if b.is_zero() {
            out.push(rational_line(u.clone(), 2)?);
        } else {
            out.push(rational_line(u.clone(), 1)?);
            let s = -&c / (int(2) * &b);
            out.push(rational_line(combine(&s, u, &one, v), 1)?);
        }
    } else {
        let disc = &b * &b - &a * &c;
        let centre = -&b / &a;
        if disc.is_zero() {
            out.push(rational_line(combine(&centre, u, &one, v), 2)?);
        } else if let Some(root) = exact_sqrt(&disc) {
            for sign in [1, -1] {
                let s = &centre + int(sign) * &root / &a;
                out.push(rational_line(combine(&s, u, &one, v), 1)?);
            }
        } else {
            let base = combine(&centre, u, &one, v);
            for sign in [1, -1] {
                let scale = int(sign) / &a;
                let coords: Vec<Surd> = base
                    .iter()
                    .zip(u)
                    .map(|(r, ui)| Surd {
                        rational: r.clone(),
                        irrational: &scale * ui,
                        radicand: disc.clone(),
                    })
                    .collect();
                let p = QuadraticPlucker::from_coords(1, 3, disc.clone(), &coords).normalized()?;
                out.push(Transversal {
                    plucker: p,
                    real: disc.is_positive(),
                    multiplicity: 1,
                });
            }
        }
    }
    Ok(Transversals::Finite { lines: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{incidence, plucker};

    fn e(i: usize) -> Vec<Rational> {
        (0..4).map(|j| if i == j { int(1) } else { int(0) }).collect()
    }

    fn span(a: usize, b: usize) -> ProjFlat {
        ProjFlat::from_columns(&[e(a), e(b)]).unwrap()
    }

    #[test]
    fn tetrahedron_has_two_rational_transversals() {
        // ℓ1: x0=x3=0, ℓ2: x0=x1=0, ℓ3: x1=x2=0, ℓ4: x2=x3=0.
        let lines = [span(1, 2), span(2, 3), span(0, 3), span(0, 1)];
        let t = transversals_to_4_lines(&lines).unwrap();
        let found: Vec<PluckerVector> = t.lines().iter().map(|l| l.plucker.to_rational().unwrap()).collect();
        assert_eq!(found.len(), 2);
        let expected = [plucker(&span(1, 3)).unwrap(), plucker(&span(0, 2)).unwrap()];
        for p in &expected {
            assert!(found.contains(p), "missing {p:?}");
        }
        assert_eq!(t.real_count(), 2);
    }

    #[test]
    fn concurrent_lines_give_a_family() {
        let p = vec![int(1), int(1), int(1), int(1)];
        let lines: Vec<ProjFlat> = [e(0), e(1), e(2), vec![int(1), int(2), int(3), int(5)]]
            .into_iter()
            .map(|q| ProjFlat::from_columns(&[p.clone(), q]).unwrap())
            .collect();
        assert!(matches!(
            transversals_to_4_lines(&lines).unwrap(),
            Transversals::InfiniteFamily { .. }
        ));
    }

    #[test]
    fn irrational_transversals_are_exact() {
        let lines: Vec<ProjFlat> = [
            [[1, 0, 2, 1], [0, 1, 1, 3]],
            [[1, 1, 0, 0], [0, 2, 1, 5]],
            [[2, 0, 1, 1], [1, 3, 0, 1]],
            [[0, 1, 1, 1], [1, 0, 3, 2]],
        ]
        .iter()
        .map(|cols| {
            ProjFlat::from_columns(
                &cols
                    .iter()
                    .map(|c| c.iter().map(|&x| int(x)).collect())
                    .collect::<Vec<_>>(),
            )
            .unwrap()
        })
        .collect();
        let t = transversals_to_4_lines(&lines).unwrap();
        assert_eq!(t.lines().len(), 2);
        for line in t.lines() {
            for l in &lines {
                let q = dual_plucker(&l.hyperplanes().unwrap()).unwrap();
                assert!(line.plucker.incidence(&q).unwrap().is_zero());
            }
            assert!(line.plucker.relation_values().iter().all(Surd::is_zero));
            if let Some(p) = line.plucker.to_rational() {
                let q = dual_plucker(&lines[0].hyperplanes().unwrap()).unwrap();
                assert!(incidence(&p, &q).unwrap().is_zero());
            }
        }
    }
}

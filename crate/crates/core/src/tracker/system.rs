use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

use super::{random_vector, Point};
use crate::error::{Error, Result};
use crate::exactnum::rational::to_f64;
use crate::exactnum::{lu_solve, CplxMatrix, RatMatrix};
use crate::grassmann::{dual_plucker, ComplexPlucker, DualFlat};
use crate::quadrics::{tangency_form, tangency_residual_numeric, Quadric};
use crate::tetra32::{enumerate, family, TetraParams};

#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    TangentTo(Quadric),
    Meets(DualFlat),
}

/// Four conditions on lines in P³.
#[derive(Clone, Debug, PartialEq)]
pub struct TangencySystem {
    conditions: Vec<Condition>,
    // One row per condition: the tangency form or the dual Plücker vector.
    forms: Vec<Form>,
}

#[derive(Clone, Debug, PartialEq)]
enum Form {
    Quadratic(RatMatrix),
    Linear(Vec<crate::exactnum::Rational>),
}

impl TangencySystem {
    pub fn new(conditions: Vec<Condition>) -> Result<Self> {
        if conditions.len() != 4 {
            return Err(Error::Dimension(format!("need 4 conditions, got {}", conditions.len())));
        }
        let mut forms = Vec::with_capacity(4);
        for c in &conditions {
            forms.push(match c {
                Condition::TangentTo(q) => {
                    if q.n() != 3 {
                        return Err(Error::Dimension("quadrics must live in P^3".into()));
                    }
                    Form::Quadratic(tangency_form(q, 1)?)
                }
                Condition::Meets(f) => {
                    if f.n() != 3 || f.k() != 1 {
                        return Err(Error::Dimension("incidence conditions need lines in P^3".into()));
                    }
                    Form::Linear(dual_plucker(f)?.into_coords())
                }
            });
        }
        Ok(Self { conditions, forms })
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn tangency_count(&self) -> usize {
        self.forms.iter().filter(|f| matches!(f, Form::Quadratic(_))).count()
    }

    /// `2^{#tangent} · 2`
    pub fn root_bound(&self) -> usize {
        2usize << self.tangency_count()
    }

    /// Largest normalized residual of the four conditions at `p`, and the
    /// Plücker relation residual.
    pub fn endpoint_residuals(&self, p: &Point) -> (f64, f64) {
        let cond = self
            .forms
            .iter()
            .map(|f| match f {
                Form::Quadratic(m) => tangency_residual_numeric(&CplxMatrix::from_rat(m), p),
                Form::Linear(q) => {
                    let qn: Vec<f64> = q.iter().map(to_f64).collect();
                    let dot: Complex64 = qn.iter().zip(p).map(|(a, b)| b * a).sum();
                    let scale = qn.iter().map(|x| x * x).sum::<f64>().sqrt() * norm(p);
                    dot.norm() / scale
                }
            })
            .fold(0.0, f64::max);
        let pl = ComplexPlucker::new(1, 3, p.to_vec())
            .expect("six coordinates")
            .relation_residual();
        (cond, pl)
    }
}

pub(crate) fn norm(p: &[Complex64]) -> f64 {
    p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `pᵀ A p + bᵀ p + c` with `A` symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadEq {
    pub a: [[Complex64; 6]; 6],
    pub b: Point,
    pub c: Complex64,
}

impl QuadEq {
    pub fn zero() -> Self {
        Self {
            a: [[Complex64::zero(); 6]; 6],
            b: [Complex64::zero(); 6],
            c: Complex64::zero(),
        }
    }

    pub fn quadratic(a: [[Complex64; 6]; 6]) -> Self {
        Self { a, ..Self::zero() }
    }

    pub fn linear(b: Point, c: Complex64) -> Self {
        Self { b, c, ..Self::zero() }
    }

    /// `(l·p)(m·p)`
    pub fn product(l: &Point, m: &Point) -> Self {
        let half = Complex64::new(0.5, 0.0);
        Self::quadratic(std::array::from_fn(|i| {
            std::array::from_fn(|j| half * (l[i] * m[j] + m[i] * l[j]))
        }))
    }

    pub fn degree(&self) -> u32 {
        if self.a.iter().flatten().any(|z| !z.is_zero()) {
            2
        } else if self.b.iter().any(|z| !z.is_zero()) {
            1
        } else {
            0
        }
    }

    pub fn eval(&self, p: &Point) -> Complex64 {
        let mut acc = self.c;
        for ((a, b), x) in self.a.iter().zip(&self.b).zip(p) {
            let row = *b + a.iter().zip(p).map(|(a, y)| a * y).sum::<Complex64>();
            acc += row * x;
        }
        acc
    }

    /// `2Ap + b`
    pub fn gradient(&self, p: &Point) -> Point {
        std::array::from_fn(|i| self.b[i] + 2.0 * self.a[i].iter().zip(p).map(|(a, y)| a * y).sum::<Complex64>())
    }

    /// Size of the terms at `p`, used to make residuals relative.
    pub fn scale(&self, p: &Point) -> f64 {
        let fa = self.a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let fb = norm(&self.b);
        let r = norm(p);
        fa * r * r + fb * r + self.c.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareSystem {
    pub eqs: [QuadEq; 6],
}

impl SquareSystem {
    pub fn eval(&self, p: &Point) -> Point {
        std::array::from_fn(|i| self.eqs[i].eval(p))
    }

    pub fn jacobian(&self, p: &Point) -> [[Complex64; 6]; 6] {
        std::array::from_fn(|i| self.eqs[i].gradient(p))
    }

    /// Largest `|f_i(p)| / scale_i(p)`.
    pub fn residual(&self, p: &Point) -> f64 {
        self.eqs
            .iter()
            .map(|e| {
                let s = e.scale(p);
                if s == 0.0 {
                    0.0
                } else {
                    e.eval(p).norm() / s
                }
            })
            .fold(0.0, f64::max)
    }
}

fn complex_form(m: &RatMatrix) -> [[Complex64; 6]; 6] {
    std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(to_f64(m.get(i, j)), 0.0)))
}

fn klein() -> QuadEq {
    let mut a = [[Complex64::zero(); 6]; 6];
    for (i, j, s) in [(0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)] {
        a[i][j] = Complex64::new(s / 2.0, 0.0);
        a[j][i] = Complex64::new(s / 2.0, 0.0);
    }
    QuadEq::quadratic(a)
}

/// Rows: the four conditions, the Klein quadric, then `patch·p - 1`.
pub fn build_square_system(sys: &TangencySystem, patch: &Point) -> SquareSystem {
    let mut eqs = sys.forms.iter().map(|f| match f {
        Form::Quadratic(m) => QuadEq::quadratic(complex_form(m)),
        Form::Linear(q) => QuadEq::linear(
            std::array::from_fn(|i| Complex64::new(to_f64(&q[i]), 0.0)),
            Complex64::zero(),
        ),
    });
    let conditions: [QuadEq; 4] = std::array::from_fn(|_| eqs.next().expect("four conditions"));
    let [c0, c1, c2, c3] = conditions;
    SquareSystem {
        eqs: [
            c0,
            c1,
            c2,
            c3,
            klein(),
            QuadEq::linear(*patch, Complex64::new(-1.0, 0.0)),
        ],
    }
}

/// Product of the equation degrees.
pub fn bezout_count(sys: &SquareSystem) -> usize {
    sys.eqs.iter().map(|e| e.degree() as usize).product()
}

/// Replaces each homogeneous row of `target` by a product of random
/// linear forms of the same degree and keeps the patch row. Every choice of
/// one factor per row gives a start solution by linear algebra.
pub fn linear_product_start<R: Rng>(target: &SquareSystem, rng: &mut R) -> (SquareSystem, Vec<Point>) {
    let mut factors: Vec<Vec<Point>> = Vec::with_capacity(5);
    let mut eqs: Vec<QuadEq> = Vec::with_capacity(6);
    for e in &target.eqs[..5] {
        match e.degree() {
            2 => {
                let (l, m) = (random_vector(rng), random_vector(rng));
                eqs.push(QuadEq::product(&l, &m));
                factors.push(vec![l, m]);
            }
            _ => {
                let l = random_vector(rng);
                eqs.push(QuadEq::linear(l, Complex64::zero()));
                factors.push(vec![l]);
            }
        }
    }
    let patch = target.eqs[5].clone();
    eqs.push(patch.clone());
    let total: usize = factors.iter().map(Vec::len).product();
    let mut starts = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut a = [[Complex64::zero(); 6]; 6];
        for (row, f) in factors.iter().enumerate() {
            a[row] = f[code % f.len()];
            code /= f.len();
        }
        a[5] = patch.b;
        let mut rhs = [Complex64::zero(); 6];
        rhs[5] = -patch.c;
        if lu_solve(&mut a, &mut rhs) {
            starts.push(rhs);
        }
    }
    let mut it = eqs.into_iter();
    (
        SquareSystem {
            eqs: std::array::from_fn(|_| it.next().expect("six rows")),
        },
        starts,
    )
}

/// The diagonal family as a start system, with its 32 closed-form solutions
/// scaled onto the patch.
pub fn tetra_start(params: &TetraParams, patch: &Point) -> Result<(SquareSystem, Vec<Point>)> {
    let sols = enumerate(params)?;
    let sys = TangencySystem::new(family(params).into_iter().map(Condition::TangentTo).collect())?;
    let start = build_square_system(&sys, patch);
    let starts = sols
        .iter()
        .map(|s| {
            let p = s.to_complex();
            let scale: Complex64 = patch.iter().zip(&p).map(|(c, x)| c * x).sum();
            if scale.norm() < 1e-12 {
                return Err(Error::Numerical(
                    "start solution lies on the patch's hyperplane at infinity".into(),
                ));
            }
            Ok(std::array::from_fn(|i| p[i] / scale))
        })
        .collect::<Result<Vec<Point>>>()?;
    Ok((start, starts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ratio};
    use crate::grassmann::ProjFlat;
    use crate::tetra32::tetrahedron_lines;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn meets(l: &ProjFlat) -> Condition {
        Condition::Meets(l.hyperplanes().unwrap())
    }

    #[test]
    fn root_bounds_and_bezout_numbers_agree() {
        let lines = tetrahedron_lines();
        let quads = family(&TetraParams::new(ratio(1, 10), ratio(1, 10)));
        let patch = random_vector(&mut ChaCha8Rng::seed_from_u64(1));
        for i in 0..=4 {
            let conditions: Vec<Condition> = (0..4)
                .map(|j| {
                    if j < i {
                        Condition::TangentTo(quads[j].clone())
                    } else {
                        meets(&lines[j])
                    }
                })
                .collect();
            let sys = TangencySystem::new(conditions).unwrap();
            assert_eq!(sys.root_bound(), 2 << i);
            assert_eq!(bezout_count(&build_square_system(&sys, &patch)), 2 << i);
        }
        assert!(TangencySystem::new(vec![]).is_err());
        let q4 = Quadric::diagonal(&[int(1), int(1), int(1), int(1), int(-1)]).unwrap();
        assert!(TangencySystem::new(vec![Condition::TangentTo(q4); 4]).is_err());
    }

    #[test]
    fn start_systems_are_solved_by_their_starts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let patch = random_vector(&mut rng);
        let params = TetraParams::new(ratio(1, 10), ratio(1, 20));
        let (sys, starts) = tetra_start(&params, &patch).unwrap();
        assert_eq!(starts.len(), 32);
        for p in &starts {
            assert!(sys.residual(p) < 1e-13);
        }
        let (lp, pts) = linear_product_start(&sys, &mut rng);
        assert_eq!(pts.len(), 32);
        assert_eq!(bezout_count(&lp), 32);
        for p in &pts {
            assert!(lp.residual(p) < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = QuadEq {
            a: {
                let l = random_vector(&mut rng);
                let m = random_vector(&mut rng);
                QuadEq::product(&l, &m).a
            },
            b: random_vector(&mut rng),
            c: Complex64::new(0.3, -0.2),
        };
        let p = random_vector(&mut rng);
        let g = e.gradient(&p);
        let h = 1e-6;
        for i in 0..6 {
            let mut q = p;
            q[i] += h;
            let fd = (e.eval(&q) - e.eval(&p)) / h;
            assert!((fd - g[i]).norm() < 1e-4 * (1.0 + g[i].norm()));
        }
        assert_eq!((QuadEq::zero().degree(), e.degree()), (0, 2));
    }
}

//! Closed-form common tangents to the four diagonal quadrics
//!
//! ```text
//! Q1: x0² + x3² - β(x1² + x2²)     Q3: x1² + x2² - α(x0² + x3²)
//! Q2: x0² + x1² - β(x2² + x3²)     Q4: x2² + x3² - α(x0² + x1²)
//! ```
//!
//! which degenerate (α = β = 0) to the four edges `x0=x3=0`, `x0=x1=0`,
//! `x1=x2=0`, `x2=x3=0` of the coordinate tetrahedron.
//!
//! All tangency equations involve only squared Plücker coordinates, and the
//! solutions split into three cases: `p02 = 0` (8 lines), `p13 = 0` (8 lines)
//! and `p02 p13 ≠ 0` (16 lines, two roots of `4αx² - (1-α)(1-β)x + β` for
//! `x = p01²`, each with 8 sign patterns). Coordinates are kept as
//! `coefficient · √radicand · (√x)^e` until they are evaluated numerically.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, sign, to_f64};
use crate::exactnum::{int, CplxMatrix, Rational};
use crate::grassmann::{projective_distance, ProjFlat};
use crate::quadrics::{tangency_form, tangency_residual_numeric, Quadric};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TetraParams {
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub beta: Rational,
}

impl TetraParams {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        Self { alpha, beta }
    }

    /// `(1-α)(1-β)`
    pub fn shift(&self) -> Rational {
        (int(1) - &self.alpha) * (int(1) - &self.beta)
    }

    /// `(1-α)²(1-β)² - 16αβ`, the discriminant of the case-3 quadratic.
    pub fn discriminant(&self) -> Rational {
        let s = self.shift();
        &s * &s - int(16) * &self.alpha * &self.beta
    }

    /// The factors of the genericity polynomial, named.
    pub fn genericity_factors(&self) -> Vec<(&'static str, Rational)> {
        let (a, b) = (&self.alpha, &self.beta);
        vec![
            ("α", a.clone()),
            ("β", b.clone()),
            ("1−αβ", int(1) - a * b),
            ("1−β²", int(1) - b * b),
            ("1−α²", int(1) - a * a),
            ("(1−α)²(1−β)²−16αβ", self.discriminant()),
        ]
    }

    /// Fails with [`Error::NonGeneric`] naming the first vanishing factor.
    pub fn check_generic(&self) -> Result<()> {
        match self.genericity_factors().into_iter().find(|(_, v)| v.is_zero()) {
            Some((name, _)) => Err(Error::NonGeneric(name.to_string())),
            None => Ok(()),
        }
    }

    /// Exact test of `0 < α, β < 3 - 2√2`.
    pub fn in_reality_region(&self) -> bool {
        below_reality_bound(&self.alpha) && below_reality_bound(&self.beta)
    }
}

/// `0 < t < 3 - 2√2`, decided by comparing `(3 - t)²` with 8.
pub fn below_reality_bound(t: &Rational) -> bool {
    let gap = int(3) - t;
    t.is_positive() && gap.is_positive() && &gap * &gap > int(8)
}

/// The four quadrics, labelled `Q1`..`Q4`.
pub fn family(params: &TetraParams) -> [Quadric; 4] {
    let (a, b) = (&params.alpha, &params.beta);
    let one = int(1);
    let diagonals = [
        [one.clone(), -b.clone(), -b.clone(), one.clone()],
        [one.clone(), one.clone(), -b.clone(), -b.clone()],
        [-a.clone(), one.clone(), one.clone(), -a.clone()],
        [-a.clone(), -a.clone(), one.clone(), one.clone()],
    ];
    let mut out = diagonals.iter().enumerate().map(|(i, d)| {
        Quadric::diagonal(d)
            .expect("diagonal")
            .with_label(format!("Q{}", i + 1))
    });
    std::array::from_fn(|_| out.next().expect("four quadrics"))
}

/// The edges `x0=x3=0`, `x0=x1=0`, `x1=x2=0`, `x2=x3=0` that the family
/// degenerates to.
pub fn tetrahedron_lines() -> [ProjFlat; 4] {
    let e = |i: usize| -> Vec<Rational> { (0..4).map(|j| if i == j { int(1) } else { int(0) }).collect() };
    let span = |a, b| ProjFlat::from_columns(&[e(a), e(b)]).expect("coordinate line");
    [span(1, 2), span(2, 3), span(0, 3), span(0, 1)]
}

/// One root `x = center + offset·√disc` of `4αx² - (1-α)(1-β)x + β = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRoot {
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub center: Rational,
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub offset: Rational,
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub disc: Rational,
    // Quadratic coefficients kept for a cancellation-free evaluation.
    #[serde(skip)]
    lead: Rational,
    #[serde(skip)]
    constant: Rational,
}

impl BranchRoot {
    fn new(params: &TetraParams, branch: u8) -> Self {
        let a = &params.alpha;
        let sigma = if branch == 0 { int(1) } else { int(-1) };
        Self {
            center: params.shift() / (int(8) * a),
            offset: sigma / (int(8) * a),
            disc: params.discriminant(),
            lead: int(4) * a,
            constant: params.beta.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.disc.is_positive() || self.disc.is_zero()
    }

    /// Exact sign of a real root.
    pub fn sign(&self) -> Option<i32> {
        if !self.is_real() {
            return None;
        }
        // sign(center + offset√disc), comparing center² with offset²·disc.
        let c = sign(&self.center);
        let o = sign(&self.offset);
        if self.disc.is_zero() || o == 0 {
            return Some(c);
        }
        if c == 0 || c == o {
            return Some(o);
        }
        let lhs = &self.center * &self.center;
        let rhs = &self.offset * &self.offset * &self.disc;
        Some(match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => c,
            std::cmp::Ordering::Less => o,
            std::cmp::Ordering::Equal => 0,
        })
    }

    /// `center + offset*sqrt(disc)` with exact rationals.
    pub fn symbolic(&self) -> String {
        let sign = if self.offset.is_negative() { "-" } else { "+" };
        format!(
            "{} {sign} {}*sqrt({})",
            format_rational(&self.center),
            format_rational(&self.offset.abs()),
            format_rational(&self.disc)
        )
    }

    pub fn to_complex(&self) -> Complex64 {
        let root = Complex64::new(to_f64(&self.disc), 0.0).sqrt();
        let c = to_f64(&self.center);
        let o = to_f64(&self.offset);
        let direct = Complex64::new(c, 0.0) + root * o;
        // With a real discriminant and c, o of opposite signs the direct
        // formula cancels; use x = constant / (lead · x_other) instead.
        if self.disc.is_positive() && c * o < 0.0 {
            let other = Complex64::new(c, 0.0) - root * o;
            Complex64::new(to_f64(&self.constant), 0.0) / (other * to_f64(&self.lead))
        } else {
            direct
        }
    }
}

/// `coefficient · √radicand · (√x)^root_power`, with `x` the branch root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalCoord {
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub coefficient: Rational,
    #[serde(with = "crate::exactnum::rational::serde_str")]
    pub radicand: Rational,
    pub root_power: u8,
}

impl RadicalCoord {
    fn rational(c: Rational) -> Self {
        Self {
            coefficient: c,
            radicand: int(1),
            root_power: 0,
        }
    }

    fn sqrt(coefficient: Rational, radicand: Rational, root_power: u8) -> Self {
        Self {
            coefficient,
            radicand,
            root_power,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero() || self.radicand.is_zero()
    }

    fn evaluate(&self, root: Option<&BranchRoot>) -> Complex64 {
        let mut v = Complex64::new(to_f64(&self.coefficient), 0.0) * Complex64::new(to_f64(&self.radicand), 0.0).sqrt();
        if self.root_power > 0 {
            let x = root.expect("branch root for case-3 coordinates").to_complex();
            v *= match self.root_power {
                1 => x.sqrt(),
                2 => x,
                p => x.sqrt().powu(p as u32),
            };
        }
        v
    }

    fn is_real(&self, root: Option<&BranchRoot>) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.radicand.is_negative() {
            return false;
        }
        match (self.root_power, root) {
            (0, _) => true,
            (p, Some(r)) => match r.sign() {
                None => false,
                Some(s) => p % 2 == 0 || s >= 0,
            },
            (_, None) => false,
        }
    }

    pub fn symbolic(&self) -> String {
        let mut factors = Vec::new();
        if !self.radicand.is_one() {
            factors.push(format!("sqrt({})", format_rational(&self.radicand)));
        }
        match self.root_power {
            0 => {}
            1 => factors.push("sqrt(x)".into()),
            2 => factors.push("x".into()),
            p => factors.push(format!("sqrt(x)^{p}")),
        }
        let c = &self.coefficient;
        if factors.is_empty() || c.is_zero() || !c.abs().is_one() {
            factors.insert(0, format_rational(c));
            return factors.join("*");
        }
        let sign = if c.is_negative() { "-" } else { "" };
        format!("{sign}{}", factors.join("*"))
    }
}

/// Coordinate order used for all solutions: `p01, p02, p03, p12, p13, p23`.
pub const COORD_LABELS: [&str; 6] = ["01", "02", "03", "12", "13", "23"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedRadicalSolution {
    pub case: u8,
    /// `γ01, γ03, γ12`
    pub signs: [i8; 3],
    /// Which root of the case-3 quadratic (0: `+√disc`, 1: `−√disc`).
    pub branch: Option<u8>,
    pub coords: [RadicalCoord; 6],
    pub root: Option<BranchRoot>,
}

impl SignedRadicalSolution {
    pub fn to_complex(&self) -> [Complex64; 6] {
        std::array::from_fn(|i| self.coords[i].evaluate(self.root.as_ref()))
    }

    /// Exact reality test: one coordinate equals 1, so the line is real iff
    /// every coordinate is.
    pub fn is_real(&self) -> bool {
        self.coords.iter().all(|c| c.is_real(self.root.as_ref()))
    }
}

fn sign_rat(s: i8) -> Rational {
    int(s as i64)
}

pub fn enumerate(params: &TetraParams) -> Result<Vec<SignedRadicalSolution>> {
    params.check_generic()?;
    let (a, b) = (&params.alpha, &params.beta);
    let w = params.shift();
    let sign_patterns: Vec<[i8; 3]> = (0..8)
        .map(|m| {
            let s = |bit: i32| if m >> bit & 1 == 0 { 1 } else { -1 };
            [s(2), s(1), s(0)]
        })
        .collect();

    let mut out = Vec::with_capacity(32);
    for case in [1u8, 2] {
        for &[g01, g03, g12] in &sign_patterns {
            let (p02, p13) = if case == 1 { (int(0), int(1)) } else { (int(1), int(0)) };
            let g23 = -(g01 * g03 * g12);
            let coords = [
                RadicalCoord::sqrt(sign_rat(g01), b / &w, 0),
                RadicalCoord::rational(p02),
                RadicalCoord::sqrt(sign_rat(g03), b / &w, 0),
                RadicalCoord::sqrt(sign_rat(g12), a / &w, 0),
                RadicalCoord::rational(p13),
                RadicalCoord::sqrt(sign_rat(g23), a / &w, 0),
            ];
            out.push(SignedRadicalSolution {
                case,
                signs: [g01, g03, g12],
                branch: None,
                coords,
                root: None,
            });
        }
    }
    let ratio = a / b;
    for branch in [0u8, 1] {
        let root = BranchRoot::new(params, branch);
        for &[g01, g03, g12] in &sign_patterns {
            let g23 = g01 * g03 * g12;
            let coords = [
                RadicalCoord::sqrt(sign_rat(g01), int(1), 1),
                RadicalCoord::rational(int(1)),
                RadicalCoord::sqrt(sign_rat(g03), int(1), 1),
                RadicalCoord::sqrt(sign_rat(g12), ratio.clone(), 1),
                RadicalCoord::sqrt(int(2) * sign_rat(g03 * g12), ratio.clone(), 2),
                RadicalCoord::sqrt(sign_rat(g23), ratio.clone(), 1),
            ];
            out.push(SignedRadicalSolution {
                case: 3,
                signs: [g01, g03, g12],
                branch: Some(branch),
                coords,
                root: Some(root.clone()),
            });
        }
    }
    Ok(out)
}

/// `(real, nonreal)` from exact sign tests only.
pub fn reality_count(params: &TetraParams) -> Result<(usize, usize)> {
    params.check_generic()?;
    let (a, b) = (&params.alpha, &params.beta);
    let w = params.shift();
    let mut real = 0;
    if (a / &w).is_positive() && (b / &w).is_positive() {
        real += 16;
    }
    if (a * b).is_positive() {
        for branch in [0, 1] {
            if BranchRoot::new(params, branch).sign() == Some(1) {
                real += 8;
            }
        }
    }
    Ok((real, 32 - real))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `-β p02² - β p13² + (1-α)(1-β) p03²`
    pub eliminated: f64,
    /// `p01 p23 - p02 p13 + p03 p12`
    pub plucker: f64,
    /// Largest difference in `α p01² = α p03² = β p12² = β p23²`.
    pub ratios: f64,
    /// Normalized `pᵀ(∧²Q_i)p` for the four quadrics.
    pub tangency: [f64; 4],
    pub max: f64,
}

/// Evaluates the defining equations at the unit-normalized numeric value of
/// any candidate coordinate vector.
pub fn residuals(coords: &[Complex64; 6], params: &TetraParams) -> ResidualReport {
    let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let p: Vec<Complex64> = coords.iter().map(|z| z / norm).collect();
    let (a, b) = (to_f64(&params.alpha), to_f64(&params.beta));
    let w = to_f64(&params.shift());
    let sq = |z: Complex64| z * z;
    let eliminated = (-b * sq(p[1]) - b * sq(p[4]) + w * sq(p[2])).norm();
    let plucker = (p[0] * p[5] - p[1] * p[4] + p[2] * p[3]).norm();
    let chain = [a * sq(p[0]), a * sq(p[2]), b * sq(p[3]), b * sq(p[5])];
    let ratios = chain.windows(2).map(|w| (w[0] - w[1]).norm()).fold(0.0, f64::max);
    let quadrics = family(params);
    let tangency: [f64; 4] = std::array::from_fn(|i| {
        let form = CplxMatrix::from_rat(&tangency_form(&quadrics[i], 1).expect("lines in P^3"));
        tangency_residual_numeric(&form, &p)
    });
    let max = tangency
        .iter()
        .copied()
        .fold(eliminated.max(plucker).max(ratios), f64::max);
    ResidualReport {
        eliminated,
        plucker,
        ratios,
        tangency,
        max,
    }
}

pub fn verify_solution(sol: &SignedRadicalSolution, params: &TetraParams) -> ResidualReport {
    residuals(&sol.to_complex(), params)
}

/// A solution instantiated and checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifiedSolution {
    pub solution: SignedRadicalSolution,
    pub coords: [Complex64; 6],
    pub real: bool,
    pub report: ResidualReport,
}

/// Enumerates and verifies all 32 solutions (branches run in parallel).
pub fn solve(params: &TetraParams) -> Result<Vec<VerifiedSolution>> {
    let sols = enumerate(params)?;
    Ok(sols
        .into_par_iter()
        .map(|solution| {
            let coords = solution.to_complex();
            let report = residuals(&coords, params);
            let real = solution.is_real();
            VerifiedSolution {
                solution,
                coords,
                real,
                report,
            }
        })
        .collect())
}

/// Smallest projective distance between any two of the given points.
pub fn min_pairwise_distance(points: &[[Complex64; 6]]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(projective_distance(&points[i], &points[j]));
        }
    }
    best
}

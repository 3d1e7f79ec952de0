//! Homotopy continuation for systems of four line conditions in P³.
//!
//! Unknowns are the six Plücker coordinates. Each condition is either
//! tangency to a quadric (`pᵀ(∧²Q)p = 0`) or incidence with a line
//! (`q·p = 0`); the Klein quadric and a random affine patch `cᵀp = 1` make
//! the system square. Its Bézout number `2^{#tangent + 1}` is exact for
//! generic data.

mod classify;
mod doubling;
mod path;
mod system;

pub use classify::{classify_real, distinct_count, RealClassification};
pub use doubling::{doubling_experiment, doubling_lines, doubling_system, DoublingReport, DoublingStage, Radii};
pub use path::{track, PathStatus, Predictor, TrackedPath, TrackerOptions};
pub use system::{
    bezout_count, build_square_system, linear_product_start, tetra_start, Condition, QuadEq, SquareSystem,
    TangencySystem,
};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tetra32::TetraParams;

pub type Point = [Complex64; 6];

/// A uniformly random point on the unit circle.
pub fn random_unit<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Independent standard complex Gaussian entries.
pub fn random_vector<R: Rng>(rng: &mut R) -> Point {
    std::array::from_fn(|_| {
        let (u1, u2): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::from_polar(r, std::f64::consts::TAU * u2) / std::f64::consts::SQRT_2
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPolicy {
    /// Closed-form starts from the diagonal family; needs four tangency
    /// conditions.
    Tetra(TetraParams),
    /// Products of random linear forms (total-degree start).
    LinearProduct,
    /// `Tetra` at α = 1/10, β = 1/20 when all conditions are tangencies,
    /// `LinearProduct` otherwise.
    Auto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub bound: usize,
    pub start: String,
    pub gamma: Complex64,
    pub patch: Point,
    pub paths: Vec<TrackedPath>,
    pub classification: RealClassification,
    pub distinct: usize,
    /// Worst normalized condition residual over converged endpoints.
    pub max_condition_residual: f64,
    pub max_plucker_residual: f64,
}

impl SolveReport {
    pub fn converged(&self) -> impl Iterator<Item = &TrackedPath> {
        self.paths.iter().filter(|p| p.status == PathStatus::Converged)
    }

    pub fn real_count(&self) -> usize {
        self.classification.real.len()
    }
}

/// Tracks every start solution of the chosen start system to `sys`.
/// Patch, γ and random start data come from `opts.seed`.
pub fn solve(sys: &TangencySystem, policy: &StartPolicy, opts: &TrackerOptions) -> Result<SolveReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let patch = random_vector(&mut rng);
    let gamma = opts.gamma.unwrap_or_else(|| random_unit(&mut rng));
    let target = build_square_system(sys, &patch);
    let policy = match policy {
        StartPolicy::Auto if sys.tangency_count() == 4 => StartPolicy::Tetra(TetraParams::new(
            crate::exactnum::ratio(1, 10),
            crate::exactnum::ratio(1, 20),
        )),
        StartPolicy::Auto => StartPolicy::LinearProduct,
        other => other.clone(),
    };
    let (start_sys, starts, name) = match &policy {
        StartPolicy::Tetra(params) if sys.tangency_count() == 4 => {
            let (s, pts) = tetra_start(params, &patch)?;
            (s, pts, "tetra")
        }
        StartPolicy::Tetra(_) => {
            return Err(crate::Error::Dimension(
                "closed-form starts need four tangency conditions".into(),
            ))
        }
        _ => {
            let (s, pts) = linear_product_start(&target, &mut rng);
            (s, pts, "linear-product")
        }
    };
    let opts = TrackerOptions {
        gamma: Some(gamma),
        ..opts.clone()
    };
    let paths = track(&start_sys, &starts, &target, &opts);
    let classification = classify_real(&paths, opts.real_tol);
    let distinct = distinct_count(&paths, opts.distinct_tol);
    let (mut cond_res, mut pl_res) = (0.0f64, 0.0f64);
    for p in paths.iter().filter(|p| p.status == PathStatus::Converged) {
        let (c, r) = sys.endpoint_residuals(&p.end);
        cond_res = cond_res.max(c);
        pl_res = pl_res.max(r);
    }
    Ok(SolveReport {
        bound: sys.root_bound(),
        start: name.into(),
        gamma,
        patch,
        paths,
        classification,
        distinct,
        max_condition_residual: cond_res,
        max_plucker_residual: pl_res,
    })
}

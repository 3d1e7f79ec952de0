use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system::norm;
use super::{random_unit, Point, SquareSystem};
use crate::exactnum::{condition_number, lu_solve};
use crate::grassmann::projective_distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    Euler,
    RungeKutta4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerOptions {
    pub seed: u64,
    /// Drawn from `seed` when absent.
    pub gamma: Option<Complex64>,
    pub predictor: Predictor,
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    pub corrector_iterations: usize,
    /// Relative Newton step size accepted by the corrector.
    pub corrector_tol: f64,
    /// Relative residual targeted by endpoint refinement.
    pub endpoint_tol: f64,
    /// Relative residual below which a refined endpoint counts as converged.
    pub accept_tol: f64,
    pub singular_condition: f64,
    pub distinct_tol: f64,
    pub real_tol: f64,
    /// Coordinate norm beyond which a path is considered to go to infinity.
    pub divergence_norm: f64,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            gamma: None,
            predictor: Predictor::RungeKutta4,
            initial_step: 0.01,
            max_step: 0.05,
            min_step: 1e-14,
            max_steps: 50_000,
            corrector_iterations: 3,
            corrector_tol: 1e-10,
            endpoint_tol: 1e-12,
            accept_tol: 1e-10,
            singular_condition: 1e12,
            distinct_tol: 1e-6,
            real_tol: 1e-8,
            divergence_norm: 1e8,
        }
    }
}

impl TrackerOptions {
    /// Ten times finer step control, used when re-tracking suspect paths.
    pub fn tightened(&self) -> Self {
        Self {
            initial_step: self.initial_step / 10.0,
            max_step: self.max_step / 10.0,
            corrector_tol: self.corrector_tol / 10.0,
            max_steps: self.max_steps * 10,
            ..self.clone()
        }
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma.unwrap_or_else(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(1);
            random_unit(&mut rng)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatus {
    Converged,
    Diverged,
    PathJumpSuspected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackedPath {
    pub start: Point,
    pub end: Point,
    pub status: PathStatus,
    pub steps: usize,
    pub residual: f64,
    /// Jacobian condition number at the endpoint exceeded the threshold.
    pub singular: bool,
    pub retracked: bool,
}

/// `H(p, t) = (1 - t)·γ·G(p) + t·F(p)`
struct Homotopy<'a> {
    start: &'a SquareSystem,
    target: &'a SquareSystem,
    gamma: Complex64,
}

impl Homotopy<'_> {
    fn eval(&self, p: &Point, t: f64) -> Point {
        let (g, f) = (self.start.eval(p), self.target.eval(p));
        std::array::from_fn(|i| (1.0 - t) * self.gamma * g[i] + t * f[i])
    }

    fn jacobian(&self, p: &Point, t: f64) -> [[Complex64; 6]; 6] {
        let (g, f) = (self.start.jacobian(p), self.target.jacobian(p));
        std::array::from_fn(|i| std::array::from_fn(|j| (1.0 - t) * self.gamma * g[i][j] + t * f[i][j]))
    }

    /// `dp/dt = -H_p⁻¹ H_t`
    fn velocity(&self, p: &Point, t: f64) -> Option<Point> {
        let (g, f) = (self.start.eval(p), self.target.eval(p));
        let mut rhs: Point = std::array::from_fn(|i| self.gamma * g[i] - f[i]);
        let mut jac = self.jacobian(p, t);
        lu_solve(&mut jac, &mut rhs).then_some(rhs)
    }

    fn predict(&self, p: &Point, t: f64, dt: f64, predictor: Predictor) -> Option<Point> {
        let shift = |base: &Point, v: &Point, h: f64| -> Point { std::array::from_fn(|i| base[i] + v[i] * h) };
        let k1 = self.velocity(p, t)?;
        if predictor == Predictor::Euler {
            return Some(shift(p, &k1, dt));
        }
        let k2 = self.velocity(&shift(p, &k1, dt / 2.0), t + dt / 2.0)?;
        let k3 = self.velocity(&shift(p, &k2, dt / 2.0), t + dt / 2.0)?;
        let k4 = self.velocity(&shift(p, &k3, dt), t + dt)?;
        Some(std::array::from_fn(|i| {
            p[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0)
        }))
    }

    fn newton_step(&self, p: &Point, t: f64) -> Option<Point> {
        let mut rhs = self.eval(p, t).map(|z| -z);
        let mut jac = self.jacobian(p, t);
        lu_solve(&mut jac, &mut rhs).then_some(rhs)
    }

    fn correct(&self, mut p: Point, t: f64, opts: &TrackerOptions) -> Option<Point> {
        let mut previous = f64::INFINITY;
        for _ in 0..opts.corrector_iterations {
            let delta = self.newton_step(&p, t)?;
            let size = norm(&delta);
            if size > 0.5 * previous {
                return None;
            }
            p = std::array::from_fn(|i| p[i] + delta[i]);
            if size <= opts.corrector_tol * (1.0 + norm(&p)) {
                return Some(p);
            }
            previous = size;
        }
        None
    }
}

fn refine(target: &SquareSystem, mut p: Point, opts: &TrackerOptions) -> Point {
    for _ in 0..20 {
        if target.residual(&p) < opts.endpoint_tol {
            break;
        }
        let mut rhs = target.eval(&p).map(|z| -z);
        let mut jac = target.jacobian(&p);
        if !lu_solve(&mut jac, &mut rhs) {
            break;
        }
        let candidate: Point = std::array::from_fn(|i| p[i] + rhs[i]);
        if target.residual(&candidate) >= target.residual(&p) {
            break;
        }
        p = candidate;
    }
    p
}

fn track_one(h: &Homotopy<'_>, start: &Point, opts: &TrackerOptions) -> TrackedPath {
    let mut p = *start;
    let mut t = 0.0;
    let mut step = opts.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    let diverged = |p: Point, steps| TrackedPath {
        start: *start,
        end: p,
        status: PathStatus::Diverged,
        steps,
        residual: f64::INFINITY,
        singular: false,
        retracked: false,
    };
    while t < 1.0 {
        if steps >= opts.max_steps {
            return diverged(p, steps);
        }
        let dt = step.min(1.0 - t);
        let next = h
            .predict(&p, t, dt, opts.predictor)
            .and_then(|q| h.correct(q, t + dt, opts));
        match next {
            Some(q) => {
                p = q;
                t = if 1.0 - (t + dt) < 1e-15 { 1.0 } else { t + dt };
                steps += 1;
                streak += 1;
                if streak >= 5 {
                    step = (step * 1.5).min(opts.max_step);
                    streak = 0;
                }
                if norm(&p) > opts.divergence_norm {
                    return diverged(p, steps);
                }
            }
            None => {
                step /= 2.0;
                streak = 0;
                if step < opts.min_step {
                    return diverged(p, steps);
                }
            }
        }
    }
    let end = refine(h.target, p, opts);
    let residual = h.target.residual(&end);
    let singular = condition_number(&h.target.jacobian(&end)) > opts.singular_condition;
    TrackedPath {
        start: *start,
        end,
        status: if residual < opts.accept_tol {
            PathStatus::Converged
        } else {
            PathStatus::Diverged
        },
        steps,
        residual,
        singular,
        retracked: false,
    }
}

fn close_pairs(paths: &[TrackedPath], tol: f64) -> Vec<usize> {
    let mut flagged = Vec::new();
    for i in 0..paths.len() {
        if paths[i].status != PathStatus::Converged {
            continue;
        }
        for j in i + 1..paths.len() {
            if paths[j].status == PathStatus::Converged && projective_distance(&paths[i].end, &paths[j].end) < tol {
                flagged.push(i);
                flagged.push(j);
            }
        }
    }
    flagged.sort_unstable();
    flagged.dedup();
    flagged
}

/// Tracks each start solution of `start` to `target` along the γ-homotopy,
/// in parallel. Endpoints that land within `distinct_tol` of each other are
/// re-tracked with tighter steps and flagged if they still coincide.
pub fn track(start: &SquareSystem, starts: &[Point], target: &SquareSystem, opts: &TrackerOptions) -> Vec<TrackedPath> {
    let h = Homotopy {
        start,
        target,
        gamma: opts.gamma(),
    };
    let mut paths: Vec<TrackedPath> = starts.par_iter().map(|s| track_one(&h, s, opts)).collect();
    let suspects = close_pairs(&paths, opts.distinct_tol);
    if suspects.is_empty() {
        return paths;
    }
    let tight = opts.tightened();
    let redone: Vec<TrackedPath> = suspects
        .par_iter()
        .map(|&i| track_one(&h, &starts[i], &tight))
        .collect();
    for (&i, mut path) in suspects.iter().zip(redone) {
        path.retracked = true;
        paths[i] = path;
    }
    for i in close_pairs(&paths, opts.distinct_tol) {
        paths[i].status = PathStatus::PathJumpSuspected;
    }
    paths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;
    use crate::tetra32::{enumerate, TetraParams};
    use crate::tracker::{random_vector, tetra_start};

    #[test]
    fn constant_homotopy_returns_starts() {
        let patch = random_vector(&mut ChaCha8Rng::seed_from_u64(11));
        let (sys, starts) = tetra_start(&TetraParams::new(ratio(1, 10), ratio(1, 10)), &patch).unwrap();
        let opts = TrackerOptions {
            gamma: Some(Complex64::new(1.0, 0.0)),
            ..Default::default()
        };
        for path in track(&sys, &starts, &sys, &opts) {
            assert_eq!(path.status, PathStatus::Converged);
            assert!(norm(&std::array::from_fn::<_, 6, _>(|i| path.end[i] - path.start[i])) < 1e-12);
        }
    }

    #[test]
    fn tetra_to_tetra_matches_closed_form() {
        let patch = random_vector(&mut ChaCha8Rng::seed_from_u64(5));
        let (from, starts) = tetra_start(&TetraParams::new(ratio(1, 10), ratio(1, 10)), &patch).unwrap();
        let target_params = TetraParams::new(ratio(1, 10), ratio(1, 20));
        let (to, _) = tetra_start(&target_params, &patch).unwrap();
        for predictor in [Predictor::RungeKutta4, Predictor::Euler] {
            let opts = TrackerOptions {
                seed: 9,
                predictor,
                ..Default::default()
            };
            let paths = track(&from, &starts, &to, &opts);
            let closed: Vec<_> = enumerate(&target_params)
                .unwrap()
                .iter()
                .map(|s| s.to_complex())
                .collect();
            let mut used = vec![false; closed.len()];
            for path in &paths {
                assert_eq!(path.status, PathStatus::Converged);
                let (best, d) = closed
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .map(|(i, c)| (i, projective_distance(&path.end, c)))
                    .fold((usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
                assert!(d < 1e-9, "{d}");
                used[best] = true;
            }
        }
    }
}

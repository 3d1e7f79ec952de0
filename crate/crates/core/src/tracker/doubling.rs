//! Replacing incidence conditions one at a time by tangency to thin
//! cylinders around the same lines doubles the number of real solutions.
//!
//! The lines are four edges of the regular tetrahedron with vertices
//! `V0 = (1,1,1)`, `V1 = (1,-1,-1)`, `V2 = (-1,1,-1)`, `V3 = (-1,-1,1)`:
//! `V1V2, V2V3, V3V0, V0V1`. Their two transversals are the remaining
//! edges `V1V3` and `V0V2`.

use serde::{Deserialize, Serialize};

use super::{solve, Condition, StartPolicy, TangencySystem, TrackerOptions};
use crate::error::{Error, Result};
use crate::exactnum::{int, ratio, Rational};
use crate::quadrics::{cylinder, AffineFlat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radii {
    Fixed(#[serde(with = "crate::exactnum::rational::serde_vec")] Vec<Rational>),
    /// Equal radii starting at 1/10, halved until the expected real count
    /// appears (at most 20 halvings per stage).
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingStage {
    /// Number of tangency conditions.
    pub i: usize,
    #[serde(with = "crate::exactnum::rational::serde_vec")]
    pub radii: Vec<Rational>,
    pub expected: usize,
    pub real: usize,
    pub distinct: usize,
    pub converged: usize,
    pub halvings: u32,
    /// Auto search ran out of halvings; the counts are the best found.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub stages: Vec<DoublingStage>,
}

impl DoublingReport {
    pub fn real_counts(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.real).collect()
    }
}

pub fn doubling_lines() -> [AffineFlat; 4] {
    let v = |a: i64, b: i64, c: i64| vec![int(a), int(b), int(c)];
    let vs = [v(1, 1, 1), v(1, -1, -1), v(-1, 1, -1), v(-1, -1, 1)];
    let edge = |a: usize, b: usize| AffineFlat::line_through(&vs[a], &vs[b]).expect("distinct vertices");
    [edge(1, 2), edge(2, 3), edge(3, 0), edge(0, 1)]
}

/// Tangency to `Cy(U_j, r_j)` for `j < i`, incidence with `U_j` otherwise.
pub fn doubling_system(i: usize, radii: &[Rational]) -> Result<TangencySystem> {
    if i > 4 || radii.len() < i {
        return Err(Error::OutOfRange(format!(
            "stage {i} needs {i} radii, got {}",
            radii.len()
        )));
    }
    let lines = doubling_lines();
    let mut conditions = Vec::with_capacity(4);
    for (j, u) in lines.iter().enumerate() {
        conditions.push(if j < i {
            Condition::TangentTo(cylinder(u, &radii[j])?.with_label(format!("Cy(U{}, {})", j + 1, radii[j])))
        } else {
            Condition::Meets(u.to_proj()?.hyperplanes()?)
        });
    }
    TangencySystem::new(conditions)
}

fn run_stage(i: usize, radii: &[Rational], opts: &TrackerOptions) -> Result<DoublingStage> {
    let sys = doubling_system(i, radii)?;
    let report = solve(&sys, &StartPolicy::Auto, opts)?;
    Ok(DoublingStage {
        i,
        radii: radii[..i].to_vec(),
        expected: sys.root_bound(),
        real: report.real_count(),
        distinct: report.distinct,
        converged: report.converged().count(),
        halvings: 0,
        exhausted: false,
    })
}

pub fn doubling_experiment(radii: &Radii, opts: &TrackerOptions) -> Result<DoublingReport> {
    let mut stages = Vec::with_capacity(5);
    for i in 0..=4 {
        let stage = match radii {
            Radii::Fixed(r) => {
                if r.len() != 4 || r.iter().any(|x| x <= &int(0)) {
                    return Err(Error::OutOfRange("need four positive radii".into()));
                }
                run_stage(i, r, opts)?
            }
            Radii::Auto => {
                let mut r = ratio(1, 10);
                let mut best: Option<DoublingStage> = None;
                let mut found = None;
                for halvings in 0..=20u32 {
                    let mut stage = run_stage(i, &vec![r.clone(); 4], opts)?;
                    stage.halvings = halvings;
                    if stage.real == stage.expected {
                        found = Some(stage);
                        break;
                    }
                    if best.as_ref().is_none_or(|b| stage.real > b.real) {
                        best = Some(stage);
                    }
                    if i == 0 {
                        break;
                    }
                    r /= int(2);
                }
                found.unwrap_or_else(|| {
                    let mut b = best.expect("at least one attempt");
                    b.exhausted = true;
                    b
                })
            }
        };
        stages.push(stage);
    }
    Ok(DoublingReport { stages })
}

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use quadtangent::exactnum::{subset_label, subsets, CplxMatrix};
use quadtangent::grassmann::{normalize_complex, ComplexPlucker};
use quadtangent::quadrics::{tangency_form, tangency_residual_numeric};

use crate::error::{CliError, CliResult};
use crate::scene::Scene;

pub const FORMAT: &str = "quadtangent-certificate/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest residual a solution may have.
    pub residual: f64,
    /// Largest imaginary part (after normalization) of a real solution.
    pub real: f64,
    /// Smallest projective distance between distinct solutions.
    pub distinct: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CountsSummary {
    pub total: usize,
    pub real: usize,
    pub nonreal: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_paths: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub id: usize,
    /// Unit-normalized numeric Plücker coordinates as `[re, im]`, keyed by
    /// index label (`"01"`, `"02"`, …).
    pub plucker: BTreeMap<String, [f64; 2]>,
    pub real: bool,
    pub residual: f64,
    /// Exact coordinates, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<BTreeMap<String, String>>,
    /// Provenance of the solution within the producing command.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub origin: serde_json::Value,
}

impl SolutionRecord {
    pub fn new(id: usize, coords: &[Complex64], scene: &Scene, real_tol: f64) -> CliResult<Self> {
        let p = normalize_complex(coords);
        let labels = coordinate_labels(scene.n, coords.len())?;
        Ok(Self {
            id,
            plucker: labels.into_iter().zip(&p).map(|(l, z)| (l, [z.re, z.im])).collect(),
            real: is_real(&p, real_tol),
            residual: solution_residual(scene, &p)?,
            exact: None,
            origin: serde_json::Value::Null,
        })
    }

    pub fn coords(&self) -> Vec<Complex64> {
        self.plucker.values().map(|[re, im]| Complex64::new(*re, *im)).collect()
    }
}

fn coordinate_labels(n: usize, len: usize) -> CliResult<Vec<String>> {
    let sets = subsets(n + 1, 2);
    if sets.len() != len {
        return Err(CliError::Input(format!(
            "expected {} line coordinates in P^{n}, got {len}",
            sets.len()
        )));
    }
    Ok(sets.iter().map(|s| subset_label(s)).collect())
}

pub fn is_real(normalized: &[Complex64], tol: f64) -> bool {
    normalized.iter().all(|z| z.im.abs() < tol)
}

/// Largest of: every tangency residual `|pᵀ(∧²Q)p| / (‖∧²Q‖ ‖p‖²)`, every
/// incidence residual `|q·p| / (‖q‖ ‖p‖)`, and the Plücker relation.
pub fn solution_residual(scene: &Scene, coords: &[Complex64]) -> CliResult<f64> {
    let p = normalize_complex(coords);
    let mut worst = ComplexPlucker::new(1, scene.n, p.clone())?.relation_residual();
    for q in scene.quadric_list()? {
        let form = CplxMatrix::from_rat(&tangency_form(&q, 1)?);
        worst = worst.max(tangency_residual_numeric(&form, &p));
    }
    for f in &scene.flats {
        let dual = quadtangent::grassmann::dual_plucker(&f.flat.dual_flat()?)?;
        let q: Vec<f64> = dual
            .coords()
            .iter()
            .map(quadtangent::exactnum::rational::to_f64)
            .collect();
        let dot: Complex64 = q.iter().zip(&p).map(|(a, b)| b * a).sum();
        let qn = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        worst = worst.max(dot.norm() / qn);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub command: String,
    pub tool_version: String,
    pub scene_hash: String,
    pub scene: Scene,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub counts: CountsSummary,
    pub solutions: Vec<SolutionRecord>,
    /// Command-specific data (parameters, path statistics, …).
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Certificate {
    pub fn new(command: &str, scene: Scene, tolerances: Tolerances, solutions: Vec<SolutionRecord>) -> Self {
        let real = solutions.iter().filter(|s| s.real).count();
        Self {
            format: FORMAT.into(),
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            scene_hash: scene.hash(),
            scene,
            seed: None,
            tolerances,
            counts: CountsSummary {
                total: solutions.len(),
                real,
                nonreal: solutions.len() - real,
                ..Default::default()
            },
            solutions,
            details: serde_json::Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionCheck {
    pub id: usize,
    pub recorded: f64,
    pub recomputed: f64,
    pub real_recorded: bool,
    pub real_recomputed: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub scene_hash_ok: bool,
    pub counts_ok: bool,
    pub solutions: Vec<SolutionCheck>,
    pub failures: Vec<String>,
}

/// Re-evaluates a certificate from its embedded scene. A solution passes
/// when its recomputed residual is within the tolerance and within 10× of
/// the recorded value, and its reality flag is reproduced.
pub fn verify(cert: &Certificate, external_scene: Option<&Scene>) -> CliResult<VerifyReport> {
    let mut failures = Vec::new();
    if cert.format != FORMAT {
        failures.push(format!("unknown certificate format {:?}", cert.format));
    }
    let embedded = cert.scene.hash();
    let mut scene_hash_ok = embedded == cert.scene_hash;
    if !scene_hash_ok {
        failures.push("embedded scene does not match the recorded scene hash".into());
    }
    if let Some(s) = external_scene {
        if s.hash() != cert.scene_hash {
            scene_hash_ok = false;
            failures.push("certificate was issued for a different scene (scene hash mismatch)".into());
        }
    }
    cert.scene.validate()?;
    let tol = &cert.tolerances;
    let mut checks = Vec::with_capacity(cert.solutions.len());
    for s in &cert.solutions {
        let coords = s.coords();
        let recomputed = solution_residual(&cert.scene, &coords)?;
        let real = is_real(&normalize_complex(&coords), tol.real);
        let pass = recomputed.is_finite()
            && recomputed <= tol.residual
            && recomputed <= 10.0 * s.residual.max(f64::EPSILON)
            && real == s.real;
        if !pass {
            failures.push(format!(
                "solution {}: recorded residual {:.3e}, recomputed {:.3e}, real {} vs {}",
                s.id, s.residual, recomputed, s.real, real
            ));
        }
        checks.push(SolutionCheck {
            id: s.id,
            recorded: s.residual,
            recomputed,
            real_recorded: s.real,
            real_recomputed: real,
            pass,
        });
    }
    let real = checks.iter().filter(|c| c.real_recomputed).count();
    let counts_ok =
        cert.counts.total == checks.len() && cert.counts.real == real && cert.counts.nonreal == checks.len() - real;
    if !counts_ok {
        failures.push("counts summary does not match the solution list".into());
    }
    Ok(VerifyReport {
        pass: failures.is_empty(),
        scene_hash_ok,
        counts_ok,
        solutions: checks,
        failures,
    })
}

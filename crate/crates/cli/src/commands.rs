use std::collections::BTreeMap;

use serde_json::json;

use quadtangent::exactnum::rational::format_rational;
use quadtangent::exactnum::{subset_label, subsets, Rational};
use quadtangent::grassmann::{
    counts as grassmann_counts, moment_osculating_flat, transversals_to_4_lines, Counts, ProjFlat, Transversals,
};
use quadtangent::tetra32::{self, min_pairwise_distance, TetraParams, COORD_LABELS};
use quadtangent::tracker::{
    self, doubling_experiment, DoublingReport, PathStatus, Radii, StartPolicy, TrackedPath, TrackerOptions,
};

use crate::certificate::{Certificate, SolutionRecord, Tolerances};
use crate::error::{CliError, CliResult};
use crate::scene::Scene;

/// Settings shared by all subcommands.
#[derive(Clone, Debug)]
pub struct Global {
    pub seed: u64,
    pub tol: f64,
}

impl Default for Global {
    fn default() -> Self {
        Self { seed: 0, tol: 1e-12 }
    }
}

impl Global {
    fn tracker_options(&self) -> TrackerOptions {
        TrackerOptions {
            seed: self.seed,
            ..Default::default()
        }
    }

    fn tolerances(&self, residual: f64) -> Tolerances {
        let o = TrackerOptions::default();
        Tolerances {
            residual,
            real: o.real_tol,
            distinct: o.distinct_tol,
        }
    }
}

pub fn counts(k: usize, n: usize) -> CliResult<Counts> {
    Ok(grassmann_counts(k, n)?)
}

/// Parses `"3..9"` (inclusive) or a single value.
pub fn parse_range(text: &str) -> CliResult<std::ops::RangeInclusive<usize>> {
    let bad = || CliError::Input(format!("bad range {text:?}; expected like 3..9"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim_start_matches('=').trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

pub fn counts_table(k: usize, range: std::ops::RangeInclusive<usize>) -> CliResult<Vec<Counts>> {
    range.map(|n| counts(k, n)).collect()
}

pub fn parse_rational_arg(text: &str) -> CliResult<Rational> {
    quadtangent::exactnum::parse_rational(text).map_err(|e| CliError::Input(e.to_string()))
}

pub fn parse_rational_list(text: &str) -> CliResult<Vec<Rational>> {
    text.split(',').map(|t| parse_rational_arg(t.trim())).collect()
}

fn tetra_scene(params: &TetraParams) -> Scene {
    let mut scene = tetra32::family(params)
        .iter()
        .fold(Scene::new(3), |s, q| s.with_quadric(q));
    scene
        .metadata
        .insert("alpha".into(), format_rational(&params.alpha).into());
    scene
        .metadata
        .insert("beta".into(), format_rational(&params.beta).into());
    scene
}

/// The 32 closed-form tangents, each instantiated and verified.
pub fn tetra(params: &TetraParams, global: &Global) -> CliResult<Certificate> {
    let solved = tetra32::solve(params)?;
    let (exact_real, exact_nonreal) = tetra32::reality_count(params)?;
    let scene = tetra_scene(params);
    let tol = global.tolerances(global.tol);
    let mut records = Vec::with_capacity(solved.len());
    for (id, s) in solved.iter().enumerate() {
        let mut r = SolutionRecord::new(id, &s.coords, &scene, tol.real)?;
        let mut exact: BTreeMap<String, String> = COORD_LABELS
            .iter()
            .zip(&s.solution.coords)
            .map(|(l, c)| (l.to_string(), c.symbolic()))
            .collect();
        if let Some(root) = &s.solution.root {
            exact.insert("x".into(), root.symbolic());
        }
        r.exact = Some(exact);
        r.origin = json!({
            "case": s.solution.case,
            "signs": s.solution.signs,
            "branch": s.solution.branch,
            "exact_real": s.real,
            "equation_residual": s.report.max,
        });
        records.push(r);
    }
    let distance = min_pairwise_distance(&solved.iter().map(|s| s.coords).collect::<Vec<_>>());
    let mut cert = Certificate::new("tetra", scene, tol, records);
    cert.counts.expected = Some(32);
    let root = solved.iter().find_map(|s| s.solution.root.clone());
    cert.details = json!({
        "params": params,
        "discriminant": format_rational(&params.discriminant()),
        "exact_reality_count": {"real": exact_real, "nonreal": exact_nonreal},
        "in_reality_region": params.in_reality_region(),
        "min_pairwise_distance": distance,
        "distinct": distance > cert.tolerances.distinct,
        "case3_root": root,
    });
    Ok(cert)
}

fn path_log(paths: &[TrackedPath]) -> Vec<serde_json::Value> {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "path": i,
                "status": p.status,
                "steps": p.steps,
                "residual": p.residual,
                "singular": p.singular,
                "endpoint": p.end.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        })
        .collect()
}

/// Tracks the scene's system; returns the certificate, the path log, and an
/// error to report after writing output when some paths failed.
pub fn track(
    scene: &Scene,
    policy: &StartPolicy,
    global: &Global,
) -> CliResult<(Certificate, Vec<serde_json::Value>, Option<CliError>)> {
    let sys = scene.tangency_system()?;
    let opts = global.tracker_options();
    let report = tracker::solve(&sys, policy, &opts)?;
    let tol = global.tolerances(opts.accept_tol);
    let mut records = Vec::new();
    for (i, p) in report.paths.iter().enumerate() {
        if p.status != PathStatus::Converged {
            continue;
        }
        let mut r = SolutionRecord::new(records.len(), &p.end, scene, tol.real)?;
        r.origin = json!({"path": i, "steps": p.steps, "singular": p.singular, "retracked": p.retracked});
        records.push(r);
    }
    let failed = report.paths.len() - records.len();
    let mut cert = Certificate::new("track", scene.clone(), tol, records);
    cert.seed = Some(global.seed);
    cert.counts.expected = Some(report.bound);
    cert.counts.failed_paths = Some(failed);
    let status_count = |s: PathStatus| report.paths.iter().filter(|p| p.status == s).count();
    cert.details = json!({
        "start": report.start,
        "gamma": [report.gamma.re, report.gamma.im],
        "bound": report.bound,
        "distinct": report.distinct,
        "paths": {
            "total": report.paths.len(),
            "converged": status_count(PathStatus::Converged),
            "diverged": status_count(PathStatus::Diverged),
            "path_jump_suspected": status_count(PathStatus::PathJumpSuspected),
            "singular": report.paths.iter().filter(|p| p.singular).count(),
        },
        "conjugate_pairs": report.classification.pairs.len(),
        "unpaired_nonreal": report.classification.unpaired,
        "at_infinity": report.classification.at_infinity,
    });
    let err =
        (failed > 0).then(|| CliError::Numerical(format!("{failed} of {} paths did not converge", report.paths.len())));
    Ok((cert, path_log(&report.paths), err))
}

pub fn doubling(radii: &Radii, global: &Global) -> CliResult<DoublingReport> {
    if let Radii::Fixed(r) = radii {
        if r.len() != 4 {
            return Err(CliError::Input(format!("need 4 radii, got {}", r.len())));
        }
        if r.iter().any(|x| x <= &Rational::from_integer(0.into())) {
            return Err(CliError::Input("radii must be > 0".into()));
        }
    }
    Ok(doubling_experiment(radii, &global.tracker_options())?)
}

/// Which four lines to intersect.
#[derive(Clone, Debug)]
pub enum LineSource {
    Tetrahedron,
    Moment(Vec<Rational>),
    Scene(Scene),
}

fn lines_scene(source: &LineSource) -> CliResult<Scene> {
    match source {
        LineSource::Tetrahedron => {
            let mut scene = Scene::new(3);
            for (i, l) in tetra32::tetrahedron_lines().iter().enumerate() {
                scene = scene.with_line(format!("l{}", i + 1), l);
            }
            Ok(scene)
        }
        LineSource::Moment(s) => {
            if s.len() != 4 {
                return Err(CliError::Input(format!("need 4 curve parameters, got {}", s.len())));
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    if s[i] == s[j] {
                        return Err(CliError::Input(format!(
                            "curve parameters must be distinct, {} repeats",
                            format_rational(&s[i])
                        )));
                    }
                }
            }
            let mut scene = Scene::new(3);
            for t in s {
                let l: ProjFlat = moment_osculating_flat(3, t)?;
                scene = scene.with_line(format!("tangent at {}", format_rational(t)), &l);
            }
            Ok(scene)
        }
        LineSource::Scene(s) => {
            if s.n != 3 || !s.quadrics.is_empty() || s.flats.len() != 4 {
                return Err(CliError::Input("transversal scenes need exactly 4 lines in P^3".into()));
            }
            Ok(s.clone())
        }
    }
}

/// Exact common transversals of four lines.
pub fn transversals(source: &LineSource, global: &Global) -> CliResult<Certificate> {
    let scene = lines_scene(source)?;
    let lines = scene.line_list()?;
    let result = transversals_to_4_lines(&lines)?;
    let found = match &result {
        Transversals::Finite { lines } => lines,
        Transversals::InfiniteFamily { dimension } => {
            return Err(CliError::Degenerate(format!(
                "the four lines have a {dimension}-dimensional family of transversals"
            )))
        }
    };
    let tol = global.tolerances(global.tol);
    let labels: Vec<String> = subsets(4, 2).iter().map(|s| subset_label(s)).collect();
    let mut records = Vec::new();
    for (id, t) in found.iter().enumerate() {
        let mut r = SolutionRecord::new(id, &t.plucker.to_complex(), &scene, tol.real)?;
        let exact: BTreeMap<String, String> = labels
            .iter()
            .cloned()
            .zip(t.plucker.coords().iter().map(|c| c.to_string()))
            .collect();
        r.exact = Some(exact);
        r.origin = json!({"multiplicity": t.multiplicity, "exact_real": t.real});
        records.push(r);
    }
    let mut cert = Certificate::new("transversals", scene, tol, records);
    cert.counts.expected = Some(2);
    cert.details = json!({
        "real_count": result.real_count(),
        "radicand": found.first().map(|t| format_rational(&t.plucker.radicand)),
    });
    Ok(cert)
}

pub fn parse_start_policy(name: &str, alpha: Option<Rational>, beta: Option<Rational>) -> CliResult<StartPolicy> {
    match name {
        "auto" => Ok(StartPolicy::Auto),
        "linear-product" | "total-degree" => Ok(StartPolicy::LinearProduct),
        "tetra" => Ok(StartPolicy::Tetra(TetraParams::new(
            alpha.unwrap_or_else(|| quadtangent::exactnum::ratio(1, 10)),
            beta.unwrap_or_else(|| quadtangent::exactnum::ratio(1, 20)),
        ))),
        other => Err(CliError::Input(format!("unknown start policy {other:?}"))),
    }
}

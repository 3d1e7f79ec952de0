//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use quadtangent::exactnum::{int, ratio, RatMatrix, Rational};
use quadtangent::grassmann::{
    check_plucker_relations, dual_plucker, incidence, moment_osculating_flat, plucker, projective_distance,
    transversals_to_4_lines, DualFlat, ProjFlat,
};
use quadtangent::quadrics::{cylinder_squared, is_tangent, AffineFlat, Quadric};
use quadtangent::tetra32::{self, TetraParams};
use quadtangent::tracker::{
    self, classify_real, doubling_lines, doubling_system, Condition, PathStatus, StartPolicy, TangencySystem,
    TrackerOptions,
};
use quadtangent_cli::commands::{self, Global};
use quadtangent_cli::Scene;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn run(args: &[&str]) -> (Output, Duration) {
    let t = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_quadtangent"))
        .args(args)
        .output()
        .expect("binary runs");
    (o, t.elapsed())
}

fn run_json(args: &[&str]) -> Result<(Value, Duration), String> {
    let (o, dt) = run(args);
    if !o.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    let v = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    Ok((v, dt))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Largest distance from a point of `a` to its nearest unused point of `b`.
fn matching_distance(a: &[[Complex64; 6]], b: &[[Complex64; 6]]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, projective_distance(x, y)))
            .fold((usize::MAX, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn tetra_system(p: &TetraParams) -> TangencySystem {
    TangencySystem::new(tetra32::family(p).into_iter().map(Condition::TangentTo).collect()).expect("four quadrics")
}

fn converged(report: &tracker::SolveReport) -> Vec<[Complex64; 6]> {
    report
        .paths
        .iter()
        .filter(|p| p.status == PathStatus::Converged)
        .map(|p| p.end)
        .collect()
}

fn counting_table() -> Check {
    let (o, dt) = run(&["counts", "--table"]);
    let text = String::from_utf8_lossy(&o.stdout);
    let row = "2^d*#\t32\t320\t3584\t43008\t540672\t7028736\t93716480";
    ensure(o.status.success() && text.lines().any(|l| l == row), || {
        format!("row missing from:\n{text}")
    })?;
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("n=3..9 row exact, {dt:.2?}"))
}

fn closed_form_reality() -> Check {
    let mut notes = Vec::new();
    for (a, b) in [("1/10", "1/10"), ("1/10", "1/20")] {
        let (c, dt) = run_json(&["tetra", a, b])?;
        let sols = c["solutions"].as_array().ok_or("no solutions")?;
        let worst = sols
            .iter()
            .map(|s| s["residual"].as_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        ensure(sols.len() == 32 && c["counts"]["real"] == 32, || {
            format!("({a},{b}): {}", c["counts"])
        })?;
        ensure(c["details"]["distinct"] == true, || format!("({a},{b}) not distinct"))?;
        ensure(worst < 1e-12, || format!("({a},{b}) residual {worst:e}"))?;
        ensure(dt < Duration::from_secs(1), || format!("({a},{b}) took {dt:?}"))?;
        notes.push(format!("({a},{b}) 32 real, max residual {worst:.1e}, {dt:.2?}"));
    }
    Ok(notes.join("; "))
}

fn reality_boundary() -> Check {
    let (c, _) = run_json(&["tetra", "1/5", "1/5"])?;
    ensure(c["counts"]["real"] == 16 && c["counts"]["nonreal"] == 16, || {
        format!("{}", c["counts"])
    })?;
    ensure(c["details"]["discriminant"] == "-144/625", || {
        format!("discriminant {}", c["details"]["discriminant"])
    })?;
    for (a, b, factor) in [
        ("1", "1/10", "1−α²"),
        ("1/10", "1", "1−β²"),
        ("0", "1/3", "α"),
        ("2", "1/2", "1−αβ"),
    ] {
        let (o, _) = run(&["tetra", a, b]);
        let err = String::from_utf8_lossy(&o.stderr);
        ensure(
            o.status.code() == Some(2) && err.contains(&format!("{factor} = 0")),
            || format!("({a},{b}) exit {:?}: {err}", o.status.code()),
        )?;
    }
    Ok("1/5: 16 real + 16 non-real, discriminant -144/625; vanishing factors exit 2 by name".into())
}

fn tracker_consistency() -> Check {
    let t = Instant::now();
    let target = TetraParams::new(ratio(1, 10), ratio(1, 20));
    let start = StartPolicy::Tetra(TetraParams::new(ratio(1, 10), ratio(1, 10)));
    let opts = TrackerOptions {
        seed: 7,
        ..Default::default()
    };
    let sys = tetra_system(&target);
    let a = tracker::solve(&sys, &start, &opts).map_err(|e| e.to_string())?;
    let b = tracker::solve(&sys, &start, &opts).map_err(|e| e.to_string())?;
    let ends = converged(&a);
    ensure(ends.len() == 32, || format!("{}/32 converged", ends.len()))?;
    let oracle: Vec<[Complex64; 6]> = tetra32::solve(&target)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| s.coords)
        .collect();
    let d = matching_distance(&ends, &oracle);
    ensure(d < 1e-9, || format!("matched distance {d:e}"))?;
    let same = a
        .paths
        .iter()
        .zip(&b.paths)
        .all(|(x, y)| x.end == y.end && x.steps == y.steps);
    ensure(same, || "reruns with one seed differ".into())?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(30), || format!("took {dt:?}"))?;
    Ok(format!(
        "32/32 converged, matched distance {d:.1e}, deterministic, {dt:.2?}"
    ))
}

fn doubling() -> Check {
    let (v, _) = run_json(&["doubling", "--auto", "--format", "json"])?;
    let real: Vec<u64> = v["stages"]
        .as_array()
        .ok_or("no stages")?
        .iter()
        .filter_map(|s| s["real"].as_u64())
        .collect();
    ensure(real == [2, 4, 8, 16, 32], || format!("real counts {real:?}"))?;

    let lines: Vec<ProjFlat> = doubling_lines()
        .iter()
        .map(|u| u.to_proj())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let exact = transversals_to_4_lines(&lines).map_err(|e| e.to_string())?;
    ensure(exact.real_count() == 2, || {
        format!("{} exact real transversals", exact.real_count())
    })?;
    let sys = doubling_system(0, &[]).map_err(|e| e.to_string())?;
    let report = tracker::solve(&sys, &StartPolicy::Auto, &TrackerOptions::default()).map_err(|e| e.to_string())?;
    let exact_points: Vec<[Complex64; 6]> = exact
        .lines()
        .iter()
        .map(|t| {
            let c = t.plucker.to_complex();
            std::array::from_fn(|i| c[i])
        })
        .collect();
    let d = matching_distance(&converged(&report), &exact_points);
    ensure(d < 1e-9, || format!("stage 0 vs exact transversals: {d:e}"))?;
    Ok(format!(
        "real counts {real:?}; stage 0 matches exact transversals to {d:.1e}"
    ))
}

fn transversal_exactness() -> Check {
    let (c, _) = run_json(&["transversals", "--tetrahedron"])?;
    let sols = c["solutions"].as_array().ok_or("no solutions")?;
    let unit = |label: &str| {
        sols.iter().any(|s| {
            s["exact"]
                .as_object()
                .is_some_and(|e| e.iter().all(|(k, v)| v == if k == label { "1" } else { "0" }))
        })
    };
    ensure(sols.len() == 2 && unit("13") && unit("02"), || {
        format!("tetrahedron transversals {sols:?}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut draws = 0;
    while draws < 50 {
        let s: Vec<Rational> = (0..4)
            .map(|_| ratio(rng.gen_range(-40..=40), rng.gen_range(1..=9)))
            .collect();
        if (0..4).any(|i| (i + 1..4).any(|j| s[i] == s[j])) {
            continue;
        }
        draws += 1;
        let lines: Vec<ProjFlat> = s
            .iter()
            .map(|t| moment_osculating_flat(3, t))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let t = transversals_to_4_lines(&lines).map_err(|e| e.to_string())?;
        ensure(t.lines().len() == 2 && t.real_count() == 2, || {
            format!("{s:?}: {} real", t.real_count())
        })?;
    }
    Ok("tetrahedron: p13=1 and p02=1 exactly; 50/50 moment draws give 2 real".into())
}

fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, range: i64) -> RatMatrix {
    RatMatrix::new(
        rows,
        cols,
        (0..rows * cols).map(|_| int(rng.gen_range(-range..=range))).collect(),
    )
    .unwrap()
}

fn random_vec3(rng: &mut ChaCha8Rng, range: i64) -> Vec<Rational> {
    (0..3).map(|_| int(rng.gen_range(-range..=range))).collect()
}

fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn property_suites() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let (a, b) = (
            random_int_matrix(&mut rng, 4, 4, 9),
            random_int_matrix(&mut rng, 4, 4, 9),
        );
        for r in 1..=3 {
            let lhs = a.matmul(&b).unwrap().exterior_power(r).unwrap();
            let rhs = a
                .exterior_power(r)
                .unwrap()
                .matmul(&b.exterior_power(r).unwrap())
                .unwrap();
            ensure(lhs == rhs, || format!("Cauchy–Binet fails at r={r}"))?;
        }
    }
    let mut checked = 0;
    while checked < 200 {
        let (k, n) = [(1, 3), (1, 4), (2, 4), (2, 5)][checked % 4];
        let Ok(f) = ProjFlat::new(random_int_matrix(&mut rng, n + 1, k + 1, 5)) else {
            continue;
        };
        checked += 1;
        ensure(check_plucker_relations(&plucker(&f).unwrap()).is_zero(), || {
            "Plücker relation fails".into()
        })?;
    }
    let mut checked = 0;
    while checked < 200 {
        let (k, n) = [(1, 3), (1, 4), (2, 4)][checked % 3];
        let Ok(u) = ProjFlat::new(random_int_matrix(&mut rng, n + 1, k + 1, 1)) else {
            continue;
        };
        let h = random_int_matrix(&mut rng, n + 1, k + 1, 1);
        if h.rank() != k + 1 {
            continue;
        }
        checked += 1;
        let v = DualFlat::new(h).unwrap();
        let meets = incidence(&plucker(&u).unwrap(), &dual_plucker(&v).unwrap())
            .unwrap()
            .is_zero();
        let joint = u.span().hstack(v.kernel().unwrap().span()).unwrap();
        ensure(meets == (joint.rank() < n + 1), || {
            "incidence and rank drop disagree".into()
        })?;
    }
    let mut checked = 0;
    while checked < 200 {
        let (a, d, b, e) = (
            random_vec3(&mut rng, 4),
            random_vec3(&mut rng, 3),
            random_vec3(&mut rng, 4),
            random_vec3(&mut rng, 3),
        );
        let n = cross(&d, &e);
        if n.iter().all(Zero::is_zero) {
            continue;
        }
        checked += 1;
        let diff: Vec<Rational> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        let dist2 = dot(&diff, &n) * dot(&diff, &n) / dot(&n, &n);
        let tip: Vec<Rational> = a.iter().zip(&d).map(|(x, y)| x + y).collect();
        let line = plucker(&ProjFlat::affine_line_through(&a, &tip).unwrap()).unwrap();
        let axis = AffineFlat::new(b, &[e]).unwrap();
        for (r2, expected) in [(dist2.clone(), true), (&dist2 + ratio(1, 3), false)] {
            let v = is_tangent(&cylinder_squared(&axis, &r2).unwrap(), &line).unwrap();
            ensure(v.tangent == expected, || {
                "cylinder tangency disagrees with distance".into()
            })?;
        }
    }
    let opts = TrackerOptions {
        seed: 5,
        ..Default::default()
    };
    let report = tracker::solve(
        &tetra_system(&TetraParams::new(ratio(1, 5), ratio(1, 5))),
        &StartPolicy::Auto,
        &opts,
    )
    .map_err(|e| e.to_string())?;
    let c = classify_real(&report.paths, opts.real_tol);
    ensure(
        c.pairs.len() == 8 && c.unpaired.is_empty() && c.real.len() == 16,
        || format!("pairing {c:?}"),
    )?;
    let sys = random_system(&mut ChaCha8Rng::seed_from_u64(31));
    let run = |seed| {
        tracker::solve(
            &sys,
            &StartPolicy::Auto,
            &TrackerOptions {
                seed,
                ..Default::default()
            },
        )
    };
    let (x, y) = (run(1).map_err(|e| e.to_string())?, run(2).map_err(|e| e.to_string())?);
    let d = matching_distance(&converged(&x), &converged(&y));
    ensure(x.gamma != y.gamma && d < 1e-8, || format!("gamma dependence {d:e}"))?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(120), || format!("took {dt:?}"))?;
    Ok(format!(
        "Cauchy–Binet, Plücker closure, incidence, cylinder distance (200 each), pairing, γ-independence; {dt:.2?}"
    ))
}

/// Symmetric matrix with entries on a 1/1000 grid of [-1, 1].
fn random_quadric(rng: &mut ChaCha8Rng) -> Quadric {
    let mut m = RatMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            let v = ratio(rng.gen_range(-1000..=1000), 1000);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    Quadric::new(m).unwrap()
}

fn random_system(rng: &mut ChaCha8Rng) -> TangencySystem {
    TangencySystem::new((0..4).map(|_| Condition::TangentTo(random_quadric(rng))).collect()).unwrap()
}

fn random_quadric_robustness() -> Check {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let scene = (0..4).fold(Scene::new(3), |s, _| s.with_quadric(&random_quadric(&mut rng)));
        let (cert, _, failed) = match commands::track(
            &scene,
            &StartPolicy::Auto,
            &Global {
                seed,
                ..Default::default()
            },
        ) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let max = cert.solutions.iter().map(|s| s.residual).fold(0.0, f64::max);
        worst = worst.max(max);
        let ok = failed.is_none()
            && cert.counts.total == 32
            && cert.details["distinct"] == 32
            && max < 1e-10
            && cert.counts.nonreal % 2 == 0;
        if !ok {
            failures.push(format!(
                "seed {seed}: {} converged, {} distinct, residual {max:e}, {} non-real",
                cert.counts.total, cert.details["distinct"], cert.counts.nonreal
            ));
        }
    }
    for f in &failures {
        eprintln!("    {f}");
    }
    ensure(failures.is_empty(), || format!("{}/100 scenes failed", failures.len()))?;
    Ok(format!(
        "100/100 scenes: 32 distinct converged, max residual {worst:.1e}, even non-real counts"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("counting table", counting_table),
        ("closed-form reality", closed_form_reality),
        ("reality boundary", reality_boundary),
        ("tracker consistency", tracker_consistency),
        ("doubling experiment", doubling),
        ("transversal exactness", transversal_exactness),
        ("property suites", property_suites),
        ("random-quadric robustness", random_quadric_robustness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(note) => println!("PASS {} {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

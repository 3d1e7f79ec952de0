use num_complex::Complex64;
use quadtangent::exactnum::{ratio, RatMatrix, Rational};
use quadtangent::grassmann::{normalize_complex, projective_distance, transversals_to_4_lines};
use quadtangent::quadrics::Quadric;
use quadtangent::tetra32::TetraParams;
use quadtangent::tracker::{
    build_square_system, classify_real, doubling_experiment, doubling_lines, doubling_system, solve, tetra_start,
    track, Condition, PathStatus, Radii, StartPolicy, TangencySystem, TrackedPath, TrackerOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Symmetric matrix with entries on a 1/1000 grid of [-1, 1].
fn random_quadric(rng: &mut ChaCha8Rng) -> Quadric {
    let mut m = RatMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            let v: Rational = ratio(rng.gen_range(-1000..=1000), 1000);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    Quadric::new(m).unwrap()
}

fn random_system(seed: u64) -> TangencySystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TangencySystem::new((0..4).map(|_| Condition::TangentTo(random_quadric(&mut rng))).collect()).unwrap()
}

fn endpoints(paths: &[TrackedPath]) -> Vec<[Complex64; 6]> {
    paths
        .iter()
        .filter(|p| p.status == PathStatus::Converged)
        .map(|p| p.end)
        .collect()
}

/// Largest distance from a point of `a` to its nearest unused point of `b`.
fn matching_distance(a: &[[Complex64; 6]], b: &[[Complex64; 6]]) -> f64 {
    assert_eq!(a.len(), b.len());
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

#[test]
fn random_quadrics_have_thirty_two_tangents() {
    for seed in [1, 2] {
        let sys = random_system(seed);
        let report = solve(
            &sys,
            &StartPolicy::Auto,
            &TrackerOptions {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.start, "tetra");
        assert_eq!(report.converged().count(), 32, "seed {seed}");
        assert_eq!(report.distinct, 32);
        assert!(report.converged().all(|p| p.residual < 1e-10 && !p.singular));
        assert!(report.max_condition_residual < 1e-9);
        assert!(report.max_plucker_residual < 1e-9);
        let c = &report.classification;
        assert!(c.unpaired.is_empty());
        assert_eq!(c.real.len() + 2 * c.pairs.len(), 32);
        assert_eq!((32 - c.real.len()) % 2, 0);
    }
}

#[test]
fn linear_product_start_agrees_with_closed_form_start() {
    let sys = random_system(3);
    let opts = TrackerOptions {
        seed: 4,
        ..Default::default()
    };
    let a = solve(&sys, &StartPolicy::Auto, &opts).unwrap();
    let b = solve(&sys, &StartPolicy::LinearProduct, &opts).unwrap();
    assert_eq!(b.start, "linear-product");
    assert_eq!(endpoints(&b.paths).len(), 32);
    assert!(matching_distance(&endpoints(&a.paths), &endpoints(&b.paths)) < 1e-8);
}

#[test]
fn endpoints_do_not_depend_on_gamma() {
    let sys = random_system(5);
    let run = |seed| {
        solve(
            &sys,
            &StartPolicy::Auto,
            &TrackerOptions {
                seed,
                ..Default::default()
            },
        )
        .unwrap()
    };
    let (a, b) = (run(10), run(20));
    assert_ne!(a.gamma, b.gamma);
    assert!(matching_distance(&endpoints(&a.paths), &endpoints(&b.paths)) < 1e-8);
}

#[test]
fn round_trip_returns_to_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let patch = quadtangent::tracker::random_vector(&mut rng);
    let (from, starts) = tetra_start(&TetraParams::new(ratio(1, 10), ratio(1, 20)), &patch).unwrap();
    let to = build_square_system(&random_system(6), &patch);
    let opts = TrackerOptions {
        seed: 8,
        ..Default::default()
    };
    let forward = track(&from, &starts, &to, &opts);
    let mids = endpoints(&forward);
    assert_eq!(mids.len(), 32);
    let back = track(
        &to,
        &mids,
        &from,
        &TrackerOptions {
            seed: 9,
            ..Default::default()
        },
    );
    assert!(matching_distance(&endpoints(&back), &starts) < 1e-8);
}

#[test]
fn tetra_targets_classify_as_expected() {
    let opts = TrackerOptions {
        seed: 2,
        ..Default::default()
    };
    for (a, b, real, pairs) in [(ratio(1, 10), ratio(1, 10), 32, 0), (ratio(1, 5), ratio(1, 5), 16, 8)] {
        let params = TetraParams::new(a, b);
        let sys = TangencySystem::new(
            quadtangent::tetra32::family(&params)
                .into_iter()
                .map(Condition::TangentTo)
                .collect(),
        )
        .unwrap();
        let start = TetraParams::new(ratio(1, 7), ratio(1, 9));
        let report = solve(&sys, &StartPolicy::Tetra(start), &opts).unwrap();
        let c = classify_real(&report.paths, 1e-8);
        assert_eq!((c.real.len(), c.pairs.len()), (real, pairs));
        assert!(c.unpaired.is_empty() && c.at_infinity.is_empty());
        for &(i, j) in &c.pairs {
            let conj: Vec<_> = report.paths[i].end.iter().map(|z| z.conj()).collect();
            assert!(projective_distance(&normalize_complex(&conj), &normalize_complex(&report.paths[j].end)) < 1e-8);
        }
    }
}

#[test]
fn incidence_stage_matches_exact_transversals() {
    let sys = doubling_system(0, &[]).unwrap();
    let report = solve(&sys, &StartPolicy::Auto, &TrackerOptions::default()).unwrap();
    assert_eq!(report.bound, 2);
    let numeric = endpoints(&report.paths);
    let lines: Vec<_> = doubling_lines().iter().map(|u| u.to_proj().unwrap()).collect();
    let exact: Vec<[Complex64; 6]> = transversals_to_4_lines(&lines)
        .unwrap()
        .lines()
        .iter()
        .map(|t| {
            let v = t.plucker.to_complex();
            std::array::from_fn(|i| v[i])
        })
        .collect();
    assert_eq!(exact.len(), 2);
    assert!(matching_distance(&numeric, &exact) < 1e-10);
    assert_eq!(report.real_count(), 2);
}

#[test]
fn doubling_reaches_thirty_two_real() {
    let report = doubling_experiment(&Radii::Auto, &TrackerOptions::default()).unwrap();
    assert_eq!(report.real_counts(), vec![2, 4, 8, 16, 32]);
    for s in &report.stages {
        assert_eq!(s.distinct, s.expected);
        assert!(!s.exhausted);
    }
}

#[test]
fn fixed_radii_are_validated() {
    assert!(doubling_experiment(&Radii::Fixed(vec![ratio(1, 10); 3]), &TrackerOptions::default()).is_err());
    assert!(doubling_experiment(&Radii::Fixed(vec![ratio(0, 1); 4]), &TrackerOptions::default()).is_err());
}

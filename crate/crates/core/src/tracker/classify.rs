use serde::{Deserialize, Serialize};

use super::{PathStatus, Point, TrackedPath};
use crate::grassmann::{normalize_complex, projective_distance};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RealClassification {
    /// Indices of converged paths with real endpoints.
    pub real: Vec<usize>,
    /// Index pairs of complex-conjugate endpoints.
    pub pairs: Vec<(usize, usize)>,
    /// Non-real endpoints without a conjugate partner.
    pub unpaired: Vec<usize>,
    /// Endpoints whose line lies in the plane `x0 = 0`.
    pub at_infinity: Vec<usize>,
}

/// Splits converged endpoints into real ones and conjugate pairs, both
/// decided at tolerance `tol` after normalization.
pub fn classify_real(paths: &[TrackedPath], tol: f64) -> RealClassification {
    let mut out = RealClassification::default();
    let mut nonreal: Vec<(usize, Vec<num_complex::Complex64>)> = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        if path.status != PathStatus::Converged {
            continue;
        }
        let e = normalize_complex(&path.end);
        // p01, p02, p03 all vanish iff both spanning points have x0 = 0.
        if e[..3].iter().all(|z| z.norm() < tol) {
            out.at_infinity.push(i);
        }
        if e.iter().all(|z| z.im.abs() < tol) {
            out.real.push(i);
        } else {
            nonreal.push((i, e));
        }
    }
    let mut taken = vec![false; nonreal.len()];
    for a in 0..nonreal.len() {
        if taken[a] {
            continue;
        }
        let conj: Vec<_> = nonreal[a].1.iter().map(|z| z.conj()).collect();
        let partner = (a + 1..nonreal.len())
            .filter(|&b| !taken[b])
            .map(|b| (b, projective_distance(&conj, &nonreal[b].1)))
            .filter(|&(_, d)| d < tol)
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match partner {
            Some((b, _)) => {
                taken[a] = true;
                taken[b] = true;
                out.pairs.push((nonreal[a].0, nonreal[b].0));
            }
            None => out.unpaired.push(nonreal[a].0),
        }
    }
    out
}

/// Number of converged endpoints that are pairwise farther apart than `tol`.
pub fn distinct_count(paths: &[TrackedPath], tol: f64) -> usize {
    let mut reps: Vec<&Point> = Vec::new();
    for p in paths.iter().filter(|p| p.status == PathStatus::Converged) {
        if reps.iter().all(|r| projective_distance(*r, &p.end) >= tol) {
            reps.push(&p.end);
        }
    }
    reps.len()
}

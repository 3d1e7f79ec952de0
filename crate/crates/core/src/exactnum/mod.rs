//! Exact rational scalars and matrices, plus the complex double mirror used
//! by the numerical tracker.
//!
//! Every matrix indexed by subsets (exterior powers, Plücker vectors) uses
//! [`subsets`] order: sorted index tuples in lexicographic order.

mod complex;
mod matrix;
pub mod rational;

pub use complex::{condition_number, lu_solve, CplxMatrix};
pub use matrix::{char_poly, signature_by_char_poly, solve_linear, Inertia, LinearSolution, RatMatrix};
pub use rational::{int, parse_rational, ratio, Rational};

/// All `r`-element subsets of `0..n` as sorted vectors, lexicographically.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            extend(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        extend(0, n, r, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// Position of a sorted subset in [`subsets`] order.
pub fn subset_index(n: usize, subset: &[usize]) -> Option<usize> {
    subsets(n, subset.len()).iter().position(|s| s == subset)
}

/// Concatenated digit label of a subset, e.g. `[0, 1, 3]` → `"013"`.
/// Indices above 9 are separated by commas.
pub fn subset_label(subset: &[usize]) -> String {
    if subset.iter().all(|&i| i < 10) {
        subset.iter().map(|i| i.to_string()).collect()
    } else {
        subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_subset_label(label: &str) -> Option<Vec<usize>> {
    if label.contains(',') {
        label.split(',').map(|t| t.trim().parse().ok()).collect()
    } else {
        label.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
    }
}

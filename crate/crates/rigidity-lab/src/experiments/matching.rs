//! Exact min-cost perfect matching (Hungarian algorithm with potentials,
//! O(n³)) and the 1-Wasserstein distance between equal-size point sets it
//! induces.

use num_complex::Complex64;

/// Optimal assignment for a square cost matrix; `result[i]` is the column
/// matched to row `i`.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(cost.iter().all(|row| row.len() == n));

    // shortest augmenting paths with dual potentials, 1-based internally
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut assigned_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        assigned_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = assigned_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < min_slack[j] {
                        min_slack[j] = cur;
                        way[j] = j0;
                    }
                    if min_slack[j] < delta {
                        delta = min_slack[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[assigned_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if assigned_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            assigned_row[j0] = assigned_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if assigned_row[j] > 0 {
            assignment[assigned_row[j] - 1] = j - 1;
        }
    }
    assignment
}

/// 1-Wasserstein distance between the uniform measures on two point sets of
/// equal size: the mean matched distance under the optimal assignment.
pub fn wasserstein_1(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "equal masses require equal point counts");
    if a.is_empty() {
        return 0.0;
    }
    let cost: Vec<Vec<f64>> =
        a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let assignment = min_cost_assignment(&cost);
    assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>() / a.len() as f64
}

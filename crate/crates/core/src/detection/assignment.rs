//! Linear assignment with forbidden cells.
//!
//! A cost matrix `cost[s][i]` prices sending position `i` to value `s`. The
//! solvers return σ minimizing Σ_i cost[σ(i)][i] over permutations that avoid
//! every forbidden cell. Forbidden cells are priced with a large finite
//! penalty so the Hungarian method itself stays total; any optimum that still
//! uses one proves the instance infeasible.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Dense n x n instance, 0-based. `allowed[s * n + i]` is false for forbidden cells.
#[derive(Clone, Debug)]
pub struct Assignment {
    n: usize,
    cost: Vec<f64>,
    allowed: Vec<bool>,
}

impl Assignment {
    pub fn new(cost: &[Vec<f64>], forbidden: &[(usize, usize)]) -> Result<Self> {
        let n = cost.len();
        if n == 0 || cost.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("cost matrix must be square and non-empty".into()));
        }
        if cost.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Domain("cost entries must be finite".into()));
        }
        let mut allowed = vec![true; n * n];
        for &(s, i) in forbidden {
            if s == 0 || s > n || i == 0 || i > n {
                return Err(Error::IndexOutOfRange(format!("forbidden cell ({s}, {i}) outside 1..={n}")));
            }
            allowed[(s - 1) * n + (i - 1)] = false;
        }
        Ok(Self { n, cost: cost.concat(), allowed })
    }

    /// Cells (s, i) with s = p(i) forbidden, the σ(i) ≠ π(i) constraint.
    pub(crate) fn avoiding(n: usize, cost: Vec<f64>, p: &Permutation) -> Self {
        let mut allowed = vec![true; n * n];
        for i in 0..n {
            allowed[p.at0(i) * n + i] = false;
        }
        Self { n, cost, allowed }
    }

    fn c(&self, s: usize, i: usize) -> f64 {
        self.cost[s * self.n + i]
    }

    fn ok(&self, s: usize, i: usize) -> bool {
        self.allowed[s * self.n + i]
    }

    /// Minimum over feasible permutations, with the minimizer as 0-based images.
    pub fn solve(&self) -> Result<(Vec<usize>, f64)> {
        let positions: Vec<usize> = (0..self.n).collect();
        let values: Vec<usize> = (0..self.n).collect();
        self.solve_sub(&positions, &values).ok_or(Error::Infeasible)
    }

    /// Optimal assignment of `positions` to `values` (equal lengths), or `None` if infeasible.
    fn solve_sub(&self, positions: &[usize], values: &[usize]) -> Option<(Vec<usize>, f64)> {
        let m = positions.len();
        if m == 0 {
            return Some((Vec::new(), 0.0));
        }
        let span = positions
            .iter()
            .flat_map(|&i| values.iter().map(move |&s| (s, i)))
            .map(|(s, i)| self.c(s, i).abs())
            .fold(0.0_f64, f64::max);
        let big = (2.0 * span + 1.0) * (m as f64 + 1.0);
        let price = |r: usize, c: usize| {
            let (i, s) = (positions[r], values[c]);
            if self.ok(s, i) {
                self.c(s, i)
            } else {
                big
            }
        };
        let assign = hungarian(m, price);
        let mut image = vec![0; self.n];
        let mut total = 0.0;
        for (r, &c) in assign.iter().enumerate() {
            let (i, s) = (positions[r], values[c]);
            if !self.ok(s, i) {
                return None;
            }
            image[i] = s;
            total += self.c(s, i);
        }
        Some((image, total))
    }

    /// Lexicographically smallest feasible σ with cost ≤ `threshold`, built by
    /// fixing σ(1), σ(2), ... to the smallest value that keeps a completion under
    /// the threshold.
    pub fn lex_smallest_within(&self, threshold: f64) -> Result<(Vec<usize>, f64)> {
        let n = self.n;
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut fixed_cost = 0.0;
        for (i, slot) in image.iter_mut().enumerate() {
            let rest_pos: Vec<usize> = (i + 1..n).collect();
            let mut chosen = None;
            for s in 0..n {
                if used[s] || !self.ok(s, i) {
                    continue;
                }
                used[s] = true;
                let rest_val: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
                let completion = self.solve_sub(&rest_pos, &rest_val);
                used[s] = false;
                if let Some((_, rest)) = completion {
                    if fixed_cost + self.c(s, i) + rest <= threshold {
                        chosen = Some(s);
                        break;
                    }
                }
            }
            let s = chosen.ok_or(Error::Infeasible)?;
            *slot = s;
            used[s] = true;
            fixed_cost += self.c(s, i);
        }
        Ok((image, fixed_cost))
    }

    /// Exact optimum with the lexicographic tie-break among values within `tie_tol`.
    pub fn solve_lex(&self, tie_tol: f64) -> Result<(Vec<usize>, f64)> {
        let (_, best) = self.solve()?;
        let (image, _) = self.lex_smallest_within(best + tie_tol)?;
        let value = (0..self.n).map(|i| self.c(image[i], i)).sum();
        Ok((image, value))
    }
}

/// Hungarian method with potentials, O(m³). Returns the column assigned to each row.
fn hungarian(m: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let inf = f64::INFINITY;
    let mut u = vec![0.0; m + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=m {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; m];
    for j in 1..=m {
        row_to_col[p[j] - 1] = j - 1;
    }
    row_to_col
}

/// σ minimizing Σ_i cost[σ(i)][i] with σ(i) avoiding the forbidden (row s, column i)
/// cells (1-based). Ties within 1e-12 go to the lexicographically smallest image.
pub fn assignment_min_forbidden(cost: &[Vec<f64>], forbidden: &[(usize, usize)]) -> Result<(Permutation, f64)> {
    let a = Assignment::new(cost, forbidden)?;
    let (image, value) = a.solve_lex(super::TIE_TOL)?;
    Ok((Permutation::from_zero_based(&image), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(cost: &[Vec<f64>], forbidden: &[(usize, usize)]) -> Option<(Permutation, f64)> {
        let n = cost.len();
        let mut best: Option<(Permutation, f64)> = None;
        let vals: Vec<(Permutation, f64)> = Permutation::all(n)
            .filter(|p| (1..=n).all(|i| !forbidden.contains(&(p.apply(i), i))))
            .map(|p| {
                let v = (1..=n).map(|i| cost[p.apply(i) - 1][i - 1]).sum();
                (p, v)
            })
            .collect();
        let min = vals.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        for (p, v) in vals {
            if v <= min + 1e-12 && best.as_ref().is_none_or(|(b, _)| p < *b) {
                best = Some((p, v));
            }
        }
        best
    }

    fn diagonal(n: usize) -> Vec<(usize, usize)> {
        (1..=n).map(|i| (i, i)).collect()
    }

    #[test]
    fn zero_cost_two_derangement() {
        let (p, v) = assignment_min_forbidden(&[vec![0.0; 2], vec![0.0; 2]], &diagonal(2)).unwrap();
        assert_eq!(p.image(), &[2, 1]);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn zero_cost_picks_lex_smallest_derangement() {
        let cost = vec![vec![0.0; 4]; 4];
        let (p, _) = assignment_min_forbidden(&cost, &diagonal(4)).unwrap();
        assert_eq!(p.image(), &[2, 1, 4, 3]);
    }

    #[test]
    fn infeasible_reported() {
        // column 1 fully forbidden
        let cost = vec![vec![1.0; 3]; 3];
        let err = assignment_min_forbidden(&cost, &[(1, 1), (2, 1), (3, 1)]).unwrap_err();
        assert!(matches!(err, Error::Infeasible));
        let err = assignment_min_forbidden(&[vec![0.0]], &[(1, 1)]).unwrap_err();
        assert!(matches!(err, Error::Infeasible));
    }

    #[test]
    fn distinct_row_minima() {
        // cost[s][i]: value s is cheapest for position i = s + 1 (cyclically)
        let n = 4;
        let cost: Vec<Vec<f64>> =
            (0..n).map(|s| (0..n).map(|i| if i == (s + 1) % n { -1.0 - s as f64 } else { 5.0 }).collect()).collect();
        let (p, v) = assignment_min_forbidden(&cost, &diagonal(n)).unwrap();
        assert_eq!(p.image(), &[4, 1, 2, 3]);
        assert_eq!(v, -10.0);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let n = 2 + trial % 5;
            let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let pi = {
                let all = Permutation::all_vec(n);
                all[rng.random_range(0..all.len())].clone()
            };
            let forbidden: Vec<_> = (1..=n).map(|i| (pi.apply(i), i)).collect();
            let (p, v) = assignment_min_forbidden(&cost, &forbidden).unwrap();
            let (bp, bv) = brute(&cost, &forbidden).unwrap();
            assert!((v - bv).abs() < 1e-12, "trial {trial}");
            assert_eq!(p, bp, "trial {trial}");
        }
    }

    #[test]
    fn ties_follow_lex_order_on_integer_costs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let n = 3 + rng.random_range(0..3);
            let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..3) as f64).collect()).collect();
            let (p, v) = assignment_min_forbidden(&cost, &diagonal(n)).unwrap();
            let (bp, bv) = brute(&cost, &diagonal(n)).unwrap();
            assert_eq!(v, bv);
            assert_eq!(p, bp);
        }
    }
}

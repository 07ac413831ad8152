//! Exact phase-one simplex for small feasibility problems.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Decides whether `A x = b, x ≥ 0` has a solution, with `b ≥ 0` required
/// (negate rows beforehand otherwise). Bland's rule rules out cycling.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    assert_eq!(b.len(), m);
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    // Tableau columns: n originals, m artificials, then the rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        let flip = b[i].is_negative();
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rational::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // Objective: minimize the sum of artificials, written as reduced costs.
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let cost = &t[m];
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded cannot happen for phase one (objective ≥ 0).
            unreachable!("phase-one objective is bounded below");
        };
        let pivot = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (v, p) in row.iter_mut().zip(prow.iter()) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        basis[r] = enter;
    }
    t[m][width - 1].is_zero()
}

/// Whether `alpha` lies in the Newton polyhedron `conv(points) + ℝ≥0ⁿ`.
pub fn in_newton_polyhedron(points: &[Vec<u32>], alpha: &[u32]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = alpha.len();
    let k = points.len();
    // Variables: weights w_1..w_k, then slacks s_1..s_n.
    // Rows: Σ_k w_k g_{k,i} + s_i = α_i ;  Σ_k w_k = 1.
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = vec![Rational::zero(); k + n];
        for (col, g) in points.iter().enumerate() {
            row[col] = Rational::from_integer(g[i].into());
        }
        row[k + i] = Rational::one();
        a.push(row);
        b.push(Rational::from_integer(alpha[i].into()));
    }
    let mut row = vec![Rational::zero(); k + n];
    for v in row.iter_mut().take(k) {
        *v = Rational::one();
    }
    a.push(row);
    b.push(Rational::one());
    feasible(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn small_systems() {
        // x + y = 1, x - y = 3  => x = 2, y = -1: infeasible with y ≥ 0
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        assert!(!feasible(&a, &[int(1), int(3)]));
        assert!(feasible(&a, &[int(3), int(1)]));
        assert!(feasible(&a, &[int(0), int(0)]));
    }

    #[test]
    fn newton_polyhedron() {
        let g = vec![vec![2, 0], vec![0, 3]];
        assert!(!in_newton_polyhedron(&g, &[0, 2]));
        assert!(!in_newton_polyhedron(&g, &[1, 1]));
        assert!(in_newton_polyhedron(&g, &[1, 2]));
        assert!(in_newton_polyhedron(&g, &[3, 0]));
        assert!(in_newton_polyhedron(&g, &[2, 1]));
        let g = vec![vec![2, 0], vec![0, 2]];
        assert!(in_newton_polyhedron(&g, &[1, 1]));
    }
}

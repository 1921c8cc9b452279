//! Exact feasibility of `A x = b, x >= 0` by phase-one simplex with Bland's
//! rule. Every decision is made on exact rationals.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Returns some `x >= 0` with `a x = b`, or `None` if there is none.
///
/// `a` is given row by row; all rows must have the same length.
pub fn nonneg_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }
    // Columns 0..n are the unknowns, n..n+m the artificials.
    let width = n + m;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = b[i].is_negative();
        let mut r: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        tab.push(r);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();
    let cost = |j: usize| if j >= n { Rational::one() } else { Rational::zero() };

    loop {
        // Bland: lowest-index column with negative reduced cost enters.
        let entering = (0..width).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut d = cost(j);
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= n {
                    d -= &tab[i][j];
                }
            }
            d.is_negative()
        });
        let Some(j) = entering else { break };
        // Ratio test; ties go to the lowest basic index.
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][j].is_positive() {
                let ratio = &rhs[i] / &tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The phase-one objective is bounded below by 0, so some row limits
        // every improving column.
        let (r, _) = leave.expect("phase-one simplex cannot be unbounded");
        let pivot = tab[r][j].clone();
        for x in tab[r].iter_mut() {
            *x /= &pivot;
        }
        rhs[r] /= &pivot;
        for i in 0..m {
            if i != r && !tab[i][j].is_zero() {
                let factor = tab[i][j].clone();
                let pivot_row = tab[r].clone();
                for (x, p) in tab[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
                let delta = &factor * &rhs[r];
                rhs[i] -= delta;
            }
        }
        basis[r] = j;
    }

    let infeasibility = basis.iter().zip(&rhs).filter(|(&bi, _)| bi >= n).fold(Rational::zero(), |acc, (_, x)| acc + x);
    if !infeasibility.is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = rhs[i].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn check(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, bi) in a.iter().zip(b) {
            let s = row.iter().zip(x).fold(Rational::zero(), |acc, (p, q)| acc + p * q);
            assert_eq!(&s, bi);
        }
    }

    #[test]
    fn feasible_system() {
        // Columns (1,0) and (1,1); target (3,1) = 2*(1,0) + 1*(1,1).
        let a = mat(&[&[1, 1], &[0, 1]]);
        let b = vec![int(3), int(1)];
        let x = nonneg_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn infeasible_system() {
        // (0,1) is not a nonnegative combination of (1,0) and (1,1).
        let a = mat(&[&[1, 1], &[0, 1]]);
        assert!(nonneg_solution(&a, &[int(0), int(1)]).is_none());
        // x1 + x2 = -1 has no nonnegative solution.
        assert!(nonneg_solution(&mat(&[&[1, 1]]), &[int(-1)]).is_none());
    }

    #[test]
    fn degenerate_and_redundant_rows() {
        let a = mat(&[&[1, 2, 0], &[2, 4, 0], &[0, 0, 1]]);
        let b = vec![int(2), int(4), int(0)];
        let x = nonneg_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }
}

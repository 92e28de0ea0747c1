//! Exact rational linear programming by the two-phase simplex method with
//! Bland's rule. Sized for redundancy removal and feasibility checks on the
//! search polytopes, not for industrial problems.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpResult {
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
    Infeasible,
}

/// Maximizes `objective . x` over `ineqs: row.x <= rhs` and `eqs: row.x = rhs`
/// with x unrestricted in sign (internally split into differences of
/// nonnegative variables).
pub(crate) fn maximize(
    objective: &[Rational],
    ineqs: &[(Vec<Rational>, Rational)],
    eqs: &[(Vec<Rational>, Rational)],
) -> LpResult {
    let n = objective.len();
    let m = ineqs.len() + eqs.len();
    // Columns: u_0..u_{n-1}, v_0..v_{n-1} (x = u - v), slacks, artificials.
    let n_split = 2 * n;
    let n_slack = ineqs.len();
    let n_art = m;
    let n_total = n_split + n_slack + n_art;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (idx, (a, b)) in ineqs.iter().chain(eqs.iter()).enumerate() {
        let mut row = vec![Rational::zero(); n_total];
        for (j, c) in a.iter().enumerate() {
            row[j] = c.clone();
            row[n + j] = -c.clone();
        }
        if idx < ineqs.len() {
            row[n_split + idx] = Rational::one();
        }
        let mut b = b.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        row[n_split + n_slack + idx] = Rational::one();
        rows.push(row);
        rhs.push(b);
    }

    let mut basis: Vec<usize> = (0..m).map(|i| n_split + n_slack + i).collect();

    // Phase 1: minimize the sum of artificials, i.e. maximize its negation.
    let mut phase1_obj = vec![Rational::zero(); n_total];
    for j in 0..n_art {
        phase1_obj[n_split + n_slack + j] = -Rational::one();
    }
    let status = simplex(&mut rows, &mut rhs, &mut basis, &phase1_obj, n_total);
    debug_assert!(status.is_none(), "phase 1 cannot be unbounded");
    let phase1_value: Rational = basis
        .iter()
        .zip(&rhs)
        .filter(|(b, _)| **b >= n_split + n_slack)
        .map(|(_, v)| v.clone())
        .sum();
    if !phase1_value.is_zero() {
        return LpResult::Infeasible;
    }
    // Drive remaining (degenerate) artificials out of the basis.
    for r in 0..m {
        if basis[r] >= n_split + n_slack {
            if let Some(col) = (0..n_split + n_slack).find(|&c| !rows[r][c].is_zero()) {
                pivot(&mut rows, &mut rhs, &mut basis, r, col);
            }
            // A fully zero row is a redundant constraint; leave it.
        }
    }

    // Phase 2 on the real objective, artificial columns frozen out.
    let mut phase2_obj = vec![Rational::zero(); n_total];
    for j in 0..n {
        phase2_obj[j] = objective[j].clone();
        phase2_obj[n + j] = -objective[j].clone();
    }
    let n_usable = n_split + n_slack;
    if simplex(&mut rows, &mut rhs, &mut basis, &phase2_obj, n_usable).is_some() {
        return LpResult::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] += rhs[r].clone();
        } else if b < n_split {
            x[b - n] -= rhs[r].clone();
        }
    }
    let value = objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum::<Rational>();
    LpResult::Optimal { value, point: x }
}

/// Runs simplex iterations with Bland's rule on the current dictionary.
/// Returns `Some(entering)` if unbounded, `None` at optimality. Only columns
/// below `n_usable` may enter the basis.
fn simplex(
    rows: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    objective: &[Rational],
    n_usable: usize,
) -> Option<usize> {
    loop {
        // Reduced costs: c_j - c_B . B^{-1} A_j, computed directly from the
        // dictionary: since rows are kept in solved form, the reduced cost of
        // column j is objective[j] minus sum over basic rows of
        // objective[basis[r]] * rows[r][j].
        let mut entering = None;
        'cols: for j in 0..n_usable {
            if basis.contains(&j) {
                continue;
            }
            let mut red = objective[j].clone();
            for (r, &b) in basis.iter().enumerate() {
                if !objective[b].is_zero() && !rows[r][j].is_zero() {
                    red -= &objective[b] * &rows[r][j];
                }
            }
            if red.is_positive() {
                entering = Some(j);
                break 'cols; // Bland: smallest index
            }
        }
        let Some(col) = entering else {
            return None;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for r in 0..rows.len() {
            if rows[r][col].is_positive() {
                let ratio = &rhs[r] / &rows[r][col];
                match &leaving {
                    Some((lr, best)) => {
                        if ratio < *best || (ratio == *best && basis[r] < basis[*lr]) {
                            leaving = Some((r, ratio));
                        }
                    }
                    None => leaving = Some((r, ratio)),
                }
            }
        }
        let Some((row, _)) = leaving else {
            return Some(col);
        };
        pivot(rows, rhs, basis, row, col);
    }
}

fn pivot(rows: &mut [Vec<Rational>], rhs: &mut [Rational], basis: &mut [usize], r: usize, c: usize) {
    let inv = Rational::one() / rows[r][c].clone();
    for v in rows[r].iter_mut() {
        *v = &*v * &inv;
    }
    rhs[r] = &rhs[r] * &inv;
    for i in 0..rows.len() {
        if i != r && !rows[i][c].is_zero() {
            let factor = rows[i][c].clone();
            for j in 0..rows[i].len() {
                let delta = &rows[r][j] * &factor;
                rows[i][j] = &rows[i][j] - &delta;
            }
            let delta = &rhs[r] * &factor;
            rhs[i] = &rhs[i] - &delta;
        }
    }
    basis[r] = c;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn simple_bounded_maximum() {
        // max x + y s.t. x <= 2, y <= 3, x + y <= 4, x,y >= 0 (as ineqs).
        let ineqs = vec![
            (vec![int(1), int(0)], int(2)),
            (vec![int(0), int(1)], int(3)),
            (vec![int(1), int(1)], int(4)),
            (vec![int(-1), int(0)], int(0)),
            (vec![int(0), int(-1)], int(0)),
        ];
        match maximize(&[int(1), int(1)], &ineqs, &[]) {
            LpResult::Optimal { value, .. } => assert_eq!(value, int(4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_constraints_and_fractions() {
        // max y s.t. 2x + y = 1, y <= 3x, x,y >= 0  => x = 1/5, y = 3/5.
        let ineqs = vec![
            (vec![int(-3), int(1)], int(0)),
            (vec![int(-1), int(0)], int(0)),
            (vec![int(0), int(-1)], int(0)),
        ];
        let eqs = vec![(vec![int(2), int(1)], int(1))];
        match maximize(&[int(0), int(1)], &ineqs, &eqs) {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, rat(3, 5));
                assert_eq!(point, vec![rat(1, 5), rat(3, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let infeasible = maximize(
            &[int(1)],
            &[(vec![int(1)], int(0)), (vec![int(-1)], int(-1))],
            &[],
        );
        assert_eq!(infeasible, LpResult::Infeasible);
        let unbounded = maximize(&[int(1)], &[(vec![int(-1)], int(0))], &[]);
        assert_eq!(unbounded, LpResult::Unbounded);
    }

    #[test]
    fn free_variables_can_go_negative() {
        // max -x s.t. x >= -5  => x = -5.
        match maximize(&[int(-1)], &[(vec![int(-1)], int(5))], &[]) {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, int(5));
                assert_eq!(point, vec![int(-5)]);
            }
            other => panic!("{other:?}"),
        }
    }
}

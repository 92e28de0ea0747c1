//! Small dense exact linear algebra over rationals: reduced row echelon
//! form, rank, nullspace bases, and linear solves.

use crate::rational::{normalize_content, Rational};
use num_traits::{One, Zero};

/// Reduces `rows` (each of width `n_cols`) to reduced row echelon form in
/// place and returns the pivot column indices in order.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>, n_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n_cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in 0..n_cols {
                    let delta = &rows[r][c] * &factor;
                    rows[i][c] = &rows[i][c] - &delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|v| !v.is_zero()));
    pivots
}

pub(crate) fn rank(mut rows: Vec<Vec<Rational>>, n_cols: usize) -> usize {
    rref(&mut rows, n_cols).len()
}

/// Basis of the nullspace of the homogeneous system `rows * x = 0`, one
/// vector per free column in increasing column order, each scaled to coprime
/// integer entries. Deterministic.
pub(crate) fn nullspace(mut rows: Vec<Vec<Rational>>, n_cols: usize) -> Vec<Vec<Rational>> {
    let pivots = rref(&mut rows, n_cols);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n_cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..n_cols).filter(|c| !is_pivot[*c]) {
        let mut vec = vec![Rational::zero(); n_cols];
        vec[free] = Rational::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            vec[p] = -row[free].clone();
        }
        normalize_content(&mut vec);
        basis.push(vec);
    }
    basis
}

/// Solves `a * x = b` for square or tall consistent systems; `None` when the
/// system is inconsistent or underdetermined.
pub(crate) fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n_cols = a.first()?.len();
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, n_cols + 1);
    if pivots.contains(&n_cols) {
        return None; // inconsistent
    }
    if pivots.len() < n_cols {
        return None; // underdetermined
    }
    let mut x = vec![Rational::zero(); n_cols];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n_cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn rank_and_rref() {
        let rows = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(rank(rows, 3), 2);
    }

    #[test]
    fn nullspace_of_simple_system() {
        // x + y + z = 0, y - z = 0  =>  null basis (2, -1, -1) after sign normalization.
        let rows = vec![
            vec![int(1), int(1), int(1)],
            vec![int(0), int(1), int(-1)],
        ];
        let ns = nullspace(rows, 3);
        assert_eq!(ns, vec![vec![int(2), int(-1), int(-1)]]);
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(-1)]];
        let b = vec![int(4), int(-1)];
        assert_eq!(solve_unique(&a, &b).unwrap(), vec![int(1), int(2)]);
        let singular = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(solve_unique(&singular, &[int(1), int(2)]), None);
        assert_eq!(solve_unique(&singular, &[int(1), int(3)]), None);
        let a = vec![vec![rat(1, 2)]];
        assert_eq!(solve_unique(&a, &[int(3)]).unwrap(), vec![int(6)]);
    }
}

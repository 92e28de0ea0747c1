//! Exact vertex enumeration by the incremental double description method:
//! equalities are eliminated by substitution, the bound box supplies the
//! initial vertex set, and constraints are inserted in lexicographic order
//! with a combinatorial adjacency test over tight-set bitmasks.

use super::polytope::{HRep, SearchError};
use crate::linalg::rref;
use crate::rational::{normalize_content, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n_bits: usize) -> Self {
        BitSet {
            words: vec![0; n_bits.div_ceil(64)],
        }
    }
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    fn intersect(&self, o: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&o.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn intersect_count(&self, o: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&o.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
    fn is_superset(&self, o: &BitSet) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & b == *b)
    }
}

struct Gen {
    point: Vec<Rational>,
    active: BitSet,
}

/// Substitution x = basis * y + shift recovered from the equalities.
struct EqElimination {
    pivot_of_col: Vec<Option<usize>>, // pivot row per original column
    rows: Vec<Vec<Rational>>,         // rref rows, width num_vars + 1
    free_cols: Vec<usize>,
}

fn eliminate_equalities(h: &HRep) -> Result<EqElimination, SearchError> {
    let n = h.num_vars;
    let mut rows: Vec<Vec<Rational>> = h
        .equalities
        .iter()
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, n + 1);
    if pivots.contains(&n) {
        return Err(SearchError::Infeasible);
    }
    let mut pivot_of_col = vec![None; n];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(r);
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| pivot_of_col[*c].is_none()).collect();
    Ok(EqElimination {
        pivot_of_col,
        rows,
        free_cols,
    })
}

impl EqElimination {
    /// Maps a reduced point y to the original coordinates x.
    fn lift(&self, y: &[Rational]) -> Vec<Rational> {
        let n = self.pivot_of_col.len();
        let mut x = vec![Rational::zero(); n];
        for (k, &c) in self.free_cols.iter().enumerate() {
            x[c] = y[k].clone();
        }
        for (c, p) in self.pivot_of_col.iter().enumerate() {
            if let Some(r) = p {
                let row = &self.rows[*r];
                let mut v = row[n].clone();
                for (k, &fc) in self.free_cols.iter().enumerate() {
                    if !row[fc].is_zero() {
                        v -= &row[fc] * &y[k];
                    }
                }
                x[c] = v;
            }
        }
        x
    }

    /// Rewrites an inequality over x as one over the free coordinates y.
    fn reduce_row(&self, row: &[Rational], rhs: &Rational) -> (Vec<Rational>, Rational) {
        let n = self.pivot_of_col.len();
        let mut out = vec![Rational::zero(); self.free_cols.len()];
        let mut c_rhs = rhs.clone();
        for (c, coeff) in row.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            match self.pivot_of_col[c] {
                None => {
                    let k = self.free_cols.iter().position(|&fc| fc == c).unwrap();
                    out[k] += coeff;
                }
                Some(r) => {
                    // x_c = rows[r][n] - sum rows[r][fc] y_fc
                    let prow = &self.rows[r];
                    c_rhs -= coeff * &prow[n];
                    for (k, &fc) in self.free_cols.iter().enumerate() {
                        if !prow[fc].is_zero() {
                            out[k] -= coeff * &prow[fc];
                        }
                    }
                }
            }
        }
        (out, c_rhs)
    }
}

/// All vertices of the (bounded) feasible set, exact and deduplicated,
/// sorted lexicographically in the original coordinates.
pub fn enumerate_vertices(h: &HRep) -> Result<Vec<Vec<Rational>>, SearchError> {
    let elim = eliminate_equalities(h)?;
    let d = elim.free_cols.len();

    // Reduced, normalized, deduplicated inequality rows.
    let mut seen: BTreeMap<(Vec<Rational>, Rational), usize> = BTreeMap::new();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (row, rhs) in &h.inequalities {
        let (mut r, mut c) = elim.reduce_row(row, rhs);
        if r.iter().all(Zero::is_zero) {
            if c.is_negative() {
                return Err(SearchError::Infeasible);
            }
            continue;
        }
        // Positive scaling to coprime integers, keeping orientation.
        let mut with_rhs = r.clone();
        with_rhs.push(c.clone());
        let first_sign = with_rhs
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| v.is_negative())
            .unwrap_or(false);
        normalize_content(&mut with_rhs);
        if first_sign {
            // normalize_content flipped the orientation; flip back.
            for v in with_rhs.iter_mut() {
                *v = -v.clone();
            }
        }
        c = with_rhs.pop().unwrap();
        r = with_rhs;
        if !seen.contains_key(&(r.clone(), c.clone())) {
            seen.insert((r.clone(), c.clone()), rows.len());
            rows.push((r, c));
        }
    }
    if d == 0 {
        // Fully determined by the equalities; feasibility is rows' rhs >= 0.
        for (_, c) in &rows {
            if c.is_negative() {
                return Err(SearchError::Infeasible);
            }
        }
        return Ok(vec![elim.lift(&[])]);
    }
    // Deterministic lexicographic insertion order.
    rows.sort();

    // Bound box from unit rows; derive any missing bound by exact LP and
    // append it as an (implied) synthetic row so the box facets take part in
    // the tight-set bookkeeping.
    let find_bounds = |rows: &[(Vec<Rational>, Rational)]| {
        let mut lower = vec![None; d];
        let mut upper = vec![None; d];
        let mut box_row = vec![usize::MAX; 2 * d];
        for (idx, (r, c)) in rows.iter().enumerate() {
            let nonzero: Vec<usize> = (0..d).filter(|k| !r[*k].is_zero()).collect();
            if nonzero.len() != 1 {
                continue;
            }
            let k = nonzero[0];
            let bound = c / &r[k];
            if r[k].is_positive() {
                if upper[k].as_ref().is_none_or(|u| bound < *u) {
                    upper[k] = Some(bound);
                    box_row[2 * k + 1] = idx;
                }
            } else if lower[k].as_ref().is_none_or(|l| bound > *l) {
                lower[k] = Some(bound);
                box_row[2 * k] = idx;
            }
        }
        (lower, upper, box_row)
    };
    let (mut lower, mut upper, mut box_row) = find_bounds(&rows);
    if lower.iter().any(Option::is_none) || upper.iter().any(Option::is_none) {
        for k in 0..d {
            for sign in [1i64, -1] {
                let present = if sign > 0 {
                    upper[k].is_some()
                } else {
                    lower[k].is_some()
                };
                if present {
                    continue;
                }
                let mut obj = vec![Rational::zero(); d];
                obj[k] = Rational::from_integer(sign.into());
                match crate::lp::maximize(&obj, &rows, &[]) {
                    crate::lp::LpResult::Optimal { value, .. } => {
                        let mut row = vec![Rational::zero(); d];
                        row[k] = obj[k].clone();
                        rows.push((row, value));
                    }
                    crate::lp::LpResult::Unbounded => return Err(SearchError::Unbounded),
                    crate::lp::LpResult::Infeasible => return Err(SearchError::Infeasible),
                }
            }
        }
        (lower, upper, box_row) = find_bounds(&rows);
    }
    if lower.iter().any(Option::is_none) || upper.iter().any(Option::is_none) {
        return Err(SearchError::Unbounded);
    }
    let lower: Vec<Rational> = lower.into_iter().map(Option::unwrap).collect();
    let upper: Vec<Rational> = upper.into_iter().map(Option::unwrap).collect();
    for k in 0..d {
        if lower[k] > upper[k] {
            return Err(SearchError::Infeasible);
        }
    }

    // Initial generators: the box corners (degenerate coordinates collapse).
    let n_rows = rows.len();
    let mut gens: Vec<Gen> = Vec::new();
    let mut corner_keys: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
    for mask in 0..(1u32 << d) {
        let point: Vec<Rational> = (0..d)
            .map(|k| {
                if mask >> k & 1 == 1 {
                    upper[k].clone()
                } else {
                    lower[k].clone()
                }
            })
            .collect();
        if corner_keys.contains_key(&point) {
            continue;
        }
        corner_keys.insert(point.clone(), ());
        let mut active = BitSet::new(n_rows);
        for k in 0..d {
            if point[k] == lower[k] && box_row[2 * k] != usize::MAX {
                active.set(box_row[2 * k]);
            }
            if point[k] == upper[k] && box_row[2 * k + 1] != usize::MAX {
                active.set(box_row[2 * k + 1]);
            }
        }
        gens.push(Gen { point, active });
    }

    let in_box = |idx: usize| box_row.contains(&idx);
    for idx in 0..n_rows {
        if in_box(idx) {
            continue;
        }
        let (r, c) = &rows[idx];
        let slack = |g: &Gen| -> Rational {
            c - r
                .iter()
                .zip(&g.point)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, b)| a * b)
                .sum::<Rational>()
        };
        let slacks: Vec<Rational> = gens.iter().map(&slack).collect();
        if slacks.iter().all(|s| !s.is_negative()) {
            for (g, s) in gens.iter_mut().zip(&slacks) {
                if s.is_zero() {
                    g.active.set(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..gens.len()).filter(|i| slacks[*i].is_positive()).collect();
        let neg: Vec<usize> = (0..gens.len()).filter(|i| slacks[*i].is_negative()).collect();

        let mut new_gens: Vec<Gen> = Vec::new();
        for &u in &pos {
            for &v in &neg {
                if gens[u].active.intersect_count(&gens[v].active) + 1 < d {
                    continue;
                }
                let common = gens[u].active.intersect(&gens[v].active);
                // Adjacent iff no third generator is tight on the whole
                // common set.
                let blocked = gens
                    .iter()
                    .enumerate()
                    .any(|(w, g)| w != u && w != v && g.active.is_superset(&common));
                if blocked {
                    continue;
                }
                let (su, sv) = (&slacks[u], &slacks[v]);
                let denom = su - sv; // > 0
                let point: Vec<Rational> = gens[u]
                    .point
                    .iter()
                    .zip(&gens[v].point)
                    .map(|(pu, pv)| (su * pv - sv * pu) / &denom)
                    .collect();
                let mut active = common;
                active.set(idx);
                new_gens.push(Gen { point, active });
            }
        }
        let mut kept: Vec<Gen> = Vec::new();
        for (i, g) in gens.drain(..).enumerate() {
            if slacks[i].is_positive() {
                kept.push(g);
            } else if slacks[i].is_zero() {
                let mut g = g;
                g.active.set(idx);
                kept.push(g);
            }
        }
        // Two cut edges can meet in the same new point; keep one copy.
        let mut seen_pts: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
        for g in new_gens {
            if !seen_pts.contains_key(&g.point) {
                seen_pts.insert(g.point.clone(), ());
                kept.push(g);
            }
        }
        gens = kept;
        if gens.is_empty() {
            return Err(SearchError::Infeasible);
        }
    }

    let mut out: Vec<Vec<Rational>> = gens.iter().map(|g| elim.lift(&g.point)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Brute-force oracle: solve every d-subset of tight constraints and keep the
/// feasible solutions. Exponential; test-sized inputs only.
pub fn brute_force_vertices(h: &HRep) -> Result<Vec<Vec<Rational>>, SearchError> {
    let elim = eliminate_equalities(h)?;
    let d = elim.free_cols.len();
    let reduced: Vec<(Vec<Rational>, Rational)> = h
        .inequalities
        .iter()
        .map(|(r, c)| elim.reduce_row(r, c))
        .filter(|(r, _)| !r.iter().all(Zero::is_zero))
        .collect();
    let feasible = |y: &[Rational]| reduced.iter().all(|(r, c)| {
        r.iter().zip(y).map(|(a, b)| a * b).sum::<Rational>() <= *c
    });
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let n = reduced.len();
    let mut subset: Vec<usize> = (0..d).collect();
    if d == 0 {
        return Ok(vec![elim.lift(&[])]);
    }
    loop {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| reduced[i].0.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| reduced[i].1.clone()).collect();
        if let Some(y) = crate::linalg::solve_unique(&a, &b) {
            if feasible(&y) {
                out.push(elim.lift(&y));
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            i -= 1;
            if subset[i] != i + n - d {
                subset[i] += 1;
                for j in i + 1..d {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

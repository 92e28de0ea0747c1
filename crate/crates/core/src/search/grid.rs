//! Grid-specialized filtering for continuous search candidates: for functions
//! interpolated from B_q data, every face vertex of the complex is a grid
//! point, so maximality, covered components, and bump perturbations reduce to
//! integer-indexed slack tables. Equivalence with the generic path is pinned
//! by the oracle tests.

use crate::complex2d::{cover_from_projections, Cover};
use crate::rational::{rat, Rational};
use num_traits::{One, Signed, Zero};

/// Superadditivity slack table of grid values: delta(i,j) = a[i+j]-a[i]-a[j].
fn slack(values: &[Rational], i: usize, j: usize) -> Rational {
    &values[i + j] - &values[i] - &values[j]
}

/// Full maximality check for the continuous interpolation of grid data:
/// range, zero at zero, symmetry, and superadditivity at every grid pair.
/// Exactly equivalent to the general test for functions with breakpoints on
/// the grid, where all face vertices are grid points.
pub fn grid_maximality(values: &[Rational]) -> bool {
    let q = values.len() - 1;
    if !values[0].is_zero() {
        return false;
    }
    let one = Rational::one();
    for v in values {
        if v.is_negative() || *v > one {
            return false;
        }
    }
    for i in 0..=q {
        if &values[i] + &values[q - i] != one {
            return false;
        }
    }
    for i in 1..=q {
        for j in i..=q - i {
            if slack(values, i, j).is_negative() {
                return false;
            }
        }
    }
    true
}

/// Covered components of the interpolation from the additive triangles of
/// the grid complex.
pub fn grid_cover(values: &[Rational]) -> Cover {
    let q = values.len() - 1;
    let additive = |i: usize, j: usize| slack(values, i, j).is_zero();
    let cell = |i: usize| (rat(i as i64, q as i64), rat(i as i64 + 1, q as i64));
    let mut projections: Vec<[(Rational, Rational); 3]> = Vec::new();
    for i in 0..q {
        for j in 0..q {
            // Lower triangle: vertices (i,j), (i+1,j), (i,j+1).
            if i + j + 1 <= q && additive(i, j) && additive(i + 1, j) && additive(i, j + 1) {
                projections.push([cell(i), cell(j), cell(i + j)]);
            }
            // Upper triangle: vertices (i+1,j), (i,j+1), (i+1,j+1).
            if i + j + 2 <= q
                && additive(i + 1, j)
                && additive(i, j + 1)
                && additive(i + 1, j + 1)
            {
                projections.push([cell(i), cell(j), cell(i + j + 1)]);
            }
        }
    }
    cover_from_projections(&projections)
}

/// Signed union-find: nodes are bump atoms plus a virtual zero class;
/// relations carry a sign, and a contradictory cycle kills the class.
struct SignedDsu {
    parent: Vec<usize>,
    /// Sign of this node relative to its parent.
    sign: Vec<i8>,
    dead: Vec<bool>,
}

impl SignedDsu {
    fn new(n: usize) -> Self {
        SignedDsu {
            parent: (0..n).collect(),
            sign: vec![1; n],
            dead: vec![false; n],
        }
    }
    fn find(&mut self, a: usize) -> (usize, i8) {
        if self.parent[a] == a {
            return (a, 1);
        }
        let (root, s) = self.find(self.parent[a]);
        self.parent[a] = root;
        self.sign[a] *= s;
        (root, self.sign[a])
    }
    /// Imposes h_a = rel * h_b.
    fn relate(&mut self, a: usize, b: usize, rel: i8) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            if sa != rel * sb {
                self.dead[ra] = true;
            }
            return;
        }
        // h_a = sa h_ra, h_b = sb h_rb  =>  h_ra = sa rel sb h_rb.
        let dead = self.dead[ra];
        self.parent[ra] = rb;
        self.sign[ra] = sa * rel * sb;
        if dead {
            self.dead[rb] = true;
        }
    }
}

/// Moves induced by the additive edges of the grid complex, at cell level:
/// translations (additive horizontal/vertical edges) and reflections
/// (additive diagonal edges, recorded by the reflection center k/q).
enum Move {
    /// Cell src maps onto cell src + shift.
    Translate { src: usize, shift: usize },
    /// x maps to k/q - x; cell i maps onto cell k - i - 1.
    Reflect { src: usize, k: usize },
}

fn collect_moves(values: &[Rational]) -> Vec<Move> {
    let q = values.len() - 1;
    let additive = |i: usize, j: usize| slack(values, i, j).is_zero();
    let mut out = Vec::new();
    for i in 0..q {
        for j in 1..=q {
            if i + j + 1 <= q && additive(i, j) && additive(i + 1, j) {
                out.push(Move::Translate { src: i, shift: j });
            }
        }
    }
    for j in 0..q {
        for i in 1..=q {
            if i + j + 1 <= q && additive(i, j) && additive(i, j + 1) {
                out.push(Move::Translate { src: j, shift: i });
            }
        }
    }
    for k in 1..=q {
        for i in 0..q {
            if i + 1 > k {
                break;
            }
            if k - i <= q && additive(i, k - i) && additive(i + 1, k - i - 1) {
                out.push(Move::Reflect { src: i, k });
            }
        }
    }
    out
}

/// Per-cell reachability of the covered region under the moves: a cell tied
/// to a covered cell carries only affine perturbation germs.
fn zero_tied_cells(q: usize, covered_cells: &[bool], moves: &[Move]) -> Vec<bool> {
    let mut zero = covered_cells.to_vec();
    loop {
        let mut changed = false;
        for m in moves {
            let (a, b) = match m {
                Move::Translate { src, shift } => (*src, src + shift),
                Move::Reflect { src, k } => (*src, k - src - 1),
            };
            if b >= q {
                continue;
            }
            if zero[a] != zero[b] {
                zero[a] = true;
                zero[b] = true;
                changed = true;
            }
        }
        if !changed {
            return zero;
        }
    }
}

/// Outcome of the per-vertex search filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexOutcome {
    Extreme,
    NotExtreme,
    Inconclusive,
}

/// Values of the interpolation of `values` on an n-fold refinement.
fn refine(values: &[Rational], n: i64) -> Vec<Rational> {
    let q = values.len() - 1;
    let mut out = Vec::with_capacity(n as usize * q + 1);
    for i in 0..q {
        let (a, b) = (&values[i], &values[i + 1]);
        for r in 0..n {
            out.push(a + (b - a) * rat(r, n));
        }
    }
    out.push(values[q].clone());
    out
}

/// Integer view of grid data over a common denominator, for the hot path.
struct IntGrid {
    denom: i128,
    nums: Vec<i128>,
}

fn to_int_grid(values: &[Rational]) -> Option<IntGrid> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut denom = BigInt::from(1);
    for v in values {
        denom = denom.lcm(v.denom());
    }
    let denom_i: i128 = (&denom).try_into().ok()?;
    // Keep lots of headroom for the scaled verification arithmetic.
    if denom_i > (1i128 << 40) {
        return None;
    }
    let mut nums = Vec::with_capacity(values.len());
    for v in values {
        let scaled = v.numer() * (&denom / v.denom());
        nums.push((&scaled).try_into().ok()?);
    }
    Some(IntGrid { denom: denom_i, nums })
}

fn islack(n: &[i128], i: usize, j: usize) -> i128 {
    n[i + j] - n[i] - n[j]
}

/// Integer twin of the filter; `None` when the data does not fit.
fn filter_vertex_int(values: &[Rational]) -> Option<(VertexOutcome, usize, Vec<bool>)> {
    let grid = to_int_grid(values)?;
    let q = grid.nums.len() - 1;
    let n = &grid.nums;
    let d = grid.denom;
    // Maximality: the polytope constraints on the grid.
    assert!(n[0] == 0, "polytope point violates maximality");
    for i in 0..=q {
        assert!(
            n[i] >= 0 && n[i] <= d && n[i] + n[q - i] == d,
            "polytope point violates maximality"
        );
    }
    for i in 1..=q {
        for j in i..=q - i {
            assert!(islack(n, i, j) >= 0, "polytope point violates maximality");
        }
    }
    // Covered cells and component classes from additive triangles.
    let additive = |i: usize, j: usize| islack(n, i, j) == 0;
    let mut parent: Vec<usize> = (0..q).collect();
    fn root(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut covered = vec![false; q];
    let mut tie = |parent: &mut [usize], covered: &mut [bool], cells: [usize; 3]| {
        for c in cells {
            covered[c] = true;
        }
        let r0 = root(parent, cells[0]);
        for c in &cells[1..] {
            let rc = root(parent, *c);
            let (lo, hi) = (r0.min(rc), r0.max(rc));
            parent[hi] = lo;
        }
    };
    for i in 0..q {
        for j in 0..q {
            if i + j + 1 <= q && additive(i, j) && additive(i + 1, j) && additive(i, j + 1) {
                tie(&mut parent, &mut covered, [i, j, i + j]);
            }
            if i + j + 2 <= q
                && additive(i + 1, j)
                && additive(i, j + 1)
                && additive(i + 1, j + 1)
            {
                tie(&mut parent, &mut covered, [i, j, i + j + 1]);
            }
        }
    }
    let mut class_roots: Vec<usize> = (0..q)
        .filter(|c| covered[*c])
        .map(|c| root(&mut parent, c))
        .collect();
    class_roots.sort_unstable();
    class_roots.dedup();
    let n_components = class_roots.len();
    if covered.iter().all(|c| *c) {
        return Some((VertexOutcome::Extreme, n_components, covered));
    }

    // Moves from additive edges, then zero-propagation at cell level.
    let mut moves: Vec<(bool, usize, usize)> = Vec::new(); // (is_reflection, src, other)
    for i in 0..q {
        for j in 1..=q {
            if i + j + 1 <= q && additive(i, j) && additive(i + 1, j) {
                moves.push((false, i, i + j));
            }
        }
    }
    for j in 0..q {
        for i in 1..=q {
            if i + j + 1 <= q && additive(i, j) && additive(i, j + 1) {
                moves.push((false, j, i + j));
            }
        }
    }
    let mut reflections: Vec<(usize, usize)> = Vec::new(); // (src cell, center k)
    for k in 1..=q {
        for i in 0..q {
            if i + 1 > k {
                break;
            }
            if k - i <= q && additive(i, k - i) && additive(i + 1, k - i - 1) {
                reflections.push((i, k));
            }
        }
    }
    let mut zero = covered.clone();
    loop {
        let mut changed = false;
        for &(_, a, b) in &moves {
            if zero[a] != zero[b] {
                zero[a] = true;
                zero[b] = true;
                changed = true;
            }
        }
        for &(i, k) in &reflections {
            let b = k - i - 1;
            if b < q && zero[i] != zero[b] {
                zero[i] = true;
                zero[b] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if zero.iter().all(|z| *z) {
        return Some((VertexOutcome::Extreme, n_components, covered));
    }

    // Quarter-cell bump classes.
    let n_atoms = 4 * q;
    let zero_node = n_atoms;
    let mut dsu = SignedDsu::new(n_atoms + 1);
    for c in 0..q {
        if zero[c] {
            for r in 0..4 {
                dsu.relate(4 * c + r, zero_node, 1);
            }
        }
    }
    for &(_, src, dst) in &moves {
        for r in 0..4 {
            dsu.relate(4 * src + r, 4 * dst + r, 1);
        }
    }
    for &(src, k) in &reflections {
        for r in 0..4 {
            let a = 4 * src + r;
            let b = 4 * k - 1 - a;
            if b < n_atoms {
                dsu.relate(a, b, -1);
            }
        }
    }
    let (zero_root, _) = dsu.find(zero_node);
    // Interpolated values on the 8q grid, over denominator 8d.
    let mut refined = Vec::with_capacity(8 * q + 1);
    for i in 0..q {
        for r in 0..8i128 {
            refined.push((8 - r) * n[i] + r * n[i + 1]);
        }
    }
    refined.push(8 * n[q]);
    let rn = refined.len() - 1;
    let mut tried: Vec<usize> = Vec::new();
    for anchor in 0..n_atoms {
        let (r0, anchor_sign) = dsu.find(anchor);
        if r0 == zero_root || dsu.dead[r0] || tried.contains(&r0) {
            continue;
        }
        tried.push(r0);
        let mut bump = vec![0i128; 8 * q + 1];
        for a in 0..n_atoms {
            let (r, s) = dsu.find(a);
            if r == r0 {
                bump[2 * a + 1] = (s * anchor_sign) as i128;
            }
        }
        // delta/sigma over strictly superadditive refined pairs; bump slacks
        // are small integers.
        let mut delta: i128 = i128::MAX;
        let mut sigma: i128 = 0;
        for i in 0..=rn {
            for j in i..=rn - i {
                let s = islack(&refined, i, j);
                if s > 0 {
                    let t = islack(&bump, i, j).abs();
                    if s < delta {
                        delta = s;
                    }
                    if t > sigma {
                        sigma = t;
                    }
                }
            }
        }
        if delta == i128::MAX || sigma == 0 {
            // No strict pair constrains epsilon; epsilon = 1.
            delta = 1;
            sigma = 1;
        }
        // Verify sigma*refined +/- delta*bump over denominator 8*d*sigma.
        let dd = 8 * d * sigma;
        let check = |sign: i128| -> bool {
            let vals: Vec<i128> = refined
                .iter()
                .zip(&bump)
                .map(|(v, b)| sigma * v + sign * delta * b)
                .collect();
            if vals[0] != 0 {
                return false;
            }
            for i in 0..=rn {
                if vals[i] < 0 || vals[i] > dd || vals[i] + vals[rn - i] != dd {
                    return false;
                }
            }
            for i in 1..=rn {
                for j in i..=rn.saturating_sub(i) {
                    if islack(&vals, i, j) < 0 {
                        return false;
                    }
                }
            }
            true
        };
        if check(1) && check(-1) {
            return Some((VertexOutcome::NotExtreme, n_components, covered));
        }
    }
    Some((VertexOutcome::Inconclusive, n_components, covered))
}

/// Outcome-only filter used by the search pipeline: integer arithmetic over
/// the common denominator when it fits, with the exact rational path as
/// fallback.
pub(crate) fn filter_vertex_fast(values: &[Rational]) -> VertexOutcome {
    match filter_vertex_int(values) {
        Some((outcome, _, _)) => outcome,
        None => filter_vertex(values).0,
    }
}

/// Full filter for a continuous polytope vertex.
///
/// Grid maximality must hold. Fully covered vertices are extreme; so are
/// vertices whose uncovered cells are all move-tied to the covered region,
/// because any perturbation is then piecewise linear on the grid and
/// vanishes by the vertex property. The remaining vertices get a verified
/// quarter-cell bump perturbation on a surviving move class.
pub fn filter_vertex(values: &[Rational]) -> (VertexOutcome, Cover) {
    assert!(grid_maximality(values), "polytope point violates maximality");
    if let Some((outcome, _, _)) = filter_vertex_int(values) {
        if outcome != VertexOutcome::Inconclusive {
            let cover = grid_cover(values);
            return (outcome, cover);
        }
    }
    let q = values.len() - 1;
    let cover = grid_cover(values);
    if cover.fully_covered() {
        return (VertexOutcome::Extreme, cover);
    }
    let cell_index = |x: &Rational| -> usize {
        let v: i64 = (x * rat(q as i64, 1))
            .to_integer()
            .try_into()
            .expect("grid index fits");
        v as usize
    };
    let mut uncovered_cells = vec![false; q];
    for (a, b) in &cover.uncovered {
        for c in cell_index(a)..cell_index(b) {
            uncovered_cells[c] = true;
        }
    }
    let covered_cells: Vec<bool> = uncovered_cells.iter().map(|u| !u).collect();
    let moves = collect_moves(values);
    let zero = zero_tied_cells(q, &covered_cells, &moves);
    if zero.iter().all(|z| *z) {
        return (VertexOutcome::Extreme, cover);
    }

    // Quarter-cell atoms: a composed reflection can never fix one, so the
    // move classes on free cells carry bumps.
    let n_atoms = 4 * q;
    let zero_node = n_atoms;
    let mut dsu = SignedDsu::new(n_atoms + 1);
    for c in 0..q {
        if zero[c] {
            for r in 0..4 {
                dsu.relate(4 * c + r, zero_node, 1);
            }
        }
    }
    for m in &moves {
        match m {
            Move::Translate { src, shift } => {
                for r in 0..4 {
                    let a = 4 * src + r;
                    let b = a + 4 * shift;
                    if b < n_atoms {
                        dsu.relate(a, b, 1);
                    }
                }
            }
            Move::Reflect { src, k } => {
                for r in 0..4 {
                    let a = 4 * src + r;
                    let b = 4 * k - 1 - a;
                    if b < n_atoms {
                        dsu.relate(a, b, -1);
                    }
                }
            }
        }
    }
    let (zero_root, _) = dsu.find(zero_node);
    let refined = refine(values, 8);
    let mut any_survivor = false;
    let mut tried: Vec<usize> = Vec::new();
    for anchor in 0..n_atoms {
        let (root, anchor_sign) = dsu.find(anchor);
        if root == zero_root || dsu.dead[root] || tried.contains(&root) {
            continue;
        }
        any_survivor = true;
        tried.push(root);
        // Heights of this class, anchored at +1 on `anchor`.
        let mut bump = vec![Rational::zero(); 8 * q + 1];
        for a in 0..n_atoms {
            let (r, s) = dsu.find(a);
            if r == root {
                bump[2 * a + 1] = rat((s * anchor_sign) as i64, 1);
            }
        }
        // epsilon = delta / sigma over strict pairs of the 8q grid.
        let mut delta: Option<Rational> = None;
        let mut sigma = Rational::zero();
        let n = refined.len() - 1;
        for i in 0..=n {
            for j in i..=n - i {
                let s = slack(&refined, i, j);
                if s.is_positive() {
                    let t = slack(&bump, i, j).abs();
                    if delta.as_ref().is_none_or(|d| s < *d) {
                        delta = Some(s);
                    }
                    if t > sigma {
                        sigma = t;
                    }
                } else {
                    debug_assert!(s.is_zero() && slack(&bump, i, j).is_zero());
                }
            }
        }
        let epsilon = match delta {
            Some(d) if sigma.is_positive() => d / &sigma,
            _ => Rational::one(),
        };
        let plus: Vec<Rational> = refined
            .iter()
            .zip(&bump)
            .map(|(v, b)| v + &epsilon * b)
            .collect();
        let minus: Vec<Rational> = refined
            .iter()
            .zip(&bump)
            .map(|(v, b)| v - &epsilon * b)
            .collect();
        if grid_maximality(&plus) && grid_maximality(&minus) {
            return (VertexOutcome::NotExtreme, cover);
        }
    }
    if any_survivor {
        (VertexOutcome::Inconclusive, cover)
    } else {
        // Some class died by a sign contradiction without reaching the
        // covered region; no verified conclusion either way.
        (VertexOutcome::Inconclusive, cover)
    }
}

//! The two-dimensional polyhedral complex of a piecewise-linear function:
//! faces F(I,J,K) = {(x,y) : x in I, y in J, x+y in K} over the cells of the
//! one-dimensional breakpoint complex, superadditivity slacks with limit
//! semantics, additive faces, and covered components.
//!
//! Faces are identified by their minimal triple: the three projections
//! p1 = x, p2 = y, p3 = x+y of the actual point set. The slack limit
//! `nabla_F` at a boundary point is computed from the affine formulas the
//! minimal triple selects, which realizes the limit-cone semantics with a
//! finite check set.

use crate::pwl::PwlFunction;
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("point does not belong to the face")]
    VertexNotInFace,
}

/// A projection of a face: a single point or a nondegenerate closed interval.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Proj {
    Point(Rational),
    Interval(Rational, Rational),
}

impl Proj {
    pub fn lo(&self) -> &Rational {
        match self {
            Proj::Point(a) => a,
            Proj::Interval(a, _) => a,
        }
    }
    pub fn hi(&self) -> &Rational {
        match self {
            Proj::Point(a) => a,
            Proj::Interval(_, b) => b,
        }
    }
    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= x && x <= self.hi()
    }
    fn subset_of(&self, other: &Proj) -> bool {
        other.lo() <= self.lo() && self.hi() <= other.hi()
    }
}

/// A face of the complex, carrying its minimal triple, dimension, and the
/// exact vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub i: Proj,
    pub j: Proj,
    pub k: Proj,
    pub dim: u8,
    pub vertices: Vec<(Rational, Rational)>,
}

impl Face {
    pub fn contains_point(&self, v: &(Rational, Rational)) -> bool {
        self.i.contains(&v.0) && self.j.contains(&v.1) && self.k.contains(&(&v.0 + &v.1))
    }
    pub fn contains_face(&self, other: &Face) -> bool {
        other.i.subset_of(&self.i) && other.j.subset_of(&self.j) && other.k.subset_of(&self.k)
    }
    fn key(&self) -> (Rational, Rational, Rational, Rational, Rational, Rational) {
        (
            self.i.lo().clone(),
            self.i.hi().clone(),
            self.j.lo().clone(),
            self.j.hi().clone(),
            self.k.lo().clone(),
            self.k.hi().clone(),
        )
    }
}

/// The complex of a function, with per-face additivity established by slack
/// values at vertices.
#[derive(Debug, Clone)]
pub struct Complex2D {
    pub faces: Vec<Face>,
    /// For face `faces[f]`, whether the slack limit vanishes on all of it.
    pub additive: Vec<bool>,
}

/// Covered components: unions of closed intervals tied together by the three
/// projections of two-dimensional additive faces, and the complementary open
/// uncovered intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub components: Vec<Vec<(Rational, Rational)>>,
    pub uncovered: Vec<(Rational, Rational)>,
}

impl Cover {
    pub fn fully_covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Values that can live on an axis: exact scalars, or coefficient rows of a
// linear space of candidate perturbations.
// ---------------------------------------------------------------------------

pub(crate) trait LinValue: Clone {
    fn lin_add(&self, o: &Self) -> Self;
    fn lin_sub(&self, o: &Self) -> Self;
    fn lin_scale(&self, c: &Rational) -> Self;
    fn lin_is_zero(&self) -> bool;
}

impl LinValue for Rational {
    fn lin_add(&self, o: &Self) -> Self {
        self + o
    }
    fn lin_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn lin_scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn lin_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl LinValue for Vec<Rational> {
    fn lin_add(&self, o: &Self) -> Self {
        self.iter().zip(o).map(|(a, b)| a + b).collect()
    }
    fn lin_sub(&self, o: &Self) -> Self {
        self.iter().zip(o).map(|(a, b)| a - b).collect()
    }
    fn lin_scale(&self, c: &Rational) -> Self {
        self.iter().map(|a| a * c).collect()
    }
    fn lin_is_zero(&self) -> bool {
        self.iter().all(Zero::is_zero)
    }
}

/// One axis of the complex: sorted breakpoints with values and one-sided
/// limits, plus optional affine tails for unbounded domains.
#[derive(Debug, Clone)]
pub(crate) struct AxisEval<V> {
    pub breaks: Vec<Rational>,
    pub value: Vec<V>,
    /// Left limit at breaks[i]; `None` only allowed at i = 0.
    pub left_lim: Vec<Option<V>>,
    /// Right limit at breaks[i]; `None` only allowed at the last index.
    pub right_lim: Vec<Option<V>>,
    /// (slope, limit value at breaks[0]-) of the affine piece on (-inf, breaks[0]).
    pub left_tail: Option<(V, V)>,
    /// (slope, limit value at breaks[last]+) of the affine piece beyond the end.
    pub right_tail: Option<(V, V)>,
}

impl<V: LinValue> AxisEval<V> {
    fn interp(&self, cell: usize, x: &Rational) -> V {
        let (b0, b1) = (&self.breaks[cell], &self.breaks[cell + 1]);
        let v0 = self.right_lim[cell].as_ref().expect("interior right limit");
        let v1 = self.left_lim[cell + 1].as_ref().expect("interior left limit");
        let t = (x - b0) / (b1 - b0);
        v0.lin_add(&v1.lin_sub(v0).lin_scale(&t))
    }

    /// Function value at a point (limits only via tails).
    fn value_at(&self, x: &Rational) -> V {
        if x < &self.breaks[0] {
            let (slope, anchor) = self.left_tail.as_ref().expect("point left of domain");
            return anchor.lin_add(&slope.lin_scale(&(x - &self.breaks[0])));
        }
        let last = self.breaks.len() - 1;
        if x > &self.breaks[last] {
            let (slope, anchor) = self.right_tail.as_ref().expect("point right of domain");
            return anchor.lin_add(&slope.lin_scale(&(x - &self.breaks[last])));
        }
        match self.breaks.binary_search(x) {
            Ok(i) => self.value[i].clone(),
            Err(i) => self.interp(i - 1, x),
        }
    }

    /// Limit value at `x` approached within the projection set `p`: the value
    /// itself for point projections, otherwise the open-cell interpolant of
    /// the cell containing the interval's interior.
    pub fn eval_proj(&self, p: &Proj, x: &Rational) -> V {
        match p {
            Proj::Point(a) => self.value_at(a),
            Proj::Interval(c, d) => {
                if d <= &self.breaks[0] {
                    let (slope, anchor) = self.left_tail.as_ref().expect("interval left of domain");
                    return anchor.lin_add(&slope.lin_scale(&(x - &self.breaks[0])));
                }
                let last = self.breaks.len() - 1;
                if c >= &self.breaks[last] {
                    let (slope, anchor) =
                        self.right_tail.as_ref().expect("interval right of domain");
                    return anchor.lin_add(&slope.lin_scale(&(x - &self.breaks[last])));
                }
                // Locate the cell [b_i, b_{i+1}] containing (c, d).
                let i = match self.breaks.binary_search(c) {
                    Ok(i) => i,
                    Err(i) => i - 1,
                };
                debug_assert!(d <= &self.breaks[i + 1]);
                self.interp(i, x)
            }
        }
    }

    /// Slope of the affine formula selected by a nondegenerate projection.
    pub fn proj_slope(&self, p: &Proj) -> V {
        match p {
            Proj::Point(_) => unreachable!("slope of a point projection is never used"),
            Proj::Interval(c, d) => {
                if d <= &self.breaks[0] {
                    return self.left_tail.as_ref().unwrap().0.clone();
                }
                let last = self.breaks.len() - 1;
                if c >= &self.breaks[last] {
                    return self.right_tail.as_ref().unwrap().0.clone();
                }
                let i = match self.breaks.binary_search(c) {
                    Ok(i) => i,
                    Err(i) => i - 1,
                };
                let v0 = self.right_lim[i].as_ref().unwrap();
                let v1 = self.left_lim[i + 1].as_ref().unwrap();
                v1.lin_sub(v0)
                    .lin_scale(&(Rational::from_integer(1.into()) / (&self.breaks[i + 1] - &self.breaks[i])))
            }
        }
    }
}

pub(crate) fn axis_from_pwl(f: &PwlFunction) -> AxisEval<Rational> {
    AxisEval {
        breaks: f.breakpoint_xs(),
        value: f.breakpoints().iter().map(|b| b.value.clone()).collect(),
        left_lim: f.breakpoints().iter().map(|b| b.limit_left.clone()).collect(),
        right_lim: f
            .breakpoints()
            .iter()
            .map(|b| b.limit_right.clone())
            .collect(),
        left_tail: None,
        right_tail: None,
    }
}

/// Axis of `f` refined by extra breakpoints (values filled by evaluation).
pub(crate) fn axis_from_pwl_refined(f: &PwlFunction, extra: &[Rational]) -> AxisEval<Rational> {
    use crate::pwl::Side;
    let mut xs = f.breakpoint_xs();
    xs.extend(extra.iter().cloned());
    xs.sort();
    xs.dedup();
    let last = xs.len() - 1;
    AxisEval {
        value: xs.iter().map(|x| f.evaluate(x).unwrap()).collect(),
        left_lim: xs
            .iter()
            .enumerate()
            .map(|(i, x)| (i > 0).then(|| f.limit(x, Side::Left).unwrap()))
            .collect(),
        right_lim: xs
            .iter()
            .enumerate()
            .map(|(i, x)| (i < last).then(|| f.limit(x, Side::Right).unwrap()))
            .collect(),
        breaks: xs,
        left_tail: None,
        right_tail: None,
    }
}

// ---------------------------------------------------------------------------
// Face enumeration
// ---------------------------------------------------------------------------

/// Closed 1D cell; `None` ends mean unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CellRange {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

/// Cells of the complex of a sorted breakpoint list: singletons and the
/// intervals between adjacent breakpoints, plus optional unbounded tails.
pub(crate) fn cells_of_breaks(breaks: &[Rational], tails: bool) -> Vec<CellRange> {
    let mut cells = Vec::new();
    if tails {
        cells.push(CellRange {
            lo: None,
            hi: Some(breaks[0].clone()),
        });
    }
    for (i, b) in breaks.iter().enumerate() {
        cells.push(CellRange {
            lo: Some(b.clone()),
            hi: Some(b.clone()),
        });
        if i + 1 < breaks.len() {
            cells.push(CellRange {
                lo: Some(b.clone()),
                hi: Some(breaks[i + 1].clone()),
            });
        }
    }
    if tails {
        cells.push(CellRange {
            lo: Some(breaks[breaks.len() - 1].clone()),
            hi: None,
        });
    }
    cells
}

/// Geometry of one face: minimal triple, vertices, and (for unbounded faces)
/// recession directions and a base point.
#[derive(Debug, Clone)]
pub(crate) struct FaceGeom {
    pub face: Face,
    pub rays: Vec<(i8, i8)>,
    pub base: Option<(Rational, Rational)>,
}

const RAY_CANDIDATES: [(i8, i8); 8] = [
    (-1, 0),
    (1, 0),
    (0, -1),
    (0, 1),
    (1, -1),
    (-1, 1),
    (1, 1),
    (-1, -1),
];

fn in_range(x: &Rational, lo: &Option<Rational>, hi: &Option<Rational>) -> bool {
    lo.as_ref().is_none_or(|l| l <= x) && hi.as_ref().is_none_or(|h| x <= h)
}

fn face_geometry(ix: &CellRange, jy: &CellRange, ks: &CellRange) -> Option<FaceGeom> {
    let feasible = |x: &Rational, y: &Rational| {
        in_range(x, &ix.lo, &ix.hi)
            && in_range(y, &jy.lo, &jy.hi)
            && in_range(&(x + y), &ks.lo, &ks.hi)
    };

    // Candidate vertices: pairwise intersections of tight constraint lines.
    let mut vertices: Vec<(Rational, Rational)> = Vec::new();
    let xs: Vec<&Rational> = [&ix.lo, &ix.hi].iter().filter_map(|o| o.as_ref()).collect();
    let ys: Vec<&Rational> = [&jy.lo, &jy.hi].iter().filter_map(|o| o.as_ref()).collect();
    let ss: Vec<&Rational> = [&ks.lo, &ks.hi].iter().filter_map(|o| o.as_ref()).collect();
    for &x in &xs {
        for &y in &ys {
            vertices.push((x.clone(), y.clone()));
        }
        for &s in &ss {
            vertices.push((x.clone(), s - x));
        }
    }
    for &y in &ys {
        for &s in &ss {
            vertices.push((s - y, y.clone()));
        }
    }
    vertices.retain(|(x, y)| feasible(x, y));
    vertices.sort();
    vertices.dedup();

    // Recession directions.
    let rec_ok = |d: i8, lo: &Option<Rational>, hi: &Option<Rational>| match d.cmp(&0) {
        std::cmp::Ordering::Less => lo.is_none(),
        std::cmp::Ordering::Equal => true,
        std::cmp::Ordering::Greater => hi.is_none(),
    };
    let rays: Vec<(i8, i8)> = RAY_CANDIDATES
        .iter()
        .copied()
        .filter(|&(dx, dy)| {
            rec_ok(dx, &ix.lo, &ix.hi) && rec_ok(dy, &jy.lo, &jy.hi) && rec_ok(dx + dy, &ks.lo, &ks.hi)
        })
        .collect();

    // A base point, needed when the face has no vertices.
    let base = if vertices.is_empty() {
        // Feasible x-range combining the direct bounds with s - y bounds.
        let x_lo = match (&ix.lo, &ks.lo, &jy.hi) {
            (l, Some(s), Some(yh)) => {
                let implied = s - yh;
                Some(l.as_ref().map_or(implied.clone(), |l| implied.max(l.clone())))
            }
            (l, _, _) => l.clone(),
        };
        let x_hi = match (&ix.hi, &ks.hi, &jy.lo) {
            (h, Some(s), Some(yl)) => {
                let implied = s - yl;
                Some(h.as_ref().map_or(implied.clone(), |h| implied.min(h.clone())))
            }
            (h, _, _) => h.clone(),
        };
        if let (Some(l), Some(h)) = (&x_lo, &x_hi) {
            if l > h {
                return None;
            }
        }
        let x = match (&x_lo, &x_hi) {
            (Some(l), Some(h)) => (l + h) / Rational::from_integer(2.into()),
            (Some(l), None) => l + Rational::from_integer(1.into()),
            (None, Some(h)) => h - Rational::from_integer(1.into()),
            (None, None) => Rational::zero(),
        };
        let y_lo = match (&jy.lo, &ks.lo) {
            (l, Some(s)) => {
                let implied = s - &x;
                Some(l.as_ref().map_or(implied.clone(), |l| implied.max(l.clone())))
            }
            (l, _) => l.clone(),
        };
        let y_hi = match (&jy.hi, &ks.hi) {
            (h, Some(s)) => {
                let implied = s - &x;
                Some(h.as_ref().map_or(implied.clone(), |h| implied.min(h.clone())))
            }
            (h, _) => h.clone(),
        };
        if let (Some(l), Some(h)) = (&y_lo, &y_hi) {
            if l > h {
                return None;
            }
        }
        let y = match (&y_lo, &y_hi) {
            (Some(l), Some(h)) => (l + h) / Rational::from_integer(2.into()),
            (Some(l), None) => l + Rational::from_integer(1.into()),
            (None, Some(h)) => h - Rational::from_integer(1.into()),
            (None, None) => Rational::zero(),
        };
        if !feasible(&x, &y) {
            return None;
        }
        Some((x, y))
    } else {
        None
    };

    if vertices.is_empty() && base.is_none() {
        return None;
    }

    // Minimal triple from vertices, base, and rays.
    let pts: Vec<&(Rational, Rational)> = vertices.iter().chain(base.iter()).collect();
    let range_of = |f: &dyn Fn(&(Rational, Rational)) -> Rational,
                    ray_f: &dyn Fn(&(i8, i8)) -> i8|
     -> Proj {
        let mut lo = f(pts[0]);
        let mut hi = lo.clone();
        for p in &pts[1..] {
            let v = f(p);
            if v < lo {
                lo = v.clone();
            }
            if v > hi {
                hi = v;
            }
        }
        let unbounded_below = rays.iter().any(|r| ray_f(r) < 0);
        let unbounded_above = rays.iter().any(|r| ray_f(r) > 0);
        // Unbounded projections only arise with tails; the public bounded
        // complex never hits this. Represent them by the finite data we have.
        match (unbounded_below, unbounded_above) {
            (false, false) if lo == hi => Proj::Point(lo),
            _ => Proj::Interval(lo, hi),
        }
    };
    let p1 = range_of(&|p| p.0.clone(), &|r| r.0);
    let p2 = range_of(&|p| p.1.clone(), &|r| r.1);
    let p3 = range_of(&|p| &p.0 + &p.1, &|r| r.0 + r.1);

    // Dimension: affine rank of vertex differences plus ray directions.
    let mut dirs: Vec<(Rational, Rational)> = Vec::new();
    let origin = pts[0];
    for p in &pts[1..] {
        dirs.push((&p.0 - &origin.0, &p.1 - &origin.1));
    }
    for (dx, dy) in &rays {
        dirs.push((
            Rational::from_integer((*dx as i64).into()),
            Rational::from_integer((*dy as i64).into()),
        ));
    }
    dirs.retain(|(a, b)| !a.is_zero() || !b.is_zero());
    let dim = if dirs.is_empty() {
        0
    } else {
        let first = &dirs[0];
        if dirs
            .iter()
            .all(|d| (&d.0 * &first.1 - &d.1 * &first.0).is_zero())
        {
            1
        } else {
            2
        }
    };

    Some(FaceGeom {
        face: Face {
            i: p1,
            j: p2,
            k: p3,
            dim,
            vertices,
        },
        rays,
        base,
    })
}

/// Enumerates all faces over three axes of cells, deduplicated by minimal
/// triple and ordered lexicographically by it.
pub(crate) fn scan_faces(
    x_cells: &[CellRange],
    y_cells: &[CellRange],
    s_cells: &[CellRange],
) -> Vec<FaceGeom> {
    let mut out: BTreeMap<_, FaceGeom> = BTreeMap::new();
    for ix in x_cells {
        for jy in y_cells {
            let s_lo = match (&ix.lo, &jy.lo) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            let s_hi = match (&ix.hi, &jy.hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            for ks in s_cells {
                // Quick rejection: the s-cell must meet [s_lo, s_hi].
                let meets = ks.lo.as_ref().is_none_or(|kl| {
                    s_hi.as_ref().is_none_or(|sh| kl <= sh)
                }) && ks.hi.as_ref().is_none_or(|kh| {
                    s_lo.as_ref().is_none_or(|sl| sl <= kh)
                });
                if !meets {
                    continue;
                }
                if let Some(geom) = face_geometry(ix, jy, ks) {
                    out.entry(geom.face.key()).or_insert(geom);
                }
            }
        }
    }
    out.into_values().collect()
}

/// Slack of the superadditivity condition with the limit semantics of the
/// face: value(x+y) - value(x) - value(y) where each term uses the affine
/// formula selected by the corresponding projection of the minimal triple.
pub(crate) fn face_slack<V: LinValue>(
    ax: &AxisEval<V>,
    ay: &AxisEval<V>,
    asum: &AxisEval<V>,
    face: &Face,
    x: &Rational,
    y: &Rational,
) -> V {
    let s = x + y;
    asum.eval_proj(&face.k, &s)
        .lin_sub(&ax.eval_proj(&face.i, x))
        .lin_sub(&ay.eval_proj(&face.j, y))
}

/// Directional derivative of the slack along a recession direction.
pub(crate) fn face_slack_ray<V: LinValue>(
    ax: &AxisEval<V>,
    ay: &AxisEval<V>,
    asum: &AxisEval<V>,
    face: &Face,
    dir: (i8, i8),
) -> V
where
    V: LinValue,
{
    let (dx, dy) = dir;
    let ds = dx + dy;
    let scale = |v: &V, c: i8| v.lin_scale(&Rational::from_integer((c as i64).into()));
    // Start from the s term (or its negation) to avoid needing a zero value.
    let mut acc: Option<V> = None;
    let mut add = |term: Option<V>| {
        if let Some(t) = term {
            acc = Some(match &acc {
                None => t,
                Some(a) => a.lin_add(&t),
            });
        }
    };
    add((ds != 0).then(|| scale(&asum.proj_slope(&face.k), ds)));
    add((dx != 0).then(|| scale(&ax.proj_slope(&face.i), -dx)));
    add((dy != 0).then(|| scale(&ay.proj_slope(&face.j), -dy)));
    acc.expect("ray has at least one nonzero displacement")
}

// ---------------------------------------------------------------------------
// Public operations on PwlFunction
// ---------------------------------------------------------------------------

fn scan_pwl(f: &PwlFunction) -> (Vec<FaceGeom>, AxisEval<Rational>) {
    let axis = axis_from_pwl(f);
    let cells = cells_of_breaks(&axis.breaks, false);
    let faces = scan_faces(&cells, &cells, &cells);
    (faces, axis)
}

/// Builds the full complex of `f` over the triangle {x, y, x+y in [0,1]},
/// marking faces whose slack limit vanishes identically.
pub fn build_complex(f: &PwlFunction) -> Complex2D {
    let (geoms, axis) = scan_pwl(f);
    let mut faces = Vec::with_capacity(geoms.len());
    let mut additive = Vec::with_capacity(geoms.len());
    for g in geoms {
        let add = g
            .face
            .vertices
            .iter()
            .all(|(x, y)| face_slack(&axis, &axis, &axis, &g.face, x, y).is_zero());
        faces.push(g.face);
        additive.push(add);
    }
    Complex2D { faces, additive }
}

/// Limit of the slack along the relative interior of `face` at `v`.
pub fn nabla_at(
    f: &PwlFunction,
    face: &Face,
    v: &(Rational, Rational),
) -> Result<Rational, ComplexError> {
    if !face.contains_point(v) {
        return Err(ComplexError::VertexNotInFace);
    }
    let axis = axis_from_pwl(f);
    Ok(face_slack(&axis, &axis, &axis, face, &v.0, &v.1))
}

/// All additive faces that are not contained in a larger additive face.
///
/// A face F is additive when some face F' containing it has vanishing slack
/// limit on all of F; for continuous functions this reduces to the slack
/// vanishing at the vertices of F.
pub fn additive_faces(f: &PwlFunction) -> Vec<Face> {
    let (geoms, axis) = scan_pwl(f);
    let slack_on = |outer: &Face, inner: &Face| -> bool {
        inner
            .vertices
            .iter()
            .all(|(x, y)| face_slack(&axis, &axis, &axis, outer, x, y).is_zero())
    };
    let additive: Vec<bool> = geoms
        .iter()
        .map(|g| {
            slack_on(&g.face, &g.face)
                || geoms
                    .iter()
                    .any(|h| h.face.dim > g.face.dim && h.face.contains_face(&g.face) && slack_on(&h.face, &g.face))
        })
        .collect();
    geoms
        .iter()
        .zip(&additive)
        .filter(|(g, &a)| {
            a && !geoms.iter().zip(&additive).any(|(h, &ha)| {
                ha && h.face.dim > g.face.dim && h.face.contains_face(&g.face)
            })
        })
        .map(|(g, _)| g.face.clone())
        .collect()
}

/// Covered components from the projections of 2-dimensional additive faces.
pub fn covered_components(f: &PwlFunction) -> Cover {
    let (geoms, axis) = scan_pwl(f);
    let mut projections: Vec<[(Rational, Rational); 3]> = Vec::new();
    for g in &geoms {
        if g.face.dim != 2 {
            continue;
        }
        let add = g
            .face
            .vertices
            .iter()
            .all(|(x, y)| face_slack(&axis, &axis, &axis, &g.face, x, y).is_zero());
        if add {
            let iv = |p: &Proj| (p.lo().clone(), p.hi().clone());
            projections.push([iv(&g.face.i), iv(&g.face.j), iv(&g.face.k)]);
        }
    }
    cover_from_projections(&projections)
}

/// Union-find merge of projection triples into components. Intervals merge
/// when their interiors overlap; the three projections of one face always
/// merge. Exposed for the grid-specialized search path.
pub(crate) fn cover_from_projections(projections: &[[(Rational, Rational); 3]]) -> Cover {
    use num_traits::One;
    let mut ends: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for t in projections {
        for (lo, hi) in t {
            ends.push(lo.clone());
            ends.push(hi.clone());
        }
    }
    ends.sort();
    ends.dedup();
    let n_atoms = ends.len() - 1;
    let mut parent: Vec<usize> = (0..n_atoms).collect();
    fn root(parent: &mut Vec<usize>, mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut covered = vec![false; n_atoms];
    let atom_range = |lo: &Rational, hi: &Rational| -> (usize, usize) {
        let a = ends.binary_search(lo).unwrap();
        let b = ends.binary_search(hi).unwrap();
        (a, b)
    };
    for t in projections {
        let mut first: Option<usize> = None;
        for (lo, hi) in t {
            let (a, b) = atom_range(lo, hi);
            for atom in a..b {
                covered[atom] = true;
                let anchor = *first.get_or_insert(atom);
                let (ra, rb) = (root(&mut parent, anchor), root(&mut parent, atom));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    // Group atoms by root, merge adjacent atoms into intervals.
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for atom in 0..n_atoms {
        if covered[atom] {
            let r = root(&mut parent, atom);
            by_root.entry(r).or_default().push(atom);
        }
    }
    let mut components: Vec<Vec<(Rational, Rational)>> = Vec::new();
    for (_, atoms) in by_root {
        let mut intervals: Vec<(Rational, Rational)> = Vec::new();
        for atom in atoms {
            let (lo, hi) = (ends[atom].clone(), ends[atom + 1].clone());
            match intervals.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => intervals.push((lo, hi)),
            }
        }
        components.push(intervals);
    }
    components.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    let mut uncovered: Vec<(Rational, Rational)> = Vec::new();
    for atom in 0..n_atoms {
        let (lo, hi) = (ends[atom].clone(), ends[atom + 1].clone());
        if !covered[atom] {
            match uncovered.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => uncovered.push((lo, hi)),
            }
        }
    }
    Cover {
        components,
        uncovered,
    }
}

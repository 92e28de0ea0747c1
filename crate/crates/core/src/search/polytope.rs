//! H-representations of the polytopes of discrete grid DFF data: variables
//! are function values (and one-sided limits in the discontinuous case) on
//! the grid, constraints come from superadditivity, symmetry, and the unit
//! range.

use crate::rational::{rat, Rational};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("grid parameter q must be at least 2")]
    BadQ,
    #[error("polytope is infeasible")]
    Infeasible,
    #[error("unbounded variable: the representation must carry explicit bounds")]
    Unbounded,
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    #[serde(rename = "continuous")]
    Continuous,
    #[serde(rename = "discontinuous")]
    Discontinuous,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Continuous => "continuous",
            Mode::Discontinuous => "discontinuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    /// Slack of value/limit superadditivity at grid pair (i, j).
    Superadditivity(u32, u32),
    /// Value or limit symmetry anchored at grid index i.
    Symmetry(u32),
    /// 0 <= var <= 1 for the variable of grid index i.
    Bound(u32),
    /// Pinned value (the origin).
    Fixed,
}

/// Inequalities read `row . x <= rhs`; equalities `row . x = rhs`.
#[derive(Debug, Clone)]
pub struct HRep {
    pub num_vars: usize,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub eq_labels: Vec<Label>,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub ineq_labels: Vec<Label>,
}

impl HRep {
    fn zero_row(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.num_vars]
    }
    fn push_eq(&mut self, row: Vec<Rational>, rhs: Rational, label: Label) {
        self.equalities.push((row, rhs));
        self.eq_labels.push(label);
    }
    fn push_ineq(&mut self, row: Vec<Rational>, rhs: Rational, label: Label) {
        self.inequalities.push((row, rhs));
        self.ineq_labels.push(label);
    }
}

/// Variable layout of the discontinuous grid: values v_0..v_q first, then
/// left limits l_1..l_{q-1}, then right limits r_1..r_{q-1}. The limits at
/// the segment ends (0+ and 1-) coincide with the endpoint values, matching
/// the continuity of maximal functions there.
pub(crate) struct VarMap {
    pub q: u32,
}

impl VarMap {
    pub fn value(&self, i: u32) -> usize {
        i as usize
    }
    pub fn left(&self, i: u32) -> Option<usize> {
        (i >= 1 && i <= self.q - 1).then(|| (self.q as usize + 1) + (i as usize - 1))
            .or(if i == self.q { Some(self.value(i)) } else { None })
    }
    pub fn right(&self, i: u32) -> Option<usize> {
        (i >= 1 && i <= self.q - 1)
            .then(|| (self.q as usize + 1) + (self.q as usize - 1) + (i as usize - 1))
            .or(if i == 0 { Some(self.value(0)) } else { None })
    }
    pub fn total(&self) -> usize {
        (self.q as usize + 1) + 2 * (self.q as usize - 1)
    }
}

/// Builds the constraint system whose points are discrete maximal-DFF data on
/// the grid with denominator q.
pub fn build_polytope(q: u32, mode: Mode) -> Result<HRep, SearchError> {
    if q < 2 {
        return Err(SearchError::BadQ);
    }
    match mode {
        Mode::Continuous => Ok(build_continuous(q)),
        Mode::Discontinuous => Ok(build_discontinuous(q)),
    }
}

fn build_continuous(q: u32) -> HRep {
    let n = q as usize + 1;
    let mut h = HRep {
        num_vars: n,
        equalities: Vec::new(),
        eq_labels: Vec::new(),
        inequalities: Vec::new(),
        ineq_labels: Vec::new(),
    };
    // a_0 = 0.
    let mut row = h.zero_row();
    row[0] = Rational::one();
    h.push_eq(row, Rational::zero(), Label::Fixed);
    // a_i + a_{q-i} = 1.
    for i in 0..=q / 2 {
        let mut row = h.zero_row();
        row[i as usize] += Rational::one();
        row[(q - i) as usize] += Rational::one();
        h.push_eq(row, Rational::one(), Label::Symmetry(i));
    }
    // a_i + a_j <= a_{i+j}.
    for i in 1..=q {
        for j in i..=q {
            if i + j > q {
                break;
            }
            let mut row = h.zero_row();
            row[i as usize] += Rational::one();
            row[j as usize] += Rational::one();
            row[(i + j) as usize] -= Rational::one();
            h.push_ineq(row, Rational::zero(), Label::Superadditivity(i, j));
        }
    }
    // 0 <= a_i <= 1.
    for i in 1..q {
        let mut low = h.zero_row();
        low[i as usize] = -Rational::one();
        h.push_ineq(low, Rational::zero(), Label::Bound(i));
        let mut high = h.zero_row();
        high[i as usize] = Rational::one();
        h.push_ineq(high, Rational::one(), Label::Bound(i));
    }
    h
}

/// Limit selections at a grid point: -1 left limit, 0 value, +1 right limit.
type Pattern = (i8, i8, i8);

/// Limit patterns realizable as directions of approach inside the region
/// {x, y >= 0, x + y <= 1} at a vertex (i/q, j/q).
fn realizable_patterns(q: u32, i: u32, j: u32) -> Vec<Pattern> {
    let mut out = Vec::new();
    let dirs: Vec<(i8, i8)> = (-2..=2i8)
        .flat_map(|dx| (-2..=2i8).map(move |dy| (dx, dy)))
        .collect();
    for ex in [-1i8, 0, 1] {
        for ey in [-1i8, 0, 1] {
            for es in [-1i8, 0, 1] {
                let ok = dirs.iter().any(|&(dx, dy)| {
                    dx.signum() == ex
                        && dy.signum() == ey
                        && (dx + dy).signum() == es
                        && (i > 0 || dx >= 0)
                        && (j > 0 || dy >= 0)
                        && (i + j < q || dx + dy <= 0)
                        && (i < q || dx <= 0)
                        && (j < q || dy <= 0)
                        && (i + j > 0 || dx + dy >= 0)
                });
                if ok {
                    out.push((ex, ey, es));
                }
            }
        }
    }
    out
}

fn build_discontinuous(q: u32) -> HRep {
    let vm = VarMap { q };
    let mut h = HRep {
        num_vars: vm.total(),
        equalities: Vec::new(),
        eq_labels: Vec::new(),
        inequalities: Vec::new(),
        ineq_labels: Vec::new(),
    };
    // v_0 = 0.
    let mut row = h.zero_row();
    row[vm.value(0)] = Rational::one();
    h.push_eq(row, Rational::zero(), Label::Fixed);
    // Value symmetry v_i + v_{q-i} = 1.
    for i in 0..=q / 2 {
        let mut row = h.zero_row();
        row[vm.value(i)] += Rational::one();
        row[vm.value(q - i)] += Rational::one();
        h.push_eq(row, Rational::one(), Label::Symmetry(i));
    }
    // Limit symmetry r_i + l_{q-i} = 1.
    for i in 1..q {
        let mut row = h.zero_row();
        row[vm.right(i).unwrap()] += Rational::one();
        row[vm.left(q - i).unwrap()] += Rational::one();
        h.push_eq(row, Rational::one(), Label::Symmetry(i));
    }
    // Superadditivity for every realizable limit pattern.
    let term = |vm: &VarMap, i: u32, e: i8| -> Option<usize> {
        match e {
            -1 => vm.left(i),
            0 => Some(vm.value(i)),
            1 => vm.right(i),
            _ => unreachable!(),
        }
    };
    for i in 0..=q {
        for j in i..=q {
            if i + j > q {
                break;
            }
            for (ex, ey, es) in realizable_patterns(q, i, j) {
                let (Some(tx), Some(ty), Some(ts)) =
                    (term(&vm, i, ex), term(&vm, j, ey), term(&vm, i + j, es))
                else {
                    continue;
                };
                let mut row = h.zero_row();
                row[tx] += Rational::one();
                row[ty] += Rational::one();
                row[ts] -= Rational::one();
                if row.iter().all(Zero::is_zero) {
                    continue;
                }
                h.push_ineq(row, Rational::zero(), Label::Superadditivity(i, j));
            }
        }
    }
    // Bounds on every variable.
    for v in 0..vm.total() {
        let i = if v <= q as usize { v as u32 } else { 0 };
        let mut low = h.zero_row();
        low[v] = -Rational::one();
        h.push_ineq(low, Rational::zero(), Label::Bound(i));
        let mut high = h.zero_row();
        high[v] = Rational::one();
        h.push_ineq(high, Rational::one(), Label::Bound(i));
    }
    h
}

/// Removes inequalities that do not change the feasible set, by exact LP: a
/// constraint is redundant when maximizing its left side subject to all the
/// others stays within its bound.
pub fn minimize_hrep(h: &HRep) -> Result<HRep, SearchError> {
    let mut keep = vec![true; h.inequalities.len()];
    for idx in 0..h.inequalities.len() {
        let (row, rhs) = &h.inequalities[idx];
        let others: Vec<(Vec<Rational>, Rational)> = h
            .inequalities
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx && keep[*k])
            .map(|(_, c)| c.clone())
            .collect();
        match crate::lp::maximize(row, &others, &h.equalities) {
            crate::lp::LpResult::Optimal { value, .. } => {
                if value <= *rhs {
                    keep[idx] = false;
                }
            }
            crate::lp::LpResult::Unbounded => {}
            crate::lp::LpResult::Infeasible => return Err(SearchError::Infeasible),
        }
    }
    let mut out = HRep {
        num_vars: h.num_vars,
        equalities: h.equalities.clone(),
        eq_labels: h.eq_labels.clone(),
        inequalities: Vec::new(),
        ineq_labels: Vec::new(),
    };
    for (i, k) in keep.iter().enumerate() {
        if *k {
            out.inequalities.push(h.inequalities[i].clone());
            out.ineq_labels.push(h.ineq_labels[i].clone());
        }
    }
    Ok(out)
}

/// Discrete function data extracted from a polytope point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteFunction {
    pub q: u32,
    pub values: Vec<Rational>,
    /// (left limits l_1..l_{q-1}, right limits r_1..r_{q-1}).
    pub limits: Option<(Vec<Rational>, Vec<Rational>)>,
}

impl DiscreteFunction {
    pub fn from_point(q: u32, mode: Mode, x: &[Rational]) -> Self {
        match mode {
            Mode::Continuous => DiscreteFunction {
                q,
                values: x[..=q as usize].to_vec(),
                limits: None,
            },
            Mode::Discontinuous => {
                let vm = VarMap { q };
                DiscreteFunction {
                    q,
                    values: x[..=q as usize].to_vec(),
                    limits: Some((
                        (1..q).map(|i| x[vm.left(i).unwrap()].clone()).collect(),
                        (1..q).map(|i| x[vm.right(i).unwrap()].clone()).collect(),
                    )),
                }
            }
        }
    }

    pub fn interpolate(&self) -> Result<crate::pwl::PwlFunction, crate::pwl::PwlError> {
        let limits = self.limits.as_ref().map(|(l, r)| {
            (0..=self.q as usize)
                .map(|i| {
                    if i == 0 || i == self.q as usize {
                        (None, None)
                    } else {
                        (Some(l[i - 1].clone()), Some(r[i - 1].clone()))
                    }
                })
                .collect::<Vec<_>>()
        });
        crate::pwl::interpolate_discrete(self.q, &self.values, limits.as_deref())
    }

    /// Grid superadditivity of the value data.
    pub fn is_superadditive(&self) -> bool {
        let q = self.q as usize;
        for i in 1..=q {
            for j in i..=q {
                if i + j > q {
                    break;
                }
                if &self.values[i] + &self.values[j] > self.values[i + j] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_symmetric(&self) -> bool {
        let q = self.q as usize;
        (0..=q).all(|i| &self.values[i] + &self.values[q - i] == Rational::one())
    }
}

/// The grid restriction of the identity: i/q at each grid point.
pub fn identity_point(q: u32) -> Vec<Rational> {
    (0..=q as i64).map(|i| rat(i, q as i64)).collect()
}

//! Piecewise-linear functions on `[0,1]` with one- and two-sided limits,
//! stored canonically: the breakpoint list is the unique minimal one, so two
//! functions are pointwise equal (including limits) iff their representations
//! are identical.
//!
//! A function may be discontinuous. On each open interval between adjacent
//! breakpoints it is the affine interpolant of the right limit at the left
//! end and the left limit at the right end; the stored `value` at a
//! breakpoint is the actual function value there, which need not agree with
//! either limit.

use crate::rational::{format_rational, parse_rational, rat, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PwlError {
    #[error("breakpoints must start at 0 and end at 1")]
    NonCanonicalDomain,
    #[error("duplicate or unsorted breakpoint at x = {0}")]
    DuplicateBreakpoint(String),
    #[error("argument {0} outside [0,1]")]
    OutOfDomain(String),
    #[error("one-sided limit does not exist at this endpoint")]
    SideUnavailable,
    #[error("grid data must supply all of 0, 1/q, ..., 1 (expected {expected} values, got {got})")]
    MissingGridPoint { expected: usize, got: usize },
    #[error("convex-combination weight outside [0,1]")]
    AlphaOutOfRange,
    #[error("inner function of a composition must be continuous")]
    InnerDiscontinuous,
    #[error("integration interval must satisfy 0 <= a < b <= 1")]
    BadInterval,
    #[error("malformed function file: {0}")]
    Format(String),
}

/// One breakpoint: position, value, and the one-sided limits. The left limit
/// is absent exactly at x = 0 and the right limit exactly at x = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakpoint {
    pub x: Rational,
    pub limit_left: Option<Rational>,
    pub value: Rational,
    pub limit_right: Option<Rational>,
}

impl Breakpoint {
    /// Breakpoint of a continuous function: both limits equal the value.
    pub fn continuous(x: Rational, value: Rational) -> Self {
        Breakpoint {
            x,
            limit_left: Some(value.clone()),
            limit_right: Some(value.clone()),
            value,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.limit_left.iter().all(|l| *l == self.value)
            && self.limit_right.iter().all(|r| *r == self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    At,
    Right,
}

/// Canonical piecewise-linear function on `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwlFunction {
    breakpoints: Vec<Breakpoint>,
}

fn segment_slope(left: &Breakpoint, right: &Breakpoint) -> Rational {
    let rise = right.limit_left.as_ref().expect("interior limit")
        - left.limit_right.as_ref().expect("interior limit");
    let run = &right.x - &left.x;
    rise / run
}

/// Builds a canonical function from raw breakpoints.
///
/// Input must be strictly sorted with first x = 0 and last x = 1. Interior
/// limits left unset default to the value (continuity); the outer limits at
/// the endpoints are discarded. Removable breakpoints (continuous, equal
/// adjacent slopes) are merged away.
pub fn make_pwl(points: Vec<Breakpoint>) -> Result<PwlFunction, PwlError> {
    if points.len() < 2 || !points[0].x.is_zero() || !points[points.len() - 1].x.is_one() {
        return Err(PwlError::NonCanonicalDomain);
    }
    for w in points.windows(2) {
        if w[0].x >= w[1].x {
            return Err(PwlError::DuplicateBreakpoint(format_rational(&w[1].x)));
        }
    }
    let last = points.len() - 1;
    let filled: Vec<Breakpoint> = points
        .into_iter()
        .enumerate()
        .map(|(i, p)| Breakpoint {
            limit_left: if i == 0 {
                None
            } else {
                p.limit_left.or_else(|| Some(p.value.clone()))
            },
            limit_right: if i == last {
                None
            } else {
                p.limit_right.or_else(|| Some(p.value.clone()))
            },
            x: p.x,
            value: p.value,
        })
        .collect();

    // Merge removable breakpoints with a stack pass.
    let mut kept: Vec<Breakpoint> = Vec::with_capacity(filled.len());
    for p in filled {
        kept.push(p);
        while kept.len() >= 3 {
            let mid = &kept[kept.len() - 2];
            if !mid.is_continuous() {
                break;
            }
            let below = &kept[kept.len() - 3];
            let above = &kept[kept.len() - 1];
            if segment_slope(below, mid) == segment_slope(mid, above) {
                kept.remove(kept.len() - 2);
            } else {
                break;
            }
        }
    }
    Ok(PwlFunction { breakpoints: kept })
}

impl PwlFunction {
    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn breakpoint_xs(&self) -> Vec<Rational> {
        self.breakpoints.iter().map(|b| b.x.clone()).collect()
    }

    /// Index of the breakpoint at `x`, if `x` is a breakpoint.
    fn find(&self, x: &Rational) -> Result<usize, usize> {
        self.breakpoints.binary_search_by(|b| b.x.cmp(x))
    }

    fn check_domain(&self, x: &Rational) -> Result<(), PwlError> {
        if *x < Rational::zero() || *x > Rational::one() {
            return Err(PwlError::OutOfDomain(format_rational(x)));
        }
        Ok(())
    }

    /// Exact value; at a breakpoint this is the stored value.
    pub fn evaluate(&self, x: &Rational) -> Result<Rational, PwlError> {
        self.check_domain(x)?;
        match self.find(x) {
            Ok(i) => Ok(self.breakpoints[i].value.clone()),
            Err(i) => {
                let lo = &self.breakpoints[i - 1];
                let hi = &self.breakpoints[i];
                let a = lo.limit_right.as_ref().unwrap();
                let b = hi.limit_left.as_ref().unwrap();
                Ok(a + (b - a) * (x - &lo.x) / (&hi.x - &lo.x))
            }
        }
    }

    /// One-sided limit or point value.
    pub fn limit(&self, x: &Rational, side: Side) -> Result<Rational, PwlError> {
        self.check_domain(x)?;
        match side {
            Side::At => self.evaluate(x),
            Side::Left => {
                if x.is_zero() {
                    return Err(PwlError::SideUnavailable);
                }
                match self.find(x) {
                    Ok(i) => Ok(self.breakpoints[i].limit_left.clone().unwrap()),
                    Err(_) => self.evaluate(x),
                }
            }
            Side::Right => {
                if x.is_one() {
                    return Err(PwlError::SideUnavailable);
                }
                match self.find(x) {
                    Ok(i) => Ok(self.breakpoints[i].limit_right.clone().unwrap()),
                    Err(_) => self.evaluate(x),
                }
            }
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.breakpoints.iter().all(Breakpoint::is_continuous)
    }

    /// Slopes of the open intervals between adjacent breakpoints, in order.
    pub fn slopes(&self) -> Vec<Rational> {
        self.breakpoints
            .windows(2)
            .map(|w| segment_slope(&w[0], &w[1]))
            .collect()
    }

    /// Number of distinct slope values.
    pub fn distinct_slope_count(&self) -> usize {
        let mut s = self.slopes();
        s.sort();
        s.dedup();
        s.len()
    }

    /// Interior points where the function value disagrees with a one-sided
    /// limit, as (x, jump on the left side, jump on the right side).
    pub fn jumps(&self) -> Vec<(Rational, Option<Rational>, Option<Rational>)> {
        let mut out = Vec::new();
        for b in &self.breakpoints {
            let left = b
                .limit_left
                .as_ref()
                .filter(|l| **l != b.value)
                .map(|l| &b.value - l);
            let right = b
                .limit_right
                .as_ref()
                .filter(|r| **r != b.value)
                .map(|r| r - &b.value);
            if left.is_some() || right.is_some() {
                out.push((b.x.clone(), left, right));
            }
        }
        out
    }

    /// Restriction to the grid B_q = {0, 1/q, ..., 1}.
    pub fn grid_values(&self, q: u32) -> Result<Vec<Rational>, PwlError> {
        (0..=q)
            .map(|i| self.evaluate(&rat(i as i64, q as i64)))
            .collect()
    }
}

/// Interpolates discrete data on B_q into a canonical function. `limits`,
/// when present, carries the left/right limits on the refined grid that
/// inserts x- and x+ around each interior grid point; entries set to `None`
/// default to the value. The right limit at 0 and left limit at 1 always
/// equal the endpoint values.
pub fn interpolate_discrete(
    q: u32,
    values: &[Rational],
    limits: Option<&[(Option<Rational>, Option<Rational>)]>,
) -> Result<PwlFunction, PwlError> {
    let n = q as usize + 1;
    if values.len() != n {
        return Err(PwlError::MissingGridPoint {
            expected: n,
            got: values.len(),
        });
    }
    if let Some(l) = limits {
        if l.len() != n {
            return Err(PwlError::MissingGridPoint {
                expected: n,
                got: l.len(),
            });
        }
    }
    let points = (0..n)
        .map(|i| {
            let (ll, rr) = match limits {
                Some(l) => l[i].clone(),
                None => (None, None),
            };
            Breakpoint {
                x: rat(i as i64, q as i64),
                limit_left: ll,
                value: values[i].clone(),
                limit_right: rr,
            }
        })
        .collect();
    make_pwl(points)
}

/// Pointwise `c1*f + c2*g`, limits included.
pub fn linear_combination(
    f: &PwlFunction,
    g: &PwlFunction,
    c1: &Rational,
    c2: &Rational,
) -> PwlFunction {
    let mut xs: Vec<Rational> = f
        .breakpoint_xs()
        .into_iter()
        .chain(g.breakpoint_xs())
        .collect();
    xs.sort();
    xs.dedup();
    let last = xs.len() - 1;
    let points = xs
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let combine = |side: Side| -> Option<Rational> {
                let a = f.limit(&x, side).ok()?;
                let b = g.limit(&x, side).ok()?;
                Some(c1 * a + c2 * b)
            };
            Breakpoint {
                limit_left: if i == 0 { None } else { combine(Side::Left) },
                value: combine(Side::At).unwrap(),
                limit_right: if i == last { None } else { combine(Side::Right) },
                x,
            }
        })
        .collect();
    make_pwl(points).expect("combination of valid functions is valid")
}

/// Pointwise convex combination `alpha*f1 + (1-alpha)*f2`.
pub fn convex_combination(
    f1: &PwlFunction,
    f2: &PwlFunction,
    alpha: &Rational,
) -> Result<PwlFunction, PwlError> {
    if *alpha < Rational::zero() || *alpha > Rational::one() {
        return Err(PwlError::AlphaOutOfRange);
    }
    Ok(linear_combination(
        f1,
        f2,
        alpha,
        &(Rational::one() - alpha),
    ))
}

/// Composition `outer(inner(x))`. The inner function must be continuous and
/// stay within `[0,1]`; the composition is then piecewise linear again, with
/// jumps wherever `inner` crosses a jump of `outer` transversally.
pub fn compose(outer: &PwlFunction, inner: &PwlFunction) -> Result<PwlFunction, PwlError> {
    if !inner.is_continuous() {
        return Err(PwlError::InnerDiscontinuous);
    }
    let mut xs: Vec<Rational> = inner.breakpoint_xs();
    let bps = inner.breakpoints();
    for w in bps.windows(2) {
        let (x0, x1) = (&w[0].x, &w[1].x);
        let (v0, v1) = (&w[0].value, &w[1].value);
        if v0 == v1 {
            continue;
        }
        for t in outer.breakpoints() {
            // Solve inner(x) = t.x on this segment.
            let lo = v0.min(v1);
            let hi = v0.max(v1);
            if &t.x < lo || &t.x > hi {
                continue;
            }
            let x = x0 + (&t.x - v0) * (x1 - x0) / (v1 - v0);
            xs.push(x);
        }
    }
    xs.sort();
    xs.dedup();

    // Left/right slope signs of inner at each point decide which outer limit
    // the composition approaches.
    let last = xs.len() - 1;
    let mut points = Vec::with_capacity(xs.len());
    for (i, x) in xs.iter().enumerate() {
        let y = inner.evaluate(x)?;
        outer.check_domain(&y)?;
        let value = outer.evaluate(&y)?;
        let one_side = |towards: &Rational| -> Result<Option<Rational>, PwlError> {
            // Limit of outer(inner(t)) as t -> x from the side containing `towards`.
            let y_near = inner.evaluate(&((x + towards) / rat(2, 1)))?;
            let side = match y_near.cmp(&y) {
                std::cmp::Ordering::Less => Side::Left,
                std::cmp::Ordering::Equal => Side::At,
                std::cmp::Ordering::Greater => Side::Right,
            };
            Ok(Some(outer.limit(&y, side)?))
        };
        points.push(Breakpoint {
            limit_left: if i == 0 { None } else { one_side(&xs[i - 1])? },
            value,
            limit_right: if i == last { None } else { one_side(&xs[i + 1])? },
            x: x.clone(),
        });
    }
    make_pwl(points)
}

/// Exact Riemann integral over `[a,b]`; values at isolated jump points do not
/// contribute.
pub fn integrate(f: &PwlFunction, a: &Rational, b: &Rational) -> Result<Rational, PwlError> {
    if *a < Rational::zero() || a >= b || *b > Rational::one() {
        return Err(PwlError::BadInterval);
    }
    let mut total = Rational::zero();
    for w in f.breakpoints().windows(2) {
        let lo = w[0].x.clone().max(a.clone());
        let hi = w[1].x.clone().min(b.clone());
        if lo >= hi {
            continue;
        }
        let v0 = w[0].limit_right.as_ref().unwrap();
        let v1 = w[1].limit_left.as_ref().unwrap();
        let run = &w[1].x - &w[0].x;
        let at = |x: &Rational| v0 + (v1 - v0) * (x - &w[0].x) / &run;
        total += (at(&lo) + at(&hi)) * (&hi - &lo) / rat(2, 1);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// dff-pwl-v1 file format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BreakpointDto {
    x: String,
    limit_left: Option<String>,
    value: String,
    limit_right: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct PwlDto {
    format: String,
    breakpoints: Vec<BreakpointDto>,
}

pub const PWL_FORMAT: &str = "dff-pwl-v1";

pub fn to_json(f: &PwlFunction) -> String {
    let dto = PwlDto {
        format: PWL_FORMAT.to_owned(),
        breakpoints: f
            .breakpoints()
            .iter()
            .map(|b| BreakpointDto {
                x: format_rational(&b.x),
                limit_left: b.limit_left.as_ref().map(format_rational),
                value: format_rational(&b.value),
                limit_right: b.limit_right.as_ref().map(format_rational),
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<PwlFunction, PwlError> {
    let dto: PwlDto = serde_json::from_str(s).map_err(|e| PwlError::Format(e.to_string()))?;
    if dto.format != PWL_FORMAT {
        return Err(PwlError::Format(format!(
            "expected format {PWL_FORMAT}, got {}",
            dto.format
        )));
    }
    let parse = |s: &String| parse_rational(s).map_err(|e| PwlError::Format(e.to_string()));
    let points = dto
        .breakpoints
        .iter()
        .map(|b| {
            Ok(Breakpoint {
                x: parse(&b.x)?,
                limit_left: b.limit_left.as_ref().map(parse).transpose()?,
                value: parse(&b.value)?,
                limit_right: b.limit_right.as_ref().map(parse).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, PwlError>>()?;
    make_pwl(points)
}

/// The identity function x -> x.
pub fn identity() -> PwlFunction {
    make_pwl(vec![
        Breakpoint::continuous(rat(0, 1), rat(0, 1)),
        Breakpoint::continuous(rat(1, 1), rat(1, 1)),
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cont(points: &[(Rational, Rational)]) -> PwlFunction {
        make_pwl(
            points
                .iter()
                .map(|(x, v)| Breakpoint::continuous(x.clone(), v.clone()))
                .collect(),
        )
        .unwrap()
    }

    /// 0 on [0,1/3], 3x-1 on [1/3,2/3], 1 on [2/3,1].
    fn bj_three_halves() -> PwlFunction {
        cont(&[
            (rat(0, 1), rat(0, 1)),
            (rat(1, 3), rat(0, 1)),
            (rat(2, 3), rat(1, 1)),
            (rat(1, 1), rat(1, 1)),
        ])
    }

    #[test]
    fn identity_has_two_breakpoints() {
        let f = identity();
        assert_eq!(f.breakpoints().len(), 2);
        assert_eq!(f.evaluate(&rat(3, 7)).unwrap(), rat(3, 7));
    }

    #[test]
    fn collinear_interior_point_is_merged() {
        let f = cont(&[
            (rat(0, 1), rat(0, 1)),
            (rat(1, 2), rat(1, 2)),
            (rat(1, 1), rat(1, 1)),
        ]);
        assert_eq!(f, identity());
    }

    #[test]
    fn step_profile_keeps_breakpoints_and_slopes() {
        let f = cont(&[
            (rat(0, 1), rat(0, 1)),
            (rat(1, 3), rat(0, 1)),
            (rat(2, 3), rat(1, 1)),
            (rat(1, 1), rat(1, 1)),
        ]);
        assert_eq!(f.breakpoints().len(), 4);
        assert_eq!(f.slopes(), vec![int(0), int(3), int(0)]);
    }

    #[test]
    fn make_pwl_rejects_bad_domains() {
        let only_half = vec![
            Breakpoint::continuous(rat(0, 1), rat(0, 1)),
            Breakpoint::continuous(rat(1, 2), rat(1, 1)),
        ];
        assert_eq!(make_pwl(only_half).unwrap_err(), PwlError::NonCanonicalDomain);
        let dup = vec![
            Breakpoint::continuous(rat(0, 1), rat(0, 1)),
            Breakpoint::continuous(rat(1, 2), rat(0, 1)),
            Breakpoint::continuous(rat(1, 2), rat(1, 1)),
            Breakpoint::continuous(rat(1, 1), rat(1, 1)),
        ];
        assert!(matches!(
            make_pwl(dup).unwrap_err(),
            PwlError::DuplicateBreakpoint(_)
        ));
    }

    #[test]
    fn evaluate_at_jump_returns_stored_value() {
        // 0 on [0,1) with value 1 at x=1.
        let f = make_pwl(vec![
            Breakpoint::continuous(rat(0, 1), rat(0, 1)),
            Breakpoint {
                x: rat(1, 1),
                limit_left: Some(rat(0, 1)),
                value: rat(1, 1),
                limit_right: None,
            },
        ])
        .unwrap();
        assert_eq!(f.evaluate(&rat(1, 1)).unwrap(), int(1));
        assert_eq!(f.limit(&rat(1, 1), Side::Left).unwrap(), int(0));
        assert_eq!(f.limit(&rat(1, 2), Side::Left).unwrap(), int(0));
        assert!(matches!(
            f.limit(&rat(0, 1), Side::Left),
            Err(PwlError::SideUnavailable)
        ));
        assert!(matches!(
            f.evaluate(&rat(3, 2)),
            Err(PwlError::OutOfDomain(_))
        ));
    }

    #[test]
    fn limits_of_bj_three_halves() {
        let f = bj_three_halves();
        assert_eq!(f.limit(&rat(1, 3), Side::Right).unwrap(), int(0));
        assert_eq!(f.evaluate(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(f.limit(&rat(1, 2), Side::Left).unwrap(), rat(1, 2));
    }

    #[test]
    fn interpolate_discrete_examples() {
        let id = interpolate_discrete(2, &[rat(0, 1), rat(1, 2), rat(1, 1)], None).unwrap();
        assert_eq!(id, identity());

        let f3 = interpolate_discrete(3, &[int(0), int(0), int(1), int(1)], None).unwrap();
        assert_eq!(f3.slopes(), vec![int(0), int(3), int(0)]);

        let f5 = interpolate_discrete(
            5,
            &[int(0), int(0), rat(1, 2), rat(1, 2), int(1), int(1)],
            None,
        )
        .unwrap();
        assert_eq!(
            f5.slopes(),
            vec![int(0), rat(5, 2), int(0), rat(5, 2), int(0)]
        );
        assert_eq!(f5.distinct_slope_count(), 2);

        assert!(matches!(
            interpolate_discrete(3, &[int(0), int(1)], None),
            Err(PwlError::MissingGridPoint { .. })
        ));
    }

    #[test]
    fn grid_round_trip_is_identity_on_grid_functions() {
        let f5 = interpolate_discrete(
            5,
            &[int(0), int(0), rat(1, 2), rat(1, 2), int(1), int(1)],
            None,
        )
        .unwrap();
        let back = interpolate_discrete(5, &f5.grid_values(5).unwrap(), None).unwrap();
        assert_eq!(back, f5);
    }

    #[test]
    fn convex_combination_examples() {
        let id = identity();
        let f5 = interpolate_discrete(
            5,
            &[int(0), int(0), rat(1, 2), rat(1, 2), int(1), int(1)],
            None,
        )
        .unwrap();
        assert_eq!(convex_combination(&f5, &id, &int(1)).unwrap(), f5);
        assert_eq!(convex_combination(&id, &id, &rat(1, 2)).unwrap(), id);
        let mix = convex_combination(&id, &f5, &rat(1, 2)).unwrap();
        assert_eq!(
            mix.grid_values(5).unwrap(),
            vec![
                int(0),
                rat(1, 10),
                rat(9, 20),
                rat(11, 20),
                rat(9, 10),
                int(1)
            ]
        );
        assert!(matches!(
            convex_combination(&id, &f5, &rat(3, 2)),
            Err(PwlError::AlphaOutOfRange)
        ));
    }

    #[test]
    fn compose_examples() {
        let id = identity();
        let f = bj_three_halves();
        assert_eq!(compose(&id, &f).unwrap(), f);
        assert_eq!(compose(&f, &id).unwrap(), f);

        let ff = compose(&f, &f).unwrap();
        let expected = cont(&[
            (rat(0, 1), rat(0, 1)),
            (rat(4, 9), rat(0, 1)),
            (rat(5, 9), rat(1, 1)),
            (rat(1, 1), rat(1, 1)),
        ]);
        assert_eq!(ff, expected);

        let step = make_pwl(vec![
            Breakpoint::continuous(rat(0, 1), rat(0, 1)),
            Breakpoint {
                x: rat(1, 1),
                limit_left: Some(rat(0, 1)),
                value: rat(1, 1),
                limit_right: None,
            },
        ])
        .unwrap();
        assert!(matches!(
            compose(&id, &step),
            Err(PwlError::InnerDiscontinuous)
        ));
    }

    #[test]
    fn compose_through_a_jump_of_the_outer_function() {
        // outer jumps at 1/2; inner = identity crosses it increasingly.
        let outer = make_pwl(vec![
            Breakpoint::continuous(rat(0, 1), rat(0, 1)),
            Breakpoint {
                x: rat(1, 2),
                limit_left: Some(rat(0, 1)),
                value: rat(1, 2),
                limit_right: Some(rat(1, 1)),
            },
            Breakpoint::continuous(rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        let c = compose(&outer, &identity()).unwrap();
        assert_eq!(c, outer);
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(
            integrate(&identity(), &rat(0, 1), &rat(1, 1)).unwrap(),
            rat(1, 2)
        );
        let step = make_pwl(vec![
            Breakpoint::continuous(rat(0, 1), rat(0, 1)),
            Breakpoint {
                x: rat(1, 1),
                limit_left: Some(rat(0, 1)),
                value: rat(1, 1),
                limit_right: None,
            },
        ])
        .unwrap();
        assert_eq!(integrate(&step, &rat(0, 1), &rat(1, 1)).unwrap(), int(0));
        assert_eq!(
            integrate(&bj_three_halves(), &rat(0, 1), &rat(1, 1)).unwrap(),
            rat(1, 2)
        );
        assert!(matches!(
            integrate(&identity(), &rat(1, 2), &rat(1, 2)),
            Err(PwlError::BadInterval)
        ));
    }

    #[test]
    fn integrate_is_additive_over_adjacent_intervals() {
        let f = bj_three_halves();
        let whole = integrate(&f, &rat(0, 1), &rat(9, 10)).unwrap();
        let a = integrate(&f, &rat(0, 1), &rat(2, 5)).unwrap();
        let b = integrate(&f, &rat(2, 5), &rat(9, 10)).unwrap();
        assert_eq!(whole, a + b);
    }

    #[test]
    fn json_round_trip_and_rejects() {
        let f = bj_three_halves();
        let s = to_json(&f);
        assert_eq!(from_json(&s).unwrap(), f);
        assert_eq!(to_json(&from_json(&s).unwrap()), s);
        assert!(from_json("{}").is_err());
        let bad = s.replace("\"1/3\"", "\"1/0\"");
        assert!(from_json(&bad).is_err());
    }

    #[test]
    fn json_is_compact_with_fixed_key_order() {
        let s = to_json(&identity());
        assert_eq!(
            s,
            "{\"format\":\"dff-pwl-v1\",\"breakpoints\":[{\"x\":\"0\",\"limit_left\":null,\"value\":\"0\",\"limit_right\":\"0\"},{\"x\":\"1\",\"limit_left\":\"1\",\"value\":\"1\",\"limit_right\":null}]}"
        );
    }
}

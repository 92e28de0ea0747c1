//! Exact maximality tests: the full characterization for classical DFFs
//! (superadditive, symmetric, zero at zero) checked on the finite set of face
//! vertices with limit semantics, and the sufficient conditions for general
//! DFFs on the real line.

use crate::complex2d::{axis_from_pwl, cells_of_breaks, face_slack, scan_faces, Face};
use crate::gjlink::{
    gdff_axis_window, gdff_superadditive, Extension, GdffFunction, GjError,
};
use crate::pwl::{PwlFunction, Side};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Range,
    AtZero,
    Superadditivity,
    Symmetry,
    ContinuityAt0,
    ContinuityAt1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Point(Rational),
    /// A vertex of a face, with the face recorded for the limit direction.
    Vertex {
        x: Rational,
        y: Rational,
        face: Face,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    /// Exact defect: negative slack for superadditivity, the deviation from
    /// the required value otherwise.
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityVerdict {
    pub is_maximal: bool,
    pub violations: Vec<Violation>,
}

impl MaximalityVerdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        MaximalityVerdict {
            is_maximal: violations.is_empty(),
            violations,
        }
    }
}

/// The automatic maximality test. All checks run unconditionally so the
/// verdict lists every violation: range, value at zero, one-sided continuity
/// at the endpoints, superadditivity at all face vertices (with limits), and
/// symmetry at breakpoints (values and limit pairs).
pub fn maximality_test(f: &PwlFunction) -> MaximalityVerdict {
    let mut violations = Vec::new();
    let one = Rational::one();

    for bp in f.breakpoints() {
        for v in [Some(&bp.value), bp.limit_left.as_ref(), bp.limit_right.as_ref()]
            .into_iter()
            .flatten()
        {
            if v.is_negative() || *v > one {
                violations.push(Violation {
                    kind: ViolationKind::Range,
                    location: Location::Point(bp.x.clone()),
                    slack: if v.is_negative() {
                        v.clone()
                    } else {
                        v - &one
                    },
                });
                break;
            }
        }
    }

    let at_zero = f.evaluate(&Rational::zero()).unwrap();
    if !at_zero.is_zero() {
        violations.push(Violation {
            kind: ViolationKind::AtZero,
            location: Location::Point(Rational::zero()),
            slack: at_zero.clone(),
        });
    }
    let right_at_zero = f.limit(&Rational::zero(), Side::Right).unwrap();
    if right_at_zero != at_zero {
        violations.push(Violation {
            kind: ViolationKind::ContinuityAt0,
            location: Location::Point(Rational::zero()),
            slack: right_at_zero - &at_zero,
        });
    }
    let at_one = f.evaluate(&one).unwrap();
    let left_at_one = f.limit(&one, Side::Left).unwrap();
    if left_at_one != at_one {
        violations.push(Violation {
            kind: ViolationKind::ContinuityAt1,
            location: Location::Point(one.clone()),
            slack: left_at_one - &at_one,
        });
    }

    violations.extend(superadditivity_violations(f));

    // Symmetry at breakpoints and their mirror images, values and limits.
    let mut xs = f.breakpoint_xs();
    for x in f.breakpoint_xs() {
        xs.push(&one - &x);
    }
    xs.sort();
    xs.dedup();
    for x in &xs {
        let mirror = &one - x;
        let sum = f.evaluate(x).unwrap() + f.evaluate(&mirror).unwrap();
        if sum != one {
            violations.push(Violation {
                kind: ViolationKind::Symmetry,
                location: Location::Point(x.clone()),
                slack: sum - &one,
            });
        }
        if *x < one {
            let sum = f.limit(x, Side::Right).unwrap() + f.limit(&mirror, Side::Left).unwrap();
            if sum != one {
                violations.push(Violation {
                    kind: ViolationKind::Symmetry,
                    location: Location::Point(x.clone()),
                    slack: sum - &one,
                });
            }
        }
    }

    let verdict = MaximalityVerdict::from_violations(violations);
    // Superadditivity and nonnegativity force maximal functions nondecreasing.
    debug_assert!(!verdict.is_maximal || is_nondecreasing(f));
    verdict
}

fn superadditivity_violations(f: &PwlFunction) -> Vec<Violation> {
    let axis = axis_from_pwl(f);
    let cells = cells_of_breaks(&axis.breaks, false);
    let mut out = Vec::new();
    for geom in scan_faces(&cells, &cells, &cells) {
        for (x, y) in &geom.face.vertices {
            let slack = face_slack(&axis, &axis, &axis, &geom.face, x, y);
            if slack.is_negative() {
                out.push(Violation {
                    kind: ViolationKind::Superadditivity,
                    location: Location::Vertex {
                        x: x.clone(),
                        y: y.clone(),
                        face: geom.face.clone(),
                    },
                    slack,
                });
            }
        }
    }
    out
}

/// Vertex-based superadditivity test with a witness vertex on failure.
pub fn is_superadditive(f: &PwlFunction) -> (bool, Option<((Rational, Rational), Rational)>) {
    let violations = superadditivity_violations(f);
    match violations.into_iter().next() {
        None => (true, None),
        Some(v) => {
            let Location::Vertex { x, y, .. } = v.location else {
                unreachable!()
            };
            (false, Some(((x, y), v.slack)))
        }
    }
}

/// Monotonicity check used as a derived sanity condition on maximal verdicts.
pub fn is_nondecreasing(f: &PwlFunction) -> bool {
    f.slopes().iter().all(|s| !s.is_negative())
        && f.breakpoints().iter().all(|b| {
            b.limit_left.iter().all(|l| l <= &b.value)
                && b.limit_right.iter().all(|r| r >= &b.value)
        })
}

/// Sufficient conditions for a general DFF on the real line: superadditive,
/// symmetric about 1/2 in the sum sense, zero at zero, and nonnegative just
/// right of zero (decided from the first affine piece).
///
/// Quasiperiodic inputs must satisfy the strict shift rule so a bounded cell
/// certifies superadditivity; others are rejected as unsupported.
pub fn gdff_maximality_sufficient(psi: &GdffFunction) -> Result<MaximalityVerdict, GjError> {
    let mut violations = Vec::new();
    let one = Rational::one();

    if let Some(((x, y), slack)) = gdff_superadditive(psi)? {
        violations.push(Violation {
            kind: ViolationKind::Superadditivity,
            location: Location::Point(x + y),
            slack,
        });
    }

    let at_zero = psi.evaluate(&Rational::zero());
    if !at_zero.is_zero() {
        violations.push(Violation {
            kind: ViolationKind::AtZero,
            location: Location::Point(Rational::zero()),
            slack: at_zero,
        });
    }

    // Symmetry psi(x) + psi(1-x) = 1 at every kink of the symmetric sum.
    let kinks: Vec<Rational> = match psi.extension() {
        Extension::AffineTails { .. } => {
            let (lo, hi) = psi.core_bounds();
            let mut xs: Vec<Rational> = psi
                .core_breakpoints()
                .iter()
                .map(|b| b.x.clone())
                .collect();
            for b in psi.core_breakpoints() {
                xs.push(&one - &b.x);
            }
            xs.push(&one - lo);
            xs.push(&one - hi);
            xs.sort();
            xs.dedup();
            xs
        }
        Extension::Quasiperiodic { period, .. } => {
            if !psi.strictly_quasiperiodic() {
                return Err(GjError::UnsupportedRepresentation);
            }
            // The symmetric sum is periodic; one period of kinks suffices.
            let (lo, _) = psi.core_bounds();
            let reduce = |x: &Rational| x - (&(x - lo) / period).floor() * period;
            let mut xs: Vec<Rational> = Vec::new();
            for b in psi.core_breakpoints() {
                xs.push(reduce(&b.x));
                xs.push(reduce(&(&one - &b.x)));
            }
            xs.sort();
            xs.dedup();
            xs
        }
    };
    for x in &kinks {
        let mirror = &one - x;
        let sum = psi.evaluate(x) + psi.evaluate(&mirror);
        if sum != one {
            violations.push(Violation {
                kind: ViolationKind::Symmetry,
                location: Location::Point(x.clone()),
                slack: sum - &one,
            });
        }
        let lim_sum = psi.limit(x, Side::Right) + psi.limit(&mirror, Side::Left);
        if lim_sum != one {
            violations.push(Violation {
                kind: ViolationKind::Symmetry,
                location: Location::Point(x.clone()),
                slack: lim_sum - &one,
            });
        }
    }
    if let Extension::AffineTails {
        left_slope,
        right_slope,
        ..
    } = psi.extension()
    {
        // Beyond the last kink the symmetric sum is affine; constancy needs
        // equal tail slopes (the value there is already checked at kinks).
        if left_slope != right_slope {
            violations.push(Violation {
                kind: ViolationKind::Symmetry,
                location: Location::Point(one.clone()),
                slack: right_slope - left_slope,
            });
        }
    }

    // Nonnegativity on (0, epsilon) from the first piece right of zero.
    let right_at_zero = psi.limit(&Rational::zero(), Side::Right);
    let holds = if right_at_zero.is_positive() {
        true
    } else if right_at_zero.is_zero() {
        !slope_right_of_zero(psi).is_negative()
    } else {
        false
    };
    if !holds {
        violations.push(Violation {
            kind: ViolationKind::Range,
            location: Location::Point(Rational::zero()),
            slack: right_at_zero,
        });
    }

    Ok(MaximalityVerdict::from_violations(violations))
}

fn slope_right_of_zero(psi: &GdffFunction) -> Rational {
    // Window just right of zero bounded by the nearest kink.
    let (lo, hi) = psi.core_bounds();
    let mut next = if *hi > Rational::zero() {
        hi.clone()
    } else {
        Rational::one()
    };
    let candidates: Vec<Rational> = match psi.extension() {
        Extension::AffineTails { .. } => {
            psi.core_breakpoints().iter().map(|b| b.x.clone()).collect()
        }
        Extension::Quasiperiodic { period, .. } => {
            let shift = (&(Rational::zero() - lo) / period).floor() * period;
            psi.core_breakpoints()
                .iter()
                .flat_map(|b| [&b.x + &shift, &b.x + &shift + period])
                .collect()
        }
    };
    for c in candidates {
        if c.is_positive() && c < next {
            next = c;
        }
    }
    (psi.limit(&next, Side::Left) - psi.limit(&Rational::zero(), Side::Right)) / next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compendium::phi_bj_1;
    use crate::gjlink::{
        extend_to_gdff, gj_to_gdff, identity_gdff, restrict_to_unit, sawtooth,
    };
    use crate::pwl::{convex_combination, identity, interpolate_discrete, make_pwl, Breakpoint};
    use crate::rational::{int, rat};

    #[test]
    fn identity_is_maximal() {
        let verdict = maximality_test(&identity());
        assert!(verdict.is_maximal);
        assert!(verdict.violations.is_empty());
    }

    #[test]
    fn phi_bj_examples_are_maximal() {
        assert!(maximality_test(&phi_bj_1(&rat(5, 2)).unwrap()).is_maximal);
        assert!(maximality_test(&phi_bj_1(&rat(3, 2)).unwrap()).is_maximal);
    }

    #[test]
    fn dominated_step_function_fails_symmetry_everywhere() {
        let step = make_pwl(vec![
            Breakpoint::continuous(int(0), int(0)),
            Breakpoint {
                x: int(1),
                limit_left: Some(int(0)),
                value: int(1),
                limit_right: None,
            },
        ])
        .unwrap();
        let verdict = maximality_test(&step);
        assert!(!verdict.is_maximal);
        assert!(verdict
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::Symmetry || v.kind == ViolationKind::ContinuityAt1));
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Symmetry));
        // The jump onto the endpoint also breaks left-continuity at 1.
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::ContinuityAt1));
    }

    #[test]
    fn shifted_identity_fails_symmetry_and_superadditivity() {
        // x on [0,1/2), x - 1/10 on [1/2,1), value 1 at x = 1.
        let f = make_pwl(vec![
            Breakpoint::continuous(int(0), int(0)),
            Breakpoint {
                x: rat(1, 2),
                limit_left: Some(rat(1, 2)),
                value: rat(2, 5),
                limit_right: Some(rat(2, 5)),
            },
            Breakpoint {
                x: int(1),
                limit_left: Some(rat(9, 10)),
                value: int(1),
                limit_right: None,
            },
        ])
        .unwrap();
        let verdict = maximality_test(&f);
        assert!(!verdict.is_maximal);
        let kinds: Vec<ViolationKind> = verdict.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::Symmetry));
        assert!(kinds.contains(&ViolationKind::ContinuityAt1));
        // The downward jump at 1/2 also breaks superadditivity, e.g. near
        // (1/4, 1/4): the limit slack is -1/10.
        assert!(kinds.contains(&ViolationKind::Superadditivity));
    }

    #[test]
    fn superadditivity_witness_for_capped_double() {
        // min(2x, 1) is not superadditive: slack -1 at (1/2, 1/2).
        let f = make_pwl(vec![
            Breakpoint::continuous(int(0), int(0)),
            Breakpoint::continuous(rat(1, 2), int(1)),
            Breakpoint::continuous(int(1), int(1)),
        ])
        .unwrap();
        let (ok, witness) = is_superadditive(&f);
        assert!(!ok);
        let ((x, y), slack) = witness.unwrap();
        assert_eq!((&x + &y).min(int(1)), int(1));
        assert!(slack.is_negative());
        assert!(is_superadditive(&identity()).0);
    }

    #[test]
    fn convex_combinations_of_maximal_functions_stay_maximal() {
        let pool = [
            identity(),
            phi_bj_1(&rat(5, 2)).unwrap(),
            phi_bj_1(&rat(3, 2)).unwrap(),
            interpolate_discrete(
                5,
                &[int(0), int(0), rat(1, 2), rat(1, 2), int(1), int(1)],
                None,
            )
            .unwrap(),
        ];
        for f in &pool {
            for g in &pool {
                let mix = convex_combination(f, g, &rat(1, 3)).unwrap();
                assert!(maximality_test(&mix).is_maximal);
            }
        }
    }

    #[test]
    fn compositions_of_maximal_functions_stay_maximal() {
        let pool = [
            identity(),
            phi_bj_1(&rat(5, 2)).unwrap(),
            phi_bj_1(&rat(3, 2)).unwrap(),
        ];
        for f in &pool {
            for g in &pool {
                let c = crate::pwl::compose(f, g).unwrap();
                assert!(maximality_test(&c).is_maximal, "{f:?} o {g:?}");
            }
        }
    }

    #[test]
    fn gdff_identity_passes_sufficient_conditions() {
        let verdict = gdff_maximality_sufficient(&identity_gdff()).unwrap();
        assert!(verdict.is_maximal, "{:?}", verdict.violations);
    }

    #[test]
    fn gdff_conversion_output_passes_sufficient_conditions() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        let psi = gj_to_gdff(&pi, &rat(1, 2)).unwrap();
        let verdict = gdff_maximality_sufficient(&psi).unwrap();
        assert!(verdict.is_maximal, "{:?}", verdict.violations);
        // Spot values from the closed form: flat then rising with period 2/7.
        assert_eq!(psi.evaluate(&rat(1, 7)), int(0));
        assert_eq!(psi.evaluate(&rat(2, 7)), rat(1, 3));
        assert_eq!(psi.evaluate(&int(1)), int(1));
        assert_eq!(psi.evaluate(&rat(-1, 7)), rat(-1, 3));
    }

    #[test]
    fn affine_extension_of_identity_passes() {
        let psi = extend_to_gdff(&identity(), &int(1), false).unwrap();
        let verdict = gdff_maximality_sufficient(&psi).unwrap();
        assert!(verdict.is_maximal, "{:?}", verdict.violations);
    }

    #[test]
    fn affine_extension_needs_large_enough_slope() {
        let bj = phi_bj_1(&rat(3, 2)).unwrap();
        let good = extend_to_gdff(&bj, &int(3), false).unwrap();
        assert!(gdff_maximality_sufficient(&good).unwrap().is_maximal);

        let bad = extend_to_gdff(&bj, &int(1), false).unwrap();
        let verdict = gdff_maximality_sufficient(&bad).unwrap();
        assert!(!verdict.is_maximal);
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Superadditivity));
    }

    #[test]
    fn thm1_restriction_is_maximal() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        let psi = gj_to_gdff(&pi, &rat(1, 2)).unwrap();
        let phi = restrict_to_unit(&psi).unwrap();
        assert!(maximality_test(&phi).is_maximal);
        assert_eq!(
            phi.grid_values(7).unwrap(),
            vec![
                int(0),
                int(0),
                rat(1, 3),
                rat(1, 3),
                rat(2, 3),
                rat(2, 3),
                int(1),
                int(1)
            ]
        );
        assert_eq!(phi.distinct_slope_count(), 2);
    }
}

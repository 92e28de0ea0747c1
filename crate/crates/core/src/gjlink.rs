//! Minimal Gomory-Johnson functions, the conversion producing maximal general
//! DFFs from them, extensions of classical DFFs to the real line, the reverse
//! conversion toward cut-generating functions, and the two application
//! formulas (cut coefficients and the packing-ratio lower bound).

use crate::complex2d::{
    axis_from_pwl, cells_of_breaks, face_slack, face_slack_ray, scan_faces, AxisEval,
};
use crate::pwl::{
    identity, integrate, make_pwl, Breakpoint, PwlError, PwlFunction, Side, PWL_FORMAT,
};
use crate::rational::{format_rational, frac, parse_rational, rat, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GjError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("lambda outside its admissible range")]
    LambdaOutOfRange,
    #[error("function is not a minimal Gomory-Johnson function")]
    NotMinimal,
    #[error("operation not supported for this representation")]
    UnsupportedRepresentation,
    #[error("integration interval must satisfy 0 < a < b < 1")]
    BadInterval,
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error("malformed function file: {0}")]
    Format(String),
}

/// A piecewise-linear Z-periodic function given by one period on [0,1],
/// together with the right-hand side b of the underlying row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GjFunction {
    period: PwlFunction,
    b: Rational,
}

impl GjFunction {
    pub fn new(period: PwlFunction, b: Rational) -> Result<Self, GjError> {
        if !b.is_positive() || b.is_integer() {
            return Err(GjError::BadParameter(format!(
                "b must be positive and non-integer, got {}",
                format_rational(&b)
            )));
        }
        let v0 = period.evaluate(&Rational::zero()).unwrap();
        let v1 = period.evaluate(&Rational::one()).unwrap();
        if v0 != v1 {
            return Err(GjError::BadParameter(
                "periodic data must take the same value at 0 and 1".into(),
            ));
        }
        Ok(GjFunction { period, b })
    }

    pub fn period(&self) -> &PwlFunction {
        &self.period
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.period.evaluate(&frac(x)).unwrap()
    }

    pub fn limit(&self, x: &Rational, side: Side) -> Rational {
        let u = frac(x);
        match side {
            Side::At => self.evaluate(x),
            Side::Right => self.period.limit(&u, Side::Right).unwrap(),
            Side::Left => {
                if u.is_zero() {
                    self.period.limit(&Rational::one(), Side::Left).unwrap()
                } else {
                    self.period.limit(&u, Side::Left).unwrap()
                }
            }
        }
    }

    /// Largest slope over one period.
    pub fn max_slope(&self) -> Rational {
        self.period
            .slopes()
            .into_iter()
            .max()
            .expect("period has at least one piece")
    }
}

/// How a bounded core extends to the real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// Affine pieces outside the core; anchors are the one-sided limits at
    /// the core boundary, so a jump onto the tail is representable.
    AffineTails {
        left_slope: Rational,
        left_anchor: Rational,
        right_slope: Rational,
        right_anchor: Rational,
    },
    /// psi(x + period) = psi(x) + increment, with the core covering exactly
    /// one period. Values at period boundaries come from the core; periods
    /// above the core are taken right-closed and below left-closed, so cores
    /// whose endpoint values differ by something other than the increment
    /// (as in the classical-to-general extension) remain representable.
    Quasiperiodic {
        period: Rational,
        increment: Rational,
    },
}

/// A function on the real line: a piecewise-linear core on a bounded interval
/// plus an extension rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdffFunction {
    core_lo: Rational,
    core_hi: Rational,
    /// Core reparameterized onto [0,1]: core01(t) = psi(lo + t*(hi-lo)).
    core01: PwlFunction,
    extension: Extension,
}

impl GdffFunction {
    pub fn new(
        core_lo: Rational,
        core_hi: Rational,
        core01: PwlFunction,
        extension: Extension,
    ) -> Result<Self, GjError> {
        if core_lo >= core_hi {
            return Err(GjError::BadParameter("empty core interval".into()));
        }
        if let Extension::Quasiperiodic { period, .. } = &extension {
            if *period != &core_hi - &core_lo {
                return Err(GjError::BadParameter(
                    "core must cover exactly one period".into(),
                ));
            }
        }
        Ok(GdffFunction {
            core_lo,
            core_hi,
            core01,
            extension,
        })
    }

    pub fn core_bounds(&self) -> (&Rational, &Rational) {
        (&self.core_lo, &self.core_hi)
    }

    pub fn core01(&self) -> &PwlFunction {
        &self.core01
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    fn width(&self) -> Rational {
        &self.core_hi - &self.core_lo
    }

    fn to_t(&self, x: &Rational) -> Rational {
        (x - &self.core_lo) / self.width()
    }

    /// Core breakpoints mapped back to true coordinates.
    pub fn core_breakpoints(&self) -> Vec<Breakpoint> {
        self.core01
            .breakpoints()
            .iter()
            .map(|b| Breakpoint {
                x: &self.core_lo + &b.x * self.width(),
                limit_left: b.limit_left.clone(),
                value: b.value.clone(),
                limit_right: b.limit_right.clone(),
            })
            .collect()
    }

    fn core_eval(&self, x: &Rational) -> Rational {
        self.core01.evaluate(&self.to_t(x)).unwrap()
    }

    fn core_limit(&self, x: &Rational, side: Side) -> Rational {
        self.core01.limit(&self.to_t(x), side).unwrap()
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        if *x >= self.core_lo && *x <= self.core_hi {
            return self.core_eval(x);
        }
        match &self.extension {
            Extension::AffineTails {
                left_slope,
                left_anchor,
                right_slope,
                right_anchor,
            } => {
                if *x < self.core_lo {
                    left_anchor + left_slope * (x - &self.core_lo)
                } else {
                    right_anchor + right_slope * (x - &self.core_hi)
                }
            }
            Extension::Quasiperiodic { period, increment } => {
                if *x > self.core_hi {
                    // shift down into (lo, hi]
                    let k = ((x - &self.core_hi) / period).ceil();
                    self.core_eval(&(x - &k * period)) + &k * increment
                } else {
                    // shift up into [lo, hi)
                    let k = ((x - &self.core_lo) / period).floor();
                    self.core_eval(&(x - &k * period)) + &k * increment
                }
            }
        }
    }

    pub fn limit(&self, x: &Rational, side: Side) -> Rational {
        match side {
            Side::At => self.evaluate(x),
            Side::Left => match &self.extension {
                Extension::AffineTails {
                    left_slope,
                    left_anchor,
                    right_slope,
                    right_anchor,
                } => {
                    if *x <= self.core_lo {
                        left_anchor + left_slope * (x - &self.core_lo)
                    } else if *x <= self.core_hi {
                        self.core_limit(x, Side::Left)
                    } else {
                        right_anchor + right_slope * (x - &self.core_hi)
                    }
                }
                Extension::Quasiperiodic { period, increment } => {
                    // The period containing points just below x.
                    let k = ((x - &self.core_hi) / period).ceil();
                    let t = x - &k * period;
                    self.core_limit(&t, Side::Left) + &k * increment
                }
            },
            Side::Right => match &self.extension {
                Extension::AffineTails {
                    left_slope,
                    left_anchor,
                    right_slope,
                    right_anchor,
                } => {
                    if *x < self.core_lo {
                        left_anchor + left_slope * (x - &self.core_lo)
                    } else if *x < self.core_hi {
                        self.core_limit(x, Side::Right)
                    } else {
                        right_anchor + right_slope * (x - &self.core_hi)
                    }
                }
                Extension::Quasiperiodic { period, increment } => {
                    let k = ((x - &self.core_lo) / period).floor();
                    let t = x - &k * period;
                    self.core_limit(&t, Side::Right) + &k * increment
                }
            },
        }
    }

    /// Distinct slope values: the core's (one period represents all) plus,
    /// for affine tails, the tail slopes.
    pub fn distinct_slopes(&self) -> Vec<Rational> {
        let w = self.width();
        let mut s: Vec<Rational> = self.core01.slopes().iter().map(|v| v / &w).collect();
        if let Extension::AffineTails {
            left_slope,
            right_slope,
            ..
        } = &self.extension
        {
            s.push(left_slope.clone());
            s.push(right_slope.clone());
        }
        s.sort();
        s.dedup();
        s
    }

    /// Whether the strict rule psi(x + P) = psi(x) + increment holds at every
    /// point, i.e. the core endpoint values differ exactly by the increment.
    pub fn strictly_quasiperiodic(&self) -> bool {
        match &self.extension {
            Extension::Quasiperiodic { increment, .. } => {
                let v0 = self.core01.evaluate(&Rational::zero()).unwrap();
                let v1 = self.core01.evaluate(&Rational::one()).unwrap();
                v1 == v0 + increment.clone()
            }
            Extension::AffineTails { .. } => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in pi families
// ---------------------------------------------------------------------------

/// The symmetric two-slope sawtooth: rises to 1 at frac(b), falls back to 0.
pub fn sawtooth(b: &Rational) -> Result<GjFunction, GjError> {
    let f = frac(b);
    if f.is_zero() {
        return Err(GjError::BadParameter("b must not be an integer".into()));
    }
    let period = make_pwl(vec![
        Breakpoint::continuous(Rational::zero(), Rational::zero()),
        Breakpoint::continuous(f, Rational::one()),
        Breakpoint::continuous(Rational::one(), Rational::zero()),
    ])?;
    let pi = GjFunction::new(period, b.clone())?;
    ensure_minimal(pi)
}

fn staircase(b: &Rational, values: &[(i64, i64)]) -> Result<GjFunction, GjError> {
    if frac(b) != rat(1, 2) {
        return Err(GjError::BadParameter(
            "staircase families are built for frac(b) = 1/2".into(),
        ));
    }
    let xs = [
        rat(0, 1),
        rat(1, 8),
        rat(3, 8),
        rat(1, 2),
        rat(5, 8),
        rat(7, 8),
        rat(1, 1),
    ];
    let period = make_pwl(
        xs.iter()
            .zip(values)
            .map(|(x, &(n, d))| Breakpoint::continuous(x.clone(), rat(n, d)))
            .collect(),
    )?;
    let pi = GjFunction::new(period, b.clone())?;
    ensure_minimal(pi)
}

/// A three-slope minimal function for frac(b) = 1/2.
pub fn staircase_three_slope(b: &Rational) -> Result<GjFunction, GjError> {
    staircase(
        b,
        &[(0, 1), (3, 8), (5, 8), (1, 1), (3, 8), (5, 8), (0, 1)],
    )
}

/// A four-slope minimal function for frac(b) = 1/2.
pub fn staircase_four_slope(b: &Rational) -> Result<GjFunction, GjError> {
    staircase(
        b,
        &[(0, 1), (3, 8), (5, 8), (1, 1), (1, 4), (3, 4), (0, 1)],
    )
}

fn ensure_minimal(pi: GjFunction) -> Result<GjFunction, GjError> {
    if gj_minimality_test(&pi).is_minimal {
        Ok(pi)
    } else {
        Err(GjError::NotMinimal)
    }
}

// ---------------------------------------------------------------------------
// Minimality test
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GjVerdict {
    pub is_minimal: bool,
    pub violations: Vec<String>,
}

/// Axis of the periodic extension of `pi` over [0, span] (span in periods).
fn periodic_axis(pi: &GjFunction, span: u32) -> AxisEval<Rational> {
    let base = axis_from_pwl(pi.period());
    let n = base.breaks.len();
    let mut breaks = Vec::new();
    let mut value = Vec::new();
    let mut left_lim = Vec::new();
    let mut right_lim = Vec::new();
    for k in 0..span {
        let shift = Rational::from_integer((k as i64).into());
        // Skip the duplicate boundary point except at the very start.
        let start = if k == 0 { 0 } else { 1 };
        for i in start..n {
            breaks.push(&base.breaks[i] + &shift);
            value.push(base.value[i].clone());
            // Interior copies of the boundary get the periodic limits.
            left_lim.push(if i == 0 {
                None
            } else {
                base.left_lim[i].clone()
            });
            right_lim.push(if i == n - 1 {
                Some(base.right_lim[0].clone().unwrap())
            } else {
                base.right_lim[i].clone()
            });
        }
    }
    // Fix interior boundary points: left limit at k>0 copies of 0 comes from
    // the end of the previous period; the final right limit is absent.
    let total = breaks.len();
    let per = n - 1;
    for k in 1..span {
        let idx = k as usize * per;
        left_lim[idx] = Some(base.left_lim[n - 1].clone().unwrap());
    }
    right_lim[total - 1] = None;
    AxisEval {
        breaks,
        value,
        left_lim,
        right_lim,
        left_tail: None,
        right_tail: None,
    }
}

/// Checks the conditions characterizing minimal valid functions: range in
/// [0,1], pi(0)=0, subadditivity (vertex test over one periodic cell), and
/// the symmetry pi(x) + pi(b-x) = 1.
pub fn gj_minimality_test(pi: &GjFunction) -> GjVerdict {
    let mut violations = Vec::new();
    let period = pi.period();

    if !pi.evaluate(&Rational::zero()).is_zero() {
        violations.push("pi(0) != 0".to_owned());
    }
    for bp in period.breakpoints() {
        for v in [Some(&bp.value), bp.limit_left.as_ref(), bp.limit_right.as_ref()]
            .into_iter()
            .flatten()
        {
            if v.is_negative() || *v > Rational::one() {
                violations.push(format!("range violation at x = {}", format_rational(&bp.x)));
                break;
            }
        }
    }

    // Subadditivity on the cell [0,1]^2 with sums in [0,2]; shifting either
    // argument by 1 leaves the slack unchanged, so this covers the plane.
    let axis1 = periodic_axis(pi, 1);
    let axis2 = periodic_axis(pi, 2);
    let cells1 = cells_of_breaks(&axis1.breaks, false);
    let cells2 = cells_of_breaks(&axis2.breaks, false);
    for geom in scan_faces(&cells1, &cells1, &cells2) {
        for (x, y) in &geom.face.vertices {
            // Subadditive slack: pi(x) + pi(y) - pi(x+y) >= 0.
            let slack = -face_slack(&axis1, &axis1, &axis2, &geom.face, x, y);
            if slack.is_negative() {
                violations.push(format!(
                    "subadditivity fails by {} at ({}, {})",
                    format_rational(&-&slack),
                    format_rational(x),
                    format_rational(y)
                ));
            }
        }
    }

    // Symmetry pi(x) + pi(b - x) = 1 at breakpoints and limit pairs.
    let f = frac(pi.b());
    let mut xs: Vec<Rational> = period.breakpoint_xs();
    for bx in period.breakpoint_xs() {
        xs.push(frac(&(&f - &bx)));
    }
    xs.sort();
    xs.dedup();
    for x in &xs {
        let partner = frac(&(&f - x));
        let value_sum = pi.evaluate(x) + pi.evaluate(&partner);
        if value_sum != Rational::one() {
            violations.push(format!(
                "symmetry fails at x = {} (sum {})",
                format_rational(x),
                format_rational(&value_sum)
            ));
        }
        let lim_sum = pi.limit(x, Side::Right) + pi.limit(&(&f - x), Side::Left);
        if lim_sum != Rational::one() {
            violations.push(format!(
                "limit symmetry fails at x = {}+ (sum {})",
                format_rational(x),
                format_rational(&lim_sum)
            ));
        }
    }

    GjVerdict {
        is_minimal: violations.is_empty(),
        violations,
    }
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

/// Applies an affine map `v -> (c_x * x + c_v * v + c_1)` to a function's
/// breakpoint data, where x is the breakpoint position in true coordinates.
fn map_values(
    f: &PwlFunction,
    true_x_of_t: impl Fn(&Rational) -> Rational,
    map: impl Fn(&Rational, &Rational) -> Rational,
) -> PwlFunction {
    let points = f
        .breakpoints()
        .iter()
        .map(|b| {
            let x = true_x_of_t(&b.x);
            Breakpoint {
                x: b.x.clone(),
                limit_left: b.limit_left.as_ref().map(|v| map(&x, v)),
                value: map(&x, &b.value),
                limit_right: b.limit_right.as_ref().map(|v| map(&x, v)),
            }
        })
        .collect();
    make_pwl(points).expect("affine image of canonical data is canonical")
}

/// The conversion behind new maximal general DFFs: from a minimal pi and a
/// suitable lambda, produce the quasiperiodic function
/// `(b*x - lambda*pi(b*x)) / (b - lambda)` with period 1/b.
pub fn gj_to_gdff(pi: &GjFunction, lambda: &Rational) -> Result<GdffFunction, GjError> {
    if !gj_minimality_test(pi).is_minimal {
        return Err(GjError::NotMinimal);
    }
    if !pi.limit(&Rational::zero(), Side::Right).is_zero() {
        return Err(GjError::BadParameter(
            "pi must be continuous at 0 from the right".into(),
        ));
    }
    let b = pi.b().clone();
    let s_max = pi.max_slope();
    let delta = Rational::one() / &s_max;
    if !lambda.is_positive() || *lambda > delta || *lambda >= b {
        return Err(GjError::LambdaOutOfRange);
    }
    let period = Rational::one() / &b;
    let denom = &b - lambda;
    let increment = Rational::one() / &denom;
    // Core on [0, 1/b]; in core01 coordinates t = b*x, the formula reads
    // (t - lambda*pi(t)) / (b - lambda).
    let core01 = map_values(
        pi.period(),
        |t| t.clone(),
        |t, v| (t - lambda * v) / &denom,
    );
    GdffFunction::new(
        Rational::zero(),
        period.clone(),
        core01,
        Extension::Quasiperiodic { period, increment },
    )
}

/// Restriction of a function on the real line to [0,1], as a canonical
/// classical function.
pub fn restrict_to_unit(psi: &GdffFunction) -> Result<PwlFunction, GjError> {
    let mut xs: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    match psi.extension() {
        Extension::AffineTails { .. } => {
            for bp in psi.core_breakpoints() {
                if bp.x >= Rational::zero() && bp.x <= Rational::one() {
                    xs.push(bp.x);
                }
            }
        }
        Extension::Quasiperiodic { period, .. } => {
            let core_breaks: Vec<Rational> =
                psi.core_breakpoints().iter().map(|b| b.x.clone()).collect();
            let k_min = ((Rational::zero() - psi.core_bounds().1) / period).ceil();
            let k_max = ((Rational::one() - psi.core_bounds().0) / period).floor();
            let mut k = k_min;
            while k <= k_max {
                for c in &core_breaks {
                    let x = c + &k * period;
                    if x >= Rational::zero() && x <= Rational::one() {
                        xs.push(x);
                    }
                }
                k += Rational::one();
            }
        }
    }
    xs.sort();
    xs.dedup();
    let last = xs.len() - 1;
    let points = xs
        .iter()
        .enumerate()
        .map(|(i, x)| Breakpoint {
            x: x.clone(),
            limit_left: (i > 0).then(|| psi.limit(x, Side::Left)),
            value: psi.evaluate(x),
            limit_right: (i < last).then(|| psi.limit(x, Side::Right)),
        })
        .collect();
    Ok(make_pwl(points)?)
}

/// Extension of a maximal classical function to the real line, either with
/// affine tails of slope b (jumping to 1-b below 0 and to b above 1) or
/// quasiperiodically with period 1 and increment b.
pub fn extend_to_gdff(
    phi: &PwlFunction,
    b: &Rational,
    quasiperiodic: bool,
) -> Result<GdffFunction, GjError> {
    if *b < Rational::one() {
        return Err(GjError::BadParameter("b must be at least 1".into()));
    }
    let extension = if quasiperiodic {
        Extension::Quasiperiodic {
            period: Rational::one(),
            increment: b.clone(),
        }
    } else {
        Extension::AffineTails {
            left_slope: b.clone(),
            left_anchor: Rational::one() - b,
            right_slope: b.clone(),
            right_anchor: b.clone(),
        }
    };
    GdffFunction::new(Rational::zero(), Rational::one(), phi.clone(), extension)
}

/// The reverse direction: from a general DFF, the cut-generating function
/// `(x - (1-lambda) psi(x)) / lambda` for the single-point model.
pub fn dff_to_yc(psi: &GdffFunction, lambda: &Rational) -> Result<GdffFunction, GjError> {
    if !lambda.is_positive() || *lambda >= Rational::one() {
        return Err(GjError::LambdaOutOfRange);
    }
    let c = Rational::one() - lambda;
    let (lo, hi) = psi.core_bounds();
    let (lo, hi) = (lo.clone(), hi.clone());
    let width = &hi - &lo;
    let core01 = map_values(
        psi.core01(),
        |t| &lo + t * &width,
        |x, v| (x - &c * v) / lambda,
    );
    let extension = match psi.extension() {
        Extension::AffineTails {
            left_slope,
            left_anchor,
            right_slope,
            right_anchor,
        } => Extension::AffineTails {
            left_slope: (Rational::one() - &c * left_slope) / lambda,
            left_anchor: (&lo - &c * left_anchor) / lambda,
            right_slope: (Rational::one() - &c * right_slope) / lambda,
            right_anchor: (&hi - &c * right_anchor) / lambda,
        },
        Extension::Quasiperiodic { period, increment } => Extension::Quasiperiodic {
            period: period.clone(),
            increment: (period - &c * increment) / lambda,
        },
    };
    GdffFunction::new(lo, hi, core01, extension)
}

/// Coefficientwise application of psi to a row: a valid inequality for any
/// maximal general DFF.
pub fn generate_cut(
    psi: &GdffFunction,
    coeffs: &[Rational],
    rhs: &Rational,
) -> (Vec<Rational>, Rational) {
    (
        coeffs.iter().map(|a| psi.evaluate(a)).collect(),
        psi.evaluate(rhs),
    )
}

/// Lower bound `E[phi(X)] / E[X]` on the optimum packing ratio for item sizes
/// uniform on [a,b].
pub fn lueker_bound(
    phi: &PwlFunction,
    a: &Rational,
    b: &Rational,
) -> Result<Rational, GjError> {
    if !a.is_positive() || a >= b || *b >= Rational::one() {
        return Err(GjError::BadInterval);
    }
    let numer = integrate(phi, a, b)?;
    let denom = (b * b - a * a) / rat(2, 1);
    Ok(numer / denom)
}

/// The identity as a general DFF (affine tails of slope 1).
pub fn identity_gdff() -> GdffFunction {
    GdffFunction::new(
        Rational::zero(),
        Rational::one(),
        identity(),
        Extension::AffineTails {
            left_slope: Rational::one(),
            left_anchor: Rational::zero(),
            right_slope: Rational::one(),
            right_anchor: Rational::one(),
        },
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Superadditivity on the real line (used by the maximality module)
// ---------------------------------------------------------------------------

/// Exact check that `psi(x+y) - psi(x) - psi(y) >= 0` for all real x, y.
/// Returns a witness point on failure. Quasiperiodic representations require
/// the strict rule, which makes a single period cell sufficient.
pub(crate) fn gdff_superadditive(
    psi: &GdffFunction,
) -> Result<Option<((Rational, Rational), Rational)>, GjError> {
    let (lo, hi) = psi.core_bounds();
    match psi.extension() {
        Extension::Quasiperiodic { period, .. } => {
            if !psi.strictly_quasiperiodic() {
                return Err(GjError::UnsupportedRepresentation);
            }
            // Cell [lo, lo+P]^2 with sums in [2lo, 2lo+2P]; slack is invariant
            // under shifting either argument by the period.
            let axis1 = gdff_axis_window(psi, lo, hi);
            let axis2 = gdff_axis_window(psi, &(lo + lo - hi + period), &(hi + period));
            let cells1 = cells_of_breaks(&axis1.breaks, false);
            let cells2 = cells_of_breaks(&axis2.breaks, false);
            for geom in scan_faces(&cells1, &cells1, &cells2) {
                for (x, y) in &geom.face.vertices {
                    let slack = face_slack(&axis1, &axis1, &axis2, &geom.face, x, y);
                    if slack.is_negative() {
                        return Ok(Some(((x.clone(), y.clone()), slack)));
                    }
                }
            }
            Ok(None)
        }
        Extension::AffineTails { .. } => {
            let axis = gdff_axis_tails(psi);
            let cells = cells_of_breaks(&axis.breaks, true);
            for geom in scan_faces(&cells, &cells, &cells) {
                for (x, y) in &geom.face.vertices {
                    let slack = face_slack(&axis, &axis, &axis, &geom.face, x, y);
                    if slack.is_negative() {
                        return Ok(Some(((x.clone(), y.clone()), slack)));
                    }
                }
                if let Some(base) = &geom.base {
                    let slack = face_slack(&axis, &axis, &axis, &geom.face, &base.0, &base.1);
                    if slack.is_negative() {
                        return Ok(Some((base.clone(), slack)));
                    }
                }
                let probe = geom
                    .face
                    .vertices
                    .first()
                    .cloned()
                    .or_else(|| geom.base.clone());
                for ray in &geom.rays {
                    let deriv = face_slack_ray(&axis, &axis, &axis, &geom.face, *ray);
                    if deriv.is_negative() {
                        // Slack decreases along an unbounded direction.
                        let p = probe.clone().expect("face has a probe point");
                        return Ok(Some((p, deriv)));
                    }
                }
            }
            Ok(None)
        }
    }
}

/// Axis of psi sampled over the window [a, b] (no tails).
pub(crate) fn gdff_axis_window(
    psi: &GdffFunction,
    a: &Rational,
    b: &Rational,
) -> AxisEval<Rational> {
    let mut xs = vec![a.clone(), b.clone()];
    match psi.extension() {
        Extension::AffineTails { .. } => {
            for bp in psi.core_breakpoints() {
                if bp.x > *a && bp.x < *b {
                    xs.push(bp.x);
                }
            }
        }
        Extension::Quasiperiodic { period, .. } => {
            let core_breaks: Vec<Rational> =
                psi.core_breakpoints().iter().map(|p| p.x.clone()).collect();
            let k_min = ((a - psi.core_bounds().1) / period).ceil();
            let k_max = ((b - psi.core_bounds().0) / period).floor();
            let mut k = k_min;
            while k <= k_max {
                for c in &core_breaks {
                    let x = c + &k * period;
                    if x > *a && x < *b {
                        xs.push(x);
                    }
                }
                k += Rational::one();
            }
        }
    }
    xs.sort();
    xs.dedup();
    let last = xs.len() - 1;
    AxisEval {
        value: xs.iter().map(|x| psi.evaluate(x)).collect(),
        left_lim: xs
            .iter()
            .enumerate()
            .map(|(i, x)| (i > 0).then(|| psi.limit(x, Side::Left)))
            .collect(),
        right_lim: xs
            .iter()
            .enumerate()
            .map(|(i, x)| (i < last).then(|| psi.limit(x, Side::Right)))
            .collect(),
        breaks: xs,
        left_tail: None,
        right_tail: None,
    }
}

/// Axis of an affine-tails function over its core, tails attached.
pub(crate) fn gdff_axis_tails(psi: &GdffFunction) -> AxisEval<Rational> {
    let Extension::AffineTails {
        left_slope,
        left_anchor,
        right_slope,
        right_anchor,
    } = psi.extension()
    else {
        unreachable!("caller checks the representation");
    };
    let bps = psi.core_breakpoints();
    let last = bps.len() - 1;
    AxisEval {
        breaks: bps.iter().map(|b| b.x.clone()).collect(),
        value: bps.iter().map(|b| b.value.clone()).collect(),
        left_lim: bps
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if i == 0 {
                    None
                } else {
                    b.limit_left.clone()
                }
            })
            .collect(),
        right_lim: bps
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if i == last {
                    None
                } else {
                    b.limit_right.clone()
                }
            })
            .collect(),
        left_tail: Some((left_slope.clone(), left_anchor.clone())),
        right_tail: Some((right_slope.clone(), right_anchor.clone())),
    }
}

// ---------------------------------------------------------------------------
// dff-gdff-v1 file format
// ---------------------------------------------------------------------------

pub const GDFF_FORMAT: &str = "dff-gdff-v1";

#[derive(Serialize, Deserialize)]
struct GdffBreakpointDto {
    x: String,
    limit_left: Option<String>,
    value: String,
    limit_right: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum ExtensionDto {
    #[serde(rename = "quasiperiodic")]
    Quasiperiodic { period: String, increment: String },
    #[serde(rename = "affine")]
    Affine {
        left_slope: String,
        left_anchor: String,
        right_slope: String,
        right_anchor: String,
    },
}

#[derive(Serialize, Deserialize)]
struct GdffDto {
    format: String,
    breakpoints: Vec<GdffBreakpointDto>,
    extension: ExtensionDto,
}

pub fn gdff_to_json(psi: &GdffFunction) -> String {
    let dto = GdffDto {
        format: GDFF_FORMAT.to_owned(),
        breakpoints: psi
            .core_breakpoints()
            .iter()
            .map(|b| GdffBreakpointDto {
                x: format_rational(&b.x),
                limit_left: b.limit_left.as_ref().map(format_rational),
                value: format_rational(&b.value),
                limit_right: b.limit_right.as_ref().map(format_rational),
            })
            .collect(),
        extension: match psi.extension() {
            Extension::Quasiperiodic { period, increment } => ExtensionDto::Quasiperiodic {
                period: format_rational(period),
                increment: format_rational(increment),
            },
            Extension::AffineTails {
                left_slope,
                left_anchor,
                right_slope,
                right_anchor,
            } => ExtensionDto::Affine {
                left_slope: format_rational(left_slope),
                left_anchor: format_rational(left_anchor),
                right_slope: format_rational(right_slope),
                right_anchor: format_rational(right_anchor),
            },
        },
    };
    serde_json::to_string(&dto).expect("serialization cannot fail")
}

pub fn gdff_from_json(s: &str) -> Result<GdffFunction, GjError> {
    let dto: GdffDto = serde_json::from_str(s).map_err(|e| GjError::Format(e.to_string()))?;
    if dto.format != GDFF_FORMAT {
        return Err(GjError::Format(format!(
            "expected format {GDFF_FORMAT}, got {}",
            dto.format
        )));
    }
    let parse = |s: &String| parse_rational(s).map_err(|e| GjError::Format(e.to_string()));
    if dto.breakpoints.len() < 2 {
        return Err(GjError::Format("core needs at least two breakpoints".into()));
    }
    let lo = parse(&dto.breakpoints[0].x)?;
    let hi = parse(&dto.breakpoints[dto.breakpoints.len() - 1].x)?;
    if lo >= hi {
        return Err(GjError::Format("core breakpoints must be increasing".into()));
    }
    let width = &hi - &lo;
    let points = dto
        .breakpoints
        .iter()
        .map(|b| {
            Ok(Breakpoint {
                x: (parse(&b.x)? - &lo) / &width,
                limit_left: b.limit_left.as_ref().map(parse).transpose()?,
                value: parse(&b.value)?,
                limit_right: b.limit_right.as_ref().map(parse).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, GjError>>()?;
    let core01 = make_pwl(points)?;
    let extension = match dto.extension {
        ExtensionDto::Quasiperiodic { period, increment } => Extension::Quasiperiodic {
            period: parse(&period)?,
            increment: parse(&increment)?,
        },
        ExtensionDto::Affine {
            left_slope,
            left_anchor,
            right_slope,
            right_anchor,
        } => Extension::AffineTails {
            left_slope: parse(&left_slope)?,
            left_anchor: parse(&left_anchor)?,
            right_slope: parse(&right_slope)?,
            right_anchor: parse(&right_anchor)?,
        },
    };
    GdffFunction::new(lo, hi, core01, extension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sawtooth_is_minimal_and_zero_is_not() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        assert!(gj_minimality_test(&pi).is_minimal);
        assert_eq!(pi.max_slope(), int(2));

        let zero = make_pwl(vec![
            Breakpoint::continuous(int(0), int(0)),
            Breakpoint::continuous(int(1), int(0)),
        ])
        .unwrap();
        let pi0 = GjFunction::new(zero, rat(7, 2)).unwrap();
        let verdict = gj_minimality_test(&pi0);
        assert!(!verdict.is_minimal);
        assert!(verdict.violations.iter().any(|v| v.contains("symmetry")));
    }

    #[test]
    fn integer_b_is_rejected() {
        let period = make_pwl(vec![
            Breakpoint::continuous(int(0), int(0)),
            Breakpoint::continuous(rat(1, 2), int(1)),
            Breakpoint::continuous(int(1), int(0)),
        ])
        .unwrap();
        assert!(matches!(
            GjFunction::new(period, int(2)),
            Err(GjError::BadParameter(_))
        ));
    }

    #[test]
    fn staircase_families_are_minimal_with_stated_slope_counts() {
        let three = staircase_three_slope(&rat(7, 2)).unwrap();
        assert!(gj_minimality_test(&three).is_minimal);
        assert_eq!(three.period().distinct_slope_count(), 3);

        let four = staircase_four_slope(&rat(7, 2)).unwrap();
        assert!(gj_minimality_test(&four).is_minimal);
        assert_eq!(four.period().distinct_slope_count(), 4);
    }

    #[test]
    fn conversion_matches_closed_form_for_the_sawtooth() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        let psi = gj_to_gdff(&pi, &rat(1, 2)).unwrap();
        let (lo, hi) = psi.core_bounds();
        assert_eq!((lo.clone(), hi.clone()), (int(0), rat(2, 7)));
        match psi.extension() {
            Extension::Quasiperiodic { period, increment } => {
                assert_eq!(period, &rat(2, 7));
                assert_eq!(increment, &rat(1, 3));
            }
            other => panic!("{other:?}"),
        }
        // 0 on [0,1/7], (7x-1)/3 on [1/7,2/7].
        assert_eq!(psi.evaluate(&rat(1, 14)), int(0));
        assert_eq!(psi.evaluate(&rat(3, 14)), rat(1, 6));
        assert_eq!(psi.evaluate(&int(1)), int(1));
        assert!(psi.strictly_quasiperiodic());
    }

    #[test]
    fn conversion_identities_hold_at_sampled_points() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        let psi = gj_to_gdff(&pi, &rat(1, 2)).unwrap();
        assert!(psi.evaluate(&int(0)).is_zero());
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let x = rat(rng.random_range(-300..300), rng.random_range(1..40));
            // Symmetry.
            assert_eq!(psi.evaluate(&x) + psi.evaluate(&(int(1) - &x)), int(1));
            // Quasiperiod relation away from the boundary lattice.
            let shifted = psi.evaluate(&(&x + rat(2, 7)));
            assert_eq!(shifted, psi.evaluate(&x) + rat(1, 3));
        }
    }

    #[test]
    fn lambda_range_is_enforced() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        assert!(matches!(
            gj_to_gdff(&pi, &int(1)),
            Err(GjError::LambdaOutOfRange)
        ));
        assert!(matches!(
            gj_to_gdff(&pi, &int(0)),
            Err(GjError::LambdaOutOfRange)
        ));
        assert!(gj_to_gdff(&pi, &rat(1, 2)).is_ok()); // lambda = 1/max_slope allowed
    }

    #[test]
    fn slope_counts_are_preserved_by_the_conversion() {
        for (pi, expected) in [
            (sawtooth(&rat(7, 2)).unwrap(), 2usize),
            (staircase_three_slope(&rat(7, 2)).unwrap(), 3),
            (staircase_four_slope(&rat(7, 2)).unwrap(), 4),
        ] {
            assert_eq!(pi.period().distinct_slope_count(), expected);
            let lambda = Rational::one() / (int(2) * pi.max_slope());
            let psi = gj_to_gdff(&pi, &lambda).unwrap();
            assert_eq!(psi.distinct_slopes().len(), expected);
            // b > 1: the restriction contains a whole period.
            let restriction = restrict_to_unit(&psi).unwrap();
            assert_eq!(restriction.distinct_slope_count(), expected);
        }
    }

    #[test]
    fn additive_vertices_scale_into_the_converted_function() {
        let b = rat(7, 2);
        let pi = sawtooth(&b).unwrap();
        let psi = gj_to_gdff(&pi, &rat(1, 2)).unwrap();
        let mut checked = 0;
        for ix in 0..=8i64 {
            for iy in 0..=8i64 {
                let (x, y) = (rat(ix, 8), rat(iy, 8));
                if pi.evaluate(&x) + pi.evaluate(&y) == pi.evaluate(&(&x + &y)) {
                    let (sx, sy) = (&x / &b, &y / &b);
                    assert_eq!(
                        psi.evaluate(&sx) + psi.evaluate(&sy),
                        psi.evaluate(&(&sx + &sy))
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn restriction_of_the_identity_extension() {
        let psi = identity_gdff();
        assert_eq!(restrict_to_unit(&psi).unwrap(), identity());
    }

    #[test]
    fn quasiperiodic_extension_uses_core_values_at_boundaries() {
        // Extension of a maximal function with period 1, increment b: values
        // at integers come from the core endpoints (upper periods are
        // right-closed, lower left-closed).
        let phi = crate::compendium::phi_bj_1(&rat(3, 2)).unwrap();
        let b = int(3);
        let psi = extend_to_gdff(&phi, &b, true).unwrap();
        assert_eq!(psi.evaluate(&int(0)), int(0));
        assert_eq!(psi.evaluate(&int(1)), int(1));
        assert_eq!(psi.evaluate(&int(2)), int(4)); // phi(1) + b
        assert_eq!(psi.evaluate(&int(-1)), int(-3)); // phi(0) - b
        // Symmetry across the construction.
        for k in [-9i64, -5, -1, 0, 3, 8] {
            let x = rat(k, 4);
            assert_eq!(psi.evaluate(&x) + psi.evaluate(&(int(1) - &x)), int(1));
        }
    }

    #[test]
    fn yc_conversion_fixes_the_identity_and_respects_lambda_range() {
        let id = identity_gdff();
        for lam in [rat(1, 3), rat(1, 2), rat(9, 10)] {
            let pi = dff_to_yc(&id, &lam).unwrap();
            assert_eq!(pi.evaluate(&rat(5, 7)), rat(5, 7));
            assert_eq!(pi.evaluate(&int(-3)), int(-3));
        }
        assert!(matches!(
            dff_to_yc(&id, &int(1)),
            Err(GjError::LambdaOutOfRange)
        ));
    }

    #[test]
    fn yc_conversion_yields_valid_cut_coefficients() {
        // For random multisets with sum(r * y) = 1, a general DFF gives
        // sum(psi(r) y) <= 1 and the converted function sum(pi(r) y) >= 1.
        let pi_src = sawtooth(&rat(7, 2)).unwrap();
        let psi = gj_to_gdff(&pi_src, &rat(1, 2)).unwrap();
        let lam = rat(1, 3);
        let yc = dff_to_yc(&psi, &lam).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1..5);
            let mut rows: Vec<(Rational, i64)> = (0..n)
                .map(|_| {
                    (
                        rat(rng.random_range(-20..20), rng.random_range(1..15)),
                        rng.random_range(1..4),
                    )
                })
                .collect();
            let partial: Rational = rows.iter().map(|(r, y)| r * int(*y)).sum();
            let last_y = rng.random_range(1..4);
            rows.push(((int(1) - partial) / int(last_y), last_y));
            debug_assert_eq!(
                rows.iter().map(|(r, y)| r * int(*y)).sum::<Rational>(),
                int(1)
            );
            let dff_side: Rational = rows.iter().map(|(r, y)| psi.evaluate(r) * int(*y)).sum();
            assert!(dff_side <= int(1));
            let yc_side: Rational = rows.iter().map(|(r, y)| yc.evaluate(r) * int(*y)).sum();
            assert!(yc_side >= int(1));
        }
    }

    #[test]
    fn reverse_yc_direction_can_leave_the_dff_class() {
        // The cut-generating function 5x (x >= 0), x (x < 0, x != -1), -4 at
        // x = -1 maps back, at lambda = 1/2, to a function with value 2 at -1,
        // which exceeds 1 and so is not a general DFF.
        let lam = rat(1, 2);
        let pi_at_minus_one = int(-4);
        let phi_at_minus_one = (int(-1) - &lam * pi_at_minus_one) / (int(1) - &lam);
        assert_eq!(phi_at_minus_one, int(2));
        assert!(phi_at_minus_one > int(1));
    }

    #[test]
    fn cut_generation_examples() {
        let id = identity_gdff();
        let row = [rat(1, 7), rat(3, 7), int(1)];
        let (coeffs, rhs) = generate_cut(&id, &row, &int(1));
        assert_eq!(coeffs, row.to_vec());
        assert_eq!(rhs, int(1));

        let pi = sawtooth(&rat(7, 2)).unwrap();
        let psi = gj_to_gdff(&pi, &rat(1, 2)).unwrap();
        let (coeffs, rhs) = generate_cut(&psi, &row, &int(1));
        assert_eq!(coeffs, vec![int(0), rat(1, 3), int(1)]);
        assert_eq!(rhs, int(1));
    }

    #[test]
    fn lueker_bound_examples() {
        assert_eq!(
            lueker_bound(&identity(), &rat(1, 4), &rat(3, 4)).unwrap(),
            int(1)
        );
        let bj = crate::compendium::phi_bj_1(&rat(3, 2)).unwrap();
        assert_eq!(lueker_bound(&bj, &rat(1, 3), &rat(2, 3)).unwrap(), int(1));
        assert_eq!(
            lueker_bound(&bj, &rat(2, 3), &rat(9, 10)).unwrap(),
            rat(420, 329)
        );
        assert!(matches!(
            lueker_bound(&bj, &rat(2, 3), &rat(1, 3)),
            Err(GjError::BadInterval)
        ));
    }

    #[test]
    fn gdff_json_round_trips() {
        let pi = sawtooth(&rat(7, 2)).unwrap();
        for psi in [
            gj_to_gdff(&pi, &rat(1, 2)).unwrap(),
            identity_gdff(),
            extend_to_gdff(&crate::compendium::phi_bj_1(&rat(3, 2)).unwrap(), &int(3), false)
                .unwrap(),
        ] {
            let s = gdff_to_json(&psi);
            let back = gdff_from_json(&s).unwrap();
            assert_eq!(back, psi);
            assert_eq!(gdff_to_json(&back), s);
        }
        assert!(gdff_from_json("{\"format\":\"nope\"}").is_err());
    }
}

//! Splitting a curve into strictly monotone pieces and checking the
//! hypotheses the integration-by-parts volume formulas rely on.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Curve, ExprError};
use crate::numerics::{
    try_find_root_bracketed, try_scan_sign_changes, Interval, NumericsError, Tolerances,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonotoneError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("pieces meeting at x = {at} have the same direction")]
    AlternationViolation { at: f64 },
    #[error("curve is constant on [{lo}, {hi}]")]
    FlatPiece { lo: f64, hi: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }
}

/// Breakpoints `x0 < x1 < ... < x_{n+1}` with the direction of each piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonePartition {
    pub breakpoints: Vec<f64>,
    pub directions: Vec<Direction>,
    /// Curve values at the interior breakpoints.
    pub extremum_values: Vec<f64>,
}

impl MonotonePartition {
    /// Number of interior extrema `n`.
    pub fn interior_count(&self) -> usize {
        self.breakpoints.len() - 2
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Interval, Direction)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.directions)
            .map(|(w, d)| (Interval { lo: w[0], hi: w[1] }, *d))
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.breakpoints[0],
            hi: self.breakpoints[self.breakpoints.len() - 1],
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.directions.len() == 1
    }
}

// Derivatives such as 1/(2 sqrt(x)) blow up at an end of the interval; probe
// just inside instead.
fn derivative_at(curve: &Curve, t: f64, interval: Interval) -> Result<f64, ExprError> {
    match curve.eval_derivative(t) {
        Ok(v) if v.is_finite() => Ok(v),
        other if t == interval.lo || t == interval.hi => {
            let inset = 1e-9 * interval.width();
            let inner = if t == interval.lo {
                t + inset
            } else {
                t - inset
            };
            curve.eval_derivative(inner).or(other)
        }
        other => other,
    }
}

/// Interior points where the derivative changes sign, ascending.
pub fn critical_points(
    curve: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<Vec<f64>, MonotoneError> {
    let cells = try_scan_sign_changes(
        |t| derivative_at(curve, t, interval).map_err(MonotoneError::from),
        interval.lo,
        interval.hi,
        tol.grid_n,
    )?;
    let mut out: Vec<f64> = Vec::with_capacity(cells.len());
    for cell in cells {
        let r = try_find_root_bracketed(
            |t| derivative_at(curve, t, interval).map_err(MonotoneError::from),
            cell.lo,
            cell.hi,
            tol,
        )?;
        let x = r.root;
        if x - interval.lo <= tol.abs_tol || interval.hi - x <= tol.abs_tol {
            continue;
        }
        if out.last().is_some_and(|&prev| x - prev <= tol.abs_tol) {
            continue;
        }
        out.push(x);
    }
    Ok(out)
}

fn piece_direction(curve: &Curve, piece: Interval) -> Result<Direction, MonotoneError> {
    let slope = curve.eval_derivative(piece.midpoint()).unwrap_or(0.0);
    let rise = if slope != 0.0 && slope.is_finite() {
        slope
    } else {
        curve.eval(piece.hi)? - curve.eval(piece.lo)?
    };
    if rise > 0.0 {
        Ok(Direction::Increasing)
    } else if rise < 0.0 {
        Ok(Direction::Decreasing)
    } else {
        Err(MonotoneError::FlatPiece {
            lo: piece.lo,
            hi: piece.hi,
        })
    }
}

/// Splits `interval` at the critical points of `curve`.
pub fn partition(
    curve: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<MonotonePartition, MonotoneError> {
    let interior = critical_points(curve, interval, tol)?;
    let mut breakpoints = Vec::with_capacity(interior.len() + 2);
    breakpoints.push(interval.lo);
    breakpoints.extend_from_slice(&interior);
    breakpoints.push(interval.hi);

    let directions = breakpoints
        .windows(2)
        .map(|w| piece_direction(curve, Interval { lo: w[0], hi: w[1] }))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, pair) in directions.windows(2).enumerate() {
        if pair[0] == pair[1] {
            return Err(MonotoneError::AlternationViolation {
                at: breakpoints[i + 1],
            });
        }
    }
    let extremum_values = interior
        .iter()
        .map(|&x| curve.eval(x))
        .collect::<Result<_, _>>()?;
    Ok(MonotonePartition {
        breakpoints,
        directions,
        extremum_values,
    })
}

/// Parity check on the number of interior extrema.
///
/// Requires `f_a != f_b` and every extremum value strictly between them. The
/// verdict is true when the count is even and, when there are extrema, the
/// first piece heads from `f_a` towards `f_b` (a maximum first when
/// `f_a < f_b`, a minimum first otherwise) and the last piece arrives at
/// `f_b` the same way.
pub fn check_lemma1(p: &MonotonePartition, f_a: f64, f_b: f64) -> Result<bool, MonotoneError> {
    if f_a == f_b {
        return Err(MonotoneError::PreconditionViolated(format!(
            "endpoint values are equal ({f_a})"
        )));
    }
    let (c, d) = (f_a.min(f_b), f_a.max(f_b));
    if let Some((x, v)) = p
        .breakpoints
        .iter()
        .skip(1)
        .zip(&p.extremum_values)
        .find(|(_, &v)| !(c < v && v < d))
    {
        return Err(MonotoneError::PreconditionViolated(format!(
            "extremum value {v} at x = {x} lies outside ({c}, {d})"
        )));
    }
    let n = p.interior_count();
    if n == 0 {
        return Ok(true);
    }
    let toward_b = if f_b > f_a {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    let first_ok = p.directions[0] == toward_b;
    let last_ok = p.directions[p.directions.len() - 1] == toward_b;
    Ok(n.is_multiple_of(2) && first_ok && last_ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// The curve could not be evaluated somewhere on the interval.
    Evaluation,
    /// `f(a) = f(b)`, so `c = d`.
    EqualEndpointValues,
    /// The interval reaches left of the rotation axis.
    NegativeAbscissa,
    NegativeCurve,
    /// `y = c` or `y = d` meets the curve more than once.
    MultipleIntersection,
    /// No alternating monotone partition exists.
    Alternation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub location: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub satisfied: bool,
    pub c: f64,
    pub d: f64,
    pub violations: Vec<Violation>,
    pub partition: Option<MonotonePartition>,
}

const NONNEGATIVITY_GRID: usize = 4096;
const NONNEGATIVITY_SLACK: f64 = -1e-12;

/// Smallest curve value over a uniform 4096-cell grid plus `extra` points,
/// as `(x, f(x))`.
pub fn lowest_sample(
    curve: &Curve,
    interval: Interval,
    extra: &[f64],
) -> Result<(f64, f64), ExprError> {
    let (a, b) = (interval.lo, interval.hi);
    let h = interval.width() / NONNEGATIVITY_GRID as f64;
    let grid = (0..=NONNEGATIVITY_GRID).map(|i| {
        if i == NONNEGATIVITY_GRID {
            b
        } else {
            a + h * i as f64
        }
    });
    let mut lowest = (a, curve.eval(a)?);
    for x in grid.chain(extra.iter().copied()) {
        let v = curve.eval(x)?;
        if v < lowest.1 {
            lowest = (x, v);
        }
    }
    Ok(lowest)
}

/// True when `value` counts as nonnegative for the volume formulas.
pub fn is_nonnegative(value: f64) -> bool {
    value >= NONNEGATIVITY_SLACK
}

/// Abscissae where the curve meets the horizontal line `level`.
fn level_crossings(
    curve: &Curve,
    p: &MonotonePartition,
    level: f64,
    tol: &Tolerances,
) -> Result<Vec<f64>, MonotoneError> {
    let mut hits: Vec<f64> = Vec::new();
    let push = |x: f64, hits: &mut Vec<f64>| {
        if !hits.last().is_some_and(|&h| (x - h).abs() <= tol.abs_tol) {
            hits.push(x);
        }
    };
    for (piece, _) in p.pieces() {
        let g_lo = curve.eval(piece.lo)? - level;
        let g_hi = curve.eval(piece.hi)? - level;
        if g_lo == 0.0 {
            push(piece.lo, &mut hits);
        }
        if g_lo * g_hi < 0.0 {
            let r = try_find_root_bracketed(
                |t| {
                    curve
                        .eval(t)
                        .map(|v| v - level)
                        .map_err(MonotoneError::from)
                },
                piece.lo,
                piece.hi,
                tol,
            )?;
            push(r.root, &mut hits);
        }
    }
    let end = p.interval().hi;
    if curve.eval(end)? == level {
        push(end, &mut hits);
    }
    Ok(hits)
}

fn violation(rule: Rule, location: f64, detail: impl Into<String>) -> Violation {
    Violation {
        rule,
        location,
        detail: detail.into(),
    }
}

/// Checks everything the piecewise formula assumes about `curve` on
/// `interval`. Problems are collected, never raised.
pub fn validate_revolution_hypotheses(
    curve: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> HypothesisReport {
    let mut violations = Vec::new();
    let (a, b) = (interval.lo, interval.hi);
    let (f_a, f_b) = match (curve.eval(a), curve.eval(b)) {
        (Ok(fa), Ok(fb)) => (fa, fb),
        (Err(e), _) | (_, Err(e)) => {
            return HypothesisReport {
                satisfied: false,
                c: f64::NAN,
                d: f64::NAN,
                violations: vec![violation(Rule::Evaluation, a, e.to_string())],
                partition: None,
            }
        }
    };
    let (c, d) = (f_a.min(f_b), f_a.max(f_b));

    let scale = f_a.abs().max(f_b.abs());
    if (f_b - f_a).abs() <= tol.abs_tol.max(tol.rel_tol * scale) {
        violations.push(violation(
            Rule::EqualEndpointValues,
            b,
            format!("f(a) = {f_a} and f(b) = {f_b} coincide"),
        ));
    }
    if a < 0.0 {
        violations.push(violation(
            Rule::NegativeAbscissa,
            a,
            format!("interval starts at {a} < 0"),
        ));
    }

    let partition = match partition(curve, interval, tol) {
        Ok(p) => Some(p),
        Err(MonotoneError::AlternationViolation { at }) => {
            violations.push(violation(
                Rule::Alternation,
                at,
                "adjacent pieces share a direction",
            ));
            None
        }
        Err(MonotoneError::FlatPiece { lo, hi }) => {
            violations.push(violation(
                Rule::Alternation,
                lo,
                format!("curve is constant on [{lo}, {hi}]"),
            ));
            None
        }
        Err(e) => {
            violations.push(violation(Rule::Evaluation, a, e.to_string()));
            None
        }
    };

    let mut checked_levels = [false, false];
    if let Some(p) = &partition {
        for (&x, &v) in p.breakpoints[1..].iter().zip(&p.extremum_values) {
            if c < v && v < d {
                continue;
            }
            let (slot, level, name, owner) = if v >= d {
                (1, d, "d", if f_a == d { a } else { b })
            } else {
                (0, c, "c", if f_a == c { a } else { b })
            };
            if checked_levels[slot] {
                continue;
            }
            checked_levels[slot] = true;
            match level_crossings(curve, p, level, tol) {
                Ok(hits) => {
                    let extra = hits.iter().copied().find(|&h| h != owner).unwrap_or(x);
                    let listed: Vec<String> = hits.iter().map(|h| format!("{h}")).collect();
                    violations.push(violation(
                        Rule::MultipleIntersection,
                        extra,
                        format!(
                            "y = {name} = {level} meets the curve at x = {} (extremum {v} at x = {x})",
                            listed.join(", ")
                        ),
                    ));
                }
                Err(e) => violations.push(violation(Rule::Evaluation, x, e.to_string())),
            }
        }
    }

    let breaks = partition.as_ref().map_or(&[][..], |p| &p.breakpoints[..]);
    match lowest_sample(curve, interval, breaks) {
        Ok((x, v)) if v < NONNEGATIVITY_SLACK => violations.push(violation(
            Rule::NegativeCurve,
            x,
            format!("f({x}) = {v} < 0"),
        )),
        Ok(_) => {}
        Err(e) => violations.push(violation(Rule::Evaluation, a, e.to_string())),
    }

    HypothesisReport {
        satisfied: violations.is_empty(),
        c,
        d,
        violations,
        partition,
    }
}

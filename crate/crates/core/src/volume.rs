//! Volumes of solids of revolution.
//!
//! Every route reduces to one of four primitives applied to a profile
//! `h(t)` on `[p, q]`:
//!
//! * shell: `2π ∫ t h(t) dt`, the region under the curve turned about the
//!   `h` axis;
//! * direct disk: `π ∫ h(t)² dt`, the region under the curve turned about
//!   the `t` axis;
//! * inverse disk: `π ∫ h⁻¹(s)² ds` over the range of `h`, the region
//!   between the curve and the `h` axis turned about that axis, with the
//!   inverse found by Newton's method at every node;
//! * by parts: `sgn(h(q) - h(p)) { π [q² h(q) - p² h(p)] - 2π ∫ t h(t) dt }`,
//!   which equals the inverse disk without inverting anything.
//!
//! For `y = f(x)` turned about the y-axis the profile is `f` itself; for
//! `x = g(y)` turned about the x-axis it is `g`. The other two pairings are
//! direct disks.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Curve, ExprError};
use crate::monotone::{
    critical_points, is_nonnegative, lowest_sample, partition, validate_revolution_hypotheses,
    Direction, HypothesisReport, MonotoneError, MonotonePartition,
};
use crate::numerics::{
    try_integrate, try_newton_solve, Interval, NumericsError, QuadratureResult, Tolerances,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolumeError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Monotone(#[from] MonotoneError),
    #[error("curve is negative: f({at}) = {value}")]
    NegativeCurve { at: f64, value: f64 },
    #[error("interval starts left of the axis at {at}")]
    NegativeAbscissa { at: f64 },
    #[error("curve is not strictly monotone; extrema at {critical_points:?}")]
    NotMonotone { critical_points: Vec<f64> },
    #[error("curve cannot be inverted on the interval; extrema at {critical_points:?}")]
    NotInvertible { critical_points: Vec<f64> },
    #[error("curve takes the same value at both ends")]
    ConstantEnds,
    #[error("revolution hypotheses violated ({} violation(s))", .0.violations.len())]
    HypothesisViolation(Box<HypothesisReport>),
    #[error("method {method} does not apply to a {role} curve turned about the {axis}")]
    IncompatibleMethod {
        method: Method,
        role: CurveRole,
        axis: Axis,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveRole {
    /// `y = f(x)`.
    #[serde(rename = "y-of-x")]
    YOfX,
    /// `x = g(y)`.
    #[serde(rename = "x-of-y")]
    XOfY,
}

impl fmt::Display for CurveRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveRole::YOfX => "y-of-x",
            CurveRole::XOfY => "x-of-y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x-axis",
            Axis::Y => "y-axis",
        })
    }
}

/// Method requested by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Shell,
    Disk,
    Theorem1,
    Theorem2,
    Theorem3,
    Piecewise,
    All,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Shell => "shell",
            Method::Disk => "disk",
            Method::Theorem1 => "theorem1",
            Method::Theorem2 => "theorem2",
            Method::Theorem3 => "theorem3",
            Method::Piecewise => "piecewise",
            Method::All => "all",
        })
    }
}

/// Computation route that produced a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Shell,
    /// Boundary cylinder minus the shell volume, sign corrected.
    ShellComplement,
    Disk,
    Theorem1,
    Theorem2,
    Theorem3,
    Piecewise,
    /// By-parts formula applied to the numerically inverted curve.
    InverseByParts,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Shell => "shell",
            Route::ShellComplement => "shell_complement",
            Route::Disk => "disk",
            Route::Theorem1 => "theorem1",
            Route::Theorem2 => "theorem2",
            Route::Theorem3 => "theorem3",
            Route::Piecewise => "piecewise",
            Route::InverseByParts => "inverse_by_parts",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeProblem {
    pub curve: Curve,
    pub role: CurveRole,
    pub interval: Interval,
    pub axis: Axis,
    pub method: Method,
    pub tol: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub method: Route,
    pub value: f64,
    /// `|value - primary|`.
    pub delta: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeReport {
    pub value: f64,
    pub method: Route,
    pub error_estimate: f64,
    /// `sgn(h(q) - h(p))` for the by-parts routes, `+1` otherwise.
    pub sign_factor: i8,
    pub partition: Option<MonotonePartition>,
    pub cross_checks: Vec<CrossCheck>,
    pub warnings: Vec<String>,
    pub converged: bool,
}

/// Relative slack allowed between routes, on top of their error estimates,
/// as a multiple of `rel_tol`.
const AGREEMENT_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy)]
struct Estimate {
    value: f64,
    error: f64,
    converged: bool,
}

impl Estimate {
    fn from_quadrature(scale: f64, q: QuadratureResult) -> Self {
        Estimate {
            value: scale * q.value,
            error: scale.abs() * q.error_estimate,
            converged: q.converged,
        }
    }

    fn combine(self, other: Estimate, weight: f64) -> Estimate {
        Estimate {
            value: self.value + weight * other.value,
            error: self.error + other.error,
            converged: self.converged && other.converged,
        }
    }

    const ZERO: Estimate = Estimate {
        value: 0.0,
        error: 0.0,
        converged: true,
    };

    fn report(
        self,
        method: Route,
        sign_factor: i8,
        partition: Option<MonotonePartition>,
    ) -> VolumeReport {
        let mut warnings = Vec::new();
        if !self.converged {
            warnings.push(format!(
                "{method}: quadrature stopped at max_depth; error estimate {:.3e}",
                self.error
            ));
        }
        if self.value < 0.0 {
            warnings.push(format!("{method}: negative volume {}", self.value));
        }
        VolumeReport {
            value: self.value,
            method,
            error_estimate: self.error,
            sign_factor,
            partition,
            cross_checks: Vec::new(),
            warnings,
            converged: self.converged,
        }
    }
}

fn sign_of(rise: f64) -> Result<f64, VolumeError> {
    if rise > 0.0 {
        Ok(1.0)
    } else if rise < 0.0 {
        Ok(-1.0)
    } else {
        Err(VolumeError::ConstantEnds)
    }
}

fn eval(curve: &Curve) -> impl Fn(f64) -> Result<f64, VolumeError> + '_ {
    move |t| curve.eval(t).map_err(VolumeError::from)
}

// ---------------------------------------------------------------------------
// Primitives

fn shell_estimate<H>(mut h: H, span: Interval, tol: &Tolerances) -> Result<Estimate, VolumeError>
where
    H: FnMut(f64) -> Result<f64, VolumeError>,
{
    let q = try_integrate::<_, VolumeError>(|t| Ok(t * h(t)?), span.lo, span.hi, tol)?;
    Ok(Estimate::from_quadrature(2.0 * PI, q))
}

fn direct_disk_estimate<H>(
    mut h: H,
    span: Interval,
    tol: &Tolerances,
) -> Result<Estimate, VolumeError>
where
    H: FnMut(f64) -> Result<f64, VolumeError>,
{
    let q = try_integrate::<_, VolumeError>(
        |t| {
            let v = h(t)?;
            Ok(v * v)
        },
        span.lo,
        span.hi,
        tol,
    )?;
    Ok(Estimate::from_quadrature(PI, q))
}

/// `sign * {π [q² h(q) - p² h(p)] - 2π ∫ t h(t) dt}`.
fn by_parts_estimate<H>(
    mut h: H,
    span: Interval,
    sign: f64,
    tol: &Tolerances,
) -> Result<Estimate, VolumeError>
where
    H: FnMut(f64) -> Result<f64, VolumeError>,
{
    let (p, q) = (span.lo, span.hi);
    let boundary = PI * (q * q * h(q)? - p * p * h(p)?);
    let shell = shell_estimate(&mut h, span, tol)?;
    Ok(Estimate {
        value: sign * (boundary - shell.value),
        error: shell.error,
        converged: shell.converged,
    })
}

/// Inverse of `curve` restricted to a monotone `piece`, evaluated by
/// bracketed Newton iteration seeded with the previous root.
fn inverse_of<'a>(
    curve: &'a Curve,
    piece: Interval,
    tol: &'a Tolerances,
) -> impl FnMut(f64) -> Result<f64, VolumeError> + 'a {
    let mut seed: Option<f64> = None;
    let ends = (curve.eval(piece.lo), curve.eval(piece.hi));
    move |s| {
        let (h_lo, h_hi) = match &ends {
            (Ok(lo), Ok(hi)) => (*lo, *hi),
            (Err(e), _) | (_, Err(e)) => return Err(e.clone().into()),
        };
        if s == h_lo {
            return Ok(piece.lo);
        }
        if s == h_hi {
            return Ok(piece.hi);
        }
        let x0 = seed.unwrap_or_else(|| piece.lo + (s - h_lo) / (h_hi - h_lo) * piece.width());
        let local = Tolerances {
            residual_tol: tol
                .residual_tol
                .max(8.0 * f64::EPSILON * h_lo.abs().max(h_hi.abs())),
            ..*tol
        };
        let r = try_newton_solve(
            |t| curve.eval(t).map(|v| v - s).map_err(VolumeError::from),
            |t| Ok(curve.eval_derivative(t).unwrap_or(f64::NAN)),
            x0,
            Some(piece),
            &local,
        )?;
        seed = Some(r.root);
        Ok(r.root)
    }
}

fn range_of(curve: &Curve, piece: Interval) -> Result<(Interval, Direction), VolumeError> {
    let (h_lo, h_hi) = (curve.eval(piece.lo)?, curve.eval(piece.hi)?);
    let direction = if sign_of(h_hi - h_lo)? > 0.0 {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    Ok((Interval::new(h_lo.min(h_hi), h_lo.max(h_hi))?, direction))
}

fn inverse_disk_estimate(
    curve: &Curve,
    piece: Interval,
    tol: &Tolerances,
) -> Result<Estimate, VolumeError> {
    let (range, _) = range_of(curve, piece)?;
    direct_disk_estimate(inverse_of(curve, piece, tol), range, tol)
}

/// By-parts formula on the inverse of a monotone piece: `π ∫ h² dt` over
/// the piece, reached without integrating `h²`.
fn inverse_by_parts_estimate(
    curve: &Curve,
    piece: Interval,
    tol: &Tolerances,
) -> Result<Estimate, VolumeError> {
    let (range, direction) = range_of(curve, piece)?;
    by_parts_estimate(inverse_of(curve, piece, tol), range, direction.sign(), tol)
}

// ---------------------------------------------------------------------------
// Preconditions

fn require_right_of_axis(span: Interval) -> Result<(), VolumeError> {
    if span.lo < 0.0 {
        Err(VolumeError::NegativeAbscissa { at: span.lo })
    } else {
        Ok(())
    }
}

fn require_nonnegative(curve: &Curve, span: Interval, extra: &[f64]) -> Result<(), VolumeError> {
    let (at, value) = lowest_sample(curve, span, extra)?;
    if is_nonnegative(value) {
        Ok(())
    } else {
        Err(VolumeError::NegativeCurve { at, value })
    }
}

fn require_monotone(curve: &Curve, span: Interval, tol: &Tolerances) -> Result<(), VolumeError> {
    let critical_points = critical_points(curve, span, tol)?;
    if critical_points.is_empty() {
        Ok(())
    } else {
        Err(VolumeError::NotMonotone { critical_points })
    }
}

fn require_hypotheses(
    curve: &Curve,
    span: Interval,
    tol: &Tolerances,
) -> Result<MonotonePartition, VolumeError> {
    let report = validate_revolution_hypotheses(curve, span, tol);
    match (&report.partition, report.satisfied) {
        (Some(p), true) => Ok(p.clone()),
        _ => Err(VolumeError::HypothesisViolation(Box::new(report))),
    }
}

fn single_piece(curve: &Curve, span: Interval) -> Result<MonotonePartition, VolumeError> {
    let (_, direction) = range_of(curve, span)?;
    Ok(MonotonePartition {
        breakpoints: vec![span.lo, span.hi],
        directions: vec![direction],
        extremum_values: Vec::new(),
    })
}

fn by_parts_whole(
    curve: &Curve,
    span: Interval,
    tol: &Tolerances,
) -> Result<(Estimate, f64), VolumeError> {
    let sign = sign_of(curve.eval(span.hi)? - curve.eval(span.lo)?)?;
    Ok((by_parts_estimate(eval(curve), span, sign, tol)?, sign))
}

// ---------------------------------------------------------------------------
// Public operations

/// `2π ∫ t h(t) dt`: the region between the curve and the variable's axis,
/// turned about the other axis by cylindrical shells.
pub fn shell_volume(
    curve: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    require_right_of_axis(interval)?;
    require_nonnegative(curve, interval, &[])?;
    Ok(shell_estimate(eval(curve), interval, tol)?.report(Route::Shell, 1, None))
}

fn disk_volume(
    curve: &Curve,
    direct: bool,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    if direct {
        return Ok(direct_disk_estimate(eval(curve), interval, tol)?.report(Route::Disk, 1, None));
    }
    let critical_points = critical_points(curve, interval, tol)?;
    if !critical_points.is_empty() {
        return Err(VolumeError::NotInvertible { critical_points });
    }
    let p = single_piece(curve, interval)?;
    Ok(inverse_disk_estimate(curve, interval, tol)?.report(Route::Disk, 1, Some(p)))
}

/// Disk volume about the y-axis.
///
/// For an `x = g(y)` curve `interval` is `[c, d]` and the result is
/// `π ∫ g(y)² dy`. For a `y = f(x)` curve `interval` is `[a, b]`, the
/// curve must be strictly monotone there, and the same integral is taken
/// over `f`'s range with `g = f⁻¹` found numerically.
pub fn disk_volume_y_axis(
    curve: &Curve,
    role: CurveRole,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    disk_volume(curve, role == CurveRole::XOfY, interval, tol)
}

/// Mirror of [`disk_volume_y_axis`] for rotation about the x-axis.
pub fn disk_volume_x_axis(
    curve: &Curve,
    role: CurveRole,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    disk_volume(curve, role == CurveRole::YOfX, interval, tol)
}

fn theorem1(
    curve: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    require_right_of_axis(interval)?;
    require_monotone(curve, interval, tol)?;
    require_nonnegative(curve, interval, &[])?;
    let (est, sign) = by_parts_whole(curve, interval, tol)?;
    let p = single_piece(curve, interval)?;
    Ok(est.report(Route::Theorem1, sign as i8, Some(p)))
}

/// By-parts volume of `y = f(x)`, strictly monotone and nonnegative on
/// `[a, b]` with `a >= 0`, turned about the y-axis.
pub fn theorem1_y(
    f: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    theorem1(f, interval, tol)
}

/// By-parts volume of `x = g(y)` on `[c, d]` turned about the x-axis.
pub fn theorem1_x(
    g: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    theorem1(g, interval, tol)
}

fn theorem_piecewise_monotone(
    curve: &Curve,
    interval: Interval,
    tol: &Tolerances,
    route: Route,
) -> Result<VolumeReport, VolumeError> {
    let p = require_hypotheses(curve, interval, tol)?;
    let (est, sign) = by_parts_whole(curve, interval, tol)?;
    Ok(est.report(route, sign as i8, Some(p)))
}

/// By-parts volume for a piecewise strictly monotone `y = f(x)` whose end
/// levels `y = c` and `y = d` each meet the curve once. On a monotone curve
/// this is exactly [`theorem1_y`].
pub fn theorem2_y(
    f: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    theorem_piecewise_monotone(f, interval, tol, Route::Theorem2)
}

/// Mirror of [`theorem2_y`] for `x = g(y)` turned about the x-axis.
pub fn theorem3_x(
    g: &Curve,
    interval: Interval,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    theorem_piecewise_monotone(g, interval, tol, Route::Theorem3)
}

/// Alternating sum `V0 - V1 + V2 - ...` of the by-parts volumes of the
/// monotone pieces. Each piece is integrated separately, so this is an
/// independent check on the telescoped whole-interval formula.
pub fn piecewise_signed_sum(
    curve: &Curve,
    p: &MonotonePartition,
    tol: &Tolerances,
) -> Result<VolumeReport, VolumeError> {
    for (i, pair) in p.directions.windows(2).enumerate() {
        if pair[0] == pair[1] {
            return Err(MonotoneError::AlternationViolation {
                at: p.breakpoints[i + 1],
            }
            .into());
        }
    }
    let whole = p.interval();
    require_hypotheses(curve, whole, tol)?;
    let sign = sign_of(curve.eval(whole.hi)? - curve.eval(whole.lo)?)?;
    let mut total = Estimate::ZERO;
    for (i, (piece, direction)) in p.pieces().enumerate() {
        let v = by_parts_estimate(eval(curve), piece, direction.sign(), tol)?;
        let weight = if i % 2 == 0 { 1.0 } else { -1.0 };
        total = total.combine(v, weight);
    }
    Ok(total.report(Route::Piecewise, sign as i8, Some(p.clone())))
}

// ---------------------------------------------------------------------------
// Problems

fn is_profile(role: CurveRole, axis: Axis) -> bool {
    matches!(
        (role, axis),
        (CurveRole::YOfX, Axis::Y) | (CurveRole::XOfY, Axis::X)
    )
}

/// Runs the method named in `problem`; `Method::All` cross-validates.
pub fn solve(problem: &VolumeProblem) -> Result<VolumeReport, VolumeError> {
    let VolumeProblem {
        curve,
        role,
        interval,
        axis,
        method,
        tol,
    } = problem;
    let (role, axis, interval) = (*role, *axis, *interval);
    tol.validate()?;
    let profile = is_profile(role, axis);
    let incompatible = || VolumeError::IncompatibleMethod {
        method: *method,
        role,
        axis,
    };
    match method {
        Method::All => cross_validate(problem),
        Method::Disk => disk_volume(curve, !profile, interval, tol),
        Method::Shell if profile => shell_volume(curve, interval, tol),
        Method::Theorem1 if profile => theorem1(curve, interval, tol),
        Method::Theorem2 if role == CurveRole::YOfX && axis == Axis::Y => {
            theorem2_y(curve, interval, tol)
        }
        Method::Theorem3 if role == CurveRole::XOfY && axis == Axis::X => {
            theorem3_x(curve, interval, tol)
        }
        Method::Piecewise if profile => {
            let p = partition(curve, interval, tol)?;
            piecewise_signed_sum(curve, &p, tol)
        }
        _ => Err(incompatible()),
    }
}

fn agreement_tolerance(primary: &VolumeReport, error: f64, tol: &Tolerances) -> f64 {
    tol.abs_tol
        .max(AGREEMENT_FACTOR * tol.rel_tol * primary.value.abs())
        + primary.error_estimate
        + error
}

fn attach(
    report: &mut VolumeReport,
    route: Route,
    outcome: Result<Estimate, VolumeError>,
    tol: &Tolerances,
) {
    match outcome {
        Ok(est) => {
            let delta = (est.value - report.value).abs();
            let tolerance = agreement_tolerance(report, est.error, tol);
            let passed = delta <= tolerance;
            if !passed {
                report.warnings.push(format!(
                    "{route} differs from {} by {delta:.3e} (tolerance {tolerance:.3e})",
                    report.method
                ));
            }
            if !est.converged {
                report.converged = false;
                report
                    .warnings
                    .push(format!("{route}: quadrature stopped at max_depth"));
            }
            report.cross_checks.push(CrossCheck {
                method: route,
                value: est.value,
                delta,
                tolerance,
                passed,
            });
        }
        Err(e) => report.warnings.push(format!("{route} unavailable: {e}")),
    }
}

/// Runs every route that applies to `problem` and compares them with the
/// primary value. Disagreements become warnings; only a failure of the
/// primary route is an error.
pub fn cross_validate(problem: &VolumeProblem) -> Result<VolumeReport, VolumeError> {
    let VolumeProblem {
        curve,
        role,
        interval,
        axis,
        tol,
        ..
    } = problem;
    let (interval, tol) = (*interval, tol);
    tol.validate()?;

    if !is_profile(*role, *axis) {
        let mut report = disk_volume(curve, true, interval, tol)?;
        match partition(curve, interval, tol) {
            Ok(p) => {
                let pieces: Result<Estimate, VolumeError> =
                    p.pieces().try_fold(Estimate::ZERO, |acc, (piece, _)| {
                        Ok(acc.combine(inverse_by_parts_estimate(curve, piece, tol)?, 1.0))
                    });
                attach(&mut report, Route::InverseByParts, pieces, tol);
                report.partition = Some(p);
            }
            Err(e) => report
                .warnings
                .push(format!("{} unavailable: {e}", Route::InverseByParts)),
        }
        return Ok(report);
    }

    let primary_route = if *axis == Axis::Y {
        Route::Theorem2
    } else {
        Route::Theorem3
    };
    let mut report = theorem_piecewise_monotone(curve, interval, tol, primary_route)?;
    let p = report
        .partition
        .clone()
        .unwrap_or(single_piece(curve, interval)?);

    if p.is_monotone() {
        let t1 = by_parts_whole(curve, interval, tol).map(|(e, _)| e);
        attach(&mut report, Route::Theorem1, t1, tol);
    }
    let pw = piecewise_signed_sum(curve, &p, tol).map(|r| Estimate {
        value: r.value,
        error: r.error_estimate,
        converged: r.converged,
    });
    attach(&mut report, Route::Piecewise, pw, tol);

    let complement = (|| {
        let sign = f64::from(report.sign_factor);
        let (a, b) = (interval.lo, interval.hi);
        let boundary = PI * (b * b * curve.eval(b)? - a * a * curve.eval(a)?);
        let shell = shell_volume(curve, interval, tol)?;
        Ok(Estimate {
            value: sign * (boundary - shell.value),
            error: shell.error_estimate,
            converged: shell.converged,
        })
    })();
    attach(&mut report, Route::ShellComplement, complement, tol);

    let disks: Result<Estimate, VolumeError> =
        p.pieces()
            .enumerate()
            .try_fold(Estimate::ZERO, |acc, (i, (piece, _))| {
                let weight = if i % 2 == 0 { 1.0 } else { -1.0 };
                Ok(acc.combine(inverse_disk_estimate(curve, piece, tol)?, weight))
            });
    attach(&mut report, Route::Disk, disks, tol);
    Ok(report)
}

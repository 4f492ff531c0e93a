//! Adaptive quadrature and root finding.
//!
//! Every routine comes in two flavours: a plain one taking `FnMut(f64) -> f64`
//! and a `try_` one whose evaluator may fail. The fallible evaluator's error
//! type only needs `From<NumericsError>`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::convert::Infallible;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("non-finite evaluation f({at}) = {value}")]
    NonFiniteEvaluation { at: f64, value: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("no convergence after {iterations} iterations (last estimate {estimate})")]
    MaxIterExceeded { iterations: usize, estimate: f64 },
    #[error("Newton iteration diverged at {at} without a bracket to fall back on")]
    DivergedWithoutBracket { at: f64 },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(&'static str),
}

impl From<Infallible> for NumericsError {
    fn from(e: Infallible) -> Self {
        match e {}
    }
}

/// Accuracy targets shared by every numeric routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub residual_tol: f64,
    pub max_depth: usize,
    pub max_iter: usize,
    /// Cells used when scanning for sign changes.
    pub grid_n: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            residual_tol: 1e-12,
            max_depth: 50,
            max_iter: 100,
            grid_n: 1024,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), NumericsError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.abs_tol) {
            return Err(NumericsError::InvalidTolerances("abs_tol must be positive"));
        }
        if !positive(self.rel_tol) {
            return Err(NumericsError::InvalidTolerances("rel_tol must be positive"));
        }
        if !positive(self.residual_tol) {
            return Err(NumericsError::InvalidTolerances(
                "residual_tol must be positive",
            ));
        }
        if self.max_depth < 1 {
            return Err(NumericsError::InvalidTolerances(
                "max_depth must be at least 1",
            ));
        }
        if self.max_iter < 1 {
            return Err(NumericsError::InvalidTolerances(
                "max_iter must be at least 1",
            ));
        }
        if self.grid_n < 2 {
            return Err(NumericsError::InvalidTolerances(
                "grid_n must be at least 2",
            ));
        }
        Ok(())
    }

    /// Error bound an integral of magnitude `value` has to meet.
    pub fn quadrature_target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(NumericsError::InvalidInterval { lo, hi })
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn checked<E: From<NumericsError>>(at: f64, value: f64) -> Result<f64, E> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NumericsError::NonFiniteEvaluation { at, value }.into())
    }
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7-15

/// Kronrod abscissae on [-1, 1], outermost first; odd indices are shared
/// with the 7-point Gauss rule.
const XGK: [f64; 8] = [
    f64::from_bits(0x3fefba009d4d09b1), // 0.991455371120812639206854697526329
    f64::from_bits(0x3fee5f178e7c6229), // 0.949107912342758524526189684047851
    f64::from_bits(0x3febacf827b9bb3e), // 0.864864423359769072789712788640926
    f64::from_bits(0x3fe7ba9f9be3a1d6), // 0.741531185599394439863864773280788
    f64::from_bits(0x3fe2c13a049dfa24), // 0.586087235467691130294144845693013
    f64::from_bits(0x3fd9f95df119fd62), // 0.405845151377397166906606412076961
    f64::from_bits(0x3fca98b2892e0c77), // 0.207784955007898467600689403773245
    0.0,
];

const WGK: [f64; 8] = [
    f64::from_bits(0x3f977c5b67d57470), // 0.022935322010529224963732008058970
    f64::from_bits(0x3fb026cdaa7b61c4), // 0.063092092629978553290700663189204
    f64::from_bits(0x3fbad384a34814c6), // 0.104790010322250183839876322541518
    f64::from_bits(0x3fc200ed0f46e8c1), // 0.140653259715525918745189590510238
    f64::from_bits(0x3fc5a1f266e47d5c), // 0.169004726639267902826583426598550
    f64::from_bits(0x3fc85d6861c80eb1), // 0.190350578064785409913256402421014
    f64::from_bits(0x3fca2adbcbec9cd8), // 0.204432940075298892414161999234649
    f64::from_bits(0x3fcad04f9087090f), // 0.209482141084727828012999174891714
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    f64::from_bits(0x3fc092f69f826d57), // 0.129484966168869693270611432679082
    f64::from_bits(0x3fd1e6b1713d8644), // 0.279705391489276667901467771423780
    f64::from_bits(0x3fd86fe74ee32b3d), // 0.381830050505118944950369775488975
    f64::from_bits(0x3fdabfd7e03c2fa6), // 0.417959183673469387755102040816327
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties go to the leftmost panel so runs are reproducible.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F, E>(f: &mut F, a: f64, b: f64, depth: usize) -> Result<Panel, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = checked(center, f(center)?)?;

    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let f1 = checked(x1, f(x1)?)?;
        let f2 = checked(x2, f(x2)?)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: rescale_error((kronrod - gauss) * half, res_abs * scale, res_asc * scale),
        depth,
    })
}

// QUADPACK's heuristic: |K - G| is far too pessimistic for smooth integrands.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// Outcome of [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, never negative.
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when `max_depth` stopped refinement; `value` is then the best estimate.
    pub converged: bool,
}

const MAX_PANELS: usize = 20_000;

/// Adaptive Gauss-Kronrod 7-15 quadrature over `[a, b]`, `a <= b`.
///
/// Panels are bisected worst-first until the summed error estimate meets
/// `max(abs_tol, rel_tol * |value|)`. A panel at `max_depth` is never split;
/// hitting it returns the current estimate with `converged = false`.
pub fn try_integrate<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    tol: &Tolerances,
) -> Result<QuadratureResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    tol.validate()?;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(NumericsError::InvalidInterval { lo: a, hi: b }.into());
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }

    let mut evaluations = 15;
    let first = gauss_kronrod(&mut f, a, b, 0)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut converged = true;

    while error > tol.quadrature_target(value) {
        // heap is never empty here: the loop only pops after pushing children
        let worst = match heap.peek() {
            Some(p) => *p,
            None => break,
        };
        if worst.depth >= tol.max_depth || heap.len() >= MAX_PANELS {
            converged = false;
            break;
        }
        heap.pop();
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&mut f, worst.a, mid, worst.depth + 1)?;
        let right = gauss_kronrod(&mut f, mid, worst.b, worst.depth + 1)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // final sums in left-to-right order, independent of the refinement history
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    let converged = converged && error <= tol.quadrature_target(value);

    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations,
        converged,
    })
}

pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: &Tolerances,
) -> Result<QuadratureResult, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok::<_, NumericsError>(f(x)), a, b, tol)
}

// ---------------------------------------------------------------------------
// Root finding

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    Bracketed,
    Newton,
    NewtonWithBisectionFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub root: f64,
    /// `f(root)`.
    pub residual: f64,
    pub iterations: usize,
    pub method_used: RootMethod,
}

/// Brent's method as an explicit state machine.
///
/// `best` and `contra` always bracket a root: `f(best) * f(contra) <= 0`,
/// and `|f(best)| <= |f(contra)|`.
#[derive(Debug, Clone)]
pub struct Brent {
    prev: f64,
    f_prev: f64,
    best: f64,
    f_best: f64,
    contra: f64,
    f_contra: f64,
    step: f64,
    last_step: f64,
}

impl Brent {
    /// Starts from a bracket whose end values are already known.
    pub fn new(lo: f64, f_lo: f64, hi: f64, f_hi: f64) -> Result<Self, NumericsError> {
        if f_lo * f_hi > 0.0 || f_lo.is_nan() || f_hi.is_nan() {
            return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
        }
        let mut s = Brent {
            prev: lo,
            f_prev: f_lo,
            best: hi,
            f_best: f_hi,
            contra: hi,
            f_contra: f_hi,
            step: hi - lo,
            last_step: hi - lo,
        };
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        if (self.f_best > 0.0 && self.f_contra > 0.0) || (self.f_best < 0.0 && self.f_contra < 0.0)
        {
            self.contra = self.prev;
            self.f_contra = self.f_prev;
            self.step = self.best - self.prev;
            self.last_step = self.step;
        }
        if self.f_contra.abs() < self.f_best.abs() {
            self.prev = self.best;
            self.f_prev = self.f_best;
            self.best = self.contra;
            self.f_best = self.f_contra;
            self.contra = self.prev;
            self.f_contra = self.f_prev;
        }
    }

    pub fn best(&self) -> (f64, f64) {
        (self.best, self.f_best)
    }

    /// Current bracket as `(lo, f(lo), hi, f(hi))` with `lo <= hi`.
    pub fn bracket(&self) -> (f64, f64, f64, f64) {
        if self.best <= self.contra {
            (self.best, self.f_best, self.contra, self.f_contra)
        } else {
            (self.contra, self.f_contra, self.best, self.f_best)
        }
    }

    fn width_tol(&self, abs_tol: f64) -> f64 {
        2.0 * f64::EPSILON * self.best.abs() + 0.5 * abs_tol
    }

    /// True once the residual or the bracket half-width is small enough.
    pub fn done(&self, tol: &Tolerances) -> bool {
        self.f_best.abs() <= tol.residual_tol
            || 0.5 * (self.contra - self.best).abs() <= self.width_tol(tol.abs_tol)
    }

    /// Abscissa of the next evaluation.
    pub fn propose(&mut self, abs_tol: f64) -> f64 {
        let tol1 = self.width_tol(abs_tol);
        let half = 0.5 * (self.contra - self.best);
        if self.last_step.abs() >= tol1 && self.f_prev.abs() > self.f_best.abs() {
            let s = self.f_best / self.f_prev;
            let (mut p, mut q);
            if self.prev == self.contra {
                // secant
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
                let qq = self.f_prev / self.f_contra;
                let r = self.f_best / self.f_contra;
                p = s * (2.0 * half * qq * (qq - r) - (self.best - self.prev) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * half * q - (tol1 * q).abs()).min((self.last_step * q).abs()) {
                self.last_step = self.step;
                self.step = p / q;
            } else {
                self.step = half;
                self.last_step = half;
            }
        } else {
            self.step = half;
            self.last_step = half;
        }
        self.prev = self.best;
        self.f_prev = self.f_best;
        if self.step.abs() > tol1 {
            self.best + self.step
        } else {
            self.best + tol1.copysign(half)
        }
    }

    /// Feeds back `f(x)` for the abscissa returned by [`Brent::propose`].
    pub fn accept(&mut self, x: f64, fx: f64) {
        self.best = x;
        self.f_best = fx;
        self.normalize();
    }
}

/// Brent-style bracketed root search on `[lo, hi]`.
pub fn try_find_root_bracketed<F, E>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: &Tolerances,
) -> Result<RootResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    tol.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(NumericsError::InvalidInterval { lo, hi }.into());
    }
    let f_lo = checked(lo, f(lo)?)?;
    let f_hi = checked(hi, f(hi)?)?;
    let mut brent = Brent::new(lo, f_lo, hi, f_hi)?;
    for iteration in 0..=tol.max_iter {
        if brent.done(tol) {
            let (root, residual) = brent.best();
            return Ok(RootResult {
                root,
                residual,
                iterations: iteration,
                method_used: RootMethod::Bracketed,
            });
        }
        if iteration == tol.max_iter {
            break;
        }
        let x = brent.propose(tol.abs_tol);
        let fx = checked(x, f(x)?)?;
        brent.accept(x, fx);
    }
    Err(NumericsError::MaxIterExceeded {
        iterations: tol.max_iter,
        estimate: brent.best().0,
    }
    .into())
}

pub fn find_root_bracketed<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: &Tolerances,
) -> Result<RootResult, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    try_find_root_bracketed(|x| Ok::<_, NumericsError>(f(x)), lo, hi, tol)
}

/// Cells of a uniform `grid_n`-cell grid over `[a, b]` across which `f`
/// changes sign.
///
/// Exact zeros on the grid carry no sign: a change across one is reported
/// as a bracket from the last signed node before it to the first signed node
/// after it. Touching zeros (no change of sign) are not reported.
pub fn try_scan_sign_changes<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    grid_n: usize,
) -> Result<Vec<Interval>, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    if grid_n < 2 {
        return Err(NumericsError::InvalidTolerances("grid_n must be at least 2").into());
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NumericsError::InvalidInterval { lo: a, hi: b }.into());
    }
    let h = (b - a) / grid_n as f64;
    let node = |i: usize| if i == grid_n { b } else { a + h * i as f64 };

    let mut out = Vec::new();
    let mut last_signed: Option<(f64, bool)> = None;
    for i in 0..=grid_n {
        let x = node(i);
        let v = checked(x, f(x)?)?;
        if v == 0.0 {
            continue;
        }
        let positive = v > 0.0;
        if let Some((x_prev, was_positive)) = last_signed {
            if was_positive != positive {
                out.push(Interval { lo: x_prev, hi: x });
            }
        }
        last_signed = Some((x, positive));
    }
    Ok(out)
}

pub fn scan_sign_changes<F>(
    mut f: F,
    a: f64,
    b: f64,
    grid_n: usize,
) -> Result<Vec<Interval>, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    try_scan_sign_changes(|x| Ok::<_, NumericsError>(f(x)), a, b, grid_n)
}

const FLAT_DERIVATIVE: f64 = 1e-14;

/// Newton iteration for `f(x) = 0` from `x0`.
///
/// With a bracket, any step that would leave it (or a near-zero derivative)
/// is replaced by one bisection step, and the bracket is tightened after
/// every evaluation. Without one, those situations are fatal.
pub fn try_newton_solve<F, D, E>(
    mut f: F,
    mut fprime: D,
    x0: f64,
    bracket: Option<Interval>,
    tol: &Tolerances,
) -> Result<RootResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    D: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    tol.validate()?;
    let mut bounds = match bracket {
        Some(iv) => {
            let f_lo = checked(iv.lo, f(iv.lo)?)?;
            let f_hi = checked(iv.hi, f(iv.hi)?)?;
            if f_lo * f_hi > 0.0 {
                return Err(NumericsError::NoSignChange {
                    lo: iv.lo,
                    hi: iv.hi,
                    f_lo,
                    f_hi,
                }
                .into());
            }
            for (x, v) in [(iv.lo, f_lo), (iv.hi, f_hi)] {
                if v.abs() <= tol.residual_tol {
                    return Ok(RootResult {
                        root: x,
                        residual: v,
                        iterations: 0,
                        method_used: RootMethod::Newton,
                    });
                }
            }
            Some((iv.lo, iv.hi, f_lo > 0.0))
        }
        None => None,
    };

    let mut x = match bounds {
        Some((lo, hi, _)) if !(lo..=hi).contains(&x0) || !x0.is_finite() => 0.5 * (lo + hi),
        _ => x0,
    };
    let mut bisected = false;
    for iteration in 0..tol.max_iter {
        let fx = checked(x, f(x)?)?;
        if fx.abs() <= tol.residual_tol {
            return Ok(RootResult {
                root: x,
                residual: fx,
                iterations: iteration,
                method_used: if bisected {
                    RootMethod::NewtonWithBisectionFallback
                } else {
                    RootMethod::Newton
                },
            });
        }
        if let Some((lo, hi, lo_positive)) = bounds.as_mut() {
            if (fx > 0.0) == *lo_positive {
                *lo = x;
            } else {
                *hi = x;
            }
        }
        let dfx = fprime(x)?;
        let newton = if dfx.is_finite() && dfx.abs() >= FLAT_DERIVATIVE {
            Some(x - fx / dfx)
        } else {
            None
        };
        x = match (newton, bounds) {
            (Some(next), Some((lo, hi, _))) if lo < next && next < hi => next,
            (_, Some((lo, hi, _))) => {
                bisected = true;
                0.5 * (lo + hi)
            }
            (Some(next), None) if next.is_finite() => next,
            (_, None) => return Err(NumericsError::DivergedWithoutBracket { at: x }.into()),
        };
    }
    Err(NumericsError::MaxIterExceeded {
        iterations: tol.max_iter,
        estimate: x,
    }
    .into())
}

pub fn newton_solve<F, D>(
    mut f: F,
    mut fprime: D,
    x0: f64,
    bracket: Option<Interval>,
    tol: &Tolerances,
) -> Result<RootResult, NumericsError>
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    try_newton_solve(
        |x| Ok::<_, NumericsError>(f(x)),
        |x| Ok::<_, NumericsError>(fprime(x)),
        x0,
        bracket,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    // Independent reference: plain bisection.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let lo_positive = f(lo) > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn gauss_kronrod_constants_match_decimal_values() {
        assert_eq!(XGK[0], 0.991455371120812639206854697526329);
        assert_eq!(WGK[7], 0.209482141084727828012999174891714);
        assert_eq!(WG[3], 0.417959183673469387755102040816327);
        let kronrod_sum: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let gauss_sum: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((kronrod_sum - 2.0).abs() < 1e-15);
        assert!((gauss_sum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_polynomial_and_oscillatory_fixtures() {
        let r = integrate(|x| x * x, 0.0, 1.0, &tol()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        assert!(r.converged);

        // antiderivative sin x - x cos x
        let exact = {
            let anti = |x: f64| x.sin() - x * x.cos();
            anti(2.0 * PI) - anti(0.0)
        };
        let r = integrate(|x| x * x.sin(), 0.0, 2.0 * PI, &tol()).unwrap();
        assert!((r.value - exact).abs() < 1e-12, "{}", r.value);
        assert!((exact + 2.0 * PI).abs() < 1e-14);

        let r = integrate(|y| (y - 0.5 * y.sin()).powi(2), 0.0, 2.0 * PI, &tol()).unwrap();
        let want = 8.0 * PI.powi(3) / 3.0 + 2.25 * PI;
        assert!((r.value - want).abs() < 1e-10 * want);
        assert!((r.value - 89.75199).abs() < 1e-5);
    }

    #[test]
    fn converged_result_meets_its_target() {
        let t = tol();
        for (a, b) in [(0.0, 1.0), (0.0, 2.0 * PI), (1.0, 30.0)] {
            let r = integrate(|x| (x.sin() * 3.0).exp(), a, b, &t).unwrap();
            assert!(r.converged);
            assert!(r.error_estimate >= 0.0);
            assert!(r.error_estimate <= t.quadrature_target(r.value));
        }
    }

    #[test]
    fn degenerate_and_invalid_ranges() {
        let r = integrate(|x| x, 2.0, 2.0, &tol()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(integrate(|x| x, 2.0, 1.0, &tol()).is_err());
    }

    #[test]
    fn max_depth_returns_best_estimate() {
        let t = Tolerances {
            max_depth: 2,
            ..tol()
        };
        let r = integrate(|x| x.abs().sqrt(), -1.0, 1.0, &t).unwrap();
        assert!(!r.converged);
        assert!((r.value - 4.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn non_finite_integrand_aborts_with_location() {
        let err = integrate(|x| 1.0 / (x - 0.5), 0.0, 1.0, &tol());
        // 0.5 is the centre node of the first panel
        assert_eq!(
            err,
            Err(NumericsError::NonFiniteEvaluation {
                at: 0.5,
                value: f64::INFINITY
            })
        );
    }

    #[test]
    fn integration_is_reproducible() {
        let f = |x: f64| (x * 7.0).sin() * x.exp();
        let a = integrate(f, 0.0, 3.0, &tol()).unwrap();
        let b = integrate(f, 0.0, 3.0, &tol()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn brent_finds_sqrt_two_and_arccos() {
        let r = find_root_bracketed(|x| x * x - 2.0, 1.0, 2.0, &tol()).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.method_used, RootMethod::Bracketed);

        let g = |x: f64| 1.0 / PI + x.cos();
        let r = find_root_bracketed(g, 1.5, 2.5, &tol()).unwrap();
        let oracle = bisect(g, 1.5, 2.5);
        assert!((r.root - oracle).abs() < 1e-12);
        assert!((r.root - 1.894742).abs() < 1e-6);
        assert!((r.root - (-1.0 / PI).acos()).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_missing_sign_change() {
        let err = find_root_bracketed(|y| 1.0 - 0.5 * y.cos(), 0.0, 2.0 * PI, &tol()).unwrap_err();
        assert!(matches!(err, NumericsError::NoSignChange { .. }));
    }

    #[test]
    fn brent_reports_iteration_cap() {
        let t = Tolerances {
            max_iter: 2,
            ..tol()
        };
        let err = find_root_bracketed(|x| x.powi(3) - 0.3, 0.0, 10.0, &t).unwrap_err();
        assert!(matches!(
            err,
            NumericsError::MaxIterExceeded { iterations: 2, .. }
        ));
    }

    #[test]
    fn brent_exact_endpoint_root() {
        let r = find_root_bracketed(|x| x - 1.0, 1.0, 2.0, &tol()).unwrap();
        assert_eq!(r.root, 1.0);
    }

    #[test]
    fn scan_counts_extrema_of_sine_ramp() {
        let cells = scan_sign_changes(|x| 1.0 / PI + x.cos(), 0.0, 2.0 * PI, 1024).unwrap();
        assert_eq!(cells.len(), 2);
        assert!(cells[0].contains(1.8947) && cells[1].contains(4.3884));
        assert!(cells.iter().all(|c| c.width() <= 2.0 * PI / 1024.0 + 1e-15));

        assert!(scan_sign_changes(|_| 1.0, 0.0, 1.0, 1024)
            .unwrap()
            .is_empty());
        assert!(
            scan_sign_changes(|y| 1.0 - 0.9 * y.cos(), 0.0, 2.0 * PI, 1024)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn scan_treats_exact_grid_zeros() {
        // crossing exactly on node 2 of [-1, 1] with 4 cells: bracket spans it
        let cells = scan_sign_changes(|x| x, -1.0, 1.0, 4).unwrap();
        assert_eq!(cells, vec![Interval { lo: -0.5, hi: 0.5 }]);
        // touching zero is not a sign change
        assert!(scan_sign_changes(|x| x * x, -1.0, 1.0, 4)
            .unwrap()
            .is_empty());
        // zero at the left end: nothing to change from
        assert!(scan_sign_changes(|x| x, 0.0, 1.0, 4).unwrap().is_empty());
        assert!(scan_sign_changes(|_| f64::NAN, 0.0, 1.0, 4).is_err());
        assert!(scan_sign_changes(|x| x, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn newton_kepler_fixtures() {
        let kepler = |m: f64| move |y: f64| y - 0.5 * y.sin() - m;
        let dk = |y: f64| 1.0 - 0.5 * y.cos();

        let r = newton_solve(kepler(1.0), dk, 1.0, None, &tol()).unwrap();
        let oracle = bisect(kepler(1.0), 1.0, 2.0);
        assert!((r.root - oracle).abs() < 1e-12);
        assert!((r.root - 1.4987).abs() < 1e-4);
        assert!(r.residual.abs() <= 1e-12);

        let r = newton_solve(kepler(0.0), dk, 0.0, None, &tol()).unwrap();
        assert_eq!(r.root, 0.0);
        let r = newton_solve(kepler(2.0 * PI), dk, 6.0, None, &tol()).unwrap();
        assert!((r.root - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn newton_falls_back_to_bisection_inside_bracket() {
        // a flat start forces a bisection step
        let bracket = Interval::new(-1.0, 2.0).unwrap();
        let r = newton_solve(
            |x| x.powi(3) - 1.0,
            |x| 3.0 * x * x,
            0.0,
            Some(bracket),
            &tol(),
        )
        .unwrap();
        assert!((r.root - 1.0).abs() < 1e-12);
        assert_eq!(r.method_used, RootMethod::NewtonWithBisectionFallback);

        // without a bracket the same start diverges
        let err =
            newton_solve(|x| x.powi(3) - 1.0, |x| 3.0 * x * x, 0.0, None, &tol()).unwrap_err();
        assert!(matches!(err, NumericsError::DivergedWithoutBracket { .. }));

        let bad = Interval::new(2.0, 3.0).unwrap();
        assert!(matches!(
            newton_solve(|x| x - 1.0, |_| 1.0, 2.5, Some(bad), &tol()),
            Err(NumericsError::NoSignChange { .. })
        ));
    }

    #[test]
    fn newton_iteration_cap() {
        let t = Tolerances {
            max_iter: 3,
            ..tol()
        };
        // atan overshoots from far away and never settles without a bracket
        let err = newton_solve(|x| x.atan(), |x| 1.0 / (1.0 + x * x), 1.5, None, &t).unwrap_err();
        assert!(matches!(err, NumericsError::MaxIterExceeded { .. }));
    }

    #[test]
    fn tolerances_validation() {
        assert!(tol().validate().is_ok());
        assert!(Tolerances {
            abs_tol: 0.0,
            ..tol()
        }
        .validate()
        .is_err());
        assert!(Tolerances {
            rel_tol: -1.0,
            ..tol()
        }
        .validate()
        .is_err());
        assert!(Tolerances {
            max_depth: 0,
            ..tol()
        }
        .validate()
        .is_err());
        assert!(Tolerances {
            residual_tol: f64::NAN,
            ..tol()
        }
        .validate()
        .is_err());
    }
}

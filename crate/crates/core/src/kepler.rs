//! The curve family `x = y - ε sin y`, `0 < ε < 1`.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Bindings, Curve, ExprError};
use crate::numerics::{newton_solve, Interval, NumericsError, RootResult, Tolerances};

/// Largest accepted eccentricity; at 1 the derivative touches zero.
pub const MAX_ECCENTRICITY: f64 = 1.0 - 1e-6;

pub const SOURCE: &str = "y - eps*sin(y)";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeplerError {
    #[error("eccentricity {0} outside (0, {MAX_ECCENTRICITY}]")]
    Eccentricity(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeplerCurve {
    eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceVolumes {
    /// `π ∫ g(y)² dy` over `[0, 2π]`.
    pub v_y: f64,
    /// `π ∫ f(x)² dx` over `[0, 2π]`, `f = g⁻¹`.
    pub v_x: f64,
}

impl KeplerCurve {
    pub fn new(eps: f64) -> Result<Self, KeplerError> {
        if eps > 0.0 && eps <= MAX_ECCENTRICITY {
            Ok(KeplerCurve { eps })
        } else {
            Err(KeplerError::Eccentricity(eps))
        }
    }

    pub fn eccentricity(&self) -> f64 {
        self.eps
    }

    pub fn forward(&self, y: f64) -> f64 {
        y - self.eps * y.sin()
    }

    pub fn inverse(&self, x: f64, tol: &Tolerances) -> Result<RootResult, KeplerError> {
        let eps = self.eps;
        let bracket = Interval::new(x - eps, x + eps)?;
        Ok(newton_solve(
            |y| y - eps * y.sin() - x,
            |y| 1.0 - eps * y.cos(),
            x + eps * x.sin(),
            Some(bracket),
            tol,
        )?)
    }

    /// `g` as a curve in `y`.
    pub fn curve(&self) -> Curve {
        Curve::parse(SOURCE, "y", &Bindings::new().with("eps", self.eps))
            .expect("fixed source parses")
    }

    /// Volumes over `y ∈ [0, 2π]`.
    pub fn reference_volumes(&self) -> ReferenceVolumes {
        let (pi2, e) = (PI * PI, self.eps);
        let base = 8.0 * pi2 * pi2 / 3.0;
        ReferenceVolumes {
            v_y: base + (4.0 * e + e * e) * pi2,
            v_x: base - 4.0 * e * pi2,
        }
    }
}

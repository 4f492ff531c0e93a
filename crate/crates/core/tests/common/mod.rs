#![allow(dead_code)]

use rand::Rng;
use revolve_core::expr::{Bindings, Curve};
use revolve_core::numerics::Interval;

/// `s*(k0*x + k2*(x - r)^3/3) + c`: strictly monotone with `|f'| >= k0`,
/// nonnegative on `span`.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    pub curve: Curve,
    pub params: Bindings,
    pub span: Interval,
    pub increasing: bool,
}

pub const CUBIC: &str = "s*(k0*x + k2*(x - r)^3/3) + c";

pub fn monotone_cubic<R: Rng>(rng: &mut R, increasing: bool) -> MonotoneCubic {
    let a = rng.gen_range(0.1..4.5);
    let b = rng.gen_range(a + 0.3..=5.0);
    let k0 = rng.gen_range(0.2..3.0);
    let k2 = rng.gen_range(0.0..2.0);
    let r = rng.gen_range(0.1..5.0);
    let s = if increasing { 1.0 } else { -1.0 };
    let raw = |x: f64| s * (k0 * x + k2 * (x - r).powi(3) / 3.0);
    let low = raw(a).min(raw(b));
    let c = rng.gen_range(0.0..2.0) - low;
    let params = Bindings::new()
        .with("s", s)
        .with("k0", k0)
        .with("k2", k2)
        .with("r", r)
        .with("c", c);
    MonotoneCubic {
        curve: Curve::parse(CUBIC, "x", &params).unwrap(),
        params,
        span: Interval::new(a, b).unwrap(),
        increasing,
    }
}

/// `c + m*x/pi + a1*sin(x) + b1*cos(x) + a2*sin(2*x) + b2*cos(2*x)`.
pub const TRIG: &str = "c + m*x/pi + a1*sin(x) + b1*cos(x) + a2*sin(2*x) + b2*cos(2*x)";

pub fn trig_polynomial<R: Rng>(rng: &mut R) -> Curve {
    let params = Bindings::new()
        .with("c", rng.gen_range(0.0..4.0))
        .with("m", rng.gen_range(-3.0..3.0))
        .with("a1", rng.gen_range(-1.5..1.5))
        .with("b1", rng.gen_range(-1.0..1.0))
        .with("a2", rng.gen_range(-0.8..0.8))
        .with("b2", rng.gen_range(-0.5..0.5));
    Curve::parse(TRIG, "x", &params).unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

//! Functionals that grow with the right endpoint, and the resulting
//! subinterval monotonicity of the Hermite–Hadamard gaps.

use serde::Serialize;

use super::{ensure_convex, ensure_nonnegative, OrderedPair, Target, CONVEXITY_SLACK};
use crate::error::{Error, Result};
use crate::expr::FunctionSpec;
use crate::quadrature::{check_monotone, integrate, DEFAULT_POINTS};
use crate::types::{Interval, WeightSpec};

fn prefix(interval: &Interval, x: f64) -> Result<Interval> {
    if !interval.contains(x) {
        return Err(Error::PointOutsideInterval {
            x,
            a: interval.a(),
            b: interval.b(),
        });
    }
    Interval::new(interval.a(), x)
}

/// Both functionals need `f' >= 0`; for convex `f` that is `f'(a) >= 0`.
/// Without it `f = -t`, `g = t` on `[0, 1]` gives `h2(x) = -x^3/12`.
fn ensure_nondecreasing(f: &FunctionSpec, interval: &Interval) -> Result<()> {
    let slope = f.first(interval.a())?;
    if slope >= -CONVEXITY_SLACK {
        Ok(())
    } else {
        Err(Error::DecreasingFunction { slope })
    }
}

/// `∫_a^x g` and `∫_a^x fg`.
fn prefix_integrals(
    f: &FunctionSpec,
    g: &WeightSpec,
    sub: &Interval,
    tol: f64,
) -> Result<(f64, f64, bool)> {
    let mass = integrate(g, sub, tol)?;
    let fg = integrate(&|t: f64| Ok(f.eval(t)? * g.function.eval(t)?), sub, tol)?;
    Ok((mass.value, fg.value, mass.converged && fg.converged))
}

/// `h1(x) = ((f(a)+f(x))/2) ∫_a^x g - ∫_a^x fg` for nonincreasing `g` and nondecreasing `f`.
///
/// Nondecreasing in `x` with `h1(a) = 0`.
pub fn h1_functional(
    f: &FunctionSpec,
    g: &WeightSpec,
    interval: &Interval,
    x: f64,
    tol: f64,
) -> Result<Target> {
    let sub = prefix(interval, x)?;
    if !check_monotone(g, interval, DEFAULT_POINTS)?.is_nonincreasing() {
        return Err(Error::MonotonicityViolated {
            expected: "nonincreasing",
        });
    }
    ensure_nonnegative(g, interval)?;
    ensure_convex(f, interval)?;
    ensure_nondecreasing(f, interval)?;
    if sub.is_degenerate() {
        return Ok(Target {
            value: 0.0,
            converged: true,
        });
    }
    let (mass, fg, converged) = prefix_integrals(f, g, &sub, tol)?;
    let ends = 0.5 * (f.eval(interval.a())? + f.eval(x)?);
    Ok(Target {
        value: ends * mass - fg,
        converged,
    })
}

/// `h2(x) = ∫_a^x fg - f((a+x)/2) ∫_a^x g` for nondecreasing `g` and nondecreasing `f`.
///
/// Nondecreasing in `x` with `h2(a) = 0`.
pub fn h2_functional(
    f: &FunctionSpec,
    g: &WeightSpec,
    interval: &Interval,
    x: f64,
    tol: f64,
) -> Result<Target> {
    let sub = prefix(interval, x)?;
    if !check_monotone(g, interval, DEFAULT_POINTS)?.is_nondecreasing() {
        return Err(Error::MonotonicityViolated {
            expected: "nondecreasing",
        });
    }
    ensure_nonnegative(g, interval)?;
    ensure_convex(f, interval)?;
    ensure_nondecreasing(f, interval)?;
    if sub.is_degenerate() {
        return Ok(Target {
            value: 0.0,
            converged: true,
        });
    }
    let (mass, fg, converged) = prefix_integrals(f, g, &sub, tol)?;
    Ok(Target {
        value: fg - f.eval(sub.midpoint())? * mass,
        converged,
    })
}

/// Full-interval gaps against the scaled gaps on `[a, x]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapMonotone {
    /// Trapezoid gap on `[a, b]` against `((x-a)/(b-a))` times the one on `[a, x]`.
    pub trapezoid: OrderedPair,
    /// The same for the midpoint gap.
    pub midpoint: OrderedPair,
    pub converged: bool,
}

pub fn hh_gap_monotone(
    f: &FunctionSpec,
    interval: &Interval,
    x: f64,
    tol: f64,
) -> Result<GapMonotone> {
    let (a, b) = (interval.a(), interval.b());
    if !(a < x && x < b) {
        return Err(Error::PointOutsideInterval { x, a, b });
    }
    ensure_convex(f, interval)?;
    let sub = Interval::new(a, x)?;
    let full = integrate(f, interval, tol)?;
    let part = integrate(f, &sub, tol)?;
    let (w, wx) = (interval.width(), sub.width());
    let (fa, fb, fx) = (f.eval(a)?, f.eval(b)?, f.eval(x)?);
    Ok(GapMonotone {
        trapezoid: OrderedPair {
            first: 0.5 * (fa + fb) - full.value / w,
            second: (0.5 * wx * (fa + fx) - part.value) / w,
        },
        midpoint: OrderedPair {
            first: full.value / w - f.eval(interval.midpoint())?,
            second: (part.value - wx * f.eval(sub.midpoint())?) / w,
        },
        converged: full.converged && part.converged,
    })
}

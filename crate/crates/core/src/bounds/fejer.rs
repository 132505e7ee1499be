//! Hermite–Hadamard and Fejér enclosures and their weighted gap estimates.

use serde::Serialize;

use super::{ensure_convex, ensure_nonnegative, ensure_symmetric, ordered, Certified, GapKind};
use crate::error::{Error, Result};
use crate::expr::FunctionSpec;
use crate::quadrature::{integrate, moment_ab, moment_center, DEFAULT_POINTS};
use crate::types::{CurvatureBounds, Interval, NodeWeights, Rule, WeightSpec};

/// `f((a+b)/2) <= (1/(b-a)) ∫f <= (f(a)+f(b))/2`.
pub fn hermite_hadamard(f: &FunctionSpec, interval: &Interval, tol: f64) -> Result<Certified> {
    ensure_convex(f, interval)?;
    let target = "(1/(b-a)) ∫f";
    if interval.is_degenerate() {
        let v = f.eval(interval.a())?;
        return Ok(Certified {
            enclosure: ordered(v, v, target, Rule::HermiteHadamard)?,
            target: v,
            converged: true,
        });
    }
    let lower = f.eval(interval.midpoint())?;
    let upper = 0.5 * (f.eval(interval.a())? + f.eval(interval.b())?);
    let q = integrate(f, interval, tol)?;
    Ok(Certified {
        enclosure: ordered(lower, upper, target, Rule::HermiteHadamard)?,
        target: q.value / interval.width(),
        converged: q.converged,
    })
}

fn check_weight(g: &WeightSpec, interval: &Interval) -> Result<()> {
    ensure_symmetric(g, interval.midpoint(), interval)?;
    ensure_nonnegative(g, interval)
}

/// `f((a+b)/2) ∫g <= ∫fg <= ((f(a)+f(b))/2) ∫g` for `g >= 0` symmetric about the midpoint.
pub fn fejer(f: &FunctionSpec, g: &WeightSpec, interval: &Interval, tol: f64) -> Result<Certified> {
    check_weight(g, interval)?;
    ensure_convex(f, interval)?;
    let mass = integrate(g, interval, tol)?;
    let fg = integrate(
        &|t: f64| Ok(f.eval(t)? * g.function.eval(t)?),
        interval,
        tol,
    )?;
    let lower = f.eval(interval.midpoint())? * mass.value;
    let upper = 0.5 * (f.eval(interval.a())? + f.eval(interval.b())?) * mass.value;
    Ok(Certified {
        enclosure: ordered(lower, upper, "∫fg", Rule::Fejer)?,
        target: fg.value,
        converged: mass.converged && fg.converged,
    })
}

/// The integrals shared by the weighted gap estimates.
struct WeightedParts {
    mass: f64,
    fg: f64,
    ends: f64,
    centre: f64,
    converged: bool,
}

fn weighted_parts(
    f: &FunctionSpec,
    g: &WeightSpec,
    interval: &Interval,
    tol: f64,
) -> Result<WeightedParts> {
    let mass = integrate(g, interval, tol)?;
    let fg = integrate(
        &|t: f64| Ok(f.eval(t)? * g.function.eval(t)?),
        interval,
        tol,
    )?;
    Ok(WeightedParts {
        mass: mass.value,
        fg: fg.value,
        ends: 0.5 * (f.eval(interval.a())? + f.eval(interval.b())?),
        centre: f.eval(interval.midpoint())?,
        converged: mass.converged && fg.converged,
    })
}

/// `(m/2, M/2) · ∫(t-a)(b-t)g(t)dt` around `((f(a)+f(b))/2) ∫g - ∫fg`.
pub fn fejer_trapezoid_gap_bounds(
    f: &FunctionSpec,
    g: &WeightSpec,
    c: &CurvatureBounds,
    interval: &Interval,
    tol: f64,
) -> Result<Certified> {
    check_weight(g, interval)?;
    let moment = moment_ab(g, interval, tol)?;
    let parts = weighted_parts(f, g, interval, tol)?;
    let k = moment.value.max(0.0) / 2.0;
    Ok(Certified {
        enclosure: c.scaled(
            k,
            Rule::FejerTrapezoidGap,
            GapKind::WeightedTrapezoidGap.describe(),
        ),
        target: parts.ends * parts.mass - parts.fg,
        converged: moment.converged && parts.converged,
    })
}

/// `(m/8, M/8) · ∫(2t-a-b)^2 g(t)dt` around `∫fg - f((a+b)/2) ∫g`.
pub fn fejer_midpoint_gap_bounds(
    f: &FunctionSpec,
    g: &WeightSpec,
    c: &CurvatureBounds,
    interval: &Interval,
    tol: f64,
) -> Result<Certified> {
    check_weight(g, interval)?;
    let moment = moment_center(g, interval, tol)?;
    let parts = weighted_parts(f, g, interval, tol)?;
    let k = moment.value.max(0.0) / 8.0;
    Ok(Certified {
        enclosure: c.scaled(
            k,
            Rule::FejerMidpointGap,
            GapKind::WeightedMidpointGap.describe(),
        ),
        target: parts.fg - parts.centre * parts.mass,
        converged: moment.converged && parts.converged,
    })
}

/// A chain whose contract is `left >= middle >= right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triple {
    pub left: f64,
    pub middle: f64,
    pub right: f64,
}

impl Triple {
    /// How far the chain falls short of `left >= middle >= right`.
    pub fn shortfall(&self) -> f64 {
        (self.middle - self.left)
            .max(self.right - self.middle)
            .max(0.0)
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.shortfall() <= slack
    }
}

/// Chains obtained by applying the weighted trapezoid estimate to `1 - g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplementChains {
    /// `(b-a)(T - m(b-a)^2/12) >= F_g - (m/2) μ(g) >= 0`.
    pub lower: Triple,
    /// `(b-a)(M(b-a)^2/12 - T) >= (M/2) μ(g) - F_g >= 0`.
    pub upper: Triple,
    pub converged: bool,
}

/// `T` is the trapezoid gap of `f`, `F_g = ((f(a)+f(b))/2) ∫g - ∫fg` and
/// `μ(g) = ∫(t-a)(b-t)g(t)dt`. Requires `0 <= g <= 1`.
pub fn complement_weight_chains(
    f: &FunctionSpec,
    g: &WeightSpec,
    c: &CurvatureBounds,
    interval: &Interval,
    tol: f64,
) -> Result<ComplementChains> {
    ensure_symmetric(g, interval.midpoint(), interval)?;
    for x in interval.uniform_points(DEFAULT_POINTS) {
        let value = g.eval(x)?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::RangeViolated { x, value });
        }
    }
    let w = interval.width();
    let full = integrate(f, interval, tol)?;
    let moment = moment_ab(g, interval, tol)?;
    let parts = weighted_parts(f, g, interval, tol)?;
    // (b-a) T = (b-a)(f(a)+f(b))/2 - ∫f
    let scaled_gap = w * parts.ends - full.value;
    let weighted_gap = parts.ends * parts.mass - parts.fg;
    let w3 = w * w * w / 12.0;
    Ok(ComplementChains {
        lower: Triple {
            left: scaled_gap - c.m() * w3,
            middle: weighted_gap - c.m() / 2.0 * moment.value,
            right: 0.0,
        },
        upper: Triple {
            left: c.big_m() * w3 - scaled_gap,
            middle: c.big_m() / 2.0 * moment.value - weighted_gap,
            right: 0.0,
        },
        converged: full.converged && moment.converged && parts.converged,
    })
}

/// Weighted enclosure on the window `[A - y, A + y]` around the node
/// `A = (pa + qb)/(p + q)`:
/// `f(A) ∫g <= ∫fg <= ((p f(a) + q f(b))/(p + q)) ∫g`.
///
/// Holds for every convex `f` exactly when `0 < y <= (b-a) min(p,q)/(p+q)`;
/// larger windows are rejected before anything is evaluated.
pub fn vasic_lackovic(
    f: &FunctionSpec,
    g: &WeightSpec,
    pq: NodeWeights,
    interval: &Interval,
    y: f64,
    tol: f64,
) -> Result<Certified> {
    let bound = pq.max_half_width(interval);
    if !(y > 0.0 && y <= bound) {
        return Err(Error::AdmissibilityViolated { y, bound });
    }
    let node = pq.node(interval);
    let window = Interval::new((node - y).max(interval.a()), (node + y).min(interval.b()))?;
    ensure_symmetric(g, node, &window)?;
    ensure_nonnegative(g, &window)?;
    ensure_convex(f, interval)?;
    let mass = integrate(g, &window, tol)?;
    let fg = integrate(&|t: f64| Ok(f.eval(t)? * g.function.eval(t)?), &window, tol)?;
    let (p, q) = (pq.p(), pq.q());
    let chord = (p * f.eval(interval.a())? + q * f.eval(interval.b())?) / (p + q);
    Ok(Certified {
        enclosure: ordered(
            f.eval(node)? * mass.value,
            chord * mass.value,
            "∫_{A-y}^{A+y} fg",
            Rule::VasicLackovic,
        )?,
        target: fg.value,
        converged: mass.converged && fg.converged,
    })
}

//! Enclosures that depend only on curvature bounds `m <= f'' <= M`.

use serde::Serialize;

use super::{midpoint_gap, trapezoid_gap, Certified, GapKind, OrderedPair};
use crate::error::{Error, Result};
use crate::expr::FunctionSpec;
use crate::types::{CurvatureBounds, Enclosure, Interval, Lambda, Rule};

/// `(m, M) · λ(1-λ)(a-b)^2 / 2` around the chord gap.
pub fn chord_gap_bounds(c: &CurvatureBounds, interval: &Interval, lambda: Lambda) -> Enclosure {
    let l = lambda.value();
    let k = l * (1.0 - l) * interval.width().powi(2) / 2.0;
    c.scaled(k, Rule::ChordGap, GapKind::ChordGap.describe())
}

/// `(m, M) · (1-2λ)^2 (a-b)^2 / 8` around the symmetric-pair gap.
pub fn symmetric_pair_gap_bounds(
    c: &CurvatureBounds,
    interval: &Interval,
    lambda: Lambda,
) -> Enclosure {
    let t = 1.0 - 2.0 * lambda.value();
    let k = t * t * interval.width().powi(2) / 8.0;
    c.scaled(
        k,
        Rule::SymmetricPairGap,
        GapKind::SymmetricPairGap.describe(),
    )
}

/// `(m, M) · (b-a)^2 / 24` around the midpoint gap.
pub fn hh_midpoint_gap_bounds(c: &CurvatureBounds, interval: &Interval) -> Enclosure {
    let k = interval.width().powi(2) / 24.0;
    c.scaled(k, Rule::MidpointGap, GapKind::MidpointGap.describe())
}

/// `(m, M) · (b-a)^2 / 12` around the trapezoid gap.
pub fn hh_trapezoid_gap_bounds(c: &CurvatureBounds, interval: &Interval) -> Enclosure {
    let k = interval.width().powi(2) / 12.0;
    c.scaled(k, Rule::TrapezoidGap, GapKind::TrapezoidGap.describe())
}

/// The two enclosures obtained by splitting `[a, b]` at its midpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bisection {
    /// `(m, M)(b-a)^2/48` around `((f(a)+f(b))/2 + f((a+b)/2))/2 - (1/(b-a))∫f`.
    pub trapezoid: Certified,
    /// `(m, M)(b-a)^2/96` around `(1/(b-a))∫f - (f((3a+b)/4) + f((a+3b)/4))/2`.
    pub midpoint: Certified,
    /// The second enclosure with `m` on both sides; only valid when `m = M`.
    pub midpoint_m_only: Enclosure,
}

impl Bisection {
    /// Whether the oracle target also fits the `(m, m)` variant.
    pub fn m_only_holds(&self, slack: f64) -> bool {
        self.midpoint_m_only.contains(self.midpoint.target, slack)
    }
}

pub fn bisection_bounds(
    f: &FunctionSpec,
    c: &CurvatureBounds,
    interval: &Interval,
    tol: f64,
) -> Result<Bisection> {
    let (a, b) = (interval.a(), interval.b());
    let w2 = interval.width().powi(2);
    let trap = trapezoid_gap(f, interval, tol)?;
    let (trap_target, mid_target) = if interval.is_degenerate() {
        (0.0, 0.0)
    } else {
        // both targets are averages of the half-interval gaps
        let centre = f.eval(interval.midpoint())?;
        let ends = 0.5 * (f.eval(a)? + f.eval(b)?);
        let mean = ends - trap.value;
        let quarters = 0.5 * (f.eval((3.0 * a + b) / 4.0)? + f.eval((a + 3.0 * b) / 4.0)?);
        (0.5 * (ends + centre) - mean, mean - quarters)
    };
    let converged = trap.converged;
    let k96 = w2 / 96.0;
    Ok(Bisection {
        trapezoid: Certified {
            enclosure: c.scaled(
                w2 / 48.0,
                Rule::BisectionTrapezoid,
                "((f(a)+f(b))/2 + f((a+b)/2))/2 - (1/(b-a)) ∫f",
            ),
            target: trap_target,
            converged,
        },
        midpoint: Certified {
            enclosure: c.scaled(
                k96,
                Rule::BisectionMidpoint,
                "(1/(b-a)) ∫f - (f((3a+b)/4) + f((a+3b)/4))/2",
            ),
            target: mid_target,
            converged,
        },
        midpoint_m_only: Enclosure {
            lower: c.m() * k96,
            upper: c.m() * k96,
            target: "(1/(b-a)) ∫f - (f((3a+b)/4) + f((a+3b)/4))/2".to_owned(),
            rule: Rule::BisectionMidpoint,
        },
    })
}

/// Midpoint-gap chains sharpened by the curvature bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinedChains {
    /// `(G(b) - m(b-a)^2/24, s (G(x) - m(x-a)^2/24))`.
    pub lower: OrderedPair,
    /// `(M(b-a)^2/8 - G(b), s (M(x-a)^2/8 - G(x)))`.
    pub upper: OrderedPair,
    pub converged: bool,
}

/// `G(t)` is the midpoint gap on `[a, t]` and `s = (x-a)/(b-a)`. The same
/// global `(m, M)` is used on `[a, b]` and on `[a, x]`.
pub fn refined_gap_chains(
    f: &FunctionSpec,
    c: &CurvatureBounds,
    interval: &Interval,
    x: f64,
    tol: f64,
) -> Result<RefinedChains> {
    let (a, b) = (interval.a(), interval.b());
    if !(a < x && x < b) {
        return Err(Error::PointOutsideInterval { x, a, b });
    }
    super::ensure_convex(f, interval)?;
    let sub = Interval::new(a, x)?;
    let gb = midpoint_gap(f, interval, tol)?;
    let gx = midpoint_gap(f, &sub, tol)?;
    let s = (x - a) / (b - a);
    let (wb, wx) = (interval.width().powi(2), sub.width().powi(2));
    Ok(RefinedChains {
        lower: OrderedPair {
            first: gb.value - c.m() * wb / 24.0,
            second: s * (gx.value - c.m() * wx / 24.0),
        },
        upper: OrderedPair {
            first: c.big_m() * wb / 8.0 - gb.value,
            second: s * (c.big_m() * wx / 8.0 - gx.value),
        },
        converged: gb.converged && gx.converged,
    })
}

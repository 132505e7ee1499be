//! The inequality engine.
//!
//! Every operation returns either a bare [`Enclosure`] built from closed
//! forms in `(m, M)` or a [`Certified`] value that also carries the target
//! quantity computed by the quadrature oracle. Integrals of `g` that appear
//! inside a bound (moments, `∫g`) come from the oracle as well.

mod curvature;
mod fejer;
mod monotone;

use serde::Serialize;

pub use curvature::{
    bisection_bounds, chord_gap_bounds, hh_midpoint_gap_bounds, hh_trapezoid_gap_bounds,
    refined_gap_chains, symmetric_pair_gap_bounds, Bisection, RefinedChains,
};
pub use fejer::{
    complement_weight_chains, fejer, fejer_midpoint_gap_bounds, fejer_trapezoid_gap_bounds,
    hermite_hadamard, vasic_lackovic, ComplementChains, Triple,
};
pub use monotone::{h1_functional, h2_functional, hh_gap_monotone, GapMonotone};

use crate::error::{Error, Result};
use crate::expr::FunctionSpec;
use crate::quadrature::{self, Integrand, DEFAULT_POINTS, SYMMETRY_TOL};
use crate::types::{Enclosure, Interval, Lambda, Rule};

/// `f''` may dip this far below zero at a sample before `f` counts as non-convex.
pub const CONVEXITY_SLACK: f64 = 1e-9;

/// The gap quantities bracketed by the curvature-based rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GapKind {
    TrapezoidGap,
    MidpointGap,
    ChordGap,
    SymmetricPairGap,
    WeightedTrapezoidGap,
    WeightedMidpointGap,
}

impl GapKind {
    pub fn rule(self) -> Rule {
        match self {
            GapKind::TrapezoidGap => Rule::TrapezoidGap,
            GapKind::MidpointGap => Rule::MidpointGap,
            GapKind::ChordGap => Rule::ChordGap,
            GapKind::SymmetricPairGap => Rule::SymmetricPairGap,
            GapKind::WeightedTrapezoidGap => Rule::FejerTrapezoidGap,
            GapKind::WeightedMidpointGap => Rule::FejerMidpointGap,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            GapKind::TrapezoidGap => "(f(a)+f(b))/2 - (1/(b-a)) ∫f",
            GapKind::MidpointGap => "(1/(b-a)) ∫f - f((a+b)/2)",
            GapKind::ChordGap => "λf(a) + (1-λ)f(b) - f(λa + (1-λ)b)",
            GapKind::SymmetricPairGap => "(f(λa+(1-λ)b) + f((1-λ)a+λb))/2 - f((a+b)/2)",
            GapKind::WeightedTrapezoidGap => "((f(a)+f(b))/2) ∫g - ∫fg",
            GapKind::WeightedMidpointGap => "∫fg - f((a+b)/2) ∫g",
        }
    }
}

/// An enclosure together with the oracle's value of its target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certified {
    pub enclosure: Enclosure,
    pub target: f64,
    /// Every oracle integral behind the bound and the target converged.
    pub converged: bool,
}

impl Certified {
    pub fn contains(&self, slack: f64) -> bool {
        self.enclosure.contains(self.target, slack)
    }
}

/// A value from the oracle plus its convergence flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Target {
    pub value: f64,
    pub converged: bool,
}

/// A pair whose contract is `first >= second >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderedPair {
    pub first: f64,
    pub second: f64,
}

impl OrderedPair {
    /// How far the pair falls short of `first >= second >= 0`.
    pub fn shortfall(&self) -> f64 {
        (self.second - self.first).max(-self.second).max(0.0)
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.shortfall() <= slack
    }
}

/// Chord gap `λ f(a) + (1-λ) f(b) - f(λa + (1-λ)b)` by direct evaluation.
pub fn chord_gap(f: &FunctionSpec, interval: &Interval, lambda: Lambda) -> Result<f64> {
    let (a, b, l) = (interval.a(), interval.b(), lambda.value());
    Ok(l * f.eval(a)? + (1.0 - l) * f.eval(b)? - f.eval(l * a + (1.0 - l) * b)?)
}

/// `(f(λa+(1-λ)b) + f((1-λ)a+λb))/2 - f((a+b)/2)` by direct evaluation.
pub fn symmetric_pair_gap(f: &FunctionSpec, interval: &Interval, lambda: Lambda) -> Result<f64> {
    let (a, b, l) = (interval.a(), interval.b(), lambda.value());
    let pair = 0.5 * (f.eval(l * a + (1.0 - l) * b)? + f.eval((1.0 - l) * a + l * b)?);
    Ok(pair - f.eval(interval.midpoint())?)
}

/// `(f(a)+f(b))/2 - (1/(b-a)) ∫f`, zero on a degenerate interval.
pub fn trapezoid_gap(f: &FunctionSpec, interval: &Interval, tol: f64) -> Result<Target> {
    if interval.is_degenerate() {
        return Ok(Target {
            value: 0.0,
            converged: true,
        });
    }
    let q = quadrature::integrate(f, interval, tol)?;
    let ends = 0.5 * (f.eval(interval.a())? + f.eval(interval.b())?);
    Ok(Target {
        value: ends - q.value / interval.width(),
        converged: q.converged,
    })
}

/// `(1/(b-a)) ∫f - f((a+b)/2)`, zero on a degenerate interval.
pub fn midpoint_gap(f: &FunctionSpec, interval: &Interval, tol: f64) -> Result<Target> {
    if interval.is_degenerate() {
        return Ok(Target {
            value: 0.0,
            converged: true,
        });
    }
    let q = quadrature::integrate(f, interval, tol)?;
    Ok(Target {
        value: q.value / interval.width() - f.eval(interval.midpoint())?,
        converged: q.converged,
    })
}

/// Samples `f''` at 101 points and rejects values below `-1e-9`.
pub fn ensure_convex(f: &FunctionSpec, interval: &Interval) -> Result<()> {
    for x in interval.uniform_points(DEFAULT_POINTS) {
        let value = f.second(x)?;
        if !(value >= -CONVEXITY_SLACK) {
            return Err(Error::ConvexityViolated { x, value });
        }
    }
    Ok(())
}

pub(crate) fn ensure_symmetric<G: Integrand + ?Sized>(
    g: &G,
    center: f64,
    interval: &Interval,
) -> Result<()> {
    match quadrature::symmetry_witness(g, center, interval, DEFAULT_POINTS, SYMMETRY_TOL)? {
        Some(x) => Err(Error::SymmetryViolated { center, x }),
        None => Ok(()),
    }
}

pub(crate) fn ensure_nonnegative<G: Integrand + ?Sized>(g: &G, interval: &Interval) -> Result<()> {
    for x in interval.uniform_points(DEFAULT_POINTS) {
        let value = g.value(x)?;
        if !(value >= 0.0) {
            return Err(Error::NegativeWeight { x, value });
        }
    }
    Ok(())
}

/// Builds an enclosure from two closed-form sides that are ordered in exact
/// arithmetic. A crossing of a few ulps (affine `f`) collapses to the midpoint.
pub(crate) fn ordered(lower: f64, upper: f64, target: &str, rule: Rule) -> Result<Enclosure> {
    if lower > upper {
        let scale = lower.abs().max(upper.abs()).max(1.0);
        if lower - upper <= 1e-12 * scale {
            let mid = 0.5 * (lower + upper);
            return Enclosure::new(mid, mid, target, rule);
        }
    }
    Enclosure::new(lower, upper, target, rule)
}

//! Value types shared across the crate.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// A closed interval `[a, b]` with finite endpoints and `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    /// Builds `[a, b]`, rejecting reversed or non-finite endpoints.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a > b {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// `n` equally spaced points including both endpoints (the midpoint when `n == 1`).
    pub fn uniform_points(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => {
                let h = self.width() / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.b
                        } else {
                            self.a + i as f64 * h
                        }
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Orders the endpoints ascending. The flag reports whether they were swapped.
pub fn make_interval(a: f64, b: f64) -> Result<(Interval, bool)> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    if a <= b {
        Ok((Interval { a, b }, false))
    } else {
        Ok((Interval { a: b, b: a }, true))
    }
}

/// Where a pair of curvature bounds came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Proven from the structure of `f` (monotone second derivative).
    Exact,
    UserSupplied,
    /// Extremes of sampled `f''`; not a proof.
    SampledHeuristic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::UserSupplied => "user-supplied",
            Provenance::SampledHeuristic => "sampled-heuristic",
        })
    }
}

/// Constants `m <= f'' <= M` on some interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureBounds {
    m: f64,
    big_m: f64,
    provenance: Provenance,
}

impl CurvatureBounds {
    pub fn new(m: f64, big_m: f64, provenance: Provenance) -> Result<Self> {
        if !(m <= big_m) || !m.is_finite() || !big_m.is_finite() {
            return Err(Error::InvalidCurvature { m, big_m });
        }
        Ok(Self {
            m,
            big_m,
            provenance,
        })
    }

    /// Lower bound on `f''`.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Upper bound on `f''`.
    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Scales `(m, M)` by a nonnegative coefficient into an enclosure.
    pub(crate) fn scaled(&self, k: f64, rule: Rule, target: &str) -> Enclosure {
        debug_assert!(k >= 0.0);
        Enclosure {
            lower: self.m * k,
            upper: self.big_m * k,
            target: target.to_owned(),
            rule,
        }
    }
}

/// The inequality that produced an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    HermiteHadamard,
    Fejer,
    MidpointGap,
    TrapezoidGap,
    ChordGap,
    SymmetricPairGap,
    FejerTrapezoidGap,
    FejerMidpointGap,
    BisectionTrapezoid,
    BisectionMidpoint,
    VasicLackovic,
    YoungRatio,
    YoungDifference,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::HermiteHadamard => "hermite-hadamard",
            Rule::Fejer => "fejer",
            Rule::MidpointGap => "midpoint-gap",
            Rule::TrapezoidGap => "trapezoid-gap",
            Rule::ChordGap => "chord-gap",
            Rule::SymmetricPairGap => "symmetric-pair-gap",
            Rule::FejerTrapezoidGap => "fejer-trapezoid-gap",
            Rule::FejerMidpointGap => "fejer-midpoint-gap",
            Rule::BisectionTrapezoid => "bisection-trapezoid",
            Rule::BisectionMidpoint => "bisection-midpoint",
            Rule::VasicLackovic => "vasic-lackovic",
            Rule::YoungRatio => "young-ratio",
            Rule::YoungDifference => "young-difference",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pair `lower <= upper` bracketing a target quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
    pub target: String,
    pub rule: Rule,
}

impl Enclosure {
    pub fn new(lower: f64, upper: f64, target: impl Into<String>, rule: Rule) -> Result<Self> {
        if !(lower <= upper) {
            return Err(Error::InvertedEnclosure { lower, upper });
        }
        Ok(Self {
            lower,
            upper,
            target: target.into(),
            rule,
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        enclosure_contains(self, v, tol)
    }

    /// How far `v` lies outside `[lower, upper]`; zero when inside.
    pub fn excess(&self, v: f64) -> f64 {
        (self.lower - v).max(v - self.upper).max(0.0)
    }
}

pub fn enclosure_contains(e: &Enclosure, v: f64, tol: f64) -> bool {
    e.lower - tol <= v && v <= e.upper + tol
}

/// Interpolation weight in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Lambda(f64);

impl Lambda {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::InvalidLambda(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Positive node weights `(p, q)` attached to the endpoints `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeWeights {
    p: f64,
    q: f64,
}

impl NodeWeights {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite() {
            Ok(Self { p, q })
        } else {
            Err(Error::InvalidNodeWeights { p, q })
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The weighted node `(p a + q b) / (p + q)`.
    pub fn node(&self, interval: &Interval) -> f64 {
        (self.p * interval.a() + self.q * interval.b()) / (self.p + self.q)
    }

    /// Largest admissible window half-width `(b - a) min(p, q) / (p + q)`.
    pub fn max_half_width(&self, interval: &Interval) -> f64 {
        interval.width() * self.p.min(self.q) / (self.p + self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// Every consecutive difference is a tie.
    Constant,
    Neither,
    Unknown,
}

impl Monotonicity {
    pub fn is_nonincreasing(self) -> bool {
        matches!(self, Monotonicity::Decreasing | Monotonicity::Constant)
    }

    pub fn is_nondecreasing(self) -> bool {
        matches!(self, Monotonicity::Increasing | Monotonicity::Constant)
    }
}

/// A nonnegative weight `g` together with its declared shape.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub function: Expr,
    /// Declared symmetry center.
    pub center: f64,
    pub symmetric: bool,
    pub monotone: Monotonicity,
    /// Values lie in `[0, 1]`.
    pub range01: bool,
}

impl WeightSpec {
    /// A weight with nothing declared beyond its center.
    pub fn new(function: Expr, center: f64) -> Self {
        Self {
            function,
            center,
            symmetric: false,
            monotone: Monotonicity::Unknown,
            range01: false,
        }
    }

    /// The constant weight `g = 1` on `interval`.
    pub fn unit(interval: &Interval) -> Self {
        Self {
            function: Expr::Const(1.0),
            center: interval.midpoint(),
            symmetric: true,
            monotone: Monotonicity::Constant,
            range01: true,
        }
    }

    /// Samples `g` on `interval` and fills in symmetry, monotonicity and range flags.
    pub fn inspect(function: Expr, interval: &Interval) -> Result<Self> {
        use crate::quadrature::{check_monotone, check_symmetry, DEFAULT_POINTS, SYMMETRY_TOL};
        let symmetric = check_symmetry(&function, interval, DEFAULT_POINTS, SYMMETRY_TOL)?;
        let monotone = if interval.is_degenerate() {
            Monotonicity::Constant
        } else {
            check_monotone(&function, interval, DEFAULT_POINTS)?
        };
        let mut range01 = true;
        for x in interval.uniform_points(DEFAULT_POINTS) {
            let v = function.eval(x)?;
            if !(0.0..=1.0).contains(&v) {
                range01 = false;
            }
        }
        Ok(Self {
            function,
            center: interval.midpoint(),
            symmetric,
            monotone,
            range01,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.function.eval(x)?)
    }
}

//! Differentiable functions and their curvature ranges.

use std::f64::consts::PI;

use super::{differentiate, parse, BinaryOp, EvalError, Expr, UnaryOp};
use crate::error::{Error, Result};
use crate::types::{CurvatureBounds, Interval, Provenance};

/// A parsed function together with its first two symbolic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub ast: Expr,
    pub d1: Expr,
    pub d2: Expr,
    pub domain_note: String,
}

impl FunctionSpec {
    pub fn new(ast: Expr) -> Result<Self> {
        let d1 = differentiate(&ast)?;
        let d2 = differentiate(&d1)?;
        let mut notes = Vec::new();
        if ast.contains_op(&|e| matches!(e, Expr::Unary(UnaryOp::Log, _))) {
            notes.push("log arguments must be positive");
        }
        if ast.contains_op(&|e| matches!(e, Expr::Binary(BinaryOp::Div, ..))) {
            notes.push("denominators must not vanish");
        }
        if ast.contains_op(&|e| matches!(e, Expr::Binary(BinaryOp::Pow, _, p) if p.constant_value().is_none_or(|p| p.fract() != 0.0 || p < 0.0)))
        {
            notes.push("non-integer or negative powers need a positive base");
        }
        Ok(Self {
            ast,
            d1,
            d2,
            domain_note: if notes.is_empty() {
                "entire real line".to_owned()
            } else {
                notes.join("; ")
            },
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse(text)?)
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.ast.eval(x)
    }

    pub fn first(&self, x: f64) -> Result<f64, EvalError> {
        self.d1.eval(x)
    }

    pub fn second(&self, x: f64) -> Result<f64, EvalError> {
        self.d2.eval(x)
    }
}

/// Sampled range of `f''` on `interval`, widened by `1e-9 (1 + |v|)` on each side.
///
/// The grid is `samples` Chebyshev nodes plus both endpoints. When `f`
/// belongs to a family whose `f''` is provably monotone on the interval the
/// bounds carry [`Provenance::Exact`], otherwise [`Provenance::SampledHeuristic`].
pub fn curvature_range(
    f: &FunctionSpec,
    interval: &Interval,
    samples: usize,
) -> Result<CurvatureBounds> {
    if samples < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples,
        });
    }
    let (mid, half) = (interval.midpoint(), 0.5 * interval.width());
    let nodes = (0..samples)
        .map(|k| mid + half * ((2 * k + 1) as f64 * PI / (2 * samples) as f64).cos())
        .chain([interval.a(), interval.b()]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in nodes {
        let v = f.second(x)?;
        if !v.is_finite() {
            return Err(EvalError {
                node: f.d2.to_string(),
                x,
                reason: "second derivative is not finite",
            }
            .into());
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let provenance = if curvature_trend(&f.ast, interval).is_some() {
        Provenance::Exact
    } else {
        Provenance::SampledHeuristic
    };
    CurvatureBounds::new(
        lo - 1e-9 * (1.0 + lo.abs()),
        hi + 1e-9 * (1.0 + hi.abs()),
        provenance,
    )
}

/// Direction in which `f''` moves across the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Flat,
    Up,
    Down,
}

impl Trend {
    fn flip(self) -> Self {
        match self {
            Trend::Flat => Trend::Flat,
            Trend::Up => Trend::Down,
            Trend::Down => Trend::Up,
        }
    }

    fn scaled(self, c: f64) -> Self {
        if c == 0.0 {
            Trend::Flat
        } else if c > 0.0 {
            self
        } else {
            self.flip()
        }
    }

    fn from_sign(s: f64) -> Self {
        if s > 0.0 {
            Trend::Up
        } else if s < 0.0 {
            Trend::Down
        } else {
            Trend::Flat
        }
    }

    fn combine(self, other: Self) -> Option<Self> {
        match (self, other) {
            (Trend::Flat, t) | (t, Trend::Flat) => Some(t),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

/// `(slope, intercept)` when `e` is affine in `x`.
fn affine(e: &Expr) -> Option<(f64, f64)> {
    if let Some(c) = e.constant_value() {
        return Some((0.0, c));
    }
    match e {
        Expr::Var => Some((1.0, 0.0)),
        Expr::Unary(UnaryOp::Neg, u) => affine(u).map(|(s, c)| (-s, -c)),
        Expr::Binary(BinaryOp::Add, l, r) => {
            let ((s1, c1), (s2, c2)) = (affine(l)?, affine(r)?);
            Some((s1 + s2, c1 + c2))
        }
        Expr::Binary(BinaryOp::Sub, l, r) => {
            let ((s1, c1), (s2, c2)) = (affine(l)?, affine(r)?);
            Some((s1 - s2, c1 - c2))
        }
        Expr::Binary(BinaryOp::Mul, l, r) => match (l.constant_value(), r.constant_value()) {
            (Some(k), _) => affine(r).map(|(s, c)| (k * s, k * c)),
            (_, Some(k)) => affine(l).map(|(s, c)| (k * s, k * c)),
            _ => None,
        },
        Expr::Binary(BinaryOp::Div, l, r) => {
            let k = r.constant_value().filter(|k| *k != 0.0)?;
            affine(l).map(|(s, c)| (s / k, c / k))
        }
        _ => None,
    }
}

/// Monotonicity of `e''` on the interval, for sums of scaled affine
/// compositions of `exp`, `log` and constant powers.
fn curvature_trend(e: &Expr, interval: &Interval) -> Option<Trend> {
    if affine(e).is_some() {
        return Some(Trend::Flat);
    }
    let at = |s: f64, c: f64, x: f64| s * x + c;
    match e {
        Expr::Unary(UnaryOp::Neg, u) => curvature_trend(u, interval).map(Trend::flip),
        Expr::Binary(BinaryOp::Add, l, r) => {
            curvature_trend(l, interval)?.combine(curvature_trend(r, interval)?)
        }
        Expr::Binary(BinaryOp::Sub, l, r) => {
            curvature_trend(l, interval)?.combine(curvature_trend(r, interval)?.flip())
        }
        Expr::Binary(BinaryOp::Mul, l, r) => match (l.constant_value(), r.constant_value()) {
            (Some(k), _) => curvature_trend(r, interval).map(|t| t.scaled(k)),
            (_, Some(k)) => curvature_trend(l, interval).map(|t| t.scaled(k)),
            _ => None,
        },
        Expr::Binary(BinaryOp::Div, l, r) => match (l.constant_value(), r.constant_value()) {
            (_, Some(k)) if k != 0.0 => curvature_trend(l, interval).map(|t| t.scaled(1.0 / k)),
            (Some(k), _) => power_trend(r, -1.0, interval).map(|t| t.scaled(k)),
            _ => None,
        },
        Expr::Unary(UnaryOp::Exp, u) => {
            let (s, _) = affine(u)?;
            Some(Trend::from_sign(s))
        }
        Expr::Unary(UnaryOp::Log, u) => {
            let (s, c) = affine(u)?;
            // (log u)'' = -s^2/u^2 and its derivative 2 s^3/u^3 has the sign of s when u > 0
            (at(s, c, interval.a()) > 0.0 && at(s, c, interval.b()) > 0.0)
                .then(|| Trend::from_sign(s))
        }
        Expr::Binary(BinaryOp::Pow, u, p) => power_trend(u, p.constant_value()?, interval),
        _ => None,
    }
}

fn power_trend(base: &Expr, p: f64, interval: &Interval) -> Option<Trend> {
    let (s, c) = affine(base)?;
    if s == 0.0 || [0.0, 1.0, 2.0].contains(&p) {
        return Some(Trend::Flat);
    }
    if p == 3.0 {
        return Some(Trend::from_sign(s));
    }
    // (u^p)''' = p (p-1) (p-2) s^3 u^(p-3); monotone while u keeps its sign
    let u = s * interval.a() + c;
    let v = s * interval.b() + c;
    let positive = u > 0.0 && v > 0.0;
    let negative = u < 0.0 && v < 0.0 && p.fract() == 0.0;
    if !(positive || negative) {
        return None;
    }
    let sign_u = if positive {
        1.0
    } else {
        (-1.0f64).powi((p - 3.0) as i32)
    };
    Some(Trend::from_sign(p * (p - 1.0) * (p - 2.0) * s * sign_u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(f: &str, a: f64, b: f64) -> CurvatureBounds {
        let f = FunctionSpec::parse(f).unwrap();
        curvature_range(&f, &Interval::new(a, b).unwrap(), 33).unwrap()
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= 1e-8 * (1.0 + y.abs())
    }

    #[test]
    fn curvature_examples() {
        let c = range("x^2", 0.0, 1.0);
        assert!(close(c.m(), 2.0) && close(c.big_m(), 2.0));
        assert!(c.m() < 2.0 && c.big_m() > 2.0);
        assert_eq!(c.provenance(), Provenance::Exact);

        let c = range("exp(x)", 0.0, 1.0);
        assert!(close(c.m(), 1.0) && close(c.big_m(), std::f64::consts::E));
        assert_eq!(c.provenance(), Provenance::Exact);

        let c = range("-log(x)", 1.0, 2.0);
        assert!(close(c.m(), 0.25) && close(c.big_m(), 1.0));
        assert_eq!(c.provenance(), Provenance::Exact);
    }

    #[test]
    fn families_recognised_as_exact() {
        for (f, a, b) in [
            ("x^4", 0.5, 2.0),
            ("x^3", -1.0, 1.0),
            ("1/x", 0.5, 3.0),
            ("2*x^2 - 3*x + 1", -4.0, 4.0),
            ("exp(-2*x) + 3*x^2", 0.0, 1.0),
            ("x^0.5*(-1)", 1.0, 4.0),
            ("(x - 5)^-2", 0.0, 4.0),
            ("log(x + 2)*(-3)", 0.0, 1.0),
        ] {
            assert_eq!(range(f, a, b).provenance(), Provenance::Exact, "{f}");
        }
    }

    #[test]
    fn mixed_directions_are_heuristic() {
        // exp(x)'' increases, (-log x)'' decreases
        assert_eq!(
            range("exp(x) - log(x)", 0.5, 2.0).provenance(),
            Provenance::SampledHeuristic
        );
        assert_eq!(
            range("x*exp(x)", 0.0, 1.0).provenance(),
            Provenance::SampledHeuristic
        );
    }

    #[test]
    fn errors() {
        let f = FunctionSpec::parse("x^0.5").unwrap();
        let i = Interval::new(-1.0, 1.0).unwrap();
        assert!(matches!(curvature_range(&f, &i, 33), Err(Error::Domain(_))));
        assert!(matches!(
            curvature_range(&f, &i, 1),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(FunctionSpec::parse("abs(x)").is_err());
    }

    #[test]
    fn domain_notes() {
        assert_eq!(
            FunctionSpec::parse("x^2").unwrap().domain_note,
            "entire real line"
        );
        assert!(FunctionSpec::parse("-log(x)")
            .unwrap()
            .domain_note
            .contains("log"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn exact_bounds_hold_everywhere(
                which in 0usize..5,
                a in 0.1f64..3.0,
                w in 0.01f64..4.0,
                seed in any::<u64>(),
            ) {
                use rand::{Rng, SeedableRng};
                let f = ["exp(x)", "-log(x)", "x^3", "1/x", "x^-0.5"][which];
                let f = FunctionSpec::parse(f).unwrap();
                let i = Interval::new(a, a + w).unwrap();
                let c = curvature_range(&f, &i, 33).unwrap();
                prop_assert_eq!(c.provenance(), Provenance::Exact);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..1000 {
                    let x = rng.gen_range(i.a()..=i.b());
                    let v = f.second(x).unwrap();
                    prop_assert!(c.m() <= v && v <= c.big_m());
                }
            }
        }
    }
}

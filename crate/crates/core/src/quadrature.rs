//! Adaptive Simpson quadrature and sample-based weight checks.
//!
//! This is the independent oracle every enclosure is checked against. It
//! only ever evaluates integrands pointwise and never looks at curvature
//! bounds or closed forms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr, FunctionSpec};
use crate::types::{Interval, Monotonicity, WeightSpec};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 50;
/// Sample count for symmetry, monotonicity, sign and range checks.
pub const DEFAULT_POINTS: usize = 101;
pub const SYMMETRY_TOL: f64 = 1e-9;

const MIN_DEPTH: u32 = 4;
const MAX_EVALUATIONS: usize = 4_000_000;
const MONOTONE_TIE: f64 = 1e-12;

/// Anything that can be evaluated pointwise.
pub trait Integrand {
    fn value(&self, x: f64) -> Result<f64, EvalError>;
}

impl<F: Fn(f64) -> Result<f64, EvalError>> Integrand for F {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        self(x)
    }
}

impl Integrand for Expr {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(x)
    }
}

impl Integrand for FunctionSpec {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(x)
    }
}

impl Integrand for WeightSpec {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        self.function.eval(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct Simpson<'f, F: ?Sized> {
    f: &'f F,
    tol_per_width: f64,
    evaluations: usize,
    error: f64,
    failed: bool,
}

impl<F: Integrand + ?Sized> Simpson<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64, EvalError> {
        self.evaluations += 1;
        self.f.value(x)
    }

    fn refine(&mut self, p: Panel, depth: u32) -> Result<f64, EvalError> {
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let (flm, frm) = (self.eval(lm)?, self.eval(rm)?);
        let h = (p.b - p.a) / 12.0;
        let left = h * (p.fa + 4.0 * flm + p.fm);
        let right = h * (p.fm + 4.0 * frm + p.fb);
        let delta = left + right - p.whole;
        let local_tol = self.tol_per_width * (p.b - p.a);
        // below this the difference is rounding noise, not truncation error
        let noise = 32.0 * f64::EPSILON * (left.abs() + right.abs());
        let settled = delta.abs() <= 15.0 * local_tol || delta.abs() <= noise;
        if depth >= MIN_DEPTH && settled {
            self.error += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }
        if depth >= MAX_DEPTH || self.evaluations >= MAX_EVALUATIONS {
            self.failed = true;
            self.error += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }
        let l = self.refine(
            Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            },
            depth + 1,
        )?;
        let r = self.refine(
            Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            },
            depth + 1,
        )?;
        Ok(l + r)
    }
}

/// Adaptive Simpson with Richardson extrapolation.
///
/// A panel is accepted when `|S(left) + S(right) - S(whole)| / 15` falls
/// below `tol` scaled by the panel's share of the interval. Panels that hit
/// depth [`MAX_DEPTH`] are kept with their best estimate and the result is
/// flagged as not converged.
pub fn integrate<F: Integrand + ?Sized>(
    f: &F,
    interval: &Interval,
    tol: f64,
) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    if interval.is_degenerate() {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let (a, b) = (interval.a(), interval.b());
    let mut s = Simpson {
        f,
        tol_per_width: tol / interval.width(),
        evaluations: 0,
        error: 0.0,
        failed: false,
    };
    let (fa, fm, fb) = (s.eval(a)?, s.eval(0.5 * (a + b))?, s.eval(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = s.refine(
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
        },
        0,
    )?;
    Ok(QuadResult {
        value,
        error_estimate: s.error,
        evaluations: s.evaluations,
        converged: !s.failed && s.error <= tol,
    })
}

/// `∫ (t - a)(b - t) g(t) dt` over the interval.
pub fn moment_ab<G: Integrand + ?Sized>(
    g: &G,
    interval: &Interval,
    tol: f64,
) -> Result<QuadResult> {
    let (a, b) = (interval.a(), interval.b());
    integrate(&|t: f64| Ok((t - a) * (b - t) * g.value(t)?), interval, tol)
}

/// `∫ (2t - a - b)^2 g(t) dt` over the interval.
pub fn moment_center<G: Integrand + ?Sized>(
    g: &G,
    interval: &Interval,
    tol: f64,
) -> Result<QuadResult> {
    let s = interval.a() + interval.b();
    integrate(
        &|t: f64| {
            let d = 2.0 * t - s;
            Ok(d * d * g.value(t)?)
        },
        interval,
        tol,
    )
}

/// `|g(x) - g(a + b - x)| <= tol (1 + |g(x)|)` at `points` uniform samples.
pub fn check_symmetry<G: Integrand + ?Sized>(
    g: &G,
    interval: &Interval,
    points: usize,
    tol: f64,
) -> Result<bool> {
    Ok(symmetry_witness(g, interval.midpoint(), interval, points, tol)?.is_none())
}

/// First sample where `g` fails to mirror about `center`, if any.
pub(crate) fn symmetry_witness<G: Integrand + ?Sized>(
    g: &G,
    center: f64,
    interval: &Interval,
    points: usize,
    tol: f64,
) -> Result<Option<f64>> {
    if points < 1 {
        return Err(Error::TooFewSamples {
            needed: 1,
            got: points,
        });
    }
    for x in interval.uniform_points(points) {
        let v = g.value(x)?;
        let mirrored = g.value(2.0 * center - x)?;
        if (v - mirrored).abs() > tol * (1.0 + v.abs()) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Classifies `g` from consecutive differences at uniform samples; differences
/// within `1e-12` count as ties.
pub fn check_monotone<G: Integrand + ?Sized>(
    g: &G,
    interval: &Interval,
    points: usize,
) -> Result<Monotonicity> {
    if points < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: points,
        });
    }
    let values = interval
        .uniform_points(points)
        .into_iter()
        .map(|x| g.value(x))
        .collect::<Result<Vec<_>, _>>()?;
    let (mut up, mut down) = (false, false);
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d > MONOTONE_TIE {
            up = true;
        } else if d < -MONOTONE_TIE {
            down = true;
        }
    }
    Ok(match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (true, true) => Monotonicity::Neither,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::E;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn quad(src: &str, a: f64, b: f64) -> QuadResult {
        integrate(&parse(src).unwrap(), &Interval::new(a, b).unwrap(), 1e-10).unwrap()
    }

    #[test]
    fn integrate_examples() {
        let r = quad("x^2", 0.0, 1.0);
        assert!((r.value - 1.0 / 3.0).abs() <= 1e-10 && r.converged);
        let r = quad("exp(x)", 0.0, 1.0);
        assert!((r.value - (E - 1.0)).abs() <= 1e-10 && r.converged);
        // x^2 * x(1 - x) = x^3 - x^4, integral 1/4 - 1/5
        let r = quad("x^2*x*(1 - x)", 0.0, 1.0);
        assert!((r.value - 0.05).abs() <= 1e-10 && r.converged);
    }

    #[test]
    fn degenerate_interval_integrates_to_zero() {
        let r = quad("exp(x)", 2.0, 2.0);
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn domain_errors_propagate() {
        let r = integrate(
            &parse("log(x)").unwrap(),
            &Interval::new(-1.0, 1.0).unwrap(),
            1e-8,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
        assert!(matches!(
            integrate(&parse("x").unwrap(), &unit(), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn non_smooth_integrand_reports_non_convergence() {
        // a jump that Simpson cannot resolve to 1e-300
        let step = |x: f64| -> Result<f64, EvalError> { Ok(if x < 0.3 { 0.0 } else { 1.0 }) };
        let r = integrate(&step, &unit(), 1e-300).unwrap();
        assert!(!r.converged);
        assert!((r.value - 0.7).abs() < 1e-6);
    }

    #[test]
    fn moments() {
        let one = Expr::Const(1.0);
        let bump = parse("x*(1 - x)").unwrap();
        let tol = 1e-12;
        assert!((moment_ab(&one, &unit(), tol).unwrap().value - 1.0 / 6.0).abs() < 1e-12);
        // x^2 (1 - x)^2 integrates to 1/3 - 1/2 + 1/5
        assert!((moment_ab(&bump, &unit(), tol).unwrap().value - 1.0 / 30.0).abs() < 1e-12);
        assert!((moment_center(&one, &unit(), tol).unwrap().value - 1.0 / 3.0).abs() < 1e-12);
        let i02 = Interval::new(0.0, 2.0).unwrap();
        assert!((moment_center(&one, &i02, tol).unwrap().value - 8.0 / 3.0).abs() < 1e-12);
        let point = Interval::new(2.0, 2.0).unwrap();
        assert_eq!(moment_ab(&bump, &point, tol).unwrap().value, 0.0);
        assert_eq!(moment_center(&bump, &point, tol).unwrap().value, 0.0);
    }

    #[test]
    fn symmetry_checks() {
        let i = unit();
        assert!(check_symmetry(&parse("x*(1 - x)").unwrap(), &i, 101, 1e-9).unwrap());
        assert!(!check_symmetry(&parse("x").unwrap(), &i, 101, 1e-9).unwrap());
        let wide = Interval::new(-3.0, 7.5).unwrap();
        assert!(check_symmetry(&Expr::Const(1.0), &wide, 101, 1e-9).unwrap());
        assert!(check_symmetry(&Expr::Const(1.0), &wide, 0, 1e-9).is_err());
    }

    #[test]
    fn monotone_checks() {
        let i = unit();
        let m = |s: &str| check_monotone(&parse(s).unwrap(), &i, 101).unwrap();
        assert_eq!(m("1 - x"), Monotonicity::Decreasing);
        assert_eq!(m("x"), Monotonicity::Increasing);
        assert_eq!(m("x*(1 - x)"), Monotonicity::Neither);
        assert_eq!(m("3"), Monotonicity::Constant);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cubic(c: [f64; 4]) -> impl Fn(f64) -> Result<f64, EvalError> {
            move |x| Ok(((c[3] * x + c[2]) * x + c[1]) * x + c[0])
        }

        fn cubic_integral(c: [f64; 4], a: f64, b: f64) -> f64 {
            let prim = |x: f64| ((c[3] / 4.0 * x + c[2] / 3.0) * x + c[1] / 2.0) * x * x + c[0] * x;
            prim(b) - prim(a)
        }

        proptest! {
            #[test]
            fn exact_for_cubics(
                c in prop::array::uniform4(-5.0f64..5.0),
                a in -3.0f64..3.0,
                w in 0.0f64..4.0,
            ) {
                let i = Interval::new(a, a + w).unwrap();
                let r = integrate(&cubic(c), &i, 1e-10).unwrap();
                let exact = cubic_integral(c, a, a + w);
                let scale = c.iter().map(|v| v.abs()).sum::<f64>() * (1.0 + a.abs() + w).powi(4);
                prop_assert!((r.value - exact).abs() <= 1e-13 * scale.max(1.0));
            }

            #[test]
            fn linear_in_the_integrand(
                p in prop::array::uniform4(-2.0f64..2.0),
                q in prop::array::uniform4(-2.0f64..2.0),
                alpha in -3.0f64..3.0,
                beta in -3.0f64..3.0,
            ) {
                let i = Interval::new(-1.0, 2.0).unwrap();
                let tol = 1e-10;
                let (fp, fq) = (cubic(p), cubic(q));
                let wiggle = |x: f64| (3.0 * x).exp() * 1e-3;
                let f = |x: f64| Ok(fp(x)? + wiggle(x));
                let g = |x: f64| Ok(fq(x)? - wiggle(x) * x);
                let combo = |x: f64| Ok(alpha * f(x)? + beta * g(x)?);
                let lhs = integrate(&combo, &i, tol).unwrap().value;
                let rhs = alpha * integrate(&f, &i, tol).unwrap().value
                    + beta * integrate(&g, &i, tol).unwrap().value;
                prop_assert!((lhs - rhs).abs() <= 2.0 * tol * (1.0 + alpha.abs() + beta.abs()));
            }

            #[test]
            fn moments_are_nonnegative(c in prop::array::uniform3(0.0f64..1.0), a in -2.0f64..2.0, w in 0.0f64..3.0) {
                let i = Interval::new(a, a + w).unwrap();
                let g = move |x: f64| Ok(c[0] + c[1] * (x - a).abs() + c[2] * (x - a) * (x - a));
                let tol = 1e-10;
                prop_assert!(moment_ab(&g, &i, tol).unwrap().value >= -tol);
                prop_assert!(moment_center(&g, &i, tol).unwrap().value >= -tol);
            }
        }
    }
}

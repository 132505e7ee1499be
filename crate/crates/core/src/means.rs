//! Special means of two positive numbers and the inequalities between them.
//!
//! The gap checks below are Hermite–Hadamard statements for `t^p`, `1/t`
//! and `-log t`, evaluated in closed form. The Young refinements apply the
//! chord-gap estimate to `-log` and `exp`.

use std::fmt;

use serde::Serialize;

use crate::bounds::OrderedPair;
use crate::error::{Error, Result};
use crate::types::{Enclosure, Lambda, Rule};

/// Parameters closer than this to a limit case are treated as the limit.
pub const LIMIT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Identric,
    Power(f64),
    PLog(f64),
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanKind::Arithmetic => f.write_str("A"),
            MeanKind::Geometric => f.write_str("G"),
            MeanKind::Harmonic => f.write_str("H"),
            MeanKind::Logarithmic => f.write_str("L"),
            MeanKind::Identric => f.write_str("I"),
            MeanKind::Power(p) => write!(f, "A_{p}"),
            MeanKind::PLog(p) => write!(f, "L_{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanValue {
    pub kind: MeanKind,
    pub value: f64,
}

fn positive(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveInput { a, b })
    }
}

/// `log(b/a)`, accurate when `a` and `b` are close.
fn log_ratio(a: f64, b: f64) -> f64 {
    ((b - a) / a).ln_1p()
}

fn logarithmic(a: f64, b: f64) -> f64 {
    if a == b {
        a
    } else {
        (b - a) / log_ratio(a, b)
    }
}

/// `log I(a, b) = log b - 1 + (a/(b-a)) log(b/a)`.
fn log_identric(a: f64, b: f64) -> f64 {
    if a == b {
        a.ln()
    } else {
        b.ln() - 1.0 + a * log_ratio(a, b) / (b - a)
    }
}

pub fn mean(kind: MeanKind, a: f64, b: f64) -> Result<MeanValue> {
    positive(a, b)?;
    let value = match kind {
        MeanKind::Arithmetic => 0.5 * (a + b),
        MeanKind::Geometric => a.sqrt() * b.sqrt(),
        MeanKind::Harmonic => 2.0 * a * b / (a + b),
        MeanKind::Logarithmic => logarithmic(a, b),
        MeanKind::Identric => log_identric(a, b).exp(),
        MeanKind::Power(p) if p.abs() < LIMIT_THRESHOLD => a.sqrt() * b.sqrt(),
        MeanKind::Power(p) => (0.5 * (a.powf(p) + b.powf(p))).powf(1.0 / p),
        MeanKind::PLog(_) if a == b => a,
        MeanKind::PLog(p) if p.abs() < LIMIT_THRESHOLD => log_identric(a, b).exp(),
        MeanKind::PLog(p) if (p + 1.0).abs() < LIMIT_THRESHOLD => logarithmic(a, b),
        MeanKind::PLog(p) => {
            let q = p + 1.0;
            ((b.powf(q) - a.powf(q)) / (q * (b - a))).powf(1.0 / p)
        }
    };
    if a == b {
        return Ok(MeanValue { kind, value: a });
    }
    Ok(MeanValue { kind, value })
}

fn ordered_point(a: f64, b: f64, x: f64) -> Result<()> {
    positive(a, b)?;
    if !(a <= x && x <= b) {
        return Err(Error::PointOutsideInterval { x, a, b });
    }
    Ok(())
}

/// `(b-a)(A_p^p - L_p^p)` computed without dividing by `b - a`.
fn power_gap(p: f64, a: f64, b: f64) -> f64 {
    let q = p + 1.0;
    (b - a) * 0.5 * (a.powf(p) + b.powf(p)) - (b.powf(q) - a.powf(q)) / q
}

/// `((b-a)(A_p^p - L_p^p), (x-a)(A_p^p(a,x) - L_p^p(a,x)))` with contract `left >= right >= 0`.
///
/// `p` must make `t^p` convex: `p < 0` or `p >= 1`, and `p != -1`.
pub fn al_gap_check(p: f64, a: f64, b: f64, x: f64) -> Result<OrderedPair> {
    if !p.is_finite() || (0.0..1.0).contains(&p) || (p + 1.0).abs() < LIMIT_THRESHOLD {
        return Err(Error::ParameterOutOfRange(format!(
            "p = {p}; need p < 0 or p >= 1, and p != -1"
        )));
    }
    ordered_point(a, b, x)?;
    Ok(OrderedPair {
        first: power_gap(p, a, b),
        second: power_gap(p, a, x),
    })
}

/// `(b-a)(1/H - 1/L)`, the same gap for `1/t`.
fn reciprocal_gap(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (b - a) * (a + b) / (2.0 * a * b) - log_ratio(a, b)
}

/// `((b-a)(1/H(a,b) - 1/L(a,b)), (x-a)(1/H(a,x) - 1/L(a,x)))`.
pub fn harmonic_log_gap_check(a: f64, b: f64, x: f64) -> Result<OrderedPair> {
    ordered_point(a, b, x)?;
    Ok(OrderedPair {
        first: reciprocal_gap(a, b),
        second: reciprocal_gap(a, x),
    })
}

/// `(A(a,b)/I(a,b))^(b-a)`.
fn identric_power(a: f64, b: f64) -> f64 {
    if a == b {
        return 1.0;
    }
    ((b - a) * ((0.5 * (a + b)).ln() - log_identric(a, b))).exp()
}

/// `((A/I)(a,b)^(b-a), (A/I)(a,x)^(x-a))` with contract `left >= right >= 1`.
pub fn identric_ratio_check(a: f64, b: f64, x: f64) -> Result<OrderedPair> {
    ordered_point(a, b, x)?;
    Ok(OrderedPair {
        first: identric_power(a, b),
        second: identric_power(a, x),
    })
}

/// `(α, β, μ(1-μ))` with `α <= β` and `μ` the weight carried by `α`.
///
/// The pair `(μ, 1-μ)` is rebuilt from whichever member is at least 1/2,
/// for which `1 - w` is exact; this makes `(a, b, λ)` and `(b, a, 1-λ)`
/// agree bit for bit.
fn normalize(a: f64, b: f64, lambda: Lambda) -> (f64, f64, f64) {
    let l = lambda.value();
    let (alpha, beta, wa, wb) = if a <= b {
        (a, b, l, 1.0 - l)
    } else {
        (b, a, 1.0 - l, l)
    };
    let (wa, wb) = if wa >= 0.5 {
        (wa, 1.0 - wa)
    } else {
        (1.0 - wb, wb)
    };
    (alpha, beta, wa * wb)
}

/// Enclosure of `(λa + (1-λ)b) / (a^λ b^(1-λ))`:
/// `exp(μ(1-μ)(α-β)^2/(2β^2)) <= ratio <= exp(μ(1-μ)(α-β)^2/(2α^2))`.
pub fn young_ratio_bounds(a: f64, b: f64, lambda: Lambda) -> Result<Enclosure> {
    positive(a, b)?;
    let (alpha, beta, k) = normalize(a, b, lambda);
    let d2 = (alpha - beta) * (alpha - beta);
    Enclosure::new(
        (k * d2 / (2.0 * beta * beta)).exp(),
        (k * d2 / (2.0 * alpha * alpha)).exp(),
        "(λa + (1-λ)b) / (a^λ b^(1-λ))",
        Rule::YoungRatio,
    )
}

/// Enclosure of `λa + (1-λ)b - a^λ b^(1-λ)`:
/// `μ(1-μ) α log^2(α/β) / 2 <= difference <= μ(1-μ) β log^2(α/β) / 2`.
pub fn young_difference_bounds(a: f64, b: f64, lambda: Lambda) -> Result<Enclosure> {
    positive(a, b)?;
    let (alpha, beta, k) = normalize(a, b, lambda);
    let log2 = log_ratio(alpha, beta).powi(2);
    Enclosure::new(
        k * alpha / 2.0 * log2,
        k * beta / 2.0 * log2,
        "λa + (1-λ)b - a^λ b^(1-λ)",
        Rule::YoungDifference,
    )
}

/// `(λa + (1-λ)b) / (a^λ b^(1-λ))` evaluated directly.
pub fn young_ratio(a: f64, b: f64, lambda: Lambda) -> f64 {
    if a == b {
        return 1.0;
    }
    let l = lambda.value();
    (l * a + (1.0 - l) * b) / (a.powf(l) * b.powf(1.0 - l))
}

/// `λa + (1-λ)b - a^λ b^(1-λ)` evaluated directly.
pub fn young_difference(a: f64, b: f64, lambda: Lambda) -> f64 {
    if a == b {
        return 0.0;
    }
    let l = lambda.value();
    l * a + (1.0 - l) * b - a.powf(l) * b.powf(1.0 - l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn m(kind: MeanKind, a: f64, b: f64) -> f64 {
        mean(kind, a, b).unwrap().value
    }

    fn lam(v: f64) -> Lambda {
        Lambda::new(v).unwrap()
    }

    fn near(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn mean_examples() {
        assert_eq!(m(MeanKind::Power(2.0), 1.0, 7.0), 5.0);
        for (a, b) in [(1.0, 2.0), (0.3, 9.0), (4.0, 4.5)] {
            assert!(near(m(MeanKind::PLog(1.0), a, b), 0.5 * (a + b), 1e-12));
        }
        assert!(near(m(MeanKind::Logarithmic, 1.0, E), E - 1.0, 1e-12));
        assert!(near(
            m(MeanKind::Identric, 1.0, E),
            (1.0 / (E - 1.0)).exp(),
            1e-12
        ));
        assert!(near(m(MeanKind::Harmonic, 1.0, 3.0), 1.5, 1e-15));
        assert!(near(m(MeanKind::Geometric, 2.0, 8.0), 4.0, 1e-15));
    }

    #[test]
    fn limit_kinds() {
        let (a, b) = (1.5, 6.0);
        assert_eq!(m(MeanKind::Power(0.0), a, b), m(MeanKind::Geometric, a, b));
        assert_eq!(m(MeanKind::PLog(0.0), a, b), m(MeanKind::Identric, a, b));
        assert_eq!(
            m(MeanKind::PLog(-1.0), a, b),
            m(MeanKind::Logarithmic, a, b)
        );
        assert!(near(
            m(MeanKind::Power(-1.0), a, b),
            m(MeanKind::Harmonic, a, b),
            1e-12
        ));
        assert!(near(
            m(MeanKind::PLog(-2.0), a, b),
            m(MeanKind::Geometric, a, b),
            1e-12
        ));
    }

    #[test]
    fn equal_arguments() {
        for kind in [
            MeanKind::Arithmetic,
            MeanKind::Geometric,
            MeanKind::Harmonic,
            MeanKind::Logarithmic,
            MeanKind::Identric,
            MeanKind::Power(3.0),
            MeanKind::PLog(-3.0),
        ] {
            assert_eq!(m(kind, 2.5, 2.5), 2.5, "{kind}");
        }
    }

    #[test]
    fn nonpositive_input() {
        assert!(matches!(
            mean(MeanKind::Arithmetic, 0.0, 1.0),
            Err(Error::NonpositiveInput { .. })
        ));
        assert!(mean(MeanKind::Logarithmic, 1.0, -2.0).is_err());
        assert!(young_ratio_bounds(-1.0, 2.0, lam(0.5)).is_err());
        assert!(young_difference_bounds(1.0, 0.0, lam(0.5)).is_err());
        assert!(harmonic_log_gap_check(0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn al_examples() {
        let r = al_gap_check(2.0, 1.0, 2.0, 1.5).unwrap();
        assert!(near(r.first, 1.0 / 6.0, 1e-12));
        // subinterval: A_2^2 = 1.625, L_2^2 = (3.375 - 1)/1.5
        assert!(near(r.second, 0.5 * (1.625 - 2.375 / 1.5), 1e-12));
        assert!(near(r.second, 0.0208333, 1e-7));
        let r = al_gap_check(2.0, 1.0, 2.0, 1.0).unwrap();
        assert!(near(r.first, 1.0 / 6.0, 1e-12) && r.second == 0.0);
        let r = al_gap_check(2.0, 1.0, 2.0, 2.0).unwrap();
        assert_eq!(r.first, r.second);
    }

    #[test]
    fn al_rejects_concave_range() {
        for p in [0.0, 0.5, 0.999, -1.0] {
            assert!(
                matches!(
                    al_gap_check(p, 1.0, 2.0, 1.5),
                    Err(Error::ParameterOutOfRange(_))
                ),
                "{p}"
            );
        }
        assert!(al_gap_check(-0.5, 1.0, 2.0, 1.5).is_ok());
        assert!(al_gap_check(2.0, 1.0, 2.0, 2.5).is_err());
    }

    #[test]
    fn harmonic_log_examples() {
        let r = harmonic_log_gap_check(1.0, 2.0, 2.0).unwrap();
        assert_eq!(r.first, r.second);
        let x = (1.0 + E) / 2.0;
        let r = harmonic_log_gap_check(1.0, E, x).unwrap();
        let h = 2.0 * E / (1.0 + E);
        assert!(near(
            r.first,
            (E - 1.0) * (1.0 / h - 1.0 / (E - 1.0)),
            1e-12
        ));
        let (hx, lx) = (2.0 * x / (1.0 + x), (x - 1.0) / x.ln());
        assert!(near(r.second, (x - 1.0) * (1.0 / hx - 1.0 / lx), 1e-12));
        assert!(r.holds(1e-12));
        let r = harmonic_log_gap_check(3.0, 3.0, 3.0).unwrap();
        assert_eq!((r.first, r.second), (0.0, 0.0));
    }

    #[test]
    fn identric_examples() {
        let r = identric_ratio_check(1.0, E, 1.0).unwrap();
        assert_eq!(r.second, 1.0);
        let a = (1.0 + E) / 2.0;
        let i = (1.0 / E) * (E / (E - 1.0)).exp();
        assert!(near(a, 1.859141, 1e-6) && near(i, 1.789572, 1e-6));
        assert!(near(r.first, (a / i).powf(E - 1.0), 1e-12));
        assert!(near(a / i, 1.038874, 1e-6));
        let r = identric_ratio_check(2.0, 2.0, 2.0).unwrap();
        assert_eq!((r.first, r.second), (1.0, 1.0));
    }

    #[test]
    fn young_examples() {
        let e = young_ratio_bounds(1.0, 4.0, lam(0.5)).unwrap();
        assert!(near(e.lower, (9.0f64 / 128.0).exp(), 1e-15));
        assert!(near(e.upper, (9.0f64 / 8.0).exp(), 1e-15));
        assert!(near(e.lower, 1.072843, 1e-6) && near(e.upper, 3.080217, 1e-6));
        assert!(e.contains(young_ratio(1.0, 4.0, lam(0.5)), 0.0));
        assert_eq!(young_ratio(1.0, 4.0, lam(0.5)), 1.25);

        let e = young_difference_bounds(1.0, 4.0, lam(0.5)).unwrap();
        let log2 = (2.0 * 2f64.ln()).powi(2);
        assert!(near(log2, 1.921812, 1e-6));
        assert!(near(e.lower, 0.240227, 1e-6) && near(e.upper, 0.960906, 1e-6));
        assert!(e.contains(0.5, 0.0));

        for l in [0.0, 0.3, 1.0] {
            let e = young_ratio_bounds(3.0, 3.0, lam(l)).unwrap();
            assert_eq!((e.lower, e.upper), (1.0, 1.0));
            let e = young_difference_bounds(3.0, 3.0, lam(l)).unwrap();
            assert_eq!((e.lower, e.upper), (0.0, 0.0));
        }
        let e = young_ratio_bounds(1.0, 4.0, lam(0.0)).unwrap();
        assert_eq!((e.lower, e.upper), (1.0, 1.0));
        let e = young_difference_bounds(1.0, 4.0, lam(1.0)).unwrap();
        assert_eq!((e.lower, e.upper), (0.0, 0.0));
    }

    #[test]
    fn young_holds_when_first_argument_is_larger() {
        // without reordering the printed bounds would be inverted here
        let e = young_ratio_bounds(4.0, 1.0, lam(0.2)).unwrap();
        assert!(e.lower <= e.upper && e.contains(young_ratio(4.0, 1.0, lam(0.2)), 1e-15));
        let e = young_difference_bounds(4.0, 1.0, lam(0.2)).unwrap();
        assert!(e.contains(young_difference(4.0, 1.0, lam(0.2)), 1e-15));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mean_ordering(a in 0.01f64..100.0, b in 0.01f64..100.0) {
                prop_assume!((a - b).abs() > 1e-6 * a.max(b));
                let [h, g, l, i, ar] = [
                    MeanKind::Harmonic, MeanKind::Geometric, MeanKind::Logarithmic,
                    MeanKind::Identric, MeanKind::Arithmetic,
                ].map(|k| m(k, a, b));
                let tol = 1e-12 * a.max(b);
                prop_assert!(a.min(b) <= h + tol && ar <= a.max(b) + tol);
                prop_assert!(h < g + tol && g < l + tol && l < i + tol && i < ar + tol);
            }

            #[test]
            fn power_mean_nondecreasing_in_p(a in 0.01f64..100.0, b in 0.01f64..100.0) {
                let ps = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
                let v: Vec<f64> = ps.iter().map(|&p| m(MeanKind::Power(p), a, b)).collect();
                for w in v.windows(2) {
                    prop_assert!(w[0] <= w[1] * (1.0 + 1e-12));
                }
            }

            #[test]
            fn limits_near_zero(a in 0.1f64..10.0, b in 0.1f64..10.0) {
                let g = m(MeanKind::Geometric, a, b);
                let i = m(MeanKind::Identric, a, b);
                for p in [1e-6, -1e-6] {
                    prop_assert!((m(MeanKind::Power(p), a, b) - g).abs() <= 1e-5 * g);
                    prop_assert!((m(MeanKind::PLog(p), a, b) - i).abs() <= 1e-5 * i);
                }
            }

            #[test]
            fn young_is_symmetric_under_swap(a in 0.1f64..10.0, b in 0.1f64..10.0, l in 0.0f64..=1.0) {
                let swapped = lam(1.0 - l);
                prop_assert_eq!(
                    young_ratio_bounds(a, b, lam(l)).unwrap(),
                    young_ratio_bounds(b, a, swapped).unwrap()
                );
                prop_assert_eq!(
                    young_difference_bounds(a, b, lam(l)).unwrap(),
                    young_difference_bounds(b, a, swapped).unwrap()
                );
            }

            #[test]
            fn gap_checks_are_ordered(a in 0.1f64..5.0, w in 0.0f64..5.0, s in 0.0f64..=1.0, p in prop_oneof![-4.0f64..-1.01, -0.99f64..-0.01, 1.0f64..5.0]) {
                let b = a + w;
                let x = a + s * w;
                let scale = 1e-12 * (1.0 + b.powf(p + 1.0) + a.powf(p + 1.0));
                prop_assert!(al_gap_check(p, a, b, x).unwrap().holds(scale));
                prop_assert!(harmonic_log_gap_check(a, b, x).unwrap().holds(1e-12));
                let r = identric_ratio_check(a, b, x).unwrap();
                prop_assert!(r.first >= r.second - 1e-12 && r.second >= 1.0 - 1e-12);
            }
        }
    }
}

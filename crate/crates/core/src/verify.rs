//! Randomized falsification harness.
//!
//! Each trial draws a convex function whose curvature bounds are known in
//! closed form, a handful of admissible weights and some positive pairs,
//! runs every enclosure and chain in the crate, and compares the outcome
//! with the quadrature oracle. Everything derives from a master seed, so a
//! report is reproducible bit for bit.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{self, Certified, OrderedPair, Triple};
use crate::error::{Error, Result};
use crate::expr::{BinaryOp, Expr, FunctionSpec, UnaryOp};
use crate::means::{self, MeanKind};
use crate::quadrature::DEFAULT_POINTS;
use crate::types::{
    CurvatureBounds, Enclosure, Interval, Lambda, Monotonicity, NodeWeights, Provenance, WeightSpec,
};

/// Checks run by every trial; see [`falsify`].
pub const CHECKS_PER_TRIAL: u64 = 45;

/// Slack multiplier applied to the oracle tolerance.
pub const SLACK_FACTOR: f64 = 10.0;

/// Parameters of `f(x) = c1 x^2 + c2 exp(c3 x) - c4 log(x + s) + c5 x + c6` on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recipe {
    pub c: [f64; 6],
    pub shift: f64,
    pub a: f64,
    pub b: f64,
}

impl Recipe {
    /// The function as an expression; zero coefficients drop their summand.
    pub fn expr(&self) -> Expr {
        let [c1, c2, c3, c4, c5, c6] = self.c;
        let x = || Expr::Var;
        let k = Expr::Const;
        let mul = |l, r| Expr::binary(BinaryOp::Mul, l, r);
        let mut terms: Vec<(bool, Expr)> = Vec::new();
        if c1 != 0.0 {
            terms.push((true, mul(k(c1), Expr::binary(BinaryOp::Pow, x(), k(2.0)))));
        }
        if c2 != 0.0 {
            let e = Expr::unary(UnaryOp::Exp, mul(k(c3), x()));
            terms.push((true, mul(k(c2), e)));
        }
        if c4 != 0.0 {
            let l = Expr::unary(
                UnaryOp::Log,
                Expr::binary(BinaryOp::Add, x(), k(self.shift)),
            );
            terms.push((false, mul(k(c4), l)));
        }
        if c5 != 0.0 {
            terms.push((c5 > 0.0, mul(k(c5.abs()), x())));
        }
        if c6 != 0.0 || terms.is_empty() {
            terms.push((c6 >= 0.0, k(c6.abs())));
        }
        let mut iter = terms.into_iter();
        let (positive, first) = iter.next().expect("at least one term");
        let start = if positive {
            first
        } else {
            Expr::unary(UnaryOp::Neg, first)
        };
        iter.fold(start, |acc, (positive, t)| {
            let op = if positive {
                BinaryOp::Add
            } else {
                BinaryOp::Sub
            };
            Expr::binary(op, acc, t)
        })
    }

    /// Exact `(m, M)`: each summand of `f''` is monotone, so its extremes
    /// sit at the endpoints and the sums of those extremes bound `f''`.
    pub fn curvature(&self) -> (f64, f64) {
        let [c1, c2, c3, c4, ..] = self.c;
        let e = |x: f64| c2 * c3 * c3 * (c3 * x).exp();
        let r = |x: f64| c4 / ((x + self.shift) * (x + self.shift));
        let (ea, eb) = (e(self.a), e(self.b));
        let (ra, rb) = (r(self.a), r(self.b));
        let base = 2.0 * c1;
        (
            base + ea.min(eb) + ra.min(rb),
            base + ea.max(eb) + ra.max(rb),
        )
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c1, c2, c3, c4, c5, c6] = self.c;
        write!(
            f,
            "c1={c1} c2={c2} c3={c3} c4={c4} c5={c5} c6={c6} s={} on [{}, {}]",
            self.shift, self.a, self.b
        )
    }
}

/// A convex function, its interval and exact curvature bounds.
#[derive(Debug, Clone)]
pub struct ConvexInstance {
    pub f: FunctionSpec,
    pub interval: Interval,
    pub curvature: CurvatureBounds,
    pub recipe: Recipe,
}

impl ConvexInstance {
    pub fn from_recipe(recipe: Recipe) -> Result<Self> {
        let [c1, c2, _, c4, ..] = recipe.c;
        if c1 < 0.0 || c2 < 0.0 || c4 < 0.0 {
            return Err(Error::ParameterOutOfRange(format!(
                "c1, c2, c4 must be nonnegative in {recipe}"
            )));
        }
        if c4 != 0.0 && !(recipe.a + recipe.shift > 0.0) {
            return Err(Error::ParameterOutOfRange(format!(
                "log argument not positive on the interval in {recipe}"
            )));
        }
        let interval = Interval::new(recipe.a, recipe.b)?;
        let (m, big_m) = recipe.curvature();
        Ok(Self {
            f: FunctionSpec::new(recipe.expr())?,
            interval,
            curvature: CurvatureBounds::new(m, big_m, Provenance::Exact)?,
            recipe,
        })
    }
}

impl ConvexInstance {
    /// The same instance plus the linear term that makes `f'(a) >= 0`.
    ///
    /// Curvature bounds are unchanged; the result is nondecreasing on the interval.
    pub fn nondecreasing(&self) -> Result<Self> {
        let slope = self.f.first(self.interval.a())?;
        if slope >= 0.0 {
            return Ok(self.clone());
        }
        let mut recipe = self.recipe;
        recipe.c[4] -= slope;
        Self::from_recipe(recipe)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`; independent of every other trial.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_convex_instance(seed: u64) -> ConvexInstance {
    let mut r = rng(seed);
    let quadratic_only = r.gen_range(0..4) == 0;
    let mut c = [
        r.gen_range(0.0..=3.0),
        r.gen_range(0.0..=3.0),
        r.gen_range(-2.0..=2.0),
        r.gen_range(0.0..=3.0),
        r.gen_range(-3.0..=3.0),
        r.gen_range(-3.0..=3.0),
    ];
    if quadratic_only {
        c[1] = 0.0;
        c[3] = 0.0;
    }
    let a = r.gen_range(-1.0..=1.0);
    let b = a + r.gen_range(0.1..=5.0);
    let shift = r.gen_range(0.2..=2.0) - a;
    ConvexInstance::from_recipe(Recipe { c, shift, a, b })
        .expect("generated recipes are valid by construction")
}

fn affine_unit(num: Expr, width: f64) -> Expr {
    // |num / width|: nonnegative even under rounding
    Expr::unary(
        UnaryOp::Abs,
        Expr::binary(BinaryOp::Div, num, Expr::Const(width)),
    )
}

/// `Σ d_k t^k`.
fn polynomial(t: &Expr, coeffs: &[f64]) -> Expr {
    let mut acc = Expr::Const(coeffs[0]);
    for (k, &d) in coeffs.iter().enumerate().skip(1) {
        let power = if k == 1 {
            t.clone()
        } else {
            Expr::binary(BinaryOp::Pow, t.clone(), Expr::Const(k as f64))
        };
        acc = Expr::binary(
            BinaryOp::Add,
            acc,
            Expr::binary(BinaryOp::Mul, Expr::Const(d), power),
        );
    }
    acc
}

fn coefficients(r: &mut ChaCha8Rng) -> [f64; 4] {
    let mut d = [0.0f64; 4];
    for v in &mut d {
        *v = r.gen_range(0.0..=1.0);
    }
    d[0] = d[0].max(0.05);
    d
}

/// `g(x) = (w(x) + w(a+b-x))/2`, symmetric about the midpoint by construction.
pub fn symmetrize(w: &Expr, interval: &Interval) -> WeightSpec {
    let mirror = Expr::binary(
        BinaryOp::Sub,
        Expr::Const(interval.a() + interval.b()),
        Expr::Var,
    );
    let sum = Expr::binary(BinaryOp::Add, w.clone(), w.compose(&mirror));
    WeightSpec {
        function: Expr::binary(BinaryOp::Mul, Expr::Const(0.5), sum),
        center: interval.midpoint(),
        symmetric: true,
        monotone: Monotonicity::Unknown,
        range01: false,
    }
}

fn scaled(g: Expr, factor: f64) -> Expr {
    Expr::binary(BinaryOp::Mul, Expr::Const(factor), g)
}

/// A symmetric weight with values in `[0, 1]`.
///
/// The base is `w = Σ d_k |t|^k` with `t = (x-a)/(b-a)` and `d_k ∈ [0, 1]`;
/// after symmetrization it is divided by `Σ d_k`, its largest possible value.
pub fn random_symmetric_weight(seed: u64, interval: &Interval) -> WeightSpec {
    let d = coefficients(&mut rng(seed));
    let t = affine_unit(
        Expr::binary(BinaryOp::Sub, Expr::Var, Expr::Const(interval.a())),
        interval.width().max(f64::MIN_POSITIVE),
    );
    let mut g = symmetrize(&polynomial(&t, &d), interval);
    g.function = scaled(g.function, 1.0 / d.iter().sum::<f64>());
    g.range01 = true;
    g
}

fn monotone_weight(seed: u64, interval: &Interval, from: Expr, dir: Monotonicity) -> WeightSpec {
    let d = coefficients(&mut rng(seed));
    let t = affine_unit(from, interval.width().max(f64::MIN_POSITIVE));
    WeightSpec {
        function: scaled(polynomial(&t, &d), 1.0 / d.iter().sum::<f64>()),
        center: interval.midpoint(),
        symmetric: false,
        monotone: dir,
        range01: true,
    }
}

/// `Σ d_k ((b-x)/(b-a))^k`, nonincreasing on the interval.
pub fn random_decreasing_weight(seed: u64, interval: &Interval) -> WeightSpec {
    let from = Expr::binary(BinaryOp::Sub, Expr::Const(interval.b()), Expr::Var);
    monotone_weight(seed, interval, from, Monotonicity::Decreasing)
}

/// `Σ d_k ((x-a)/(b-a))^k`, nondecreasing on the interval.
pub fn random_increasing_weight(seed: u64, interval: &Interval) -> WeightSpec {
    let from = Expr::binary(BinaryOp::Sub, Expr::Var, Expr::Const(interval.a()));
    monotone_weight(seed, interval, from, Monotonicity::Increasing)
}

/// `Σ d_k |(x-c)/y|^k`, symmetric about `center` on any window around it.
pub fn random_weight_about(seed: u64, center: f64, y: f64) -> WeightSpec {
    let d = coefficients(&mut rng(seed));
    let t = affine_unit(
        Expr::binary(BinaryOp::Sub, Expr::Var, Expr::Const(center)),
        y,
    );
    WeightSpec {
        function: polynomial(&t, &d),
        center,
        symmetric: true,
        monotone: Monotonicity::Unknown,
        range01: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub recipe: String,
    pub operation: String,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub inconclusive: u64,
    /// Largest violation seen, relative to the per-trial magnitude.
    pub worst_violation: f64,
    pub failures: Vec<Failure>,
    /// Number of checks run per operation.
    pub coverage: BTreeMap<String, u64>,
}

impl TrialReport {
    fn empty(seed: u64, trials: u64) -> Self {
        Self {
            seed,
            trials,
            passed: 0,
            failed: 0,
            inconclusive: 0,
            worst_violation: 0.0,
            failures: Vec::new(),
            coverage: BTreeMap::new(),
        }
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Inconclusive,
}

/// Per-trial context: magnitudes for slack and a sink for outcomes.
struct Trial<'r> {
    index: u64,
    recipe: String,
    tol: f64,
    /// Absolute tolerance handed to the oracle.
    quad_tol: f64,
    /// Magnitude of every target built from `f`.
    scale: f64,
    report: &'r mut TrialReport,
}

impl Trial<'_> {
    fn record(&mut self, op: &str, result: Result<(bool, f64, f64, String)>) {
        *self.report.coverage.entry(op.to_owned()).or_insert(0) += 1;
        let outcome = match result {
            Err(e) => Outcome::Fail(format!("error: {e}")),
            Ok((false, ..)) => Outcome::Inconclusive,
            Ok((true, shortfall, scale, details)) => {
                let relative = shortfall / scale;
                if relative.is_finite() {
                    self.report.worst_violation = self.report.worst_violation.max(relative);
                }
                if shortfall <= SLACK_FACTOR * self.tol * scale {
                    Outcome::Pass
                } else {
                    Outcome::Fail(details)
                }
            }
        };
        match outcome {
            Outcome::Pass => self.report.passed += 1,
            Outcome::Inconclusive => self.report.inconclusive += 1,
            Outcome::Fail(details) => {
                self.report.failed += 1;
                self.report.failures.push(Failure {
                    trial: self.index,
                    recipe: self.recipe.clone(),
                    operation: op.to_owned(),
                    details,
                });
            }
        }
    }

    fn enclosure(&mut self, op: &str, e: Result<(Enclosure, f64, bool)>) {
        let scale = self.scale;
        self.record(
            op,
            e.map(|(e, v, converged)| {
                let details = format!("{v} outside [{}, {}]", e.lower, e.upper);
                (converged, e.excess(v), scale, details)
            }),
        );
    }

    fn certified(&mut self, op: &str, c: Result<Certified>) {
        self.enclosure(op, c.map(|c| (c.enclosure, c.target, c.converged)));
    }

    fn pair(&mut self, op: &str, p: Result<(OrderedPair, bool)>, scale: f64) {
        self.record(
            op,
            p.map(|(p, converged)| {
                let details = format!(
                    "pair ({}, {}) breaks first >= second >= 0",
                    p.first, p.second
                );
                (converged, p.shortfall(), scale, details)
            }),
        );
    }

    fn triple(&mut self, op: &str, t: Result<(Triple, bool)>) {
        let scale = self.scale;
        self.record(
            op,
            t.map(|(t, converged)| {
                let details = format!(
                    "chain ({}, {}, {}) breaks left >= middle >= right",
                    t.left, t.middle, t.right
                );
                (converged, t.shortfall(), scale, details)
            }),
        );
    }
}

/// `h` on an 11-point grid over the interval: shortfall from nondecreasing and `h(a) = 0`.
fn grid_monotone(
    interval: &Interval,
    h: impl Fn(f64) -> Result<bounds::Target>,
) -> Result<(bool, f64, Vec<f64>)> {
    let mut values = Vec::with_capacity(11);
    let mut converged = true;
    for x in interval.uniform_points(11) {
        let t = h(x)?;
        converged &= t.converged;
        values.push(t.value);
    }
    let drop = values
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(values[0].abs(), f64::max);
    Ok((converged, drop.max(0.0), values))
}

/// `max(1, max |f|)` over the sample grid.
fn magnitude(f: &FunctionSpec, iv: &Interval) -> f64 {
    let sup = iv
        .uniform_points(DEFAULT_POINTS)
        .into_iter()
        .map(|x| f.eval(x).map(f64::abs).unwrap_or(f64::INFINITY))
        .fold(1.0, f64::max);
    if sup.is_finite() {
        sup
    } else {
        1.0
    }
}

fn run_trial(index: u64, master: u64, tol: f64, report: &mut TrialReport) {
    let seed = trial_seed(master, index);
    let sub = |k: u64| splitmix64(seed.wrapping_add(k));
    let inst = random_convex_instance(seed);
    let (f, iv, c) = (&inst.f, &inst.interval, &inst.curvature);
    let mut r = rng(sub(1));

    let tilted = inst.nondecreasing();
    let sup = match &tilted {
        Ok(t) => magnitude(f, iv).max(magnitude(&t.f, iv)),
        Err(_) => magnitude(f, iv),
    };
    let wf = iv.width().max(1.0);
    let mut t = Trial {
        index,
        recipe: format!("f(x) = {} ; {}", inst.recipe.expr(), inst.recipe),
        tol,
        quad_tol: tol * sup * wf,
        scale: sup * wf.powi(3),
        report,
    };
    let qt = t.quad_tol;

    let g = random_symmetric_weight(sub(2), iv);

    t.certified("hermite_hadamard", bounds::hermite_hadamard(f, iv, qt));
    t.certified("fejer", bounds::fejer(f, &g, iv, qt));
    t.enclosure(
        "hh_midpoint_gap_bounds",
        bounds::midpoint_gap(f, iv, qt)
            .map(|v| (bounds::hh_midpoint_gap_bounds(c, iv), v.value, v.converged)),
    );
    t.enclosure(
        "hh_trapezoid_gap_bounds",
        bounds::trapezoid_gap(f, iv, qt)
            .map(|v| (bounds::hh_trapezoid_gap_bounds(c, iv), v.value, v.converged)),
    );
    for k in 0..=10 {
        let lam = Lambda::new(k as f64 / 10.0).expect("grid value in [0, 1]");
        t.enclosure(
            "chord_gap_bounds",
            bounds::chord_gap(f, iv, lam).map(|v| (bounds::chord_gap_bounds(c, iv, lam), v, true)),
        );
        t.enclosure(
            "symmetric_pair_gap_bounds",
            bounds::symmetric_pair_gap(f, iv, lam)
                .map(|v| (bounds::symmetric_pair_gap_bounds(c, iv, lam), v, true)),
        );
    }
    t.certified(
        "fejer_trapezoid_gap_bounds",
        bounds::fejer_trapezoid_gap_bounds(f, &g, c, iv, qt),
    );
    t.certified(
        "fejer_midpoint_gap_bounds",
        bounds::fejer_midpoint_gap_bounds(f, &g, c, iv, qt),
    );
    match bounds::bisection_bounds(f, c, iv, qt) {
        Ok(bis) => {
            t.certified("bisection_bounds", Ok(bis.trapezoid));
            t.certified("bisection_bounds", Ok(bis.midpoint));
        }
        Err(e) => {
            t.certified("bisection_bounds", Err(e.clone()));
            t.certified("bisection_bounds", Err(e));
        }
    }
    let chains = bounds::complement_weight_chains(f, &g, c, iv, qt);
    for side in [0, 1] {
        let chain = chains
            .clone()
            .map(|ch| (if side == 0 { ch.lower } else { ch.upper }, ch.converged));
        t.triple("complement_weight_chains", chain);
    }

    let dec = random_decreasing_weight(sub(3), iv);
    let inc = random_increasing_weight(sub(4), iv);
    let scale = t.scale;
    // both functionals need a nondecreasing f
    let h1 = tilted
        .clone()
        .and_then(|ti| grid_monotone(iv, |x| bounds::h1_functional(&ti.f, &dec, iv, x, qt)));
    t.record(
        "h1_functional",
        h1.map(|(cv, s, v)| {
            (
                cv,
                s,
                scale,
                format!("h1 on grid not nondecreasing from 0: {v:?}"),
            )
        }),
    );
    let h2 =
        tilted.and_then(|ti| grid_monotone(iv, |x| bounds::h2_functional(&ti.f, &inc, iv, x, qt)));
    t.record(
        "h2_functional",
        h2.map(|(cv, s, v)| {
            (
                cv,
                s,
                scale,
                format!("h2 on grid not nondecreasing from 0: {v:?}"),
            )
        }),
    );

    let mid = iv.midpoint();
    let gm = bounds::hh_gap_monotone(f, iv, mid, qt);
    t.pair(
        "hh_gap_monotone",
        gm.clone().map(|g| (g.trapezoid, g.converged)),
        scale,
    );
    t.pair(
        "hh_gap_monotone",
        gm.map(|g| (g.midpoint, g.converged)),
        scale,
    );
    let rc = bounds::refined_gap_chains(f, c, iv, mid, qt);
    t.pair(
        "refined_gap_chains",
        rc.clone().map(|g| (g.lower, g.converged)),
        scale,
    );
    t.pair(
        "refined_gap_chains",
        rc.map(|g| (g.upper, g.converged)),
        scale,
    );

    let pq = NodeWeights::new(r.gen_range(0.5..=3.0), r.gen_range(0.5..=3.0))
        .expect("positive node weights");
    let y = pq.max_half_width(iv) * r.gen_range(0.05..=1.0);
    let gv = random_weight_about(sub(5), pq.node(iv), y);
    t.certified(
        "vasic_lackovic",
        bounds::vasic_lackovic(f, &gv, pq, iv, y, qt),
    );

    means_checks(&mut t, &mut r);
}

fn means_checks(t: &mut Trial<'_>, r: &mut ChaCha8Rng) {
    let a = 10f64.powf(r.gen_range(-1.0..=1.0));
    let b = 10f64.powf(r.gen_range(-1.0..=1.0));
    let lam = Lambda::new(r.gen_range(0.0..=1.0)).expect("value in [0, 1]");
    let p = match r.gen_range(0..3) {
        0 => r.gen_range(-4.0..=-1.05),
        1 => r.gen_range(-0.95..=-0.05),
        _ => r.gen_range(1.0..=4.0),
    };
    let (lo, hi) = (a.min(b), a.max(b));
    let x = lo + r.gen_range(0.0..=1.0) * (hi - lo);
    t.recipe = format!("a={a} b={b} lambda={} p={p} x={x}", lam.value());

    let chain = [
        MeanKind::Harmonic,
        MeanKind::Geometric,
        MeanKind::Logarithmic,
        MeanKind::Identric,
        MeanKind::Arithmetic,
    ]
    .map(|k| means::mean(k, a, b).map(|m| m.value));
    let ordering = chain
        .iter()
        .cloned()
        .collect::<Result<Vec<f64>>>()
        .map(|v| {
            let s = v.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
            (true, s, hi, format!("H, G, L, I, A = {v:?} not ordered"))
        });
    t.record("means_ordering", ordering);

    let al_scale =
        1.0 + lo.powf(p + 1.0) + hi.powf(p + 1.0) + (hi - lo) * (lo.powf(p) + hi.powf(p));
    t.pair(
        "al_gap_check",
        means::al_gap_check(p, lo, hi, x).map(|q| (q, true)),
        al_scale,
    );
    t.pair(
        "harmonic_log_gap_check",
        means::harmonic_log_gap_check(lo, hi, x).map(|q| (q, true)),
        hi / lo,
    );
    let ir = means::identric_ratio_check(lo, hi, x).map(|q| {
        let s = (q.second - q.first).max(1.0 - q.second).max(0.0);
        (
            true,
            s,
            q.first,
            format!("({}, {}) breaks first >= second >= 1", q.first, q.second),
        )
    });
    t.record("identric_ratio_check", ir);

    let ratio = means::young_ratio(a, b, lam);
    let yr = means::young_ratio_bounds(a, b, lam).map(|e| {
        let s = e.excess(ratio).max(1.0 - e.lower);
        (
            true,
            s,
            e.upper,
            format!("{ratio} outside [{}, {}] or lower < 1", e.lower, e.upper),
        )
    });
    t.record("young_ratio_bounds", yr);
    let diff = means::young_difference(a, b, lam);
    let yd = means::young_difference_bounds(a, b, lam).map(|e| {
        (
            true,
            e.excess(diff),
            hi,
            format!("{diff} outside [{}, {}]", e.lower, e.upper),
        )
    });
    t.record("young_difference_bounds", yd);
}

/// Runs `trials` independent trials of [`CHECKS_PER_TRIAL`] checks each.
///
/// A check fails when its shortfall exceeds `10·tol` times the trial's
/// magnitude; a check whose oracle did not converge is inconclusive.
pub fn falsify(trials: u64, seed: u64, tol: f64) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange("trials must be ≥ 1".to_owned()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut report = TrialReport::empty(seed, trials);
    for index in 0..trials {
        run_trial(index, seed, tol, &mut report);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{check_monotone, check_symmetry, SYMMETRY_TOL};
    use std::f64::consts::E;

    fn recipe(c: [f64; 6], a: f64, b: f64) -> Recipe {
        Recipe {
            c,
            shift: 1.0 - a,
            a,
            b,
        }
    }

    #[test]
    fn quadratic_family_has_equal_bounds() {
        let inst =
            ConvexInstance::from_recipe(recipe([1.0, 0.0, 0.5, 0.0, -2.0, 3.0], 0.0, 2.0)).unwrap();
        assert_eq!((inst.curvature.m(), inst.curvature.big_m()), (2.0, 2.0));
        assert_eq!(inst.curvature.provenance(), Provenance::Exact);
        assert_eq!(inst.recipe.expr().to_string(), "1*x^2 - 2*x + 3");
    }

    #[test]
    fn exponential_curvature_from_endpoints() {
        let inst =
            ConvexInstance::from_recipe(recipe([0.0, 1.0, 1.0, 0.0, 0.0, 0.0], 0.0, 1.0)).unwrap();
        assert_eq!(inst.curvature.m(), 1.0);
        assert!((inst.curvature.big_m() - E).abs() < 1e-15);
    }

    #[test]
    fn generated_bounds_enclose_sampled_curvature() {
        for seed in 0..200 {
            let inst = random_convex_instance(seed);
            let (m, big_m) = (inst.curvature.m(), inst.curvature.big_m());
            assert!(m >= 0.0);
            for x in inst.interval.uniform_points(257) {
                let v = inst.f.second(x).unwrap();
                let tol = 1e-12 * (1.0 + v.abs());
                assert!(
                    m - tol <= v && v <= big_m + tol,
                    "seed {seed} x {x}: {m} <= {v} <= {big_m}"
                );
            }
        }
    }

    #[test]
    fn tilt_keeps_curvature() {
        for seed in 0..50 {
            let inst = random_convex_instance(seed);
            let t = inst.nondecreasing().unwrap();
            assert_eq!(
                (t.curvature.m(), t.curvature.big_m()),
                (inst.curvature.m(), inst.curvature.big_m())
            );
            assert!(t.f.first(t.interval.a()).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let (p, q) = (random_convex_instance(7), random_convex_instance(7));
        assert_eq!(p.recipe, q.recipe);
        assert_eq!(p.f, q.f);
        let i = p.interval;
        assert_eq!(
            random_symmetric_weight(3, &i),
            random_symmetric_weight(3, &i)
        );
        assert_ne!(random_convex_instance(8).recipe, p.recipe);
    }

    #[test]
    fn symmetrized_examples() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let g = symmetrize(&Expr::Var, &i);
        for x in i.uniform_points(11) {
            assert!((g.eval(x).unwrap() - 0.5).abs() < 1e-15);
        }
        let g = symmetrize(&"x^2".parse().unwrap(), &i);
        for x in i.uniform_points(11) {
            let want = (x * x + (1.0 - x) * (1.0 - x)) / 2.0;
            assert!((g.eval(x).unwrap() - want).abs() < 1e-15);
        }
        assert!(check_symmetry(&g, &i, 101, SYMMETRY_TOL).unwrap());
    }

    #[test]
    fn generated_weights_have_their_shape() {
        for seed in 0..50 {
            let inst = random_convex_instance(seed);
            let i = inst.interval;
            let g = random_symmetric_weight(seed, &i);
            assert!(check_symmetry(&g, &i, 101, SYMMETRY_TOL).unwrap());
            for x in i.uniform_points(101) {
                let v = g.eval(x).unwrap();
                assert!((0.0..=1.0).contains(&v), "{v}");
            }
            let dec = random_decreasing_weight(seed, &i);
            assert!(check_monotone(&dec, &i, 101).unwrap().is_nonincreasing());
            let inc = random_increasing_weight(seed, &i);
            assert!(check_monotone(&inc, &i, 101).unwrap().is_nondecreasing());
            let about = random_weight_about(seed, i.midpoint(), i.width() / 4.0);
            let window = Interval::new(
                i.midpoint() - i.width() / 4.0,
                i.midpoint() + i.width() / 4.0,
            )
            .unwrap();
            assert!(check_symmetry(&about, &window, 101, SYMMETRY_TOL).unwrap());
        }
    }

    #[test]
    fn trial_seeds_differ() {
        let s: Vec<u64> = (0..100).map(|i| trial_seed(42, i)).collect();
        let mut d = s.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), s.len());
    }

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let r = falsify(5, 1, 1e-10).unwrap();
        assert_eq!(r.failed, 0, "{:#?}", r.failures);
        assert_eq!(r.passed + r.failed + r.inconclusive, 5 * CHECKS_PER_TRIAL);
        assert_eq!(r, falsify(5, 1, 1e-10).unwrap());
        assert_eq!(r.coverage.len(), 21);
        assert!(r.coverage.values().all(|&n| n >= 5));
    }

    #[test]
    fn quadratic_trial_is_tight() {
        let seed = (0..)
            .find(|&i| {
                let r = random_convex_instance(trial_seed(0, i)).recipe;
                r.c[1] == 0.0 && r.c[3] == 0.0
            })
            .unwrap();
        let mut report = TrialReport::empty(0, 1);
        run_trial(seed, 0, 1e-10, &mut report);
        assert_eq!(report.failed, 0);
        assert_eq!(report.passed, CHECKS_PER_TRIAL);
        assert!(
            report.worst_violation <= 1e-12,
            "{}",
            report.worst_violation
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(
            matches!(falsify(0, 1, 1e-10), Err(Error::ParameterOutOfRange(m)) if m.contains("trials must be"))
        );
        assert!(matches!(
            falsify(1, 1, 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }
}

//! The `fejer` command-line front end.
//!
//! Exit codes: `0` when every certificate contains its target, `1` on a
//! usage or input error, `2` when a violation is detected.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, Certified};
use crate::error::{Error, Result};
use crate::expr::{curvature_range, parse, FunctionSpec};
use crate::means::{self, MeanKind};
use crate::quadrature::DEFAULT_TOL;
use crate::types::{
    enclosure_contains, make_interval, CurvatureBounds, Enclosure, Interval, Lambda, NodeWeights,
    Provenance, WeightSpec,
};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Chebyshev samples used when `--m/--M` are not given.
pub const CURVATURE_SAMPLES: usize = 257;

#[derive(Debug, Parser)]
#[command(
    name = "fejer",
    version,
    about = "Certified Hermite–Hadamard and Fejér enclosures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enclose integral means and convexity gaps of a convex function.
    #[command(allow_negative_numbers = true)]
    Bounds(BoundsArgs),
    /// Refinements of the weighted arithmetic–geometric mean inequality.
    #[command(allow_negative_numbers = true)]
    Young(YoungArgs),
    /// Special means of two positive numbers.
    #[command(allow_negative_numbers = true)]
    Means(MeansArgs),
    /// Randomized falsification run; prints a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Hh,
    Fejer,
    MidpointGap,
    TrapezoidGap,
    ChordGap,
    SymmetricPairGap,
    FejerTrapezoidGap,
    FejerMidpointGap,
    Bisection,
    VasicLackovic,
    All,
}

const EVERY_RULE: [RuleArg; 10] = [
    RuleArg::Hh,
    RuleArg::Fejer,
    RuleArg::MidpointGap,
    RuleArg::TrapezoidGap,
    RuleArg::ChordGap,
    RuleArg::SymmetricPairGap,
    RuleArg::FejerTrapezoidGap,
    RuleArg::FejerMidpointGap,
    RuleArg::Bisection,
    RuleArg::VasicLackovic,
];

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Convex function of x, e.g. "exp(x)" or "x^2 - log(x)".
    #[arg(long)]
    f: String,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    /// Nonnegative weight of x for the weighted rules (default 1).
    #[arg(long)]
    g: Option<String>,
    /// λ for the chord and symmetric-pair gaps.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Lower curvature bound; sampled from f'' when omitted.
    #[arg(long, requires = "big_m")]
    m: Option<f64>,
    /// Upper curvature bound.
    #[arg(long = "M", id = "big_m", requires = "m")]
    big_m: Option<f64>,
    #[arg(long, value_enum, default_value = "all")]
    rule: RuleArg,
    /// Refuse sampled curvature bounds.
    #[arg(long)]
    require_exact: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Node weights and window half-width for vasic-lackovic.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Defaults to the largest admissible half-width.
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    Ratio,
    Difference,
    Both,
}

#[derive(Debug, Args)]
struct YoungArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "both")]
    form: Form,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct MeansArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    /// Order of the power and p-logarithmic means.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoints {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// One enclosure checked against its target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub rule: String,
    pub interval: Endpoints,
    pub inputs: BTreeMap<String, String>,
    pub enclosure: Bracket,
    pub oracle_value: f64,
    pub oracle_converged: bool,
    pub contained: bool,
    pub curvature_provenance: String,
    #[serde(skip)]
    target: String,
}

impl Certificate {
    fn new(
        enclosure: &Enclosure,
        value: f64,
        converged: bool,
        interval: Endpoints,
        inputs: &BTreeMap<String, String>,
        provenance: &str,
        tol: f64,
    ) -> Self {
        Self {
            rule: enclosure.rule.name().to_owned(),
            interval,
            inputs: inputs.clone(),
            enclosure: Bracket {
                lower: enclosure.lower,
                upper: enclosure.upper,
            },
            oracle_value: value,
            oracle_converged: converged,
            contained: enclosure_contains(enclosure, value, 10.0 * tol),
            curvature_provenance: provenance.to_owned(),
            target: enclosure.target.clone(),
        }
    }
}

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mantissa, e) = s.split_once('e').expect("scientific format");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    };
    if s == "-0" {
        "0".to_owned()
    } else {
        s
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(&a, out, err),
        Command::Young(a) => cmd_young(&a, out),
        Command::Means(a) => cmd_means(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::ParameterOutOfRange(format!("write failed: {e}"))
}

fn emit_certificates(certs: &[Certificate], json: bool, out: &mut dyn Write) -> Result<i32> {
    if json {
        let text = serde_json::to_string_pretty(certs).expect("certificates serialize");
        writeln!(out, "{text}").map_err(io)?;
    } else {
        for c in certs {
            write_certificate(c, out).map_err(io)?;
        }
    }
    Ok(if certs.iter().all(|c| c.contained) {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn write_certificate(c: &Certificate, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{}", c.rule)?;
    writeln!(
        out,
        "  interval:   [{}, {}]",
        sig12(c.interval.a),
        sig12(c.interval.b)
    )?;
    if !c.inputs.is_empty() {
        let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "  inputs:     {}", inputs.join(", "))?;
    }
    writeln!(out, "  target:     {}", c.target)?;
    writeln!(
        out,
        "  enclosure:  [{}, {}]",
        sig12(c.enclosure.lower),
        sig12(c.enclosure.upper)
    )?;
    let conv = if c.oracle_converged {
        "converged"
    } else {
        "not converged"
    };
    writeln!(out, "  value:      {} ({conv})", sig12(c.oracle_value))?;
    writeln!(
        out,
        "  contained:  {}",
        if c.contained { "yes" } else { "NO" }
    )?;
    writeln!(out, "  curvature:  {}", c.curvature_provenance)
}

/// Curvature bounds from the flags, or sampled from `f''`.
fn curvature(args: &BoundsArgs, f: &FunctionSpec, interval: &Interval) -> Result<CurvatureBounds> {
    let c = match (args.m, args.big_m) {
        (Some(m), Some(big_m)) => CurvatureBounds::new(m, big_m, Provenance::UserSupplied)?,
        _ => curvature_range(f, interval, CURVATURE_SAMPLES)?,
    };
    if args.require_exact && c.provenance() == Provenance::SampledHeuristic {
        return Err(Error::ParameterOutOfRange(
            "--require-exact: curvature bounds are only sampled; pass --m and --M".to_owned(),
        ));
    }
    Ok(c)
}

fn needs_curvature(rule: RuleArg) -> bool {
    !matches!(rule, RuleArg::Hh | RuleArg::Fejer | RuleArg::VasicLackovic)
}

fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(Error::InvalidTolerance(args.tol));
    }
    let (interval, swapped) = make_interval(args.a, args.b)?;
    if swapped {
        writeln!(
            err,
            "note: a > b; endpoints swapped to [{}, {}]",
            sig12(interval.a()),
            sig12(interval.b())
        )
        .map_err(io)?;
    }
    let f = FunctionSpec::parse(&args.f)?;
    let g_text = args.g.clone().unwrap_or_else(|| "1".to_owned());
    let g = WeightSpec::new(parse(&g_text)?, interval.midpoint());
    let lambda = Lambda::new(args.lambda)?;
    let rules: Vec<RuleArg> = if args.rule == RuleArg::All {
        EVERY_RULE.to_vec()
    } else {
        vec![args.rule]
    };
    let c = if rules.iter().any(|&r| needs_curvature(r)) {
        Some(curvature(args, &f, &interval)?)
    } else {
        None
    };
    let ends = Endpoints {
        a: interval.a(),
        b: interval.b(),
    };
    let tol = args.tol;
    let mut base = BTreeMap::new();
    base.insert("f".to_owned(), args.f.clone());
    base.insert("tol".to_owned(), format!("{tol:e}"));
    if swapped {
        base.insert("swapped".to_owned(), "true".to_owned());
    }

    let mut certs = Vec::new();
    for rule in rules {
        let mut inputs = base.clone();
        let weighted = matches!(
            rule,
            RuleArg::Fejer
                | RuleArg::FejerTrapezoidGap
                | RuleArg::FejerMidpointGap
                | RuleArg::VasicLackovic
        );
        if weighted {
            inputs.insert("g".to_owned(), g_text.clone());
        }
        if matches!(rule, RuleArg::ChordGap | RuleArg::SymmetricPairGap) {
            inputs.insert("lambda".to_owned(), format!("{}", args.lambda));
        }
        let provenance = match (&c, needs_curvature(rule)) {
            (Some(c), true) => {
                inputs.insert("m".to_owned(), format!("{}", c.m()));
                inputs.insert("M".to_owned(), format!("{}", c.big_m()));
                c.provenance().to_string()
            }
            _ => "none".to_owned(),
        };
        let c = c.as_ref();
        let cert = |e: &Enclosure, v: f64, conv: bool, inputs: &BTreeMap<String, String>| {
            Certificate::new(e, v, conv, ends, inputs, &provenance, tol)
        };
        let from = |r: Certified, inputs: &BTreeMap<String, String>| {
            cert(&r.enclosure, r.target, r.converged, inputs)
        };
        let c = || c.expect("curvature computed for this rule");
        match rule {
            RuleArg::Hh => certs.push(from(bounds::hermite_hadamard(&f, &interval, tol)?, &inputs)),
            RuleArg::Fejer => certs.push(from(bounds::fejer(&f, &g, &interval, tol)?, &inputs)),
            RuleArg::MidpointGap => {
                let v = bounds::midpoint_gap(&f, &interval, tol)?;
                let e = bounds::hh_midpoint_gap_bounds(c(), &interval);
                certs.push(cert(&e, v.value, v.converged, &inputs));
            }
            RuleArg::TrapezoidGap => {
                let v = bounds::trapezoid_gap(&f, &interval, tol)?;
                let e = bounds::hh_trapezoid_gap_bounds(c(), &interval);
                certs.push(cert(&e, v.value, v.converged, &inputs));
            }
            RuleArg::ChordGap => {
                let v = bounds::chord_gap(&f, &interval, lambda)?;
                let e = bounds::chord_gap_bounds(c(), &interval, lambda);
                certs.push(cert(&e, v, true, &inputs));
            }
            RuleArg::SymmetricPairGap => {
                let v = bounds::symmetric_pair_gap(&f, &interval, lambda)?;
                let e = bounds::symmetric_pair_gap_bounds(c(), &interval, lambda);
                certs.push(cert(&e, v, true, &inputs));
            }
            RuleArg::FejerTrapezoidGap => certs.push(from(
                bounds::fejer_trapezoid_gap_bounds(&f, &g, c(), &interval, tol)?,
                &inputs,
            )),
            RuleArg::FejerMidpointGap => certs.push(from(
                bounds::fejer_midpoint_gap_bounds(&f, &g, c(), &interval, tol)?,
                &inputs,
            )),
            RuleArg::Bisection => {
                let b = bounds::bisection_bounds(&f, c(), &interval, tol)?;
                certs.push(from(b.trapezoid, &inputs));
                certs.push(from(b.midpoint, &inputs));
            }
            RuleArg::VasicLackovic => {
                let pq = NodeWeights::new(args.p, args.q)?;
                let y = args.y.unwrap_or_else(|| pq.max_half_width(&interval));
                inputs.insert("p".to_owned(), format!("{}", args.p));
                inputs.insert("q".to_owned(), format!("{}", args.q));
                inputs.insert("y".to_owned(), format!("{y}"));
                let g = WeightSpec::new(g.function.clone(), pq.node(&interval));
                let r = bounds::vasic_lackovic(&f, &g, pq, &interval, y, tol)?;
                certs.push(from(r, &inputs));
            }
            RuleArg::All => unreachable!("expanded above"),
        }
    }
    emit_certificates(&certs, args.json, out)
}

fn cmd_young(args: &YoungArgs, out: &mut dyn Write) -> Result<i32> {
    let lambda = Lambda::new(args.lambda)?;
    let (a, b) = (args.a, args.b);
    let mut inputs = BTreeMap::new();
    inputs.insert("lambda".to_owned(), format!("{}", args.lambda));
    let ends = Endpoints { a, b };
    let mut certs = Vec::new();
    if matches!(args.form, Form::Ratio | Form::Both) {
        let e = means::young_ratio_bounds(a, b, lambda)?;
        let v = means::young_ratio(a, b, lambda);
        certs.push(Certificate::new(&e, v, true, ends, &inputs, "exact", 0.0));
    }
    if matches!(args.form, Form::Difference | Form::Both) {
        let e = means::young_difference_bounds(a, b, lambda)?;
        let v = means::young_difference(a, b, lambda);
        certs.push(Certificate::new(&e, v, true, ends, &inputs, "exact", 0.0));
    }
    // closed-form targets: allow rounding relative to the value
    for c in &mut certs {
        let slack = 1e-12 * c.oracle_value.abs().max(c.enclosure.upper.abs()).max(1.0);
        c.contained = c.enclosure.lower - slack <= c.oracle_value
            && c.oracle_value <= c.enclosure.upper + slack;
    }
    emit_certificates(&certs, args.json, out)
}

#[derive(Debug, Serialize)]
struct MeansTable {
    a: f64,
    b: f64,
    p: f64,
    means: BTreeMap<String, f64>,
    ordering: BTreeMap<String, bool>,
}

fn cmd_means(args: &MeansArgs, out: &mut dyn Write) -> Result<i32> {
    let (a, b, p) = (args.a, args.b, args.p);
    let kinds = [
        ("A", MeanKind::Arithmetic),
        ("G", MeanKind::Geometric),
        ("H", MeanKind::Harmonic),
        ("L", MeanKind::Logarithmic),
        ("I", MeanKind::Identric),
        ("A_p", MeanKind::Power(p)),
        ("L_p", MeanKind::PLog(p)),
    ];
    let mut values = Vec::new();
    for (name, kind) in kinds {
        values.push((name, means::mean(kind, a, b)?.value));
    }
    let get = |n: &str| values.iter().find(|(k, _)| *k == n).expect("computed").1;
    // relative rounding allowance when two means coincide
    let le = |x: f64, y: f64| x <= y * (1.0 + 1e-12);
    let ordering = [
        ("H<=G", "H", "G"),
        ("G<=L", "G", "L"),
        ("L<=I", "L", "I"),
        ("I<=A", "I", "A"),
    ]
    .map(|(label, x, y)| (label, le(get(x), get(y))));
    let ok = ordering.iter().all(|(_, v)| *v);
    if args.json {
        let table = MeansTable {
            a,
            b,
            p,
            means: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ordering: ordering.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        };
        let text = serde_json::to_string_pretty(&table).expect("table serializes");
        writeln!(out, "{text}").map_err(io)?;
    } else {
        for (name, v) in &values {
            writeln!(out, "{name:<4} {}", sig12(*v)).map_err(io)?;
        }
        for (label, v) in &ordering {
            writeln!(out, "{label}: {v}").map_err(io)?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let report = verify::falsify(args.trials, args.seed, args.tol)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    writeln!(out, "{text}").map_err(io)?;
    Ok(if report.failed == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["fejer"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn sig12_formats() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(0.25), "0.25");
        assert_eq!(sig12(5.0), "5");
        assert_eq!(sig12(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(sig12(1e-9), "1e-9");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e14");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn hh_certificate() {
        let (code, out, _) = run_str(&[
            "bounds", "--f", "x^2", "--a", "0", "--b", "1", "--rule", "hh", "--json",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let c = &v[0];
        assert_eq!(c["rule"], "hermite-hadamard");
        assert_eq!(c["enclosure"]["lower"], 0.25);
        assert_eq!(c["enclosure"]["upper"], 0.5);
        assert!((c["oracle_value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(c["contained"], true);
    }

    #[test]
    fn swapped_endpoints_note() {
        let (c1, o1, e1) = run_str(&[
            "bounds", "--f", "x^2", "--a", "1", "--b", "0", "--rule", "hh",
        ]);
        let (c0, o0, _) = run_str(&[
            "bounds", "--f", "x^2", "--a", "0", "--b", "1", "--rule", "hh",
        ]);
        assert_eq!((c0, c1), (0, 0));
        assert!(e1.contains("swapped"));
        assert_eq!(o1.replace("swapped=true, ", ""), o0);
    }

    #[test]
    fn input_errors_exit_one() {
        assert_eq!(
            run_str(&["bounds", "--f", "x^", "--a", "0", "--b", "1"]).0,
            EXIT_INPUT
        );
        assert_eq!(
            run_str(&["bounds", "--f", "-x^2", "--a", "0", "--b", "1", "--rule", "hh"]).0,
            EXIT_INPUT
        );
        assert_eq!(
            run_str(&["young", "--a", "-1", "--b", "2", "--lambda", "0.5"]).0,
            EXIT_INPUT
        );
        assert_eq!(run_str(&["means", "--a", "0", "--b", "2"]).0, EXIT_INPUT);
        assert_eq!(
            run_str(&["bounds", "--f", "x^2", "--a", "0", "--b", "1", "--m", "2"]).0,
            EXIT_INPUT
        );
        let (code, _, err) = run_str(&["verify", "--trials", "0", "--seed", "1"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("trials must be ≥ 1"), "{err}");
    }
}

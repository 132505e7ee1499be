//! A small expression language in one variable `x`.
//!
//! Expressions are parsed from text, evaluated in double precision and
//! differentiated symbolically. The grammar covers the families needed for
//! convex test functions and weights: powers, `exp`, `log`, rational
//! expressions and `abs`.

mod curvature;
mod diff;
mod parse;

use std::fmt;

use thiserror::Error;

pub use curvature::{curvature_range, FunctionSpec};
pub use diff::differentiate;
pub use parse::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

/// Evaluation left the natural domain of a subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("domain error at x = {x}: {reason} in `{node}`")]
pub struct EvalError {
    pub node: String,
    pub x: f64,
    pub reason: &'static str,
}

impl Expr {
    pub fn unary(op: UnaryOp, e: Expr) -> Self {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Self {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Unary(_, e) => e.contains_var(),
            Expr::Binary(_, l, r) => l.contains_var() || r.contains_var(),
        }
    }

    pub fn contains_op(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Const(_) | Expr::Var => false,
            Expr::Unary(_, e) => e.contains_op(pred),
            Expr::Binary(_, l, r) => l.contains_op(pred) || r.contains_op(pred),
        }
    }

    /// Replaces every `x` with `inner`.
    pub fn compose(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => inner.clone(),
            Expr::Unary(op, e) => Expr::unary(*op, e.compose(inner)),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.compose(inner), r.compose(inner)),
        }
    }

    /// Value of a subtree without `x`, if it evaluates cleanly.
    pub fn constant_value(&self) -> Option<f64> {
        if self.contains_var() {
            None
        } else {
            self.eval(0.0).ok()
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var => Ok(x),
            Expr::Unary(op, e) => {
                let v = e.eval(x)?;
                match op {
                    UnaryOp::Neg => Ok(-v),
                    UnaryOp::Exp => Ok(v.exp()),
                    UnaryOp::Abs => Ok(v.abs()),
                    UnaryOp::Log => {
                        if v > 0.0 {
                            Ok(v.ln())
                        } else {
                            Err(self.domain_error(x, "log of a nonpositive number"))
                        }
                    }
                }
            }
            Expr::Binary(op, l, r) => {
                let u = l.eval(x)?;
                let v = r.eval(x)?;
                match op {
                    BinaryOp::Add => Ok(u + v),
                    BinaryOp::Sub => Ok(u - v),
                    BinaryOp::Mul => Ok(u * v),
                    BinaryOp::Div => {
                        if v == 0.0 {
                            Err(self.domain_error(x, "division by zero"))
                        } else {
                            Ok(u / v)
                        }
                    }
                    BinaryOp::Pow => {
                        let p = if v.fract() == 0.0 && v.abs() <= 64.0 {
                            u.powi(v as i32)
                        } else {
                            u.powf(v)
                        };
                        if p.is_nan() {
                            Err(self.domain_error(x, "power outside its domain"))
                        } else if u == 0.0 && v < 0.0 {
                            Err(self.domain_error(x, "division by zero"))
                        } else {
                            Ok(p)
                        }
                    }
                }
            }
        }
    }

    fn domain_error(&self, x: f64, reason: &'static str) -> EvalError {
        EvalError {
            node: self.to_string(),
            x,
            reason,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Binary(BinaryOp::Pow, ..) => 4,
            Expr::Const(c) if c.is_sign_negative() => 3,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Const(c) if c.is_sign_negative() => write!(f, "-{}", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                e.write_at(f, 3)
            }
            Expr::Unary(op, e) => {
                let name = match op {
                    UnaryOp::Exp => "exp",
                    UnaryOp::Log => "log",
                    UnaryOp::Abs => "abs",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}(")?;
                e.write_at(f, 0)?;
                f.write_str(")")
            }
            Expr::Binary(op, l, r) => {
                let (sym, lp, rp) = match op {
                    BinaryOp::Add => (" + ", 1, 2),
                    BinaryOp::Sub => (" - ", 1, 2),
                    BinaryOp::Mul => ("*", 2, 3),
                    BinaryOp::Div => ("/", 2, 3),
                    BinaryOp::Pow => ("^", 5, 3),
                };
                l.write_at(f, lp)?;
                f.write_str(sym)?;
                r.write_at(f, rp)
            }
        }
    }
}

/// Prints with the minimum parentheses needed for [`parse`] to rebuild the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        parse(s).unwrap().eval(x).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ev("x^2", 3.0), 9.0);
        assert_eq!(ev("exp(x)", 0.0), 1.0);
        assert_eq!(ev("-log(x)", 1.0), 0.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("abs(x - 3)", 1.0), 2.0);
    }

    #[test]
    fn eval_domain_errors_name_the_node() {
        let err = parse("1 + log(x)").unwrap().eval(0.0).unwrap_err();
        assert_eq!(err.node, "log(x)");
        let err = parse("1/(x - 1)").unwrap().eval(1.0).unwrap_err();
        assert_eq!(err.node, "1/(x - 1)");
        assert!(parse("x^0.5").unwrap().eval(-1.0).is_err());
        assert!(parse("x^-1").unwrap().eval(0.0).is_err());
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        for (src, shown) in [
            ("x^2", "x^2"),
            ("-(1/x)", "-(1/x)"),
            ("(x + 1)*(x - 1)", "(x + 1)*(x - 1)"),
            ("x - (x - 1)", "x - (x - 1)"),
            ("(-x)^2", "(-x)^2"),
            ("-x^2", "-x^2"),
            ("(x^2)^3", "(x^2)^3"),
            ("x^2^3", "x^2^3"),
            ("2 * exp( x )", "2*exp(x)"),
        ] {
            assert_eq!(parse(src).unwrap().to_string(), shown, "{src}");
        }
    }
}

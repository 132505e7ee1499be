//! Symbolic differentiation with light simplification.

use super::{BinaryOp, Expr, UnaryOp};
use crate::error::{Error, Result};

/// `d/dx` of `f`. Exponents must not depend on `x` and `abs` is rejected.
pub fn differentiate(f: &Expr) -> Result<Expr> {
    if !f.contains_var() {
        return Ok(Expr::Const(0.0));
    }
    Ok(match f {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Unary(op, u) => {
            let du = differentiate(u)?;
            match op {
                UnaryOp::Neg => neg(du),
                UnaryOp::Exp => mul(f.clone(), du),
                UnaryOp::Log => div(du, (**u).clone()),
                UnaryOp::Abs => return Err(Error::NonSmooth(f.to_string())),
            }
        }
        Expr::Binary(op, u, v) => match op {
            BinaryOp::Add => add(differentiate(u)?, differentiate(v)?),
            BinaryOp::Sub => sub(differentiate(u)?, differentiate(v)?),
            BinaryOp::Mul => {
                let (du, dv) = (differentiate(u)?, differentiate(v)?);
                add(mul(du, (**v).clone()), mul((**u).clone(), dv))
            }
            BinaryOp::Div => {
                let (du, dv) = (differentiate(u)?, differentiate(v)?);
                let v2 = pow((**v).clone(), Expr::Const(2.0));
                if !v.contains_var() {
                    div(du, (**v).clone())
                } else if !u.contains_var() {
                    neg(div(mul((**u).clone(), dv), v2))
                } else {
                    div(sub(mul(du, (**v).clone()), mul((**u).clone(), dv)), v2)
                }
            }
            BinaryOp::Pow => {
                if v.contains_var() {
                    return Err(Error::NonConstantExponent(f.to_string()));
                }
                let c = fold(v);
                let du = differentiate(u)?;
                let lowered = pow((**u).clone(), sub(c.clone(), Expr::Const(1.0)));
                mul(mul(c, lowered), du)
            }
        },
    })
}

/// Collapses `x`-free subtrees to constants where they evaluate cleanly.
fn fold(e: &Expr) -> Expr {
    match e.constant_value() {
        Some(c) => Expr::Const(c),
        None => e.clone(),
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Unary(UnaryOp::Neg, inner) => *inner,
        e => Expr::unary(UnaryOp::Neg, e),
    }
}

fn add(l: Expr, r: Expr) -> Expr {
    match (&l, &r) {
        (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
        (Expr::Const(z), _) if *z == 0.0 => r,
        (_, Expr::Const(z)) if *z == 0.0 => l,
        (_, Expr::Unary(UnaryOp::Neg, inner)) => sub(l, (**inner).clone()),
        _ => Expr::binary(BinaryOp::Add, l, r),
    }
}

fn sub(l: Expr, r: Expr) -> Expr {
    match (&l, &r) {
        (Expr::Const(a), Expr::Const(b)) => Expr::Const(a - b),
        (Expr::Const(z), _) if *z == 0.0 => neg(r),
        (_, Expr::Const(z)) if *z == 0.0 => l,
        _ => Expr::binary(BinaryOp::Sub, l, r),
    }
}

fn mul(l: Expr, r: Expr) -> Expr {
    match (&l, &r) {
        (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
        (Expr::Const(z), _) | (_, Expr::Const(z)) if *z == 0.0 => Expr::Const(0.0),
        (Expr::Const(o), _) if *o == 1.0 => r,
        (_, Expr::Const(o)) if *o == 1.0 => l,
        (Expr::Const(o), _) if *o == -1.0 => neg(r),
        (_, Expr::Const(o)) if *o == -1.0 => neg(l),
        // keep constants on the left: `u*2` becomes `2*u`
        (_, Expr::Const(_)) => mul(r, l),
        (Expr::Const(a), Expr::Binary(BinaryOp::Mul, inner, rest)) => match **inner {
            Expr::Const(b) => mul(Expr::Const(a * b), (**rest).clone()),
            _ => Expr::binary(BinaryOp::Mul, l, r),
        },
        _ => Expr::binary(BinaryOp::Mul, l, r),
    }
}

fn div(l: Expr, r: Expr) -> Expr {
    match (&l, &r) {
        (Expr::Const(a), Expr::Const(b)) if *b != 0.0 => Expr::Const(a / b),
        (Expr::Const(z), _) if *z == 0.0 => Expr::Const(0.0),
        (_, Expr::Const(o)) if *o == 1.0 => l,
        _ => Expr::binary(BinaryOp::Div, l, r),
    }
}

fn pow(base: Expr, exponent: Expr) -> Expr {
    match (&base, &exponent) {
        (_, Expr::Const(z)) if *z == 0.0 => Expr::Const(1.0),
        (_, Expr::Const(o)) if *o == 1.0 => base,
        (Expr::Const(a), Expr::Const(b)) => {
            let v = a.powf(*b);
            if v.is_finite() {
                Expr::Const(v)
            } else {
                Expr::binary(BinaryOp::Pow, base, exponent)
            }
        }
        _ => Expr::binary(BinaryOp::Pow, base, exponent),
    }
}

use std::fmt;

use num_traits::{ToPrimitive, Zero};

use super::{Func, Node};
use crate::error::ExprError;
use crate::scalar::{format_rational, Rational};

/// A value that is exact while only rational operations were applied.
#[derive(Debug, Clone)]
pub enum Number {
    Exact(Rational),
    Approx(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Approx(_) => None,
        }
    }

    fn zero() -> Number {
        Number::Exact(Rational::zero())
    }

    fn one() -> Number {
        Number::Exact(Rational::from_integer(1.into()))
    }

    fn is_zero(&self) -> bool {
        match self {
            Number::Exact(r) => r.is_zero(),
            Number::Approx(x) => *x == 0.0,
        }
    }

    fn binary(
        &self,
        other: &Number,
        exact: impl Fn(&Rational, &Rational) -> Rational,
        approx: impl Fn(f64, f64) -> f64,
    ) -> Number {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => Number::Exact(exact(a, b)),
            _ => Number::Approx(approx(self.to_f64(), other.to_f64())),
        }
    }

    fn add(&self, o: &Number) -> Number {
        self.binary(o, |a, b| a + b, |a, b| a + b)
    }

    fn sub(&self, o: &Number) -> Number {
        self.binary(o, |a, b| a - b, |a, b| a - b)
    }

    fn mul(&self, o: &Number) -> Number {
        // Keep exact zeros exact so that absent variables give exact 0 partials.
        if self.is_zero() && self.is_exact() || o.is_zero() && o.is_exact() {
            return Number::zero();
        }
        self.binary(o, |a, b| a * b, |a, b| a * b)
    }

    /// Caller guarantees `o` is non-zero.
    fn div(&self, o: &Number) -> Number {
        if self.is_zero() && self.is_exact() {
            return Number::zero();
        }
        self.binary(o, |a, b| a / b, |a, b| a / b)
    }

    fn neg(&self) -> Number {
        match self {
            Number::Exact(r) => Number::Exact(-r),
            Number::Approx(x) => Number::Approx(-x),
        }
    }

    fn powi(&self, k: u32) -> Number {
        match self {
            Number::Exact(r) => Number::Exact(num_traits::pow(r.clone(), k as usize)),
            Number::Approx(x) => Number::Approx(x.powi(k as i32)),
        }
    }

    fn from_i64(k: i64) -> Number {
        Number::Exact(Rational::from_integer(k.into()))
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => f.write_str(&format_rational(r)),
            Number::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Value and directional derivative.
#[derive(Debug, Clone)]
pub(super) struct Dual {
    pub value: Number,
    pub tangent: Number,
}

fn singular(reason: impl Into<String>) -> ExprError {
    ExprError::Singular(reason.into())
}

fn too_close(x: &Number, margin: f64) -> bool {
    if margin > 0.0 {
        x.to_f64().abs() <= margin
    } else {
        x.is_zero()
    }
}

fn finite(x: f64, what: &str) -> Result<f64, ExprError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(singular(format!("{what} is not finite")))
    }
}

/// Forward-mode evaluation; `seed` selects the coordinate to differentiate
/// along. A positive `margin` widens every singularity check to a band.
pub(super) fn eval_dual(
    node: &Node,
    point: &[Number],
    seed: Option<usize>,
    margin: f64,
) -> Result<Dual, ExprError> {
    let rec = |n: &Node| eval_dual(n, point, seed, margin);
    Ok(match node {
        Node::Const(c) => Dual {
            value: Number::Exact(c.clone()),
            tangent: Number::zero(),
        },
        Node::Var(i) => Dual {
            value: point[*i].clone(),
            tangent: if seed == Some(*i) {
                Number::one()
            } else {
                Number::zero()
            },
        },
        Node::Neg(a) => {
            let a = rec(a)?;
            Dual {
                value: a.value.neg(),
                tangent: a.tangent.neg(),
            }
        }
        Node::Add(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            Dual {
                value: a.value.add(&b.value),
                tangent: a.tangent.add(&b.tangent),
            }
        }
        Node::Sub(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            Dual {
                value: a.value.sub(&b.value),
                tangent: a.tangent.sub(&b.tangent),
            }
        }
        Node::Mul(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            Dual {
                value: a.value.mul(&b.value),
                tangent: a.tangent.mul(&b.value).add(&a.value.mul(&b.tangent)),
            }
        }
        Node::Div(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            if too_close(&b.value, margin) {
                return Err(singular("division by zero"));
            }
            let value = a.value.div(&b.value);
            // (a/b)' = (a' - (a/b) b') / b
            let tangent = a.tangent.sub(&value.mul(&b.tangent)).div(&b.value);
            Dual { value, tangent }
        }
        Node::Pow(a, k) => {
            let a = rec(a)?;
            let k = *k;
            if k == 0 {
                return Ok(Dual {
                    value: Number::one(),
                    tangent: Number::zero(),
                });
            }
            let m = k.unsigned_abs();
            if k < 0 && too_close(&a.value, margin) {
                return Err(singular("negative power of zero"));
            }
            let up = a.value.powi(m);
            let up_prev = a.value.powi(m - 1);
            // d(a^m) = m a^(m-1) a'
            let d_up = Number::from_i64(m as i64).mul(&up_prev).mul(&a.tangent);
            if k > 0 {
                Dual {
                    value: up,
                    tangent: d_up,
                }
            } else {
                let value = Number::one().div(&up);
                let tangent = d_up.neg().div(&up.mul(&up));
                Dual { value, tangent }
            }
        }
        Node::Call(func, a) => {
            let a = rec(a)?;
            let x = a.value.to_f64();
            let (fx, dfx) = match func {
                Func::Sin => (x.sin(), x.cos()),
                Func::Cos => (x.cos(), -x.sin()),
                Func::Arctan => (x.atan(), 1.0 / (1.0 + x * x)),
                Func::Exp => {
                    let e = x.exp();
                    (e, e)
                }
                Func::Ln => {
                    if x <= 0.0 || too_close(&a.value, margin) {
                        return Err(singular("ln of a non-positive value"));
                    }
                    (x.ln(), 1.0 / x)
                }
                Func::Sqrt => {
                    if x <= 0.0 || too_close(&a.value, margin) {
                        return Err(singular("sqrt of a non-positive value"));
                    }
                    let s = x.sqrt();
                    (s, 0.5 / s)
                }
            };
            let value = Number::Approx(finite(fx, func.name())?);
            let tangent = if a.tangent.is_zero() && a.tangent.is_exact() {
                Number::zero()
            } else {
                Number::Approx(finite(dfx * a.tangent.to_f64(), func.name())?)
            };
            Dual { value, tangent }
        }
    })
    .and_then(|d| {
        if let Number::Approx(v) = d.value {
            finite(v, "value")?;
        }
        if let Number::Approx(t) = d.tangent {
            finite(t, "derivative")?;
        }
        Ok(d)
    })
}

//! Smooth coordinate functions: parsing, evaluation and exact first partials.
//!
//! Expressions are small immutable ASTs over the coordinates `x0 .. x{d-1}`.
//! Partial derivatives are computed by forward-mode dual numbers at a point;
//! rational-only expressions evaluated at rational points stay exact, and
//! anything touching a transcendental function is promoted to `f64`.
//!
//! The concrete syntax is documented in `docs/expression-grammar.md`.

mod eval;
mod parser;
mod sample;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::ExprError;
use crate::scalar::{format_rational, Rational};
use crate::tensor::Covector;

pub use eval::Number;
pub use sample::{sample_regular_points, LatticeSampler};

/// Elementary unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Arctan,
    Ln,
    Exp,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Sin,
        Func::Cos,
        Func::Arctan,
        Func::Ln,
        Func::Exp,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Arctan => "arctan",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "arctan" | "atan" => Func::Arctan,
            "ln" | "log" => Func::Ln,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Rational),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    /// Integer power.
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

#[allow(clippy::should_implement_trait)]
impl Node {
    pub fn constant(c: Rational) -> Node {
        Node::Const(c)
    }

    pub fn var(i: usize) -> Node {
        Node::Var(i)
    }

    /// Negation; folds into constants so that printed text re-parses to the
    /// same tree.
    pub fn neg(a: Node) -> Node {
        match a {
            Node::Const(c) => Node::Const(-c),
            other => Node::Neg(Box::new(other)),
        }
    }

    pub fn add(a: Node, b: Node) -> Node {
        Node::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Node, b: Node) -> Node {
        Node::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Node, b: Node) -> Node {
        Node::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Node, b: Node) -> Node {
        Node::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Node, k: i32) -> Node {
        Node::Pow(Box::new(a), k)
    }

    pub fn call(f: Func, a: Node) -> Node {
        Node::Call(f, Box::new(a))
    }

    /// `true` when no transcendental function occurs.
    pub fn is_rational(&self) -> bool {
        match self {
            Node::Const(_) | Node::Var(_) => true,
            Node::Neg(a) | Node::Pow(a, _) => a.is_rational(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.is_rational() && b.is_rational()
            }
            Node::Call(..) => false,
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_var(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    fn is_plain_integer(&self) -> bool {
        matches!(self, Node::Const(c) if c.is_integer() && !c.is_negative())
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => {
                if c.is_integer() && !c.is_negative() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "({})", format_rational(c))
                }
            }
            Node::Var(i) => write!(f, "x{i}"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            // `2 / 3` at the start of a term reads as a rational literal.
            Node::Div(a, b) if a.is_plain_integer() && b.is_plain_integer() => {
                write!(f, "(({a}) / {b})")
            }
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, k) => write!(f, "({a} ^ {k})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A parsed expression over `dim` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Arc<Node>,
    dim: usize,
}

impl Expression {
    pub fn new(root: Node, dim: usize) -> Result<Self, ExprError> {
        if let Some(i) = root.max_var() {
            if i >= dim {
                return Err(ExprError::IndexOutOfRange { index: i, dim });
            }
        }
        Ok(Expression {
            root: Arc::new(root),
            dim,
        })
    }

    pub fn parse(text: &str, dim: usize) -> Result<Self, ExprError> {
        let root = parser::parse(text, dim)?;
        Ok(Expression {
            root: Arc::new(root),
            dim,
        })
    }

    pub fn constant(c: Rational, dim: usize) -> Self {
        Expression {
            root: Arc::new(Node::Const(c)),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn is_rational(&self) -> bool {
        self.root.is_rational()
    }

    fn check_point(&self, p: &Point) -> Result<(), ExprError> {
        if p.dim() != self.dim {
            return Err(ExprError::PointDimension {
                expected: self.dim,
                found: p.dim(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, p: &Point) -> Result<Number, ExprError> {
        self.check_point(p)?;
        Ok(eval::eval_dual(&self.root, &p.0, None, 0.0)?.value)
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, ExprError> {
        self.eval(&Point::from_f64(x)).map(|n| n.to_f64())
    }

    /// `∂e/∂x^i` at `p` by forward-mode AD.
    pub fn partial(&self, i: usize, p: &Point) -> Result<Number, ExprError> {
        self.check_point(p)?;
        if i >= self.dim {
            return Err(ExprError::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        Ok(eval::eval_dual(&self.root, &p.0, Some(i), 0.0)?.tangent)
    }

    pub fn differential(&self, p: &Point) -> Result<Covector<Number>, ExprError> {
        (0..self.dim)
            .map(|i| self.partial(i, p))
            .collect::<Result<Vec<_>, _>>()
            .map(Covector)
    }

    pub fn differential_f64(&self, p: &Point) -> Result<Covector<f64>, ExprError> {
        Ok(Covector(
            self.differential(p)?.0.iter().map(Number::to_f64).collect(),
        ))
    }

    /// Evaluates value and all partials while rejecting points where any
    /// divisor, `ln`/`sqrt` argument or negative-power base is within `margin`
    /// of the singular set.
    pub fn check_regular(&self, p: &Point, margin: f64) -> Result<(), ExprError> {
        self.check_point(p)?;
        for i in 0..self.dim {
            eval::eval_dual(&self.root, &p.0, Some(i), margin)?;
        }
        Ok(())
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

/// Parses an expression over `dim` coordinates.
pub fn parse_expr(text: &str, dim: usize) -> Result<Expression, ExprError> {
    Expression::parse(text, dim)
}

pub fn eval(e: &Expression, p: &Point) -> Result<Number, ExprError> {
    e.eval(p)
}

pub fn partial(e: &Expression, i: usize, p: &Point) -> Result<Number, ExprError> {
    e.partial(i, p)
}

pub fn differential(e: &Expression, p: &Point) -> Result<Covector<Number>, ExprError> {
    e.differential(p)
}

/// Coordinates of a point in the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<Number>);

impl Point {
    pub fn from_rationals(coords: Vec<Rational>) -> Self {
        Point(coords.into_iter().map(Number::Exact).collect())
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Point(coords.iter().map(|&x| Number::Approx(x)).collect())
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(
            coords
                .iter()
                .map(|&x| Number::Exact(Rational::from_integer(x.into())))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Number::to_f64).collect()
    }
}

/// Linear combination `a·e1 + e2`, used by property tests.
pub fn linear_combination(a: &Rational, e1: &Expression, e2: &Expression) -> Expression {
    let scaled = if a.is_one() {
        e1.root().clone()
    } else if a.is_zero() {
        Node::Const(Rational::zero())
    } else {
        Node::mul(Node::Const(a.clone()), e1.root().clone())
    };
    Expression {
        root: Arc::new(Node::add(scaled, e2.root().clone())),
        dim: e1.dim().max(e2.dim()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::tensor::Covector;

    const U: &str = "1/2 * ln(((x1^2+x3^2))*((x2^2+x4^2)))";
    const V: &str = "arctan((x1*x4+x2*x3)/(x3*x4-x1*x2)) + x0";

    #[test]
    fn variable_node() {
        let e = parse_expr("x0", 5).unwrap();
        assert_eq!(e.root(), &Node::Var(0));
    }

    #[test]
    fn parses_reference_functions() {
        let u = parse_expr(U, 5).unwrap();
        let expected = Node::mul(
            Node::Const(rat(1, 2)),
            Node::call(
                Func::Ln,
                Node::mul(
                    Node::add(Node::pow(Node::var(1), 2), Node::pow(Node::var(3), 2)),
                    Node::add(Node::pow(Node::var(2), 2), Node::pow(Node::var(4), 2)),
                ),
            ),
        );
        assert_eq!(u.root(), &expected);
        let v = parse_expr(V, 5).unwrap();
        match v.root() {
            Node::Add(lhs, rhs) => {
                assert!(matches!(**lhs, Node::Call(Func::Arctan, _)));
                assert_eq!(**rhs, Node::Var(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eval_exact_and_transcendental() {
        let w = parse_expr("x0", 5).unwrap();
        assert_eq!(
            w.eval(&Point::from_ints(&[1, 0, 0, 0, 0])).unwrap(),
            Number::Exact(rat(1, 1))
        );
        let u = parse_expr(U, 5).unwrap();
        let val = u.eval(&Point::from_ints(&[0, 1, 1, 1, 1])).unwrap();
        assert!((val.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn singular_denominator() {
        let v = parse_expr(V, 5).unwrap();
        // x3 x4 = x1 x2
        let err = v.eval(&Point::from_ints(&[0, 1, 1, 1, 1])).unwrap_err();
        assert!(matches!(err, ExprError::Singular(_)));
        let ln = parse_expr("ln(x0)", 1).unwrap();
        assert!(ln.eval(&Point::from_ints(&[0])).is_err());
        assert!(ln.eval(&Point::from_ints(&[-2])).is_err());
        let sq = parse_expr("sqrt(x0)", 1).unwrap();
        assert!(sq.eval(&Point::from_ints(&[-1])).is_err());
    }

    #[test]
    fn reference_partials() {
        let u = parse_expr(U, 5).unwrap();
        let v = parse_expr(V, 5).unwrap();
        let p = Point::from_ints(&[3, 2, 1, 5, -1]);
        assert_eq!(v.partial(0, &p).unwrap().to_f64(), 1.0);
        assert_eq!(u.partial(0, &p).unwrap().to_f64(), 0.0);
        let q = Point::from_ints(&[0, 1, 0, 2, 1]);
        assert!((u.partial(1, &q).unwrap().to_f64() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn differentials() {
        let w = parse_expr("x0", 5).unwrap();
        let p = Point::from_ints(&[2, 1, 3, 1, 7]);
        assert_eq!(
            w.differential(&p).unwrap(),
            Covector(vec![
                Number::Exact(rat(1, 1)),
                Number::Exact(rat(0, 1)),
                Number::Exact(rat(0, 1)),
                Number::Exact(rat(0, 1)),
                Number::Exact(rat(0, 1)),
            ])
        );
        let c = parse_expr("7/3", 5).unwrap();
        assert!(c
            .differential(&p)
            .unwrap()
            .0
            .iter()
            .all(|n| n.to_f64() == 0.0));
        let u = parse_expr(U, 5).unwrap();
        let du = u
            .differential_f64(&Point::from_ints(&[0, 1, 1, 1, 1]))
            .unwrap();
        let expected = [0.0, 0.5, 0.5, 0.5, 0.5];
        for (a, b) in du.0.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rational_expressions_stay_exact() {
        let e = parse_expr("(x0^2 - 3*x1)/x2 + x1^-2", 3).unwrap();
        assert!(e.is_rational());
        let p = Point::from_rationals(vec![rat(1, 2), rat(2, 1), rat(3, 1)]);
        // (1/4 - 6)/3 + 1/4 = -23/12 + 3/12 = -5/3
        assert_eq!(e.eval(&p).unwrap(), Number::Exact(rat(-5, 3)));
        // d/dx1: -3/3 - 2 x1^-3 = -1 - 1/4
        assert_eq!(e.partial(1, &p).unwrap(), Number::Exact(rat(-5, 4)));
    }

    #[test]
    fn out_of_range_variable_is_rejected() {
        match parse_expr("x0 + x5", 5) {
            Err(ExprError::VariableOutOfRange { index, dim, offset }) => {
                assert_eq!((index, dim, offset), (5, 5, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn point_dimension_mismatch() {
        let e = parse_expr("x0", 2).unwrap();
        assert!(matches!(
            e.eval(&Point::from_ints(&[1])),
            Err(ExprError::PointDimension { .. })
        ));
    }

    #[test]
    fn printing_round_trips_reference_functions() {
        for text in [U, V, "x0", "-3/4*x1", "x0/2/3", "1/2^2", "2*3/4", "-(-x0)"] {
            let e = parse_expr(text, 5).unwrap();
            let again = parse_expr(&e.to_string(), 5).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }

    #[test]
    fn precedence_of_literals() {
        let p = Point::from_ints(&[6]);
        let v = |t: &str| parse_expr(t, 1).unwrap().eval(&p).unwrap();
        assert_eq!(v("x0/2/3"), Number::Exact(rat(1, 1)));
        assert_eq!(v("2/3^2"), Number::Exact(rat(2, 9)));
        assert_eq!(v("-3/4*x0"), Number::Exact(rat(-9, 2)));
        assert_eq!(v("-x0^2"), Number::Exact(rat(-36, 1)));
        assert_eq!(v("0.5*x0"), Number::Exact(rat(3, 1)));
    }
}

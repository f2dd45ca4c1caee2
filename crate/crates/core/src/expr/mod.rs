//! Closed-form expressions in one complex variable `z`.
//!
//! Expressions are immutable trees with reference-counted children, so
//! clones are cheap and values can be shared across threads.  The only
//! rewriting ever applied is literal-constant folding in the smart
//! constructors (`0 + e`, `1 * e`, `2 * 3`, ...); semantic equality is
//! always decided through local orders, never through tree equality.

mod diff;
mod eval;
mod fraction;
mod mobius;
mod parse;

use std::fmt;
use std::sync::Arc;

use rug::Rational;

pub use eval::Scalar;
pub use fraction::NumerDenom;
pub use mobius::{apply_mobius, Mobius, MobiusError};
pub use parse::{parse, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The complex variable `z`.
    Var,
    Rational(Rational),
    Pi,
    I,
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, i64),
    Exp(Arc<Expr>),
    Sin(Arc<Expr>),
    Cos(Arc<Expr>),
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rational(Rational::from(n))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::Rational(r)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Expr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(self, Expr::Rational(r) if *r == 0)
    }

    pub fn is_literal_one(&self) -> bool {
        matches!(self, Expr::Rational(r) if *r == 1)
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Rational(r) => Expr::Rational(-r),
            a => Expr::Neg(Arc::new(a)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Rational(x), Expr::Rational(y)) => Expr::Rational(Rational::from(x + y)),
            _ if a.is_literal_zero() => b,
            _ if b.is_literal_zero() => a,
            _ => Expr::Add(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(a, Expr::neg(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Rational(x), Expr::Rational(y)) => Expr::Rational(Rational::from(x * y)),
            _ if a.is_literal_zero() || b.is_literal_zero() => Expr::zero(),
            _ if a.is_literal_one() => b,
            _ if b.is_literal_one() => a,
            _ => Expr::Mul(Arc::new(a), Arc::new(b)),
        }
    }

    /// Quotient `a / b`.  Panics if `b` is the literal zero; callers that
    /// accept user input go through [`parse`], which reports that case.
    pub fn div(a: Expr, b: Expr) -> Expr {
        assert!(!b.is_literal_zero(), "division by the literal 0");
        match (&a, &b) {
            (Expr::Rational(x), Expr::Rational(y)) => Expr::Rational(Rational::from(x / y)),
            _ if b.is_literal_one() => a,
            _ if a.is_literal_zero() => Expr::zero(),
            _ => Expr::Div(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn pow(a: Expr, n: i64) -> Expr {
        match (&a, n) {
            (_, 0) => Expr::one(),
            (_, 1) => a,
            (Expr::Rational(r), n) if *r != 0 || n > 0 => {
                let mut acc = Rational::from(1);
                for _ in 0..n.unsigned_abs() {
                    acc *= r;
                }
                if n < 0 {
                    acc.recip_mut();
                }
                Expr::Rational(acc)
            }
            _ => Expr::Pow(Arc::new(a), n),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        if a.is_literal_zero() {
            return Expr::one();
        }
        Expr::Exp(Arc::new(a))
    }

    pub fn sin(a: Expr) -> Expr {
        if a.is_literal_zero() {
            return Expr::zero();
        }
        Expr::Sin(Arc::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        if a.is_literal_zero() {
            return Expr::one();
        }
        Expr::Cos(Arc::new(a))
    }

    /// `1 / e`.
    pub fn reciprocal_of(e: &Expr) -> Result<Expr, ParseError> {
        if e.is_literal_zero() {
            return Err(ParseError::ReciprocalOfZero);
        }
        Ok(Expr::div(Expr::one(), e.clone()))
    }

    /// True when the expression does not mention `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Rational(_) | Expr::Pi | Expr::I => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// True when the tree contains no division and no negative power, which
    /// is how arguments of `exp`, `sin` and `cos` are kept entire.
    pub fn is_division_free(&self) -> bool {
        match self {
            Expr::Var | Expr::Rational(_) | Expr::Pi | Expr::I => true,
            Expr::Div(..) => false,
            Expr::Pow(_, n) if *n < 0 => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) => a.is_division_free(),
            Expr::Add(a, b) | Expr::Mul(a, b) => a.is_division_free() && b.is_division_free(),
        }
    }

    /// True when every division and negative power has a constant
    /// denominator, so the expression introduces no poles.  Arguments of
    /// `exp`, `sin` and `cos` must have this form.
    pub fn is_entire_form(&self) -> bool {
        match self {
            Expr::Var | Expr::Rational(_) | Expr::Pi | Expr::I => true,
            Expr::Div(a, b) => b.is_constant() && a.is_entire_form(),
            Expr::Pow(a, n) if *n < 0 => a.is_constant(),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) => a.is_entire_form(),
            Expr::Add(a, b) | Expr::Mul(a, b) => a.is_entire_form() && b.is_entire_form(),
        }
    }

    /// Replace `z` by `sub` everywhere.
    pub fn substitute(&self, sub: &Expr) -> Expr {
        match self {
            Expr::Var => sub.clone(),
            Expr::Rational(_) | Expr::Pi | Expr::I => self.clone(),
            Expr::Neg(a) => Expr::neg(a.substitute(sub)),
            Expr::Add(a, b) => Expr::add(a.substitute(sub), b.substitute(sub)),
            Expr::Mul(a, b) => Expr::mul(a.substitute(sub), b.substitute(sub)),
            Expr::Div(a, b) => Expr::div(a.substitute(sub), b.substitute(sub)),
            Expr::Pow(a, n) => Expr::pow(a.substitute(sub), *n),
            Expr::Exp(a) => Expr::exp(a.substitute(sub)),
            Expr::Sin(a) => Expr::sin(a.substitute(sub)),
            Expr::Cos(a) => Expr::cos(a.substitute(sub)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Var | Expr::Rational(_) | Expr::Pi | Expr::I => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Rational(r) if *r.denom() != 1 => 2,
            Expr::Rational(r) if *r < 0 => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::div(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints in the input grammar, so `parse(&e.to_string())` rebuilds `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "z"),
            Expr::Rational(r) => {
                if *r.denom() == 1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Expr::Pi => write!(f, "pi"),
            Expr::I => write!(f, "i"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 3)
            }
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                match &**b {
                    Expr::Neg(inner) => {
                        write!(f, " - ")?;
                        write_child(f, inner, 2)
                    }
                    _ => {
                        write!(f, " + ")?;
                        write_child(f, b, 2)
                    }
                }
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "/")?;
                write_child(f, b, 3)
            }
            Expr::Pow(a, n) => {
                write_child(f, a, 5)?;
                write!(f, "^{n}")
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

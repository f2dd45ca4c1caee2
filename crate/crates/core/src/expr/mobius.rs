use thiserror::Error;

use super::Expr;
use crate::constants::{ConstError, SymConst, ZeroTest};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MobiusError {
    #[error("coefficient {0} is not a constant")]
    NotConstant(String),
    #[error("determinant a*d - b*c is zero")]
    SingularDeterminant,
    #[error("determinant a*d - b*c could not be certified nonzero")]
    DeterminantUndecided,
    #[error("the map sends {0} to the constant infinity")]
    ConstantInfinity(String),
}

/// The map `w -> (a*w + b)/(c*w + d)` with certified nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    a: Expr,
    b: Expr,
    c: Expr,
    d: Expr,
}

impl Mobius {
    pub fn new(a: Expr, b: Expr, c: Expr, d: Expr) -> Result<Mobius, MobiusError> {
        let k = |e: &Expr| {
            SymConst::from_expr(e).map_err(|err| match err {
                ConstError::NotConstant => MobiusError::NotConstant(e.to_string()),
                _ => MobiusError::DeterminantUndecided,
            })
        };
        let det = k(&a)?.mul(&k(&d)?).sub(&k(&b)?.mul(&k(&c)?));
        match det.zero_test() {
            ZeroTest::NonZero => Ok(Mobius { a, b, c, d }),
            ZeroTest::Zero => Err(MobiusError::SingularDeterminant),
            ZeroTest::Unknown => Err(MobiusError::DeterminantUndecided),
        }
    }

    pub fn identity() -> Mobius {
        Mobius { a: Expr::one(), b: Expr::zero(), c: Expr::zero(), d: Expr::one() }
    }

    pub fn inversion() -> Mobius {
        Mobius { a: Expr::zero(), b: Expr::one(), c: Expr::one(), d: Expr::zero() }
    }

    pub fn translation(t: Expr) -> Result<Mobius, MobiusError> {
        Mobius::new(Expr::one(), t, Expr::zero(), Expr::one())
    }

    pub fn coefficients(&self) -> [&Expr; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `self` after `inner`, i.e. `w -> self(inner(w))`.
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        let m = |x: &Expr, y: &Expr| Expr::mul(x.clone(), y.clone());
        // product of nonsingular matrices is nonsingular
        Mobius {
            a: Expr::add(m(&self.a, &inner.a), m(&self.b, &inner.c)),
            b: Expr::add(m(&self.a, &inner.b), m(&self.b, &inner.d)),
            c: Expr::add(m(&self.c, &inner.a), m(&self.d, &inner.c)),
            d: Expr::add(m(&self.c, &inner.b), m(&self.d, &inner.d)),
        }
    }

    /// `(a*e + b)/(c*e + d)`; fails when the denominator folds to the literal 0.
    pub fn apply(&self, e: &Expr) -> Result<Expr, MobiusError> {
        let num = Expr::add(Expr::mul(self.a.clone(), e.clone()), self.b.clone());
        if self.c.is_literal_zero() {
            if self.d.is_literal_one() {
                return Ok(num);
            }
            return Ok(Expr::div(num, self.d.clone()));
        }
        let den = Expr::add(Expr::mul(self.c.clone(), e.clone()), self.d.clone());
        if den.is_literal_zero() {
            return Err(MobiusError::ConstantInfinity(e.to_string()));
        }
        Ok(Expr::div(num, den))
    }
}

pub fn apply_mobius(m: &Mobius, e: &Expr) -> Result<Expr, MobiusError> {
    m.apply(e)
}

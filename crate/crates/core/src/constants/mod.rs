//! Certified constants with a three-valued zero test.

mod ball;
mod normal;

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;
use thiserror::Error;

pub use ball::{Ball, RealBall};
use normal::{Gauss, Poly};

use crate::expr::Expr;

/// Precisions tried by [`zero_test`] before giving up.
pub const ZERO_TEST_SCHEDULE: [u32; 3] = [64, 256, 1024];

/// Precision used when a constant leaves the exact normal form.
pub const APPROX_PRECISION: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Unknown,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstError {
    #[error("expression depends on z")]
    NotConstant,
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor could not be certified nonzero")]
    DivisorUndecided,
}

#[derive(Clone, Debug)]
enum Repr {
    /// `num / prod(atom^k)`, every atom certified nonzero.
    Exact { num: Poly, den: BTreeMap<Poly, u32> },
    /// A point known only through an enclosure.
    Approx(Ball),
}

/// A complex constant, either in exact symbolic form or as a ball.
#[derive(Clone, Debug)]
pub struct SymConst {
    repr: Repr,
}

impl SymConst {
    fn exact(num: Poly) -> SymConst {
        SymConst { repr: Repr::Exact { num, den: BTreeMap::new() } }
    }

    pub fn zero() -> SymConst {
        SymConst::exact(Poly::zero())
    }

    pub fn one() -> SymConst {
        SymConst::int(1)
    }

    pub fn int(n: i64) -> SymConst {
        SymConst::exact(Poly::int(n))
    }

    pub fn rational(r: Rational) -> SymConst {
        SymConst::exact(Poly::rational(r))
    }

    /// `re + im*i`.
    pub fn gaussian(re: Rational, im: Rational) -> SymConst {
        SymConst::exact(Poly::constant(Gauss::new(re, im)))
    }

    pub fn pi() -> SymConst {
        SymConst::exact(Poly::pi())
    }

    pub fn i() -> SymConst {
        SymConst::exact(Poly::i())
    }

    /// A constant known only through `ball`.
    pub fn approx(ball: Ball) -> SymConst {
        SymConst { repr: Repr::Approx(ball) }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    /// Exact Gaussian rational value, if the constant is one.
    pub fn as_gaussian(&self) -> Option<(Rational, Rational)> {
        match &self.repr {
            Repr::Exact { num, den } if den.is_empty() => num.as_gauss().map(|g| (g.re, g.im)),
            _ => None,
        }
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact { num, .. } if num.is_zero())
    }

    pub fn from_expr(e: &Expr) -> Result<SymConst, ConstError> {
        Ok(match e {
            Expr::Var => return Err(ConstError::NotConstant),
            Expr::Rational(r) => SymConst::rational(r.clone()),
            Expr::Pi => SymConst::pi(),
            Expr::I => SymConst::i(),
            Expr::Neg(a) => SymConst::from_expr(a)?.neg(),
            Expr::Add(a, b) => SymConst::from_expr(a)?.add(&SymConst::from_expr(b)?),
            Expr::Mul(a, b) => SymConst::from_expr(a)?.mul(&SymConst::from_expr(b)?),
            Expr::Div(a, b) => SymConst::from_expr(a)?.div(&SymConst::from_expr(b)?)?,
            Expr::Pow(a, n) => SymConst::from_expr(a)?.powi(*n)?,
            Expr::Exp(a) => SymConst::from_expr(a)?.exp(),
            Expr::Sin(a) => SymConst::from_expr(a)?.sin(),
            Expr::Cos(a) => SymConst::from_expr(a)?.cos(),
        })
    }

    /// Enclosure of the exact value at `prec` bits.
    pub fn enclose(&self, prec: u32) -> Ball {
        match &self.repr {
            Repr::Exact { num, den } => {
                let mut v = num.ball(prec);
                for (atom, k) in den {
                    let d = crate::expr::Scalar::powi(&atom.ball(prec), *k as i64);
                    v = v.div(&d);
                }
                v
            }
            Repr::Approx(b) => b.clone(),
        }
    }

    /// Working precision of an approximate constant.
    fn approx_prec(&self) -> Option<u32> {
        match &self.repr {
            Repr::Approx(b) => Some(b.prec()),
            Repr::Exact { .. } => None,
        }
    }

    fn ball_binop(&self, o: &SymConst, op: impl Fn(&Ball, &Ball) -> Ball) -> SymConst {
        let prec = self.approx_prec().into_iter().chain(o.approx_prec()).max().unwrap_or(APPROX_PRECISION);
        SymConst::approx(op(&self.enclose(prec), &o.enclose(prec)))
    }

    pub fn neg(&self) -> SymConst {
        match &self.repr {
            Repr::Exact { num, den } => SymConst { repr: Repr::Exact { num: num.neg(), den: den.clone() } },
            Repr::Approx(b) => SymConst::approx(b.neg()),
        }
    }

    pub fn add(&self, o: &SymConst) -> SymConst {
        let (Repr::Exact { num: an, den: ad }, Repr::Exact { num: bn, den: bd }) = (&self.repr, &o.repr) else {
            return self.ball_binop(o, Ball::add);
        };
        if an.is_zero() {
            return o.clone();
        }
        if bn.is_zero() {
            return self.clone();
        }
        if ad == bd {
            return normalize(an.add(bn), ad.clone());
        }
        let mut den = ad.clone();
        for (atom, k) in bd {
            let e = den.entry(atom.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        let lift = |num: &Poly, own: &BTreeMap<Poly, u32>| {
            let mut out = num.clone();
            for (atom, k) in &den {
                let missing = k - own.get(atom).copied().unwrap_or(0);
                if missing > 0 {
                    out = out.mul(&atom.pow(missing));
                }
            }
            out
        };
        let num = lift(an, ad).add(&lift(bn, bd));
        normalize(num, den)
    }

    pub fn sub(&self, o: &SymConst) -> SymConst {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SymConst) -> SymConst {
        let (Repr::Exact { num: an, den: ad }, Repr::Exact { num: bn, den: bd }) = (&self.repr, &o.repr) else {
            return self.ball_binop(o, Ball::mul);
        };
        let mut den = ad.clone();
        for (atom, k) in bd {
            *den.entry(atom.clone()).or_insert(0) += k;
        }
        normalize(an.mul(bn), den)
    }

    pub fn recip(&self) -> Result<SymConst, ConstError> {
        match &self.repr {
            Repr::Approx(b) => {
                if b.excludes_zero() {
                    Ok(SymConst::approx(b.recip()))
                } else {
                    Err(ConstError::DivisorUndecided)
                }
            }
            Repr::Exact { num, den } => {
                let mut out = den.iter().fold(Poly::int(1), |acc, (atom, k)| acc.mul(&atom.pow(*k)));
                let mut new_den = BTreeMap::new();
                if num.is_zero() {
                    return Err(ConstError::DivisionByZero);
                } else if let Some(inv) = num.monomial_recip() {
                    out = out.mul(&inv);
                } else {
                    match poly_zero_test(num) {
                        ZeroTest::NonZero => {
                            new_den.insert(num.clone(), 1);
                        }
                        ZeroTest::Zero => return Err(ConstError::DivisionByZero),
                        ZeroTest::Unknown => return Err(ConstError::DivisorUndecided),
                    }
                }
                Ok(SymConst { repr: Repr::Exact { num: out, den: new_den } })
            }
        }
    }

    pub fn div(&self, o: &SymConst) -> Result<SymConst, ConstError> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powi(&self, n: i64) -> Result<SymConst, ConstError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = SymConst::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    fn unary(&self, exact: impl Fn(&Poly) -> Poly, ball: impl Fn(&Ball) -> Ball) -> SymConst {
        match &self.repr {
            Repr::Exact { num, den } if den.is_empty() => SymConst::exact(exact(num)),
            _ => {
                let prec = self.approx_prec().unwrap_or(APPROX_PRECISION);
                SymConst::approx(ball(&self.enclose(prec)))
            }
        }
    }

    pub fn exp(&self) -> SymConst {
        self.unary(Poly::exp, Ball::exp)
    }

    pub fn sin(&self) -> SymConst {
        self.unary(Poly::sin, Ball::sin)
    }

    pub fn cos(&self) -> SymConst {
        self.unary(Poly::cos, Ball::cos)
    }

    pub fn zero_test(&self) -> ZeroTest {
        match &self.repr {
            // denominator atoms are certified nonzero
            Repr::Exact { num, .. } => poly_zero_test(num),
            Repr::Approx(b) => {
                if b.excludes_zero() {
                    ZeroTest::NonZero
                } else {
                    ZeroTest::Unknown
                }
            }
        }
    }

    /// Whether two constants denote the same point: exact difference zero,
    /// or overlapping enclosures within `tol` when either is approximate.
    pub fn same_point(&self, o: &SymConst, tol: f64) -> bool {
        if self.is_exact() && o.is_exact() {
            return self.sub(o).zero_test() == ZeroTest::Zero;
        }
        let prec = self.approx_prec().into_iter().chain(o.approx_prec()).max().unwrap_or(APPROX_PRECISION);
        let d = self.enclose(prec).sub(&o.enclose(prec));
        d.abs_lower().to_f64() <= tol
    }

    /// Double-precision midpoint.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        self.enclose(128).mid_f64()
    }
}

fn normalize(num: Poly, den: BTreeMap<Poly, u32>) -> SymConst {
    if num.is_zero() {
        return SymConst::zero();
    }
    let mut num = num;
    let mut den = den;
    // cancel atoms that divide the numerator exactly as a whole power
    let atoms: Vec<Poly> = den.keys().cloned().collect();
    for atom in atoms {
        while den.get(&atom).copied().unwrap_or(0) > 0 {
            if num == atom {
                num = Poly::int(1);
            } else if num == atom.neg() {
                num = Poly::int(-1);
            } else {
                break;
            }
            let k = den.get_mut(&atom).expect("present");
            *k -= 1;
            if *k == 0 {
                den.remove(&atom);
            }
        }
    }
    SymConst { repr: Repr::Exact { num, den } }
}

fn poly_zero_test(p: &Poly) -> ZeroTest {
    if p.is_zero() {
        return ZeroTest::Zero;
    }
    if p.is_single_term() {
        return ZeroTest::NonZero;
    }
    for prec in ZERO_TEST_SCHEDULE {
        if p.ball(prec).excludes_zero() {
            return ZeroTest::NonZero;
        }
    }
    ZeroTest::Unknown
}

pub fn zero_test(c: &SymConst) -> ZeroTest {
    c.zero_test()
}

pub fn enclose(c: &SymConst, precision_bits: u32) -> Ball {
    c.enclose(precision_bits.max(16))
}

impl From<Rational> for SymConst {
    fn from(r: Rational) -> SymConst {
        SymConst::rational(r)
    }
}

impl fmt::Display for SymConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact { num, den } if den.is_empty() => write!(f, "{num}"),
            Repr::Exact { num, den } => {
                write!(f, "({num})/(")?;
                for (n, (atom, k)) in den.iter().enumerate() {
                    if n > 0 {
                        write!(f, "*")?;
                    }
                    if *k == 1 {
                        write!(f, "({atom})")?;
                    } else {
                        write!(f, "({atom})^{k}")?;
                    }
                }
                write!(f, ")")
            }
            Repr::Approx(b) => write!(f, "~{}", b.mid_string(30)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn c(s: &str) -> SymConst {
        SymConst::from_expr(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn zero_test_examples() {
        assert_eq!(zero_test(&c("sin(2*pi)")), ZeroTest::Zero);
        assert_eq!(zero_test(&c("exp(pi^2)")), ZeroTest::NonZero);
        assert_eq!(zero_test(&c("1 - exp(1)")), ZeroTest::NonZero);
        assert_eq!(zero_test(&c("sin(pi/4) - cos(pi/4)")), ZeroTest::Unknown);
    }

    #[test]
    fn exact_rules() {
        assert_eq!(zero_test(&c("exp(0) - 1")), ZeroTest::Zero);
        assert_eq!(zero_test(&c("cos(3*pi) + 1")), ZeroTest::Zero);
        assert_eq!(zero_test(&c("(1 + pi)/(1 + pi) - 1")), ZeroTest::Zero);
        assert_eq!(zero_test(&c("1/(1 + exp(1)) - 1/(1 + exp(1))")), ZeroTest::Zero);
        assert_eq!(zero_test(&c("2/3 - 4/6")), ZeroTest::Zero);
    }

    #[test]
    fn division_by_zero_is_rejected() {
        let e = parse("1/sin(pi)").unwrap();
        assert_eq!(SymConst::from_expr(&e).unwrap_err(), ConstError::DivisionByZero);
        let e = parse("1/(sin(pi/4) - cos(pi/4))").unwrap();
        assert_eq!(SymConst::from_expr(&e).unwrap_err(), ConstError::DivisorUndecided);
        assert_eq!(SymConst::from_expr(&parse("z").unwrap()).unwrap_err(), ConstError::NotConstant);
    }

    #[test]
    fn enclose_examples() {
        let b = enclose(&c("3/2"), 64);
        assert_eq!(b.mid_f64().re, 1.5);
        assert_eq!(b.radius().to_f64(), 0.0);

        let b = enclose(&c("pi"), 64);
        assert!((b.mid_f64().re - std::f64::consts::PI).abs() < 1e-15);
        assert!(b.radius().to_f64() <= 2f64.powi(-60));

        let b = enclose(&c("exp(pi^2)"), 64);
        assert!((b.mid_f64().re - 19_333.688_568_2).abs() < 1e-3);
        assert!(b.radius().to_f64() < 1e-9);
    }

    #[test]
    fn radius_shrinks_with_precision() {
        for s in ["pi", "exp(pi^2)", "sin(1)", "1/(1 + exp(1))", "cos(pi/7)*exp(i)"] {
            let k = c(s);
            assert!(k.enclose(128).radius() <= k.enclose(32).radius(), "{s}");
        }
    }

    #[test]
    fn approximate_constants_mix_with_exact_ones() {
        let a = SymConst::approx(Ball::from_real(&Rational::from((1, 3)), 256));
        let s = a.add(&SymConst::rational(Rational::from((2, 3))));
        assert!(!s.is_exact());
        assert!(s.same_point(&SymConst::one(), 1e-60));
        assert_eq!(s.sub(&SymConst::one()).zero_test(), ZeroTest::Unknown);
    }
}
